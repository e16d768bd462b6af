//! Sequential measurements and value assignment to the six contexts of the
//! square.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::epistemic::EpistemicState;
use crate::error::{Error, Result};
use crate::measurement::{draw, MeasurementSetting, Model, NonLocalSetting, Outcome, Table};
use crate::model::{Axis, Observable, Sign};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub setting: MeasurementSetting,
    pub outcome: Outcome,
    /// Probability of this outcome given the previous step.
    pub probability: Rational,
    pub post: EpistemicState,
}

/// One outcome path of a sequential measurement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub initial: EpistemicState,
    pub steps: Vec<Step>,
    pub probability: Rational,
}

impl Trace {
    pub fn settings(&self) -> Vec<MeasurementSetting> {
        self.steps.iter().map(|s| s.setting).collect()
    }

    pub fn outcomes(&self) -> Vec<Outcome> {
        self.steps.iter().map(|s| s.outcome).collect()
    }

    /// State after the last step (the initial state for an empty trace).
    pub fn final_state(&self) -> &EpistemicState {
        self.steps.last().map_or(&self.initial, |s| &s.post)
    }

    /// Every value the trace reads, step by step, as `(step, observable, value)`.
    pub fn readings(&self) -> Vec<(usize, Observable, Sign)> {
        self.steps
            .iter()
            .enumerate()
            .flat_map(|(i, step)| {
                step.setting
                    .revealed(step.outcome)
                    .expect("trace outcomes belong to their settings")
                    .into_iter()
                    .map(move |(obs, value)| (i, obs, value))
            })
            .collect()
    }

    /// First reading that contradicts an earlier reading of the same
    /// observable.
    pub fn first_inconsistency(&self) -> Option<Inconsistency> {
        let mut seen: BTreeMap<Observable, (usize, Sign)> = BTreeMap::new();
        for (step, obs, value) in self.readings() {
            match seen.get(&obs) {
                Some(&(first_step, first)) if first != value => {
                    return Some(Inconsistency {
                        observable: obs,
                        first_step,
                        first,
                        step,
                        later: value,
                    })
                }
                Some(_) => {}
                None => {
                    seen.insert(obs, (step, value));
                }
            }
        }
        None
    }
}

/// A repeated observable whose value changed along a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inconsistency {
    pub observable: Observable,
    pub first_step: usize,
    pub first: Sign,
    pub step: usize,
    pub later: Sign,
}

impl Model {
    /// All outcome paths of `settings` applied in order, with exact path
    /// probabilities. Paths are listed depth-first in outcome column order.
    pub fn run_exact(
        &self,
        initial: &EpistemicState,
        settings: &[MeasurementSetting],
    ) -> Result<Vec<Trace>> {
        let mut traces = vec![Trace {
            initial: initial.clone(),
            steps: Vec::with_capacity(settings.len()),
            probability: Rational::ONE,
        }];
        for &setting in settings {
            let mut next = Vec::with_capacity(traces.len());
            for trace in traces {
                let branches = self.apply(setting, trace.final_state())?;
                for branch in branches {
                    let mut extended = trace.clone();
                    extended.probability = trace.probability * branch.probability;
                    extended.steps.push(Step {
                        setting,
                        outcome: branch.outcome,
                        probability: branch.probability,
                        post: branch.post,
                    });
                    next.push(extended);
                }
            }
            traces = next;
        }
        Ok(traces)
    }

    /// One randomly drawn path; the generator is owned by the caller.
    pub fn run_sampled<R: Rng + ?Sized>(
        &self,
        initial: &EpistemicState,
        settings: &[MeasurementSetting],
        rng: &mut R,
    ) -> Result<Trace> {
        let mut trace = Trace {
            initial: initial.clone(),
            steps: Vec::with_capacity(settings.len()),
            probability: Rational::ONE,
        };
        for &setting in settings {
            let branch = draw(self.apply(setting, trace.final_state())?, rng);
            trace.probability = trace.probability * branch.probability;
            trace.steps.push(Step {
                setting,
                outcome: branch.outcome,
                probability: branch.probability,
                post: branch.post,
            });
        }
        Ok(trace)
    }
}

pub fn run_exact(initial: &EpistemicState, settings: &[MeasurementSetting]) -> Result<Vec<Trace>> {
    Model::STANDARD.run_exact(initial, settings)
}

/// Sampled run with a ChaCha8 generator seeded from `seed`.
pub fn run_sampled(
    initial: &EpistemicState,
    settings: &[MeasurementSetting],
    seed: u64,
) -> Result<Trace> {
    Model::STANDARD.run_sampled(initial, settings, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// The rows and columns of the square.
///
/// ```text
///          C1      C2      C3
///   R1     X1      X2      X1X2
///   R2     Y2      Y1      Y1Y2
///   R3     X1Y2    Y1X2    Z1Z2
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContextId {
    R1,
    R2,
    R3,
    C1,
    C2,
    C3,
}

/// Measurements sanctioned for reading a context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextFamily {
    /// A single local pair measurement.
    Local(MeasurementSetting),
    /// Any sequence of settings from one non-local table.
    NonLocal(Table),
}

impl ContextId {
    pub const ALL: [ContextId; 6] = [
        ContextId::R1,
        ContextId::R2,
        ContextId::R3,
        ContextId::C1,
        ContextId::C2,
        ContextId::C3,
    ];

    pub fn observables(self) -> [Observable; 3] {
        use Observable as O;
        match self {
            ContextId::R1 => [O::X1, O::X2, O::XX],
            ContextId::R2 => [O::Y1, O::Y2, O::YY],
            ContextId::R3 => [O::XY, O::YX, O::ZZ],
            ContextId::C1 => [O::X1, O::Y2, O::XY],
            ContextId::C2 => [O::Y1, O::X2, O::YX],
            ContextId::C3 => [O::XX, O::YY, O::ZZ],
        }
    }

    pub fn family(self) -> ContextFamily {
        use MeasurementSetting::LocalPair;
        match self {
            ContextId::R1 => ContextFamily::Local(LocalPair(Axis::X, Axis::X)),
            ContextId::R2 => ContextFamily::Local(LocalPair(Axis::Y, Axis::Y)),
            ContextId::C1 => ContextFamily::Local(LocalPair(Axis::X, Axis::Y)),
            ContextId::C2 => ContextFamily::Local(LocalPair(Axis::Y, Axis::X)),
            ContextId::C3 => ContextFamily::NonLocal(Table::Direct),
            ContextId::R3 => ContextFamily::NonLocal(Table::Swapped),
        }
    }

    pub fn admits(self, setting: MeasurementSetting) -> bool {
        match (self.family(), setting) {
            (ContextFamily::Local(s), _) => s == setting,
            (ContextFamily::NonLocal(table), MeasurementSetting::NonLocal(n)) => n.table() == table,
            _ => false,
        }
    }

    /// Settings a context may draw from.
    pub fn family_settings(self) -> Vec<MeasurementSetting> {
        match self.family() {
            ContextFamily::Local(s) => vec![s],
            ContextFamily::NonLocal(table) => table
                .settings()
                .into_iter()
                .map(MeasurementSetting::NonLocal)
                .collect(),
        }
    }

    /// Product the square's algebra requires: `-1` for C3 only.
    pub fn required_product(self) -> Sign {
        if self == ContextId::C3 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// Shortest sequence reading all three observables: the local setting,
    /// or the first two settings of the table.
    pub fn default_order(self) -> Vec<MeasurementSetting> {
        let mut settings = self.family_settings();
        settings.truncate(2);
        settings
    }

    pub fn literal(self) -> &'static str {
        match self {
            ContextId::R1 => "R1",
            ContextId::R2 => "R2",
            ContextId::R3 => "R3",
            ContextId::C1 => "C1",
            ContextId::C2 => "C2",
            ContextId::C3 => "C3",
        }
    }
}

impl fmt::Display for ContextId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.literal())
    }
}

impl FromStr for ContextId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ContextId::ALL
            .into_iter()
            .find(|c| c.literal().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "expected one of R1, R2, R3, C1, C2, C3".into(),
            })
    }
}

impl Serialize for ContextId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.literal())
    }
}

/// Values a trace assigns to a context's three observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValueAssignment {
    pub context: ContextId,
    /// In the order of [`ContextId::observables`].
    pub values: [(Observable, Sign); 3],
}

impl ValueAssignment {
    pub fn get(&self, observable: Observable) -> Option<Sign> {
        self.values
            .iter()
            .find(|(o, _)| *o == observable)
            .map(|(_, v)| *v)
    }
}

impl Serialize for ValueAssignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        for (obs, value) in &self.values {
            map.serialize_entry(&obs.to_string(), value)?;
        }
        map.end()
    }
}

/// Reads the context's three values off a trace.
///
/// Each value is taken from the first step that reveals it; any later step
/// that reads the same observable differently is an error rather than being
/// silently ignored.
pub fn assign_values(context: ContextId, trace: &Trace) -> Result<ValueAssignment> {
    if trace.steps.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if let Some(step) = trace.steps.iter().find(|s| !context.admits(s.setting)) {
        return Err(Error::OutsideContext {
            context,
            setting: step.setting.to_string(),
        });
    }
    if let Some(bad) = trace.first_inconsistency() {
        return Err(Error::Inconsistent {
            observable: bad.observable,
            first: bad.first,
            later: bad.later,
            step: bad.step,
        });
    }
    let readings = trace.readings();
    let value_of = |observable: Observable| {
        readings
            .iter()
            .find(|(_, o, _)| *o == observable)
            .map(|(_, _, v)| *v)
            .ok_or(Error::Unmeasured {
                context,
                observable,
            })
    };
    let [a, b, c] = context.observables();
    Ok(ValueAssignment {
        context,
        values: [(a, value_of(a)?), (b, value_of(b)?), (c, value_of(c)?)],
    })
}

pub fn context_product(assignment: &ValueAssignment) -> Sign {
    assignment.values.iter().map(|(_, v)| *v).product()
}

/// Two-setting orders of one non-local table: the 6 ordered pairs of
/// distinct settings.
pub fn table_pair_orders(table: Table) -> Vec<[NonLocalSetting; 2]> {
    let settings = table.settings();
    settings
        .iter()
        .flat_map(|&a| {
            settings
                .iter()
                .filter(move |&&b| b != a)
                .map(move |&b| [a, b])
        })
        .collect()
}
