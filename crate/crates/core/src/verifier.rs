//! Exhaustive checks of the model against the structure of the square.
//!
//! Every sweep enumerates all 64 point initial states. Work is spread over a
//! rayon pool of the requested size; results are collected in enumeration
//! order (initial-state index, then lexicographic setting sequence), so
//! reports are byte-identical for any worker count.
//!
//! A note on sequence length: every post-state of a table family is a fixed
//! point of every setting in that family, so after the first step a
//! single-family sequence never changes state again. Length 2 therefore
//! decides repeatability; the sweeps default to length 4 anyway.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::epistemic::{canonical_state, point_state, CanonicalStateName};
use crate::error::{Error, Result};
use crate::measurement::{
    outcome_of, MeasurementSetting, Model, NonLocalSetting, PostStateTables, Table,
};
use crate::model::{JointOnticState, Observable, Sign};
use crate::quantum::verify_quantum_square;
use crate::rational::Rational;
use crate::sequences::{
    assign_values, context_product, table_pair_orders, ContextFamily, ContextId,
};

/// Noncontextual bound on the witness value. It comes from the
/// contextuality-inequality literature and is not derived by this crate.
pub const NONCONTEXTUAL_BOUND: i32 = 4;

pub const BOUND_PROVENANCE: &str =
    "external constant: noncontextual bound of the Mermin-Peres contextuality inequality, taken from the literature";

/// Default sequence length cap for repeatability sweeps.
pub const DEFAULT_MAX_LEN: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// State literal or canonical name the run started from.
    pub initial: String,
    pub sequence: Vec<MeasurementSetting>,
    pub observable: Option<Observable>,
    pub values: Vec<Sign>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub universe: String,
    pub universe_size: u64,
    pub pass: bool,
    pub counterexamples: Vec<Counterexample>,
    /// Wall-clock time; left empty unless timing was requested so that
    /// reports stay reproducible byte for byte.
    pub runtime_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(
        check: impl Into<String>,
        universe: impl Into<String>,
        universe_size: u64,
        counterexamples: Vec<Counterexample>,
    ) -> Self {
        VerificationReport {
            check: check.into(),
            universe: universe.into(),
            universe_size,
            pass: counterexamples.is_empty(),
            counterexamples,
            runtime_ms: None,
        }
    }
}

/// Per-context setting orders for the two non-local contexts. The local
/// contexts each have exactly one setting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextOrders {
    /// Order for C3, drawn from the direct table.
    pub direct: Vec<NonLocalSetting>,
    /// Order for R3, drawn from the swapped table.
    pub swapped: Vec<NonLocalSetting>,
}

impl ContextOrders {
    pub fn new(direct: Vec<NonLocalSetting>, swapped: Vec<NonLocalSetting>) -> Result<Self> {
        for (order, table, context) in [
            (&direct, Table::Direct, ContextId::C3),
            (&swapped, Table::Swapped, ContextId::R3),
        ] {
            if order.is_empty() {
                return Err(Error::EmptyTrace);
            }
            if let Some(bad) = order.iter().find(|s| s.table() != table) {
                return Err(Error::OutsideContext {
                    context,
                    setting: bad.to_string(),
                });
            }
        }
        Ok(ContextOrders { direct, swapped })
    }

    /// All 6 × 6 combinations of two-setting orders.
    pub fn all_pairs() -> Vec<ContextOrders> {
        let direct = table_pair_orders(Table::Direct);
        let swapped = table_pair_orders(Table::Swapped);
        direct
            .iter()
            .flat_map(|d| {
                swapped.iter().map(move |s| ContextOrders {
                    direct: d.to_vec(),
                    swapped: s.to_vec(),
                })
            })
            .collect()
    }

    fn settings_for(&self, context: ContextId) -> Vec<MeasurementSetting> {
        match context.family() {
            ContextFamily::Local(s) => vec![s],
            ContextFamily::NonLocal(Table::Direct) => self
                .direct
                .iter()
                .copied()
                .map(MeasurementSetting::NonLocal)
                .collect(),
            ContextFamily::NonLocal(Table::Swapped) => self
                .swapped
                .iter()
                .copied()
                .map(MeasurementSetting::NonLocal)
                .collect(),
        }
    }
}

impl Default for ContextOrders {
    fn default() -> Self {
        let first = |table: Table| table_pair_orders(table)[0].to_vec();
        ContextOrders {
            direct: first(Table::Direct),
            swapped: first(Table::Swapped),
        }
    }
}

/// Context products for one preparation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareResult {
    pub initial: JointOnticState,
    pub orders: ContextOrders,
    pub products: BTreeMap<ContextId, Sign>,
    pub witness_value: i32,
}

impl SquareResult {
    /// Products in `R1, R2, R3, C1, C2, C3` order.
    pub fn signature(&self) -> [Sign; 6] {
        ContextId::ALL.map(|c| self.products[&c])
    }
}

/// `sum of R1, R2, R3, C1, C2 products - C3 product`.
pub fn witness_value(products: &BTreeMap<ContextId, Sign>) -> i32 {
    ContextId::ALL
        .into_iter()
        .map(|c| {
            let p = products.get(&c).map_or(0, |s| s.to_i32());
            if c == ContextId::C3 {
                -p
            } else {
                p
            }
        })
        .sum()
}

/// Witness values compared against a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessSummary {
    pub preparations: u64,
    pub min: i32,
    pub max: i32,
    pub state_independent: bool,
    pub bound: i32,
    pub bound_provenance: &'static str,
    pub violates_bound: bool,
}

/// Runs the exhaustive sweeps with a given model and worker count.
#[derive(Clone, Copy, Debug)]
pub struct Verifier {
    pub model: Model,
    pub workers: usize,
    pub timings: bool,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            model: Model::STANDARD,
            workers: 1,
            timings: false,
        }
    }
}

impl Verifier {
    pub fn new(model: Model) -> Self {
        Verifier {
            model,
            ..Verifier::default()
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_timings(mut self, timings: bool) -> Self {
        self.timings = timings;
        self
    }

    /// Order-preserving parallel map over the given items.
    fn par_map<I, T, F>(&self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .expect("thread pool");
        pool.install(|| items.par_iter().map(f).collect())
    }

    fn timed(&self, f: impl FnOnce() -> VerificationReport) -> VerificationReport {
        let start = Instant::now();
        let mut report = f();
        if self.timings {
            report.runtime_ms = Some(start.elapsed().as_millis() as u64);
        }
        report
    }

    /// Runs every sequence of `family` members of length `2..=max_len` from
    /// every point state and requires repeated observables to keep their
    /// value on every outcome path. Also requires the first step of each
    /// path to be faithful to the initial ontic state.
    pub fn check_repeatability(
        &self,
        family: &[MeasurementSetting],
        max_len: usize,
    ) -> Result<VerificationReport> {
        if max_len < 2 {
            return Err(Error::LengthCapTooSmall(max_len));
        }
        if family.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if let Some(s) = family.iter().find(|s| !s.is_joint()) {
            return Err(Error::SpaceMismatch {
                expected: crate::epistemic::Space::Joint,
                found: s.space(),
            });
        }
        let sequences = sequences_up_to(family, max_len);
        let initials: Vec<JointOnticState> = JointOnticState::all().collect();
        let model = self.model;
        Ok(self.timed(|| {
            let found = self.par_map(&initials, |&w| {
                let start = point_state(w);
                let mut out = Vec::new();
                for seq in &sequences {
                    let traces = model.run_exact(&start, seq).expect("joint settings on a joint state");
                    for trace in traces {
                        let step0 = &trace.steps[0];
                        if step0.outcome != outcome_of(step0.setting, w) {
                            out.push(Counterexample {
                                initial: w.to_string(),
                                sequence: seq.clone(),
                                observable: None,
                                values: vec![],
                                detail: format!(
                                    "first outcome {} differs from faithful outcome {}",
                                    step0.outcome,
                                    outcome_of(step0.setting, w)
                                ),
                            });
                            break;
                        }
                        if let Some(bad) = trace.first_inconsistency() {
                            let path: Vec<String> = trace.outcomes().iter().map(|o| o.to_string()).collect();
                            out.push(Counterexample {
                                initial: w.to_string(),
                                sequence: seq.clone(),
                                observable: Some(bad.observable),
                                values: vec![bad.first, bad.later],
                                detail: format!(
                                    "{} read {} at step {} and {} at step {} on outcome path {} (probability {})",
                                    bad.observable,
                                    bad.first,
                                    bad.first_step + 1,
                                    bad.later,
                                    bad.step + 1,
                                    path.join(" "),
                                    trace.probability
                                ),
                            });
                            break;
                        }
                    }
                }
                out
            });
            let names: Vec<String> = family.iter().map(|s| s.to_string()).collect();
            VerificationReport::new(
                format!("repeatability {{{}}}", names.join(", ")),
                format!("64 point states x {} sequences of length 2..={max_len}", sequences.len()),
                (JointOnticState::COUNT * sequences.len()) as u64,
                found.into_iter().flatten().collect(),
            )
        }))
    }

    /// Re-measures every post-state of every joint setting: the outcome must
    /// repeat with probability 1 and the state must stay put.
    pub fn check_eigenstates(&self) -> VerificationReport {
        self.timed(|| {
            let mut counterexamples = Vec::new();
            let mut cases = 0u64;
            for setting in MeasurementSetting::joint_settings() {
                for outcome in setting.outcomes() {
                    cases += 1;
                    let post = self
                        .model
                        .post_state_for(setting, outcome)
                        .expect("outcome in range");
                    let branches = self.model.measure(setting, &post).expect("joint state");
                    let ok = matches!(branches.as_slice(), [b] if b.outcome == outcome
                        && b.probability == Rational::ONE
                        && b.post == post);
                    if !ok {
                        let seen: Vec<String> = branches
                            .iter()
                            .map(|b| format!("{} with probability {}", b.outcome, b.probability))
                            .collect();
                        counterexamples.push(Counterexample {
                            initial: post.label().unwrap_or_else(|| "unnamed".into()),
                            sequence: vec![setting],
                            observable: None,
                            values: vec![],
                            detail: format!(
                                "post-state for outcome {outcome} re-measures as [{}]",
                                seen.join(", ")
                            ),
                        });
                    }
                }
            }
            VerificationReport::new(
                "eigenstates",
                "15 joint settings x 4 outcomes",
                cases,
                counterexamples,
            )
        })
    }

    /// A single measurement on a point state has one branch whose outcome is
    /// read from the actual coordinates.
    pub fn check_faithfulness(&self) -> VerificationReport {
        self.timed(|| {
            let settings = MeasurementSetting::joint_settings();
            let mut counterexamples = Vec::new();
            for w in JointOnticState::all() {
                for &setting in &settings {
                    let branches = self.model.measure(setting, &point_state(w)).expect("joint state");
                    let expected = outcome_of(setting, w);
                    let values_match = setting
                        .revealed(expected)
                        .expect("outcome in range")
                        .iter()
                        .all(|(obs, v)| obs.evaluate(w) == *v);
                    let ok = values_match
                        && matches!(branches.as_slice(), [b] if b.outcome == expected && b.probability == Rational::ONE);
                    if !ok {
                        counterexamples.push(Counterexample {
                            initial: w.to_string(),
                            sequence: vec![setting],
                            observable: None,
                            values: vec![],
                            detail: format!("expected the single outcome {expected}"),
                        });
                    }
                }
            }
            VerificationReport::new(
                "first-step faithfulness",
                "64 point states x 15 joint settings",
                (JointOnticState::COUNT * settings.len()) as u64,
                counterexamples,
            )
        })
    }

    /// Runs each of the six contexts from a fresh copy of the point state
    /// `initial` and multiplies the values read.
    pub fn square_products(
        &self,
        initial: JointOnticState,
        orders: &ContextOrders,
    ) -> Result<SquareResult> {
        let orders = ContextOrders::new(orders.direct.clone(), orders.swapped.clone())?;
        let start = point_state(initial);
        let mut products = BTreeMap::new();
        for context in ContextId::ALL {
            let traces = self
                .model
                .run_exact(&start, &orders.settings_for(context))?;
            let mut product = None;
            for trace in &traces {
                let p = context_product(&assign_values(context, trace)?);
                match product {
                    None => product = Some(p),
                    Some(q) if q != p => return Err(Error::BranchDependentProduct(context)),
                    Some(_) => {}
                }
            }
            products.insert(context, product.expect("at least one trace"));
        }
        let witness_value = witness_value(&products);
        Ok(SquareResult {
            initial,
            orders,
            products,
            witness_value,
        })
    }

    /// Square products for every point state and every pair of two-setting
    /// orders.
    pub fn all_square_results(&self) -> Result<Vec<SquareResult>> {
        let orders = ContextOrders::all_pairs();
        let initials: Vec<JointOnticState> = JointOnticState::all().collect();
        self.par_map(&initials, |&w| {
            orders
                .iter()
                .map(|o| self.square_products(w, o))
                .collect::<Result<Vec<_>>>()
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .map(|nested| nested.into_iter().flatten().collect())
    }

    /// Every preparation and order must give `+1` on five contexts, `-1` on
    /// C3, and witness 6.
    pub fn check_square(&self) -> VerificationReport {
        self.timed(|| {
            let orders = ContextOrders::all_pairs();
            let initials: Vec<JointOnticState> = JointOnticState::all().collect();
            let found = self.par_map(&initials, |&w| {
                orders
                    .iter()
                    .filter_map(|o| {
                        let sequence: Vec<MeasurementSetting> = o
                            .direct
                            .iter()
                            .chain(&o.swapped)
                            .copied()
                            .map(MeasurementSetting::NonLocal)
                            .collect();
                        match self.square_products(w, o) {
                            Ok(r) => {
                                let wrong: Vec<ContextId> = ContextId::ALL
                                    .into_iter()
                                    .filter(|c| r.products[c] != c.required_product())
                                    .collect();
                                (!wrong.is_empty() || r.witness_value != 6).then(|| {
                                    Counterexample {
                                        initial: w.to_string(),
                                        sequence,
                                        observable: None,
                                        values: r.signature().to_vec(),
                                        detail: format!(
                                            "witness {} with wrong products on {:?}",
                                            r.witness_value,
                                            wrong.iter().map(|c| c.literal()).collect::<Vec<_>>()
                                        ),
                                    }
                                })
                            }
                            Err(e) => Some(Counterexample {
                                initial: w.to_string(),
                                sequence,
                                observable: None,
                                values: vec![],
                                detail: e.to_string(),
                            }),
                        }
                    })
                    .collect::<Vec<_>>()
            });
            VerificationReport::new(
                "square signature",
                "64 point states x 6 C3 orders x 6 R3 orders",
                (JointOnticState::COUNT * orders.len()) as u64,
                found.into_iter().flatten().collect(),
            )
        })
    }

    /// Witness value across every preparation and order.
    pub fn witness(&self, bound: i32) -> Result<WitnessSummary> {
        let results = self.all_square_results()?;
        let values: Vec<i32> = results.iter().map(|r| r.witness_value).collect();
        let min = *values.iter().min().expect("nonempty sweep");
        let max = *values.iter().max().expect("nonempty sweep");
        Ok(WitnessSummary {
            preparations: values.len() as u64,
            min,
            max,
            state_independent: min == max,
            bound,
            bound_provenance: BOUND_PROVENANCE,
            violates_bound: min > bound,
        })
    }

    /// The full suite, in a fixed order.
    pub fn exhaustive_verify(&self, max_len: usize) -> Result<Vec<VerificationReport>> {
        let family = |table: Table| -> Vec<MeasurementSetting> {
            table
                .settings()
                .into_iter()
                .map(MeasurementSetting::NonLocal)
                .collect()
        };
        Ok(vec![
            self.timed(check_support_partition),
            self.check_eigenstates(),
            self.check_faithfulness(),
            self.check_repeatability(&family(Table::Direct), max_len)?,
            self.check_repeatability(&family(Table::Swapped), max_len)?,
            self.check_square(),
            self.timed(verify_quantum_square),
        ])
    }
}

/// All sequences over `family` with lengths `2..=max_len`, shortest first,
/// lexicographic within a length (by position in `family`).
pub fn sequences_up_to(
    family: &[MeasurementSetting],
    max_len: usize,
) -> Vec<Vec<MeasurementSetting>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<MeasurementSetting>> = vec![vec![]];
    for len in 1..=max_len {
        layer = layer
            .into_iter()
            .flat_map(|prefix| {
                family.iter().map(move |&s| {
                    let mut next = prefix.clone();
                    next.push(s);
                    next
                })
            })
            .collect();
        if len >= 2 {
            out.extend(layer.iter().cloned());
        }
    }
    out
}

/// The direct-family supports partition the 32 joint states with an odd
/// number of unequal like-coordinate pairs; the swapped-family supports
/// partition the 32 with an even number of unequal swapped pairs. Each
/// support has 8 points of weight 1/8.
pub fn check_support_partition() -> VerificationReport {
    let mut counterexamples = Vec::new();
    type Family = (
        &'static str,
        [CanonicalStateName; 4],
        fn(JointOnticState) -> bool,
    );
    let families: [Family; 2] = [
        ("direct", CanonicalStateName::DIRECT_FAMILY, |w| {
            crate::model::parity_profile(w).direct_inequalities() % 2 == 1
        }),
        ("swapped", CanonicalStateName::SWAPPED_FAMILY, |w| {
            crate::model::parity_profile(w)
                .swapped_inequalities()
                .is_multiple_of(2)
        }),
    ];
    for (label, names, target) in families {
        let mut union = BTreeSet::new();
        for name in names {
            let state = canonical_state(name);
            let support = state.joint_support();
            if support.len() != 8
                || support
                    .iter()
                    .any(|&w| state.joint_weight(w) != Rational::new(1, 8))
            {
                counterexamples.push(Counterexample {
                    initial: name.to_string(),
                    sequence: vec![],
                    observable: None,
                    values: vec![],
                    detail: format!(
                        "support of size {} is not uniform 1/8 on 8 points",
                        support.len()
                    ),
                });
            }
            for w in support {
                if !union.insert(w) {
                    counterexamples.push(Counterexample {
                        initial: w.to_string(),
                        sequence: vec![],
                        observable: None,
                        values: vec![],
                        detail: format!("{name} overlaps another {label}-family support"),
                    });
                }
            }
        }
        let expected: BTreeSet<JointOnticState> =
            JointOnticState::all().filter(|&w| target(w)).collect();
        if expected.len() != 32 || union != expected {
            counterexamples.push(Counterexample {
                initial: label.to_string(),
                sequence: vec![],
                observable: None,
                values: vec![],
                detail: format!(
                    "union of {label} supports has {} states, target set has {}, symmetric difference {}",
                    union.len(),
                    expected.len(),
                    union.symmetric_difference(&expected).count()
                ),
            });
        }
    }
    VerificationReport::new(
        "support partition",
        "64 joint states x 8 joint canonical states",
        (JointOnticState::COUNT * 8) as u64,
        counterexamples,
    )
}

/// Standard tables with the `(+,-)` and `(-,+)` cells of the `XX&YY` row
/// exchanged (phi+ and phi-). Used as a mutation control.
pub fn mutated_model() -> Model {
    Model::new(PostStateTables::STANDARD.with_swapped_cells(NonLocalSetting::XxYy, 1, 2))
}

pub fn check_repeatability(
    family: &[MeasurementSetting],
    max_len: usize,
) -> Result<VerificationReport> {
    Verifier::default().check_repeatability(family, max_len)
}

pub fn check_eigenstates() -> VerificationReport {
    Verifier::default().check_eigenstates()
}

pub fn square_products(initial: JointOnticState, orders: &ContextOrders) -> Result<SquareResult> {
    Verifier::default().square_products(initial, orders)
}

pub fn exhaustive_verify() -> Vec<VerificationReport> {
    Verifier::default()
        .exhaustive_verify(DEFAULT_MAX_LEN)
        .expect("default length cap is valid")
}
