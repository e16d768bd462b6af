//! Measurement procedures: what each setting reveals and where it leaves the
//! system.
//!
//! The post-measurement state is a full replacement. It depends only on the
//! setting and the outcome, never on the state measured; whatever the
//! observer knew beyond the outcome is discarded. This non-Bayesian update
//! is what makes the order of compatible measurements matter for the values
//! read, and it is the source of contextual behaviour in the model.
//!
//! * Elementary `A@n` reveals coordinate `A` of cube `n` and leaves the cube
//!   uniform over the four vertices of that face.
//! * Local `A1&B2` reveals `(a1, b2)` and leaves the product of the two face
//!   states (16 ontic states).
//! * Non-local `AB&CD` reveals the two coordinate products `(a1·b2, c1·d2)`
//!   and leaves one of the eight-point correlated states, chosen by a fixed
//!   table per setting. Only six non-local settings have such tables.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::epistemic::{
    canonical_state, elementary_state, tensor, CanonicalStateName, EpistemicState, Space,
};
use crate::error::{Error, Result};
use crate::model::{Axis, JointOnticState, Observable, OnticState, Sign, Subsystem};
use crate::rational::Rational;

/// Which post-state table a non-local setting belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    /// `XX&YY`, `XX&ZZ`, `ZZ&YY`; post-states psi±, phi±.
    Direct,
    /// `XY&YX`, `YX&ZZ`, `XY&ZZ`; post-states psi_i±, phi_i±.
    Swapped,
}

impl Table {
    pub fn settings(self) -> [NonLocalSetting; 3] {
        use NonLocalSetting::*;
        match self {
            Table::Direct => [XxYy, XxZz, ZzYy],
            Table::Swapped => [XyYx, YxZz, XyZz],
        }
    }

    pub fn post_states(self) -> [CanonicalStateName; 4] {
        match self {
            Table::Direct => CanonicalStateName::DIRECT_FAMILY,
            Table::Swapped => CanonicalStateName::SWAPPED_FAMILY,
        }
    }
}

/// The six non-local settings that have post-measurement tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NonLocalSetting {
    XxYy,
    XxZz,
    ZzYy,
    XyYx,
    YxZz,
    XyZz,
}

impl NonLocalSetting {
    pub const ALL: [NonLocalSetting; 6] = [
        NonLocalSetting::XxYy,
        NonLocalSetting::XxZz,
        NonLocalSetting::ZzYy,
        NonLocalSetting::XyYx,
        NonLocalSetting::YxZz,
        NonLocalSetting::XyZz,
    ];

    /// The two product observables, in outcome order.
    pub fn observables(self) -> (Observable, Observable) {
        use NonLocalSetting::*;
        match self {
            XxYy => (Observable::XX, Observable::YY),
            XxZz => (Observable::XX, Observable::ZZ),
            ZzYy => (Observable::ZZ, Observable::YY),
            XyYx => (Observable::XY, Observable::YX),
            YxZz => (Observable::YX, Observable::ZZ),
            XyZz => (Observable::XY, Observable::ZZ),
        }
    }

    pub fn table(self) -> Table {
        use NonLocalSetting::*;
        match self {
            XxYy | XxZz | ZzYy => Table::Direct,
            XyYx | YxZz | XyZz => Table::Swapped,
        }
    }

    fn from_observables(a: Observable, b: Observable) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.observables() == (a, b))
            .ok_or(Error::UnsupportedNonLocal(a, b))
    }
}

impl fmt::Display for NonLocalSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.observables();
        match (a, b) {
            (Observable::Product(a1, a2), Observable::Product(b1, b2)) => {
                write!(f, "{a1}{a2}&{b1}{b2}")
            }
            _ => unreachable!("non-local settings pair product observables"),
        }
    }
}

impl Serialize for NonLocalSetting {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A measurement procedure of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasurementSetting {
    /// Single-cube measurement on its own elementary space.
    Elementary {
        subsystem: Subsystem,
        axis: Axis,
    },
    /// `A1&B2`: axis `A` on cube 1 and axis `B` on cube 2, independently.
    LocalPair(Axis, Axis),
    NonLocal(NonLocalSetting),
}

impl MeasurementSetting {
    /// Builds a non-local setting; only the six tabulated pairings exist.
    pub fn nonlocal(first: Observable, second: Observable) -> Result<Self> {
        NonLocalSetting::from_observables(first, second).map(MeasurementSetting::NonLocal)
    }

    /// The 15 settings acting on the joint system: 9 local, then 6 non-local.
    pub fn joint_settings() -> Vec<MeasurementSetting> {
        let local = Axis::ALL.into_iter().flat_map(|a| {
            Axis::ALL
                .into_iter()
                .map(move |b| MeasurementSetting::LocalPair(a, b))
        });
        local
            .chain(
                NonLocalSetting::ALL
                    .into_iter()
                    .map(MeasurementSetting::NonLocal),
            )
            .collect()
    }

    /// X, Y, Z on each cube.
    pub fn elementary_settings() -> Vec<MeasurementSetting> {
        Subsystem::BOTH
            .into_iter()
            .flat_map(|subsystem| {
                Axis::ALL
                    .into_iter()
                    .map(move |axis| MeasurementSetting::Elementary { subsystem, axis })
            })
            .collect()
    }

    pub fn is_joint(self) -> bool {
        !matches!(self, MeasurementSetting::Elementary { .. })
    }

    /// Space of the states this setting applies to.
    pub fn space(self) -> Space {
        match self {
            MeasurementSetting::Elementary { subsystem, .. } => Space::Elementary(subsystem),
            _ => Space::Joint,
        }
    }

    /// Every outcome in the setting's range, in table column order.
    pub fn outcomes(self) -> Vec<Outcome> {
        match self {
            MeasurementSetting::Elementary { .. } => {
                Sign::BOTH.into_iter().map(Outcome::Single).collect()
            }
            _ => Outcome::PAIRS.to_vec(),
        }
    }

    /// Observables whose values an outcome of this setting determines.
    /// For a local pair this includes the product `A1B2`.
    pub fn observables(self) -> Vec<Observable> {
        match self {
            MeasurementSetting::Elementary { subsystem, axis } => {
                vec![Observable::Single(subsystem, axis)]
            }
            MeasurementSetting::LocalPair(a, b) => vec![
                Observable::Single(Subsystem::First, a),
                Observable::Single(Subsystem::Second, b),
                Observable::Product(a, b),
            ],
            MeasurementSetting::NonLocal(s) => {
                let (a, b) = s.observables();
                vec![a, b]
            }
        }
    }

    /// Values the outcome assigns to [`Self::observables`], in the same order.
    pub fn revealed(self, outcome: Outcome) -> Result<Vec<(Observable, Sign)>> {
        let values = match (self, outcome) {
            (MeasurementSetting::Elementary { .. }, Outcome::Single(s)) => vec![s],
            (MeasurementSetting::LocalPair(..), Outcome::Pair(a, b)) => vec![a, b, a * b],
            (MeasurementSetting::NonLocal(_), Outcome::Pair(a, b)) => vec![a, b],
            _ => return Err(outcome_mismatch(self, outcome)),
        };
        Ok(self.observables().into_iter().zip(values).collect())
    }
}

fn outcome_mismatch(setting: MeasurementSetting, outcome: Outcome) -> Error {
    Error::Parse {
        input: outcome.to_string(),
        reason: format!("not an outcome of setting {setting}"),
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurementSetting::Elementary { subsystem, axis } => write!(f, "{axis}@{subsystem}"),
            MeasurementSetting::LocalPair(a, b) => write!(f, "{a}1&{b}2"),
            MeasurementSetting::NonLocal(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    /// Accepts `Z@1`, `X1&Y2`, `XX&YY` and the long form `X1X2&Y1Y2`.
    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let bad = |reason: &str| Error::Parse {
            input: text.to_string(),
            reason: reason.to_string(),
        };
        if let Some((axis, sub)) = text.split_once('@') {
            let mut chars = axis.trim().chars();
            let axis = match (chars.next().and_then(Axis::from_letter), chars.next()) {
                (Some(a), None) => a,
                _ => return Err(bad("expected an axis letter before '@'")),
            };
            let subsystem = sub
                .trim()
                .parse::<u8>()
                .ok()
                .and_then(Subsystem::from_number)
                .ok_or_else(|| bad("expected cube 1 or 2 after '@'"))?;
            return Ok(MeasurementSetting::Elementary { subsystem, axis });
        }
        let (left, right) = text
            .split_once('&')
            .ok_or_else(|| bad("expected 'A1&B2', 'AB&CD' or 'A@n'"))?;
        match (
            left.trim().parse::<Observable>()?,
            right.trim().parse::<Observable>()?,
        ) {
            (Observable::Single(Subsystem::First, a), Observable::Single(Subsystem::Second, b)) => {
                Ok(MeasurementSetting::LocalPair(a, b))
            }
            (Observable::Single(..), Observable::Single(..)) => {
                Err(bad("a local pair measures cube 1 then cube 2, e.g. X1&Y2"))
            }
            (a @ Observable::Product(..), b @ Observable::Product(..)) => {
                MeasurementSetting::nonlocal(a, b)
            }
            _ => Err(bad("cannot mix a single-cube and a product observable")),
        }
    }
}

impl Serialize for MeasurementSetting {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Result of one measurement. Elementary settings yield a single sign;
/// joint settings yield a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Single(Sign),
    Pair(Sign, Sign),
}

impl Outcome {
    /// Column order of the post-state tables.
    pub const PAIRS: [Outcome; 4] = [
        Outcome::Pair(Sign::Plus, Sign::Plus),
        Outcome::Pair(Sign::Plus, Sign::Minus),
        Outcome::Pair(Sign::Minus, Sign::Plus),
        Outcome::Pair(Sign::Minus, Sign::Minus),
    ];

    pub fn first(self) -> Sign {
        match self {
            Outcome::Single(s) | Outcome::Pair(s, _) => s,
        }
    }

    pub fn second(self) -> Option<Sign> {
        match self {
            Outcome::Single(_) => None,
            Outcome::Pair(_, s) => Some(s),
        }
    }

    /// Index into [`Outcome::PAIRS`] (or 0/1 for a single sign).
    pub fn column(self) -> usize {
        match self {
            Outcome::Single(s) => usize::from(s.bit()),
            Outcome::Pair(a, b) => (usize::from(a.bit()) << 1) | usize::from(b.bit()),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Single(s) => write!(f, "{s}"),
            Outcome::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Outcome::Single(s) => [*s].serialize(serializer),
            Outcome::Pair(a, b) => [*a, *b].serialize(serializer),
        }
    }
}

/// One possible result of a measurement on an epistemic state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub outcome: Outcome,
    pub probability: Rational,
    pub post: EpistemicState,
}

/// Post-state assignment for the six non-local settings, rows in
/// [`NonLocalSetting::ALL`] order, columns in [`Outcome::PAIRS`] order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PostStateTables {
    rows: [[CanonicalStateName; 4]; 6],
}

impl PostStateTables {
    pub const STANDARD: PostStateTables = {
        use CanonicalStateName::*;
        PostStateTables {
            rows: [
                // XX&YY
                [PsiPlus, PhiPlus, PhiMinus, PsiMinus],
                // XX&ZZ
                [PhiPlus, PsiPlus, PhiMinus, PsiMinus],
                // ZZ&YY
                [PhiMinus, PhiPlus, PsiPlus, PsiMinus],
                // XY&YX
                [PhiIPlus, PsiIMinus, PsiIPlus, PhiIMinus],
                // YX&ZZ
                [PhiIPlus, PsiIPlus, PhiIMinus, PsiIMinus],
                // XY&ZZ
                [PhiIPlus, PsiIMinus, PhiIMinus, PsiIPlus],
            ],
        }
    };

    pub fn entry(&self, setting: NonLocalSetting, column: usize) -> CanonicalStateName {
        self.rows[setting as usize][column]
    }

    pub fn row(&self, setting: NonLocalSetting) -> [CanonicalStateName; 4] {
        self.rows[setting as usize]
    }

    /// Copy with one cell replaced.
    pub fn with_entry(
        mut self,
        setting: NonLocalSetting,
        column: usize,
        name: CanonicalStateName,
    ) -> Self {
        self.rows[setting as usize][column] = name;
        self
    }

    /// Copy with two cells of one row exchanged.
    pub fn with_swapped_cells(mut self, setting: NonLocalSetting, a: usize, b: usize) -> Self {
        self.rows[setting as usize].swap(a, b);
        self
    }
}

impl Default for PostStateTables {
    fn default() -> Self {
        PostStateTables::STANDARD
    }
}

/// Measurement rules with a given post-state table. [`Model::STANDARD`] is
/// the model proper; other tables exist for mutation testing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Model {
    tables: PostStateTables,
}

impl Model {
    pub const STANDARD: Model = Model {
        tables: PostStateTables::STANDARD,
    };

    pub fn new(tables: PostStateTables) -> Self {
        Model { tables }
    }

    pub fn tables(&self) -> &PostStateTables {
        &self.tables
    }

    /// The setting's state-replacement rule for a given outcome.
    pub fn post_state_for(
        &self,
        setting: MeasurementSetting,
        outcome: Outcome,
    ) -> Result<EpistemicState> {
        match (setting, outcome) {
            (MeasurementSetting::Elementary { subsystem, axis }, Outcome::Single(s)) => {
                Ok(elementary_state(subsystem, axis, s))
            }
            (MeasurementSetting::LocalPair(a, b), Outcome::Pair(sa, sb)) => tensor(
                &elementary_state(Subsystem::First, a, sa),
                &elementary_state(Subsystem::Second, b, sb),
            ),
            (MeasurementSetting::NonLocal(s), Outcome::Pair(..)) => {
                Ok(canonical_state(self.tables.entry(s, outcome.column())))
            }
            _ => Err(outcome_mismatch(setting, outcome)),
        }
    }

    /// Outcome distribution of a joint setting on a joint state, one branch
    /// per outcome of positive probability, in column order.
    pub fn measure(
        &self,
        setting: MeasurementSetting,
        state: &EpistemicState,
    ) -> Result<Vec<Branch>> {
        if let MeasurementSetting::Elementary { subsystem, .. } = setting {
            return Err(Error::SpaceMismatch {
                expected: Space::Elementary(subsystem),
                found: state.space(),
            });
        }
        state.require_space(Space::Joint)?;
        let mut mass = [Rational::ZERO; 4];
        for w in state.joint_support() {
            mass[outcome_of(setting, w).column()] += state.joint_weight(w);
        }
        self.branches(setting, &Outcome::PAIRS, &mass)
    }

    /// Single-axis measurement on an elementary state of either cube.
    pub fn measure_elementary(&self, axis: Axis, state: &EpistemicState) -> Result<Vec<Branch>> {
        let subsystem = match state.space() {
            Space::Elementary(sub) => sub,
            Space::Joint => {
                return Err(Error::SpaceMismatch {
                    expected: Space::Elementary(Subsystem::First),
                    found: Space::Joint,
                })
            }
        };
        let mut mass = [Rational::ZERO; 2];
        for i in state.support() {
            let vertex = OnticState::from_index(i).expect("elementary index");
            mass[usize::from(vertex.coord(axis).bit())] += state.weight(i);
        }
        let outcomes = [Outcome::Single(Sign::Plus), Outcome::Single(Sign::Minus)];
        self.branches(
            MeasurementSetting::Elementary { subsystem, axis },
            &outcomes,
            &mass,
        )
    }

    /// Dispatches to [`Self::measure`] or [`Self::measure_elementary`].
    pub fn apply(
        &self,
        setting: MeasurementSetting,
        state: &EpistemicState,
    ) -> Result<Vec<Branch>> {
        match setting {
            MeasurementSetting::Elementary { subsystem, axis } => {
                state.require_space(Space::Elementary(subsystem))?;
                self.measure_elementary(axis, state)
            }
            _ => self.measure(setting, state),
        }
    }

    fn branches(
        &self,
        setting: MeasurementSetting,
        outcomes: &[Outcome],
        mass: &[Rational],
    ) -> Result<Vec<Branch>> {
        outcomes
            .iter()
            .zip(mass)
            .filter(|(_, p)| p.is_positive())
            .map(|(&outcome, &probability)| {
                Ok(Branch {
                    outcome,
                    probability,
                    post: self.post_state_for(setting, outcome)?,
                })
            })
            .collect()
    }

    /// Draws one branch with exactly the branch probabilities.
    pub fn sample_with<R: Rng + ?Sized>(
        &self,
        setting: MeasurementSetting,
        state: &EpistemicState,
        rng: &mut R,
    ) -> Result<Branch> {
        let branches = self.apply(setting, state)?;
        Ok(draw(branches, rng))
    }

    pub fn sample(
        &self,
        setting: MeasurementSetting,
        state: &EpistemicState,
        seed: u64,
    ) -> Result<(Outcome, EpistemicState)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let branch = self.sample_with(setting, state, &mut rng)?;
        Ok((branch.outcome, branch.post))
    }
}

/// Picks a branch by drawing an integer below the common denominator, so the
/// selection probabilities are exact.
pub(crate) fn draw<R: Rng + ?Sized>(mut branches: Vec<Branch>, rng: &mut R) -> Branch {
    if branches.len() == 1 {
        return branches.pop().expect("one branch");
    }
    let denominator = branches
        .iter()
        .map(|b| b.probability.denominator())
        .max()
        .expect("measurement has at least one branch");
    let ticket = rng.random_range(0..denominator);
    let mut acc = 0;
    let last = branches.len() - 1;
    for (i, branch) in branches.into_iter().enumerate() {
        acc += branch.probability.numerator() * (denominator / branch.probability.denominator());
        if ticket < acc || i == last {
            return branch;
        }
    }
    unreachable!("branch list is nonempty")
}

/// Outcome the setting produces on an ontic state, read from its actual
/// coordinates. Elementary settings read their own cube of the pair.
pub fn outcome_of(setting: MeasurementSetting, w: JointOnticState) -> Outcome {
    match setting {
        MeasurementSetting::Elementary { subsystem, axis } => {
            Outcome::Single(w.coord(subsystem, axis))
        }
        MeasurementSetting::LocalPair(a, b) => Outcome::Pair(w.first.coord(a), w.second.coord(b)),
        MeasurementSetting::NonLocal(s) => {
            let (a, b) = s.observables();
            Outcome::Pair(a.evaluate(w), b.evaluate(w))
        }
    }
}

pub fn post_state_for(setting: MeasurementSetting, outcome: Outcome) -> Result<EpistemicState> {
    Model::STANDARD.post_state_for(setting, outcome)
}

pub fn measure(setting: MeasurementSetting, state: &EpistemicState) -> Result<Vec<Branch>> {
    Model::STANDARD.measure(setting, state)
}

pub fn measure_elementary(axis: Axis, state: &EpistemicState) -> Result<Vec<Branch>> {
    Model::STANDARD.measure_elementary(axis, state)
}

/// Seeded draw of one outcome and its post-state.
pub fn sample(
    setting: MeasurementSetting,
    state: &EpistemicState,
    seed: u64,
) -> Result<(Outcome, EpistemicState)> {
    Model::STANDARD.sample(setting, state, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epistemic::{point_state, point_state_elementary, CanonicalStateName::*};
    use Sign::{Minus as M, Plus as P};

    fn demo_state() -> JointOnticState {
        "(+,-,+)x(+,+,-)".parse().unwrap()
    }

    fn s(text: &str) -> MeasurementSetting {
        text.parse().unwrap()
    }

    #[test]
    fn setting_counts() {
        assert_eq!(MeasurementSetting::joint_settings().len(), 15);
        assert_eq!(MeasurementSetting::elementary_settings().len(), 6);
    }

    #[test]
    fn setting_literals_round_trip() {
        for setting in MeasurementSetting::joint_settings()
            .into_iter()
            .chain(MeasurementSetting::elementary_settings())
        {
            assert_eq!(s(&setting.to_string()), setting);
        }
        assert_eq!(
            s("X1X2&Y1Y2"),
            MeasurementSetting::NonLocal(NonLocalSetting::XxYy)
        );
        assert_eq!(
            s("Z@1"),
            MeasurementSetting::Elementary {
                subsystem: Subsystem::First,
                axis: Axis::Z
            }
        );
    }

    #[test]
    fn unlisted_nonlocal_pairings_are_rejected() {
        assert!(matches!(
            "YY&XX".parse::<MeasurementSetting>(),
            Err(Error::UnsupportedNonLocal(..))
        ));
        assert!(matches!(
            "XY&YY".parse::<MeasurementSetting>(),
            Err(Error::UnsupportedNonLocal(..))
        ));
        assert!(MeasurementSetting::nonlocal(
            Observable::Product(Axis::Z, Axis::X),
            Observable::ZZ
        )
        .is_err());
        assert!("X2&Y1".parse::<MeasurementSetting>().is_err());
        assert!("X1&YY".parse::<MeasurementSetting>().is_err());
        assert!("Q@1".parse::<MeasurementSetting>().is_err());
        assert!("X@3".parse::<MeasurementSetting>().is_err());
    }

    #[test]
    fn outcome_examples() {
        let w = demo_state();
        assert_eq!(outcome_of(s("XX&YY"), w), Outcome::Pair(P, M));
        assert_eq!(outcome_of(s("ZZ&YY"), w), Outcome::Pair(M, M));
        let w: JointOnticState = "(+,+,+)x(+,-,+)".parse().unwrap();
        assert_eq!(outcome_of(s("X1&Y2"), w), Outcome::Pair(P, M));
    }

    #[test]
    fn post_state_table_cells() {
        assert_eq!(
            post_state_for(s("XX&YY"), Outcome::Pair(P, M)).unwrap(),
            canonical_state(PhiPlus)
        );
        assert_eq!(
            post_state_for(s("XY&YX"), Outcome::Pair(M, P)).unwrap(),
            canonical_state(PsiIPlus)
        );
        let local = post_state_for(s("X1&Y2"), Outcome::Pair(P, M)).unwrap();
        assert_eq!(local.label().as_deref(), Some("x+⊗y-"));
        assert!(post_state_for(s("XX&YY"), Outcome::Single(P)).is_err());
    }

    #[test]
    fn measure_point_is_faithful_and_deterministic() {
        let branches = measure(s("XX&YY"), &point_state(demo_state())).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].outcome, Outcome::Pair(P, M));
        assert_eq!(branches[0].probability, Rational::ONE);
        assert_eq!(branches[0].post, canonical_state(PhiPlus));
    }

    #[test]
    fn measure_eigenstate() {
        let branches = measure(s("XX&ZZ"), &canonical_state(PhiPlus)).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].outcome, Outcome::Pair(P, P));
        assert_eq!(branches[0].post, canonical_state(PhiPlus));
    }

    #[test]
    fn local_xx_on_psi_minus_splits_evenly() {
        // Oracle: psi- requires x1 != x2, so only (+,-) and (-,+) occur, and
        // each x-pattern leaves the 2 × 2 free (y, z) inequalities: 4 of 8 points.
        let psi = canonical_state(PsiMinus);
        let mut counts = [0usize; 4];
        for w in psi.joint_support() {
            counts[Outcome::Pair(w.first.x, w.second.x).column()] += 1;
        }
        assert_eq!(counts, [0, 4, 4, 0]);

        let branches = measure(s("X1&X2"), &psi).unwrap();
        let got: Vec<_> = branches
            .iter()
            .map(|b| (b.outcome, b.probability))
            .collect();
        assert_eq!(
            got,
            vec![
                (Outcome::Pair(P, M), Rational::new(1, 2)),
                (Outcome::Pair(M, P), Rational::new(1, 2))
            ]
        );
    }

    #[test]
    fn measure_rejects_wrong_space() {
        let x_plus = canonical_state(XPlus);
        assert!(matches!(
            measure(s("XX&YY"), &x_plus),
            Err(Error::SpaceMismatch { .. })
        ));
        assert!(measure(s("Z@1"), &canonical_state(PsiPlus)).is_err());
        assert!(measure_elementary(Axis::Z, &canonical_state(PsiPlus)).is_err());
        assert!(Model::STANDARD.apply(s("Z@2"), &x_plus).is_err());
    }

    #[test]
    fn elementary_examples() {
        let vertex = OnticState::new(M, P, P);
        let branches =
            measure_elementary(Axis::Z, &point_state_elementary(Subsystem::First, vertex)).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].outcome, Outcome::Single(P));
        assert_eq!(branches[0].post, canonical_state(ZPlus));

        let branches = measure_elementary(Axis::X, &canonical_state(XMinus)).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].outcome, Outcome::Single(M));
        assert_eq!(branches[0].probability, Rational::ONE);

        let uniform = EpistemicState::from_weights(
            Space::Elementary(Subsystem::Second),
            vec![Rational::new(1, 8); 8],
        )
        .unwrap();
        let branches = measure_elementary(Axis::Z, &uniform).unwrap();
        assert_eq!(branches.len(), 2);
        assert!(branches
            .iter()
            .all(|b| b.probability == Rational::new(1, 2)));
        assert_eq!(
            branches[1].post.space(),
            Space::Elementary(Subsystem::Second)
        );
    }

    #[test]
    fn single_branch_sampling_ignores_seed() {
        let e = point_state(demo_state());
        for seed in 0..20 {
            let (o, post) = sample(s("XX&YY"), &e, seed).unwrap();
            assert_eq!(o, Outcome::Pair(P, M));
            assert_eq!(post, canonical_state(PhiPlus));
        }
    }

    #[test]
    fn sampling_frequencies_track_branch_probabilities() {
        let psi = canonical_state(PsiMinus);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10_000;
        let hits = (0..n)
            .filter(|_| {
                Model::STANDARD
                    .sample_with(s("X1&X2"), &psi, &mut rng)
                    .unwrap()
                    .outcome
                    == Outcome::Pair(P, M)
            })
            .count();
        let freq = hits as f64 / n as f64;
        // 5 sigma of a fair coin over 10^4 draws is 0.025
        assert!((freq - 0.5).abs() < 0.025, "frequency {freq}");
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let psi = canonical_state(PsiMinus);
        for seed in [0u64, 1, 42, u64::MAX] {
            assert_eq!(
                sample(s("X1&X2"), &psi, seed).unwrap(),
                sample(s("X1&X2"), &psi, seed).unwrap()
            );
        }
    }

    #[test]
    fn outcome_json() {
        assert_eq!(
            serde_json::to_string(&Outcome::Pair(P, M)).unwrap(),
            "[1,-1]"
        );
        assert_eq!(serde_json::to_string(&Outcome::Single(M)).unwrap(), "[-1]");
    }

    #[test]
    fn mutated_table_changes_one_cell() {
        let tables = PostStateTables::STANDARD.with_swapped_cells(NonLocalSetting::XxYy, 1, 2);
        assert_eq!(tables.entry(NonLocalSetting::XxYy, 1), PhiMinus);
        assert_eq!(tables.entry(NonLocalSetting::XxYy, 2), PhiPlus);
        assert_eq!(
            tables.row(NonLocalSetting::XxZz),
            PostStateTables::STANDARD.row(NonLocalSetting::XxZz)
        );
    }
}
