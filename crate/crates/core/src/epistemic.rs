//! Epistemic states: exact probability distributions over ontic states.
//!
//! Joint states are stored densely as 64 weights indexed by
//! [`JointOnticState::index`]; elementary states as 8 weights indexed by
//! [`OnticState::index`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{parity_profile, Axis, JointOnticState, OnticState, Sign, Subsystem};
use crate::rational::Rational;

/// Sample space an epistemic state lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    Elementary(Subsystem),
    Joint,
}

impl Space {
    pub fn size(self) -> usize {
        match self {
            Space::Elementary(_) => OnticState::COUNT,
            Space::Joint => JointOnticState::COUNT,
        }
    }

    fn key(self) -> &'static str {
        match self {
            Space::Elementary(Subsystem::First) => "elementary1",
            Space::Elementary(Subsystem::Second) => "elementary2",
            Space::Joint => "joint",
        }
    }

    fn from_key(key: &str) -> Option<Self> {
        match key {
            "elementary1" => Some(Space::Elementary(Subsystem::First)),
            "elementary2" => Some(Space::Elementary(Subsystem::Second)),
            "joint" => Some(Space::Joint),
            _ => None,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Elementary(sub) => write!(f, "elementary({sub})"),
            Space::Joint => write!(f, "joint"),
        }
    }
}

/// Names of the canonical post-measurement states.
///
/// The six elementary states fix one cube coordinate and are uniform (1/4)
/// over the remaining four vertices. The eight joint states are uniform
/// (1/8) over the joint states meeting three coordinate (in)equalities:
/// the `Psi*`/`Phi*` family compares like coordinates (`x1` with `x2`,
/// etc.), the `*I*` family compares `x1` with `y2` and `y1` with `x2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalStateName {
    XPlus,
    XMinus,
    YPlus,
    YMinus,
    ZPlus,
    ZMinus,
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
    PsiIPlus,
    PsiIMinus,
    PhiIPlus,
    PhiIMinus,
}

impl CanonicalStateName {
    pub const ALL: [CanonicalStateName; 14] = [
        Self::XPlus,
        Self::XMinus,
        Self::YPlus,
        Self::YMinus,
        Self::ZPlus,
        Self::ZMinus,
        Self::PsiPlus,
        Self::PsiMinus,
        Self::PhiPlus,
        Self::PhiMinus,
        Self::PsiIPlus,
        Self::PsiIMinus,
        Self::PhiIPlus,
        Self::PhiIMinus,
    ];

    /// States compared coordinate-by-coordinate (shared by the first table).
    pub const DIRECT_FAMILY: [CanonicalStateName; 4] =
        [Self::PsiPlus, Self::PhiPlus, Self::PhiMinus, Self::PsiMinus];

    /// States compared with x and y exchanged on cube 2 (second table).
    pub const SWAPPED_FAMILY: [CanonicalStateName; 4] = [
        Self::PhiIPlus,
        Self::PsiIMinus,
        Self::PsiIPlus,
        Self::PhiIMinus,
    ];

    pub fn elementary(axis: Axis, sign: Sign) -> Self {
        use CanonicalStateName::*;
        match (axis, sign) {
            (Axis::X, Sign::Plus) => XPlus,
            (Axis::X, Sign::Minus) => XMinus,
            (Axis::Y, Sign::Plus) => YPlus,
            (Axis::Y, Sign::Minus) => YMinus,
            (Axis::Z, Sign::Plus) => ZPlus,
            (Axis::Z, Sign::Minus) => ZMinus,
        }
    }

    pub fn as_elementary(self) -> Option<(Axis, Sign)> {
        use CanonicalStateName::*;
        Some(match self {
            XPlus => (Axis::X, Sign::Plus),
            XMinus => (Axis::X, Sign::Minus),
            YPlus => (Axis::Y, Sign::Plus),
            YMinus => (Axis::Y, Sign::Minus),
            ZPlus => (Axis::Z, Sign::Plus),
            ZMinus => (Axis::Z, Sign::Minus),
            _ => return None,
        })
    }

    pub fn is_joint(self) -> bool {
        self.as_elementary().is_none()
    }

    /// Required coordinate products for a joint name, as `(swapped, pattern)`.
    ///
    /// A `-1` entry in the pattern means the compared pair must differ.
    fn joint_pattern(self) -> Option<(bool, [Sign; 3])> {
        use CanonicalStateName::*;
        use Sign::{Minus as M, Plus as P};
        Some(match self {
            PsiPlus => (false, [P, P, M]),
            PhiPlus => (false, [P, M, P]),
            PhiMinus => (false, [M, P, P]),
            PsiMinus => (false, [M, M, M]),
            PhiIPlus => (true, [P, P, P]),
            PsiIMinus => (true, [P, M, M]),
            PsiIPlus => (true, [M, P, M]),
            PhiIMinus => (true, [M, M, P]),
            _ => return None,
        })
    }

    /// Whether the joint ontic state `w` lies in the support of this joint name.
    /// Always false for elementary names.
    pub fn admits(self, w: JointOnticState) -> bool {
        match self.joint_pattern() {
            Some((swapped, pattern)) => {
                let profile = parity_profile(w);
                let actual = if swapped {
                    profile.swapped
                } else {
                    profile.direct
                };
                actual == pattern
            }
            None => false,
        }
    }

    pub fn literal(self) -> &'static str {
        use CanonicalStateName::*;
        match self {
            XPlus => "x+",
            XMinus => "x-",
            YPlus => "y+",
            YMinus => "y-",
            ZPlus => "z+",
            ZMinus => "z-",
            PsiPlus => "psi+",
            PsiMinus => "psi-",
            PhiPlus => "phi+",
            PhiMinus => "phi-",
            PsiIPlus => "psi_i+",
            PsiIMinus => "psi_i-",
            PhiIPlus => "phi_i+",
            PhiIMinus => "phi_i-",
        }
    }
}

impl fmt::Display for CanonicalStateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.literal())
    }
}

impl FromStr for CanonicalStateName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s
            .trim()
            .replace('ψ', "psi")
            .replace('φ', "phi")
            .replace('−', "-")
            .replace("ᵢ", "_i");
        Self::ALL
            .into_iter()
            .find(|name| name.literal() == normalized)
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "unknown canonical state name".into(),
            })
    }
}

impl Serialize for CanonicalStateName {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.literal())
    }
}

/// Probability distribution over the ontic states of one space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpistemicState {
    space: Space,
    weights: Vec<Rational>,
}

impl EpistemicState {
    /// Validates nonnegativity and unit total.
    pub fn from_weights(space: Space, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != space.size() {
            return Err(Error::InvalidDistribution(format!(
                "{} weights for a space of {} states",
                weights.len(),
                space.size()
            )));
        }
        if let Some(i) = weights.iter().position(Rational::is_negative) {
            return Err(Error::InvalidDistribution(format!(
                "negative weight at index {i}"
            )));
        }
        let total: Rational = weights.iter().sum();
        if total != Rational::ONE {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}"
            )));
        }
        Ok(EpistemicState { space, weights })
    }

    /// Uniform distribution over the indices accepted by `keep`.
    fn uniform_where(space: Space, keep: impl Fn(usize) -> bool) -> Self {
        let support: Vec<usize> = (0..space.size()).filter(|&i| keep(i)).collect();
        assert!(
            !support.is_empty(),
            "uniform state needs a nonempty support"
        );
        let share = Rational::new(1, support.len() as i64);
        let mut weights = vec![Rational::ZERO; space.size()];
        for i in support {
            weights[i] = share;
        }
        EpistemicState { space, weights }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> Rational {
        self.weights.get(index).copied().unwrap_or(Rational::ZERO)
    }

    pub fn joint_weight(&self, w: JointOnticState) -> Rational {
        debug_assert_eq!(self.space, Space::Joint);
        self.weight(w.index())
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_positive())
            .map(|(i, _)| i)
            .collect()
    }

    /// Joint ontic states carrying positive weight. Empty for elementary states.
    pub fn joint_support(&self) -> Vec<JointOnticState> {
        if self.space != Space::Joint {
            return Vec::new();
        }
        self.support()
            .into_iter()
            .filter_map(JointOnticState::from_index)
            .collect()
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn is_point(&self) -> bool {
        self.support().len() == 1
    }

    pub fn require_space(&self, expected: Space) -> Result<()> {
        if self.space == expected {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                expected,
                found: self.space,
            })
        }
    }

    /// Marginal distribution of one cube of a joint state.
    pub fn marginal(&self, subsystem: Subsystem) -> Result<EpistemicState> {
        self.require_space(Space::Joint)?;
        let mut weights = vec![Rational::ZERO; OnticState::COUNT];
        for (i, w) in self.weights.iter().enumerate() {
            let joint = JointOnticState::from_index(i).expect("joint index");
            weights[joint.part(subsystem).index()] += *w;
        }
        Ok(EpistemicState {
            space: Space::Elementary(subsystem),
            weights,
        })
    }

    /// Moves an elementary state onto the other cube's space (same weights).
    pub fn on_subsystem(&self, subsystem: Subsystem) -> Result<EpistemicState> {
        match self.space {
            Space::Elementary(_) => Ok(EpistemicState {
                space: Space::Elementary(subsystem),
                weights: self.weights.clone(),
            }),
            Space::Joint => Err(Error::SpaceMismatch {
                expected: Space::Elementary(subsystem),
                found: Space::Joint,
            }),
        }
    }

    /// Canonical name of this state, if it is one of the 14 named states.
    /// Elementary names match on either cube.
    pub fn canonical_name(&self) -> Option<CanonicalStateName> {
        CanonicalStateName::ALL
            .into_iter()
            .find(|name| match self.space {
                Space::Joint => name.is_joint() && *self == canonical_state(*name),
                Space::Elementary(sub) => {
                    !name.is_joint() && *self == canonical_state_on(*name, sub).expect("elementary")
                }
            })
    }

    /// Short human label: a canonical name, a product of two elementary
    /// canonical names (`x+⊗y-`), or an ontic point literal. `None` for
    /// anything else.
    pub fn label(&self) -> Option<String> {
        if let Some(name) = self.canonical_name() {
            return Some(name.to_string());
        }
        let support = self.support();
        if support.len() == 1 {
            return Some(match self.space {
                Space::Joint => JointOnticState::from_index(support[0])
                    .expect("index")
                    .to_string(),
                Space::Elementary(_) => OnticState::from_index(support[0])
                    .expect("index")
                    .to_string(),
            });
        }
        if self.space == Space::Joint {
            let first = self.marginal(Subsystem::First).ok()?;
            let second = self.marginal(Subsystem::Second).ok()?;
            let (a, b) = (first.canonical_name()?, second.canonical_name()?);
            if tensor(&first, &second).ok()? == *self {
                return Some(format!("{a}⊗{b}"));
            }
        }
        None
    }
}

impl Serialize for EpistemicState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Weights<'a>(&'a [Rational]);

        impl Serialize for Weights<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let support: Vec<_> = self
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| !w.is_zero())
                    .collect();
                let mut map = serializer.serialize_map(Some(support.len()))?;
                for (i, w) in support {
                    map.serialize_entry(&i.to_string(), w)?;
                }
                map.end()
            }
        }

        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("space", self.space.key())?;
        map.serialize_entry("weights", &Weights(&self.weights))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for EpistemicState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;

        #[derive(Deserialize)]
        struct Raw {
            space: String,
            weights: BTreeMap<usize, Rational>,
        }

        let raw = Raw::deserialize(deserializer)?;
        let space = Space::from_key(&raw.space)
            .ok_or_else(|| D::Error::custom(format!("unknown space {:?}", raw.space)))?;
        let mut weights = vec![Rational::ZERO; space.size()];
        for (i, w) in raw.weights {
            *weights.get_mut(i).ok_or_else(|| {
                D::Error::custom(format!("index {i} outside the {space} space"))
            })? = w;
        }
        EpistemicState::from_weights(space, weights).map_err(D::Error::custom)
    }
}

/// Distribution concentrated on one joint ontic state.
pub fn point_state(w: JointOnticState) -> EpistemicState {
    let index = w.index();
    EpistemicState::uniform_where(Space::Joint, |i| i == index)
}

/// Distribution concentrated on one vertex of the given cube.
pub fn point_state_elementary(subsystem: Subsystem, s: OnticState) -> EpistemicState {
    let index = s.index();
    EpistemicState::uniform_where(Space::Elementary(subsystem), |i| i == index)
}

/// Elementary state uniform over the face `axis = sign` of the given cube.
pub fn elementary_state(subsystem: Subsystem, axis: Axis, sign: Sign) -> EpistemicState {
    EpistemicState::uniform_where(Space::Elementary(subsystem), |i| {
        OnticState::from_index(i).expect("index").coord(axis) == sign
    })
}

/// The named state. Elementary names are placed on cube 1; use
/// [`canonical_state_on`] for cube 2.
pub fn canonical_state(name: CanonicalStateName) -> EpistemicState {
    match name.as_elementary() {
        Some((axis, sign)) => elementary_state(Subsystem::First, axis, sign),
        None => EpistemicState::uniform_where(Space::Joint, |i| {
            name.admits(JointOnticState::from_index(i).expect("index"))
        }),
    }
}

/// An elementary canonical state on a chosen cube.
pub fn canonical_state_on(
    name: CanonicalStateName,
    subsystem: Subsystem,
) -> Result<EpistemicState> {
    match name.as_elementary() {
        Some((axis, sign)) => Ok(elementary_state(subsystem, axis, sign)),
        None => Err(Error::SpaceMismatch {
            expected: Space::Elementary(subsystem),
            found: Space::Joint,
        }),
    }
}

/// Product distribution of a cube-1 state and a cube-2 state.
pub fn tensor(first: &EpistemicState, second: &EpistemicState) -> Result<EpistemicState> {
    first.require_space(Space::Elementary(Subsystem::First))?;
    second.require_space(Space::Elementary(Subsystem::Second))?;
    let weights = (0..JointOnticState::COUNT)
        .map(|i| first.weights[i >> 3] * second.weights[i & 0b111])
        .collect();
    Ok(EpistemicState {
        space: Space::Joint,
        weights,
    })
}

/// Exact equality of two states on the same space.
pub fn states_equal(a: &EpistemicState, b: &EpistemicState) -> Result<bool> {
    b.require_space(a.space)?;
    Ok(a.weights == b.weights)
}
