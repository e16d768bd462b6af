//! Ontic states of the two-cube system and the dichotomic observables read
//! off them.
//!
//! An elementary system is a cube whose vertices `(x, y, z)` with
//! coordinates in `{+1, -1}` are the ontic states. The bipartite system is a
//! pair of such cubes. Indices are fixed: a sign `+1` maps to bit `0` and
//! `-1` to bit `1`, and a joint state is packed as the six bits
//! `x1 y1 z1 x2 y2 z2` (most significant first), so sweeps iterate `0..64`.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Outcome value of a dichotomic observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn bit(self) -> bool {
        self == Sign::Minus
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i32(value: i32) -> Option<Self> {
        match value {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    fn from_symbol(c: char) -> Option<Self> {
        match c {
            '+' => Some(Sign::Plus),
            '-' | '−' => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

// Signs serialize as the integers +1 / -1.
impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i32(self.to_i32())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = i32::deserialize(deserializer)?;
        Sign::from_i32(value)
            .ok_or_else(|| serde::de::Error::custom(format!("expected +1 or -1, got {value}")))
    }
}

/// Cube axis; also names the elementary measurements X, Y and Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'X' => Some(Axis::X),
            'Y' => Some(Axis::Y),
            'Z' => Some(Axis::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Which of the two cubes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subsystem {
    First,
    Second,
}

impl Subsystem {
    pub const BOTH: [Subsystem; 2] = [Subsystem::First, Subsystem::Second];

    pub fn number(self) -> u8 {
        match self {
            Subsystem::First => 1,
            Subsystem::Second => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Subsystem::First),
            2 => Some(Subsystem::Second),
            _ => None,
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A vertex of one cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OnticState {
    pub x: Sign,
    pub y: Sign,
    pub z: Sign,
}

impl OnticState {
    pub const COUNT: usize = 8;

    pub fn new(x: Sign, y: Sign, z: Sign) -> Self {
        OnticState { x, y, z }
    }

    pub fn coord(self, axis: Axis) -> Sign {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    /// 3-bit index, `x` in the most significant bit.
    pub fn index(self) -> usize {
        (usize::from(self.x.bit()) << 2)
            | (usize::from(self.y.bit()) << 1)
            | usize::from(self.z.bit())
    }

    pub fn from_index(index: usize) -> Option<Self> {
        (index < Self::COUNT).then(|| OnticState {
            x: Sign::from_bit(index & 0b100 != 0),
            y: Sign::from_bit(index & 0b010 != 0),
            z: Sign::from_bit(index & 0b001 != 0),
        })
    }

    pub fn all() -> impl Iterator<Item = OnticState> {
        (0..Self::COUNT).filter_map(Self::from_index)
    }
}

impl fmt::Display for OnticState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

impl FromStr for OnticState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse {
            input: s.to_string(),
            reason: why.to_string(),
        };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| bad("expected a parenthesised sign triple like (+,-,+)"))?;
        let signs = inner
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                let tok = tok.strip_suffix('1').unwrap_or(tok);
                let mut chars = tok.chars();
                match (chars.next().and_then(Sign::from_symbol), chars.next()) {
                    (Some(sign), None) => Ok(sign),
                    _ => Err(bad("each coordinate must be + or -")),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        match signs.as_slice() {
            &[x, y, z] => Ok(OnticState { x, y, z }),
            _ => Err(bad("expected exactly three coordinates")),
        }
    }
}

/// Ontic state of the bipartite system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointOnticState {
    pub first: OnticState,
    pub second: OnticState,
}

impl JointOnticState {
    pub const COUNT: usize = 64;

    pub fn new(first: OnticState, second: OnticState) -> Self {
        JointOnticState { first, second }
    }

    pub fn part(self, subsystem: Subsystem) -> OnticState {
        match subsystem {
            Subsystem::First => self.first,
            Subsystem::Second => self.second,
        }
    }

    pub fn coord(self, subsystem: Subsystem, axis: Axis) -> Sign {
        self.part(subsystem).coord(axis)
    }

    /// 6-bit index in `x1 y1 z1 x2 y2 z2` order.
    pub fn index(self) -> usize {
        (self.first.index() << 3) | self.second.index()
    }

    pub fn from_index(index: usize) -> Option<Self> {
        (index < Self::COUNT).then(|| JointOnticState {
            first: OnticState::from_index(index >> 3).expect("3-bit index"),
            second: OnticState::from_index(index & 0b111).expect("3-bit index"),
        })
    }

    pub fn all() -> impl Iterator<Item = JointOnticState> {
        (0..Self::COUNT).filter_map(Self::from_index)
    }
}

impl fmt::Display for JointOnticState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.first, self.second)
    }
}

impl FromStr for JointOnticState {
    type Err = Error;

    /// Parses the `(+,-,+)x(+,+,-)` literal.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split = s
            .find(")x(")
            .or_else(|| s.find(") x ("))
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "expected two sign triples joined by 'x', e.g. (+,-,+)x(+,+,-)".into(),
            })?;
        let (left, right) = s.split_at(split + 1);
        let right = right.trim_start().strip_prefix('x').unwrap_or(right);
        Ok(JointOnticState {
            first: left.parse()?,
            second: right.parse()?,
        })
    }
}

impl Serialize for JointOnticState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for JointOnticState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let literal = String::deserialize(deserializer)?;
        literal.parse().map_err(serde::de::Error::custom)
    }
}

/// A dichotomic observable of the bipartite system.
///
/// `Product(a, b)` is the axis-`a` coordinate of cube 1 times the axis-`b`
/// coordinate of cube 2. Every combination is representable, but only the
/// eleven members of [`Observable::CATALOG`] have measurement procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    Single(Subsystem, Axis),
    Product(Axis, Axis),
}

impl Observable {
    pub const X1: Observable = Observable::Single(Subsystem::First, Axis::X);
    pub const Y1: Observable = Observable::Single(Subsystem::First, Axis::Y);
    pub const Z1: Observable = Observable::Single(Subsystem::First, Axis::Z);
    pub const X2: Observable = Observable::Single(Subsystem::Second, Axis::X);
    pub const Y2: Observable = Observable::Single(Subsystem::Second, Axis::Y);
    pub const Z2: Observable = Observable::Single(Subsystem::Second, Axis::Z);
    pub const XX: Observable = Observable::Product(Axis::X, Axis::X);
    pub const YY: Observable = Observable::Product(Axis::Y, Axis::Y);
    pub const ZZ: Observable = Observable::Product(Axis::Z, Axis::Z);
    pub const XY: Observable = Observable::Product(Axis::X, Axis::Y);
    pub const YX: Observable = Observable::Product(Axis::Y, Axis::X);

    pub const CATALOG: [Observable; 11] = [
        Observable::X1,
        Observable::Y1,
        Observable::Z1,
        Observable::X2,
        Observable::Y2,
        Observable::Z2,
        Observable::XX,
        Observable::YY,
        Observable::ZZ,
        Observable::XY,
        Observable::YX,
    ];

    pub fn in_catalog(self) -> bool {
        Self::CATALOG.contains(&self)
    }

    /// Faithful evaluation on the actual coordinates.
    pub fn evaluate(self, w: JointOnticState) -> Sign {
        match self {
            Observable::Single(subsystem, axis) => w.coord(subsystem, axis),
            Observable::Product(a, b) => w.first.coord(a) * w.second.coord(b),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Single(subsystem, axis) => write!(f, "{axis}{subsystem}"),
            Observable::Product(a, b) => write!(f, "{a}1{b}2"),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    /// Accepts `X1`, `Y2`, `X1Y2`, or the short product form `XY`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            input: s.to_string(),
            reason: "expected an observable such as X1, Y2, X1X2 or XY".into(),
        };
        let chars: Vec<char> = s.trim().chars().collect();
        let axis = |c: char| Axis::from_letter(c).ok_or_else(bad);
        match *chars.as_slice() {
            [a, n] if n.is_ascii_digit() => {
                let sub = Subsystem::from_number(n as u8 - b'0').ok_or_else(bad)?;
                Ok(Observable::Single(sub, axis(a)?))
            }
            [a, b] => Ok(Observable::Product(axis(a)?, axis(b)?)),
            [a, '1', b, '2'] => Ok(Observable::Product(axis(a)?, axis(b)?)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Observable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Evaluates `obs` on the ontic state `w`.
pub fn evaluate_observable(obs: Observable, w: JointOnticState) -> Sign {
    obs.evaluate(w)
}

/// Coordinate products used by the correlated post-measurement states.
///
/// `direct` is `(x1·x2, y1·y2, z1·z2)`; `swapped` is `(x1·y2, y1·x2, z1·z2)`.
/// A `-1` entry marks an unequal coordinate pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParityProfile {
    pub direct: [Sign; 3],
    pub swapped: [Sign; 3],
}

impl ParityProfile {
    pub fn direct_inequalities(&self) -> usize {
        self.direct.iter().filter(|s| **s == Sign::Minus).count()
    }

    pub fn swapped_inequalities(&self) -> usize {
        self.swapped.iter().filter(|s| **s == Sign::Minus).count()
    }
}

pub fn parity_profile(w: JointOnticState) -> ParityProfile {
    let (a, b) = (w.first, w.second);
    ParityProfile {
        direct: [a.x * b.x, a.y * b.y, a.z * b.z],
        swapped: [a.x * b.y, a.y * b.x, a.z * b.z],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Minus as M, Plus as P};

    fn demo_state() -> JointOnticState {
        JointOnticState::new(OnticState::new(P, M, P), OnticState::new(P, P, M))
    }

    #[test]
    fn sign_algebra() {
        assert_eq!(P * P, P);
        assert_eq!(P * M, M);
        assert_eq!(M * M, P);
        assert_eq!(-P, M);
        assert_eq!([M, M, M].into_iter().product::<Sign>(), M);
    }

    #[test]
    fn evaluates_demo_products() {
        let w = demo_state();
        assert_eq!(evaluate_observable(Observable::XX, w), P);
        assert_eq!(evaluate_observable(Observable::YY, w), M);
        assert_eq!(evaluate_observable(Observable::ZZ, w), M);
    }

    #[test]
    fn single_observable_projects_coordinate() {
        for w in JointOnticState::all().filter(|w| w.first.x == P) {
            assert_eq!(evaluate_observable(Observable::X1, w), P);
        }
    }

    #[test]
    fn parity_profile_examples() {
        let same = JointOnticState::new(OnticState::new(P, P, P), OnticState::new(P, P, P));
        let p = parity_profile(same);
        assert_eq!(p.direct, [P, P, P]);
        assert_eq!(p.swapped, [P, P, P]);

        let p = parity_profile(demo_state());
        assert_eq!(p.direct, [P, M, M]);
        assert_eq!(p.swapped, [P, M, M]);

        let antipodal = JointOnticState::new(OnticState::new(P, P, P), OnticState::new(M, M, M));
        assert_eq!(parity_profile(antipodal).direct, [M, M, M]);
    }

    #[test]
    fn each_direct_pattern_occurs_eight_times() {
        let mut counts = std::collections::HashMap::new();
        for w in JointOnticState::all() {
            *counts.entry(parity_profile(w).direct).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 8);
        assert!(counts.values().all(|&c| c == 8));
    }

    #[test]
    fn encoding_matches_documented_bit_order() {
        // x1 = -1 only
        let w = JointOnticState::new(OnticState::new(M, P, P), OnticState::new(P, P, P));
        assert_eq!(w.index(), 0b100_000);
        let w = JointOnticState::new(OnticState::new(P, P, P), OnticState::new(P, P, M));
        assert_eq!(w.index(), 0b000_001);
        assert_eq!(demo_state().index(), 0b010_001);
    }

    #[test]
    fn literal_round_trip() {
        let w = demo_state();
        assert_eq!(w.to_string(), "(+,-,+)x(+,+,-)");
        assert_eq!("(+,-,+)x(+,+,-)".parse::<JointOnticState>().unwrap(), w);
        assert_eq!(
            "(+1,-1,+1) x (+1,+1,-1)"
                .parse::<JointOnticState>()
                .unwrap(),
            w
        );
        assert!("(+,-)x(+,+,-)".parse::<JointOnticState>().is_err());
        assert!("(+,-,+)".parse::<JointOnticState>().is_err());
        assert!("(+,?,+)x(+,+,-)".parse::<JointOnticState>().is_err());
    }

    #[test]
    fn observable_literals() {
        for obs in Observable::CATALOG {
            assert_eq!(obs.to_string().parse::<Observable>().unwrap(), obs);
        }
        assert_eq!("XY".parse::<Observable>().unwrap(), Observable::XY);
        assert!(!Observable::Product(Axis::Z, Axis::X).in_catalog());
        assert!("W1".parse::<Observable>().is_err());
        assert!("X3".parse::<Observable>().is_err());
    }
}
