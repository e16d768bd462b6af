//! Independent brute-force re-implementation of the cube model, used as a
//! test oracle.
//!
//! Every state the model can reach from a point state is uniform over its
//! support, so a distribution is represented here as a plain set of joint
//! indices and branch probabilities are counting ratios. Coordinates are
//! read straight from the documented 6-bit layout (`x1 y1 z1 x2 y2 z2`,
//! bit set = -1) and post-states from the literal equality conditions.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub type Set = BTreeSet<u8>;

/// Coordinate as +1 / -1. `cube` is 1 or 2, `axis` is 0 (x), 1 (y), 2 (z).
pub fn coord(w: u8, cube: u8, axis: u8) -> i8 {
    let bit = 5 - (3 * (cube - 1) + axis);
    if w >> bit & 1 == 1 {
        -1
    } else {
        1
    }
}

fn all() -> impl Iterator<Item = u8> {
    0u8..64
}

pub fn set_where(pred: impl Fn(u8) -> bool) -> Set {
    all().filter(|&w| pred(w)).collect()
}

/// Supports of the eight correlated states, written as the literal
/// (in)equalities between coordinates.
pub fn named(name: &str) -> Set {
    let x1 = |w| coord(w, 1, 0);
    let y1 = |w| coord(w, 1, 1);
    let z1 = |w| coord(w, 1, 2);
    let x2 = |w| coord(w, 2, 0);
    let y2 = |w| coord(w, 2, 1);
    let z2 = |w| coord(w, 2, 2);
    match name {
        "psi+" => set_where(|w| x1(w) == x2(w) && y1(w) == y2(w) && z1(w) != z2(w)),
        "phi+" => set_where(|w| x1(w) == x2(w) && y1(w) != y2(w) && z1(w) == z2(w)),
        "phi-" => set_where(|w| x1(w) != x2(w) && y1(w) == y2(w) && z1(w) == z2(w)),
        "psi-" => set_where(|w| x1(w) != x2(w) && y1(w) != y2(w) && z1(w) != z2(w)),
        "phi_i+" => set_where(|w| x1(w) == y2(w) && y1(w) == x2(w) && z1(w) == z2(w)),
        "psi_i-" => set_where(|w| x1(w) == y2(w) && y1(w) != x2(w) && z1(w) != z2(w)),
        "psi_i+" => set_where(|w| x1(w) != y2(w) && y1(w) == x2(w) && z1(w) != z2(w)),
        "phi_i-" => set_where(|w| x1(w) != y2(w) && y1(w) != x2(w) && z1(w) == z2(w)),
        other => panic!("unknown state {other}"),
    }
}

/// Table rows, columns (+,+) (+,-) (-,+) (-,-).
fn table_row(setting: &str) -> [&'static str; 4] {
    match setting {
        "XX&YY" => ["psi+", "phi+", "phi-", "psi-"],
        "XX&ZZ" => ["phi+", "psi+", "phi-", "psi-"],
        "ZZ&YY" => ["phi-", "phi+", "psi+", "psi-"],
        "XY&YX" => ["phi_i+", "psi_i-", "psi_i+", "phi_i-"],
        "YX&ZZ" => ["phi_i+", "psi_i+", "phi_i-", "psi_i-"],
        "XY&ZZ" => ["phi_i+", "psi_i-", "phi_i-", "psi_i+"],
        other => panic!("no table row for {other}"),
    }
}

fn axis_of(c: char) -> u8 {
    match c {
        'X' => 0,
        'Y' => 1,
        'Z' => 2,
        _ => panic!("axis {c}"),
    }
}

/// Oracle's own view of a setting literal: the two measured quantities as
/// (cube-1 axis or None, cube-2 axis or None) pairs.
#[derive(Clone, Debug)]
pub struct OSetting {
    pub literal: String,
    local: bool,
    parts: [(u8, u8); 2],
}

pub fn setting(literal: &str) -> OSetting {
    let (l, r) = literal.split_once('&').expect("joint setting");
    let lc: Vec<char> = l.chars().collect();
    let rc: Vec<char> = r.chars().collect();
    if lc.len() == 2 && lc[1] == '1' {
        OSetting {
            literal: literal.into(),
            local: true,
            parts: [(axis_of(lc[0]), axis_of(rc[0])), (0, 0)],
        }
    } else {
        OSetting {
            literal: literal.into(),
            local: false,
            parts: [
                (axis_of(lc[0]), axis_of(lc[1])),
                (axis_of(rc[0]), axis_of(rc[1])),
            ],
        }
    }
}

impl OSetting {
    pub fn outcome(&self, w: u8) -> (i8, i8) {
        if self.local {
            let (a, b) = self.parts[0];
            (coord(w, 1, a), coord(w, 2, b))
        } else {
            let [(a, b), (c, d)] = self.parts;
            (
                coord(w, 1, a) * coord(w, 2, b),
                coord(w, 1, c) * coord(w, 2, d),
            )
        }
    }

    pub fn post(&self, outcome: (i8, i8)) -> Set {
        if self.local {
            let (a, b) = self.parts[0];
            set_where(|w| coord(w, 1, a) == outcome.0 && coord(w, 2, b) == outcome.1)
        } else {
            let col = usize::from(outcome.0 < 0) * 2 + usize::from(outcome.1 < 0);
            named(table_row(&self.literal)[col])
        }
    }

    /// Observable names and values an outcome reveals.
    pub fn readings(&self, outcome: (i8, i8)) -> Vec<(String, i8)> {
        let letter = |a: u8| ['X', 'Y', 'Z'][a as usize];
        if self.local {
            let (a, b) = self.parts[0];
            vec![
                (format!("{}1", letter(a)), outcome.0),
                (format!("{}2", letter(b)), outcome.1),
                (
                    format!("{}1{}2", letter(a), letter(b)),
                    outcome.0 * outcome.1,
                ),
            ]
        } else {
            let [(a, b), (c, d)] = self.parts;
            vec![
                (format!("{}1{}2", letter(a), letter(b)), outcome.0),
                (format!("{}1{}2", letter(c), letter(d)), outcome.1),
            ]
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OTrace {
    pub outcomes: Vec<(i8, i8)>,
    pub posts: Vec<Set>,
    /// Exact probability as (numerator, denominator) in lowest terms.
    pub probability: (u64, u64),
}

/// Exhaustive branching from a uniform distribution on `start`.
pub fn run(start: &Set, settings: &[OSetting]) -> Vec<OTrace> {
    let mut frontier = vec![(
        start.clone(),
        OTrace {
            outcomes: vec![],
            posts: vec![],
            probability: (1, 1),
        },
    )];
    for s in settings {
        let mut next = Vec::new();
        for (support, trace) in frontier {
            let mut by_outcome: BTreeMap<(i8, i8), u64> = BTreeMap::new();
            for &w in &support {
                *by_outcome.entry(s.outcome(w)).or_default() += 1;
            }
            // (+,+) (+,-) (-,+) (-,-) order
            let mut keys: Vec<_> = by_outcome.into_iter().collect();
            keys.sort_by_key(|((a, b), _)| (-a, -b));
            for (outcome, count) in keys {
                let (n, d) = (
                    trace.probability.0 * count,
                    trace.probability.1 * support.len() as u64,
                );
                let g = gcd(n, d);
                let post = s.post(outcome);
                let mut t = trace.clone();
                t.outcomes.push(outcome);
                t.posts.push(post.clone());
                t.probability = (n / g, d / g);
                next.push((post, t));
            }
        }
        frontier = next;
    }
    frontier.into_iter().map(|(_, t)| t).collect()
}

/// First observable read twice with different values on the trace.
pub fn flip(settings: &[OSetting], trace: &OTrace) -> Option<(String, i8, i8)> {
    let mut seen: BTreeMap<String, i8> = BTreeMap::new();
    for (s, &o) in settings.iter().zip(&trace.outcomes) {
        for (name, v) in s.readings(o) {
            match seen.get(&name) {
                Some(&first) if first != v => return Some((name, first, v)),
                Some(_) => {}
                None => {
                    seen.insert(name, v);
                }
            }
        }
    }
    None
}

/// Product of the three values a single-trace run assigns to `observables`.
pub fn context_product(start: u8, settings: &[&str], observables: [&str; 3]) -> i8 {
    let settings: Vec<OSetting> = settings.iter().map(|s| setting(s)).collect();
    let traces = run(&BTreeSet::from([start]), &settings);
    assert_eq!(
        traces.len(),
        1,
        "point start within one family is deterministic"
    );
    let mut values = BTreeMap::new();
    for (s, &o) in settings.iter().zip(&traces[0].outcomes) {
        for (name, v) in s.readings(o) {
            values.entry(name).or_insert(v);
        }
    }
    observables.iter().map(|o| values[*o]).product()
}
