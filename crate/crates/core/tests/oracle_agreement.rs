//! Cross-checks the model against the brute-force oracle in `common`.

mod common;

use std::collections::BTreeSet;

use magicsquare_core::{
    canonical_state, parity_profile, point_state, run_exact, CanonicalStateName, JointOnticState,
    MeasurementSetting, Outcome, Sign,
};
use proptest::prelude::*;

fn sign(v: i8) -> Sign {
    if v > 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn joint_literals() -> Vec<String> {
    MeasurementSetting::joint_settings()
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn agree(
    start_model: &magicsquare_core::EpistemicState,
    start_oracle: &common::Set,
    literals: &[String],
) {
    let settings: Vec<MeasurementSetting> = literals.iter().map(|s| s.parse().unwrap()).collect();
    let osettings: Vec<common::OSetting> = literals.iter().map(|s| common::setting(s)).collect();
    let ours = run_exact(start_model, &settings).unwrap();
    let theirs = common::run(start_oracle, &osettings);
    assert_eq!(ours.len(), theirs.len(), "{literals:?}");
    for (a, b) in ours.iter().zip(&theirs) {
        let outcomes: Vec<Outcome> = b
            .outcomes
            .iter()
            .map(|&(x, y)| Outcome::Pair(sign(x), sign(y)))
            .collect();
        assert_eq!(a.outcomes(), outcomes);
        assert_eq!(
            (
                a.probability.numerator() as u64,
                a.probability.denominator() as u64
            ),
            b.probability
        );
        for (step, post) in a.steps.iter().zip(&b.posts) {
            let support: BTreeSet<u8> = step.post.support().into_iter().map(|i| i as u8).collect();
            assert_eq!(&support, post);
        }
    }
}

#[test]
fn canonical_supports_match_literal_conditions() {
    for name in CanonicalStateName::ALL.into_iter().filter(|n| n.is_joint()) {
        let support: BTreeSet<u8> = canonical_state(name)
            .support()
            .into_iter()
            .map(|i| i as u8)
            .collect();
        assert_eq!(support, common::named(name.literal()), "{name}");
    }
}

#[test]
fn coordinates_match_documented_layout() {
    for w in JointOnticState::all() {
        let i = w.index() as u8;
        assert_eq!(w.first.x.to_i32() as i8, common::coord(i, 1, 0));
        assert_eq!(w.first.z.to_i32() as i8, common::coord(i, 1, 2));
        assert_eq!(w.second.y.to_i32() as i8, common::coord(i, 2, 1));
        let direct = parity_profile(w).direct;
        assert_eq!(
            direct[2].to_i32() as i8,
            common::coord(i, 1, 2) * common::coord(i, 2, 2)
        );
    }
}

#[test]
fn every_single_and_double_step_agrees() {
    let literals = joint_literals();
    for w in JointOnticState::all() {
        let start = BTreeSet::from([w.index() as u8]);
        for a in &literals {
            agree(&point_state(w), &start, std::slice::from_ref(a));
            for b in &literals {
                agree(&point_state(w), &start, &[a.clone(), b.clone()]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_sequences_agree(
        start in 0usize..64,
        picks in prop::collection::vec(0usize..15, 0..6),
    ) {
        let literals = joint_literals();
        let seq: Vec<String> = picks.iter().map(|&i| literals[i].clone()).collect();
        let w = JointOnticState::from_index(start).unwrap();
        agree(&point_state(w), &BTreeSet::from([start as u8]), &seq);
    }

    #[test]
    fn random_sequences_from_correlated_states_agree(
        name in 0usize..8,
        picks in prop::collection::vec(0usize..15, 0..5),
    ) {
        let name = CanonicalStateName::ALL.into_iter().filter(|n| n.is_joint()).nth(name).unwrap();
        let literals = joint_literals();
        let seq: Vec<String> = picks.iter().map(|&i| literals[i].clone()).collect();
        agree(&canonical_state(name), &common::named(name.literal()), &seq);
    }
}
