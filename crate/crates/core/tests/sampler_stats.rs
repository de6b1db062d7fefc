mod common;

use common::*;
use shadow_bias::estimator::snapshot_pauli_estimate;
use shadow_bias::sampler::{collect_shadow, outcome_distribution};
use shadow_bias::{Basis, PauliString, ShadowCollection, Statevector};

#[test]
fn outcome_distribution_matches_dense_born_rule() {
    let state = random_state(3, 21);
    for code in 0..27usize {
        let bases: Vec<Basis> = (0..3).map(|j| Basis::ALL[(code / 3usize.pow(j)) % 3]).collect();
        let lib = outcome_distribution(&state, &bases).unwrap();
        let dense = born_probabilities(&state, &bases);
        for (a, b) in lib.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}

#[test]
fn basis_choice_is_uniform() {
    let state = Statevector::zero(4).unwrap();
    let shadow = collect_shadow(&state, 30_000, 3).unwrap();
    let total = (shadow.len() * 4) as f64;
    for b in Basis::ALL {
        let count = shadow
            .snapshots()
            .iter()
            .flat_map(|s| s.bases())
            .filter(|&&x| x == b)
            .count() as f64;
        let sd = (total / 3.0 * (2.0 / 3.0)).sqrt();
        assert!((count - total / 3.0).abs() < 4.0 * sd, "{b:?}: {count}");
    }
}

/// Per-basis outcome frequencies against the exact Born distribution, each
/// within 4 binomial standard deviations.
#[test]
fn outcomes_follow_born_rule() {
    let state = random_state(2, 4);
    let shadow = collect_shadow(&state, 90_000, 17).unwrap();
    for code in 0..9usize {
        let bases = [Basis::ALL[code % 3], Basis::ALL[code / 3]];
        let matching: Vec<_> = shadow.snapshots().iter().filter(|s| s.bases() == bases).collect();
        let m = matching.len() as f64;
        let probs = born_probabilities(&state, &bases);
        for (idx, p) in probs.iter().enumerate() {
            let count = matching
                .iter()
                .filter(|s| s.outcomes()[0] as usize | (s.outcomes()[1] as usize) << 1 == idx)
                .count() as f64;
            let sd = (m * p * (1.0 - p)).sqrt().max(1.0);
            assert!((count - m * p).abs() < 4.0 * sd, "bases {bases:?} outcome {idx}");
        }
    }
}

#[test]
fn computational_basis_state_gives_deterministic_z_outcomes() {
    let state = Statevector::basis(3, 0b101).unwrap();
    let shadow = collect_shadow(&state, 500, 1).unwrap();
    for s in shadow.snapshots() {
        for q in 0..3 {
            if s.bases()[q] == Basis::Z {
                assert_eq!(s.outcomes()[q] as usize, (0b101 >> q) & 1);
            }
        }
    }
}

#[test]
fn collection_json_round_trip_and_determinism() {
    let state = random_state(3, 2);
    let a = collect_shadow(&state, 300, 99).unwrap();
    assert_eq!(a, collect_shadow(&state, 300, 99).unwrap());
    assert_ne!(a, collect_shadow(&state, 300, 100).unwrap());
    assert_eq!(ShadowCollection::from_json(&a.to_json().unwrap()).unwrap(), a);
}

#[test]
fn empirical_mean_converges_to_exact_value() {
    let state = random_state(3, 31);
    let shadow = collect_shadow(&state, 50_000, 5).unwrap();
    for s in ["ZII", "XYI", "ZZZ", "YXZ"] {
        let p: PauliString = s.parse().unwrap();
        let values: Vec<f64> = shadow
            .snapshots()
            .iter()
            .map(|snap| snapshot_pauli_estimate(snap, &p, 0.0).unwrap())
            .collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let exact = expectation(&state, &dense_pauli(&p));
        assert!((mean - exact).abs() < 5.0 * (var / n).sqrt(), "{s}");
    }
}
