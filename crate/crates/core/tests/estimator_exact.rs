mod common;

use common::*;
use shadow_bias::estimator::{
    biased_local_channel, mean_pauli_estimate, plugin_alpha_star, reduced_density_estimate,
    snapshot_pauli_estimate,
};
use shadow_bias::sampler::collect_shadow;
use shadow_bias::state::{bloch_of, DensityMatrix};
use shadow_bias::{Basis, PauliString, ShadowCollection, Statevector};

fn exact_moments(dist: &[(shadow_bias::Snapshot, f64)], p: &PauliString, eps: f64) -> (f64, f64) {
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (s, prob) in dist {
        let v = snapshot_pauli_estimate(s, p, eps).unwrap();
        m1 += prob * v;
        m2 += prob * v * v;
    }
    (m1, m2 - m1 * m1)
}

#[test]
fn exact_average_is_shrunk_expectation() {
    let state = random_state(3, 77);
    let dist = snapshot_distribution(&state);
    for p in all_paulis(3, 3) {
        let truth = expectation(&state, &dense_pauli(&p));
        for eps in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let (mean, _) = exact_moments(&dist, &p, eps);
            let scale = (1.0 - eps).powf(p.weight() as f64 / 2.0);
            assert!((mean - scale * truth).abs() < 1e-12, "{p} eps={eps}");
        }
    }
}

#[test]
fn exact_variance_law() {
    let state = random_state(3, 78);
    let dist = snapshot_distribution(&state);
    for p in all_paulis(3, 3) {
        let truth = expectation(&state, &dense_pauli(&p));
        let (_, var) = exact_moments(&dist, &p, 0.0);
        let want = 3f64.powi(p.weight() as i32) - truth * truth;
        assert!((var - want).abs() < 1e-12, "{p}: {var} vs {want}");
    }
}

#[test]
fn local_channel_matches_dense_formula() {
    for b in Basis::ALL {
        for bit in [0u8, 1] {
            let proj = eigen_projector(b, bit);
            let lib_proj = shadow_bias::estimator::eigenprojector(b, bit);
            for eps in [0.0, 0.3, 8.0 / 9.0, 1.0] {
                let want = biased_inverse(&proj, eps);
                let got = biased_local_channel(&lib_proj, eps).unwrap();
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((got.get(i, j) - want[(i, j)]).norm() < 1e-15);
                    }
                }
                assert!((got.trace().re - 1.0).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn full_shrink_gives_maximally_mixed_reduced_state() {
    let state = random_state(3, 1);
    let c = collect_shadow(&state, 200, 2).unwrap();
    let rho = reduced_density_estimate(&c, &[0, 2], 1.0).unwrap();
    assert!(rho.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-15);
}

#[test]
fn single_snapshot_reduced_state() {
    let c = ShadowCollection::from_snapshots(1, 0, "local-pauli-uniform", vec!["Z:0".parse().unwrap()]).unwrap();
    let rho = reduced_density_estimate(&c, &[0], 0.0).unwrap();
    assert!((rho.get(0, 0).re - 2.0).abs() < 1e-15);
    assert!((rho.get(1, 1).re + 1.0).abs() < 1e-15);
}

#[test]
fn zero_state_bloch_estimate_within_five_standard_errors() {
    let state = Statevector::zero(1).unwrap();
    let n_s = 100_000;
    let c = collect_shadow(&state, n_s, 4).unwrap();
    let r = bloch_of(&reduced_density_estimate(&c, &[0], 0.0).unwrap()).unwrap();
    let se = (9.0 / n_s as f64).sqrt();
    for (got, want) in r.0.iter().zip([0.0, 0.0, 1.0]) {
        assert!((got - want).abs() < 5.0 * se, "{:?}", r.0);
    }
}

#[test]
fn reduced_estimate_agrees_with_pauli_means() {
    let state = random_state(3, 9);
    let c = collect_shadow(&state, 3000, 8).unwrap();
    let rho = reduced_density_estimate(&c, &[1], 0.2).unwrap();
    let r = bloch_of(&rho).unwrap();
    for (k, s) in ["IXI", "IYI", "IZI"].iter().enumerate() {
        let m = mean_pauli_estimate(&c, &s.parse().unwrap(), 0.2).unwrap();
        assert!((m.value - r.0[k]).abs() < 1e-12);
    }
}

#[test]
fn plugin_alpha_for_an_eigenstate() {
    // |000> is a +1 eigenstate of ZZZ: every compatible shot gives 27, so the
    // estimated mean is clamped to 1 once there are enough shots.
    let state = Statevector::zero(3).unwrap();
    let n_s = 20_000;
    let c = collect_shadow(&state, n_s, 6).unwrap();
    let p: PauliString = "ZZZ".parse().unwrap();
    let m = mean_pauli_estimate(&c, &p, 0.0).unwrap().value;
    let alpha = plugin_alpha_star(&c, &p).unwrap();
    let mc = m.clamp(-1.0, 1.0);
    let want = 1.0 / (1.0 + n_s as f64 * mc * mc / (27.0 - mc * mc));
    assert!((alpha - want).abs() < 1e-15);
    if m >= 1.0 {
        assert!((alpha - 26.0 / (26.0 + n_s as f64)).abs() < 1e-15);
    }
}

#[test]
fn plugin_alpha_is_one_without_compatible_shots() {
    let c = ShadowCollection::from_snapshots(
        2,
        0,
        "local-pauli-uniform",
        vec!["XX:00".parse().unwrap(), "YZ:01".parse().unwrap()],
    )
    .unwrap();
    assert_eq!(plugin_alpha_star(&c, &"ZZ".parse().unwrap()).unwrap(), 1.0);
}
