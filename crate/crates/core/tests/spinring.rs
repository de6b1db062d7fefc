mod common;

use common::*;
use shadow_bias::spinring::density::DEFAULT_Z;
use shadow_bias::spinring::{build_spin_ring, emit_density_samples, ground_state, SpinRingSpec};
use shadow_bias::{rng, BlochVector, Statevector};

#[test]
fn hamiltonian_is_hermitian_with_4n_terms() {
    for n in 3..=6 {
        let (_, h) = build_spin_ring(n, 0.3, n as u64).unwrap();
        assert_eq!(h.terms().len(), 4 * n);
        if n <= 5 {
            let m = dense_hamiltonian(h.terms(), n);
            assert!((&m - m.adjoint()).norm() < 1e-14);
        }
    }
}

#[test]
fn ground_state_matches_dense_diagonalization() {
    for n in 3..=4 {
        for seed in 0..3 {
            let (_, h) = build_spin_ring(n, 0.3, seed).unwrap();
            let gs = ground_state(&h).unwrap();
            let (e, v) = dense_ground(&dense_hamiltonian(h.terms(), n));
            assert!((gs.energy - e).abs() < 1e-10, "n={n}: {} vs {e}", gs.energy);
            let overlap = (v.adjoint() * to_vector(&gs.state))[(0, 0)].norm();
            assert!((overlap - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn decoupled_ring_energy() {
    let omega = vec![0.3, -0.7, 0.1, -0.2, 0.9];
    let spec = SpinRingSpec::with_fields(0.0, omega.clone()).unwrap();
    let gs = ground_state(&spec.hamiltonian()).unwrap();
    assert!((gs.energy + omega.iter().map(|w: &f64| w.abs()).sum::<f64>()).abs() < 1e-10);
}

#[test]
fn energy_invariant_under_ring_rotation() {
    let base = SpinRingSpec::random(6, 0.3, 4).unwrap();
    let e0 = ground_state(&base.hamiltonian()).unwrap().energy;
    for shift in 1..6 {
        let mut omega = base.omega.clone();
        omega.rotate_left(shift);
        let rotated = SpinRingSpec::with_fields(0.3, omega).unwrap();
        let e = ground_state(&rotated.hamiltonian()).unwrap().energy;
        assert!((e - e0).abs() < 1e-10);
    }
}

#[test]
fn variational_bound_on_random_trial_states() {
    let (_, h) = build_spin_ring(5, 0.3, 2).unwrap();
    let gs = ground_state(&h).unwrap();
    let mut g = rng::stream(8);
    for _ in 0..100 {
        let trial = Statevector::random(5, &mut g).unwrap();
        assert!(gs.energy <= h.expectation(&trial).unwrap() + 1e-12);
    }
}

#[test]
fn ten_site_residual() {
    let (_, h) = build_spin_ring(10, 0.3, 1).unwrap();
    let gs = ground_state(&h).unwrap();
    assert!(gs.residual <= 1e-8, "{}", gs.residual);
}

#[test]
fn density_samples_are_unbiased_and_mostly_improved() {
    let r = BlochVector::new(0.0, 0.0, DEFAULT_Z);
    let d = emit_density_samples(&r, 100, 10_000, 0.1, 3).unwrap();
    let z: Vec<f64> = d.points.iter().map(|p| p.unbiased[2]).collect();
    let n = z.len() as f64;
    let mean = z.iter().sum::<f64>() / n;
    let sd = (z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    assert!((mean - DEFAULT_Z).abs() < 5.0 * sd / n.sqrt());
    assert!(d.improved_fraction() > 0.5, "{}", d.improved_fraction());

    let table = d.to_table();
    assert_eq!(table.rows.len(), 10_000);
    let back = shadow_bias::table::Table::read_from(table.to_csv().as_bytes()).unwrap();
    assert_eq!(back.rows, table.rows);
    assert_eq!(back.config, table.config);
}
