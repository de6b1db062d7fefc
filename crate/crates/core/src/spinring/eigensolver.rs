//! Lowest eigenpair of a Pauli-sum Hamiltonian by restarted Lanczos with full
//! reorthogonalization. `H` is applied matrix-free; only the small tridiagonal
//! projection is diagonalized densely.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::hamiltonian::Hamiltonian;
use crate::error::{Error, Result};
use crate::rng;
use crate::state::Statevector;
use crate::C64;

/// Largest register accepted by [`ground_state`].
pub const MAX_GROUND_STATE_QUBITS: usize = 14;
/// Residual the solver aims for before giving up on further restarts.
pub const TARGET_RESIDUAL: f64 = 1e-10;
/// Residual below which a result is accepted.
pub const ACCEPT_RESIDUAL: f64 = 1e-8;

const KRYLOV_DIM: usize = 60;
const MAX_RESTARTS: usize = 100;
const START_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Serialize)]
pub struct GroundState {
    pub energy: f64,
    #[serde(skip)]
    pub state: Statevector,
    /// `‖Hψ - Eψ‖`.
    pub residual: f64,
    pub restarts: usize,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn residual_of(h: &Hamiltonian, psi: &[C64], energy: f64) -> Result<f64> {
    let hpsi = h.apply(psi)?;
    Ok(hpsi
        .iter()
        .zip(psi)
        .map(|(a, b)| (a - b * energy).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Removes the components of `v` along the orthonormal `basis`, twice.
fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// One Lanczos cycle from the unit vector `start`; returns the lowest Ritz
/// pair of the Krylov space.
fn lanczos_cycle(h: &Hamiltonian, start: Vec<C64>, max_dim: usize) -> Result<(f64, Vec<C64>)> {
    let mut basis: Vec<Vec<C64>> = vec![start];
    let mut alpha = Vec::with_capacity(max_dim);
    let mut beta: Vec<f64> = Vec::with_capacity(max_dim);
    let scale = h.coefficient_norm().max(1.0);

    loop {
        let j = basis.len() - 1;
        let mut w = h.apply(&basis[j])?;
        alpha.push(dot(&basis[j], &w).re);
        orthogonalize(&mut w, &basis);
        let b = norm(&w);
        if basis.len() == max_dim || b <= 1e-13 * scale {
            break;
        }
        w.iter_mut().for_each(|x| *x /= b);
        beta.push(b);
        basis.push(w);
    }

    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, k| {
        if i == k {
            alpha[i]
        } else if i + 1 == k {
            beta[i]
        } else if k + 1 == i {
            beta[k]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (low, &energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    let y = eig.eigenvectors.column(low);

    let dim = basis[0].len();
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    for (q, &c) in basis.iter().zip(y.iter()) {
        psi.iter_mut().zip(q).for_each(|(x, v)| *x += v * c);
    }
    let nrm = norm(&psi);
    psi.iter_mut().for_each(|x| *x /= nrm);
    Ok((energy, psi))
}

/// Multiplies by a phase so the largest-magnitude amplitude is real positive.
fn fix_phase(psi: &mut [C64]) {
    let pivot = psi
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .unwrap_or(C64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    psi.iter_mut().for_each(|x| *x *= phase);
}

/// Lowest eigenvalue and eigenvector of `h`.
///
/// The start vector is a fixed pseudo-random state, so the result is
/// deterministic. The global phase makes the largest amplitude real positive.
pub fn ground_state(h: &Hamiltonian) -> Result<GroundState> {
    let n = h.n_qubits();
    if n == 0 || n > MAX_GROUND_STATE_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "ground state supports 1..={MAX_GROUND_STATE_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let krylov = KRYLOV_DIM.min(dim);

    let mut start = Statevector::random(n, &mut rng::stream(START_SEED))?
        .amplitudes()
        .to_vec();
    let mut best: Option<(f64, Vec<C64>, f64)> = None;
    for restart in 0..MAX_RESTARTS {
        let (energy, psi) = lanczos_cycle(h, start, krylov)?;
        let res = residual_of(h, &psi, energy)?;
        if best.as_ref().is_none_or(|b| res < b.2) {
            best = Some((energy, psi.clone(), res));
        }
        if res <= TARGET_RESIDUAL {
            return finish(h, energy, psi, restart);
        }
        start = psi;
    }
    let (energy, psi, res) = best.expect("at least one cycle");
    if res <= ACCEPT_RESIDUAL {
        finish(h, energy, psi, MAX_RESTARTS)
    } else {
        Err(Error::NonConvergence {
            iterations: MAX_RESTARTS,
            residual: res,
        })
    }
}

fn finish(h: &Hamiltonian, energy: f64, mut psi: Vec<C64>, restarts: usize) -> Result<GroundState> {
    fix_phase(&mut psi);
    let state = Statevector::normalized(psi)?;
    // Rayleigh quotient of the final vector is at least as accurate as the
    // Ritz value.
    let energy_rq = h.expectation(&state).unwrap_or(energy);
    let residual = residual_of(h, state.amplitudes(), energy_rq)?;
    Ok(GroundState {
        energy: energy_rq,
        state,
        residual,
        restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinring::hamiltonian::{build_spin_ring, SpinRingSpec};

    #[test]
    fn decoupled_ring_ground_state_is_a_basis_state() {
        let omega = vec![0.5, -0.25, 0.75, -1.0];
        let spec = SpinRingSpec::with_fields(0.0, omega.clone()).unwrap();
        let gs = ground_state(&spec.hamiltonian()).unwrap();
        let expected: f64 = -omega.iter().map(|w| w.abs()).sum::<f64>();
        assert!((gs.energy - expected).abs() < 1e-10);
        // ω_k > 0 favours |1>, ω_k < 0 favours |0>.
        let index = omega
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .fold(0usize, |acc, (k, _)| acc | 1 << k);
        let amp = gs.state.amplitudes()[index];
        assert!((amp.re - 1.0).abs() < 1e-10 && amp.im.abs() < 1e-10);
    }

    #[test]
    fn all_positive_fields_give_minus_n() {
        let spec = SpinRingSpec::with_fields(0.0, vec![1.0; 5]).unwrap();
        let gs = ground_state(&spec.hamiltonian()).unwrap();
        assert!((gs.energy + 5.0).abs() < 1e-10);
    }

    #[test]
    fn residual_and_phase_convention() {
        let (_, h) = build_spin_ring(6, 0.3, 11).unwrap();
        let gs = ground_state(&h).unwrap();
        assert!(gs.residual <= ACCEPT_RESIDUAL);
        let pivot = gs
            .state
            .amplitudes()
            .iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap();
        assert!(pivot.re > 0.0 && pivot.im.abs() < 1e-14);
    }

    #[test]
    fn rejects_oversized_registers() {
        let spec = SpinRingSpec::with_fields(0.3, vec![0.0; 15]).unwrap();
        assert!(ground_state(&spec.hamiltonian()).is_err());
    }
}
