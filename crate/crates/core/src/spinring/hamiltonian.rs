use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::rng;
use crate::state::{exact_expectation, Statevector};
use crate::C64;

/// Parameters of a periodic spin ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinRingSpec {
    pub n: usize,
    pub coupling: f64,
    pub omega: Vec<f64>,
    /// Seed the on-site fields were drawn from, if they were generated.
    pub omega_seed: Option<u64>,
}

impl SpinRingSpec {
    /// Ring with explicit on-site fields `omega_k ∈ [-1, 1]`.
    pub fn with_fields(coupling: f64, omega: Vec<f64>) -> Result<Self> {
        let n = omega.len();
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "a ring needs at least 3 sites, got {n}"
            )));
        }
        if !coupling.is_finite() {
            return Err(Error::out_of_range("J", coupling, "finite reals"));
        }
        for &w in &omega {
            check_range("omega", w, -1.0, 1.0, "[-1, 1]")?;
        }
        Ok(Self {
            n,
            coupling,
            omega,
            omega_seed: None,
        })
    }

    /// Ring with fields drawn uniformly from `[-1, 1]`.
    pub fn random(n: usize, coupling: f64, omega_seed: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "a ring needs at least 3 sites, got {n}"
            )));
        }
        let mut stream = rng::stream(rng::purpose_seed(omega_seed, "omega"));
        let omega = (0..n).map(|_| stream.random_range(-1.0..=1.0)).collect();
        let mut spec = Self::with_fields(coupling, omega)?;
        spec.omega_seed = Some(omega_seed);
        Ok(spec)
    }

    /// `ω_k Z_k` then `J X_kX_{k+1}`, `J Y_kY_{k+1}`, `J Z_kZ_{k+1}` for each
    /// site `k`, with `k + 1` taken mod `n`.
    pub fn hamiltonian(&self) -> Hamiltonian {
        let n = self.n;
        let mut terms = Vec::with_capacity(4 * n);
        for k in 0..n {
            let next = (k + 1) % n;
            let single = PauliString::from_sparse(n, &[(k, Pauli::Z)]).expect("site in range");
            terms.push((self.omega[k], single));
            for p in Pauli::NON_IDENTITY {
                let pair = PauliString::from_sparse(n, &[(k, p), (next, p)]).expect("sites in range");
                terms.push((self.coupling, pair));
            }
        }
        Hamiltonian { n, terms }
    }
}

/// `(spec, H)` for a ring of `n` sites with fields drawn from `omega_seed`.
pub fn build_spin_ring(n: usize, coupling: f64, omega_seed: u64) -> Result<(SpinRingSpec, Hamiltonian)> {
    let spec = SpinRingSpec::random(n, coupling, omega_seed)?;
    let h = spec.hamiltonian();
    Ok((spec, h))
}

/// Real linear combination of Pauli strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Hamiltonian {
    pub fn new(n: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if let Some((_, p)) = terms.iter().find(|(_, p)| p.n_qubits() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.n_qubits(),
            });
        }
        if terms.iter().any(|(c, _)| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(Self { n, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// Terms as Pauli strings with the coefficient folded in.
    pub fn scaled_terms(&self) -> Vec<PauliString> {
        self.terms.iter().map(|(c, p)| p.scaled(*c)).collect()
    }

    /// `Σ |c_i|`, an upper bound on the spectral radius.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms
            .iter()
            .map(|(c, p)| (c * p.coefficient()).abs())
            .sum()
    }

    /// `H |psi>` on raw amplitudes.
    pub fn apply(&self, amps: &[C64]) -> Result<Vec<C64>> {
        let mut out = vec![C64::new(0.0, 0.0); amps.len()];
        for (c, p) in &self.terms {
            p.apply_add(amps, *c, &mut out)?;
        }
        Ok(out)
    }

    pub fn expectation(&self, state: &Statevector) -> Result<f64> {
        self.terms
            .iter()
            .map(|(c, p)| Ok(c * exact_expectation(state, p)?))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_count_and_weights() {
        let (spec, h) = build_spin_ring(3, 0.3, 1).unwrap();
        assert_eq!(spec.omega.len(), 3);
        assert_eq!(h.terms().len(), 12);
        let weights: Vec<usize> = h.terms().iter().map(|(_, p)| p.weight()).collect();
        assert_eq!(weights.iter().filter(|&&w| w == 1).count(), 3);
        assert_eq!(weights.iter().filter(|&&w| w == 2).count(), 9);
        assert!(spec.omega.iter().all(|w| (-1.0..=1.0).contains(w)));
    }

    #[test]
    fn ring_wraps_around() {
        let spec = SpinRingSpec::with_fields(1.0, vec![0.0; 4]).unwrap();
        let h = spec.hamiltonian();
        let last: Vec<String> = h.terms()[13..16].iter().map(|(_, p)| p.to_string()).collect();
        assert_eq!(last, ["XIIX", "YIIY", "ZIIZ"]);
    }

    #[test]
    fn fields_are_seeded() {
        assert_eq!(build_spin_ring(5, 0.3, 9).unwrap().0, build_spin_ring(5, 0.3, 9).unwrap().0);
        assert_ne!(build_spin_ring(5, 0.3, 9).unwrap().0, build_spin_ring(5, 0.3, 10).unwrap().0);
    }

    #[test]
    fn rejects_small_rings_and_bad_fields() {
        assert!(build_spin_ring(2, 0.3, 0).is_err());
        assert!(SpinRingSpec::with_fields(0.3, vec![0.0, 2.0, 0.0]).is_err());
    }

    #[test]
    fn decoupled_energy_of_all_ones() {
        let spec = SpinRingSpec::with_fields(0.0, vec![1.0; 4]).unwrap();
        let h = spec.hamiltonian();
        let ones = Statevector::basis(4, 0b1111).unwrap();
        assert_eq!(h.expectation(&ones).unwrap(), -4.0);
    }
}
