//! Statevectors, small density matrices and Bloch vectors.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::C64;

/// Largest register the dense statevector routines accept.
pub const MAX_QUBITS: usize = 20;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Pure state of `n` qubits; amplitude `b` belongs to basis state `|b>` with
/// qubit `j` stored in bit `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<C64>,
}

impl Statevector {
    /// Wraps amplitudes whose squared norm is 1 within `1e-10`.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self { n, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > MAX_QUBITS || index >= 1 << n {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} for {n} qubits"
            )));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Tensor product of single-qubit states; `qubits[0]` is qubit 0.
    pub fn product(qubits: &[[C64; 2]]) -> Result<Self> {
        let n = qubits.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!("{n} qubits")));
        }
        let amps = (0..1usize << n)
            .map(|b| {
                qubits
                    .iter()
                    .enumerate()
                    .fold(C64::new(1.0, 0.0), |acc, (j, v)| acc * v[(b >> j) & 1])
            })
            .collect();
        Self::normalized(amps)
    }

    /// `|+>^{⊗n}`.
    pub fn plus(n: usize) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::product(&vec![[C64::new(h, 0.0), C64::new(h, 0.0)]; n])
    }

    /// Haar-random state from normalized complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!("{n} qubits")));
        }
        let amps = (0..1usize << n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Statevector) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "amplitude count {len} is not a power of two >= 2"
        )));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!("{n} qubits")));
    }
    Ok(n)
}

/// `<psi|P|psi>` including the coefficient of `P`, without materializing the
/// operator.
pub fn exact_expectation(state: &Statevector, p: &PauliString) -> Result<f64> {
    if p.n_qubits() != state.n {
        return Err(Error::DimensionMismatch {
            expected: state.n,
            found: p.n_qubits(),
        });
    }
    let (x, z, ys) = p.masks();
    let amps = &state.amps;
    let mut acc = ZERO;
    for (b, a) in amps.iter().enumerate() {
        let term = amps[b ^ x].conj() * a;
        if (b & z).count_ones() % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok((crate::pauli::i_pow(ys) * acc).re * p.coefficient())
}

/// Dense `2^k x 2^k` matrix, row-major. Used for reduced states and snapshot
/// reconstructions of at most a few qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    k: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    pub fn new(k: usize, entries: Vec<C64>) -> Result<Self> {
        let dim = 1usize << k;
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {k}-qubit matrix",
                entries.len()
            )));
        }
        Ok(Self { k, entries })
    }

    pub fn zeros(k: usize) -> Self {
        let dim = 1usize << k;
        Self {
            k,
            entries: vec![ZERO; dim * dim],
        }
    }

    /// `I / 2^k`.
    pub fn maximally_mixed(k: usize) -> Self {
        let mut m = Self::identity(k);
        let dim = m.dim() as f64;
        m.scale_mut(1.0 / dim);
        m
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k);
        for i in 0..m.dim() {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Single-qubit Pauli matrix.
    pub fn pauli(p: Pauli) -> Self {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let e = match p {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        Self {
            k: 1,
            entries: e.to_vec(),
        }
    }

    /// `|psi><psi|` of a small statevector.
    pub fn from_pure(state: &Statevector) -> Self {
        let dim = state.amps.len();
        let mut m = Self::zeros(state.n);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i * dim + j] = state.amps[i] * state.amps[j].conj();
            }
        }
        m
    }

    pub fn n_qubits(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        1 << self.k
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let d = self.dim();
        self.entries[i * d + j] = v;
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn scale_mut(&mut self, factor: f64) {
        self.entries.iter_mut().for_each(|e| *e *= factor);
    }

    pub fn add_scaled(&mut self, other: &DensityMatrix, factor: f64) {
        debug_assert_eq!(self.k, other.k);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += *b * factor;
        }
    }

    /// `self ⊗ other`, with `self` on the low-order qubits.
    pub fn kron_low(&self, other: &DensityMatrix) -> DensityMatrix {
        // Index b = b_self | (b_other << k_self).
        let ds = self.dim();
        let d_o = other.dim();
        let d = ds * d_o;
        let mut out = DensityMatrix::zeros(self.k + other.k);
        for i in 0..d {
            let (is, io) = (i % ds, i / ds);
            for j in 0..d {
                let (js, jo) = (j % ds, j / ds);
                out.entries[i * d + j] = self.get(is, js) * other.get(io, jo);
            }
        }
        out
    }

    /// `tr(self * other)`.
    pub fn trace_product(&self, other: &DensityMatrix) -> C64 {
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            for j in 0..d {
                acc += self.get(i, j) * other.get(j, i);
            }
        }
        acc
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Bloch vector `r` of `rho = (I + r·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_physical(&self) -> bool {
        self.norm() <= 1.0 + 1e-12
    }

    /// Component along a measurement axis.
    pub fn component(&self, p: Pauli) -> f64 {
        match p {
            Pauli::I => 1.0,
            Pauli::X => self.0[0],
            Pauli::Y => self.0[1],
            Pauli::Z => self.0[2],
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        let mut rho = DensityMatrix::identity(1);
        for (p, c) in Pauli::NON_IDENTITY.iter().zip(self.0) {
            rho.add_scaled(&DensityMatrix::pauli(*p), c);
        }
        rho.scale_mut(0.5);
        rho
    }
}

/// `r_i = tr(σ_i rho)` for a Hermitian unit-trace 2x2 matrix.
pub fn bloch_of(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: rho.n_qubits(),
        });
    }
    let herm = rho.hermiticity_error();
    if herm > 1e-12 {
        return Err(Error::NotHermitian(herm));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::BadTrace(tr.re));
    }
    let c = |p| rho.trace_product(&DensityMatrix::pauli(p)).re;
    Ok(BlochVector([c(Pauli::X), c(Pauli::Y), c(Pauli::Z)]))
}

/// Partial trace onto `qubits` (at most 3, distinct, in range). `qubits[0]`
/// becomes the lowest bit of the reduced index.
pub fn reduced_density(state: &Statevector, qubits: &[usize]) -> Result<DensityMatrix> {
    validate_subset(qubits, state.n, 3)?;
    let k = qubits.len();
    let sub_dim = 1usize << k;
    let mask: usize = qubits.iter().map(|q| 1usize << q).sum();
    let rest: Vec<usize> = (0..state.n).filter(|q| mask & (1 << q) == 0).collect();

    let mut rho = DensityMatrix::zeros(k);
    let mut v = vec![ZERO; sub_dim];
    for r in 0..1usize << rest.len() {
        let base = scatter(r, &rest);
        for (s, slot) in v.iter_mut().enumerate() {
            *slot = state.amps[base | scatter(s, qubits)];
        }
        for i in 0..sub_dim {
            for j in 0..sub_dim {
                rho.entries[i * sub_dim + j] += v[i] * v[j].conj();
            }
        }
    }
    Ok(rho)
}

/// Places bit `i` of `bits` at position `positions[i]`.
fn scatter(bits: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .filter(|(i, _)| bits >> i & 1 == 1)
        .map(|(_, q)| 1usize << q)
        .sum()
}

pub(crate) fn validate_subset(qubits: &[usize], n: usize, max_len: usize) -> Result<()> {
    let bad = || Error::InvalidQubits {
        qubits: qubits.to_vec(),
        n,
    };
    if qubits.is_empty() || qubits.len() > max_len {
        return Err(bad());
    }
    for (i, q) in qubits.iter().enumerate() {
        if *q >= n || qubits[..i].contains(q) {
            return Err(bad());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn plus_state_expectations() {
        let plus = Statevector::plus(1).unwrap();
        let x = exact_expectation(&plus, &"X".parse().unwrap()).unwrap();
        let z = exact_expectation(&plus, &"Z".parse().unwrap()).unwrap();
        assert!((x - 1.0).abs() < 1e-15);
        assert!(z.abs() < 1e-15);
        let minus_x = exact_expectation(&plus, &"-X".parse().unwrap()).unwrap();
        assert!((minus_x + 1.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let s = Statevector::zero(2).unwrap();
        assert!(exact_expectation(&s, &"XYZ".parse().unwrap()).is_err());
    }

    #[test]
    fn bloch_examples() {
        let r = bloch_of(&DensityMatrix::maximally_mixed(1)).unwrap();
        assert_eq!(r.0, [0.0, 0.0, 0.0]);
        let zero = DensityMatrix::from_pure(&Statevector::zero(1).unwrap());
        assert_eq!(bloch_of(&zero).unwrap().0, [0.0, 0.0, 1.0]);
        let rho = DensityMatrix::new(1, vec![c(0.7), c(0.15), c(0.15), c(0.3)]).unwrap();
        let r = bloch_of(&rho).unwrap();
        assert!((r.x() - 0.3).abs() < 1e-15 && r.y().abs() < 1e-15);
        assert!((r.z() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn bloch_rejects_bad_input() {
        let skew = DensityMatrix::new(1, vec![c(0.5), c(0.3), c(0.1), c(0.5)]).unwrap();
        assert!(matches!(bloch_of(&skew), Err(Error::NotHermitian(_))));
        let heavy = DensityMatrix::new(1, vec![c(1.0), c(0.0), c(0.0), c(0.5)]).unwrap();
        assert!(matches!(bloch_of(&heavy), Err(Error::BadTrace(_))));
        assert!(bloch_of(&DensityMatrix::maximally_mixed(2)).is_err());
    }

    #[test]
    fn reduced_density_examples() {
        let s = Statevector::zero(2).unwrap();
        let rho = reduced_density(&s, &[0]).unwrap();
        assert_eq!(rho.get(0, 0), c(1.0));
        assert_eq!(rho.get(1, 1), c(0.0));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = Statevector::from_amplitudes(vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        for q in 0..2 {
            let rho = reduced_density(&bell, &[q]).unwrap();
            assert!(rho.max_abs_diff(&DensityMatrix::maximally_mixed(1)) < 1e-15);
        }
    }

    #[test]
    fn reduced_density_rejects_bad_indices() {
        let s = Statevector::zero(3).unwrap();
        assert!(reduced_density(&s, &[0, 0]).is_err());
        assert!(reduced_density(&s, &[3]).is_err());
        assert!(reduced_density(&s, &[]).is_err());
        let s4 = Statevector::zero(4).unwrap();
        assert!(reduced_density(&s4, &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn reduced_density_is_a_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = Statevector::random(5, &mut rng).unwrap();
        let rho = reduced_density(&s, &[3, 1, 4]).unwrap();
        assert!(rho.hermiticity_error() < 1e-14);
        assert!((rho.trace() - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn product_state_reduces_to_factor() {
        let a = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let b = [c(1.0), c(0.0)];
        let s = Statevector::product(&[b, a, b]).unwrap();
        let rho = reduced_density(&s, &[1]).unwrap();
        let expect =
            DensityMatrix::from_pure(&Statevector::from_amplitudes(a.to_vec()).unwrap());
        assert_eq!(rho, expect);
    }

    #[test]
    fn normalization_guard() {
        assert!(Statevector::from_amplitudes(vec![c(1.0), c(1.0)]).is_err());
        assert!(Statevector::normalized(vec![c(0.0), c(0.0)]).is_err());
        assert!(Statevector::from_amplitudes(vec![c(1.0); 3]).is_err());
    }
}
