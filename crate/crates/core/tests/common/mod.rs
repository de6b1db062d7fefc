//! Independent dense-matrix oracles. Nothing here calls the library's own
//! linear algebra; states and operators are built from explicit Kronecker
//! products with nalgebra.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use shadow_bias::{Basis, Pauli, PauliString, Snapshot, Statevector, C64};

pub type CMat = DMatrix<C64>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_matrix(p: Pauli) -> CMat {
    match p {
        Pauli::I => CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]),
        Pauli::X => CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        Pauli::Y => CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        Pauli::Z => CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
    }
}

/// `⊗` with qubit 0 as the least significant index bit: qubit `n-1` is the
/// leftmost factor.
pub fn kron_qubits(factors: &[CMat]) -> CMat {
    factors
        .iter()
        .rev()
        .fold(CMat::from_element(1, 1, c(1., 0.)), |acc, f| acc.kronecker(f))
}

pub fn dense_pauli(p: &PauliString) -> CMat {
    let factors: Vec<CMat> = p.letters().iter().map(|&l| pauli_matrix(l)).collect();
    kron_qubits(&factors) * c(p.coefficient(), 0.0)
}

pub fn to_vector(state: &Statevector) -> DVector<C64> {
    DVector::from_column_slice(state.amplitudes())
}

pub fn expectation(state: &Statevector, op: &CMat) -> f64 {
    let v = to_vector(state);
    (v.adjoint() * op * &v)[(0, 0)].re
}

/// Rotation taking the `basis` eigenbasis to the computational basis.
pub fn basis_rotation(b: Basis) -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match b {
        Basis::X => CMat::from_row_slice(2, 2, &[c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)]),
        Basis::Y => CMat::from_row_slice(2, 2, &[c(h, 0.), c(0., -h), c(h, 0.), c(0., h)]),
        Basis::Z => CMat::identity(2, 2),
    }
}

/// Born probabilities of every outcome string when qubit `j` is measured in
/// `bases[j]`; index bit `j` is the outcome of qubit `j`.
pub fn born_probabilities(state: &Statevector, bases: &[Basis]) -> Vec<f64> {
    let rotations: Vec<CMat> = bases.iter().map(|&b| basis_rotation(b)).collect();
    let u = kron_qubits(&rotations);
    (u * to_vector(state)).iter().map(|a| a.norm_sqr()).collect()
}

/// Every `(snapshot, probability)` pair of the measurement protocol on an
/// `n`-qubit state: `3^n` basis choices times `2^n` outcomes.
pub fn snapshot_distribution(state: &Statevector) -> Vec<(Snapshot, f64)> {
    let n = state.n_qubits();
    let mut out = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let mut rest = code;
        let bases: Vec<Basis> = (0..n)
            .map(|_| {
                let b = Basis::ALL[rest % 3];
                rest /= 3;
                b
            })
            .collect();
        let probs = born_probabilities(state, &bases);
        let p_bases = 3f64.powi(-(n as i32));
        for (idx, p) in probs.iter().enumerate() {
            let outcomes: Vec<u8> = (0..n).map(|j| ((idx >> j) & 1) as u8).collect();
            let snap = Snapshot::new(bases.clone(), outcomes).unwrap();
            out.push((snap, p * p_bases));
        }
    }
    out
}

/// `|0><0|`-style projector onto outcome `bit` of `basis`.
pub fn eigen_projector(basis: Basis, bit: u8) -> CMat {
    let sign = if bit == 0 { 0.5 } else { -0.5 };
    CMat::identity(2, 2) * c(0.5, 0.0) + pauli_matrix(basis.as_pauli()) * c(sign, 0.0)
}

/// `3√(1-eps)·P + ½(1 - 3√(1-eps))·I`.
pub fn biased_inverse(projector: &CMat, eps: f64) -> CMat {
    let d = 3.0 * (1.0 - eps).sqrt();
    projector * c(d, 0.0) + CMat::identity(2, 2) * c(0.5 * (1.0 - d), 0.0)
}

pub fn bloch_density(r: [f64; 3]) -> CMat {
    let mut m = CMat::identity(2, 2) * c(0.5, 0.0);
    for (k, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
        m += pauli_matrix(p) * c(0.5 * r[k], 0.0);
    }
    m
}

/// Dense matrix of a Pauli-sum Hamiltonian.
pub fn dense_hamiltonian(terms: &[(f64, PauliString)], n: usize) -> CMat {
    let dim = 1 << n;
    let mut h = CMat::zeros(dim, dim);
    for (coef, p) in terms {
        h += dense_pauli(p) * c(*coef, 0.0);
    }
    h
}

/// Lowest eigenpair of a Hermitian matrix by dense diagonalization.
pub fn dense_ground(h: &CMat) -> (f64, DVector<C64>) {
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let (i, e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    (*e, eig.eigenvectors.column(i).into_owned())
}

/// All Pauli strings on `n` qubits with weight in `1..=max_w`.
pub fn all_paulis(n: usize, max_w: usize) -> Vec<PauliString> {
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    (0..4usize.pow(n as u32))
        .map(|mut code| {
            let ls: Vec<Pauli> = (0..n)
                .map(|_| {
                    let l = letters[code % 4];
                    code /= 4;
                    l
                })
                .collect();
            PauliString::new(ls)
        })
        .filter(|p| (1..=max_w).contains(&p.weight()))
        .collect()
}

/// Deterministic random state for tests.
pub fn random_state(n: usize, seed: u64) -> Statevector {
    Statevector::random(n, &mut shadow_bias::rng::stream(seed)).unwrap()
}

/// Uniform point in the unit ball.
pub fn random_bloch(rng: &mut impl rand::Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        if v.iter().map(|x: &f64| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}
