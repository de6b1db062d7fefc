//! Random local-Pauli measurements of a statevector.
//!
//! Each snapshot picks a basis in {X, Y, Z} uniformly for every qubit, rotates
//! that qubit into the computational basis and samples its outcome from the
//! conditional Born distribution before moving on to the next qubit. Outcome
//! bit 0 is the +1 eigenvalue of the basis Pauli.
//!
//! Snapshot `i` of a collection draws only from substream `i` of the
//! collection seed, so the result does not depend on how the work is split
//! across threads.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::pauli::Pauli;
use crate::rng;
use crate::state::{BlochVector, Statevector};
use crate::C64;

pub const PROTOCOL_TAG: &str = "local-pauli-uniform";

/// Largest register for which [`outcome_distribution`] builds a full table.
pub const MAX_TABLE_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

    pub fn as_pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }

    pub fn from_pauli(p: Pauli) -> Option<Self> {
        match p {
            Pauli::X => Some(Basis::X),
            Pauli::Y => Some(Basis::Y),
            Pauli::Z => Some(Basis::Z),
            Pauli::I => None,
        }
    }

    pub fn as_char(self) -> char {
        self.as_pauli().as_char()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Unitary taking the +1/-1 eigenvectors of the basis Pauli to |0>/|1>:
    /// H for X, H·S† for Y, identity for Z.
    fn rotation(self) -> [[C64; 2]; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = |re: f64| C64::new(re, 0.0);
        match self {
            Basis::X => [[r(h), r(h)], [r(h), r(-h)]],
            Basis::Y => [[r(h), C64::new(0.0, -h)], [r(h), C64::new(0.0, h)]],
            Basis::Z => [[r(1.0), r(0.0)], [r(0.0), r(1.0)]],
        }
    }
}

/// One shadow sample: a basis and an outcome bit per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SnapshotRepr", into = "SnapshotRepr")]
pub struct Snapshot {
    bases: Vec<Basis>,
    outcomes: Vec<u8>,
}

impl Snapshot {
    pub fn new(bases: Vec<Basis>, outcomes: Vec<u8>) -> Result<Self> {
        if bases.len() != outcomes.len() {
            return Err(Error::DimensionMismatch {
                expected: bases.len(),
                found: outcomes.len(),
            });
        }
        if bases.is_empty() {
            return Err(Error::InvalidArgument("snapshot over zero qubits".into()));
        }
        if outcomes.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("outcome bits must be 0 or 1".into()));
        }
        Ok(Self { bases, outcomes })
    }

    pub fn n_qubits(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn outcomes(&self) -> &[u8] {
        &self.outcomes
    }

    /// Eigenvalue `(-1)^b` recorded on `qubit`.
    pub fn sign(&self, qubit: usize) -> f64 {
        if self.outcomes[qubit] == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SnapshotRepr {
    bases: String,
    outcomes: String,
}

impl From<Snapshot> for SnapshotRepr {
    fn from(s: Snapshot) -> Self {
        SnapshotRepr {
            bases: s.bases.iter().map(|b| b.as_char()).collect(),
            outcomes: s
                .outcomes
                .iter()
                .map(|&b| if b == 0 { '0' } else { '1' })
                .collect(),
        }
    }
}

impl TryFrom<SnapshotRepr> for Snapshot {
    type Error = Error;

    fn try_from(r: SnapshotRepr) -> Result<Self> {
        let bases = r
            .bases
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok()
                    .and_then(Basis::from_pauli)
                    .ok_or_else(|| Error::Parse(format!("bad basis letter {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let outcomes = r
            .outcomes
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("bad outcome bit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Snapshot::new(bases, outcomes)
    }
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = SnapshotRepr::from(self.clone());
        write!(f, "{}:{}", r.bases, r.outcomes)
    }
}

impl FromStr for Snapshot {
    type Err = Error;

    /// Parses `BASES:OUTCOMES`, e.g. `XZ:01`.
    fn from_str(s: &str) -> Result<Self> {
        let (bases, outcomes) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected BASES:OUTCOMES, got {s:?}")))?;
        SnapshotRepr {
            bases: bases.to_string(),
            outcomes: outcomes.to_string(),
        }
        .try_into()
    }
}

/// `N_s` snapshots of one state plus the metadata that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CollectionRepr")]
pub struct ShadowCollection {
    n: usize,
    seed: u64,
    protocol_tag: String,
    snapshots: Vec<Snapshot>,
}

#[derive(Deserialize)]
struct CollectionRepr {
    n: usize,
    seed: u64,
    protocol_tag: String,
    snapshots: Vec<Snapshot>,
}

impl TryFrom<CollectionRepr> for ShadowCollection {
    type Error = Error;

    fn try_from(r: CollectionRepr) -> Result<Self> {
        ShadowCollection::from_snapshots(r.n, r.seed, r.protocol_tag, r.snapshots)
    }
}

impl ShadowCollection {
    pub fn from_snapshots(
        n: usize,
        seed: u64,
        protocol_tag: impl Into<String>,
        snapshots: Vec<Snapshot>,
    ) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::EmptyCollection);
        }
        if let Some(bad) = snapshots.iter().find(|s| s.n_qubits() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.n_qubits(),
            });
        }
        Ok(Self {
            n,
            seed,
            protocol_tag: protocol_tag.into(),
            snapshots,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn protocol_tag(&self) -> &str {
        &self.protocol_tag
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Splits into the first `at` snapshots and the rest (both nonempty).
    pub fn split_at(&self, at: usize) -> Result<(ShadowCollection, ShadowCollection)> {
        if at == 0 || at >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "split point {at} for {} snapshots",
                self.len()
            )));
        }
        let (a, b) = self.snapshots.split_at(at);
        Ok((
            Self::from_snapshots(self.n, self.seed, self.protocol_tag.clone(), a.to_vec())?,
            Self::from_snapshots(self.n, self.seed, self.protocol_tag.clone(), b.to_vec())?,
        ))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Per-state precomputation: the three possible rotations of qubit 0, split
/// by outcome, with their branch weights.
struct Prepared<'a> {
    state: &'a Statevector,
    first: [[Vec<C64>; 2]; 3],
    first_weight: [[f64; 2]; 3],
}

impl<'a> Prepared<'a> {
    fn new(state: &'a Statevector) -> Self {
        let amps = state.amplitudes();
        let half = amps.len() / 2;
        let mut first: [[Vec<C64>; 2]; 3] = Default::default();
        let mut first_weight = [[0.0; 2]; 3];
        for basis in Basis::ALL {
            let mut b0 = vec![C64::new(0.0, 0.0); half];
            let mut b1 = vec![C64::new(0.0, 0.0); half];
            let (p0, p1) = rotate_lsb(amps, basis, &mut b0, &mut b1);
            first[basis.index()] = [b0, b1];
            first_weight[basis.index()] = [p0, p1];
        }
        Self {
            state,
            first,
            first_weight,
        }
    }
}

/// Ping-pong buffers for the shrinking conditional state.
struct Scratch {
    cur: Vec<C64>,
    out: [Vec<C64>; 2],
}

impl Scratch {
    fn new(n: usize) -> Self {
        let half = (1usize << n) / 2;
        Self {
            cur: vec![C64::new(0.0, 0.0); half],
            out: [
                vec![C64::new(0.0, 0.0); half],
                vec![C64::new(0.0, 0.0); half],
            ],
        }
    }
}

/// Rotates the lowest qubit of `amps` into `basis` and writes the two
/// outcome branches (indexed by the remaining qubits). Returns the branch
/// weights.
fn rotate_lsb(amps: &[C64], basis: Basis, out0: &mut [C64], out1: &mut [C64]) -> (f64, f64) {
    let u = basis.rotation();
    let mut p0 = 0.0;
    let mut p1 = 0.0;
    for (i, pair) in amps.chunks_exact(2).enumerate() {
        let (a0, a1) = (pair[0], pair[1]);
        let (r0, r1) = if basis == Basis::Z {
            (a0, a1)
        } else {
            (u[0][0] * a0 + u[0][1] * a1, u[1][0] * a0 + u[1][1] * a1)
        };
        p0 += r0.norm_sqr();
        p1 += r1.norm_sqr();
        out0[i] = r0;
        out1[i] = r1;
    }
    (p0, p1)
}

fn draw_basis<R: Rng + ?Sized>(rng: &mut R) -> Basis {
    Basis::ALL[rng.random_range(0..3)]
}

/// Picks an outcome with probabilities proportional to the branch weights.
fn draw_outcome<R: Rng + ?Sized>(rng: &mut R, p0: f64, p1: f64) -> Result<u8> {
    let total = p0 + p1;
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let u: f64 = rng.random::<f64>() * total;
    Ok(if u < p0 { 0 } else { 1 })
}

fn sample_prepared<R: Rng + ?Sized>(
    prep: &Prepared<'_>,
    scratch: &mut Scratch,
    rng: &mut R,
) -> Result<Snapshot> {
    let n = prep.state.n_qubits();
    let mut bases = Vec::with_capacity(n);
    let mut outcomes = Vec::with_capacity(n);

    let basis = draw_basis(rng);
    let [p0, p1] = prep.first_weight[basis.index()];
    let bit = draw_outcome(rng, p0, p1)?;
    bases.push(basis);
    outcomes.push(bit);

    let mut len = prep.state.amplitudes().len() / 2;
    scratch.cur[..len].copy_from_slice(&prep.first[basis.index()][bit as usize]);
    for _ in 1..n {
        let basis = draw_basis(rng);
        let half = len / 2;
        let [o0, o1] = &mut scratch.out;
        let (p0, p1) = rotate_lsb(&scratch.cur[..len], basis, &mut o0[..half], &mut o1[..half]);
        let bit = draw_outcome(rng, p0, p1)?;
        std::mem::swap(&mut scratch.cur, &mut scratch.out[bit as usize]);
        bases.push(basis);
        outcomes.push(bit);
        len = half;
    }
    Ok(Snapshot { bases, outcomes })
}

fn check_normalized(state: &Statevector) -> Result<()> {
    let norm2 = state.norm_sqr();
    if (norm2 - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm2));
    }
    Ok(())
}

/// Draws one snapshot of `state`.
pub fn sample_snapshot<R: Rng + ?Sized>(state: &Statevector, rng: &mut R) -> Result<Snapshot> {
    check_normalized(state)?;
    let prep = Prepared::new(state);
    let mut scratch = Scratch::new(state.n_qubits());
    sample_prepared(&prep, &mut scratch, rng)
}

/// `N_s` snapshots of `state`; snapshot `i` uses substream `i` of `seed`.
pub fn collect_shadow(state: &Statevector, n_s: usize, seed: u64) -> Result<ShadowCollection> {
    if n_s == 0 {
        return Err(Error::InvalidArgument("N_s must be at least 1".into()));
    }
    check_normalized(state)?;
    let prep = Prepared::new(state);
    let n = state.n_qubits();
    let snapshots = (0..n_s)
        .into_par_iter()
        .map_init(
            || Scratch::new(n),
            |scratch, i| sample_prepared(&prep, scratch, &mut rng::substream(seed, i as u64)),
        )
        .collect::<Result<Vec<_>>>()?;
    ShadowCollection::from_snapshots(n, seed, PROTOCOL_TAG, snapshots)
}

/// Single-qubit snapshot of a (possibly mixed) state given by its Bloch
/// vector: outcome 0 in basis `B` has probability `(1 + r_B) / 2`.
pub fn sample_bloch_snapshot<R: Rng + ?Sized>(r: &BlochVector, rng: &mut R) -> Result<Snapshot> {
    if !r.is_physical() {
        return Err(Error::out_of_range("|r|", r.norm(), "[0, 1]"));
    }
    let basis = draw_basis(rng);
    let p0 = 0.5 * (1.0 + r.component(basis.as_pauli()));
    let bit = draw_outcome(rng, p0.max(0.0), (1.0 - p0).max(0.0))?;
    Snapshot::new(vec![basis], vec![bit])
}

/// `N_s` single-qubit snapshots of a Bloch-vector state.
pub fn collect_bloch_shadow(r: &BlochVector, n_s: usize, seed: u64) -> Result<ShadowCollection> {
    if n_s == 0 {
        return Err(Error::InvalidArgument("N_s must be at least 1".into()));
    }
    let snapshots = (0..n_s)
        .map(|i| sample_bloch_snapshot(r, &mut rng::substream(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    ShadowCollection::from_snapshots(1, seed, PROTOCOL_TAG, snapshots)
}

/// Exact Born probabilities of every outcome string when qubit `j` is
/// measured in `bases[j]`; entry `b` has outcome of qubit `j` in bit `j`.
pub fn outcome_distribution(state: &Statevector, bases: &[Basis]) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    if bases.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bases.len(),
        });
    }
    check_range("n", n as f64, 1.0, MAX_TABLE_QUBITS as f64, "[1, 12]")?;
    let mut amps = state.amplitudes().to_vec();
    for (j, basis) in bases.iter().enumerate() {
        if *basis == Basis::Z {
            continue;
        }
        let u = basis.rotation();
        let bit = 1usize << j;
        for b in 0..amps.len() {
            if b & bit == 0 {
                let (a0, a1) = (amps[b], amps[b | bit]);
                amps[b] = u[0][0] * a0 + u[0][1] * a1;
                amps[b | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }
    Ok(amps.iter().map(|a| a.norm_sqr()).collect())
}
