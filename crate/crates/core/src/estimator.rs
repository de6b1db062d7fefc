//! Biased and unbiased shadow estimators.
//!
//! The biased local channel `M_eps(rho) = 3√(1-eps)·rho + (1 - 3√(1-eps))·I/2`
//! dilates the Bloch sphere by `3√(1-eps)` instead of 3. For a Pauli string of
//! weight `w` this rescales every single-shot estimate by `(1-eps)^{w/2}`, i.e.
//! a global shrinkage `1 - alpha = (1-eps)^{w/2}`. Both parametrizations are
//! exposed through [`BiasSpec`].

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::pauli::PauliString;
use crate::sampler::{Basis, ShadowCollection, Snapshot};
use crate::state::{validate_subset, DensityMatrix};

/// Amount of shrinkage applied to a shadow estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasSpec {
    /// Per-qubit channel bias `eps ∈ [0, 1]`.
    Channel { epsilon: f64 },
    /// Global rescale `(1 - alpha)` of the estimate, `alpha ∈ [0, 1]`.
    Rescale { alpha: f64 },
}

impl BiasSpec {
    pub const UNBIASED: BiasSpec = BiasSpec::Channel { epsilon: 0.0 };

    pub fn channel(epsilon: f64) -> Result<Self> {
        check_range("epsilon", epsilon, 0.0, 1.0, "[0, 1]")?;
        Ok(BiasSpec::Channel { epsilon })
    }

    pub fn rescale(alpha: f64) -> Result<Self> {
        check_range("alpha", alpha, 0.0, 1.0, "[0, 1]")?;
        Ok(BiasSpec::Rescale { alpha })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            BiasSpec::Channel { epsilon } => check_range("epsilon", epsilon, 0.0, 1.0, "[0, 1]"),
            BiasSpec::Rescale { alpha } => check_range("alpha", alpha, 0.0, 1.0, "[0, 1]"),
        }
    }

    /// Multiplier `1 - alpha` applied to a weight-`w` estimate.
    pub fn scale_for_weight(&self, w: usize) -> f64 {
        match *self {
            BiasSpec::Channel { epsilon } => channel_scale(epsilon, w),
            BiasSpec::Rescale { alpha } => 1.0 - alpha,
        }
    }

    pub fn alpha_for_weight(&self, w: usize) -> f64 {
        match *self {
            BiasSpec::Channel { .. } => 1.0 - self.scale_for_weight(w),
            BiasSpec::Rescale { alpha } => alpha,
        }
    }

    /// Per-qubit `eps` giving the same shrinkage on a weight-`w` observable;
    /// `None` for `w = 0`, where every `eps` acts identically.
    pub fn epsilon_for_weight(&self, w: usize) -> Option<f64> {
        match *self {
            BiasSpec::Channel { epsilon } => Some(epsilon),
            BiasSpec::Rescale { alpha } => alpha_to_epsilon(alpha, w),
        }
    }
}

/// `(1 - eps)^{w/2}`.
pub fn channel_scale(epsilon: f64, w: usize) -> f64 {
    (1.0 - epsilon).sqrt().powi(w as i32)
}

/// Global `alpha` equivalent to channel bias `eps` on weight `w`.
pub fn epsilon_to_alpha(epsilon: f64, w: usize) -> f64 {
    1.0 - channel_scale(epsilon, w)
}

/// Inverse of [`epsilon_to_alpha`]: `1 - eps = (1 - alpha)^{2/w}`.
pub fn alpha_to_epsilon(alpha: f64, w: usize) -> Option<f64> {
    if w == 0 {
        return None;
    }
    Some(1.0 - (1.0 - alpha).powf(2.0 / w as f64))
}

/// Mean of single-shot estimates over a collection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub value: f64,
    pub n_samples: usize,
    /// Sample variance of the single-shot values (`n - 1` denominator);
    /// reported as 0 when `n_samples == 1`.
    pub empirical_variance: f64,
    /// Channel bias, when the bias was given per qubit or is convertible.
    pub epsilon: Option<f64>,
    pub alpha: f64,
    /// Set when the variance is undefined (a single sample).
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub low_statistics: bool,
}

impl EstimateReport {
    /// Standard error of `value`.
    pub fn standard_error(&self) -> f64 {
        (self.empirical_variance / self.n_samples as f64).sqrt()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Biased single-qubit estimator channel applied to a 2x2 matrix.
pub fn biased_local_channel(rho1: &DensityMatrix, epsilon: f64) -> Result<DensityMatrix> {
    check_range("epsilon", epsilon, 0.0, 1.0, "[0, 1]")?;
    if rho1.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: rho1.n_qubits(),
        });
    }
    let dilation = 3.0 * (1.0 - epsilon).sqrt();
    let mut out = rho1.clone();
    out.scale_mut(dilation);
    out.add_scaled(&DensityMatrix::identity(1), 0.5 * (1.0 - dilation));
    Ok(out)
}

/// Unbiased single-shot value `coefficient · 3^w · Π (-1)^{b_j}` over the
/// support, or 0 if any support qubit was measured in another basis.
fn unbiased_single_shot(s: &Snapshot, support: &[(usize, Basis)], coeff_3w: f64) -> f64 {
    let mut negative = false;
    for &(q, b) in support {
        if s.bases()[q] != b {
            return 0.0;
        }
        negative ^= s.outcomes()[q] == 1;
    }
    if negative {
        -coeff_3w
    } else {
        coeff_3w
    }
}

struct CompiledPauli {
    support: Vec<(usize, Basis)>,
    coeff_3w: f64,
    weight: usize,
}

fn compile(p: &PauliString, n: usize) -> Result<CompiledPauli> {
    if p.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.n_qubits(),
        });
    }
    let support: Vec<(usize, Basis)> = p
        .letters()
        .iter()
        .enumerate()
        .filter_map(|(q, l)| Basis::from_pauli(*l).map(|b| (q, b)))
        .collect();
    let weight = support.len();
    Ok(CompiledPauli {
        support,
        coeff_3w: p.coefficient() * 3f64.powi(weight as i32),
        weight,
    })
}

/// `tr(P · ρ̂_eps)` for one snapshot.
pub fn snapshot_pauli_estimate(s: &Snapshot, p: &PauliString, epsilon: f64) -> Result<f64> {
    check_range("epsilon", epsilon, 0.0, 1.0, "[0, 1]")?;
    let c = compile(p, s.n_qubits())?;
    Ok(unbiased_single_shot(s, &c.support, c.coeff_3w) * channel_scale(epsilon, c.weight))
}

/// Mean and `n-1` sample variance of the unbiased single-shot values.
fn unbiased_moments(c: &ShadowCollection, p: &PauliString) -> Result<(f64, f64, usize)> {
    if c.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let cp = compile(p, c.n_qubits())?;
    // Single shots take only the values 0 and ±coeff·3^w, so the moments
    // follow exactly from integer counts.
    let (mut plus, mut minus) = (0u64, 0u64);
    for s in c.snapshots() {
        let v = unbiased_single_shot(s, &cp.support, 1.0);
        if v > 0.0 {
            plus += 1;
        } else if v < 0.0 {
            minus += 1;
        }
    }
    let n = c.len();
    let nf = n as f64;
    let a = cp.coeff_3w;
    let mean = a * (plus as f64 - minus as f64) / nf;
    let var = if n > 1 {
        // n Σx² - (Σx)² in integer units of a².
        let (pm, diff) = ((plus + minus) as i128, plus as i128 - minus as i128);
        let scaled = pm * n as i128 - diff * diff;
        a * a * scaled as f64 / (nf * (nf - 1.0))
    } else {
        0.0
    };
    Ok((mean, var, cp.weight))
}

/// Mean estimate of `tr(P rho)` over the collection under bias `bias`.
///
/// The biased value is the unbiased mean multiplied by the shrink factor of
/// `bias` for the weight of `P`.
pub fn mean_pauli_estimate_with(
    c: &ShadowCollection,
    p: &PauliString,
    bias: BiasSpec,
) -> Result<EstimateReport> {
    bias.validate()?;
    let (mean, var, w) = unbiased_moments(c, p)?;
    let scale = bias.scale_for_weight(w);
    Ok(EstimateReport {
        value: mean * scale,
        n_samples: c.len(),
        empirical_variance: var * scale * scale,
        epsilon: bias.epsilon_for_weight(w),
        alpha: bias.alpha_for_weight(w),
        low_statistics: c.len() == 1,
    })
}

/// [`mean_pauli_estimate_with`] for a per-qubit channel bias.
pub fn mean_pauli_estimate(
    c: &ShadowCollection,
    p: &PauliString,
    epsilon: f64,
) -> Result<EstimateReport> {
    mean_pauli_estimate_with(c, p, BiasSpec::channel(epsilon)?)
}

/// Average over snapshots of `⊗_{q ∈ qubits} M_eps(|b_q><b_q|)`.
pub fn reduced_density_estimate(
    c: &ShadowCollection,
    qubits: &[usize],
    epsilon: f64,
) -> Result<DensityMatrix> {
    check_range("epsilon", epsilon, 0.0, 1.0, "[0, 1]")?;
    if c.is_empty() {
        return Err(Error::EmptyCollection);
    }
    validate_subset(qubits, c.n_qubits(), 3)?;
    let k = qubits.len();

    // Bucket snapshots by their (basis, outcome) pattern on `qubits`; there
    // are at most 6^k patterns, so the average is an exact weighted sum.
    let mut counts = vec![0u64; 6usize.pow(k as u32)];
    for s in c.snapshots() {
        let key = qubits.iter().rev().fold(0usize, |acc, &q| {
            acc * 6 + s.bases()[q].index() * 2 + s.outcomes()[q] as usize
        });
        counts[key] += 1;
    }

    let locals: Vec<DensityMatrix> = (0..6)
        .map(|code| {
            let basis = Basis::ALL[code / 2];
            let projector = eigenprojector(basis, (code % 2) as u8);
            biased_local_channel(&projector, epsilon)
        })
        .collect::<Result<_>>()?;

    let mut acc = DensityMatrix::zeros(k);
    let total = c.len() as f64;
    for (key, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let mut codes = key;
        let mut term = locals[codes % 6].clone();
        for _ in 1..k {
            codes /= 6;
            term = term.kron_low(&locals[codes % 6]);
        }
        acc.add_scaled(&term, count as f64 / total);
    }
    Ok(acc)
}

/// `(I ± σ_B) / 2` for outcome bit 0 / 1.
pub fn eigenprojector(basis: Basis, outcome: u8) -> DensityMatrix {
    let sign = if outcome == 0 { 0.5 } else { -0.5 };
    let mut m = DensityMatrix::identity(1);
    m.scale_mut(0.5);
    m.add_scaled(&DensityMatrix::pauli(basis.as_pauli()), sign);
    m
}

/// How [`plugin_alpha_star`] estimates the single-shot variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceModel {
    /// `3^w - m^2` from the estimated mean `m`.
    #[default]
    Theoretical,
    /// Sample variance of the single-shot values.
    Empirical,
}

/// Data-driven optimal shrinkage `alpha* = 1 / (1 + beta)` with
/// `beta = N_s m^2 / (3^w - m^2)` and `m` the unbiased mean, clamped to
/// `[-1, 1]` (in units of the coefficient of `P`).
pub fn plugin_alpha_star(c: &ShadowCollection, p: &PauliString) -> Result<f64> {
    plugin_alpha_star_with(c, p, VarianceModel::Theoretical)
}

pub fn plugin_alpha_star_with(
    c: &ShadowCollection,
    p: &PauliString,
    model: VarianceModel,
) -> Result<f64> {
    let (mean, var, w) = unbiased_moments(c, p)?;
    let coeff = p.coefficient();
    if coeff == 0.0 {
        return Ok(1.0);
    }
    let m = (mean / coeff).clamp(-1.0, 1.0);
    if m == 0.0 {
        return Ok(1.0);
    }
    let single_shot_var = match model {
        VarianceModel::Theoretical => 3f64.powi(w as i32) - m * m,
        VarianceModel::Empirical => var / (coeff * coeff),
    };
    if single_shot_var <= 0.0 {
        // Noise-free signal: no shrinkage.
        return Ok(0.0);
    }
    let beta = c.len() as f64 * m * m / single_shot_var;
    Ok(1.0 / (1.0 + beta))
}
