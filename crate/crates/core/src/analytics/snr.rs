//! Signal-to-noise algebra of a rescaled sample mean.
//!
//! For a sample mean of `N_s` shots with single-shot mean `μ` and variance
//! `σ²`, the rescaled estimate `(1 - α) R̄` has
//! `MSE(α) = α² μ² + (1 - α)² σ²/N_s`. It is minimized at
//! `α* = 1/(1 + β)` with `β = μ² N_s / σ²`, where `MSE(α*) = α* μ²`, and it
//! stays below the unbiased error for every `α < α_c = 2 α*`.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrReport {
    pub mean: f64,
    pub variance: f64,
    pub n_s: usize,
    /// `μ² N_s / σ²`; infinite when `σ² = 0` (serialized as `null`).
    #[serde(with = "finite_or_null")]
    pub beta: f64,
    pub alpha_star: f64,
    pub alpha_critical: f64,
    pub mse_unbiased: f64,
    pub mse_at_alpha_star: f64,
    /// `1 + 1/β`, the SNR improvement of the optimally biased estimator;
    /// `None` when `β = 0`.
    pub gain: Option<f64>,
}

impl SnrReport {
    /// `MSE(α)` for this mean and variance.
    pub fn mse_at(&self, alpha: f64) -> f64 {
        biased_mse(self.mean, self.variance, self.n_s, alpha)
    }

    /// SNR `μ² / MSE(α*)` of the optimally biased estimator, `1 + β`.
    pub fn biased_beta(&self) -> f64 {
        1.0 + self.beta
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// `α² μ² + (1 - α)² σ²/N_s`.
pub fn biased_mse(mean: f64, variance: f64, n_s: usize, alpha: f64) -> f64 {
    alpha * alpha * mean * mean + (1.0 - alpha).powi(2) * variance / n_s as f64
}

pub fn snr(mean: f64, variance: f64, n_s: usize) -> Result<SnrReport> {
    if !mean.is_finite() {
        return Err(Error::out_of_range("mean", mean, "finite reals"));
    }
    check_range("variance", variance, 0.0, f64::MAX, "[0, inf)")?;
    if n_s == 0 {
        return Err(Error::InvalidArgument("N_s must be at least 1".into()));
    }
    if mean == 0.0 && variance == 0.0 {
        return Err(Error::Degenerate("mean and variance are both zero".into()));
    }
    let noise = variance / n_s as f64;
    let signal = mean * mean;
    let alpha_star = noise / (signal + noise);
    let beta = if noise == 0.0 {
        f64::INFINITY
    } else {
        signal / noise
    };
    let gain = (beta > 0.0).then(|| 1.0 + 1.0 / beta);
    Ok(SnrReport {
        mean,
        variance,
        n_s,
        beta,
        alpha_star,
        alpha_critical: 2.0 * alpha_star,
        mse_unbiased: noise,
        mse_at_alpha_star: alpha_star * signal,
        gain,
    })
}

/// [`snr`] for a weight-`w` Pauli shadow estimate, whose single-shot variance
/// is `3^w - ⟨P⟩²`.
pub fn shadow_snr(w: usize, expval: f64, n_s: usize) -> Result<SnrReport> {
    check_range("expectation", expval, -1.0, 1.0, "[-1, 1]")?;
    snr(expval, 3f64.powi(w as i32) - expval * expval, n_s)
}

mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}
