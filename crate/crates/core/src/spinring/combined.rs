//! Energy of `H + P` from one shadow collection, where `H` is a sum of
//! low-weight terms `A` and `P` a high-weight correction `R` whose SNR is
//! below 1. Three estimators are compared: `Ā` alone (drop `R`), `Ā + R̄`, and
//! `Ā + (1 - α) R̄`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::eigensolver::ground_state;
use super::experiment::{draw_low_snr_observables, DRAWS_PER_OBSERVABLE};
use super::hamiltonian::SpinRingSpec;
use crate::analytics::shadow_snr;
use crate::error::{check_range, Error, Result};
use crate::estimator::{mean_pauli_estimate_with, plugin_alpha_star, BiasSpec};
use crate::numeric::KahanSum;
use crate::pauli::PauliString;
use crate::rng;
use crate::sampler::collect_shadow;
use crate::state::{exact_expectation, Statevector};
use crate::table::Table;

/// Minimum weight of the correction term.
pub const MIN_CORRECTION_WEIGHT: usize = 4;

/// Candidates drawn by [`default_correction`].
pub const CORRECTION_CANDIDATES: usize = 50;

/// Weight-`w` correction with SNR below 1 at `N_s` whose SNR is the largest
/// among [`CORRECTION_CANDIDATES`] random draws. Many strings have zero
/// expectation by symmetry; this picks one where shrinking has signal to keep.
pub fn default_correction(state: &Statevector, w: usize, n_s: usize, seed: u64) -> Result<PauliString> {
    let drawn = draw_low_snr_observables(
        state,
        w,
        CORRECTION_CANDIDATES,
        n_s,
        seed,
        DRAWS_PER_OBSERVABLE * CORRECTION_CANDIDATES,
    )?;
    drawn
        .observables
        .into_iter()
        .max_by(|a, b| a.snr.total_cmp(&b.snr))
        .map(|o| o.pauli)
        .ok_or_else(|| Error::InvalidArgument(format!("no weight-{w} observable with SNR < 1 found")))
}

/// Where the shrinkage `α` applied to `R̄` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "alpha")]
pub enum AlphaSource {
    /// `α*` from the exact expectation value of `P`.
    Exact,
    /// Data-driven `α̂*` from each repetition's collection.
    Plugin,
    Fixed(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct CombinedReport {
    pub spec: SpinRingSpec,
    pub correction: String,
    pub n_s: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub alpha_source: AlphaSource,
    /// `⟨H + P⟩` in the ground state of `H`.
    pub exact_energy: f64,
    pub correction_value: f64,
    pub snr_correction: f64,
    pub alpha_star: f64,
    pub mean_alpha: f64,
    pub mse_drop: f64,
    pub se_drop: f64,
    pub mse_unbiased: f64,
    pub se_unbiased: f64,
    pub mse_biased: f64,
    pub se_biased: f64,
    /// Standard error of `mse_biased - mse_drop`.
    pub se_diff_drop: f64,
    /// Standard error of `mse_biased - mse_unbiased`.
    pub se_diff_unbiased: f64,
}

impl CombinedReport {
    /// Whether `mse_biased ≤ min(mse_drop, mse_unbiased)` holds up to
    /// `sigmas` paired standard errors.
    pub fn ordering_holds(&self, sigmas: f64) -> bool {
        self.mse_biased <= self.mse_drop + sigmas * self.se_diff_drop
            && self.mse_biased <= self.mse_unbiased + sigmas * self.se_diff_unbiased
    }

    pub fn to_table(&self) -> Table {
        let mut header = serde_json::to_value(self).unwrap_or_default();
        if let Some(map) = header.as_object_mut() {
            map.insert("subcommand".into(), json!("combined"));
        }
        let mut table = Table::new(header, &["estimator", "mse", "se", "se_diff_biased"]);
        table.push(vec!["drop".into(), self.mse_drop.into(), self.se_drop.into(), self.se_diff_drop.into()]);
        table.push(vec![
            "unbiased".into(),
            self.mse_unbiased.into(),
            self.se_unbiased.into(),
            self.se_diff_unbiased.into(),
        ]);
        table.push(vec!["biased".into(), self.mse_biased.into(), self.se_biased.into(), 0.0.into()]);
        table
    }
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().copied().collect::<KahanSum>().total() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = values.iter().map(|v| (v - mean).powi(2)).collect::<KahanSum>().total();
    (mean, (ss / (n - 1.0) / n).sqrt())
}

/// Runs the combined-estimator comparison on the ground state of `spec`.
pub fn combined_estimator_demo(
    spec: &SpinRingSpec,
    n_s: usize,
    p: &PauliString,
    repetitions: usize,
    seed: u64,
    alpha_source: AlphaSource,
) -> Result<CombinedReport> {
    if p.n_qubits() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            found: p.n_qubits(),
        });
    }
    let w = p.weight();
    if w < MIN_CORRECTION_WEIGHT {
        return Err(Error::InvalidArgument(format!(
            "correction weight {w} is below {MIN_CORRECTION_WEIGHT}"
        )));
    }
    if n_s == 0 || repetitions == 0 {
        return Err(Error::InvalidArgument("N_s and repetitions must be at least 1".into()));
    }
    if let AlphaSource::Fixed(a) = alpha_source {
        check_range("alpha", a, 0.0, 1.0, "[0, 1]")?;
    }
    let coeff = p.coefficient();
    if coeff == 0.0 {
        return Err(Error::InvalidArgument("correction has zero coefficient".into()));
    }

    let h = spec.hamiltonian();
    let gs = ground_state(&h)?;
    let terms = h.scaled_terms();
    let e_a: f64 = terms
        .iter()
        .map(|t| exact_expectation(&gs.state, t))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .collect::<KahanSum>()
        .total();
    let e_r = exact_expectation(&gs.state, p)?;
    let report = shadow_snr(w, (e_r / coeff).clamp(-1.0, 1.0), n_s)?;
    let target = e_a + e_r;

    let base = rng::purpose_seed(seed, "combined");
    let per_rep: Vec<[f64; 4]> = (0..repetitions)
        .into_par_iter()
        .map(|rep| {
            let c = collect_shadow(&gs.state, n_s, rng::derive_seed(base, rep as u64))?;
            let a_bar = terms
                .iter()
                .map(|t| Ok(mean_pauli_estimate_with(&c, t, BiasSpec::UNBIASED)?.value))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .collect::<KahanSum>()
                .total();
            let r_bar = mean_pauli_estimate_with(&c, p, BiasSpec::UNBIASED)?.value;
            let alpha = match alpha_source {
                AlphaSource::Exact => report.alpha_star,
                AlphaSource::Plugin => plugin_alpha_star(&c, p)?,
                AlphaSource::Fixed(a) => a,
            };
            Ok([
                (a_bar - target).powi(2),
                (a_bar + r_bar - target).powi(2),
                (a_bar + (1.0 - alpha) * r_bar - target).powi(2),
                alpha,
            ])
        })
        .collect::<Result<_>>()?;

    let col = |k: usize| per_rep.iter().map(|r| r[k]).collect::<Vec<_>>();
    let diff = |k: usize| per_rep.iter().map(|r| r[2] - r[k]).collect::<Vec<_>>();
    let (mse_drop, se_drop) = mean_se(&col(0));
    let (mse_unbiased, se_unbiased) = mean_se(&col(1));
    let (mse_biased, se_biased) = mean_se(&col(2));

    Ok(CombinedReport {
        spec: spec.clone(),
        correction: p.to_string(),
        n_s,
        repetitions,
        seed,
        alpha_source,
        exact_energy: target,
        correction_value: e_r,
        snr_correction: report.beta,
        alpha_star: report.alpha_star,
        mean_alpha: mean_se(&col(3)).0,
        mse_drop,
        se_drop,
        mse_unbiased,
        se_unbiased,
        mse_biased,
        se_biased,
        se_diff_drop: mean_se(&diff(0)).1,
        se_diff_unbiased: mean_se(&diff(1)).1,
    })
}
