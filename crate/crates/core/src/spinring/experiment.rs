//! Shadow estimation of random high-weight perturbations `P` on the spin-ring
//! ground state with three strategies: unbiased, shrunk by the exact optimal
//! `alpha*` (needs the true value), and shrunk by the data-driven estimate.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::eigensolver::ground_state;
use super::hamiltonian::SpinRingSpec;
use crate::analytics::shadow_snr;
use crate::error::{Error, Result};
use crate::estimator::{mean_pauli_estimate_with, plugin_alpha_star_with, BiasSpec, VarianceModel};
use crate::numeric::KahanSum;
use crate::pauli::{Pauli, PauliString};
use crate::rng;
use crate::sampler::collect_shadow;
use crate::state::{exact_expectation, Statevector};
use crate::table::{Cell, Table};

/// Rows built from fewer repetitions than this are flagged.
pub const LOW_STATISTICS_REPS: usize = 30;
/// Default cap on observable draws per requested observable.
pub const DRAWS_PER_OBSERVABLE: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_s: usize,
    pub w: usize,
    pub n_obs: usize,
    pub repetitions: usize,
    pub seed: u64,
    /// Estimate `alpha` from the first half of each collection and the mean
    /// from the second half.
    #[serde(default)]
    pub split: bool,
    #[serde(default)]
    pub variance_model: VarianceModel,
    /// Cap on random observable draws; `None` means
    /// `DRAWS_PER_OBSERVABLE * n_obs`.
    #[serde(default)]
    pub max_draws: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(n_s: usize, w: usize, n_obs: usize, repetitions: usize, seed: u64) -> Self {
        Self {
            n_s,
            w,
            n_obs,
            repetitions,
            seed,
            split: false,
            variance_model: VarianceModel::Theoretical,
            max_draws: None,
        }
    }

    fn draw_limit(&self) -> usize {
        self.max_draws
            .unwrap_or(DRAWS_PER_OBSERVABLE.saturating_mul(self.n_obs))
    }
}

/// A drawn observable together with its exact expectation value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectedObservable {
    pub pauli: PauliString,
    pub true_value: f64,
    /// Unbiased SNR `β` at the configured `N_s`.
    pub snr: f64,
    pub alpha_star: f64,
}

/// Outcome of [`draw_low_snr_observables`].
#[derive(Debug, Clone, Serialize)]
pub struct ObservableDraw {
    pub observables: Vec<SelectedObservable>,
    pub draws: usize,
    /// Requested minus found.
    pub shortfall: usize,
}

/// Uniformly random weight-`w` Pauli string on `n` qubits: `w` distinct sites,
/// then a uniform non-identity letter per site.
pub fn random_pauli<R: Rng + ?Sized>(n: usize, w: usize, rng: &mut R) -> Result<PauliString> {
    if w == 0 || w > n {
        return Err(Error::InvalidArgument(format!(
            "weight {w} is not in 1..={n}"
        )));
    }
    let mut sites: Vec<usize> = sample(rng, n, w).into_vec();
    sites.sort_unstable();
    let terms: Vec<(usize, Pauli)> = sites
        .into_iter()
        .map(|q| (q, Pauli::NON_IDENTITY[rng.random_range(0..3)]))
        .collect();
    PauliString::from_sparse(n, &terms)
}

/// Draws distinct weight-`w` observables whose unbiased SNR at `N_s` is
/// below 1, until `count` are found or `max_draws` draws are spent.
pub fn draw_low_snr_observables(
    state: &Statevector,
    w: usize,
    count: usize,
    n_s: usize,
    seed: u64,
    max_draws: usize,
) -> Result<ObservableDraw> {
    let n = state.n_qubits();
    let mut stream = rng::stream(rng::purpose_seed(seed, "observables"));
    let mut seen = HashSet::new();
    let mut observables = Vec::with_capacity(count);
    let mut draws = 0;
    while observables.len() < count && draws < max_draws {
        draws += 1;
        let p = random_pauli(n, w, &mut stream)?;
        if !seen.insert(p.to_string()) {
            continue;
        }
        let true_value = exact_expectation(state, &p)?.clamp(-1.0, 1.0);
        let report = shadow_snr(w, true_value, n_s)?;
        if report.beta < 1.0 {
            observables.push(SelectedObservable {
                pauli: p,
                true_value,
                snr: report.beta,
                alpha_star: report.alpha_star,
            });
        }
    }
    Ok(ObservableDraw {
        shortfall: count - observables.len(),
        observables,
        draws,
    })
}

/// Per-observable results. MSEs are averages of squared errors over
/// repetitions; `se_*` are their standard errors, and `se_diff_*` the
/// standard error of the paired difference to the unbiased MSE.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableRow {
    pub observable: String,
    pub true_value: f64,
    pub snr_unbiased: f64,
    pub alpha_star: f64,
    pub mean_alpha_estimated: f64,
    pub mse_unbiased: f64,
    pub se_unbiased: f64,
    pub mse_alpha_exact: f64,
    pub se_alpha_exact: f64,
    pub mse_alpha_estimated: f64,
    pub se_alpha_estimated: f64,
    pub se_diff_exact: f64,
    pub se_diff_estimated: f64,
    pub low_statistics: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub spec: SpinRingSpec,
    pub config: ExperimentConfig,
    pub ground_energy: f64,
    pub ground_residual: f64,
    pub draws: usize,
    pub shortfall: usize,
    /// Sorted by `mse_unbiased`, largest first.
    pub rows: Vec<ObservableRow>,
}

pub const EXPERIMENT_COLUMNS: [&str; 14] = [
    "observable",
    "true_value",
    "snr_unbiased",
    "alpha_star",
    "mean_alpha_estimated",
    "mse_unbiased",
    "se_unbiased",
    "mse_alpha_exact",
    "se_alpha_exact",
    "mse_alpha_estimated",
    "se_alpha_estimated",
    "se_diff_exact",
    "se_diff_estimated",
    "low_statistics",
];

impl ExperimentReport {
    /// Header carries the spec, the resolved config and run diagnostics.
    pub fn to_table(&self) -> Table {
        let header = json!({
            "subcommand": "experiment",
            "spec": self.spec,
            "config": self.config,
            "ground_energy": self.ground_energy,
            "ground_residual": self.ground_residual,
            "draws": self.draws,
            "shortfall": self.shortfall,
        });
        let mut table = Table::new(header, &EXPERIMENT_COLUMNS);
        for r in &self.rows {
            table.push(vec![
                Cell::from(r.observable.as_str()),
                r.true_value.into(),
                r.snr_unbiased.into(),
                r.alpha_star.into(),
                r.mean_alpha_estimated.into(),
                r.mse_unbiased.into(),
                r.se_unbiased.into(),
                r.mse_alpha_exact.into(),
                r.se_alpha_exact.into(),
                r.mse_alpha_estimated.into(),
                r.se_alpha_estimated.into(),
                r.se_diff_exact.into(),
                r.se_diff_estimated.into(),
                r.low_statistics.into(),
            ]);
        }
        table
    }

    /// Fraction of rows with `mse_alpha_exact < mse_unbiased`.
    pub fn exact_win_fraction(&self) -> f64 {
        self.win_fraction(|r| r.mse_alpha_exact)
    }

    /// Fraction of rows with `mse_alpha_estimated < mse_unbiased`.
    pub fn estimated_win_fraction(&self) -> f64 {
        self.win_fraction(|r| r.mse_alpha_estimated)
    }

    fn win_fraction(&self, f: impl Fn(&ObservableRow) -> f64) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        let wins = self.rows.iter().filter(|r| f(r) < r.mse_unbiased).count();
        wins as f64 / self.rows.len() as f64
    }
}

/// Squared errors of one repetition, three per observable.
fn repetition_errors(
    state: &Statevector,
    observables: &[SelectedObservable],
    config: &ExperimentConfig,
    rep: usize,
) -> Result<Vec<[f64; 4]>> {
    let seed = rng::derive_seed(rng::purpose_seed(config.seed, "shadows"), rep as u64);
    let shadow = collect_shadow(state, config.n_s, seed)?;
    let halves = if config.split {
        Some(shadow.split_at(config.n_s / 2)?)
    } else {
        None
    };
    observables
        .iter()
        .map(|o| {
            let unbiased = mean_pauli_estimate_with(&shadow, &o.pauli, BiasSpec::UNBIASED)?.value;
            let exact = (1.0 - o.alpha_star) * unbiased;
            let (alpha_hat, plugin) = match &halves {
                Some((a, b)) => {
                    let alpha = plugin_alpha_star_with(a, &o.pauli, config.variance_model)?;
                    let mean = mean_pauli_estimate_with(b, &o.pauli, BiasSpec::UNBIASED)?.value;
                    (alpha, (1.0 - alpha) * mean)
                }
                None => {
                    let alpha = plugin_alpha_star_with(&shadow, &o.pauli, config.variance_model)?;
                    (alpha, (1.0 - alpha) * unbiased)
                }
            };
            let t = o.true_value;
            Ok([(unbiased - t).powi(2), (exact - t).powi(2), (plugin - t).powi(2), alpha_hat])
        })
        .collect()
}

/// Mean and standard error of the mean.
fn mean_se(values: impl Iterator<Item = f64> + Clone, count: usize) -> (f64, f64) {
    let n = count as f64;
    let mean = values.clone().collect::<KahanSum>().total() / n;
    if count < 2 {
        return (mean, 0.0);
    }
    let ss = values.map(|v| (v - mean).powi(2)).collect::<KahanSum>().total();
    (mean, (ss / (n - 1.0) / n).sqrt())
}

/// Runs the three-strategy experiment on the ground state of `spec`.
///
/// Repetition `r` uses its own shadow collection, so the report depends only
/// on `(spec, config)`.
pub fn perturbation_experiment(
    spec: &SpinRingSpec,
    config: &ExperimentConfig,
) -> Result<ExperimentReport> {
    if config.w == 0 || config.w > spec.n {
        return Err(Error::InvalidArgument(format!(
            "weight {} is not in 1..={}",
            config.w, spec.n
        )));
    }
    if config.n_obs == 0 || config.repetitions == 0 || config.n_s == 0 {
        return Err(Error::InvalidArgument(
            "n_obs, repetitions and N_s must be at least 1".into(),
        ));
    }
    if config.split && config.n_s < 2 {
        return Err(Error::InvalidArgument("sample splitting needs N_s >= 2".into()));
    }
    let gs = ground_state(&spec.hamiltonian())?;
    let drawn = draw_low_snr_observables(
        &gs.state,
        config.w,
        config.n_obs,
        config.n_s,
        config.seed,
        config.draw_limit(),
    )?;
    let obs = &drawn.observables;

    let per_rep: Vec<Vec<[f64; 4]>> = (0..config.repetitions)
        .into_par_iter()
        .map(|rep| repetition_errors(&gs.state, obs, config, rep))
        .collect::<Result<_>>()?;

    let reps = config.repetitions;
    let mut rows: Vec<ObservableRow> = obs
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let col = |k: usize| per_rep.iter().map(move |r| r[i][k]);
            let diff = |k: usize| per_rep.iter().map(move |r| r[i][k] - r[i][0]);
            let (mse_u, se_u) = mean_se(col(0), reps);
            let (mse_e, se_e) = mean_se(col(1), reps);
            let (mse_p, se_p) = mean_se(col(2), reps);
            let (mean_alpha, _) = mean_se(col(3), reps);
            ObservableRow {
                observable: o.pauli.to_string(),
                true_value: o.true_value,
                snr_unbiased: o.snr,
                alpha_star: o.alpha_star,
                mean_alpha_estimated: mean_alpha,
                mse_unbiased: mse_u,
                se_unbiased: se_u,
                mse_alpha_exact: mse_e,
                se_alpha_exact: se_e,
                mse_alpha_estimated: mse_p,
                se_alpha_estimated: se_p,
                se_diff_exact: mean_se(diff(1), reps).1,
                se_diff_estimated: mean_se(diff(2), reps).1,
                low_statistics: reps < LOW_STATISTICS_REPS,
            }
        })
        .collect();
    rows.sort_by(|a, b| b.mse_unbiased.total_cmp(&a.mse_unbiased));

    Ok(ExperimentReport {
        spec: spec.clone(),
        config: config.clone(),
        ground_energy: gs.energy,
        ground_residual: gs.residual,
        draws: drawn.draws,
        shortfall: drawn.shortfall,
        rows,
    })
}
