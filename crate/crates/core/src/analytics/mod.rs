//! Closed-form and semi-analytic performance predictions for biased shadows.
//!
//! - [`loss`]: single-shot average-case loss of a biased single-qubit
//!   reconstruction and its minimizing bias.
//! - [`worst_case`]: exact binomial mean squared error when the state is an
//!   eigenstate of the observable.
//! - [`best_case`]: Monte-Carlo mean squared error when the expectation is 0.
//! - [`snr`]: signal-to-noise algebra of a rescaled mean estimator.

pub mod best_case;
pub mod loss;
pub mod snr;
pub mod worst_case;

pub use best_case::{best_case_mse, BestCaseEstimate};
pub use loss::{average_loss, eps_min};
pub use snr::{biased_mse, shadow_snr, snr, SnrReport};
pub use worst_case::{worst_case_mse, worst_case_mse_auto, worst_case_mse_closed, EXACT_SUM_LIMIT};

use crate::numeric::minimize_scalar;

/// Grid resolution and golden-section tolerance used for minimizing curves
/// over `eps`.
pub const EPS_GRID: usize = 1000;
pub const EPS_TOL: f64 = 1e-10;

/// `(eps, f(eps))` at the minimum of `f` over `[0, 1]`.
pub fn minimize_over_epsilon<F: Fn(f64) -> f64>(f: F) -> (f64, f64) {
    minimize_scalar(f, 0.0, 1.0, EPS_GRID, EPS_TOL)
}
