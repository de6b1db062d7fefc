//! Best case: `tr(O rho) = 0`, estimated by Monte Carlo.
//!
//! A single shot is ±1 with probability `3^{-w}/2` each (compatible basis,
//! unbiased ±1 outcome) and 0 otherwise. Each repetition draws the sum `k` of
//! `N_s` such shots and scores the squared estimate
//! `(3^w (1-eps)^{w/2} k / N_s)^2`.

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::rng;

/// Minimum number of repetitions accepted by [`best_case_mse`].
pub const MIN_REPS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestCaseEstimate {
    pub mse: f64,
    pub standard_error: f64,
}

/// Draws the shot sum `k` for one repetition.
fn draw_sum(rng: &mut rng::Stream, compatible: &Binomial) -> Result<i64> {
    let m = compatible.sample(rng);
    if m == 0 {
        return Ok(0);
    }
    let plus = Binomial::new(m, 0.5)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?
        .sample(rng);
    Ok(2 * plus as i64 - m as i64)
}

/// Monte-Carlo best-case mean squared error and its standard error.
///
/// Repetition `r` draws from substream `r` of `seed`. The draws do not depend
/// on `eps`, so for a fixed seed the result is exactly `(1-eps)^w` times the
/// `eps = 0` value (up to one rounding of the prefactor).
pub fn best_case_mse(
    w: usize,
    n_s: usize,
    epsilon: f64,
    reps: usize,
    seed: u64,
) -> Result<BestCaseEstimate> {
    if w == 0 {
        return Err(Error::InvalidArgument("weight must be at least 1".into()));
    }
    if n_s == 0 {
        return Err(Error::InvalidArgument("N_s must be at least 1".into()));
    }
    if reps < MIN_REPS {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_REPS} repetitions required, got {reps}"
        )));
    }
    check_range("epsilon", epsilon, 0.0, 1.0, "[0, 1]")?;

    let p = 3f64.powi(-(w as i32));
    let compatible =
        Binomial::new(n_s as u64, p).map_err(|e| Error::InvalidArgument(e.to_string()))?;

    let (sum2, sum4) = (0..reps)
        .into_par_iter()
        .map(|r| {
            let k = draw_sum(&mut rng::substream(seed, r as u64), &compatible)?;
            let k2 = (k * k) as u128;
            Ok::<_, Error>((k2, k2 * k2))
        })
        .try_reduce(|| (0u128, 0u128), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;

    let shot = 3f64.powi(w as i32) * (1.0 - epsilon).sqrt().powi(w as i32) / n_s as f64;
    let factor = shot * shot;
    let n = reps as f64;
    let mean_k2 = sum2 as f64 / n;
    // Sample variance of k^2 from integer moments: (n Σk⁴ - (Σk²)²) / (n (n-1)).
    let spread = (reps as u128 * sum4).saturating_sub(sum2 * sum2) as f64;
    let var_k2 = spread / (n * (n - 1.0));
    Ok(BestCaseEstimate {
        mse: factor * mean_k2,
        standard_error: factor * (var_k2 / n).sqrt(),
    })
}
