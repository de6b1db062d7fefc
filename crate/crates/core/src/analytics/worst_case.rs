//! Worst case: the state is an eigenstate of the weight-`w` Pauli observable,
//! `tr(O rho) = 1`.
//!
//! A single shot is `3^w (1-eps)^{w/2}` with probability `p = 3^{-w}`
//! (compatible basis) and 0 otherwise, so the number of compatible shots is
//! `k ~ B(N_s, p)` and the mean squared error is
//! `Σ_k C(N_s,k) p^k (1-p)^{N_s-k} |3^w (1-eps)^{w/2} k / N_s - 1|^2`.

use crate::error::{check_range, Error, Result};
use crate::numeric::KahanSum;

/// Largest `N_s` for which [`worst_case_mse`] evaluates the binomial sum.
pub const EXACT_SUM_LIMIT: usize = 100_000;

/// Binomial pmf `B(n, p)` for every `k ∈ 0..=n`.
///
/// Weights are generated by the ratio recurrence
/// `pmf(k+1)/pmf(k) = (n-k)/(k+1) · p/(1-p)` walking outward from the mode
/// (where the relative rounding drift is smallest), then normalized with a
/// compensated sum; tails underflow to 0 instead of overflowing.
pub fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    let mut pmf = vec![0.0; n + 1];
    if p <= 0.0 {
        pmf[0] = 1.0;
        return pmf;
    }
    if p >= 1.0 {
        pmf[n] = 1.0;
        return pmf;
    }
    let mode = (((n + 1) as f64) * p).floor().min(n as f64) as usize;
    let odds = p / (1.0 - p);
    pmf[mode] = 1.0;
    for k in mode..n {
        pmf[k + 1] = pmf[k] * ((n - k) as f64 / (k + 1) as f64) * odds;
        if pmf[k + 1] == 0.0 {
            break;
        }
    }
    for k in (1..=mode).rev() {
        pmf[k - 1] = pmf[k] * (k as f64 / (n - k + 1) as f64) / odds;
        if pmf[k - 1] == 0.0 {
            break;
        }
    }
    let total = pmf.iter().copied().collect::<KahanSum>().total();
    pmf.iter_mut().for_each(|v| *v /= total);
    pmf
}

fn validate(w: usize, n_s: usize, epsilon: f64) -> Result<()> {
    if w == 0 {
        return Err(Error::InvalidArgument("weight must be at least 1".into()));
    }
    if n_s == 0 {
        return Err(Error::InvalidArgument("N_s must be at least 1".into()));
    }
    check_range("epsilon", epsilon, 0.0, 1.0, "[0, 1]")
}

/// Exact binomial-sum worst-case mean squared error for `N_s <=`
/// [`EXACT_SUM_LIMIT`].
pub fn worst_case_mse(w: usize, n_s: usize, epsilon: f64) -> Result<f64> {
    validate(w, n_s, epsilon)?;
    if n_s > EXACT_SUM_LIMIT {
        return Err(Error::ExactSumLimit {
            n_s,
            limit: EXACT_SUM_LIMIT,
        });
    }
    let p = 3f64.powi(-(w as i32));
    let shot = 3f64.powi(w as i32) * (1.0 - epsilon).sqrt().powi(w as i32);
    let pmf = binomial_pmf(n_s, p);
    let sum = pmf
        .iter()
        .enumerate()
        .filter(|(_, &q)| q > 0.0)
        .map(|(k, &q)| {
            let err = shot * k as f64 / n_s as f64 - 1.0;
            q * err * err
        })
        .collect::<KahanSum>();
    Ok(sum.total())
}

/// Bias/variance form of the same quantity, valid for any `N_s`:
/// `(1 - s)^2 + s^2 (3^w - 1) / N_s` with `s = (1-eps)^{w/2}`.
pub fn worst_case_mse_closed(w: usize, n_s: usize, epsilon: f64) -> Result<f64> {
    validate(w, n_s, epsilon)?;
    let s = (1.0 - epsilon).sqrt().powi(w as i32);
    Ok((1.0 - s).powi(2) + s * s * (3f64.powi(w as i32) - 1.0) / n_s as f64)
}

/// Exact sum where available, closed form beyond [`EXACT_SUM_LIMIT`].
pub fn worst_case_mse_auto(w: usize, n_s: usize, epsilon: f64) -> Result<f64> {
    if n_s <= EXACT_SUM_LIMIT {
        worst_case_mse(w, n_s, epsilon)
    } else {
        worst_case_mse_closed(w, n_s, epsilon)
    }
}
