//! Average single-shot loss `E tr[(rho - rho_hat)^2]` of the biased local
//! reconstruction for a qubit with Bloch vector length `r`.

use crate::error::{check_range, Result};

/// `½(r² + 9(1-eps)) - √(1-eps) r²`.
pub fn average_loss(r_norm: f64, epsilon: f64) -> Result<f64> {
    check_range("|r|", r_norm, 0.0, 1.0, "[0, 1]")?;
    check_range("epsilon", epsilon, 0.0, 1.0, "[0, 1]")?;
    let s = (1.0 - epsilon).sqrt();
    let r2 = r_norm * r_norm;
    Ok(0.5 * (r2 + 9.0 * s * s) - s * r2)
}

/// Minimizer of [`average_loss`]: `√(1 - eps_min) = r²/9`, with loss
/// `r²(9 - r²)/18`. Returns `(eps_min, loss_min)`.
pub fn eps_min(r_norm: f64) -> Result<(f64, f64)> {
    check_range("|r|", r_norm, 0.0, 1.0, "[0, 1]")?;
    let r2 = r_norm * r_norm;
    Ok((1.0 - r2 * r2 / 81.0, r2 * (9.0 - r2) / 18.0))
}
