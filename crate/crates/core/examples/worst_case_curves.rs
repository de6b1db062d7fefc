//! Worst-case relative error curves: the state is an eigenstate of a weight-w
//! Pauli string, so every compatible shot returns the same value.

use shadow_bias::analytics::{minimize_over_epsilon, worst_case_mse};

fn main() -> shadow_bias::Result<()> {
    for w in [1, 2, 4] {
        for n_s in [10, 100, 1000] {
            let base = worst_case_mse(w, n_s, 0.0)?;
            let (eps, rel) = minimize_over_epsilon(|e| worst_case_mse(w, n_s, e).unwrap() / base);
            println!(
                "w={w} N_s={n_s:>4}: N_s·MSE(0) = {:>8.3}, best eps = {eps:.4}, relative MSE = {rel:.4}",
                base * n_s as f64
            );
        }
    }
    Ok(())
}
