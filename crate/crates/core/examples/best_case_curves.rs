//! Monte-Carlo best-case error (zero expectation value) against the bias.

use shadow_bias::analytics::best_case_mse;

fn main() -> shadow_bias::Result<()> {
    let reps = 20_000;
    for w in [1, 2] {
        for n_s in [10, 100] {
            print!("w={w} N_s={n_s:>3}:");
            for eps in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let e = best_case_mse(w, n_s, eps, reps, 3)?;
                print!("  {:.4}±{:.4}", e.mse, e.standard_error);
            }
            println!();
        }
    }
    Ok(())
}
