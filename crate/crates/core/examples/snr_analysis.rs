//! Optimal shrinkage from the signal-to-noise ratio, and how it vanishes as the
//! number of shots grows.

use shadow_bias::analytics::{shadow_snr, snr};

fn main() -> shadow_bias::Result<()> {
    let r = snr(1.0, 8.0, 8)?;
    println!("{}", r.to_json()?);
    println!("MSE at alpha_c = {} (unbiased {})", r.mse_at(r.alpha_critical), r.mse_unbiased);

    for n_s in [100usize, 10_000, 1_000_000] {
        let r = shadow_snr(6, 0.1, n_s)?;
        println!("w=6 <P>=0.1 N_s={n_s:>7}: beta = {:.4}, alpha* = {:.4}", r.beta, r.alpha_star);
    }
    Ok(())
}
