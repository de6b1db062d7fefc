//! Average single-shot loss against the bias, and its minimizer.

use shadow_bias::analytics::{average_loss, eps_min, minimize_over_epsilon};

fn main() -> shadow_bias::Result<()> {
    println!("L(1, 0) = {}", average_loss(1.0, 0.0)?);
    println!("L(1, 80/81) = {}", average_loss(1.0, 80.0 / 81.0)?);

    for r in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let (e, l) = eps_min(r)?;
        let (e_num, l_num) = minimize_over_epsilon(|eps| average_loss(r, eps).unwrap());
        println!("|r| = {r:.2}: eps_min = {e:.6} (numeric {e_num:.6}), loss = {l:.6} (numeric {l_num:.6})");
    }
    Ok(())
}
