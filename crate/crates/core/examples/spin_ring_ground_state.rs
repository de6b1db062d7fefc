//! Ground state of the periodic spin ring by Lanczos iteration.

use shadow_bias::spinring::{build_spin_ring, ground_state};

fn main() -> shadow_bias::Result<()> {
    for n in [4, 8, 10] {
        let (spec, h) = build_spin_ring(n, 0.3, 0)?;
        let gs = ground_state(&h)?;
        println!(
            "n={n:>2}: {} terms, E0 = {:.12}, residual = {:.2e}, restarts = {}",
            h.terms().len(),
            gs.energy,
            gs.residual,
            gs.restarts
        );
        if n == 4 {
            println!("      omega = {:?}", spec.omega);
        }
    }
    Ok(())
}
