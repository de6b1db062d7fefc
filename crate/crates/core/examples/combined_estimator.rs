//! Energy of `H + P` with a high-weight correction `P`: dropping `P`, adding its
//! unbiased estimate, or adding its optimally shrunk estimate.

use shadow_bias::spinring::combined::default_correction;
use shadow_bias::spinring::{combined_estimator_demo, ground_state, AlphaSource, SpinRingSpec};

fn main() -> shadow_bias::Result<()> {
    let spec = SpinRingSpec::random(8, 0.3, 0)?;
    let n_s = 10_000;
    let gs = ground_state(&spec.hamiltonian())?;
    let p = default_correction(&gs.state, 6, n_s, 0)?;

    for source in [AlphaSource::Exact, AlphaSource::Plugin] {
        let r = combined_estimator_demo(&spec, n_s, &p, 200, 0, source)?;
        println!(
            "{source:?}: P = {} (<P> = {:+.4}, SNR {:.3}, alpha* {:.3})",
            r.correction, r.correction_value, r.snr_correction, r.alpha_star
        );
        println!("  drop     {:.5} ± {:.5}", r.mse_drop, r.se_drop);
        println!("  unbiased {:.5} ± {:.5}", r.mse_unbiased, r.se_unbiased);
        println!("  biased   {:.5} ± {:.5}", r.mse_biased, r.se_biased);
    }
    Ok(())
}
