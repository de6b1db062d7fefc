//! Unbiased and biased mean estimates of Pauli expectations, reduced density
//! estimates, and the data-driven shrinkage factor.

use shadow_bias::estimator::{
    mean_pauli_estimate, mean_pauli_estimate_with, plugin_alpha_star, reduced_density_estimate,
};
use shadow_bias::sampler::collect_shadow;
use shadow_bias::state::exact_expectation;
use shadow_bias::{rng, BiasSpec, PauliString, Statevector};

fn main() -> shadow_bias::Result<()> {
    let n = 5;
    let state = Statevector::random(n, &mut rng::stream(7))?;
    let shadow = collect_shadow(&state, 5000, 1)?;

    println!("{:<8} {:>9} {:>9} {:>9} {:>9}", "P", "exact", "eps=0", "eps=0.2", "alpha^");
    for s in ["ZIIII", "XYIII", "ZZZII", "XYZXY"] {
        let p: PauliString = s.parse()?;
        let exact = exact_expectation(&state, &p)?;
        let unbiased = mean_pauli_estimate(&shadow, &p, 0.0)?;
        let biased = mean_pauli_estimate(&shadow, &p, 0.2)?;
        let alpha = plugin_alpha_star(&shadow, &p)?;
        println!(
            "{s:<8} {exact:>+9.4} {:>+9.4} {:>+9.4} {alpha:>9.4}",
            unbiased.value, biased.value
        );
    }

    // The same shrinkage expressed as a global rescale.
    let p: PauliString = "XYZXY".parse()?;
    let r = mean_pauli_estimate_with(&shadow, &p, BiasSpec::rescale(0.5)?)?;
    println!("rescale alpha=0.5: {:+.4} (eps equivalent {:.4})", r.value, r.epsilon.unwrap_or(f64::NAN));

    let rho = reduced_density_estimate(&shadow, &[0, 1], 0.0)?;
    println!("two-qubit estimate trace = {:.6}", rho.trace().re);
    Ok(())
}
