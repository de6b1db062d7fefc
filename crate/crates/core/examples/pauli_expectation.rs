//! Exact Pauli expectation values on small statevectors.
//!
//! ```bash
//! cargo run --example pauli_expectation
//! ```

use shadow_bias::state::{exact_expectation, reduced_density, bloch_of};
use shadow_bias::{PauliString, Statevector, C64};

fn main() -> shadow_bias::Result<()> {
    // (|00> + |11>)/√2
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = C64::new(0.0, 0.0);
    let bell = Statevector::from_amplitudes(vec![C64::new(h, 0.0), zero, zero, C64::new(h, 0.0)])?;

    for s in ["XX", "YY", "ZZ", "ZI", "-YY", "0.5*XY"] {
        let p: PauliString = s.parse()?;
        println!("<{s:>6}> = {:+.6}", exact_expectation(&bell, &p)?);
    }

    let plus = Statevector::plus(3)?;
    let x0: PauliString = "XII".parse()?;
    println!("<XII> on |+++> = {:+.6}", exact_expectation(&plus, &x0)?);

    // One qubit of a Bell pair is maximally mixed.
    let rho = reduced_density(&bell, &[0])?;
    println!("Bloch vector of qubit 0: {:?}", bloch_of(&rho)?.0);
    Ok(())
}
