//! Single-qubit estimate clouds and the sphere separating estimates that
//! shrinking improves from those it worsens. Writes CSV to stdout with `csv`.

use shadow_bias::spinring::density::{DEFAULT_EPSILON, DEFAULT_N_S, DEFAULT_Z};
use shadow_bias::spinring::emit_density_samples;
use shadow_bias::BlochVector;

fn main() -> shadow_bias::Result<()> {
    let r = BlochVector::new(0.0, 0.0, DEFAULT_Z);
    let samples = emit_density_samples(&r, DEFAULT_N_S, 2000, DEFAULT_EPSILON, 0)?;
    if std::env::args().any(|a| a == "csv") {
        print!("{}", samples.to_table().to_csv());
        return Ok(());
    }
    let mean_z = samples.points.iter().map(|p| p.unbiased[2]).sum::<f64>() / samples.points.len() as f64;
    println!("mean <Z> estimate = {mean_z:.4} (true {DEFAULT_Z:.4})");
    println!("sphere center {:?}, radius {:.4}", samples.sphere.center, samples.sphere.radius);
    println!("shrinking helps for {:.1}% of estimates", 100.0 * samples.improved_fraction());
    Ok(())
}
