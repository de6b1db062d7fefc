//! Collecting a seeded shadow and round-tripping it through JSON.

use shadow_bias::sampler::collect_shadow;
use shadow_bias::{Basis, ShadowCollection, Statevector};

fn main() -> shadow_bias::Result<()> {
    let state = Statevector::plus(4)?;
    let shadow = collect_shadow(&state, 2000, 42)?;

    let mut basis_counts = [0usize; 3];
    for s in shadow.snapshots() {
        for b in s.bases() {
            basis_counts[b.index()] += 1;
        }
    }
    let total = (shadow.len() * shadow.n_qubits()) as f64;
    for b in Basis::ALL {
        println!("basis {}: {:.4}", b.as_char(), basis_counts[b.index()] as f64 / total);
    }
    println!("first snapshots: {} {} {}", shadow.snapshots()[0], shadow.snapshots()[1], shadow.snapshots()[2]);

    let json = shadow.to_json()?;
    let back = ShadowCollection::from_json(&json)?;
    assert_eq!(back, shadow);
    println!("json round trip ok ({} bytes)", json.len());

    // Same seed, same snapshots.
    assert_eq!(collect_shadow(&state, 2000, 42)?, shadow);
    Ok(())
}
