//! Clouds of single-qubit Bloch-vector estimates, each the mean of `N_s`
//! snapshots, together with their shrunk counterparts.
//!
//! Shrinking an estimate `v` to `s v` with `s = √(1-eps)` lowers the squared
//! distance to the true vector `r` exactly when `v` lies outside the sphere
//! with center `r / (1+s)` and radius `|r| / (1+s)`. The origin and
//! `2r/(1+s)` are antipodal on it, so the unbiased mean `r` lies on that
//! diameter.

use serde::Serialize;
use serde_json::json;

use crate::error::{check_range, Error, Result};
use crate::estimator::{mean_pauli_estimate, BiasSpec};
use crate::pauli::{Pauli, PauliString};
use crate::rng;
use crate::sampler::collect_bloch_shadow;
use crate::state::BlochVector;
use crate::table::{Cell, Table};

pub const DEFAULT_N_S: usize = 100;
pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_Z: f64 = 136.0 / 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityPoint {
    pub unbiased: [f64; 3],
    pub biased: [f64; 3],
    /// `|biased - r|² - |unbiased - r|²`.
    pub loss_change: f64,
}

impl DensityPoint {
    /// `-1` when shrinking helps, `1` when it hurts, `0` on the sphere.
    pub fn loss_change_sign(&self) -> i64 {
        if self.loss_change < 0.0 {
            -1
        } else if self.loss_change > 0.0 {
            1
        } else {
            0
        }
    }
}

/// Boundary between the regions where shrinking helps and hurts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecisionSphere {
    pub center: [f64; 3],
    pub radius: f64,
    /// Point antipodal to the origin.
    pub far_point: [f64; 3],
}

impl DecisionSphere {
    pub fn new(r: &BlochVector, epsilon: f64) -> Self {
        let s = (1.0 - epsilon).sqrt();
        let center = r.0.map(|c| c / (1.0 + s));
        Self {
            center,
            radius: r.norm() / (1.0 + s),
            far_point: center.map(|c| 2.0 * c),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensitySamples {
    pub bloch: [f64; 3],
    pub n_s: usize,
    pub n_points: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub sphere: DecisionSphere,
    pub points: Vec<DensityPoint>,
}

impl DensitySamples {
    /// Fraction of points where shrinking strictly reduces the error.
    pub fn improved_fraction(&self) -> f64 {
        let improved = self.points.iter().filter(|p| p.loss_change < 0.0).count();
        improved as f64 / self.points.len() as f64
    }

    pub fn to_table(&self) -> Table {
        let header = json!({
            "subcommand": "density-samples",
            "bloch": self.bloch,
            "n_s": self.n_s,
            "n_points": self.n_points,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "circle": self.sphere,
        });
        let mut table = Table::new(
            header,
            &["x", "y", "z", "x_biased", "y_biased", "z_biased", "loss_change", "loss_change_sign"],
        );
        for p in &self.points {
            let mut row: Vec<Cell> = p.unbiased.iter().chain(&p.biased).map(|&v| v.into()).collect();
            row.push(p.loss_change.into());
            row.push(p.loss_change_sign().into());
            table.push(row);
        }
        table
    }
}

/// `n_points` independent estimates of the Bloch vector `r`, each averaged
/// over `N_s` snapshots, and their `eps`-biased versions.
pub fn emit_density_samples(
    r: &BlochVector,
    n_s: usize,
    n_points: usize,
    epsilon: f64,
    seed: u64,
) -> Result<DensitySamples> {
    if !r.is_physical() {
        return Err(Error::out_of_range("|r|", r.norm(), "[0, 1]"));
    }
    check_range("epsilon", epsilon, 0.0, 1.0, "[0, 1]")?;
    if n_s == 0 || n_points == 0 {
        return Err(Error::InvalidArgument("N_s and n_points must be at least 1".into()));
    }
    let paulis = Pauli::NON_IDENTITY.map(|p| PauliString::new(vec![p]));
    let bias = BiasSpec::channel(epsilon)?;
    let s = bias.scale_for_weight(1);
    let base = rng::purpose_seed(seed, "density");

    let points = (0..n_points)
        .map(|i| {
            let c = collect_bloch_shadow(r, n_s, rng::derive_seed(base, i as u64))?;
            let mut unbiased = [0.0; 3];
            for (u, p) in unbiased.iter_mut().zip(&paulis) {
                *u = mean_pauli_estimate(&c, p, 0.0)?.value;
            }
            let biased = unbiased.map(|u| s * u);
            let sq = |v: &[f64; 3]| v.iter().zip(&r.0).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
            Ok(DensityPoint {
                unbiased,
                biased,
                loss_change: sq(&biased) - sq(&unbiased),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(DensitySamples {
        bloch: r.0,
        n_s,
        n_points,
        epsilon,
        seed,
        sphere: DecisionSphere::new(r, epsilon),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_bias_columns_equal_unbiased() {
        let r = BlochVector::new(0.0, 0.0, DEFAULT_Z);
        let d = emit_density_samples(&r, 20, 50, 0.0, 1).unwrap();
        for p in &d.points {
            assert_eq!(p.unbiased, p.biased);
            assert_eq!(p.loss_change_sign(), 0);
        }
    }

    #[test]
    fn sign_agrees_with_sphere() {
        let r = BlochVector::new(0.2, -0.1, 0.5);
        let d = emit_density_samples(&r, 10, 200, 0.3, 2).unwrap();
        for p in &d.points {
            let dist2: f64 = p.unbiased.iter().zip(&d.sphere.center).map(|(a, b)| (a - b).powi(2)).sum();
            let outside = dist2 > d.sphere.radius.powi(2);
            if (dist2.sqrt() - d.sphere.radius).abs() > 1e-9 {
                assert_eq!(outside, p.loss_change < 0.0);
            }
        }
    }

    #[test]
    fn sphere_passes_through_origin_and_contains_r_on_diameter() {
        let r = BlochVector::new(0.0, 0.0, DEFAULT_Z);
        let s = DecisionSphere::new(&r, DEFAULT_EPSILON);
        let norm = |v: [f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm(s.center) - s.radius).abs() < 1e-15);
        assert!(s.far_point[2] >= r.z());
        assert_eq!(DecisionSphere::new(&r, 0.0).far_point, r.0);
    }

    #[test]
    fn rejects_unphysical_vectors() {
        assert!(emit_density_samples(&BlochVector::new(1.0, 1.0, 0.0), 10, 1, 0.1, 0).is_err());
    }
}
