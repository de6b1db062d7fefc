//! Spin-ring demonstration: ground state of
//! `H = Σ_k ω_k Z_k + J σ_k·σ_{k+1}` on a periodic ring, shadow estimation of
//! high-weight perturbations under several biasing strategies, the combined
//! low-weight + high-weight energy estimator, and single-qubit sample clouds.

pub mod combined;
pub mod density;
pub mod eigensolver;
pub mod experiment;
pub mod hamiltonian;

pub use combined::{combined_estimator_demo, AlphaSource, CombinedReport};
pub use density::{emit_density_samples, DensitySamples};
pub use eigensolver::{ground_state, GroundState};
pub use experiment::{perturbation_experiment, ExperimentConfig, ExperimentReport};
pub use hamiltonian::{build_spin_ring, Hamiltonian, SpinRingSpec};
