//! Biased estimator channels for Pauli classical shadows.
//!
//! The crate is organised bottom-up:
//!
//! - [`pauli`] and [`state`]: Pauli strings, statevectors, small density
//!   matrices and Bloch vectors. These are exact and serve as the reference
//!   for everything stochastic.
//! - [`sampler`]: the random local-Pauli measurement protocol producing
//!   [`Snapshot`]s and [`ShadowCollection`]s.
//! - [`estimator`]: biased and unbiased reconstruction of Pauli expectation
//!   values and reduced density matrices, plus the data-driven choice of the
//!   shrinkage factor.
//! - [`analytics`]: closed-form average-case loss, worst/best-case mean squared
//!   error curves and signal-to-noise algebra.
//! - [`spinring`]: the Heisenberg spin-ring ground state and the perturbation
//!   experiments built on top of it.
//! - [`cli`]: the `shadow-bias` command line front end.
//!
//! Runnable walkthroughs for every capability live in `examples/`.

pub mod analytics;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod numeric;
pub mod pauli;
pub mod rng;
pub mod sampler;
pub mod spinring;
pub mod state;
pub mod table;

pub use error::{Error, Result};
pub use estimator::{BiasSpec, EstimateReport};
pub use pauli::{Pauli, PauliString};
pub use sampler::{Basis, ShadowCollection, Snapshot};
pub use state::{BlochVector, DensityMatrix, Statevector};

pub use num_complex::Complex64 as C64;
