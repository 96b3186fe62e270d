//! Frequency-estimation bounds for atomic-clock interrogation schemes.
//!
//! The crate computes, for Rabi, Ramsey and coherent-population-trapping (CPT)
//! interrogation, the outcome probabilities of a population measurement, the
//! classical Fisher information of that measurement and the quantum Fisher
//! information of the probe state. The estimated parameter is always the atomic
//! transition frequency `ω_A`.
//!
//! Modules:
//! - [`linalg`]: fixed-size (2×2, 3×3) complex matrices, vectors and a Hermitian
//!   eigensolver.
//! - [`twolevel`]: closed-form propagators and states of the two-level atom.
//! - [`estimation`]: Fisher information, symmetric logarithmic derivative, quantum
//!   Fisher information and the finite-difference oracle.
//! - [`cpt`]: steady state of the Λ system, its eigensystem and information measures.
//!
//! ```
//! use clock_fisher::twolevel::rabi;
//!
//! // On resonance a π-pulse gives F = 4/Ω0².
//! let fi = rabi::fisher(1.0, 0.0).unwrap();
//! assert!((fi.value - 4.0).abs() < 1e-12);
//! ```

pub mod cpt;
pub mod error;
pub mod estimation;
pub mod linalg;
pub mod twolevel;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, EigenSystem, C64};
