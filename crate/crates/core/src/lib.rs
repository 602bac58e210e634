//! Disordered clock chains whose scar towers are generated by Onsager-algebra
//! elements: operator construction, exact matrix-product scar states, exact
//! diagonalization, entanglement and quench dynamics.

pub mod algebra;
pub mod dynamics;
pub mod eigensolve;
pub mod entanglement;
pub mod error;
pub mod models;
pub mod rng;
pub mod state;
pub mod tensornet;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

pub use algebra::{BasisIndex, Charge, LocalAlgebra, SparseOperator};
pub use eigensolve::{diagonalize, EigenDecomposition, LevelStatistics};
pub use error::{Error, Result};
pub use models::{ModelSpec, Perturbation, PerturbationCoefficients};
pub use state::StateVector;
pub use tensornet::{MpoFactors, MpsFactors};
