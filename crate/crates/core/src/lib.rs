//! Quantum dynamics under finite-dimensional pseudo-Hermitian Hamiltonians.
//!
//! * [`linalg`]: small dense complex linear algebra.
//! * [`metric`]: regime classification and metric operators.
//! * [`model`]: the PT-symmetric two-level Hamiltonian and its closed forms.
//! * [`dynamics`]: metric-normalized evolution, expectations, uncertainty
//!   gaps and survival probabilities.
//! * [`lindblad`]: a master-equation integrator for comparison.
//! * [`scenario`]: config parsing and the data-producing scenarios behind
//!   the `ptmetric` binary.

pub mod dynamics;
pub mod error;
pub mod lindblad;
pub mod linalg;
pub mod metric;
pub mod model;
pub mod scenario;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
