//! Variance-based uncertainty bounds for products of unitary operators.
//!
//! * [`matrix`]: dense complex matrices, Hermitian eigensolver, PSD square
//!   root, Kronecker product, column-stacking vectorization, determinants.
//! * [`quantum`]: validated states and unitaries plus the operator and state
//!   families used by the reproduction scenarios.
//! * [`bounds`]: the `I_k` hierarchy, permutation maxima, pair-set bounds,
//!   Gram determinant bounds and multi-operator product bounds.
//! * [`oracle`]: brute-force references and seeded random instances.
//! * [`repro`]: scenarios, curve output and the acceptance checks.

pub mod bounds;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod quantum;
pub mod repro;
pub mod tol;

pub use error::{Error, Result};
pub use num_complex::Complex64;
