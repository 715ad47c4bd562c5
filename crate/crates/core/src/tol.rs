//! Tolerances shared across the crate.
//!
//! Bound quantities are O(1), so every threshold is absolute.

/// Hermiticity check: max entrywise `|h - h†|`.
pub const HERMITIAN: f64 = 1e-10;
/// Unitarity check: `‖U†U − I‖_F`.
pub const UNITARY: f64 = 1e-10;
/// Trace and norm checks for states.
pub const NORMALIZATION: f64 = 1e-10;
/// Most negative eigenvalue still treated as zero.
pub const PSD: f64 = 1e-10;
/// Slack for the nonincreasing I_k chain and other ordering checks.
pub const MONOTONE_SLACK: f64 = 1e-10;
/// Example-reproduction equalities and Gram determinant checks.
pub const REPRO: f64 = 1e-9;
/// Allowed imaginary part of a Hermitian Gram determinant.
pub const DET_IMAG: f64 = 1e-9;
/// Two permutation pairs whose bound values differ by less than this are
/// treated as tied; the lexicographically smaller pair wins.
pub const PERM_TIE: f64 = 1e-12;
