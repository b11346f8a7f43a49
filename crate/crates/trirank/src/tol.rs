//! Central numerical tolerances. Every threshold in the crate lives here so
//! the accuracy contract is visible in one place.

/// Relative pivot threshold for linear solves and inverses: a pivot smaller
/// than `LIN` times the largest entry of the input is treated as zero.
pub const LIN: f64 = 1e-10;

/// Identity-check tolerance for structural identities (diagonalization laws,
/// reshaped stacks equaling the identity, and similar).
pub const ID: f64 = 1e-8;

/// Relative reconstruction-residual bound a returned decomposition must meet.
pub const REC: f64 = 1e-8;

/// Certification tolerance for hypersurface points (eigen residual and
/// determinant residual, both relative to the pencil's scale).
pub const PT: f64 = 1e-8;

/// Denominator floor that keeps relative quantities well-defined at zero.
pub const EPS_FLOOR: f64 = 1e-300;

/// Condition screen for the candidate matrix B: resample when the smallest
/// retained pivot falls below this fraction of the largest.
pub const B_PIVOT_RATIO: f64 = 1e-10;

/// Hard cap on the eigensolver side length; characteristic-polynomial root
/// isolation degrades beyond this size.
pub const MAX_EIGEN_SIDE: usize = 32;

/// First-round direction budget for hypersurface sampling, per unit of p.
pub const FIRST_ROUND_DIRECTIONS_PER_P: usize = 8;

/// Final direction budget per unit of p (the first round doubles until here).
pub const MAX_DIRECTIONS_PER_P: usize = 64;
