//! Fixed numerical tolerances shared by every module.
//!
//! All quantities handled here are O(1) in magnitude (probabilities, bits),
//! so absolute tolerances are used throughout.

/// Maximum entry-wise deviation of `M` from `M†` accepted as Hermitian.
pub const HERMITIAN: f64 = 1e-10;

/// Accepted deviation of a density operator's trace from 1.
pub const TRACE: f64 = 1e-10;

/// Slack on the smallest eigenvalue when testing positivity.
pub const PSD: f64 = 1e-9;

/// Largest accepted eigen-pair residual `max ‖Mv − λv‖`.
pub const SPECTRUM_RESIDUAL: f64 = 1e-8;

/// Jacobi stopping threshold on the off-diagonal Frobenius norm.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-12;

/// Maximum entry-wise deviation of `U†U` from the identity.
pub const UNITARY: f64 = 1e-10;

/// Eigenvalue floor inside logarithms.
pub const LOG_FLOOR: f64 = 1e-14;

/// Support test for relative entropy: an eigenvalue of the second argument
/// below this counts as outside the support.
pub const SUPPORT_EIGENVALUE: f64 = 1e-12;

/// Weight of the first argument on a null direction of the second argument
/// that triggers the infinite sentinel.
pub const SUPPORT_WEIGHT: f64 = 1e-10;

/// Margin used for strict inequalities between O(1) quantities.
pub const STRICT_MARGIN: f64 = 1e-9;

/// Agreement required between two routes to the same O(1) quantity.
pub const EQUALITY: f64 = 1e-10;

/// Marginal closeness to the maximally mixed state.
pub const MAXIMALLY_MIXED: f64 = 1e-9;
