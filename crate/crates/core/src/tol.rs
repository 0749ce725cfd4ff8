//! Numeric tolerances shared by the test suites and the `verify` checks.
//!
//! Everything that decides a pass/fail lives here so a tolerance is never
//! tuned in two places at once. Each constant notes what calibrates it.

/// Float weight vectors must sum to 1 within this before being lifted to
/// exact rationals and renormalized.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Relative accuracy target for the Macdonald function against half-integer
/// closed forms.
pub const MACDONALD_REL: f64 = 1e-12;

/// Relative error allowed between the generic Macdonald route of the
/// characteristic kernel and the half-integer form e^{-u} q_n(u).
pub const KERNEL_BRIDGE_REL: f64 = 1e-10;

/// Band around 1 for the convolution tail ratio at the last abscissa
/// (calibrated from the exactly solvable nu = 1/2 case at x = 50).
pub const TAIL_RATIO_BAND: f64 = 0.01;

/// For nu = 1/2 the tail ratio has a closed form; the scan must reproduce it
/// to this relative accuracy.
pub const CAUCHY_TAIL_REL: f64 = 1e-6;

/// Band around 1 for the subordinator tail ratio at t = 1e3.
pub const SUBORDINATOR_TAIL_BAND: f64 = 0.02;

/// Relative accuracy of the Laplace-inverted subordinator density against
/// the exactly solvable nu = 1/2 family over the final decade of a tail
/// scan, where the inversion is noise-free at order 18.
pub const SUBORDINATOR_REL: f64 = 1e-5;

/// Absolute agreement between the Fourier and subordination routes for
/// one-dimensional densities on x in [0, 20].
pub const ROUTE_AGREEMENT_ABS: f64 = 1e-5;

/// Absolute agreement between Fourier inversion and the Cauchy stability
/// closed form on x in [0, 50].
pub const CAUCHY_FOURIER_ABS: f64 = 1e-8;

/// Absolute agreement between Fourier inversion and exact finite mixtures
/// (half-integer nu, integer power) on x in [0, 20].
pub const MIXTURE_FOURIER_ABS: f64 = 1e-6;

/// |integral of the inverted density - 1| for one-dimensional powers.
pub const NORMALIZATION_ABS: f64 = 1e-6;

/// Significance level for KS and chi-square sampling checks.
pub const KS_LEVEL: f64 = 0.01;

/// Two consecutive even inversion orders disagreeing by more than this
/// (relative to the larger magnitude) marks a loss-of-precision point:
/// where the inversion has its digits the orders track each other well
/// under this, so tripping it means the third digit is already in doubt.
pub const LAPLACE_FLAG_REL: f64 = 1e-3;

/// Truncating the cosine-transform integral is certified only when the
/// integrand bound at the cut is below this.
pub const FOURIER_TRUNC_BOUND: f64 = 1e-16;
