//! Minkowski valuations `h_{Φ_i K} = S_i(K, ·) ∗ f` on support functions,
//! their normalized iteration, and numerical checks of the associated
//! spectral-gap, multiplier and convergence statements.
//!
//! Bodies live either on a Gauss–Legendre × uniform grid on `S^2` (full
//! spherical-harmonic basis) or as zonal profiles on `S^{n-1}` for any `n >= 3`.

pub mod body;
pub mod discriminant;
pub mod error;
pub mod experiment;
pub mod harmonics;
pub mod iterate;
pub mod profile;
pub mod sampling;
pub mod valuation;

pub use body::{hausdorff_distance, lp_distance, tv_distance, Body, RestrictedHessian};
pub use discriminant::{area_density, box_n, mixed_discriminant, AreaDensity};
pub use error::{Error, Result};
pub use harmonics::{Domain, HarmonicExpansion};
pub use iterate::{fixed_point_residual, iterate, normalize, psi_ratio, IterateOptions, IterationTrace, Mode};
pub use profile::{Profile, Smoothness};
pub use valuation::{apply_valuation, convolve, make_kernel, projection_kernel, Kernel};
