//! Spectral calculus and semigroup kernels for the commutative Lie algebra
//! spanned by `2 sum_j x_j d/dx_j + N - 2`, `i` and `i |x|^2 Laplacian`
//! acting on `L^2(R^N, |x|^{-2} dx)`.
//!
//! - [`special`]: Gegenbauer/Chebyshev recurrences and the theta function.
//! - [`log_radial`]: the unitary `r -> s = log r -> sigma` pipeline on a grid.
//! - [`spherical`]: factored fields `p (x) f` and zonal projections.
//! - [`kernels`]: radial and full kernels of `exp(z |x|^2 Laplacian)`,
//!   including closed forms in dimensions 1, 2 and 4.
//! - [`spectral`]: multipliers, the three-parameter group, scaling.
//! - [`oracle`]: exact commutator checks on power functions.
//! - [`verify`]: the verification suites driven by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod kernels;
pub mod log_radial;
pub mod oracle;
pub mod par;
pub mod special;
pub mod spectral;
pub mod spherical;
pub mod verify;

pub use error::{Error, Result};
pub use kernels::{ComplexTime, KernelQuery};
pub use log_radial::{FrequencySamples, LogRadialGrid, LogSamples, RadialSamples};
pub use spectral::{Boundedness, G0Exponent};
pub use spherical::{FactoredField, GridField2D, SphericalPart};
