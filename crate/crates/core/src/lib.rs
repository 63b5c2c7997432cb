//! Formal power-series solutions of the modified Painlevé III equation
//! (`γ = 0`) at infinity.
//!
//! * [`coefficients`]: the coefficient recurrences in exact rational,
//!   exact `Q(ω)` or multiprecision complex arithmetic, branch rotation and
//!   the parameter scaling symmetry.
//! * [`gevrey`]: exact certificates of the growth bounds of the
//!   special-parameter coefficients, and numeric Gevrey order/type fits.
//! * [`summation`]: Borel transform, Cauchy–Hadamard radius and the finite
//!   Laplace transform that resums the divergent series in a sector.
//! * [`ode`]: formal and numeric residuals of the equation and the change of
//!   variables back to Painlevé III.

pub mod coefficients;
pub mod error;
pub mod export;
pub mod gevrey;
pub mod ode;
pub mod scalar;
pub mod summation;

pub use error::{Error, Result};
pub use rug;
