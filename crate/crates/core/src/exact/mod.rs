//! Exact arithmetic tower: Gaussian rationals → multivariate polynomials →
//! rational functions with factored denominators → quadratic radical
//! extension by the radial coordinate.

pub mod poly;
pub mod radext;
pub mod rat;
pub mod ratfn;
pub mod scalar;

pub use poly::{var, Monomial, MultiPoly, NVARS};
pub use radext::{radius_squared, RadExt};
pub use ratfn::RatFn;
pub use scalar::GScalar;
