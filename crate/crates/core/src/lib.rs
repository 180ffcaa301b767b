//! Exact operator algebra for two families of superintegrable quantum
//! models — a Coulomb-type system with two angular barrier terms and a
//! singular isotropic oscillator split across two coordinate blocks —
//! together with the cubic symmetry algebra their integrals generate,
//! its deformed-oscillator representations, and an independent
//! finite-difference oracle for the resulting spectra.

pub mod central;
pub mod error;
pub mod exact;
pub mod models;
pub mod oracle;
pub mod qalg;
pub mod spectra;
pub mod value;
pub mod weyl;

pub use error::{AlgebraError, Result};
