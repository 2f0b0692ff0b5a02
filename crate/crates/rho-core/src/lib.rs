//! Geometric models of the relativistic harmonic oscillator in 1+1
//! dimensions: a one-parameter (λ) family of static metrics whose free
//! motion generalizes the anti-de Sitter oscillator (λ = -1), the flat
//! Minkowski case (λ = 0) and de Sitter-like deformations (λ > 0).
//!
//! The crate provides
//!
//! * [`model`] — parameters, metric components, horizons and the domain;
//! * [`classical`] — closed-form orbits plus an adaptive geodesic
//!   integrator used as an independent oracle;
//! * [`special`] — real-argument Gauss ₂F₁, polynomial truncations,
//!   Kummer polynomials and Hermite polynomials;
//! * [`quantum`] — closed-form Klein-Gordon spectra and wavefunctions,
//!   continuum thresholds, scattering modes and non-relativistic limits;
//! * [`numeric`] — weighted scalar products, normalization, a
//!   finite-difference Sturm-Liouville eigensolver, node counting and
//!   norm-divergence diagnostics.

pub mod classical;
pub mod error;
pub mod model;
pub mod numeric;
pub mod quantum;
pub mod special;

pub use error::{Error, Result};
pub use model::{MetricComponents, ModelParameters, SpatialDomain};
