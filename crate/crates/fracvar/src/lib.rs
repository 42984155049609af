//! Distributional fractional vector calculus of order `alpha` in (0,1).
//!
//! The crate evaluates Riesz fractional gradients and divergences of sets and
//! compactly supported Lipschitz fields by adaptive singular-integral
//! quadrature, estimates non-local perimeters by seeded Monte Carlo, ships the
//! known closed forms (half-space, ball, interval unions) as independent
//! oracles, and runs theorem-level experiments: integration by parts, Leibniz
//! rules, Gauss-Green, blow-up convergence, normals and boundary probes.
//!
//! Core math is generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); the concrete `f64` aliases below are what the CLI and
//! the acceptance suite use.

pub mod analysis;
pub mod error;
pub mod fields;
pub mod fracops;
pub mod geometry;
pub mod kernel;
pub mod oracles;
pub mod quadrature;
pub mod scalar;
pub mod vecn;

pub use error::{Error, Result};
pub use kernel::AlphaContext;
pub use quadrature::{MeasureEstimate, QuadratureConfig};

/// Ambient context at double precision.
pub type Ctx64 = kernel::AlphaContext<f64>;
/// Point / vector at double precision.
pub type Vec64 = vecn::VecN<f64>;
/// Set description at double precision.
pub type Set64 = geometry::SetSpec<f64>;
/// Scalar field at double precision.
pub type ScalarField64 = fields::ScalarField<f64>;
/// Vector field at double precision.
pub type VectorField64 = fields::VectorField<f64>;
/// Quadrature configuration at double precision.
pub type QuadConfig64 = quadrature::QuadratureConfig<f64>;
/// Estimate with error bar at double precision.
pub type Estimate64 = quadrature::MeasureEstimate<f64>;
