//! The singular-integral engine: adaptive deterministic cubature with
//! certified straddle handling and analytic tails, an independent Monte
//! Carlo oracle, and volume integrals with boundary blow-up refinement.

pub mod config;
pub mod engine;
pub mod montecarlo;
pub mod singular;
pub mod volume;

pub use config::{MeasureEstimate, QuadratureConfig};
pub use montecarlo::{
    mc_perimeter, mc_perimeter_local, mc_singular_integral_divergence, mc_singular_integral_field,
    mc_singular_integral_nl_divergence, mc_singular_integral_nl_gradient,
    mc_singular_integral_set, McArg,
};
pub use singular::{
    singular_integral_divergence, singular_integral_field, singular_integral_nl_divergence,
    singular_integral_nl_gradient, singular_integral_set, NlArg,
};
pub use volume::{volume_integral, BlowupGuide, Region};
