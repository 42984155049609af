//! User-facing fractional operators: gradients, divergences, their
//! non-local bilinear companions, and the fractional perimeters.
//!
//! Thin assembly over the quadrature engine: the engine integrates the raw
//! kernel products, this layer applies the `mu_{n,alpha}` normalization.
//! Perimeters carry no `mu` factor.

use crate::error::Result;
use crate::fields::{ScalarField, VectorField};
use crate::geometry::SetSpec;
use crate::kernel::AlphaContext;
use crate::quadrature::{
    self, MeasureEstimate, NlArg, QuadratureConfig,
};
use crate::scalar::Real;
use crate::vecn::VecN;

/// `grad^alpha f(x) = mu int (f(y)-f(x))(y-x)/|y-x|^{n+alpha+1} dy`.
pub fn frac_gradient<T: Real>(
    f: &ScalarField<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    Ok(quadrature::singular_integral_field(f, x, ctx, cfg)?.scaled(ctx.mu()))
}

/// `grad^alpha chi_E(x)`; x must be off the topological boundary of E.
pub fn frac_gradient_set<T: Real>(
    set: &SetSpec<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    Ok(quadrature::singular_integral_set(set, x, ctx, cfg)?.scaled(ctx.mu()))
}

/// `div^alpha phi(x) = mu int (phi(y)-phi(x)).(y-x)/|y-x|^{n+alpha+1} dy`.
pub fn frac_divergence<T: Real>(
    phi: &VectorField<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    Ok(quadrature::singular_integral_divergence(phi, x, ctx, cfg)?.scaled(ctx.mu()))
}

/// Non-local gradient `grad^alpha_NL(f, g)(x)`; arguments may be indicator
/// sets or Lipschitz fields.
pub fn frac_nl_gradient<T: Real>(
    f: &NlArg<'_, T>,
    g: &NlArg<'_, T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    Ok(quadrature::singular_integral_nl_gradient(f, g, x, ctx, cfg)?.scaled(ctx.mu()))
}

/// Non-local divergence `div^alpha_NL(f, phi)(x)`.
pub fn frac_nl_divergence<T: Real>(
    f: &NlArg<'_, T>,
    phi: &VectorField<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    Ok(quadrature::singular_integral_nl_divergence(f, phi, x, ctx, cfg)?.scaled(ctx.mu()))
}

/// Fractional perimeter `P_alpha(E; Omega)` (no mu factor); `None` window
/// means the whole space and requires E bounded.
pub fn frac_perimeter<T: Real>(
    set: &SetSpec<T>,
    omega: Option<&SetSpec<T>>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    quadrature::mc_perimeter(set, omega, ctx, cfg)
}

/// Local part of the fractional perimeter over a bounded window A.
pub fn frac_perimeter_local<T: Real>(
    set: &SetSpec<T>,
    window: &SetSpec<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    quadrature::mc_perimeter_local(set, window, ctx, cfg)
}
