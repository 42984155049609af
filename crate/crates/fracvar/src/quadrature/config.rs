//! Quadrature configuration and the estimate-with-error-bar result type.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vecn::VecN;

/// Knobs shared by the deterministic engine and the Monte Carlo oracle.
///
/// `max_depth` counts subdivision below the `base_cell` scale: the finest
/// leaf size is `base_cell * 2^-max_depth`. Cells coarser than `base_cell`
/// may always subdivide, so the near field can extend to `tail_radius`
/// without a uniform grid ever being built.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig<T> {
    pub tail_radius: T,
    pub base_cell: T,
    pub max_depth: u32,
    pub tol: T,
    pub mc_samples: usize,
    pub seed: u64,
    /// Safety cap on the number of leaf cells per integral.
    pub max_cells: usize,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            tail_radius: T::of(1e8),
            base_cell: T::of(0.5),
            max_depth: 30,
            tol: T::of(1e-3),
            mc_samples: 200_000,
            seed: 0x5eed_f7ac,
            max_cells: 400_000,
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_radius > T::zero()) {
            return Err(Error::InvalidConfig("tail_radius must be positive".into()));
        }
        if !(self.base_cell > T::zero()) {
            return Err(Error::InvalidConfig("base_cell must be positive".into()));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidConfig("max_depth must be at least 1".into()));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        if self.mc_samples < 2 {
            return Err(Error::InvalidConfig("mc_samples must be at least 2".into()));
        }
        Ok(())
    }

    /// The near-field invariant: the tail radius must dominate the diameter
    /// of the region where the integrand varies.
    pub fn validate_near_field(&self, near_diameter: T) -> Result<()> {
        self.validate()?;
        if near_diameter.is_finite() && self.tail_radius < T::of(4.0) * near_diameter {
            return Err(Error::InvalidConfig(format!(
                "tail_radius {} < 4 x near-field diameter {}",
                self.tail_radius, near_diameter
            )));
        }
        Ok(())
    }

    /// Finest permitted half-width of a leaf cell.
    pub fn min_half(&self) -> T {
        self.base_cell * T::of(0.5) * T::of(2.0).powi(-(self.max_depth as i32))
    }
}

/// A value (scalar or vector) with an a-posteriori error estimate and cost.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureEstimate<T> {
    pub value: VecN<T>,
    pub abs_error_estimate: T,
    pub evaluations: u64,
    /// False when the requested tolerance was not reached at max_depth;
    /// the estimate is still returned with its honest error bar.
    pub within_tol: bool,
}

impl<T: Real> MeasureEstimate<T> {
    pub fn new(value: VecN<T>, abs_error_estimate: T, evaluations: u64, within_tol: bool) -> Self {
        Self { value, abs_error_estimate, evaluations, within_tol }
    }

    /// Scalar accessor for single-component estimates.
    pub fn scalar(&self) -> T {
        debug_assert_eq!(self.value.len(), 1);
        self.value[0]
    }

    pub fn norm(&self) -> T {
        self.value.norm()
    }

    /// Rescale value and error bar (e.g. by the normalization constant mu).
    pub fn scaled(&self, s: T) -> Self {
        Self {
            value: self.value.scale(s),
            abs_error_estimate: self.abs_error_estimate * s.abs(),
            evaluations: self.evaluations,
            within_tol: self.within_tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut cfg = QuadratureConfig::<f64>::default();
        assert!(cfg.validate().is_ok());
        cfg.tol = 0.0;
        assert!(cfg.validate().is_err());
        let cfg = QuadratureConfig::<f64> { tail_radius: 10.0, ..Default::default() };
        assert!(cfg.validate_near_field(2.0).is_ok());
        assert!(cfg.validate_near_field(3.0).is_err());
        assert!(cfg.validate_near_field(f64::INFINITY).is_ok());
    }

    #[test]
    fn min_half_halves_per_depth() {
        let cfg = QuadratureConfig::<f64> { base_cell: 1.0, max_depth: 3, ..Default::default() };
        assert_eq!(cfg.min_half(), 0.0625);
        let deeper = QuadratureConfig::<f64> { max_depth: 4, ..cfg };
        assert_eq!(deeper.min_half(), cfg.min_half() / 2.0);
    }
}
