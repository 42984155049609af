//! Singular integrals of the Riesz kernel against indicator and Lipschitz
//! field differences over the whole space.
//!
//! Layout of every integrand: a product of difference factors ("legs") times
//! the kernel `(y-x)/|y-x|^{n+alpha+1}`. Gradient-type operations keep the
//! kernel vector; divergence-type operations contract it with a vector leg.
//!
//! The whole-space integral splits into
//!   (i)  a ball around x where the product vanishes identically (for sets,
//!        the boundary-distance ball): exact zero;
//!   (ii) an adaptive near field up to a box half-width chosen from the
//!        legs' variation structure;
//!   (iii) a tail: exactly zero when all variation sits inside the box
//!        (constant factor against the odd kernel over a symmetric region),
//!        the exact one-dimensional ray formula for half-lines, and the
//!        analytic bound `osc * surface(n) * R^-alpha / alpha` otherwise.

use crate::error::{Error, Result};
use crate::fields::{ScalarField, VectorField};
use crate::geometry::{FarField, Membership, SetSpec};
use crate::kernel::{surface_measure, AlphaContext};
use crate::quadrature::config::{MeasureEstimate, QuadratureConfig};
use crate::quadrature::engine::{integrate, CellClass, CellIntegrand};
use crate::scalar::Real;
use crate::vecn::VecN;

/// One difference factor of the integrand.
pub enum Leg<'a, T: Real> {
    Set { set: &'a SetSpec<T>, chi_x: T, bd_x: T },
    Scalar { field: &'a ScalarField<T>, f_x: T },
}

enum LegOnCell<T> {
    ConstDiff(T),
    Continuous,
    MayJump,
}

impl<'a, T: Real> Leg<'a, T> {
    fn diff(&self, y: &VecN<T>) -> T {
        match self {
            Leg::Set { set, chi_x, .. } => set.membership(y).indicator::<T>() - *chi_x,
            Leg::Scalar { field, f_x } => field.value(y) - *f_x,
        }
    }

    fn on_cell(&self, center: &VecN<T>, hd: T) -> LegOnCell<T> {
        match self {
            Leg::Set { set, chi_x, .. } => {
                if set.boundary_distance(center) > hd {
                    LegOnCell::ConstDiff(set.membership(center).indicator::<T>() - *chi_x)
                } else {
                    LegOnCell::MayJump
                }
            }
            Leg::Scalar { field, f_x } => match field.const_on_ball(center, hd) {
                Some(c) => LegOnCell::ConstDiff(c - *f_x),
                None => LegOnCell::Continuous,
            },
        }
    }

    fn zero_radius(&self) -> T {
        match self {
            Leg::Set { bd_x, .. } => *bd_x,
            Leg::Scalar { .. } => T::zero(),
        }
    }

    /// Global bound on |diff|.
    fn osc(&self) -> T {
        match self {
            Leg::Set { .. } => T::one(),
            Leg::Scalar { field, f_x } => field.sup() + f_x.abs(),
        }
    }

    /// Bound on |diff(y)| for |y - x| <= rho.
    fn local_bound(&self, rho: T) -> T {
        match self {
            Leg::Set { .. } => T::one(),
            Leg::Scalar { field, f_x } => (field.lipschitz() * rho).min(field.sup() + f_x.abs()),
        }
    }

    fn lipschitz(&self) -> Option<T> {
        match self {
            Leg::Set { .. } => None,
            Leg::Scalar { field, .. } => Some(field.lipschitz()),
        }
    }

    fn far(&self, x: &VecN<T>) -> LegFar<T> {
        match self {
            Leg::Set { set, chi_x, .. } => match set.far_field() {
                FarField::Const { center, radius, value } => LegFar::Ball {
                    w: center.sub(x).inf_norm() + radius,
                    far_diff: (if value { T::one() } else { T::zero() }) - *chi_x,
                },
                FarField::RightHalfLine { center, radius } => LegFar::OneD {
                    w: (center - x[0]).abs() + radius,
                    left: -*chi_x,
                    right: T::one() - *chi_x,
                },
                FarField::LeftHalfLine { center, radius } => LegFar::OneD {
                    w: (center - x[0]).abs() + radius,
                    left: T::one() - *chi_x,
                    right: -*chi_x,
                },
                FarField::Varies => LegFar::Varies,
            },
            Leg::Scalar { field, f_x } => match field.support() {
                Some((c, r, far)) => {
                    LegFar::Ball { w: c.sub(x).inf_norm() + r, far_diff: far - *f_x }
                }
                None => LegFar::Varies,
            },
        }
    }
}

enum LegFar<T> {
    Ball { w: T, far_diff: T },
    OneD { w: T, left: T, right: T },
    Varies,
}

enum TailPlan<T> {
    ExactZero,
    /// n = 1 only: exact ray integral (right - left) * w^-alpha / alpha.
    ExactOneD { left: T, right: T },
    Bound { coeff: T },
}

struct VectorLeg<'a, T: Real> {
    field: &'a VectorField<T>,
    phi_x: VecN<T>,
}

impl<'a, T: Real> VectorLeg<'a, T> {
    fn diff(&self, y: &VecN<T>) -> VecN<T> {
        self.field.value(y).sub(&self.phi_x)
    }

    fn on_cell(&self, center: &VecN<T>, hd: T) -> LegOnCell<T> {
        if let Some((c, r)) = self.field.support() {
            if center.sub(&c).norm() - hd >= r {
                // constant zero value; diff is the constant -phi_x
                return LegOnCell::ConstDiff(if self.phi_x.norm() == T::zero() {
                    T::zero()
                } else {
                    T::one() // nonzero constant marker; magnitude unused
                });
            }
        }
        LegOnCell::Continuous
    }

    fn osc(&self) -> T {
        self.field.sup() + self.phi_x.norm()
    }

    fn local_bound(&self, rho: T) -> T {
        (self.field.lipschitz() * rho).min(self.osc())
    }

    fn far(&self, x: &VecN<T>) -> LegFar<T> {
        match self.field.support() {
            Some((c, r)) => LegFar::Ball {
                w: c.sub(x).inf_norm() + r,
                // diff is the constant vector -phi_x; only zero-ness matters
                far_diff: self.phi_x.norm(),
            },
            None => LegFar::Varies,
        }
    }
}

struct SingularProblem<'a, T: Real> {
    x: VecN<T>,
    legs: Vec<Leg<'a, T>>,
    vector_leg: Option<VectorLeg<'a, T>>,
    ctx: AlphaContext<T>,
    zero_r: T,
    sqrt_n: T,
    kexp: T,
}

impl<'a, T: Real> SingularProblem<'a, T> {
    fn new(
        x: VecN<T>,
        legs: Vec<Leg<'a, T>>,
        vector_leg: Option<VectorLeg<'a, T>>,
        ctx: AlphaContext<T>,
    ) -> Self {
        let zero_r = legs
            .iter()
            .map(|l| l.zero_radius())
            .fold(T::zero(), |a, b| a.max(b));
        Self {
            x,
            legs,
            vector_leg,
            ctx,
            zero_r,
            sqrt_n: T::of_usize(ctx.n()).sqrt(),
            kexp: T::of_usize(ctx.n()) + ctx.alpha() + T::one(),
        }
    }

    /// Number of Lipschitz legs: the integrand grows like r^{p - n - alpha}
    /// toward x, so p >= 1 makes the inner shell integrable.
    fn lipschitz_legs(&self) -> usize {
        self.legs.iter().filter(|l| l.lipschitz().is_some()).count()
            + usize::from(self.vector_leg.is_some())
    }

    fn shell_bound(&self, rho: T) -> T {
        let alpha = self.ctx.alpha();
        let mut c = T::one();
        let mut p = T::zero();
        for l in &self.legs {
            match l.lipschitz() {
                Some(lip) => {
                    c *= lip;
                    p += T::one();
                }
                None => c *= T::one(),
            }
        }
        if let Some(v) = &self.vector_leg {
            c *= v.field.lipschitz();
            p += T::one();
        }
        debug_assert!(p >= T::one());
        c * surface_measure::<T>(self.ctx.n()) * rho.powf(p - alpha) / (p - alpha)
    }
}

impl<'a, T: Real> CellIntegrand<T> for SingularProblem<'a, T> {
    fn dim(&self) -> usize {
        self.ctx.n()
    }

    fn out_len(&self) -> usize {
        if self.vector_leg.is_some() {
            1
        } else {
            self.ctx.n()
        }
    }

    fn eval(&self, y: &VecN<T>) -> (VecN<T>, T) {
        let z = y.sub(&self.x);
        let r = z.norm();
        if r <= self.zero_r {
            return (VecN::zeros(self.out_len()), T::zero());
        }
        let mut s = T::one();
        for l in &self.legs {
            s *= l.diff(y);
            if s == T::zero() {
                return (VecN::zeros(self.out_len()), T::zero());
            }
        }
        let k = z.scale(r.powf(-self.kexp));
        match &self.vector_leg {
            Some(v) => (VecN::scalar(s * v.diff(y).dot(&k)), T::zero()),
            None => (k.scale(s), T::zero()),
        }
    }

    fn classify(&self, center: &VecN<T>, half: T) -> CellClass<T> {
        let hd = half * self.sqrt_n;
        let d = center.sub(&self.x);
        let dist = d.norm();
        if dist + hd <= self.zero_r {
            return CellClass::Zero;
        }

        let mut any_jump = false;
        for l in &self.legs {
            match l.on_cell(center, hd) {
                LegOnCell::ConstDiff(c) => {
                    if c == T::zero() {
                        return CellClass::Zero;
                    }
                }
                LegOnCell::Continuous => {}
                LegOnCell::MayJump => any_jump = true,
            }
        }
        if let Some(v) = &self.vector_leg {
            match v.on_cell(center, hd) {
                LegOnCell::ConstDiff(c) => {
                    if c == T::zero() {
                        return CellClass::Zero;
                    }
                }
                LegOnCell::Continuous => {}
                LegOnCell::MayJump => any_jump = true,
            }
        }

        // a cell containing x with no protective zero ball: the integrand has
        // an integrable singularity there (every leg is Lipschitz when no set
        // leg contributes a zero ball); charge the analytic shell bound
        if self.zero_r == T::zero() && d.inf_norm() <= half {
            debug_assert!(self.lipschitz_legs() > 0);
            return CellClass::Unbounded { bound: self.shell_bound(dist + hd) };
        }

        if any_jump {
            let eff = self.zero_r.max(dist - hd);
            let rho = dist + hd;
            let mut sup = self.ctx.kernel_magnitude(eff);
            for l in &self.legs {
                sup = sup * l.local_bound(rho);
            }
            if let Some(v) = &self.vector_leg {
                sup = sup * v.local_bound(rho);
            }
            CellClass::Jump { sup }
        } else {
            CellClass::Smooth
        }
    }
}

/// The near-field box half-width and the tail treatment for a problem.
fn plan_tail<T: Real>(
    p: &SingularProblem<'_, T>,
    cfg: &QuadratureConfig<T>,
) -> Result<(T, TailPlan<T>)> {
    let x = &p.x;
    let mut w_needed = T::zero();
    let mut bound_coeff = T::one();
    let mut unbounded = false;
    // n=1 ray bookkeeping: products of far diffs on each side
    let mut left = T::one();
    let mut right = T::one();
    let mut one_d_ok = p.ctx.n() == 1;
    let mut vanishes_far = false;
    let mut vanish_w = T::infinity();

    let mut fars: Vec<LegFar<T>> = p.legs.iter().map(|l| l.far(x)).collect();
    if let Some(v) = &p.vector_leg {
        fars.push(v.far(x));
    }
    let oscs: Vec<T> = p
        .legs
        .iter()
        .map(|l| l.osc())
        .chain(p.vector_leg.iter().map(|v| v.osc()))
        .collect();

    for (far, osc) in fars.iter().zip(&oscs) {
        match far {
            LegFar::Ball { w, far_diff } => {
                w_needed = w_needed.max(*w);
                bound_coeff *= far_diff.abs().min(*osc);
                if *far_diff == T::zero() {
                    vanishes_far = true;
                    vanish_w = vanish_w.min(*w);
                }
                left *= *far_diff;
                right *= *far_diff;
            }
            LegFar::OneD { w, left: l, right: r } => {
                w_needed = w_needed.max(*w);
                bound_coeff *= *osc;
                left *= *l;
                right *= *r;
                unbounded = true;
            }
            LegFar::Varies => {
                bound_coeff *= *osc;
                unbounded = true;
                one_d_ok = false;
            }
        }
    }

    if vanishes_far {
        // some factor is exactly zero beyond its ball: the tail vanishes
        let w = finalize_w(p, cfg, vanish_w);
        if w >= vanish_w {
            return Ok((w, TailPlan::ExactZero));
        }
        return Ok((w, TailPlan::Bound { coeff: bound_coeff }));
    }
    if !unbounded {
        // all variation inside the box: the constant far factor against the
        // odd kernel over the symmetric complement integrates to zero
        cfg.validate_near_field(w_needed + w_needed)?;
        let w = finalize_w(p, cfg, w_needed);
        if w >= w_needed {
            return Ok((w, TailPlan::ExactZero));
        }
        return Ok((w, TailPlan::Bound { coeff: bound_coeff }));
    }
    if one_d_ok {
        cfg.validate_near_field(w_needed + w_needed)?;
        let w = finalize_w(p, cfg, w_needed);
        if w >= w_needed {
            return Ok((w, TailPlan::ExactOneD { left, right }));
        }
        return Ok((w, TailPlan::Bound { coeff: bound_coeff }));
    }
    Ok((cfg.tail_radius, TailPlan::Bound { coeff: bound_coeff }))
}

fn finalize_w<T: Real>(p: &SingularProblem<'_, T>, cfg: &QuadratureConfig<T>, w_needed: T) -> T {
    let margin = T::of(1.0625);
    (w_needed * margin)
        .max(p.zero_r * T::of(2.0))
        .max(cfg.base_cell * T::of(4.0))
        .min(cfg.tail_radius)
}

fn run<T: Real>(
    p: SingularProblem<'_, T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    cfg.validate()?;
    let (w, tail) = plan_tail(&p, cfg)?;
    let alpha = p.ctx.alpha();
    let n = p.ctx.n();
    let r = integrate(&p, p.x, w, cfg.min_half(), cfg.tol, cfg.max_cells);
    let mut value = r.value;
    let mut err = r.err + r.bar;
    match tail {
        TailPlan::ExactZero => {}
        TailPlan::ExactOneD { left, right } => {
            let t = (right - left) * w.powf(-alpha) / alpha;
            value[0] += t;
        }
        TailPlan::Bound { coeff } => {
            err += coeff * surface_measure::<T>(n) * w.powf(-alpha) / alpha;
        }
    }
    let within = r.within_tol && err <= cfg.tol * value.norm().max(T::min_positive_value());
    Ok(MeasureEstimate::new(value, err, r.evals.max(1), within))
}

fn set_leg<'a, T: Real>(set: &'a SetSpec<T>, x: &VecN<T>) -> Result<Leg<'a, T>> {
    let bd = set.boundary_distance(x);
    let scale = T::one() + x.inf_norm();
    if !(bd > T::epsilon() * scale) {
        return Err(Error::PointOnBoundary);
    }
    let chi_x = match set.membership(x) {
        Membership::Inside => T::one(),
        Membership::Outside => T::zero(),
        Membership::OnBoundary => return Err(Error::PointOnBoundary),
    };
    Ok(Leg::Set { set, chi_x, bd_x: bd })
}

fn scalar_leg<'a, T: Real>(field: &'a ScalarField<T>, x: &VecN<T>) -> Result<Leg<'a, T>> {
    if !(field.lipschitz() >= T::zero()) || !field.lipschitz().is_finite() {
        return Err(Error::InvalidField("missing or non-finite Lipschitz bound".into()));
    }
    Ok(Leg::Scalar { field, f_x: field.value(x) })
}

/// Estimate of `int (chi_E(y) - chi_E(x)) (y-x)/|y-x|^{n+alpha+1} dy`
/// (the fractional gradient of the indicator before the mu factor).
pub fn singular_integral_set<T: Real>(
    set: &SetSpec<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    let leg = set_leg(set, x)?;
    run(SingularProblem::new(*x, vec![leg], None, *ctx), cfg)
}

/// Estimate of `int (f(y) - f(x)) (y-x)/|y-x|^{n+alpha+1} dy`.
pub fn singular_integral_field<T: Real>(
    field: &ScalarField<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    let leg = scalar_leg(field, x)?;
    run(SingularProblem::new(*x, vec![leg], None, *ctx), cfg)
}

/// Estimate of `int (phi(y) - phi(x)) . (y-x)/|y-x|^{n+alpha+1} dy`.
pub fn singular_integral_divergence<T: Real>(
    field: &VectorField<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    if !field.lipschitz().is_finite() {
        return Err(Error::InvalidField("missing or non-finite Lipschitz bound".into()));
    }
    let v = VectorLeg { field, phi_x: field.value(x) };
    run(SingularProblem::new(*x, Vec::new(), Some(v), *ctx), cfg)
}

/// A scalar argument of a non-local (bilinear) operation.
pub enum NlArg<'a, T> {
    Set(&'a SetSpec<T>),
    Field(&'a ScalarField<T>),
}

impl<'a, T: Real> NlArg<'a, T> {
    fn leg(&self, x: &VecN<T>) -> Result<Leg<'a, T>> {
        match self {
            NlArg::Set(s) => set_leg(s, x),
            NlArg::Field(f) => scalar_leg(f, x),
        }
    }
}

/// Estimate of `int (f(y)-f(x)) (g(y)-g(x)) (y-x)/|y-x|^{n+alpha+1} dy`.
pub fn singular_integral_nl_gradient<T: Real>(
    f: &NlArg<'_, T>,
    g: &NlArg<'_, T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    let legs = vec![f.leg(x)?, g.leg(x)?];
    run(SingularProblem::new(*x, legs, None, *ctx), cfg)
}

/// Estimate of `int (f(y)-f(x)) (phi(y)-phi(x)) . (y-x)/|y-x|^{n+alpha+1} dy`.
pub fn singular_integral_nl_divergence<T: Real>(
    f: &NlArg<'_, T>,
    phi: &VectorField<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    let legs = vec![f.leg(x)?];
    let v = VectorLeg { field: phi, phi_x: phi.value(x) };
    run(SingularProblem::new(*x, legs, Some(v), *ctx), cfg)
}
