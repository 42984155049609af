//! Seeded Monte Carlo with radial importance sampling: the independent
//! oracle for the singular integrals and the sampler behind the fractional
//! perimeters. Kept deliberately separate from the adaptive engine; the two
//! share no code path beyond the kernel definition.
//!
//! Radial density proportional to `r^{-1-alpha}` matches the decay of
//! indicator integrands, making every estimator bounded per sample. Field
//! integrands add an inner stratum with density proportional to `r^{-alpha}`
//! so the (integrable) singularity at x is sampled with bounded weights too.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{ScalarField, VectorField};
use crate::geometry::density::sample_direction;
use crate::geometry::{FarField, Membership, SetSpec};
use crate::kernel::{surface_measure, AlphaContext};
use crate::quadrature::config::{MeasureEstimate, QuadratureConfig};
use crate::scalar::Real;
use crate::vecn::VecN;

enum McLeg<'a, T: Real> {
    Set { set: &'a SetSpec<T>, chi_x: T, bd_x: T },
    Scalar { field: &'a ScalarField<T>, f_x: T },
}

impl<'a, T: Real> McLeg<'a, T> {
    fn diff(&self, y: &VecN<T>) -> T {
        match self {
            McLeg::Set { set, chi_x, .. } => set.membership(y).indicator::<T>() - *chi_x,
            McLeg::Scalar { field, f_x } => field.value(y) - *f_x,
        }
    }

    fn zero_radius(&self) -> T {
        match self {
            McLeg::Set { bd_x, .. } => *bd_x,
            McLeg::Scalar { .. } => T::zero(),
        }
    }

    fn is_lipschitz(&self) -> bool {
        matches!(self, McLeg::Scalar { .. })
    }

    fn osc(&self) -> T {
        match self {
            McLeg::Set { .. } => T::one(),
            McLeg::Scalar { field, f_x } => field.sup() + f_x.abs(),
        }
    }

    /// Euclidean radius around x beyond which the diff is constant, with the
    /// ray values in 1-D; None when the structure stays unbounded.
    fn far(&self, x: &VecN<T>) -> McFar<T> {
        match self {
            McLeg::Set { set, chi_x, .. } => match set.far_field() {
                FarField::Const { center, radius, value } => McFar::Const {
                    r: center.sub(x).norm() + radius,
                    diff: (if value { T::one() } else { T::zero() }) - *chi_x,
                },
                FarField::RightHalfLine { center, radius } => McFar::OneD {
                    r: (center - x[0]).abs() + radius,
                    left: -*chi_x,
                    right: T::one() - *chi_x,
                },
                FarField::LeftHalfLine { center, radius } => McFar::OneD {
                    r: (center - x[0]).abs() + radius,
                    left: T::one() - *chi_x,
                    right: -*chi_x,
                },
                FarField::Varies => McFar::Varies,
            },
            McLeg::Scalar { field, f_x } => match field.support() {
                Some((c, r, far)) => McFar::Const { r: c.sub(x).norm() + r, diff: far - *f_x },
                None => McFar::Varies,
            },
        }
    }
}

enum McFar<T> {
    Const { r: T, diff: T },
    OneD { r: T, left: T, right: T },
    Varies,
}

enum McOut<'a, T: Real> {
    Gradient,
    Divergence { field: &'a VectorField<T>, phi_x: VecN<T> },
}

struct McProblem<'a, T: Real> {
    x: VecN<T>,
    legs: Vec<McLeg<'a, T>>,
    out: McOut<'a, T>,
    ctx: AlphaContext<T>,
}

impl<'a, T: Real> McProblem<'a, T> {
    fn out_len(&self) -> usize {
        match self.out {
            McOut::Gradient => self.ctx.n(),
            McOut::Divergence { .. } => 1,
        }
    }

    /// Product of leg diffs at y times the direction weight.
    fn sample_value(&self, y: &VecN<T>, omega: &VecN<T>) -> VecN<T> {
        let mut s = T::one();
        for l in &self.legs {
            s *= l.diff(y);
            if s == T::zero() {
                return VecN::zeros(self.out_len());
            }
        }
        match &self.out {
            McOut::Gradient => omega.scale(s),
            McOut::Divergence { field, phi_x } => {
                VecN::scalar(s * field.value(y).sub(phi_x).dot(omega))
            }
        }
    }
}

struct RadialPlan<T> {
    /// inner stratum (0, r0] with density ~ r^-alpha; present when no zero
    /// ball protects the singularity
    inner_r0: Option<T>,
    /// main stratum [lo, hi] with density ~ r^{-1-alpha}
    lo: T,
    hi: T,
    /// exact value added for the far field (1-D rays), in output units
    exact_tail: T,
    /// bound added to the error bar for a truncated far field
    tail_bound: T,
}

fn plan_radial<T: Real>(p: &McProblem<'_, T>, cfg: &QuadratureConfig<T>) -> RadialPlan<T> {
    let alpha = p.ctx.alpha();
    let n = p.ctx.n();
    let r_min = p.legs.iter().map(|l| l.zero_radius()).fold(T::zero(), |a, b| a.max(b));

    let mut enclosure = T::zero();
    let mut osc_prod = T::one();
    let mut unbounded = false;
    let mut one_d_ok = n == 1 && matches!(p.out, McOut::Gradient);
    let mut left = T::one();
    let mut right = T::one();
    let mut vanishes = false;
    let mut vanish_r = T::infinity();
    for l in &p.legs {
        osc_prod *= l.osc();
        match l.far(&p.x) {
            McFar::Const { r, diff } => {
                enclosure = enclosure.max(r);
                left *= diff;
                right *= diff;
                if diff == T::zero() {
                    vanishes = true;
                    vanish_r = vanish_r.min(r);
                }
            }
            McFar::OneD { r, left: dl, right: dr } => {
                enclosure = enclosure.max(r);
                left *= dl;
                right *= dr;
                unbounded = true;
            }
            McFar::Varies => {
                unbounded = true;
                one_d_ok = false;
            }
        }
    }
    if let McOut::Divergence { field, phi_x } = &p.out {
        osc_prod *= field.sup() + phi_x.norm();
        match field.support() {
            Some((c, r)) => {
                let rr = c.sub(&p.x).norm() + r;
                enclosure = enclosure.max(rr);
                if phi_x.norm() == T::zero() {
                    vanishes = true;
                    vanish_r = vanish_r.min(rr);
                }
                // constant far diff contracts the odd kernel to zero
                left *= T::zero();
                right *= T::zero();
            }
            None => {
                unbounded = true;
                one_d_ok = false;
            }
        }
    }

    let surface = surface_measure::<T>(n);
    if vanishes {
        return finish_plan(p, cfg, r_min, vanish_r, T::zero(), T::zero());
    }
    if !unbounded {
        // beyond the enclosure the factor is constant and the spherical
        // complement of the odd kernel integrates to zero
        return finish_plan(p, cfg, r_min, enclosure, T::zero(), T::zero());
    }
    if one_d_ok {
        let hi = enclosure.max(r_min * T::of(2.0)).max(T::one());
        let exact = (right - left) * hi.powf(-alpha) / alpha;
        return finish_plan(p, cfg, r_min, hi, exact, T::zero());
    }
    let hi = cfg.tail_radius;
    let bound = osc_prod * surface * hi.powf(-alpha) / alpha;
    finish_plan(p, cfg, r_min, hi, T::zero(), bound)
}

fn finish_plan<T: Real>(
    p: &McProblem<'_, T>,
    cfg: &QuadratureConfig<T>,
    r_min: T,
    hi_raw: T,
    exact_tail: T,
    tail_bound: T,
) -> RadialPlan<T> {
    let hi = hi_raw.max(r_min * T::of(1.5)).max(cfg.base_cell);
    let any_lipschitz = p.legs.iter().any(|l| l.is_lipschitz())
        || matches!(p.out, McOut::Divergence { .. });
    let (inner_r0, lo) = if r_min == T::zero() && any_lipschitz {
        let r0 = (hi * T::of(0.125)).min(T::one());
        (Some(r0), r0)
    } else {
        (None, r_min)
    };
    RadialPlan { inner_r0, lo, hi, exact_tail, tail_bound }
}

fn run_mc<T: Real>(p: &McProblem<'_, T>, cfg: &QuadratureConfig<T>) -> Result<MeasureEstimate<T>> {
    cfg.validate()?;
    let plan = plan_radial(p, cfg);
    let alpha = p.ctx.alpha();
    let n = p.ctx.n();
    let surface = surface_measure::<T>(n);
    let out_len = p.out_len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // main stratum normalization
    let a_main = if plan.hi > plan.lo && plan.lo > T::zero() {
        (plan.lo.powf(-alpha) - plan.hi.powf(-alpha)) / alpha
    } else {
        T::zero()
    };
    let z_main = surface * a_main;

    let mut sum = VecN::zeros(out_len);
    let mut sum_sq = VecN::zeros(out_len);
    let nsamp = cfg.mc_samples;
    for _ in 0..nsamp {
        let mut g = VecN::zeros(out_len);
        if let Some(r0) = plan.inner_r0 {
            // density (1-alpha) r^-alpha / r0^(1-alpha) on (0, r0]
            let u: T = rng.gen_range(T::zero()..T::one());
            let r = r0 * u.powf(T::one() / (T::one() - alpha));
            let omega = sample_direction::<T, _>(&mut rng, n);
            if r > T::zero() {
                let y = p.x.add(&omega.scale(r));
                let w = surface * r0.powf(T::one() - alpha) / ((T::one() - alpha) * r);
                g.accumulate(&p.sample_value(&y, &omega).scale(w));
            }
        }
        if z_main > T::zero() {
            let u: T = rng.gen_range(T::zero()..T::one());
            let r = (plan.lo.powf(-alpha) - u * alpha * a_main).powf(-T::one() / alpha);
            let omega = sample_direction::<T, _>(&mut rng, n);
            let y = p.x.add(&omega.scale(r));
            g.accumulate(&p.sample_value(&y, &omega).scale(z_main));
        }
        for i in 0..out_len {
            sum[i] += g[i];
            sum_sq[i] += g[i] * g[i];
        }
    }

    let m = T::of_usize(nsamp);
    let mut value = sum.scale(T::one() / m);
    let mut se2 = T::zero();
    for i in 0..out_len {
        let s1: T = sum[i];
        let s2: T = sum_sq[i];
        let var = ((s2 - s1 * s1 / m) / (m - T::one())).max(T::zero());
        se2 += var / m;
    }
    if out_len == 1 {
        value[0] += plan.exact_tail;
    }
    Ok(MeasureEstimate::new(value, se2.sqrt() + plan.tail_bound, nsamp as u64, true))
}

fn mc_set_leg<'a, T: Real>(set: &'a SetSpec<T>, x: &VecN<T>) -> Result<McLeg<'a, T>> {
    let bd = set.boundary_distance(x);
    if !(bd > T::epsilon() * (T::one() + x.inf_norm())) {
        return Err(Error::PointOnBoundary);
    }
    let chi_x = match set.membership(x) {
        Membership::Inside => T::one(),
        Membership::Outside => T::zero(),
        Membership::OnBoundary => return Err(Error::PointOnBoundary),
    };
    Ok(McLeg::Set { set, chi_x, bd_x: bd })
}

/// Monte Carlo oracle for the set singular integral (engine units, no mu).
pub fn mc_singular_integral_set<T: Real>(
    set: &SetSpec<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    let leg = mc_set_leg(set, x)?;
    run_mc(&McProblem { x: *x, legs: vec![leg], out: McOut::Gradient, ctx: *ctx }, cfg)
}

/// Monte Carlo oracle for the scalar-field singular integral.
pub fn mc_singular_integral_field<T: Real>(
    field: &ScalarField<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    let leg = McLeg::Scalar { field, f_x: field.value(x) };
    run_mc(&McProblem { x: *x, legs: vec![leg], out: McOut::Gradient, ctx: *ctx }, cfg)
}

/// Monte Carlo oracle for the vector-field divergence integral.
pub fn mc_singular_integral_divergence<T: Real>(
    field: &VectorField<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    let out = McOut::Divergence { field, phi_x: field.value(x) };
    run_mc(&McProblem { x: *x, legs: Vec::new(), out, ctx: *ctx }, cfg)
}

/// A scalar argument for the non-local bilinear oracles.
pub enum McArg<'a, T> {
    Set(&'a SetSpec<T>),
    Field(&'a ScalarField<T>),
}

impl<'a, T: Real> McArg<'a, T> {
    fn leg(&self, x: &VecN<T>) -> Result<McLeg<'a, T>> {
        match self {
            McArg::Set(s) => mc_set_leg(s, x),
            McArg::Field(f) => Ok(McLeg::Scalar { field: f, f_x: f.value(x) }),
        }
    }
}

/// Monte Carlo oracle for the non-local gradient integrand.
pub fn mc_singular_integral_nl_gradient<T: Real>(
    f: &McArg<'_, T>,
    g: &McArg<'_, T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    let legs = vec![f.leg(x)?, g.leg(x)?];
    run_mc(&McProblem { x: *x, legs, out: McOut::Gradient, ctx: *ctx }, cfg)
}

/// Monte Carlo oracle for the non-local divergence integrand.
pub fn mc_singular_integral_nl_divergence<T: Real>(
    f: &McArg<'_, T>,
    phi: &VectorField<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    let legs = vec![f.leg(x)?];
    let out = McOut::Divergence { field: phi, phi_x: phi.value(x) };
    run_mc(&McProblem { x: *x, legs, out, ctx: *ctx }, cfg)
}

fn bounding_cube<T: Real>(set: &SetSpec<T>) -> Result<(VecN<T>, T)> {
    match set.far_field() {
        FarField::Const { center, radius, value: false } => Ok((center, radius)),
        _ => Err(Error::PerimeterMayDiverge),
    }
}

/// Fractional perimeter `P_alpha(E; Omega)` by symmetrized Monte Carlo;
/// `omega = None` means the whole space (E must then be bounded).
pub fn mc_perimeter<T: Real>(
    set: &SetSpec<T>,
    omega: Option<&SetSpec<T>>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    cfg.validate()?;
    let n = ctx.n();
    let alpha = ctx.alpha();
    let surface = surface_measure::<T>(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);

    // sampling region for x and the pair weight
    let (bc, br, whole_space) = match omega {
        None => {
            let (c, r) = bounding_cube(set)?;
            (c, r, true)
        }
        Some(om) => {
            let (c, r) = bounding_cube(om).map_err(|_| {
                Error::InvalidGeometry("perimeter window must be bounded".into())
            })?;
            (c, r, false)
        }
    };
    let vol_box = (br + br).powi(n as i32);

    // radial structure for the y samples
    let e_far = set.far_field();
    let (e_bounded, e_enc_c, e_enc_r) = match e_far {
        FarField::Const { center, radius, value: false } => (true, center, radius),
        _ => (false, VecN::zeros(n), T::zero()),
    };
    let om_enc = omega.map(bounding_cube).transpose()?;

    let eps_strat = br * T::of(0.05);
    let mut sum = T::zero();
    let mut sum_sq = T::zero();
    let nsamp = cfg.mc_samples;
    let mut tail_bound_acc = T::zero();
    for _ in 0..nsamp {
        let mut x = VecN::zeros(n);
        for i in 0..n {
            x[i] = bc[i] + rng.gen_range(-br..br);
        }
        let x_in_e = set.contains(&x);
        let x_ok = if whole_space { x_in_e } else { omega.unwrap().contains(&x) };
        let mut g = T::zero();
        if x_ok {
            let d = set.boundary_distance(&x).max(T::min_positive_value());
            // far cutoff: exact when everything is determined out there
            let (r_far, exact_far, tail_bound) = if whole_space {
                let rf = e_enc_c.sub(&x).norm() + e_enc_r;
                // all far y lie outside E, so |chi diff| = chi_E(x) = 1
                (rf, T::of(2.0) * surface * rf.powf(-alpha) / alpha, T::zero())
            } else if e_bounded {
                let rf_e = e_enc_c.sub(&x).norm() + e_enc_r;
                let (oc, or_) = om_enc.unwrap();
                let rf = rf_e.max(oc.sub(&x).norm() + or_);
                let chi_x: T = if x_in_e { T::one() } else { T::zero() };
                // far y: chi diff = chi_E(x), weight 2 - chi_Omega(y) = 2
                (rf, T::of(2.0) * chi_x * surface * rf.powf(-alpha) / alpha, T::zero())
            } else {
                let rf = cfg.tail_radius;
                (rf, T::zero(), T::of(2.0) * surface * rf.powf(-alpha) / alpha)
            };
            tail_bound_acc += tail_bound;
            g += exact_far;

            // stratified radial sampling on [d, r_far]
            let s_mid = eps_strat.max(d).min(r_far);
            for (lo, hi) in [(d, s_mid), (s_mid, r_far)] {
                if !(hi > lo) {
                    continue;
                }
                let a = (lo.powf(-alpha) - hi.powf(-alpha)) / alpha;
                let z = surface * a;
                let u: T = rng.gen_range(T::zero()..T::one());
                let r = (lo.powf(-alpha) - u * alpha * a).powf(-T::one() / alpha);
                let omega_dir = sample_direction::<T, _>(&mut rng, n);
                let y = x.add(&omega_dir.scale(r));
                let diff = (set.membership(&y).indicator::<T>()
                    - set.membership(&x).indicator::<T>())
                .abs();
                let weight = if whole_space {
                    T::of(2.0)
                } else {
                    T::of(2.0) - omega.unwrap().membership(&y).indicator::<T>()
                };
                g += diff * weight * z;
            }
        }
        let gv = g * vol_box;
        sum += gv;
        sum_sq += gv * gv;
    }

    let m = T::of_usize(nsamp);
    let mean = sum / m;
    let var = ((sum_sq - sum * sum / m) / (m - T::one())).max(T::zero());
    let se = (var / m).sqrt();
    let tail = vol_box * tail_bound_acc / m;
    Ok(MeasureEstimate::new(VecN::scalar(mean), se + tail, nsamp as u64, true))
}

/// Local part `P^L_alpha(E; A) = int_{E cap A} int_{A \ E} |x-y|^{-n-alpha}`.
pub fn mc_perimeter_local<T: Real>(
    set: &SetSpec<T>,
    window: &SetSpec<T>,
    ctx: &AlphaContext<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<MeasureEstimate<T>> {
    cfg.validate()?;
    let n = ctx.n();
    let alpha = ctx.alpha();
    let surface = surface_measure::<T>(n);
    let (bc, br) = bounding_cube(window)
        .map_err(|_| Error::InvalidGeometry("local perimeter window must be bounded".into()))?;
    if !(br > T::zero()) {
        return Err(Error::InvalidGeometry("degenerate window".into()));
    }
    let vol_box = (br + br).powi(n as i32);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5851_f42d_4c95_7f2d);
    let eps_strat = br * T::of(0.05);

    let mut sum = T::zero();
    let mut sum_sq = T::zero();
    let nsamp = cfg.mc_samples;
    for _ in 0..nsamp {
        let mut x = VecN::zeros(n);
        for i in 0..n {
            x[i] = bc[i] + rng.gen_range(-br..br);
        }
        let mut g = T::zero();
        if set.contains(&x) && window.contains(&x) {
            let d = set.boundary_distance(&x).max(T::min_positive_value());
            // y must lie in the bounded window: zero tail beyond it
            let r_far = bc.sub(&x).norm() + br * T::of_usize(n).sqrt();
            let s_mid = eps_strat.max(d).min(r_far);
            for (lo, hi) in [(d, s_mid), (s_mid, r_far)] {
                if !(hi > lo) {
                    continue;
                }
                let a = (lo.powf(-alpha) - hi.powf(-alpha)) / alpha;
                let z = surface * a;
                let u: T = rng.gen_range(T::zero()..T::one());
                let r = (lo.powf(-alpha) - u * alpha * a).powf(-T::one() / alpha);
                let dir = sample_direction::<T, _>(&mut rng, n);
                let y = x.add(&dir.scale(r));
                if window.contains(&y) && !set.contains(&y) {
                    g += z;
                }
            }
        }
        let gv = g * vol_box;
        sum += gv;
        sum_sq += gv * gv;
    }
    let m = T::of_usize(nsamp);
    let mean = sum / m;
    let var = ((sum_sq - sum * sum / m) / (m - T::one())).max(T::zero());
    Ok(MeasureEstimate::new(VecN::scalar(mean), (var / m).sqrt(), nsamp as u64, true))
}
