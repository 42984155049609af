//! Closed-form reference values, implemented independently of the adaptive
//! quadrature engine: half-space and ball gradients, interval-union sums,
//! and the Gamma/Beta identity. The only numerics here are a self-contained
//! adaptive Simpson rule and log-Gamma.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::kernel::{ln_gamma, AlphaContext};
use crate::scalar::Real;
use crate::vecn::VecN;

/// Adaptive Simpson on [a, b]; independent of the cell engine.
fn simpson<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T, depth: u32) -> T {
    let two = T::of(2.0);
    let six = T::of(6.0);
    let m = (a + b) / two;
    let fa = f(a);
    let fb = f(b);
    let fm = f(m);
    let whole = (b - a) / six * (fa + T::of(4.0) * fm + fb);
    simpson_step(f, a, m, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    m: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
) -> T {
    let two = T::of(2.0);
    let six = T::of(6.0);
    let lm = (a + m) / two;
    let rm = (m + b) / two;
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / six * (fa + T::of(4.0) * flm + fm);
    let right = (b - m) / six * (fm + T::of(4.0) * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= T::of(15.0) * tol {
        left + right + delta / T::of(15.0)
    } else {
        let half_tol = tol / two;
        simpson_step(f, a, lm, m, fa, flm, fm, left, half_tol, depth - 1)
            + simpson_step(f, m, rm, b, fm, frm, fb, right, half_tol, depth - 1)
    }
}

/// Adaptive quadrature over [a, b] to a target absolute tolerance.
pub fn quad1d<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, tol: T) -> T {
    simpson(&f, a, b, tol, 48)
}

/// `int_R (t^2 + u^2)^{-(s+1)/2} dt` by adaptive quadrature over geometric
/// octaves plus the analytic tail bound `2 A^-s / s`.
fn even_integral_with_tail<T: Real, F: Fn(T) -> T>(f: F, scale: T, s: T, tol: T) -> T {
    // f is even; integrate 2 * int_0^A with A chosen so the tail is < tol/2
    let a_max = (T::of(4.0) / (s * tol)).powf(T::one() / s).max(scale * T::of(16.0));
    let mut acc = quad1d(&f, T::zero(), scale, tol * T::of(0.25));
    let mut lo = scale;
    while lo < a_max {
        let hi = (lo * T::of(2.0)).min(a_max);
        acc += quad1d(&f, lo, hi, tol * T::of(0.05));
        lo = hi;
    }
    T::of(2.0) * acc
}

/// Both sides of `u^s int_R (t^2+u^2)^{-(s+1)/2} dt = Gamma(s/2) sqrt(pi) /
/// Gamma((s+1)/2)`: lhs by quadrature with analytic tail, rhs by log-Gamma.
pub fn gamma_beta_identity<T: Real>(u: T, s: T) -> Result<(T, T)> {
    if !(u > T::zero()) {
        return Err(Error::OutOfRange { field: "u", detail: format!("need u > 0, got {u}") });
    }
    if !(s > T::zero()) {
        return Err(Error::OutOfRange { field: "s", detail: format!("need s > 0, got {s}") });
    }
    let expo = -(s + T::one()) * T::of(0.5);
    let integral =
        even_integral_with_tail(|t: T| (t * t + u * u).powf(expo), u, s, T::of(1e-11));
    let lhs = u.powf(s) * integral;
    let half = T::of(0.5);
    let pi = T::of(std::f64::consts::PI);
    let rhs = (ln_gamma(s * half) + half * pi.ln() - ln_gamma((s + T::one()) * half)).exp();
    Ok((lhs, rhs))
}

/// Half-space closed form: `(mu_{1,alpha}/alpha) nu / |(x-x0).nu|^alpha`.
/// The constant is the one-dimensional mu regardless of the ambient n.
pub fn halfspace_gradient<T: Real>(
    x0: &VecN<T>,
    nu: &VecN<T>,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
) -> Result<VecN<T>> {
    let nh = nu.norm();
    if nh == T::zero() {
        return Err(Error::InvalidGeometry("normal must be nonzero".into()));
    }
    let unit = nu.scale(T::one() / nh);
    let s = x.sub(x0).dot(&unit);
    if s == T::zero() {
        return Err(Error::PointOnBoundary);
    }
    let alpha = ctx.alpha();
    Ok(unit.scale(ctx.mu_1() / alpha * s.abs().powf(-alpha)))
}

/// The sphere profile `g_{n,alpha}(t) = int_{bd B_1} y_1 |t e_1 - y|^{-(n+alpha-1)} dH^{n-1}`,
/// reduced to a 1-D integral (the azimuthal part is exact).
pub fn ball_profile_value<T: Real>(t: T, ctx: &AlphaContext<T>) -> T {
    let alpha = ctx.alpha();
    let pi = T::of(std::f64::consts::PI);
    let tol = T::of(1e-11);
    match ctx.n() {
        1 => (t - T::one()).abs().powf(-alpha) - (t + T::one()).abs().powf(-alpha),
        2 => {
            let expo = -(T::one() + alpha) * T::of(0.5);
            T::of(2.0)
                * quad1d(
                    |th: T| {
                        let q = t * t - T::of(2.0) * t * th.cos() + T::one();
                        th.cos() * q.powf(expo)
                    },
                    T::zero(),
                    pi,
                    tol,
                )
        }
        3 => {
            let expo = -(T::of(2.0) + alpha) * T::of(0.5);
            T::of(2.0)
                * pi
                * quad1d(
                    |ph: T| {
                        let q = t * t - T::of(2.0) * t * ph.cos() + T::one();
                        ph.cos() * ph.sin() * q.powf(expo)
                    },
                    T::zero(),
                    pi,
                    tol,
                )
        }
        _ => unreachable!(),
    }
}

/// Lazily cached log-spaced table of the ball profile with linear
/// interpolation between nodes; direct quadrature outside the table and
/// inside the window around t = 1.
pub struct BallProfile<T> {
    ctx: AlphaContext<T>,
    t_min: T,
    t_max: T,
    points: usize,
    window: T,
    table: OnceLock<Vec<(T, T)>>,
}

impl<T: Real> BallProfile<T> {
    pub fn new(ctx: AlphaContext<T>) -> Self {
        Self {
            ctx,
            t_min: T::of(1e-3),
            t_max: T::of(1e3),
            points: 241,
            window: T::of(0.05),
            table: OnceLock::new(),
        }
    }

    fn table(&self) -> &Vec<(T, T)> {
        self.table.get_or_init(|| {
            let lo = self.t_min.ln();
            let hi = self.t_max.ln();
            let m = self.points;
            let mut out = Vec::with_capacity(m);
            for i in 0..m {
                let lt = lo + (hi - lo) * T::of_usize(i) / T::of_usize(m - 1);
                let t = lt.exp();
                if (t - T::one()).abs() < self.window {
                    continue;
                }
                out.push((t, ball_profile_value(t, &self.ctx)));
            }
            out
        })
    }

    /// Interpolated profile; falls back to direct quadrature off-table.
    pub fn value(&self, t: T) -> T {
        if t < self.t_min || t > self.t_max || (t - T::one()).abs() < self.window * T::of(2.0) {
            return ball_profile_value(t, &self.ctx);
        }
        let tab = self.table();
        let idx = tab.partition_point(|&(tt, _)| tt < t);
        if idx == 0 || idx >= tab.len() {
            return ball_profile_value(t, &self.ctx);
        }
        let (t0, g0) = tab[idx - 1];
        let (t1, g1) = tab[idx];
        if (t - T::one()).abs() < self.window + (t1 - t0) {
            return ball_profile_value(t, &self.ctx);
        }
        let w = (t.ln() - t0.ln()) / (t1.ln() - t0.ln());
        g0 + (g1 - g0) * w
    }

    pub fn tabulated(&self) -> &[(T, T)] {
        self.table()
    }
}

/// Ball closed form: `grad^alpha chi_{B_r(x0)}(x) =
/// -(mu/(n+alpha-1)) g_{n,alpha}(|x-x0|/r) r^-alpha (x-x0)/|x-x0|`,
/// by direct (acceptance-grade) quadrature of the profile.
pub fn ball_gradient<T: Real>(
    x0: &VecN<T>,
    r: T,
    x: &VecN<T>,
    ctx: &AlphaContext<T>,
) -> Result<VecN<T>> {
    if !(r > T::zero()) {
        return Err(Error::InvalidGeometry("ball radius must be positive".into()));
    }
    let d = x.sub(x0);
    let dist = d.norm();
    if dist == T::zero() {
        return Ok(VecN::zeros(x.len()));
    }
    let t = dist / r;
    if (t - T::one()).abs() < T::of(1e-12) {
        return Err(Error::PointOnBoundary);
    }
    let alpha = ctx.alpha();
    let n = T::of_usize(ctx.n());
    let g = ball_profile_value(t, ctx);
    let mag = ctx.mu() / (n + alpha - T::one()) * g * r.powf(-alpha);
    Ok(d.scale(-mag / dist))
}

/// Interval-union closed form (proof constant fixed by the half-line limit):
/// `c_alpha sum_k (|t-a_k|^-alpha - |t-b_k|^-alpha)`, `c_alpha = mu_{1,alpha}/alpha`,
/// dropping the b-term of a trailing half-line.
pub fn interval_union_gradient<T: Real>(
    intervals: &[(T, T)],
    t: T,
    ctx: &AlphaContext<T>,
) -> Result<T> {
    if intervals.is_empty() {
        return Err(Error::InvalidGeometry("need at least one interval".into()));
    }
    let mut prev = T::neg_infinity();
    for &(a, b) in intervals {
        if !(a > prev) || !(b > a) {
            return Err(Error::InvalidGeometry("intervals must be strictly increasing".into()));
        }
        prev = b;
    }
    let alpha = ctx.alpha();
    let c = ctx.mu_1() / alpha;
    let mut acc = T::zero();
    for &(a, b) in intervals {
        if t == a || t == b {
            return Err(Error::PointOnBoundary);
        }
        acc += (t - a).abs().powf(-alpha);
        if b.is_finite() {
            acc -= (t - b).abs().powf(-alpha);
        }
    }
    Ok(c * acc)
}

/// One row of the golden-value table consumed by the acceptance suite.
#[derive(Clone, Debug, PartialEq)]
pub struct GoldenRecord {
    pub name: String,
    pub n: usize,
    pub alpha: f64,
    pub point: Vec<f64>,
    pub values: Vec<f64>,
    pub tag: String,
}

/// Parse the plain-text golden table: whitespace-separated records
/// `name n alpha <n point coords> <values...> tag`, `#` comments.
pub fn parse_golden(text: &str) -> Result<Vec<GoldenRecord>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = |what: &str| {
            Error::InvalidConfig(format!("golden table line {}: {}", lineno + 1, what))
        };
        if toks.len() < 4 {
            return Err(bad("too few fields"));
        }
        let name = toks[0].to_string();
        let n: usize = toks[1].parse().map_err(|_| bad("bad n"))?;
        let alpha: f64 = toks[2].parse().map_err(|_| bad("bad alpha"))?;
        if toks.len() < 3 + n + 2 {
            return Err(bad("too few fields for the declared dimension"));
        }
        let point = toks[3..3 + n]
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| bad("bad point coordinate")))
            .collect::<Result<Vec<_>>>()?;
        let tag = toks.last().unwrap().to_string();
        let values = toks[3 + n..toks.len() - 1]
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| bad("bad value")))
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            return Err(bad("record carries no values"));
        }
        out.push(GoldenRecord { name, n, alpha, point, values, tag });
    }
    Ok(out)
}

pub fn find_golden<'a>(records: &'a [GoldenRecord], name: &str) -> Option<&'a GoldenRecord> {
    records.iter().find(|r| r.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, a: f64) -> AlphaContext<f64> {
        AlphaContext::new(n, a).unwrap()
    }

    #[test]
    fn gamma_beta_trivial_and_derived() {
        // s = 1: rhs = pi, lhs = u int (t^2+u^2)^-1 dt = pi
        let (lhs, rhs) = gamma_beta_identity(1.0f64, 1.0).unwrap();
        assert!((rhs - std::f64::consts::PI).abs() < 1e-13);
        assert!((lhs - rhs).abs() < 1e-9, "lhs {lhs} rhs {rhs}");
        // s = 3, u = 2: rhs = pi/2
        let (lhs, rhs) = gamma_beta_identity(2.0f64, 3.0).unwrap();
        assert!((rhs - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
        assert!((lhs - rhs).abs() < 1e-9);
        // frozen 40-digit value for s = 2.5
        let (lhs, rhs) = gamma_beta_identity(1.0f64, 2.5).unwrap();
        assert!((rhs - 1.748_038_369_528_079_8).abs() < 1e-13);
        assert!((lhs - rhs).abs() < 1e-8);
        assert!(gamma_beta_identity(0.0f64, 1.0).is_err());
        assert!(gamma_beta_identity(1.0f64, 0.0).is_err());
    }

    #[test]
    fn halfspace_examples() {
        // n=1, alpha=1/2, x0=0, nu=+1, x=1 -> 2 mu_{1,1/2}
        let c = ctx(1, 0.5);
        let v = halfspace_gradient(
            &VecN::scalar(0.0),
            &VecN::scalar(1.0),
            &VecN::scalar(1.0),
            &c,
        )
        .unwrap();
        assert!((v[0] - 2.0 * 0.199_471_140_200_716_34).abs() < 1e-14);

        // ambient n=2 uses the same 1-D constant; tangential coordinate free
        let c2 = ctx(2, 0.5);
        let v2 = halfspace_gradient(
            &VecN::from_slice(&[0.0, 0.0]),
            &VecN::from_slice(&[0.0, 1.0]),
            &VecN::from_slice(&[7.0, 1.0]),
            &c2,
        )
        .unwrap();
        assert!((v2[1] - v[0]).abs() < 1e-14);
        assert_eq!(v2[0], 0.0);

        // reflection symmetry across the hyperplane
        let vm = halfspace_gradient(
            &VecN::from_slice(&[0.0, 0.0]),
            &VecN::from_slice(&[0.0, 1.0]),
            &VecN::from_slice(&[7.0, -1.0]),
            &c2,
        )
        .unwrap();
        assert_eq!(vm[1], v2[1]);

        assert!(halfspace_gradient(
            &VecN::from_slice(&[0.0, 0.0]),
            &VecN::from_slice(&[0.0, 1.0]),
            &VecN::from_slice(&[3.0, 0.0]),
            &c2,
        )
        .is_err());
    }

    #[test]
    fn ball_profile_matches_frozen_goldens() {
        // frozen from 30-digit quadrature of the sphere integral
        let c = ctx(2, 0.5);
        assert!((ball_profile_value(2.0, &c) - 1.004_703_809_891_27).abs() < 1e-9);
        assert!((ball_profile_value(0.5, &c) - 2.841_731_508_232_307_6).abs() < 1e-9);
        let c3 = ctx(3, 0.25);
        assert!((ball_profile_value(0.5, &c3) - 5.480_675_303_763_607).abs() < 1e-8);
        assert!((ball_profile_value(2.0, &c3) - 1.152_170_054_026_095).abs() < 1e-8);
    }

    #[test]
    fn ball_gradient_direction_and_magnitude() {
        let c = ctx(2, 0.5);
        // frozen: |grad chi_B1|(|x|=2) = mu/(n+alpha-1) g(2)
        let v = ball_gradient(
            &VecN::zeros(2),
            1.0,
            &VecN::from_slice(&[2.0, 0.0]),
            &c,
        )
        .unwrap();
        assert!((v[0] - -0.076_432_118_812_556_03).abs() < 1e-10, "{}", v[0]);
        assert_eq!(v[1], 0.0);

        // antiparallel to x - x0 anywhere off the sphere
        let w = ball_gradient(&VecN::zeros(2), 1.0, &VecN::from_slice(&[0.3, 0.4]), &c).unwrap();
        let cosang = w.dot(&VecN::from_slice(&[0.3, 0.4])) / (w.norm() * 0.5);
        assert!((cosang + 1.0).abs() < 1e-12);

        // center maps to the zero vector
        assert_eq!(ball_gradient(&VecN::zeros(2), 1.0, &VecN::zeros(2), &c).unwrap().norm(), 0.0);
        assert!(ball_gradient(&VecN::zeros(2), 1.0, &VecN::from_slice(&[1.0, 0.0]), &c).is_err());

        // scaling: value(r=2) at 2x equals 2^-alpha * value(r=1) at x
        let a = ball_gradient(&VecN::zeros(2), 2.0, &VecN::from_slice(&[3.0, 0.0]), &c).unwrap();
        let b = ball_gradient(&VecN::zeros(2), 1.0, &VecN::from_slice(&[1.5, 0.0]), &c).unwrap();
        assert!((a[0] - b[0] * 2f64.powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn ball_profile_cache_interpolates() {
        let c = ctx(2, 0.5);
        let prof = BallProfile::new(c);
        for &t in &[0.37, 0.8, 1.9, 7.3, 40.0] {
            let direct = ball_profile_value(t, &c);
            let interp = prof.value(t);
            assert!(
                (direct - interp).abs() / direct.abs() < 5e-3,
                "t={t}: {direct} vs {interp}"
            );
        }
        assert!(!prof.tabulated().is_empty());
    }

    #[test]
    fn interval_union_matches_halfline_and_signs() {
        let c = ctx(1, 0.5);
        // single half-line equals the half-space formula exactly
        let hl = interval_union_gradient(&[(0.25, f64::INFINITY)], 2.0, &c).unwrap();
        let hs = halfspace_gradient(
            &VecN::scalar(0.25),
            &VecN::scalar(1.0),
            &VecN::scalar(2.0),
            &c,
        )
        .unwrap();
        assert_eq!(hl, hs[0]);

        // frozen: (0,1) at t=-1 -> 2 mu (1 - 2^-1/2)
        let v = interval_union_gradient(&[(0.0, 1.0)], -1.0, &c).unwrap();
        assert!((v - 0.116_847_488_627_554_53).abs() < 1e-14);

        // negative value just right of b_1 for two intervals
        let v = interval_union_gradient(&[(0.0, 1.0), (2.0, 3.0)], 1.2, &c).unwrap();
        assert!(v < 0.0, "expected negative, got {v}");
        // and exact zero at the symmetry midpoint
        let v = interval_union_gradient(&[(0.0, 1.0), (2.0, 3.0)], 1.5, &c).unwrap();
        assert_eq!(v, 0.0);

        assert!(interval_union_gradient(&[(0.0, 1.0)], 1.0, &c).is_err());
        assert!(interval_union_gradient(&[(1.0, 0.0)], 0.5, &c).is_err());
    }

    #[test]
    fn golden_parser_round_trip() {
        let text = "\n# comment line\nmu_1_half 1 0.5 0.0 0.19947114020071634 derived\n\
                    hs_grad 2 0.5 0.0 1.0 0.0 0.39894228040143268 paper # trailing\n";
        let recs = parse_golden(text).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].name, "mu_1_half");
        assert_eq!(recs[0].n, 1);
        assert_eq!(recs[0].point, vec![0.0]);
        assert_eq!(recs[0].values.len(), 1);
        assert_eq!(recs[1].point, vec![0.0, 1.0]);
        assert_eq!(recs[1].values, vec![0.0, 0.398_942_280_401_432_68]);
        assert_eq!(recs[1].tag, "paper");
        assert!(find_golden(&recs, "hs_grad").is_some());
        assert!(find_golden(&recs, "nope").is_none());
        assert!(parse_golden("bad line only").is_err());
    }
}
