//! Normalization constants and the pointwise Riesz kernel.
//!
//! Everything downstream evaluates integrals of
//! `(y - x)/|y - x|^{n + alpha + 1}` against indicator or field differences;
//! the constant `mu` carried by [`AlphaContext`] is the renormalization that
//! turns those integrals into the fractional gradient and divergence.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vecn::VecN;

/// Lanczos approximation, g = 7, 9 coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of |Gamma(z)| together with the sign of Gamma(z).
///
/// Works in log space throughout so that arguments close to 0 (where Gamma
/// blows up) stay finite.
pub fn ln_gamma_sign<T: Real>(z: T) -> (T, T) {
    let half = T::of(0.5);
    if z < half {
        // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let pi = T::of(std::f64::consts::PI);
        let s = (pi * z).sin();
        let (lg, sign) = ln_gamma_sign(T::one() - z);
        ((pi / s.abs()).ln() - lg, sign * s.signum())
    } else {
        let zm1 = z - T::one();
        let mut acc = T::of(LANCZOS[0]);
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            acc += T::of(c) / (zm1 + T::of_usize(i));
        }
        let t = zm1 + T::of(LANCZOS_G) + half;
        let ln_sqrt_2pi = T::of(0.918_938_533_204_672_74); // ln(2*pi)/2
        (
            ln_sqrt_2pi + (zm1 + half) * t.ln() - t + acc.ln(),
            T::one(),
        )
    }
}

/// ln Gamma(z) for z > 0.
pub fn ln_gamma<T: Real>(z: T) -> T {
    ln_gamma_sign(z).0
}

/// Surface measure of the unit sphere, `H^{n-1}(S^{n-1})`, for n = 1, 2, 3.
pub fn surface_measure<T: Real>(n: usize) -> T {
    let pi = T::of(std::f64::consts::PI);
    match n {
        1 => T::of(2.0),
        2 => T::of(2.0) * pi,
        3 => T::of(4.0) * pi,
        _ => unreachable!("dimension capped at 3"),
    }
}

/// Volume of the unit ball in dimension n = 1, 2, 3.
pub fn ball_volume<T: Real>(n: usize) -> T {
    let pi = T::of(std::f64::consts::PI);
    match n {
        1 => T::of(2.0),
        2 => pi,
        3 => T::of(4.0 / 3.0) * pi,
        _ => unreachable!("dimension capped at 3"),
    }
}

/// Ambient dimension, fractional order, and the normalization constant
/// `mu = 2^alpha pi^{-n/2} Gamma((n+alpha+1)/2) / Gamma((1-alpha)/2)`.
///
/// Immutable after construction; shared freely across threads.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaContext<T> {
    n: usize,
    alpha: T,
    mu: T,
}

impl<T: Real> AlphaContext<T> {
    /// Build the context, computing `mu` in log space.
    pub fn new(n: usize, alpha: T) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::OutOfRange {
                field: "n",
                detail: format!("expected 1 <= n <= 3, got {n}"),
            });
        }
        if !(alpha > T::zero() && alpha < T::one()) || !alpha.is_finite() {
            return Err(Error::OutOfRange {
                field: "alpha",
                detail: format!("expected alpha strictly inside (0, 1), got {alpha}"),
            });
        }
        Ok(Self { n, alpha, mu: Self::mu_for(n, alpha) })
    }

    fn mu_for(n: usize, alpha: T) -> T {
        let two = T::of(2.0);
        let half = T::of(0.5);
        let pi = T::of(std::f64::consts::PI);
        let ln = alpha * two.ln() - T::of_usize(n) * half * pi.ln()
            + ln_gamma((T::of_usize(n) + alpha + T::one()) * half)
            - ln_gamma((T::one() - alpha) * half);
        ln.exp()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    /// The one-dimensional constant `mu_{1,alpha}` at the same order;
    /// the half-space closed form uses it regardless of the ambient n.
    pub fn mu_1(&self) -> T {
        Self::mu_for(1, self.alpha)
    }

    /// `mu_{n-1,alpha}` from the n-dimensional constant via
    /// `mu_{n-1} = mu_n Gamma((n+alpha)/2) sqrt(pi) / Gamma((n+alpha+1)/2)`.
    pub fn mu_descent(&self) -> Result<T> {
        if self.n < 2 {
            return Err(Error::NoLowerDimension);
        }
        let half = T::of(0.5);
        let pi = T::of(std::f64::consts::PI);
        let na = T::of_usize(self.n) + self.alpha;
        let ln = ln_gamma(na * half) + half * pi.ln() - ln_gamma((na + T::one()) * half);
        Ok(self.mu * ln.exp())
    }

    /// Pointwise Riesz kernel `z / |z|^{n + alpha + 1}`.
    pub fn riesz_kernel(&self, z: &VecN<T>) -> Result<VecN<T>> {
        let r = z.norm();
        if r == T::zero() {
            return Err(Error::KernelSingularity);
        }
        let expo = T::of_usize(self.n) + self.alpha + T::one();
        Ok(z.scale(r.powf(-expo)))
    }

    /// Scalar kernel magnitude `|z|^{-(n + alpha)}`; the modulus of
    /// `riesz_kernel` and the weight in the perimeter functional.
    pub fn kernel_magnitude(&self, r: T) -> T {
        r.powf(-(T::of_usize(self.n) + self.alpha))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // frozen from a 40-digit arbitrary-precision evaluation of
    // 2^a pi^{-n/2} Gamma((n+a+1)/2)/Gamma((1-a)/2)
    const MU_1_HALF: f64 = 0.199_471_140_200_716_34;
    const MU_2_HALF: f64 = 0.114_111_419_793_701_56;
    const MU_1_QUARTER: f64 = 0.266_554_830_338_112_03;
    const MU_2_QUARTER: f64 = 0.143_174_486_570_410_92;
    const MU_3_QUARTER: f64 = 0.095_452_917_419_997_08;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn mu_matches_frozen_goldens() {
        let cases = [
            (1, 0.5, MU_1_HALF),
            (2, 0.5, MU_2_HALF),
            (1, 0.25, MU_1_QUARTER),
            (2, 0.25, MU_2_QUARTER),
            (3, 0.25, MU_3_QUARTER),
        ];
        for (n, a, golden) in cases {
            let ctx = AlphaContext::new(n, a).unwrap();
            assert!(rel(ctx.mu(), golden) < 1e-13, "mu({n},{a}) = {}", ctx.mu());
        }
    }

    #[test]
    fn mu_matches_independent_ln_gamma() {
        // statrs is an independent implementation of ln Gamma
        use statrs::function::gamma::ln_gamma as oracle_lng;
        for n in 1..=3usize {
            for a in [0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
                let ctx = AlphaContext::new(n, a).unwrap();
                let ln = a * 2f64.ln() - (n as f64) / 2.0 * std::f64::consts::PI.ln()
                    + oracle_lng((n as f64 + a + 1.0) / 2.0)
                    - oracle_lng((1.0 - a) / 2.0);
                assert!(rel(ctx.mu(), ln.exp()) < 1e-12, "n={n} a={a}");
                assert!(ctx.mu() > 0.0);
            }
        }
    }

    #[test]
    fn construction_rejects_out_of_range() {
        for a in [0.0, 1.0, -0.5, 2.0, f64::NAN] {
            let err = AlphaContext::new(1, a).unwrap_err();
            match err {
                Error::OutOfRange { field, .. } => assert_eq!(field, "alpha"),
                other => panic!("unexpected error {other}"),
            }
        }
        for n in [0usize, 4, 7] {
            let err = AlphaContext::new(n, 0.5).unwrap_err();
            match err {
                Error::OutOfRange { field, .. } => assert_eq!(field, "n"),
                other => panic!("unexpected error {other}"),
            }
        }
    }

    #[test]
    fn descent_consistency() {
        for n in [2usize, 3] {
            for a in [0.1, 0.25, 0.5, 0.75, 0.9] {
                let hi = AlphaContext::new(n, a).unwrap();
                let lo = AlphaContext::new(n - 1, a).unwrap();
                assert!(
                    rel(hi.mu_descent().unwrap(), lo.mu()) < 1e-12,
                    "descent n={n} a={a}"
                );
            }
        }
        assert_eq!(
            AlphaContext::new(1, 0.5).unwrap().mu_descent().unwrap_err(),
            Error::NoLowerDimension
        );
    }

    #[test]
    fn kernel_values_and_oddness() {
        let ctx = AlphaContext::new(2, 0.5).unwrap();
        let z = VecN::from_slice(&[3.0, 4.0]);
        let k = ctx.riesz_kernel(&z).unwrap();
        // |z| = 5, exponent n + alpha + 1 = 3.5
        let scale = 5f64.powf(-3.5);
        assert!((k[0] - 3.0 * scale).abs() < 1e-16);
        assert!((k[1] - 4.0 * scale).abs() < 1e-16);

        let kneg = ctx.riesz_kernel(&z.neg()).unwrap();
        assert_eq!(kneg[0], -k[0]);
        assert_eq!(kneg[1], -k[1]);

        let ctx1 = AlphaContext::new(1, 0.5).unwrap();
        let one = ctx1.riesz_kernel(&VecN::from_slice(&[1.0])).unwrap();
        assert_eq!(one[0], 1.0);

        assert_eq!(
            ctx.riesz_kernel(&VecN::zeros(2)).unwrap_err(),
            Error::KernelSingularity
        );
    }

    #[test]
    fn ln_gamma_reflection_sign() {
        // Gamma is negative on (-1, 0)
        let (_, s) = ln_gamma_sign(-0.5f64);
        assert_eq!(s, -1.0);
        let (lg, s) = ln_gamma_sign(0.25f64);
        assert_eq!(s, 1.0);
        assert!((lg - 1.288_022_524_698_077_4).abs() < 1e-13); // ln Gamma(1/4)
    }
}
