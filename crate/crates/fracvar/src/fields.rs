//! Compactly supported Lipschitz test fields with certified metadata.
//!
//! Every field carries a valid (not necessarily sharp) Lipschitz constant,
//! a sup bound, and a support ball; the quadrature engine relies on those
//! plus an optional local-constancy oracle (used by mollified indicators,
//! which are exactly 0/1 away from the mollification collar).

use std::sync::Arc;

use crate::scalar::Real;
use crate::vecn::VecN;

/// max of 6 v (1 - v^2)^2 over [0, 1]: slope constant of the cubic bump.
const BUMP_SLOPE: f64 = 1.717_300_206_719_838_5; // 96 / (25 sqrt 5)

type EvalFn<T> = Arc<dyn Fn(&VecN<T>) -> T + Send + Sync>;
type VecEvalFn<T> = Arc<dyn Fn(&VecN<T>) -> VecN<T> + Send + Sync>;
type ConstFn<T> = Arc<dyn Fn(&VecN<T>, T) -> Option<T> + Send + Sync>;

/// Scalar Lipschitz field.
#[derive(Clone)]
pub struct ScalarField<T> {
    eval: EvalFn<T>,
    lipschitz: T,
    sup: T,
    /// f is constant (`far_value`) outside this ball; None when unbounded
    /// structure remains (mollified half-spaces).
    support: Option<(VecN<T>, T, T)>,
    const_oracle: Option<ConstFn<T>>,
    dim: usize,
}

impl<T: Real> ScalarField<T> {
    pub fn from_parts(
        dim: usize,
        eval: EvalFn<T>,
        lipschitz: T,
        sup: T,
        support: Option<(VecN<T>, T, T)>,
        const_oracle: Option<ConstFn<T>>,
    ) -> Self {
        Self { eval, lipschitz, sup, support, const_oracle, dim }
    }

    /// Radial cubic bump `(1 - |y-c|^2/w^2)^3` on B_w(c), C^2 at the rim.
    pub fn bump(center: VecN<T>, width: T) -> Self {
        let dim = center.len();
        let c = center;
        let w2 = width * width;
        Self {
            eval: Arc::new(move |y: &VecN<T>| {
                let u = y.sub(&c).norm_sq() / w2;
                if u >= T::one() {
                    T::zero()
                } else {
                    let v = T::one() - u;
                    v * v * v
                }
            }),
            lipschitz: T::of(BUMP_SLOPE) / width,
            sup: T::one(),
            support: Some((center, width, T::zero())),
            const_oracle: None,
            dim,
        }
    }

    /// Tent `max(0, 1 - |t-c|/w)` in one dimension.
    pub fn tent(center: T, width: T) -> Self {
        Self {
            eval: Arc::new(move |y: &VecN<T>| {
                (T::one() - (y[0] - center).abs() / width).max(T::zero())
            }),
            lipschitz: T::one() / width,
            sup: T::one(),
            support: Some((VecN::scalar(center), width, T::zero())),
            const_oracle: None,
            dim: 1,
        }
    }

    /// Coordinate-modulated bump `((y-c)_axis / w) * bump(y)`: breaks radial
    /// symmetry while staying compactly supported.
    pub fn coord_bump(center: VecN<T>, width: T, axis: usize) -> Self {
        let dim = center.len();
        let c = center;
        let w2 = width * width;
        let w = width;
        Self {
            eval: Arc::new(move |y: &VecN<T>| {
                let d = y.sub(&c);
                let u = d.norm_sq() / w2;
                if u >= T::one() {
                    T::zero()
                } else {
                    let v = T::one() - u;
                    d[axis] / w * v * v * v
                }
            }),
            lipschitz: (T::one() + T::of(BUMP_SLOPE)) / width,
            sup: T::one(),
            support: Some((center, width, T::zero())),
            const_oracle: None,
            dim,
        }
    }

    /// Pointwise product, with the product Lipschitz/support metadata.
    pub fn product(a: &ScalarField<T>, b: &ScalarField<T>) -> Self {
        let fa = a.eval.clone();
        let fb = b.eval.clone();
        let support = match (&a.support, &b.support) {
            // outside either factor's support with far value 0, the product is 0
            (Some((c, r, z)), _) if *z == T::zero() => Some((*c, *r, T::zero())),
            (_, Some((c, r, z))) if *z == T::zero() => Some((*c, *r, T::zero())),
            _ => None,
        };
        let oa = a.const_oracle.clone();
        let ob = b.const_oracle.clone();
        let (la, sa) = (a.lipschitz, a.sup);
        let (lb, sb) = (b.lipschitz, b.sup);
        let const_oracle: Option<ConstFn<T>> = match (oa, ob) {
            (None, None) => None,
            (oa, ob) => Some(Arc::new(move |c: &VecN<T>, r: T| {
                let ca = oa.as_ref().and_then(|f| f(c, r));
                let cb = ob.as_ref().and_then(|f| f(c, r));
                match (ca, cb) {
                    (Some(x), Some(y)) => Some(x * y),
                    (Some(x), None) if x == T::zero() => Some(T::zero()),
                    (None, Some(y)) if y == T::zero() => Some(T::zero()),
                    _ => None,
                }
            })),
        };
        Self {
            eval: Arc::new(move |y: &VecN<T>| fa(y) * fb(y)),
            lipschitz: la * sb + lb * sa,
            sup: sa * sb,
            support,
            const_oracle,
            dim: a.dim,
        }
    }

    pub fn value(&self, y: &VecN<T>) -> T {
        (self.eval)(y)
    }

    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    pub fn sup(&self) -> T {
        self.sup
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Ball outside which the field equals `far value`.
    pub fn support(&self) -> Option<(VecN<T>, T, T)> {
        self.support
    }

    /// Is the field certified constant on B_r(center)? Returns the constant.
    pub fn const_on_ball(&self, center: &VecN<T>, r: T) -> Option<T> {
        if let Some(f) = &self.const_oracle {
            if let Some(c) = f(center, r) {
                return Some(c);
            }
        }
        if let Some((sc, sr, far)) = &self.support {
            if center.sub(sc).norm() - r >= *sr {
                return Some(*far);
            }
        }
        None
    }
}

/// Vector Lipschitz field; `lipschitz` bounds |phi(x) - phi(y)| / |x - y|
/// in the Euclidean norm.
#[derive(Clone)]
pub struct VectorField<T> {
    eval: VecEvalFn<T>,
    lipschitz: T,
    sup: T,
    support: Option<(VecN<T>, T)>,
    dim: usize,
}

impl<T: Real> VectorField<T> {
    /// `bump(y) * e_axis`.
    pub fn bump_along(center: VecN<T>, width: T, axis: usize) -> Self {
        let dim = center.len();
        let scalar = ScalarField::bump(center, width);
        let l = scalar.lipschitz();
        Self {
            eval: Arc::new(move |y: &VecN<T>| {
                let mut v = VecN::zeros(dim);
                v[axis] = scalar.value(y);
                v
            }),
            lipschitz: l,
            sup: T::one(),
            support: Some((center, width)),
            dim,
        }
    }

    /// Bump modulated with distinct coordinate factors per component; a
    /// generic compactly supported field with no special symmetry.
    pub fn swirl(center: VecN<T>, width: T) -> Self {
        let dim = center.len();
        let base = ScalarField::bump(center, width);
        let mods: Vec<ScalarField<T>> =
            (0..dim).map(|a| ScalarField::coord_bump(center, width, (a + 1) % dim.max(1))).collect();
        let l = base.lipschitz() + mods.iter().fold(T::zero(), |m, f| m.max(f.lipschitz()));
        let _ = base;
        Self {
            eval: Arc::new(move |y: &VecN<T>| {
                let mut v = VecN::zeros(dim);
                for (a, f) in mods.iter().enumerate() {
                    v[a] = f.value(y);
                }
                v
            }),
            lipschitz: l * T::of_usize(dim),
            sup: T::of_usize(dim),
            support: Some((center, width)),
            dim,
        }
    }

    pub fn from_components(components: Vec<ScalarField<T>>) -> Self {
        let dim = components.len();
        let mut lipschitz = T::zero();
        let mut sup2 = T::zero();
        let mut support: Option<(VecN<T>, T)> = None;
        for f in &components {
            lipschitz += f.lipschitz();
            sup2 += f.sup() * f.sup();
            if let Some((c, r, z)) = f.support() {
                if z == T::zero() {
                    support = match support {
                        None => Some((c, r)),
                        Some((c0, r0)) => Some((c0, r0.max(c0.sub(&c).norm() + r))),
                    };
                }
            } else {
                support = None;
            }
        }
        let comps = components;
        Self {
            eval: Arc::new(move |y: &VecN<T>| {
                let mut v = VecN::zeros(dim);
                for (a, f) in comps.iter().enumerate() {
                    v[a] = f.value(y);
                }
                v
            }),
            lipschitz,
            sup: sup2.sqrt(),
            support,
            dim,
        }
    }

    pub fn value(&self, y: &VecN<T>) -> VecN<T> {
        (self.eval)(y)
    }

    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    pub fn sup(&self) -> T {
        self.sup
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Ball outside which phi vanishes.
    pub fn support(&self) -> Option<(VecN<T>, T)> {
        self.support
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rand_point(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> VecN<f64> {
        let mut v = VecN::zeros(dim);
        for i in 0..dim {
            v[i] = rng.gen_range(-scale..scale);
        }
        v
    }

    #[test]
    fn bump_vanishes_outside_support_and_peaks_at_center() {
        let f = ScalarField::bump(VecN::zeros(2), 1.5);
        assert_eq!(f.value(&VecN::zeros(2)), 1.0);
        assert_eq!(f.value(&VecN::from_slice(&[1.5, 0.0])), 0.0);
        assert_eq!(f.value(&VecN::from_slice(&[3.0, -2.0])), 0.0);
        assert_eq!(f.const_on_ball(&VecN::from_slice(&[4.0, 0.0]), 1.0), Some(0.0));
        assert_eq!(f.const_on_ball(&VecN::from_slice(&[1.0, 0.0]), 1.0), None);
    }

    #[test]
    fn lipschitz_bound_holds_on_sampled_pairs() {
        let fields = [
            ScalarField::bump(VecN::zeros(2), 0.8),
            ScalarField::coord_bump(VecN::zeros(2), 1.2, 0),
            ScalarField::product(
                &ScalarField::bump(VecN::zeros(2), 1.0),
                &ScalarField::coord_bump(VecN::from_slice(&[0.3, 0.0]), 1.1, 1),
            ),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for f in &fields {
            for _ in 0..10_000 {
                let a = rand_point(&mut rng, 2, 2.0);
                let b = rand_point(&mut rng, 2, 2.0);
                let lhs = (f.value(&a) - f.value(&b)).abs();
                let rhs = f.lipschitz() * a.sub(&b).norm();
                assert!(lhs <= rhs * (1.0 + 1e-12), "lhs={lhs} rhs={rhs}");
                assert!(f.value(&a).abs() <= f.sup() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn tent_is_one_lipschitz_over_width() {
        let f = ScalarField::tent(0.5, 2.0);
        assert_eq!(f.value(&VecN::scalar(0.5)), 1.0);
        assert_eq!(f.value(&VecN::scalar(2.5)), 0.0);
        assert_eq!(f.value(&VecN::scalar(-2.0)), 0.0);
        assert!((f.value(&VecN::scalar(1.5)) - 0.5f64).abs() < 1e-15);
        assert_eq!(f.lipschitz(), 0.5);
    }

    #[test]
    fn vector_field_metadata() {
        let phi = VectorField::bump_along(VecN::zeros(2), 1.0, 0);
        let v = phi.value(&VecN::zeros(2));
        assert_eq!(v.as_slice(), &[1.0, 0.0]);
        assert_eq!(phi.value(&VecN::from_slice(&[2.0, 0.0])).norm(), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sw = VectorField::swirl(VecN::zeros(2), 1.0);
        for _ in 0..10_000 {
            let a = rand_point(&mut rng, 2, 1.5);
            let b = rand_point(&mut rng, 2, 1.5);
            let lhs = sw.value(&a).sub(&sw.value(&b)).norm();
            assert!(lhs <= sw.lipschitz() * a.sub(&b).norm() * (1.0 + 1e-12));
        }
    }
}
