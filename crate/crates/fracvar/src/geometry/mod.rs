//! Exactly decidable set representations: membership, certified boundary
//! distance, far-field structure, and Lebesgue-density diagnostics.

pub mod density;
pub mod predicates;

pub use density::{density_profile, DensityClass, DensityReport};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vecn::VecN;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    OnBoundary,
}

impl Membership {
    pub fn indicator<T: Real>(self) -> T {
        match self {
            Membership::Inside => T::one(),
            Membership::Outside => T::zero(),
            // measure-zero tie; only density sampling ever consumes it
            Membership::OnBoundary => T::of(0.5),
        }
    }
}

/// Behaviour of the indicator far from the origin; drives the tail treatment
/// of the singular-integral engine and the perimeter sampler.
///
/// `Const` means `chi_E = value` outside the ball `B_radius(center)`.
/// The half-line variants are the 1-D sets whose indicator takes different
/// constants on the two rays outside `[center - radius, center + radius]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FarField<T> {
    Const { center: VecN<T>, radius: T, value: bool },
    RightHalfLine { center: T, radius: T },
    LeftHalfLine { center: T, radius: T },
    Varies,
}

/// Geometric set built from exactly decidable primitives and boolean
/// combinations. Primitives are open; membership is tolerance-free away from
/// the topological boundary.
#[derive(Clone, Debug, PartialEq)]
pub enum SetSpec<T> {
    HalfSpace { point: VecN<T>, normal: VecN<T> },
    Ball { center: VecN<T>, radius: T },
    IntervalUnion { endpoints: Vec<(T, T)> },
    ConvexPolygon { vertices: Vec<VecN<T>> },
    Polygon { vertices: Vec<VecN<T>> },
    Complement(Box<SetSpec<T>>),
    Intersection(Box<SetSpec<T>>, Box<SetSpec<T>>),
    Union(Box<SetSpec<T>>, Box<SetSpec<T>>),
}

impl<T: Real> SetSpec<T> {
    /// Open half-space {(y - point) . normal > 0}; the normal is normalized.
    pub fn half_space(point: VecN<T>, normal: VecN<T>) -> Result<Self> {
        let n = normal.norm();
        if n == T::zero() || !n.is_finite() {
            return Err(Error::InvalidGeometry("half-space normal must be nonzero".into()));
        }
        Ok(SetSpec::HalfSpace { point, normal: normal.scale(T::one() / n) })
    }

    pub fn ball(center: VecN<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::InvalidGeometry("ball radius must be positive".into()));
        }
        Ok(SetSpec::Ball { center, radius })
    }

    /// Union of open intervals with strictly increasing endpoints
    /// a_1 < b_1 < a_2 < ... ; the last b may be +infinity (half-line).
    pub fn interval_union(endpoints: Vec<(T, T)>) -> Result<Self> {
        if endpoints.is_empty() {
            return Err(Error::InvalidGeometry("interval union needs at least one interval".into()));
        }
        let mut prev = T::neg_infinity();
        for (i, &(a, b)) in endpoints.iter().enumerate() {
            if !(a > prev) || !(b > a) {
                return Err(Error::InvalidGeometry(format!(
                    "interval endpoints must be strictly increasing (interval {i})"
                )));
            }
            if a.is_infinite() {
                return Err(Error::InvalidGeometry("left endpoints must be finite".into()));
            }
            if b.is_infinite() && i + 1 != endpoints.len() {
                return Err(Error::InvalidGeometry("only the last interval may be a half-line".into()));
            }
            prev = b;
        }
        Ok(SetSpec::IntervalUnion { endpoints })
    }

    /// Simple closed polygon from its vertex loop (n = 2).
    pub fn polygon(vertices: Vec<VecN<T>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidGeometry("polygon needs at least 3 vertices".into()));
        }
        Ok(SetSpec::Polygon { vertices })
    }

    /// Convex polygon; rejects vertex loops with mixed turn directions.
    pub fn convex_polygon(vertices: Vec<VecN<T>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidGeometry("polygon needs at least 3 vertices".into()));
        }
        let m = vertices.len();
        let mut sign = 0i8;
        for i in 0..m {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % m];
            let c = &vertices[(i + 2) % m];
            let s = predicates::orient2d(
                a[0].to_f64_lossy(),
                a[1].to_f64_lossy(),
                b[0].to_f64_lossy(),
                b[1].to_f64_lossy(),
                c[0].to_f64_lossy(),
                c[1].to_f64_lossy(),
            );
            if s == 0 {
                continue;
            }
            if sign == 0 {
                sign = s;
            } else if s != sign {
                return Err(Error::InvalidGeometry("polygon is not convex".into()));
            }
        }
        Ok(SetSpec::ConvexPolygon { vertices })
    }

    /// Axis-aligned rectangle [lo, hi] as a convex polygon (n = 2).
    pub fn rectangle(lo: &VecN<T>, hi: &VecN<T>) -> Result<Self> {
        if !(hi[0] > lo[0] && hi[1] > lo[1]) {
            return Err(Error::InvalidGeometry("rectangle needs lo < hi".into()));
        }
        Self::convex_polygon(vec![
            VecN::from_slice(&[lo[0], lo[1]]),
            VecN::from_slice(&[hi[0], lo[1]]),
            VecN::from_slice(&[hi[0], hi[1]]),
            VecN::from_slice(&[lo[0], hi[1]]),
        ])
    }

    pub fn complement(inner: SetSpec<T>) -> Self {
        SetSpec::Complement(Box::new(inner))
    }

    pub fn intersection(a: SetSpec<T>, b: SetSpec<T>) -> Self {
        SetSpec::Intersection(Box::new(a), Box::new(b))
    }

    pub fn union(a: SetSpec<T>, b: SetSpec<T>) -> Self {
        SetSpec::Union(Box::new(a), Box::new(b))
    }

    /// Koch prefractal: level 0 is the equilateral triangle of unit side,
    /// each level replaces every edge by the four-edge Koch substitution
    /// with the bump pointing outward. Vertex count is 3 * 4^level.
    pub fn koch_prefractal(level: usize) -> Result<Self> {
        if level > 6 {
            return Err(Error::OutOfRange {
                field: "level",
                detail: format!("expected 0 <= level <= 6, got {level}"),
            });
        }
        let s3 = T::of(3.0).sqrt();
        let half = T::of(0.5);
        // counter-clockwise so that interior is left of each edge
        let mut verts: Vec<VecN<T>> = vec![
            VecN::from_slice(&[T::zero(), T::zero()]),
            VecN::from_slice(&[T::one(), T::zero()]),
            VecN::from_slice(&[half, s3 * half]),
        ];
        let third = T::one() / T::of(3.0);
        let bump = s3 / T::of(6.0);
        for _ in 0..level {
            let m = verts.len();
            let mut next = Vec::with_capacity(4 * m);
            for i in 0..m {
                let p = verts[i];
                let q = verts[(i + 1) % m];
                let d = q.sub(&p);
                // outward normal of a CCW loop is the right-hand perpendicular
                let out = VecN::from_slice(&[d[1], -d[0]]);
                let a = p.add(&d.scale(third));
                let b = p.add(&d.scale(T::of(2.0) * third));
                let peak = p.add(&d.scale(half)).add(&out.scale(bump));
                next.push(p);
                next.push(a);
                next.push(peak);
                next.push(b);
            }
            verts = next;
        }
        Self::polygon(verts)
    }

    /// Dimension the shape lives in, when it pins one down.
    pub fn dim_hint(&self) -> Option<usize> {
        match self {
            SetSpec::HalfSpace { point, .. } => Some(point.len()),
            SetSpec::Ball { center, .. } => Some(center.len()),
            SetSpec::IntervalUnion { .. } => Some(1),
            SetSpec::ConvexPolygon { .. } | SetSpec::Polygon { .. } => Some(2),
            SetSpec::Complement(a) => a.dim_hint(),
            SetSpec::Intersection(a, b) | SetSpec::Union(a, b) => {
                a.dim_hint().or_else(|| b.dim_hint())
            }
        }
    }

    /// Exact three-way membership.
    pub fn membership(&self, x: &VecN<T>) -> Membership {
        match self {
            SetSpec::HalfSpace { point, normal } => {
                let s = x.sub(point).dot(normal);
                if s > T::zero() {
                    Membership::Inside
                } else if s < T::zero() {
                    Membership::Outside
                } else {
                    Membership::OnBoundary
                }
            }
            SetSpec::Ball { center, radius } => {
                let d2 = x.sub(center).norm_sq();
                let r2 = *radius * *radius;
                if d2 < r2 {
                    Membership::Inside
                } else if d2 > r2 {
                    Membership::Outside
                } else {
                    Membership::OnBoundary
                }
            }
            SetSpec::IntervalUnion { endpoints } => {
                let t = x[0];
                for &(a, b) in endpoints {
                    if t == a || t == b {
                        return Membership::OnBoundary;
                    }
                    if t > a && t < b {
                        return Membership::Inside;
                    }
                    if t < a {
                        break;
                    }
                }
                Membership::Outside
            }
            SetSpec::ConvexPolygon { vertices } | SetSpec::Polygon { vertices } => {
                polygon_membership(vertices, x)
            }
            SetSpec::Complement(inner) => match inner.membership(x) {
                Membership::Inside => Membership::Outside,
                Membership::Outside => Membership::Inside,
                Membership::OnBoundary => Membership::OnBoundary,
            },
            SetSpec::Intersection(a, b) => match (a.membership(x), b.membership(x)) {
                (Membership::Outside, _) | (_, Membership::Outside) => Membership::Outside,
                (Membership::Inside, Membership::Inside) => Membership::Inside,
                _ => Membership::OnBoundary,
            },
            SetSpec::Union(a, b) => match (a.membership(x), b.membership(x)) {
                (Membership::Inside, _) | (_, Membership::Inside) => Membership::Inside,
                (Membership::Outside, Membership::Outside) => Membership::Outside,
                _ => Membership::OnBoundary,
            },
        }
    }

    pub fn contains(&self, x: &VecN<T>) -> bool {
        self.membership(x) == Membership::Inside
    }

    /// Certified lower bound on the Euclidean distance from x to the
    /// topological boundary; exact on half-spaces, balls and interval unions.
    pub fn boundary_distance(&self, x: &VecN<T>) -> T {
        match self {
            SetSpec::HalfSpace { point, normal } => x.sub(point).dot(normal).abs(),
            SetSpec::Ball { center, radius } => (x.sub(center).norm() - *radius).abs(),
            SetSpec::IntervalUnion { endpoints } => {
                let t = x[0];
                let mut d = T::infinity();
                for &(a, b) in endpoints {
                    d = d.min((t - a).abs());
                    if b.is_finite() {
                        d = d.min((t - b).abs());
                    }
                }
                d
            }
            SetSpec::ConvexPolygon { vertices } | SetSpec::Polygon { vertices } => {
                let mut d = T::infinity();
                let m = vertices.len();
                for i in 0..m {
                    d = d.min(point_segment_distance(x, &vertices[i], &vertices[(i + 1) % m]));
                }
                // shave rounding so the bound stays a lower bound
                d * T::of(1.0 - 1e-12)
            }
            SetSpec::Complement(inner) => inner.boundary_distance(x),
            SetSpec::Intersection(a, b) | SetSpec::Union(a, b) => {
                a.boundary_distance(x).min(b.boundary_distance(x))
            }
        }
    }

    /// Far-field behaviour of the indicator (see [`FarField`]).
    pub fn far_field(&self) -> FarField<T> {
        match self {
            SetSpec::HalfSpace { point, .. } => {
                if point.len() == 1 {
                    // a 1-D half-space is a half-line
                    match self {
                        SetSpec::HalfSpace { point, normal } if normal[0] > T::zero() => {
                            FarField::RightHalfLine { center: point[0], radius: T::zero() }
                        }
                        SetSpec::HalfSpace { point, .. } => {
                            FarField::LeftHalfLine { center: point[0], radius: T::zero() }
                        }
                        _ => unreachable!(),
                    }
                } else {
                    FarField::Varies
                }
            }
            SetSpec::Ball { center, radius } => {
                FarField::Const { center: *center, radius: *radius, value: false }
            }
            SetSpec::IntervalUnion { endpoints } => {
                let lo = endpoints[0].0;
                let hi_end = endpoints.last().unwrap().1;
                if hi_end.is_infinite() {
                    let hi = endpoints.last().unwrap().0;
                    let c = (lo + hi) * T::of(0.5);
                    FarField::RightHalfLine { center: c, radius: (hi - lo) * T::of(0.5) }
                } else {
                    let c = (lo + hi_end) * T::of(0.5);
                    FarField::Const {
                        center: VecN::scalar(c),
                        radius: (hi_end - lo) * T::of(0.5),
                        value: false,
                    }
                }
            }
            SetSpec::ConvexPolygon { vertices } | SetSpec::Polygon { vertices } => {
                let mut c = VecN::zeros(2);
                for v in vertices {
                    c.accumulate(v);
                }
                let c = c.scale(T::one() / T::of_usize(vertices.len()));
                let mut r = T::zero();
                for v in vertices {
                    r = r.max(v.sub(&c).norm());
                }
                FarField::Const { center: c, radius: r, value: false }
            }
            SetSpec::Complement(inner) => match inner.far_field() {
                FarField::Const { center, radius, value } => {
                    FarField::Const { center, radius, value: !value }
                }
                FarField::RightHalfLine { center, radius } => {
                    FarField::LeftHalfLine { center, radius }
                }
                FarField::LeftHalfLine { center, radius } => {
                    FarField::RightHalfLine { center, radius }
                }
                FarField::Varies => FarField::Varies,
            },
            SetSpec::Intersection(a, b) => combine_far(a.far_field(), b.far_field(), false),
            SetSpec::Union(a, b) => combine_far(a.far_field(), b.far_field(), true),
        }
    }

    /// Upper bound on |E| for bounded sets (enclosing-ball volume); exact
    /// values where the shape makes them cheap.
    pub fn volume_upper_bound(&self, n: usize) -> Option<T> {
        match self {
            SetSpec::Ball { radius, .. } => {
                Some(crate::kernel::ball_volume::<T>(n) * radius.powi(n as i32))
            }
            SetSpec::IntervalUnion { endpoints } => {
                let mut v = T::zero();
                for &(a, b) in endpoints {
                    if !b.is_finite() {
                        return None;
                    }
                    v += b - a;
                }
                Some(v)
            }
            _ => match self.far_field() {
                FarField::Const { radius, value: false, .. } => {
                    Some(crate::kernel::ball_volume::<T>(n) * radius.powi(n as i32))
                }
                _ => None,
            },
        }
    }

    /// Translate the set by v.
    pub fn translate(&self, v: &VecN<T>) -> SetSpec<T> {
        match self {
            SetSpec::HalfSpace { point, normal } => {
                SetSpec::HalfSpace { point: point.add(v), normal: *normal }
            }
            SetSpec::Ball { center, radius } => {
                SetSpec::Ball { center: center.add(v), radius: *radius }
            }
            SetSpec::IntervalUnion { endpoints } => SetSpec::IntervalUnion {
                endpoints: endpoints.iter().map(|&(a, b)| (a + v[0], b + v[0])).collect(),
            },
            SetSpec::ConvexPolygon { vertices } => SetSpec::ConvexPolygon {
                vertices: vertices.iter().map(|p| p.add(v)).collect(),
            },
            SetSpec::Polygon { vertices } => SetSpec::Polygon {
                vertices: vertices.iter().map(|p| p.add(v)).collect(),
            },
            SetSpec::Complement(a) => SetSpec::Complement(Box::new(a.translate(v))),
            SetSpec::Intersection(a, b) => {
                SetSpec::Intersection(Box::new(a.translate(v)), Box::new(b.translate(v)))
            }
            SetSpec::Union(a, b) => {
                SetSpec::Union(Box::new(a.translate(v)), Box::new(b.translate(v)))
            }
        }
    }

    /// Scale the set about the origin by s > 0.
    pub fn scale(&self, s: T) -> SetSpec<T> {
        debug_assert!(s > T::zero());
        match self {
            SetSpec::HalfSpace { point, normal } => {
                SetSpec::HalfSpace { point: point.scale(s), normal: *normal }
            }
            SetSpec::Ball { center, radius } => {
                SetSpec::Ball { center: center.scale(s), radius: *radius * s }
            }
            SetSpec::IntervalUnion { endpoints } => SetSpec::IntervalUnion {
                endpoints: endpoints.iter().map(|&(a, b)| (a * s, b * s)).collect(),
            },
            SetSpec::ConvexPolygon { vertices } => SetSpec::ConvexPolygon {
                vertices: vertices.iter().map(|p| p.scale(s)).collect(),
            },
            SetSpec::Polygon { vertices } => SetSpec::Polygon {
                vertices: vertices.iter().map(|p| p.scale(s)).collect(),
            },
            SetSpec::Complement(a) => SetSpec::Complement(Box::new(a.scale(s))),
            SetSpec::Intersection(a, b) => {
                SetSpec::Intersection(Box::new(a.scale(s)), Box::new(b.scale(s)))
            }
            SetSpec::Union(a, b) => SetSpec::Union(Box::new(a.scale(s)), Box::new(b.scale(s))),
        }
    }

    /// The rescaled set (E - x) / r used by blow-up experiments.
    pub fn blowup_at(&self, x: &VecN<T>, r: T) -> SetSpec<T> {
        self.translate(&x.neg()).scale(T::one() / r)
    }
}

fn combine_far<T: Real>(a: FarField<T>, b: FarField<T>, is_union: bool) -> FarField<T> {
    use FarField::*;
    let enclose = |c1: &VecN<T>, r1: T, c2: &VecN<T>, r2: T| -> (VecN<T>, T) {
        // ball around c1 covering both
        (*c1, r1.max(c1.sub(c2).norm() + r2))
    };
    match (a, b) {
        (Varies, _) | (_, Varies) => Varies,
        (Const { center: c1, radius: r1, value: v1 }, Const { center: c2, radius: r2, value: v2 }) => {
            let (center, radius) = enclose(&c1, r1, &c2, r2);
            let value = if is_union { v1 || v2 } else { v1 && v2 };
            Const { center, radius, value }
        }
        // 1-D mixes: represent everything on the line
        (one_d_a, one_d_b) => {
            let seg = |f: &FarField<T>| -> Option<(T, T, bool, bool)> {
                // (center, radius, left value, right value)
                match f {
                    Const { center, radius, value } => Some((center[0], *radius, *value, *value)),
                    RightHalfLine { center, radius } => Some((*center, *radius, false, true)),
                    LeftHalfLine { center, radius } => Some((*center, *radius, true, false)),
                    Varies => None,
                }
            };
            let (c1, r1, l1, q1) = seg(&one_d_a).unwrap();
            let (c2, r2, l2, q2) = seg(&one_d_b).unwrap();
            let lo = (c1 - r1).min(c2 - r2);
            let hi = (c1 + r1).max(c2 + r2);
            let c = (lo + hi) * T::of(0.5);
            let r = (hi - lo) * T::of(0.5);
            let (left, right) = if is_union {
                (l1 || l2, q1 || q2)
            } else {
                (l1 && l2, q1 && q2)
            };
            match (left, right) {
                (false, false) => Const { center: VecN::scalar(c), radius: r, value: false },
                (true, true) => Const { center: VecN::scalar(c), radius: r, value: true },
                (false, true) => RightHalfLine { center: c, radius: r },
                (true, false) => LeftHalfLine { center: c, radius: r },
            }
        }
    }
}

fn polygon_membership<T: Real>(vertices: &[VecN<T>], x: &VecN<T>) -> Membership {
    let px = x[0].to_f64_lossy();
    let py = x[1].to_f64_lossy();
    let m = vertices.len();
    let mut winding = 0i32;
    for i in 0..m {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % m];
        let (ax, ay) = (a[0].to_f64_lossy(), a[1].to_f64_lossy());
        let (bx, by) = (b[0].to_f64_lossy(), b[1].to_f64_lossy());
        if predicates::on_segment(ax, ay, bx, by, px, py) {
            return Membership::OnBoundary;
        }
        if ay <= py {
            if by > py && predicates::orient2d(ax, ay, bx, by, px, py) > 0 {
                winding += 1;
            }
        } else if by <= py && predicates::orient2d(ax, ay, bx, by, px, py) < 0 {
            winding -= 1;
        }
    }
    if winding != 0 {
        Membership::Inside
    } else {
        Membership::Outside
    }
}

fn point_segment_distance<T: Real>(x: &VecN<T>, a: &VecN<T>, b: &VecN<T>) -> T {
    let d = b.sub(a);
    let len2 = d.norm_sq();
    if len2 == T::zero() {
        return x.sub(a).norm();
    }
    let t = x.sub(a).dot(&d) / len2;
    let t = t.max(T::zero()).min(T::one());
    x.sub(&a.add(&d.scale(t))).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v2(x: f64, y: f64) -> VecN<f64> {
        VecN::from_slice(&[x, y])
    }

    fn unit_ball2() -> SetSpec<f64> {
        SetSpec::ball(VecN::zeros(2), 1.0).unwrap()
    }

    fn upper_half() -> SetSpec<f64> {
        SetSpec::half_space(VecN::zeros(2), VecN::basis(2, 1)).unwrap()
    }

    #[test]
    fn membership_primitives() {
        let ball = unit_ball2();
        assert_eq!(ball.membership(&VecN::zeros(2)), Membership::Inside);
        assert_eq!(ball.membership(&v2(1.0, 0.0)), Membership::OnBoundary);
        assert_eq!(ball.membership(&v2(2.0, 0.0)), Membership::Outside);

        let hs = upper_half();
        assert_eq!(hs.membership(&v2(3.0, -1.0)), Membership::Outside);
        assert_eq!(hs.membership(&v2(3.0, 0.0)), Membership::OnBoundary);
        assert_eq!(hs.membership(&v2(3.0, 1e-300)), Membership::Inside);

        let comp = SetSpec::complement(unit_ball2());
        assert_eq!(comp.membership(&VecN::zeros(2)), Membership::Outside);
        assert_eq!(comp.membership(&v2(2.0, 0.0)), Membership::Inside);
    }

    #[test]
    fn membership_intervals() {
        let iu = SetSpec::interval_union(vec![(0.0, 1.0), (2.0, f64::INFINITY)]).unwrap();
        assert_eq!(iu.membership(&VecN::scalar(0.5)), Membership::Inside);
        assert_eq!(iu.membership(&VecN::scalar(1.5)), Membership::Outside);
        assert_eq!(iu.membership(&VecN::scalar(1.0)), Membership::OnBoundary);
        assert_eq!(iu.membership(&VecN::scalar(77.0)), Membership::Inside);
        assert!(SetSpec::interval_union(vec![(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(SetSpec::interval_union(vec![(2.0, 1.0)]).is_err());
        assert!(SetSpec::<f64>::interval_union(vec![]).is_err());
    }

    #[test]
    fn membership_polygon_square() {
        let sq = SetSpec::rectangle(&VecN::zeros(2), &v2(1.0, 1.0)).unwrap();
        assert_eq!(sq.membership(&v2(0.5, 0.5)), Membership::Inside);
        assert_eq!(sq.membership(&v2(0.5, 0.0)), Membership::OnBoundary);
        assert_eq!(sq.membership(&v2(0.0, 0.0)), Membership::OnBoundary);
        assert_eq!(sq.membership(&v2(1.5, 0.5)), Membership::Outside);
        assert_eq!(sq.membership(&v2(-1e-300, 0.5)), Membership::Outside);
    }

    #[test]
    fn boundary_distance_values() {
        let ball = unit_ball2();
        assert!((ball.boundary_distance(&v2(2.0, 0.0)) - 1.0).abs() < 1e-15);
        let hs = SetSpec::half_space(v2(0.0, 1.0), v2(0.0, 2.0)).unwrap();
        assert!((hs.boundary_distance(&v2(7.0, 3.0)) - 2.0).abs() < 1e-15);
        let both = SetSpec::intersection(unit_ball2(), upper_half());
        let d = both.boundary_distance(&v2(0.0, 0.5));
        assert!((d - 0.5).abs() < 1e-15);

        let sq = SetSpec::rectangle(&VecN::zeros(2), &v2(1.0, 1.0)).unwrap();
        let d = sq.boundary_distance(&v2(0.5, 0.25));
        assert!(d <= 0.25 && d > 0.25 * (1.0 - 1e-9));
    }

    #[test]
    fn koch_vertex_counts() {
        for level in 0..=4 {
            let k = SetSpec::<f64>::koch_prefractal(level).unwrap();
            match k {
                SetSpec::Polygon { vertices } => {
                    assert_eq!(vertices.len(), 3 * 4usize.pow(level as u32))
                }
                _ => panic!("koch should be a polygon"),
            }
        }
        assert!(SetSpec::<f64>::koch_prefractal(7).is_err());
    }

    #[test]
    fn koch_contains_incenter_at_every_level() {
        let c = v2(0.5, 3f64.sqrt() / 6.0);
        for level in 0..=5 {
            let k = SetSpec::<f64>::koch_prefractal(level).unwrap();
            assert_eq!(k.membership(&c), Membership::Inside, "level {level}");
        }
    }

    #[test]
    fn far_field_combinations() {
        match unit_ball2().far_field() {
            FarField::Const { radius, value, .. } => {
                assert_eq!(value, false);
                assert!((radius - 1.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        match SetSpec::complement(unit_ball2()).far_field() {
            FarField::Const { value, .. } => assert_eq!(value, true),
            other => panic!("{other:?}"),
        }
        assert_eq!(upper_half().far_field(), FarField::Varies);

        let right = SetSpec::interval_union(vec![(0.0, f64::INFINITY)]).unwrap();
        match right.far_field() {
            FarField::RightHalfLine { .. } => {}
            other => panic!("{other:?}"),
        }
        let left = SetSpec::complement(right.clone());
        match left.far_field() {
            FarField::LeftHalfLine { .. } => {}
            other => panic!("{other:?}"),
        }
        // union of a right and a left half-line covers everything far out
        match SetSpec::union(right.clone(), left.clone()).far_field() {
            FarField::Const { value, .. } => assert_eq!(value, true),
            other => panic!("{other:?}"),
        }
        match SetSpec::intersection(right, left).far_field() {
            FarField::Const { value, .. } => assert_eq!(value, false),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn transforms_compose() {
        let ball = SetSpec::ball(v2(1.0, 0.0), 2.0).unwrap();
        let moved = ball.blowup_at(&v2(1.0, 0.0), 0.5);
        match moved {
            SetSpec::Ball { center, radius } => {
                assert_eq!(center.as_slice(), &[0.0, 0.0]);
                assert_eq!(radius, 4.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn de_morgan_on_samples() {
        let a = unit_ball2();
        let b = SetSpec::rectangle(&v2(-0.5, -0.5), &v2(2.0, 0.7)).unwrap();
        let lhs = SetSpec::complement(SetSpec::intersection(a.clone(), b.clone()));
        let rhs = SetSpec::union(SetSpec::complement(a), SetSpec::complement(b));
        let mut k = 0u32;
        for i in -7..=7 {
            for j in -7..=7 {
                let p = v2(i as f64 * 0.31 + 0.013, j as f64 * 0.27 - 0.007);
                assert_eq!(lhs.membership(&p), rhs.membership(&p), "at {p:?}");
                k += 1;
            }
        }
        assert!(k > 200);
    }

    #[test]
    fn convexity_validation() {
        let tri = vec![v2(0.0, 0.0), v2(1.0, 0.0), v2(0.0, 1.0)];
        assert!(SetSpec::convex_polygon(tri).is_ok());
        let dart = vec![v2(0.0, 0.0), v2(2.0, 0.0), v2(1.0, 0.5), v2(2.0, 2.0)];
        assert!(SetSpec::convex_polygon(dart).is_err());
    }
}
