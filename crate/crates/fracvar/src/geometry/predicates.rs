//! Robust 2-D orientation and on-segment predicates.
//!
//! Fast f64 evaluation with a Shewchuk-style error filter; when the filter
//! cannot certify the sign the determinant is recomputed exactly in rational
//! arithmetic over the (exactly representable) f64 inputs.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;

/// (3 + 16 eps) eps with eps = 2^-53, the standard orient2d filter constant.
const CCW_ERR_BOUND: f64 = 3.330_669_073_875_471_6e-16;

/// Sign of the cross product (b - a) x (p - a): +1 if p lies to the left of
/// the directed line a -> b, -1 to the right, 0 if exactly collinear.
pub fn orient2d(ax: f64, ay: f64, bx: f64, by: f64, px: f64, py: f64) -> i8 {
    let detleft = (bx - ax) * (py - ay);
    let detright = (by - ay) * (px - ax);
    let det = detleft - detright;
    let detsum = detleft.abs() + detright.abs();
    if det.abs() >= CCW_ERR_BOUND * detsum {
        return if det > 0.0 {
            1
        } else if det < 0.0 {
            -1
        } else {
            0
        };
    }
    orient2d_exact(ax, ay, bx, by, px, py)
}

fn big(x: f64) -> Ratio<BigInt> {
    Ratio::from_float(x).expect("finite coordinate")
}

fn orient2d_exact(ax: f64, ay: f64, bx: f64, by: f64, px: f64, py: f64) -> i8 {
    let det = (big(bx) - big(ax)) * (big(py) - big(ay))
        - (big(by) - big(ay)) * (big(px) - big(ax));
    if det.is_zero() {
        0
    } else if det > Ratio::zero() {
        1
    } else {
        -1
    }
}

/// Exact test for p lying on the closed segment [a, b].
pub fn on_segment(ax: f64, ay: f64, bx: f64, by: f64, px: f64, py: f64) -> bool {
    if orient2d(ax, ay, bx, by, px, py) != 0 {
        return false;
    }
    px >= ax.min(bx) && px <= ax.max(bx) && py >= ay.min(by) && py <= ay.max(by)
}
