//! Monte Carlo Lebesgue-density diagnostics: estimates |E ∩ B_r(x)| / |B_r(x)|
//! along a ladder of radii and classifies the point by the density thresholds.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::SetSpec;
use crate::scalar::Real;
use crate::vecn::VecN;

pub const DENSITY0_THRESHOLD: f64 = 0.01;
pub const DENSITY1_THRESHOLD: f64 = 0.99;
const INCONCLUSIVE_SE: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityClass {
    Density0,
    Density1,
    EssentialBoundary,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct DensityReport<T> {
    pub point: VecN<T>,
    pub radii: Vec<T>,
    pub fractions: Vec<T>,
    pub std_errors: Vec<T>,
    pub classification: DensityClass,
}

/// Uniform sample in the ball B_r(x): uniform direction, radius r * U^{1/n}.
pub fn sample_in_ball<T: Real, R: Rng>(rng: &mut R, x: &VecN<T>, r: T) -> VecN<T> {
    let n = x.len();
    let dir = sample_direction::<T, R>(rng, n);
    let u: T = rng.gen_range(T::zero()..T::one());
    let radius = r * u.powf(T::one() / T::of_usize(n));
    x.add(&dir.scale(radius))
}

/// Uniform direction on the unit sphere, n = 1, 2, 3.
pub fn sample_direction<T: Real, R: Rng>(rng: &mut R, n: usize) -> VecN<T> {
    let two_pi = T::of(std::f64::consts::TAU);
    match n {
        1 => {
            let s: bool = rng.gen();
            VecN::scalar(if s { T::one() } else { -T::one() })
        }
        2 => {
            let th: T = rng.gen_range(T::zero()..two_pi);
            VecN::from_slice(&[th.cos(), th.sin()])
        }
        3 => {
            let u: T = rng.gen_range(-T::one()..T::one());
            let ph: T = rng.gen_range(T::zero()..two_pi);
            let s = (T::one() - u * u).max(T::zero()).sqrt();
            VecN::from_slice(&[s * ph.cos(), s * ph.sin(), u])
        }
        _ => unreachable!("dimension capped at 3"),
    }
}

/// Estimate the density fractions of E at x along strictly decreasing radii.
/// Deterministic for a fixed seed; classification uses the smallest radius.
pub fn density_profile<T: Real>(
    set: &SetSpec<T>,
    x: &VecN<T>,
    radii: &[T],
    samples_per_radius: usize,
    seed: u64,
) -> Result<DensityReport<T>> {
    if radii.is_empty() {
        return Err(Error::InvalidGeometry("density_profile needs at least one radius".into()));
    }
    let mut prev = T::infinity();
    for &r in radii {
        if !(r > T::zero() && r < prev) {
            return Err(Error::InvalidGeometry(
                "density radii must be positive and strictly decreasing".into(),
            ));
        }
        prev = r;
    }
    if samples_per_radius == 0 {
        return Err(Error::InvalidGeometry("samples_per_radius must be positive".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fractions = Vec::with_capacity(radii.len());
    let mut std_errors = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut acc = T::zero();
        for _ in 0..samples_per_radius {
            let y = sample_in_ball(&mut rng, x, r);
            acc += set.membership(&y).indicator::<T>();
        }
        let m = T::of_usize(samples_per_radius);
        let p = acc / m;
        fractions.push(p);
        let var = (p * (T::one() - p)).max(T::zero());
        std_errors.push((var / m).sqrt());
    }

    let p_last = *fractions.last().unwrap();
    let se_last = *std_errors.last().unwrap();
    let classification = if se_last > T::of(INCONCLUSIVE_SE) {
        DensityClass::Inconclusive
    } else if p_last < T::of(DENSITY0_THRESHOLD) {
        DensityClass::Density0
    } else if p_last > T::of(DENSITY1_THRESHOLD) {
        DensityClass::Density1
    } else {
        DensityClass::EssentialBoundary
    };

    Ok(DensityReport { point: *x, radii: radii.to_vec(), fractions, std_errors, classification })
}
