//! Deterministic adaptive cubature over dyadic cells.
//!
//! One engine serves both the singular-kernel integrals and the volume
//! integrals of the analysis layer; problems describe themselves through
//! [`CellIntegrand`]. Cells are hypercubes refined in rounds; within a round
//! children are evaluated concurrently but collected in cell order, and all
//! reductions run over a fixed pairwise tree, so results do not depend on
//! scheduling.

use rayon::prelude::*;

use crate::scalar::Real;
use crate::vecn::{pairwise_sum, pairwise_sum_vec, VecN};

/// How the integrand behaves on a cell.
#[derive(Clone, Copy, Debug)]
pub enum CellClass<T> {
    /// Identically zero; the cell is dropped.
    Zero,
    /// Smooth enough for the midpoint rule with a two-level error estimate.
    Smooth,
    /// Bounded with a possible jump inside (indicator straddle): midpoint
    /// value, error charged as `sup` times volume.
    Jump { sup: T },
    /// Possibly unbounded (boundary blow-up): no evaluation, the caller
    /// supplies an integrated bound over the cell.
    Unbounded { bound: T },
}

pub trait CellIntegrand<T: Real>: Sync {
    fn dim(&self) -> usize;
    fn out_len(&self) -> usize;
    /// Integrand value and propagated pointwise error bar at y.
    fn eval(&self, y: &VecN<T>) -> (VecN<T>, T);
    fn classify(&self, center: &VecN<T>, half: T) -> CellClass<T>;
}

struct Leaf<T> {
    center: VecN<T>,
    half: T,
    value: VecN<T>,
    /// quadrature error estimate (or bound) for this cell
    err: T,
    /// integrated pointwise bars propagated from the integrand
    bar: T,
    evals: u64,
    refinable: bool,
}

pub struct EngineResult<T> {
    pub value: VecN<T>,
    pub err: T,
    pub bar: T,
    pub evals: u64,
    pub within_tol: bool,
    pub cells: usize,
}

fn child_centers<T: Real>(center: &VecN<T>, half: T, dim: usize) -> Vec<VecN<T>> {
    let q = half * T::of(0.5);
    let mut out = Vec::with_capacity(1 << dim);
    for mask in 0..(1usize << dim) {
        let mut c = *center;
        for axis in 0..dim {
            let sign = if mask >> axis & 1 == 1 { T::one() } else { -T::one() };
            c[axis] = c[axis] + sign * q;
        }
        out.push(c);
    }
    out
}

fn eval_cell<T: Real, P: CellIntegrand<T> + ?Sized>(
    p: &P,
    center: VecN<T>,
    half: T,
    min_half: T,
) -> Option<Leaf<T>> {
    let dim = p.dim();
    let vol = (half + half).powi(dim as i32);
    let refinable = half > min_half * T::of(1.0 + 1e-9);
    match p.classify(&center, half) {
        CellClass::Zero => None,
        CellClass::Unbounded { bound } => {
            // the integrated bound certifies the cell either way; a finite
            // midpoint sample removes most of the value bias
            let (v, bar) = p.eval(&center);
            let usable = v.norm().is_finite() && bar.is_finite();
            let value = if usable { v.scale(vol) } else { VecN::zeros(p.out_len()) };
            Some(Leaf {
                center,
                half,
                err: bound + value.norm(),
                bar: if usable { bar * vol } else { T::zero() },
                value,
                evals: 1,
                refinable,
            })
        }
        CellClass::Jump { sup } => {
            let (v, bar) = p.eval(&center);
            Some(Leaf {
                center,
                half,
                value: v.scale(vol),
                err: (sup + v.norm()) * vol,
                bar: bar * vol,
                evals: 1,
                refinable,
            })
        }
        CellClass::Smooth => {
            let (v0, bar0) = p.eval(&center);
            let children = child_centers(&center, half, dim);
            let mut mean = VecN::zeros(p.out_len());
            let mut barsum = bar0;
            for c in &children {
                let (v, b) = p.eval(c);
                mean.accumulate(&v);
                barsum += b;
            }
            let k = T::of_usize(children.len());
            mean = mean.scale(T::one() / k);
            let err = mean.sub(&v0).norm() * vol;
            // Richardson over the midpoint pair: I = (4 C - M) / 3 + O(h^4)
            let third = T::one() / T::of(3.0);
            let value = mean.add(&mean.sub(&v0).scale(third)).scale(vol);
            Some(Leaf {
                center,
                half,
                value,
                err,
                bar: barsum / (k + T::one()) * vol,
                evals: 1 + children.len() as u64,
                refinable,
            })
        }
    }
}

/// Heap key: worst error first, insertion order breaking ties, so the pop
/// sequence is a pure function of the inputs.
struct HeapItem<T> {
    err: T,
    idx: usize,
}

impl<T: Real> PartialEq for HeapItem<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.idx == other.idx
    }
}
impl<T: Real> Eq for HeapItem<T> {}
impl<T: Real> PartialOrd for HeapItem<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for HeapItem<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // errors are finite by construction
        self.err
            .partial_cmp(&other.err)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(other.idx.cmp(&self.idx))
    }
}

/// Adaptive integration over the box of the given center and half-width.
///
/// `rel_tol` targets `err <= rel_tol * |value|`; refinement stops early when
/// no cell may be split further (max_depth) or `max_cells` is reached, in
/// which case the result is flagged. Worst cells are refined in batches;
/// batches evaluate concurrently but are appended in pop order, and the
/// final reduction is a fixed pairwise tree over the leaf arena.
pub fn integrate<T: Real, P: CellIntegrand<T> + ?Sized>(
    p: &P,
    center: VecN<T>,
    half: T,
    min_half: T,
    rel_tol: T,
    max_cells: usize,
) -> EngineResult<T> {
    use std::collections::BinaryHeap;

    let dim = p.dim();
    let out_len = p.out_len();
    // start from a fixed 2^dim split so the root never sits on symmetry axes
    let mut arena: Vec<Option<Leaf<T>>> = child_centers(&center, half, dim)
        .into_par_iter()
        .filter_map(|c| eval_cell(p, c, half * T::of(0.5), min_half))
        .collect::<Vec<_>>()
        .into_iter()
        .map(Some)
        .collect();
    let mut evals: u64 = arena.iter().flatten().map(|l| l.evals).sum();

    let mut heap = BinaryHeap::new();
    let mut run_value = VecN::zeros(out_len);
    let mut run_err = T::zero();
    let mut live = 0usize;
    for (idx, leaf) in arena.iter().enumerate() {
        let leaf = leaf.as_ref().unwrap();
        run_value.accumulate(&leaf.value);
        run_err += leaf.err;
        live += 1;
        if leaf.refinable {
            heap.push(HeapItem { err: leaf.err, idx });
        }
    }

    let mut batch: Vec<Leaf<T>> = Vec::new();
    let within_tol = loop {
        let target = rel_tol * run_value.norm();
        if run_err <= target {
            break true;
        }
        let Some(top) = heap.peek() else { break run_err <= target };
        let floor = target / T::of_usize(live.max(1) * 8);
        if top.err <= floor || live >= max_cells {
            break run_err <= target;
        }
        let cut = (top.err * T::of(0.0625)).max(floor);

        batch.clear();
        while let Some(item) = heap.peek() {
            if item.err < cut || batch.len() >= 8192 {
                break;
            }
            let item = heap.pop().unwrap();
            if let Some(leaf) = arena[item.idx].take() {
                run_err -= leaf.err;
                run_value = run_value.sub(&leaf.value);
                live -= 1;
                batch.push(leaf);
            }
        }
        if batch.is_empty() {
            break run_err <= target;
        }

        let groups: Vec<Vec<Leaf<T>>> = batch
            .par_iter()
            .map(|l| {
                child_centers(&l.center, l.half, dim)
                    .into_iter()
                    .filter_map(|c| eval_cell(p, c, l.half * T::of(0.5), min_half))
                    .collect()
            })
            .collect();
        for group in groups {
            for leaf in group {
                evals += leaf.evals;
                run_err += leaf.err;
                run_value.accumulate(&leaf.value);
                live += 1;
                if leaf.refinable {
                    heap.push(HeapItem { err: leaf.err, idx: arena.len() });
                }
                arena.push(Some(leaf));
            }
        }
    };

    // exact fixed-tree reduction over the surviving leaves
    let leaves: Vec<&Leaf<T>> = arena.iter().flatten().collect();
    let value =
        pairwise_sum_vec(&leaves.iter().map(|l| l.value).collect::<Vec<_>>(), out_len);
    let err = pairwise_sum(&leaves.iter().map(|l| l.err).collect::<Vec<_>>());
    let bar = pairwise_sum(&leaves.iter().map(|l| l.bar).collect::<Vec<_>>());
    let ok = if within_tol { err <= rel_tol * value.norm() || err <= T::zero() } else { false };
    EngineResult { value, err, bar, evals, within_tol: ok || (leaves.is_empty()), cells: leaves.len() }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Poly2;
    impl CellIntegrand<f64> for Poly2 {
        fn dim(&self) -> usize {
            2
        }
        fn out_len(&self) -> usize {
            1
        }
        fn eval(&self, y: &VecN<f64>) -> (VecN<f64>, f64) {
            (VecN::scalar(y[0] * y[0] + y[1].sin()), 0.0)
        }
        fn classify(&self, _c: &VecN<f64>, _h: f64) -> CellClass<f64> {
            CellClass::Smooth
        }
    }

    #[test]
    fn smooth_polynomial_integral() {
        // int over [-1,1]^2 of x^2 + sin(y) = 4/3
        let r = integrate(&Poly2, VecN::zeros(2), 1.0, 1e-5, 1e-5, 200_000);
        assert!(r.within_tol, "err {} value {}", r.err, r.value[0]);
        assert!((r.value[0] - 4.0 / 3.0).abs() < 1e-8, "got {}", r.value[0]);
        assert!((r.value[0] - 4.0 / 3.0).abs() <= r.err + 1e-12);
    }

    struct Disc;
    impl CellIntegrand<f64> for Disc {
        fn dim(&self) -> usize {
            1
        }
        fn out_len(&self) -> usize {
            1
        }
        fn eval(&self, y: &VecN<f64>) -> (VecN<f64>, f64) {
            (VecN::scalar(if y[0] > 0.3 { 1.0 } else { 0.0 }), 0.0)
        }
        fn classify(&self, c: &VecN<f64>, h: f64) -> CellClass<f64> {
            if c[0] - h > 0.3 || c[0] + h < 0.3 {
                if c[0] > 0.3 {
                    CellClass::Smooth
                } else {
                    CellClass::Zero
                }
            } else {
                CellClass::Jump { sup: 1.0 }
            }
        }
    }

    #[test]
    fn jump_integrand_converges_with_depth() {
        // int over [-1,1] of 1_{x>0.3} = 0.7
        let shallow = integrate(&Disc, VecN::zeros(1), 1.0, 0.25 * 0.5f64.powi(4), 1e-6, 100_000);
        let deep = integrate(&Disc, VecN::zeros(1), 1.0, 0.25 * 0.5f64.powi(12), 1e-6, 100_000);
        assert!((deep.value[0] - 0.7).abs() < 1e-3);
        assert!(deep.err < shallow.err / 8.0, "{} vs {}", deep.err, shallow.err);
        assert!((deep.value[0] - 0.7).abs() <= deep.err);
    }

    #[test]
    fn deterministic_across_runs() {
        let a = integrate(&Poly2, VecN::zeros(2), 1.0, 1e-4, 1e-10, 100_000);
        let b = integrate(&Poly2, VecN::zeros(2), 1.0, 1e-4, 1e-10, 100_000);
        assert_eq!(a.value[0], b.value[0]);
        assert_eq!(a.err, b.err);
        assert_eq!(a.evals, b.evals);
    }
}
