//! Small stack vector for points and estimate components.
//!
//! Ambient dimension is at most 3; estimates occasionally stack a vector and
//! a scalar into one pass, so the capacity is 4.

use std::ops::{Index, IndexMut};

use crate::scalar::Real;

pub const CAP: usize = 4;

/// Fixed-capacity vector of length `len <= 4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VecN<T> {
    data: [T; CAP],
    len: usize,
}

impl<T: Real> VecN<T> {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= CAP);
        Self { data: [T::zero(); CAP], len }
    }

    pub fn from_slice(s: &[T]) -> Self {
        let mut v = Self::zeros(s.len());
        v.data[..s.len()].copy_from_slice(s);
        v
    }

    pub fn scalar(x: T) -> Self {
        Self::from_slice(&[x])
    }

    /// Standard basis vector `e_axis` in dimension `len`.
    pub fn basis(len: usize, axis: usize) -> Self {
        let mut v = Self::zeros(len);
        v[axis] = T::one();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data[..self.len]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.as_slice().iter()
    }

    pub fn push(&mut self, x: T) {
        assert!(self.len < CAP);
        self.data[self.len] = x;
        self.len += 1;
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.len, rhs.len);
        let mut out = *self;
        for i in 0..self.len {
            out.data[i] += rhs.data[i];
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.len, rhs.len);
        let mut out = *self;
        for i in 0..self.len {
            out.data[i] -= rhs.data[i];
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        for i in 0..self.len {
            out.data[i] *= s;
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    pub fn dot(&self, rhs: &Self) -> T {
        debug_assert_eq!(self.len, rhs.len);
        let mut acc = T::zero();
        for i in 0..self.len {
            acc += self.data[i] * rhs.data[i];
        }
        acc
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    /// Max-norm distance, used for enclosing-box logic.
    pub fn inf_norm(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.len {
            m = m.max(self.data[i].abs());
        }
        m
    }

    pub fn normalized(&self) -> Self {
        self.scale(T::one() / self.norm())
    }

    pub fn accumulate(&mut self, rhs: &Self) {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..self.len {
            self.data[i] += rhs.data[i];
        }
    }
}

impl<T: Real> Index<usize> for VecN<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        debug_assert!(i < self.len);
        &self.data[i]
    }
}

impl<T: Real> IndexMut<usize> for VecN<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        debug_assert!(i < self.len);
        &mut self.data[i]
    }
}

/// Pairwise summation over a fixed tree: the reduction order depends only on
/// the slice order, never on scheduling, so concurrent producers stay
/// reproducible.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    if xs.len() <= 8 {
        let mut acc = T::zero();
        for &x in xs {
            acc += x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Componentwise pairwise summation of vectors.
pub fn pairwise_sum_vec<T: Real>(xs: &[VecN<T>], len: usize) -> VecN<T> {
    if xs.is_empty() {
        return VecN::zeros(len);
    }
    if xs.len() <= 8 {
        let mut acc = VecN::zeros(len);
        for x in xs {
            acc.accumulate(x);
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum_vec(&xs[..mid], len).add(&pairwise_sum_vec(&xs[mid..], len))
    }
}
