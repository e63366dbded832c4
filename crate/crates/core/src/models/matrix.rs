use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};

use crate::frames::{format_rational, Rational};

/// Dense square matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    size: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(size: usize) -> Self {
        RationalMatrix { size, data: vec![Rational::zero(); size * size] }
    }

    pub fn identity(size: usize) -> Self {
        Self::diagonal((0..size).map(|_| Rational::one()).collect())
    }

    pub fn diagonal(entries: Vec<Rational>) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let data = (0..size * size).map(|k| f(k / size, k % size)).collect();
        RationalMatrix { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.size + col] = value;
    }

    pub fn column_sums(&self) -> Vec<Rational> {
        (0..self.size).map(|c| (0..self.size).map(|r| self.get(r, c)).sum()).collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.size);
        (0..self.size)
            .map(|r| (0..self.size).filter(|&c| !self.get(r, c).is_zero()).map(|c| self.get(r, c) * &v[c]).sum())
            .collect()
    }

    /// `self^k` by repeated multiplication.
    pub fn pow(&self, k: u32) -> RationalMatrix {
        (0..k).fold(Self::identity(self.size), |acc, _| &acc * self)
    }

    /// Exact Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        let n = self.size;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let scale = Rational::one() / a.get(col, col);
            a.scale_row(col, &scale);
            inv.scale_row(col, &scale);
            for r in (0..n).filter(|&r| r != col) {
                let factor = a.get(r, col).clone();
                if !factor.is_zero() {
                    a.sub_row_multiple(r, col, &factor);
                    inv.sub_row_multiple(r, col, &factor);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.size {
            self.data.swap(a * self.size + c, b * self.size + c);
        }
    }

    fn scale_row(&mut self, row: usize, factor: &Rational) {
        for c in 0..self.size {
            let v = self.get(row, c) * factor;
            self.set(row, c, v);
        }
    }

    /// `row_target -= factor * row_source`
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &Rational) {
        for c in 0..self.size {
            let v = self.get(target, c) - self.get(source, c) * factor;
            self.set(target, c, v);
        }
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.size, rhs.size);
        let n = self.size;
        let mut out = RationalMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.size).map(|r| (0..self.size).map(|c| format_rational(self.get(r, c))).collect()).collect();
        f.debug_list().entries(rows).finish()
    }
}
