//! Square complex matrices and the unitary wrapper used for `2^n x 2^n` operators.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::{tol, Error, Result};

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix entry by entry, rows in parallel.
    pub fn from_fn<F>(dim: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> Complex64 + Sync,
    {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        data.par_chunks_mut(dim.max(1))
            .enumerate()
            .for_each(|(row, out)| {
                for (col, v) in out.iter_mut().enumerate() {
                    *v = f(row, col);
                }
            });
        Self { dim, data }
    }

    /// Builds a matrix column by column, columns in parallel.
    pub fn from_columns<F>(dim: usize, f: F) -> Self
    where
        F: Fn(usize) -> Vec<Complex64> + Sync,
    {
        let cols: Vec<Vec<Complex64>> = (0..dim).into_par_iter().map(&f).collect();
        let mut m = Self::zeros(dim);
        for (col, values) in cols.into_iter().enumerate() {
            debug_assert_eq!(values.len(), dim);
            for (row, v) in values.into_iter().enumerate() {
                m[(row, col)] = v;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        data.par_chunks_mut(n.max(1))
            .enumerate()
            .for_each(|(r, out)| {
                let lhs_row = self.row(r);
                for (k, &a) in lhs_row.iter().enumerate() {
                    if a == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (o, &b) in out.iter_mut().zip(rhs.row(k)) {
                        *o += a * b;
                    }
                }
            });
        Ok(Self { dim: n, data })
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok((0..self.dim)
            .into_par_iter()
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Kronecker product `self ⊗ rhs` in standard (left factor = high index) order.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        Self::from_fn(a * b, |r, c| self[(r / b, c / b)] * rhs[(r % b, c % b)])
    }

    /// `max |self - other|` over entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `||M^† M - I||_max`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut worst: f64 = 0.0;
                for j in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        acc += self[(k, i)].conj() * self[(k, j)];
                    }
                    if i == j {
                        acc -= 1.0;
                    }
                    worst = worst.max(acc.norm());
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// A `2^n x 2^n` unitary with `m[(y, x)] = <y|U|x>`.
///
/// Constructed either from untrusted entries through [`DenseUnitary::new`],
/// which checks `||M^† M - I||_max < 1e-9`, or by the builders in this crate,
/// which produce unitaries by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary {
    n: usize,
    m: CMatrix,
}

impl DenseUnitary {
    pub fn new(n: usize, m: CMatrix) -> Result<Self> {
        let u = Self::trusted(n, m)?;
        let deviation = u.m.unitarity_error();
        if deviation >= tol::STATE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(u)
    }

    pub(crate) fn trusted(n: usize, m: CMatrix) -> Result<Self> {
        if m.dim() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: m.dim(),
            });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            m: self.m.adjoint(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m.max_abs_diff(&other.m)
    }

    pub fn unitarity_error(&self) -> f64 {
        self.m.unitarity_error()
    }
}

impl Index<(usize, usize)> for DenseUnitary {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.m[idx]
    }
}
