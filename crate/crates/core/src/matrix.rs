//! Dense square matrices and the handful of kernels the rest of the crate
//! needs: determinant, inversion and a term-by-term geometric series.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Square matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T> {
    order: usize,
    entries: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(order: usize) -> Self {
        DenseMatrix { order, entries: vec![T::zero(); order * order] }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for (row, values) in rows.into_iter().enumerate() {
            if values.len() != order {
                return Err(Error::NotSquare { rows: order, row, cols: values.len() });
            }
            entries.extend(values);
        }
        Ok(DenseMatrix { order, entries })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.order.max(1)).take(self.order)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(<[T]>::to_vec).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix { order: self.order, entries: self.entries.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|x| x.clone() * factor.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "order mismatch");
        let n = self.order;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, exponent: usize) -> Self {
        (0..exponent).fold(Self::identity(self.order), |acc, _| acc.mul(self))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn row_sums(&self) -> Vec<T> {
        self.rows()
            .map(|row| row.iter().cloned().fold(T::zero(), |acc, x| acc + x))
            .collect()
    }

    /// Largest absolute entry, as f64.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum (the induced ∞-norm), as f64.
    pub fn norm_inf(&self) -> f64 {
        self.rows()
            .map(|row| row.iter().map(|x| x.abs().to_f64()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// The principal submatrix with row and column `removed` deleted.
    pub fn without(&self, removed: usize) -> Self {
        let keep: Vec<usize> = (0..self.order).filter(|&v| v != removed).collect();
        Self::from_fn(keep.len(), |i, j| self[(keep[i], keep[j])].clone())
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!(self.order, other.order, "order mismatch");
        DenseMatrix {
            order: self.order,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.order + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.order + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.entries.chunks(self.order.max(1)).take(self.order).collect();
        f.debug_struct("DenseMatrix").field("order", &self.order).field("rows", &rows).finish()
    }
}

pub fn determinant<T: Scalar>(m: &DenseMatrix<T>) -> T {
    T::determinant(m)
}

/// Gauss-Jordan inversion with partial pivoting.
///
/// In exact mode only a zero pivot counts as singular; in float mode a pivot
/// below `1e-12` times the largest entry of its original row does.
pub fn invert<T: Scalar>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let n = m.order();
    let row_scale: Vec<T> = m
        .rows()
        .map(|row| row.iter().map(Signed::abs).fold(T::zero(), |a, b| if b > a { b } else { a }))
        .collect();
    let mut a = m.to_rows();
    let mut inv = DenseMatrix::<T>::identity(n).to_rows();
    let mut scale = row_scale;

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or(Error::SingularMatrix)?;
        if a[pivot][col].is_zero() || T::negligible_pivot(&a[pivot][col], &scale[pivot]) {
            return Err(Error::SingularMatrix);
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        scale.swap(col, pivot);

        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                if !a[col][j].is_zero() {
                    a[r][j] = a[r][j].clone() - factor.clone() * a[col][j].clone();
                }
                if !inv[col][j].is_zero() {
                    inv[r][j] = inv[r][j].clone() - factor.clone() * inv[col][j].clone();
                }
            }
        }
    }
    DenseMatrix::from_rows(inv)
}

/// Result of [`geometric_series`].
#[derive(Debug, Clone)]
pub struct GeometricSeries<T> {
    /// `Σ_{k<terms_used} M^k`.
    pub sum: DenseMatrix<T>,
    pub terms_used: usize,
    /// ∞-norm of the last term added, `‖M^(terms_used-1)‖_∞`.
    pub last_term_norm: f64,
}

/// Sums `I + M + M² + …` term by term.
///
/// A term is added only while its largest absolute entry is at least
/// `tolerance`; the first term below it stops the summation and is not added.
/// `M = 0` therefore gives `I` with one term used.
pub fn geometric_series<T: Scalar>(
    m: &DenseMatrix<T>,
    tolerance: f64,
    max_terms: usize,
) -> Result<GeometricSeries<T>> {
    if !(tolerance > 0.0) {
        return Err(Error::BadParameters(format!("tolerance must be positive, got {tolerance}")));
    }
    let n = m.order();
    let mut term = DenseMatrix::identity(n);
    let mut sum = DenseMatrix::zeros(n);
    let mut terms_used = 0;
    let mut last_term_norm = 0.0;
    loop {
        let size = term.max_abs();
        if size < tolerance {
            return Ok(GeometricSeries { sum, terms_used, last_term_norm });
        }
        if terms_used == max_terms {
            return Err(Error::NotConverged { terms: max_terms, norm: size });
        }
        sum = sum.add(&term);
        terms_used += 1;
        last_term_norm = term.norm_inf();
        term = term.mul(m);
    }
}
