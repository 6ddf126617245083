//! Dense linear algebra over a [`Field`]: matrices, subspaces in reduced row-echelon
//! form, operator closures, invariant-subspace fixpoints, quotients and spectral idempotents.

mod invariant;
mod spectral;
mod subspace;

use std::fmt;

use rayon::prelude::*;

pub use invariant::{closure_under, largest_invariant_in, quotient_action, quotient_basis, QuotientBasis};
pub use spectral::{charpoly, distinct_eigenvalues, is_diagonalizable, lagrange_idempotents};
pub use subspace::{inverse, rank, rref, solve, Subspace};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
    ctx: F::Ctx,
}

/// Products of at least this many rows are split across threads.
const PAR_ROWS: usize = 16;

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize, ctx: &F::Ctx) -> Self {
        Matrix { rows, cols, data: vec![F::zero(ctx); rows * cols], ctx: ctx.clone() }
    }

    pub fn identity(n: usize, ctx: &F::Ctx) -> Self {
        Self::scalar(n, &F::one(ctx))
    }

    /// `s·I`.
    pub fn scalar(n: usize, s: &F) -> Self {
        let mut m = Self::zeros(n, n, &s.ctx());
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    pub fn diag(entries: &[F], ctx: &F::Ctx) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n, ctx);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, ctx: &F::Ctx) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect(), ctx: ctx.clone() })
    }

    pub fn from_fn(rows: usize, cols: usize, ctx: &F::Ctx, f: impl Fn(usize, usize) -> F) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data, ctx: ctx.clone() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>], rows: usize, ctx: &F::Ctx) -> Self {
        Self::from_fn(rows, cols.len(), ctx, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    /// Product; panics on a dimension mismatch (see [`Matrix::checked_mul`]).
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("matrix product dimension mismatch")
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = other.cols;
        let row_product = |i: usize| -> Vec<F> {
            let mut out = vec![F::zero(&self.ctx); n];
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_exact_zero() {
                    continue;
                }
                for (j, b) in other.row(k).iter().enumerate() {
                    if !b.is_exact_zero() {
                        out[j] = out[j].add(&a.mul(b));
                    }
                }
            }
            out
        };
        let rows: Vec<Vec<F>> = if self.rows >= PAR_ROWS {
            (0..self.rows).into_par_iter().map(row_product).collect()
        } else {
            (0..self.rows).map(row_product).collect()
        };
        Ok(Matrix { rows: self.rows, cols: n, data: rows.into_iter().flatten().collect(), ctx: self.ctx.clone() })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(F::zero(&self.ctx), |acc, (a, b)| {
                    if a.is_exact_zero() || b.is_exact_zero() {
                        acc
                    } else {
                        acc.add(&a.mul(b))
                    }
                })
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols, "matrix shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, ctx: self.ctx.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, s: &F) -> Self {
        let data = self.data.iter().map(|a| if a.is_exact_zero() { a.clone() } else { a.mul(s) }).collect();
        Matrix { rows: self.rows, cols: self.cols, data, ctx: self.ctx.clone() }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| a.neg()).collect();
        Matrix { rows: self.rows, cols: self.cols, data, ctx: self.ctx.clone() }
    }

    /// `self + s·I`.
    pub fn add_scalar(&self, s: &F) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let k = i * self.cols + i;
            m.data[k] = m.data[k].add(s);
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.ctx, |i, j| self.get(j, i).clone())
    }

    pub fn powi(&self, n: usize) -> Self {
        (0..n).fold(Self::identity(self.rows, &self.ctx), |acc, _| acc.mul(self))
    }

    /// `[self, other] = self·other - other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Tensor product in which `self` acts on the low-order index:
    /// the basis vector `x_a ⊗ y_b` has index `a + dim(x)·b`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (r1, c1) = (self.rows, self.cols);
        Self::from_fn(r1 * other.rows, c1 * other.cols, &self.ctx, |i, j| {
            let (a, b) = (i % r1, i / r1);
            let (a2, b2) = (j % c1, j / c1);
            let x = self.get(a, a2);
            let y = other.get(b, b2);
            if x.is_exact_zero() || y.is_exact_zero() {
                F::zero(&self.ctx)
            } else {
                x.mul(y)
            }
        })
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Self::from_fn(r, c, &self.ctx, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                F::zero(&self.ctx)
            }
        })
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    /// Every entry negligible relative to `scale`.
    pub fn is_negligible(&self, scale: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(scale))
    }

    /// Zero test relative to the matrix's own largest entry scale (at least 1).
    pub fn is_zero(&self) -> bool {
        self.is_negligible(1.0)
    }

    /// Entrywise comparison relative to `scale` (exact equality on exact backends).
    pub fn approx_eq_scaled(&self, other: &Self, scale: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, scale))
    }

    /// Entrywise comparison relative to the larger of the two matrices' entries.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let scale = self.max_magnitude().max(other.max_magnitude()).max(1.0);
        self.approx_eq_scaled(other, scale)
    }

    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), ctx: ctx.clone() }
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect()
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::{parse_rational, RBig};

    pub(crate) fn m(rows: &[&[&str]]) -> Matrix<RBig> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_rational(s).unwrap()).collect()).collect(), &())
            .unwrap()
    }

    #[test]
    fn products() {
        let a = m(&[&["1", "2"], &["3", "4"]]);
        let b = m(&[&["0", "1"], &["1", "0"]]);
        assert_eq!(a.mul(&b), m(&[&["2", "1"], &["4", "3"]]));
        assert!(a.checked_mul(&m(&[&["1", "2", "3"]])).is_err());
        assert_eq!(a.commutator(&a), Matrix::zeros(2, 2, &()));
        assert_eq!(a.powi(0), Matrix::identity(2, &()));
    }

    #[test]
    fn tensor_low_order_first() {
        let x = m(&[&["0", "0"], &["1", "0"]]);
        let id = Matrix::<RBig>::identity(2, &());
        // x ⊗ 1 maps index 0 (x_0⊗y_0) to index 1 (x_1⊗y_0)
        let t = x.tensor(&id);
        assert_eq!(t.get(1, 0), &RBig::ONE);
        assert_eq!(t.get(3, 2), &RBig::ONE);
        let u = id.tensor(&x);
        assert_eq!(u.get(2, 0), &RBig::ONE);
    }

    #[test]
    fn parallel_product_matches_serial() {
        let n = 20;
        let a = Matrix::<RBig>::from_fn(n, n, &(), |i, j| RBig::from((i * 7 + j * 3) as i64 % 5 - 2));
        let b = a.transpose();
        let p = a.mul(&b);
        for i in 0..n {
            for j in 0..n {
                let s = (0..n).fold(RBig::ZERO, |acc, k| acc + a.get(i, k) * b.get(k, j));
                assert_eq!(p.get(i, j), &s);
            }
        }
    }
}
