use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Reduced row-echelon form of the given rows: the nonzero rows and their pivot columns.
///
/// On inexact backends rows negligible against the largest entry are dropped and the rest
/// scaled to unit max-magnitude; the largest remaining entry in a column is taken as pivot
/// and entries below the tolerance are treated as zero.
pub fn rref<F: Field>(rows: Vec<Vec<F>>, cols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut rows: Vec<Vec<F>> = rows;
    if !F::EXACT {
        let global = rows.iter().flatten().map(|x| x.magnitude()).fold(0.0, f64::max);
        for row in rows.iter_mut() {
            let big = row.iter().max_by(|a, b| a.magnitude().total_cmp(&b.magnitude())).cloned();
            if big.as_ref().is_some_and(|b| b.is_negligible(global)) {
                row.iter_mut().for_each(|x| *x = x.zero_like());
                continue;
            }
            if let Some(inv) = big.and_then(|b| b.inv().ok()) {
                row.iter_mut().for_each(|x| *x = x.mul(&inv));
            }
        }
    }
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == n {
            break;
        }
        let pick = if F::EXACT {
            (r..n).find(|&i| !rows[i][col].is_exact_zero())
        } else {
            let best = (r..n).max_by(|&a, &b| rows[a][col].magnitude().total_cmp(&rows[b][col].magnitude()));
            match best {
                Some(i) if !rows[i][col].is_negligible(1.0) => Some(i),
                _ => {
                    for row in rows.iter_mut().skip(r) {
                        row[col] = row[col].zero_like();
                    }
                    None
                }
            }
        };
        let Some(p) = pick else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        let pivot_row: Vec<F> = rows[r]
            .iter()
            .enumerate()
            .map(|(j, x)| {
                if j == col {
                    x.one_like()
                } else if x.is_exact_zero() {
                    x.clone()
                } else {
                    x.mul(&inv)
                }
            })
            .collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_exact_zero() {
                continue;
            }
            let f = row[col].clone();
            for j in 0..cols {
                if !pivot_row[j].is_exact_zero() {
                    row[j] = row[j].sub(&f.mul(&pivot_row[j]));
                }
            }
            row[col] = f.zero_like();
        }
        rows[r] = pivot_row;
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    if !F::EXACT {
        for row in rows.iter_mut() {
            for x in row.iter_mut() {
                if !x.is_exact_zero() && x.is_negligible(1.0) {
                    *x = x.zero_like();
                }
            }
        }
    }
    (rows, pivots)
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    rref(m.to_rows(), m.cols()).1.len()
}

/// A solution of `a·x = b` (free variables set to zero); errors if inconsistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Result<Vec<F>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!("system with {} rows, rhs length {}", a.rows(), b.len())));
    }
    let n = a.cols();
    let aug: Vec<Vec<F>> = (0..a.rows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let (rows, pivots) = rref(aug, n + 1);
    if pivots.last() == Some(&n) {
        return Err(Error::DegenerateSystem("inconsistent linear system".into()));
    }
    let mut x = vec![F::zero(a.ctx()); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Ok(x)
}

/// Inverse of a square matrix by reduction of `[M | I]`.
pub fn inverse<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    let ctx = m.ctx();
    let aug: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { F::one(ctx) } else { F::zero(ctx) }));
            r
        })
        .collect();
    let (rows, pivots) = rref(aug, 2 * n);
    if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
        return Err(Error::DivisionByZero);
    }
    Matrix::from_rows(rows.into_iter().map(|r| r[n..].to_vec()).collect(), ctx)
}

/// Subspace of `F^n` stored as the nonzero rows of its reduced row-echelon form.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
    ctx: F::Ctx,
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        if F::EXACT {
            self.ambient == other.ambient && self.basis == other.basis
        } else {
            self.ambient == other.ambient && self.dim() == other.dim() && self.contains_subspace(other)
        }
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize, ctx: &F::Ctx) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new(), ctx: ctx.clone() }
    }

    pub fn full(ambient: usize, ctx: &F::Ctx) -> Self {
        Self::span(ambient, Matrix::identity(ambient, ctx).to_rows(), ctx)
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<F>>, ctx: &F::Ctx) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length mismatch");
        let (basis, pivots) = rref(vectors, ambient);
        Subspace { ambient, basis, pivots, ctx: ctx.clone() }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: &[usize], ctx: &F::Ctx) -> Self {
        let id = Matrix::identity(ambient, ctx);
        Self::span(ambient, indices.iter().map(|&i| id.row(i).to_vec()).collect(), ctx)
    }

    /// Column space of `m`.
    pub fn image(m: &Matrix<F>) -> Self {
        Self::span(m.rows(), m.transpose().to_rows(), m.ctx())
    }

    /// Null space of `m`.
    pub fn kernel(m: &Matrix<F>) -> Self {
        let n = m.cols();
        let (rows, pivots) = rref(m.to_rows(), n);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let vecs = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(m.ctx()); n];
                v[f] = F::one(m.ctx());
                for (row, &p) in rows.iter().zip(&pivots) {
                    v[p] = row[f].neg();
                }
                v
            })
            .collect();
        Self::span(n, vecs, m.ctx())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn basis_columns(&self) -> Matrix<F> {
        Matrix::from_columns(&self.basis, self.ambient, &self.ctx)
    }

    /// `v` minus its projection along the echelon basis.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p].is_exact_zero() {
                continue;
            }
            let f = w[p].clone();
            for (x, b) in w.iter_mut().zip(row) {
                if !b.is_exact_zero() {
                    *x = x.sub(&f.mul(b));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let scale = v.iter().map(|x| x.magnitude()).fold(1.0, f64::max);
        self.reduce(v).iter().all(|x| x.is_negligible(scale))
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let vecs = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::span(self.ambient, vecs, &self.ctx)
    }

    /// Vectors `n` with `n·v = 0` for every `v` in the subspace (bilinear pairing).
    pub fn annihilator(&self) -> Vec<Vec<F>> {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient, &self.ctx).basis;
        }
        let m = Matrix::from_rows(self.basis.clone(), &self.ctx).expect("rectangular basis");
        Self::kernel(&m).basis
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut ann = self.annihilator();
        ann.extend(other.annihilator());
        if ann.is_empty() {
            return Subspace::full(self.ambient, &self.ctx);
        }
        Self::kernel(&Matrix::from_rows(ann, &self.ctx).expect("rectangular"))
    }

    /// `op(S)`.
    pub fn mapped(&self, op: &Matrix<F>) -> Self {
        Self::span(op.rows(), self.basis.iter().map(|v| op.apply(v)).collect(), &self.ctx)
    }

    pub fn is_invariant(&self, op: &Matrix<F>) -> bool {
        self.basis.iter().all(|v| self.contains(&op.apply(v)))
    }
}
