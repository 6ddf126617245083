use std::collections::VecDeque;

use super::{rref, Matrix, Subspace};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Smallest subspace containing `seed` and invariant under every operator.
pub fn closure_under<F: Field>(ops: &[&Matrix<F>], seed: &Subspace<F>) -> Subspace<F> {
    let mut span = seed.clone();
    let mut queue: VecDeque<Vec<F>> = seed.basis().iter().cloned().collect();
    while let Some(v) = queue.pop_front() {
        if span.dim() == span.ambient() {
            break;
        }
        for op in ops {
            let w = op.apply(&v);
            if !span.contains(&w) {
                let r = span.reduce(&w);
                span = Subspace::span(
                    span.ambient(),
                    span.basis().iter().cloned().chain([r.clone()]).collect(),
                    span.ctx(),
                );
                queue.push_back(r);
            }
        }
    }
    span
}

/// Largest subspace of `bound` invariant under every operator, by the descending
/// fixpoint `S ← {v ∈ S : op·v ∈ S for all op}`.
pub fn largest_invariant_in<F: Field>(ops: &[&Matrix<F>], bound: &Subspace<F>) -> Subspace<F> {
    let mut s = bound.clone();
    loop {
        if s.dim() == 0 {
            return s;
        }
        let ann = s.annihilator();
        if ann.is_empty() {
            return s;
        }
        let n = Matrix::from_rows(ann, s.ctx()).expect("rectangular");
        let b = s.basis_columns();
        let mut constraint_rows = Vec::new();
        for op in ops {
            constraint_rows.extend(n.mul(&op.mul(&b)).to_rows());
        }
        let c = Matrix::from_rows(constraint_rows, s.ctx()).expect("rectangular");
        let coeffs = Subspace::kernel(&c);
        let next = Subspace::span(s.ambient(), coeffs.basis().iter().map(|x| b.apply(x)).collect(), s.ctx());
        if next.dim() == s.dim() {
            return s;
        }
        s = next;
    }
}

/// A basis of `total` adapted to `sub`, with a left inverse for taking coordinates.
#[derive(Clone, Debug)]
pub struct QuotientBasis<F: Field> {
    pub sub: Subspace<F>,
    pub total: Subspace<F>,
    /// Complement vectors; their images span `total / sub`.
    pub complement: Vec<Vec<F>>,
    /// Rows give coordinates with respect to `sub`'s basis followed by `complement`.
    left_inverse: Matrix<F>,
}

/// Chooses complement vectors for `total / sub`. Rows of `total`'s echelon basis whose
/// pivot is not a pivot of `sub` are taken first (for `total` the whole space these are
/// the standard basis vectors off `sub`'s pivots), then any further rows as needed.
pub fn quotient_basis<F: Field>(sub: &Subspace<F>, total: &Subspace<F>) -> Result<QuotientBasis<F>> {
    if !total.contains_subspace(sub) {
        return Err(Error::InvalidParameters("quotient: subspace not contained in total".into()));
    }
    let need = total.dim() - sub.dim();
    let mut complement: Vec<Vec<F>> = Vec::new();
    let mut acc = sub.clone();
    let (first, second): (Vec<_>, Vec<_>) =
        total.basis().iter().zip(total.pivots()).partition(|(_, p)| !sub.pivots().contains(p));
    for (row, _) in first.into_iter().chain(second) {
        if complement.len() == need {
            break;
        }
        if !acc.contains(row) {
            complement.push(row.clone());
            acc = acc.sum(&Subspace::span(acc.ambient(), vec![row.clone()], acc.ctx()));
        }
    }
    if complement.len() != need {
        return Err(Error::Assertion("quotient: could not complete the basis".into()));
    }
    let n = total.ambient();
    let cols: Vec<Vec<F>> = sub.basis().iter().chain(&complement).cloned().collect();
    let t = cols.len();
    let ctx = total.ctx();
    let aug: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut r: Vec<F> = cols.iter().map(|c| c[i].clone()).collect();
            r.extend((0..n).map(|j| if i == j { F::one(ctx) } else { F::zero(ctx) }));
            r
        })
        .collect();
    let (rows, pivots) = rref(aug, t + n);
    if pivots.len() < t || pivots[..t].iter().enumerate().any(|(k, &p)| k != p) {
        return Err(Error::Assertion("quotient: adapted basis is not independent".into()));
    }
    let left = Matrix::from_rows(rows[..t].iter().map(|r| r[t..].to_vec()).collect(), ctx)?;
    Ok(QuotientBasis { sub: sub.clone(), total: total.clone(), complement, left_inverse: left })
}

impl<F: Field> QuotientBasis<F> {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Coordinates of a vector of `total` in the quotient basis.
    pub fn project(&self, v: &[F]) -> Vec<F> {
        let x = self.left_inverse.apply(v);
        x[self.sub.dim()..].to_vec()
    }

    /// Matrix of the map induced by `m` on `total / sub`.
    pub fn action(&self, m: &Matrix<F>) -> Result<Matrix<F>> {
        if !self.total.is_invariant(m) {
            return Err(Error::InvalidParameters("quotient: operator does not preserve the total space".into()));
        }
        if !self.sub.is_invariant(m) {
            return Err(Error::InvalidParameters("quotient: operator does not preserve the subspace".into()));
        }
        let cols: Vec<Vec<F>> = self.complement.iter().map(|c| self.project(&m.apply(c))).collect();
        Ok(Matrix::from_columns(&cols, self.dim(), m.ctx()))
    }
}

/// Matrix of the map induced by `m` on `total / sub`.
pub fn quotient_action<F: Field>(m: &Matrix<F>, sub: &Subspace<F>, total: &Subspace<F>) -> Result<Matrix<F>> {
    quotient_basis(sub, total)?.action(m)
}

#[cfg(test)]
mod tests {
    use super::super::tests::m;
    use super::*;
    use crate::scalar::RBig;

    #[test]
    fn closure_examples() {
        let id = Matrix::<RBig>::identity(2, &());
        let s = Subspace::coordinate(2, &[0], &());
        assert_eq!(closure_under(&[&id], &s), s);
        let a = m(&[&["13/2", "0"], &["5/2", "7/2"]]);
        let b = m(&[&["9/2", "-45/4"], &["0", "3"]]);
        assert_eq!(closure_under(&[&a, &b], &s).dim(), 2);
        let d = m(&[&["1", "0"], &["0", "2"]]);
        assert_eq!(closure_under(&[&d], &s), s);
    }

    #[test]
    fn largest_invariant_examples() {
        let id = Matrix::<RBig>::identity(2, &());
        let z = Subspace::zero(2, &());
        assert_eq!(largest_invariant_in(&[&id], &z).dim(), 0);
        let s = Subspace::coordinate(2, &[1], &());
        assert_eq!(largest_invariant_in(&[&id], &s), s);
        let a = m(&[&["13/2", "0"], &["5/2", "7/2"]]);
        let b = m(&[&["9/2", "-45/4"], &["0", "3"]]);
        // ker of E*_0 for the d=1 pair is spanned by the A*-eigenvector for 3
        let k = Subspace::span(2, vec![vec![RBig::from(15) / RBig::from(2), RBig::ONE]], &());
        assert!(k.is_invariant(&b));
        assert_eq!(largest_invariant_in(&[&a, &b], &k).dim(), 0);
    }

    #[test]
    fn quotient_examples() {
        let mm = m(&[&["1", "0"], &["1", "2"]]);
        let full = Subspace::<RBig>::full(2, &());
        assert_eq!(quotient_action(&mm, &Subspace::zero(2, &()), &full).unwrap(), mm);
        assert_eq!(quotient_action(&mm, &full, &full).unwrap().rows(), 0);
        let sub = Subspace::coordinate(2, &[1], &());
        assert_eq!(quotient_action(&mm, &sub, &full).unwrap(), m(&[&["1"]]));
        let bad = Subspace::coordinate(2, &[0], &());
        assert!(quotient_action(&mm, &bad, &full).is_err());
    }

    #[test]
    fn quotient_respects_products() {
        let a = m(&[&["1", "0", "0"], &["2", "3", "0"], &["1", "1", "5"]]);
        let b = m(&[&["2", "0", "0"], &["1", "1", "0"], &["0", "4", "-1"]]);
        let sub = Subspace::coordinate(3, &[2], &());
        let full = Subspace::full(3, &());
        let qb = quotient_basis(&sub, &full).unwrap();
        let lhs = qb.action(&a.mul(&b)).unwrap();
        let rhs = qb.action(&a).unwrap().mul(&qb.action(&b).unwrap());
        assert_eq!(lhs, rhs);
    }
}
