use super::{rank, Matrix};
use crate::error::{Error, Result};
use crate::poly::{roots_in_field, Polynomial};
use crate::scalar::{Field, PrecisionConfig};

fn check_distinct<F: Field>(eigs: &[F]) -> Result<()> {
    let scale = eigs.iter().map(|e| e.magnitude()).fold(1.0, f64::max);
    for i in 0..eigs.len() {
        for j in i + 1..eigs.len() {
            if eigs[i].approx_eq(&eigs[j], scale) {
                return Err(Error::RepeatedEigenvalues(i, j));
            }
        }
    }
    Ok(())
}

/// Primitive idempotents `E_i = ∏_{j≠i} (M - θ_j)/(θ_i - θ_j)`.
///
/// Requires distinct `eigs` with `∏(M - θ_i) = 0`; the outputs are checked to sum to
/// the identity, to be mutually orthogonal idempotents and to satisfy `Σ θ_i E_i = M`.
pub fn lagrange_idempotents<F: Field>(m: &Matrix<F>, eigs: &[F]) -> Result<Vec<Matrix<F>>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("idempotents of a non-square matrix".into()));
    }
    check_distinct(eigs)?;
    let n = m.rows();
    let ctx = m.ctx();
    let k = eigs.len();
    let factors: Vec<Matrix<F>> = eigs.iter().map(|t| m.add_scalar(&t.neg())).collect();
    let id = Matrix::identity(n, ctx);
    let mut prefix = vec![id.clone()];
    for f in &factors {
        let next = prefix.last().unwrap().mul(f);
        prefix.push(next);
    }
    let scale = m.max_magnitude().max(1.0).powi(k as i32);
    if !prefix[k].is_negligible(scale) {
        return Err(Error::NotAnnihilated);
    }
    let mut suffix = vec![id.clone(); k + 1];
    for i in (0..k).rev() {
        suffix[i] = factors[i].mul(&suffix[i + 1]);
    }
    let mut es = Vec::with_capacity(k);
    for i in 0..k {
        let denom = eigs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(eigs[i].one_like(), |acc, (_, t)| acc.mul(&eigs[i].sub(t)));
        es.push(prefix[i].mul(&suffix[i + 1]).scale(&denom.inv()?));
    }
    verify_idempotents(m, eigs, &es)?;
    Ok(es)
}

fn verify_idempotents<F: Field>(m: &Matrix<F>, eigs: &[F], es: &[Matrix<F>]) -> Result<()> {
    let n = m.rows();
    let ctx = m.ctx();
    let scale = es.iter().map(|e| e.max_magnitude()).fold(1.0, f64::max);
    let sum = es.iter().fold(Matrix::zeros(n, n, ctx), |acc, e| acc.add(e));
    if !sum.approx_eq_scaled(&Matrix::identity(n, ctx), scale) {
        return Err(Error::Assertion("idempotents do not sum to the identity".into()));
    }
    let weighted = es.iter().zip(eigs).fold(Matrix::zeros(n, n, ctx), |acc, (e, t)| acc.add(&e.scale(t)));
    let wscale = scale * eigs.iter().map(|t| t.magnitude()).fold(1.0, f64::max);
    if !weighted.approx_eq_scaled(m, wscale) {
        return Err(Error::Assertion("Σ θ_i E_i differs from the matrix".into()));
    }
    for (i, ei) in es.iter().enumerate() {
        for (j, ej) in es.iter().enumerate() {
            let p = ei.mul(ej);
            let ok = if i == j { p.approx_eq_scaled(ei, scale * scale) } else { p.is_negligible(scale * scale) };
            if !ok {
                return Err(Error::Assertion(format!("E_{i} E_{j} fails orthogonal idempotence")));
            }
        }
    }
    Ok(())
}

/// `∏(M - θ_i) = 0` with distinct `θ_i` and eigenspace dimensions summing to `n`.
pub fn is_diagonalizable<F: Field>(m: &Matrix<F>, eigs: &[F]) -> bool {
    if !m.is_square() || check_distinct(eigs).is_err() {
        return false;
    }
    let n = m.rows();
    let prod = eigs.iter().fold(Matrix::identity(n, m.ctx()), |acc, t| acc.mul(&m.add_scalar(&t.neg())));
    let scale = m.max_magnitude().max(1.0).powi(eigs.len() as i32);
    if !prod.is_negligible(scale) {
        return false;
    }
    let dims: usize = eigs.iter().map(|t| n - rank(&m.add_scalar(&t.neg()))).sum();
    dims == n
}

/// Characteristic polynomial `det(λ - M)` via reduction to Hessenberg form.
pub fn charpoly<F: Field>(m: &Matrix<F>) -> Result<Polynomial<F>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("characteristic polynomial of a non-square matrix".into()));
    }
    let n = m.rows();
    let ctx = m.ctx().clone();
    let mut h = m.to_rows();
    let scale = m.max_magnitude().max(1.0);
    for col in 0..n.saturating_sub(2) {
        let r = col + 1;
        let pick = if F::EXACT {
            (r..n).find(|&i| !h[i][col].is_exact_zero())
        } else {
            (r..n)
                .max_by(|&a, &b| h[a][col].magnitude().total_cmp(&h[b][col].magnitude()))
                .filter(|&i| !h[i][col].is_negligible(scale))
        };
        let Some(p) = pick else { continue };
        if p != r {
            h.swap(p, r);
            for row in h.iter_mut() {
                row.swap(p, r);
            }
        }
        let piv = h[r][col].clone();
        for i in r + 1..n {
            if h[i][col].is_exact_zero() {
                continue;
            }
            let u = h[i][col].div(&piv)?;
            let pivot_row = h[r].clone();
            for (x, p) in h[i].iter_mut().zip(&pivot_row) {
                *x = x.sub(&u.mul(p));
            }
            for row in h.iter_mut() {
                let t = u.mul(&row[i]);
                row[r] = row[r].add(&t);
            }
        }
    }
    let lambda = Polynomial::new(vec![F::zero(&ctx), F::one(&ctx)], &ctx);
    let mut p: Vec<Polynomial<F>> = vec![Polynomial::one(&ctx)];
    for k in 0..n {
        let mut next = lambda.sub(&Polynomial::constant(h[k][k].clone())).mul(&p[k]);
        let mut t = F::one(&ctx);
        for i in 1..=k {
            t = t.mul(&h[k - i + 1][k - i]);
            let c = t.mul(&h[k - i][k]);
            next = next.sub(&p[k - i].scale(&c));
        }
        p.push(next);
    }
    Ok(p.pop().unwrap())
}

/// Distinct eigenvalues from the characteristic polynomial, sorted by (real, imaginary).
/// On the exact backend every eigenvalue must be rational.
pub fn distinct_eigenvalues<F: Field>(m: &Matrix<F>, cfg: &PrecisionConfig) -> Result<Vec<F>> {
    let cp = charpoly(m)?;
    let roots = roots_in_field(&cp, cfg)?;
    let scale = roots.iter().map(|r| r.magnitude()).fold(1.0, f64::max);
    let loose = scale * cfg.tolerance.sqrt() / cfg.tolerance.max(f64::MIN_POSITIVE);
    let mut out: Vec<F> = Vec::new();
    for r in roots {
        let dup = if F::EXACT { out.contains(&r) } else { out.iter().any(|x| x.approx_eq(&r, loose)) };
        if !dup {
            out.push(r);
        }
    }
    out.sort_by(|a, b| a.cmp_lex(b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::m;
    use super::*;
    use crate::scalar::{parse_rational, RBig};

    fn r(s: &str) -> RBig {
        parse_rational(s).unwrap()
    }

    #[test]
    fn idempotent_examples() {
        let d = m(&[&["13/2", "0"], &["0", "7/2"]]);
        let es = lagrange_idempotents(&d, &[r("13/2"), r("7/2")]).unwrap();
        assert_eq!(es[0], m(&[&["1", "0"], &["0", "0"]]));
        assert_eq!(es[1], m(&[&["0", "0"], &["0", "1"]]));
        let a = m(&[&["13/2", "0"], &["5/2", "7/2"]]);
        let es = lagrange_idempotents(&a, &[r("13/2"), r("7/2")]).unwrap();
        assert_eq!(es[0], m(&[&["1", "0"], &["5/6", "0"]]));
        let one = lagrange_idempotents(&m(&[&["5"]]), &[r("5")]).unwrap();
        assert_eq!(one[0], Matrix::identity(1, &()));
    }

    #[test]
    fn idempotent_errors() {
        let a = m(&[&["1", "0"], &["0", "2"]]);
        assert!(matches!(lagrange_idempotents(&a, &[r("1"), r("1")]), Err(Error::RepeatedEigenvalues(0, 1))));
        assert!(matches!(lagrange_idempotents(&a, &[r("1"), r("3")]), Err(Error::NotAnnihilated)));
    }

    #[test]
    fn diagonalizable_examples() {
        assert!(!is_diagonalizable(&m(&[&["0", "1"], &["0", "0"]]), &[r("0")]));
        assert!(is_diagonalizable(&m(&[&["1", "0"], &["0", "2"]]), &[r("1"), r("2")]));
        assert!(is_diagonalizable(&m(&[&["13/2", "0"], &["5/2", "7/2"]]), &[r("13/2"), r("7/2")]));
    }

    #[test]
    fn charpoly_and_eigenvalues() {
        let a = m(&[&["2", "1", "0"], &["1", "2", "0"], &["4", "5", "7"]]);
        let cp = charpoly(&a).unwrap();
        // (λ-1)(λ-3)(λ-7)
        let expect = Polynomial::from_roots(&[r("1"), r("3"), r("7")], &());
        assert_eq!(cp, expect);
        let eigs = distinct_eigenvalues(&a, &PrecisionConfig::default()).unwrap();
        assert_eq!(eigs, vec![r("1"), r("3"), r("7")]);
        let id = Matrix::<RBig>::identity(3, &());
        assert_eq!(distinct_eigenvalues(&id, &PrecisionConfig::default()).unwrap(), vec![r("1")]);
    }
}
