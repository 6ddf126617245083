use crate::error::{Error, Result};
use crate::linalg::{solve, Matrix};
use crate::scalar::{check_feasible, check_q, Field};

/// Scalars `q, a, b, c, a*, b*, c*` and the diameter `d` of a q-Racah eigenvalue pattern
/// `θ_i = a + b q^(2i-d) + c q^(d-2i)`, `θ*_i = a* + b* q^(2i-d) + c* q^(d-2i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QRacahParams<F: Field> {
    pub q: F,
    pub a: F,
    pub b: F,
    pub c: F,
    pub a_star: F,
    pub b_star: F,
    pub c_star: F,
    pub d: usize,
}

impl<F: Field> QRacahParams<F> {
    /// Builds and validates the parameters.
    #[allow(clippy::too_many_arguments)]
    pub fn new(q: F, a: F, b: F, c: F, a_star: F, b_star: F, c_star: F, d: usize) -> Result<Self> {
        let p = QRacahParams { q, a, b, c, a_star, b_star, c_star, d };
        p.validate()?;
        Ok(p)
    }

    /// `q ≠ 0`, `q^2 ≠ ±1`, `bb*cc* ≠ 0`, `d` feasible, and both eigenvalue sequences distinct
    /// (equivalently `b ≠ c q^(2d-2i)` and `b* ≠ c* q^(2d-2i)` for `1 ≤ i ≤ 2d-1`).
    pub fn validate(&self) -> Result<()> {
        check_q(&self.q)?;
        if self.q.square().add(&self.q.one_like()).is_zero() {
            return Err(Error::InvalidParameters("q^2 = -1".into()));
        }
        if self.bbs().mul(&self.ccs()).is_zero() {
            return Err(Error::InvalidParameters("bb*cc* = 0".into()));
        }
        check_feasible(&self.q, self.d)?;
        eigen_sequences(self)?;
        Ok(())
    }

    /// The same scalars at another diameter.
    pub fn with_diameter(&self, d: usize) -> Result<Self> {
        let mut p = self.clone();
        p.d = d;
        p.validate()?;
        Ok(p)
    }

    pub fn bbs(&self) -> F {
        self.b.mul(&self.b_star)
    }

    pub fn ccs(&self) -> F {
        self.c.mul(&self.c_star)
    }

    pub fn ctx(&self) -> F::Ctx {
        self.q.ctx()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> QRacahParams<G> {
        QRacahParams {
            q: f(&self.q),
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            a_star: f(&self.a_star),
            b_star: f(&self.b_star),
            c_star: f(&self.c_star),
            d: self.d,
        }
    }
}

/// `β, γ, ϱ, γ*, ϱ*` of the tridiagonal relations.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedConstants<F: Field> {
    pub beta: F,
    pub gamma: F,
    pub rho: F,
    pub gamma_star: F,
    pub rho_star: F,
}

/// `β = q^2 + q^-2`, `γ = -a(q - q^-1)^2`, `ϱ = a^2(q - q^-1)^2 - bc(q^2 - q^-2)^2` and starred analogues.
pub fn derived_constants<F: Field>(p: &QRacahParams<F>) -> Result<DerivedConstants<F>> {
    let q = &p.q;
    let qi = q.inv()?;
    let q2 = q.square();
    let qm2 = qi.square();
    let s1 = q.sub(&qi).square();
    let s2 = q2.sub(&qm2).square();
    let rho = |a: &F, b: &F, c: &F| a.square().mul(&s1).sub(&b.mul(c).mul(&s2));
    Ok(DerivedConstants {
        beta: q2.add(&qm2),
        gamma: p.a.mul(&s1).neg(),
        rho: rho(&p.a, &p.b, &p.c),
        gamma_star: p.a_star.mul(&s1).neg(),
        rho_star: rho(&p.a_star, &p.b_star, &p.c_star),
    })
}

fn sequence<F: Field>(q: &F, a: &F, b: &F, c: &F, d: usize) -> Result<Vec<F>> {
    (0..=d)
        .map(|i| {
            let e = 2 * i as i64 - d as i64;
            Ok(a.add(&b.mul(&q.powi(e)?)).add(&c.mul(&q.powi(-e)?)))
        })
        .collect()
}

/// Mutual distinctness, reporting the first coinciding pair.
pub fn check_distinct<F: Field>(xs: &[F]) -> Result<()> {
    let scale = xs.iter().map(|x| x.magnitude()).fold(1.0, f64::max);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i].approx_eq(&xs[j], scale) {
                return Err(Error::NotDistinct(i, j));
            }
        }
    }
    Ok(())
}

/// The eigenvalue and dual eigenvalue sequences; both must be mutually distinct.
pub fn eigen_sequences<F: Field>(p: &QRacahParams<F>) -> Result<(Vec<F>, Vec<F>)> {
    let th = sequence(&p.q, &p.a, &p.b, &p.c, p.d)?;
    let ts = sequence(&p.q, &p.a_star, &p.b_star, &p.c_star, p.d)?;
    check_distinct(&th)?;
    check_distinct(&ts)?;
    Ok((th, ts))
}

/// `(θ_{i-2} - θ_{i+1}) / (θ_{i-1} - θ_i)` for `2 ≤ i ≤ d-1`; all must agree.
fn common_ratio<F: Field>(xs: &[F]) -> Result<F> {
    let d = xs.len() - 1;
    let mut ratio: Option<F> = None;
    let scale = xs.iter().map(|x| x.magnitude()).fold(1.0, f64::max);
    for i in 2..d {
        let r = xs[i - 2].sub(&xs[i + 1]).div(&xs[i - 1].sub(&xs[i]))?;
        match &ratio {
            None => ratio = Some(r),
            Some(r0) if !r0.approx_eq(&r, scale.max(r0.magnitude())) => {
                return Err(Error::NotQRacah(format!("ratio at index {i} is {r}, expected {r0}")));
            }
            _ => {}
        }
    }
    ratio.ok_or_else(|| Error::Underdetermined("fewer than four eigenvalues".into()))
}

/// Picks between two candidates: larger magnitude, then lexicographically larger.
fn pick_larger<F: Field>(a: F, b: F) -> F {
    match a.cmp_abs(&b).then_with(|| a.cmp_lex(&b)) {
        std::cmp::Ordering::Less => b,
        _ => a,
    }
}

/// Recovers `q` from the common ratio `β + 1` of a sequence with `d ≥ 3`.
pub fn q_from_sequences<F: Field>(thetas: &[F], theta_stars: &[F]) -> Result<F> {
    let rho = common_ratio(thetas)?;
    let rho_s = common_ratio(theta_stars)?;
    if !rho.approx_eq(&rho_s, rho.magnitude().max(1.0)) {
        return Err(Error::NotQRacah(format!("eigenvalue ratio {rho} differs from dual ratio {rho_s}")));
    }
    // q^2 = t with t^2 - (ρ - 1) t + 1 = 0
    let s = rho.sub(&rho.one_like());
    let disc = s.square().sub(&rho.int_like(4));
    let root = disc.sqrt().ok_or_else(|| Error::NotRational(format!("q^2 from ratio {rho}")))?;
    let half = rho.int_like(2).inv()?;
    let t = pick_larger(s.add(&root).mul(&half), s.sub(&root).mul(&half));
    if t.sub(&t.one_like()).is_zero() || t.add(&t.one_like()).is_zero() {
        return Err(Error::NotQRacah(format!("ratio {rho} forces q^2 = {t}")));
    }
    let q = t.sqrt().ok_or_else(|| Error::NotRational(format!("square root of q^2 = {t}")))?;
    Ok(pick_larger(q.clone(), q.neg()))
}

/// Solves `x_i = a + b q^(2i-d) + c q^(d-2i)` for `(a, b, c)` using `i = 0, 1, 2`.
fn solve_abc<F: Field>(xs: &[F], q: &F) -> Result<(F, F, F)> {
    let d = xs.len() - 1;
    let rows: Vec<Vec<F>> = (0..3)
        .map(|i| {
            let e = 2 * i as i64 - d as i64;
            Ok(vec![q.one_like(), q.powi(e)?, q.powi(-e)?])
        })
        .collect::<Result<_>>()?;
    let m = Matrix::from_rows(rows, &q.ctx())?;
    let x = solve(&m, &xs[..3]).map_err(|_| Error::DegenerateSystem("(a, b, c) system is singular".into()))?;
    Ok((x[0].clone(), x[1].clone(), x[2].clone()))
}

/// For `d = 1`: fixes `a` at the first of `0, 1, 2, …` giving a valid `(b, c)`.
fn solve_abc_d1<F: Field>(xs: &[F], q: &F, a: &F) -> Result<(F, F, F)> {
    // b q^-1 + c q = x0 - a, b q + c q^-1 = x1 - a
    let qi = q.inv()?;
    let m = Matrix::from_rows(vec![vec![qi.clone(), q.clone()], vec![q.clone(), qi]], &q.ctx())?;
    let x = solve(&m, &[xs[0].sub(a), xs[1].sub(a)])?;
    Ok((a.clone(), x[0].clone(), x[1].clone()))
}

/// Inverts the eigenvalue formulas. `q` is required for `d = 2`; for `d ≤ 1` it defaults
/// to 2 when absent. The fitted parameters must reproduce both sequences.
pub fn fit_qracah<F: Field>(thetas: &[F], theta_stars: &[F], q: Option<&F>) -> Result<QRacahParams<F>> {
    if thetas.len() != theta_stars.len() || thetas.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} eigenvalues and {} dual eigenvalues",
            thetas.len(),
            theta_stars.len()
        )));
    }
    let d = thetas.len() - 1;
    check_distinct(thetas)?;
    check_distinct(theta_stars)?;
    let ctx = thetas[0].ctx();
    let q = match q {
        Some(q) => {
            if d >= 3 {
                // the sequences must still share one ratio
                common_ratio(thetas)?;
                common_ratio(theta_stars)?;
            }
            q.clone()
        }
        None if d >= 3 => q_from_sequences(thetas, theta_stars)?,
        None if d == 2 => return Err(Error::Underdetermined("q must be supplied when d = 2".into())),
        None => F::from_i64(2, &ctx),
    };
    check_q(&q)?;
    check_feasible(&q, d)?;
    let one = F::one(&ctx);
    let p = match d {
        0 => {
            let two = F::from_i64(2, &ctx);
            QRacahParams {
                q,
                a: thetas[0].sub(&two),
                b: one.clone(),
                c: one.clone(),
                a_star: theta_stars[0].sub(&two),
                b_star: one.clone(),
                c_star: one,
                d,
            }
        }
        1 => {
            let mut found = None;
            for k in 0..64 {
                let a = F::from_i64(k, &ctx);
                let (a, b, c) = solve_abc_d1(thetas, &q, &a)?;
                let (a_s, b_s, c_s) = solve_abc_d1(theta_stars, &q, &F::from_i64(k, &ctx))?;
                let cand = QRacahParams { q: q.clone(), a, b, c, a_star: a_s, b_star: b_s, c_star: c_s, d };
                if cand.validate().is_ok() && !cand.b.sub(&cand.c).is_zero() && !cand.b_star.sub(&cand.c_star).is_zero()
                {
                    found = Some(cand);
                    break;
                }
            }
            found.ok_or_else(|| Error::DegenerateSystem("no admissible (a, b, c) for d = 1".into()))?
        }
        _ => {
            let (a, b, c) = solve_abc(thetas, &q)?;
            let (a_star, b_star, c_star) = solve_abc(theta_stars, &q)?;
            QRacahParams { q, a, b, c, a_star, b_star, c_star, d }
        }
    };
    p.validate()?;
    let (th, ts) = eigen_sequences(&p)?;
    let reproduces = |xs: &[F], ys: &[F]| {
        let scale = xs.iter().map(|x| x.magnitude()).fold(1.0, f64::max);
        xs.iter().zip(ys).all(|(x, y)| x.approx_eq(y, scale))
    };
    if !reproduces(&th, thetas) || !reproduces(&ts, theta_stars) {
        return Err(Error::NotQRacah("sequences are not of the form a + b q^(2i-d) + c q^(d-2i)".into()));
    }
    Ok(p)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::{parse_rational, RBig};
    use proptest::prelude::*;

    fn r(s: &str) -> RBig {
        parse_rational(s).unwrap()
    }

    fn rs(xs: &[&str]) -> Vec<RBig> {
        xs.iter().map(|s| r(s)).collect()
    }

    pub(crate) fn running(d: usize) -> QRacahParams<RBig> {
        QRacahParams::new(r("2"), r("0"), r("1"), r("3"), r("0"), r("1"), r("2"), d).unwrap()
    }

    #[test]
    fn eigen_sequence_examples() {
        let (th, ts) = eigen_sequences(&running(2)).unwrap();
        assert_eq!(th, rs(&["49/4", "4", "19/4"]));
        assert_eq!(ts, rs(&["33/4", "3", "9/2"]));
        let (th, _) = eigen_sequences(&running(3)).unwrap();
        assert_eq!(th, rs(&["193/8", "13/2", "7/2", "67/8"]));
        let mut p = running(2);
        p.c = r("1");
        assert!(matches!(eigen_sequences(&p), Err(Error::NotDistinct(0, 2))));
    }

    #[test]
    fn derived_constant_examples() {
        let k = derived_constants(&running(2)).unwrap();
        assert_eq!(k.gamma, r("0"));
        assert_eq!(k.beta, r("17/4"));
        assert_eq!(k.rho, r("-675/16"));
        // θ_{i-1} - β θ_i + θ_{i+1} = γ
        let (th, _) = eigen_sequences(&running(3)).unwrap();
        for i in 1..3 {
            assert_eq!(th[i - 1].clone() - &k.beta * &th[i] + &th[i + 1], k.gamma);
        }
    }

    #[test]
    fn fit_examples() {
        let (th, ts) = eigen_sequences(&running(3)).unwrap();
        let p = fit_qracah(&th, &ts, None).unwrap();
        assert_eq!(p.q, r("2"));
        assert_eq!((p.a.clone(), p.b.clone(), p.c.clone()), (r("0"), r("1"), r("3")));
        assert_eq!((p.a_star.clone(), p.b_star.clone(), p.c_star.clone()), (r("0"), r("1"), r("2")));
        let ap = rs(&["0", "1", "2", "3"]);
        assert!(matches!(fit_qracah(&ap, &ap, None), Err(Error::NotQRacah(_))));
        let (th2, ts2) = eigen_sequences(&running(2)).unwrap();
        assert!(matches!(fit_qracah(&th2, &ts2, None), Err(Error::Underdetermined(_))));
        let p2 = fit_qracah(&th2, &ts2, Some(&r("2"))).unwrap();
        assert_eq!(p2, running(2));
    }

    #[test]
    fn fit_small_diameters() {
        let p0 = fit_qracah(&rs(&["5"]), &rs(&["-1"]), None).unwrap();
        assert_eq!(eigen_sequences(&p0).unwrap(), (rs(&["5"]), rs(&["-1"])));
        let th = rs(&["13/2", "7/2"]);
        let ts = rs(&["9/2", "3"]);
        let p1 = fit_qracah(&th, &ts, None).unwrap();
        assert_eq!(eigen_sequences(&p1).unwrap(), (th, ts));
        assert_eq!(p1.q, r("2"));
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(QRacahParams::new(r("1"), r("0"), r("1"), r("3"), r("0"), r("1"), r("2"), 1).is_err());
        assert!(QRacahParams::new(r("2"), r("0"), r("0"), r("3"), r("0"), r("1"), r("2"), 1).is_err());
    }

    proptest! {
        #[test]
        fn fit_inverts_eigen_sequences(
            d in 3usize..7,
            qn in prop::sample::select(vec![2i64, 3, -2, 5]),
            coeffs in prop::collection::vec((-6i64..=6, 1i64..=4), 6),
        ) {
            let v: Vec<RBig> = coeffs.iter().map(|&(n, m)| RBig::from(n) / RBig::from(m)).collect();
            let p = QRacahParams::new(
                RBig::from(qn), v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone(), v[5].clone(), d,
            );
            prop_assume!(p.is_ok());
            let p = p.unwrap();
            let (th, ts) = eigen_sequences(&p).unwrap();
            let fit = fit_qracah(&th, &ts, None).unwrap();
            prop_assert_eq!(eigen_sequences(&fit).unwrap(), (th, ts));
            prop_assert_eq!(fit.q.clone() * &fit.q, RBig::from(qn * qn));
        }
    }
}
