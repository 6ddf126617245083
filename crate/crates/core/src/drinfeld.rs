//! Split sequences of standard modules, normalized split sequences, Drinfel'd polynomials,
//! and the inverse pipeline from a split sequence back to evaluation parameters.

use crate::error::{Error, Result};
use crate::poly::{f_poly, roots_in_field, Polynomial};
use crate::scalar::{check_feasible, q_diff, BigComplex, Field, PrecisionConfig, RBig};
use crate::td::QRacahParams;
use crate::uq::{standard_module, RLCoefficients, StandardModule};

/// `ζ_0, …, ζ_d` with `ζ_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitSequence<F: Field> {
    zetas: Vec<F>,
}

impl<F: Field> SplitSequence<F> {
    pub fn new(zetas: Vec<F>) -> Result<Self> {
        match zetas.first() {
            None => Err(Error::InvalidParameters("empty split sequence".into())),
            Some(z0) if !z0.approx_eq(&z0.one_like(), 1.0) => {
                Err(Error::InvalidParameters(format!("split sequence must start with 1, got {z0}")))
            }
            Some(_) => Ok(SplitSequence { zetas }),
        }
    }

    pub fn zetas(&self) -> &[F] {
        &self.zetas
    }

    pub fn d(&self) -> usize {
        self.zetas.len() - 1
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.zetas.len() == other.zetas.len()
            && self
                .zetas
                .iter()
                .zip(&other.zetas)
                .all(|(a, b)| a.approx_eq(b, a.magnitude().max(b.magnitude()).max(1.0)))
    }
}

/// `w = c·e` where `e` is the standard basis vector at `index`; returns `c`.
fn proportional_to_basis<F: Field>(w: &[F], index: usize, what: &str) -> Result<F> {
    let scale = w.iter().map(|x| x.magnitude()).fold(1.0, f64::max);
    let stray = w.iter().enumerate().find(|&(k, x)| k != index && !x.is_negligible(scale));
    if let Some((k, x)) = stray {
        return Err(Error::Proportionality(format!("{what}: component {k} is {x}")));
    }
    Ok(w[index].clone())
}

/// `ζ_i` from `L^i R^i u_∅ = ζ_i u_∅`.
pub fn split_sequence<F: Field>(m: &StandardModule<F>) -> Result<SplitSequence<F>> {
    let r = m.r()?;
    let l = m.l()?;
    let u0 = m.highest_weight_vector();
    let mut zetas = vec![F::one(&m.ctx())];
    let mut ri = u0;
    for i in 1..=m.d() {
        ri = r.apply(&ri);
        let w = (0..i).fold(ri.clone(), |v, _| l.apply(&v));
        zetas.push(proportional_to_basis(&w, 0, &format!("L^{i} R^{i} u_∅"))?);
    }
    SplitSequence::new(zetas)
}

/// Eigenvalue of `RL` on the one-dimensional top weight space `U_d`.
pub fn zeta_cross<F: Field>(m: &StandardModule<F>) -> Result<F> {
    if m.d() == 0 {
        return Err(Error::InvalidParameters("ζ×_1 needs d ≥ 1".into()));
    }
    let top = m.dim() - 1;
    let ctx = m.ctx();
    let mut u = vec![F::zero(&ctx); m.dim()];
    u[top] = F::one(&ctx);
    let w = m.r()?.apply(&m.l()?.apply(&u));
    proportional_to_basis(&w, top, "R L on U_d")
}

/// Closed forms for `ζ_1` and `ζ×_1`:
/// `uu* q^-1 Σα + vv* q^3 Σα^-1 - (q - q^-1)(q^d - q^-d)(bb* q^(±(1-d)) + cc* q^(±(d-1)))`.
pub fn zeta1_closed_forms<F: Field>(q: &F, alphas: &[F], c: &RLCoefficients<F>) -> Result<(F, F)> {
    let d = alphas.len() as i64;
    let bbs = c.bbs(q)?;
    let ccs = c.ccs(q)?;
    let sum_a = alphas.iter().fold(q.zero_like(), |acc, a| acc.add(a));
    let sum_ai = alphas.iter().try_fold(q.zero_like(), |acc, a| Ok::<_, Error>(acc.add(&a.inv()?)))?;
    let common = c.u.mul(&c.u_star).mul(&q.inv()?).mul(&sum_a).add(&c.v.mul(&c.v_star).mul(&q.powi(3)?).mul(&sum_ai));
    let k = q_diff(q, 1)?.mul(&q_diff(q, d)?);
    let (lo, hi) = (q.powi(1 - d)?, q.powi(d - 1)?);
    let z = common.sub(&k.mul(&bbs.mul(&lo).add(&ccs.mul(&hi))));
    let zx = common.sub(&k.mul(&bbs.mul(&hi).add(&ccs.mul(&lo))));
    Ok((z, zx))
}

/// `ζ_1 - ζ×_1 = (q - q^-1)(q^(d-1) - q^(1-d))(q^d - q^-d)(bb* - cc*)`.
pub fn zeta_difference<F: Field>(q: &F, d: usize, bbs: &F, ccs: &F) -> Result<F> {
    let d = d as i64;
    Ok(q_diff(q, 1)?.mul(&q_diff(q, d - 1)?).mul(&q_diff(q, d)?).mul(&bbs.sub(ccs)))
}

/// `(q - q^-1)^2 (q^2 - q^-2)^2 … (q^i - q^-i)^2` for `i = 0..=d`.
fn normalizers<F: Field>(q: &F, d: usize) -> Result<Vec<F>> {
    let mut out = vec![q.one_like()];
    for i in 1..=d {
        let next = out[i - 1].mul(&q_diff(q, i as i64)?.square());
        out.push(next);
    }
    Ok(out)
}

/// `σ_i = ζ_i / ((q - q^-1)^2 … (q^i - q^-i)^2)`.
pub fn normalized_split<F: Field>(zetas: &SplitSequence<F>, q: &F) -> Result<Vec<F>> {
    check_feasible(q, zetas.d())?;
    let n = normalizers(q, zetas.d())?;
    zetas.zetas().iter().zip(&n).map(|(z, k)| z.div(k)).collect()
}

/// Inverse of [`normalized_split`].
pub fn split_from_normalized<F: Field>(sigmas: &[F], q: &F) -> Result<SplitSequence<F>> {
    let d = sigmas.len().saturating_sub(1);
    check_feasible(q, d)?;
    let n = normalizers(q, d)?;
    SplitSequence::new(sigmas.iter().zip(&n).map(|(s, k)| s.mul(k)).collect())
}

/// `(-1)^d Σ_{i=0}^d σ_{d-i} f_0 f_1 … f_{i-1}`.
pub fn drinfeld_from_sigmas<F: Field>(sigmas: &[F], q: &F, bbs: &F, ccs: &F) -> Result<Polynomial<F>> {
    let d = sigmas.len().checked_sub(1).ok_or_else(|| Error::InvalidParameters("empty σ sequence".into()))?;
    let ctx = q.ctx();
    let mut prod = Polynomial::one(&ctx);
    let mut p = Polynomial::zero(&ctx);
    for i in 0..=d {
        p = p.add(&prod.scale(&sigmas[d - i]));
        prod = prod.mul(&f_poly(i, q, bbs, ccs)?);
    }
    if d % 2 == 1 {
        p = p.scale(&q.one_like().neg());
    }
    if p.degree() != Some(d) || !p.leading().is_some_and(|c| c.approx_eq(&c.one_like(), 1.0)) {
        return Err(Error::Assertion(format!("Drinfel'd polynomial {p} is not monic of degree {d}")));
    }
    Ok(p)
}

/// The Drinfel'd polynomial `P_V` of a module with `R`, `L` attached.
pub fn drinfeld_polynomial<F: Field>(m: &StandardModule<F>) -> Result<Polynomial<F>> {
    let c = &m.rl().ok_or_else(|| Error::InvalidParameters("R, L not attached".into()))?.coeffs;
    let sigmas = normalized_split(&split_sequence(m)?, m.q())?;
    drinfeld_from_sigmas(&sigmas, m.q(), &c.bbs(m.q())?, &c.ccs(m.q())?)
}

/// `λ - (α uu* q^-2 + α^-1 vv* q^2) / (q^-1 (q - q^-1)^2)`.
pub fn drinfeld_linear<F: Field>(alpha: &F, q: &F, c: &RLCoefficients<F>) -> Result<Polynomial<F>> {
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    let num =
        alpha.mul(&c.u).mul(&c.u_star).mul(&q.powi(-2)?).add(&alpha.inv()?.mul(&c.v).mul(&c.v_star).mul(&q.square()));
    let den = q.inv()?.mul(&q_diff(q, 1)?.square());
    Ok(Polynomial::linear_root(&num.div(&den)?))
}

/// Coefficients `(A, B, C)` of `A α^2 + B α + C = 0` whose roots give `P_{V(α)} = λ - r`.
pub fn alpha_quadratic<F: Field>(r: &F, q: &F, c: &RLCoefficients<F>) -> Result<(F, F, F)> {
    let a = c.u.mul(&c.u_star).mul(&q.powi(-2)?);
    let b = r.mul(&q.inv()?).mul(&q_diff(q, 1)?.square()).neg();
    let cc = c.v.mul(&c.v_star).mul(&q.square());
    Ok((a, b, cc))
}

/// A nonzero `α` with `P_{V(α)} = λ - r`: of the two roots, the one of larger magnitude,
/// ties broken by (real, imaginary) order. On the exact backend this fails with
/// `NotRational` when the discriminant is not a rational square.
pub fn alpha_for_root<F: Field>(r: &F, q: &F, c: &RLCoefficients<F>) -> Result<F> {
    let (a, b, cc) = alpha_quadratic(r, q, c)?;
    let disc = b.square().sub(&a.mul(&cc).mul(&a.int_like(4)));
    let s = disc.sqrt().ok_or_else(|| Error::NotRational(format!("discriminant {disc} for root {r}")))?;
    let two_a = a.mul(&a.int_like(2));
    let r1 = b.neg().add(&s).div(&two_a)?;
    let r2 = b.neg().sub(&s).div(&two_a)?;
    let pick = match r1.cmp_abs(&r2).then_with(|| r1.cmp_lex(&r2)) {
        std::cmp::Ordering::Less => r2,
        _ => r1,
    };
    if pick.is_zero() {
        return Err(Error::Assertion("zero evaluation parameter from a nonzero root product".into()));
    }
    Ok(pick)
}

fn check_coeffs<F: Field>(params: &QRacahParams<F>, c: &RLCoefficients<F>) -> Result<()> {
    let q = &params.q;
    let (b, cc) = (c.bbs(q)?, c.ccs(q)?);
    let ok = b.approx_eq(&params.bbs(), b.magnitude().max(1.0)) && cc.approx_eq(&params.ccs(), cc.magnitude().max(1.0));
    if !ok {
        return Err(Error::InvalidParameters("u, v, u*, v* do not match bb*, cc*".into()));
    }
    Ok(())
}

/// A standard module with Drinfel'd polynomial `P`: each root `r_i` gives `α_i` by
/// [`alpha_for_root`].
pub fn module_for_polynomial<F: Field>(
    p: &Polynomial<F>,
    params: &QRacahParams<F>,
    c: &RLCoefficients<F>,
    cfg: &PrecisionConfig,
) -> Result<StandardModule<F>> {
    check_coeffs(params, c)?;
    let d = p.degree().ok_or_else(|| Error::InvalidParameters("zero polynomial".into()))?;
    if !p.is_monic() && !p.leading().is_some_and(|x| x.approx_eq(&x.one_like(), 1.0)) {
        return Err(Error::InvalidParameters("Drinfel'd polynomial must be monic".into()));
    }
    check_feasible(&params.q, d)?;
    let roots = roots_in_field(p, cfg)?;
    let alphas: Vec<F> = roots.iter().map(|r| alpha_for_root(r, &params.q, c)).collect::<Result<_>>()?;
    let m = standard_module(&alphas, &params.q)?.with_rl(c);
    let got = drinfeld_polynomial(&m)?;
    if !got.approx_eq(p) {
        return Err(Error::Assertion(format!("constructed module has P_V = {got}, wanted {p}")));
    }
    Ok(m)
}

/// A standard module whose split sequence is `zetas`.
pub fn module_for_split_sequence<F: Field>(
    zetas: &SplitSequence<F>,
    params: &QRacahParams<F>,
    c: &RLCoefficients<F>,
    cfg: &PrecisionConfig,
) -> Result<StandardModule<F>> {
    check_coeffs(params, c)?;
    let sigmas = normalized_split(zetas, &params.q)?;
    let p = drinfeld_from_sigmas(&sigmas, &params.q, &params.bbs(), &params.ccs())?;
    let m = module_for_polynomial(&p, params, c, cfg)?;
    let got = split_sequence(&m)?;
    if !got.approx_eq(zetas) {
        return Err(Error::Assertion("constructed module has a different split sequence".into()));
    }
    Ok(m)
}

/// A module over the rationals when every evaluation parameter is rational, else over
/// the complex numbers.
#[derive(Clone, Debug)]
pub enum AnyModule {
    Exact(Box<StandardModule<RBig>>),
    Complex(Box<StandardModule<BigComplex>>),
}

impl AnyModule {
    pub fn is_exact(&self) -> bool {
        matches!(self, AnyModule::Exact(_))
    }
}

/// [`module_for_split_sequence`] from rational data: stays exact when possible and
/// otherwise reruns at the configured complex precision.
pub fn module_for_split_sequence_auto(
    zetas: &SplitSequence<RBig>,
    params: &QRacahParams<RBig>,
    c: &RLCoefficients<RBig>,
    cfg: &PrecisionConfig,
) -> Result<AnyModule> {
    match module_for_split_sequence(zetas, params, c, cfg) {
        Ok(m) => Ok(AnyModule::Exact(Box::new(m))),
        Err(Error::NotRational(_)) => {
            let lift = |x: &RBig| BigComplex::from_rational(x, cfg);
            let z = SplitSequence::new(zetas.zetas().iter().map(lift).collect())?;
            let cc = RLCoefficients { u: lift(&c.u), v: lift(&c.v), u_star: lift(&c.u_star), v_star: lift(&c.v_star) };
            Ok(AnyModule::Complex(Box::new(module_for_split_sequence(&z, &params.map(lift), &cc, cfg)?)))
        }
        Err(e) => Err(e),
    }
}

/// `σ(V ⊗ W)` from `σ_1(V)` (diameter 1) and `σ(W)` (diameter `d - 1`):
/// `σ_n = (q^(d-n) - q^(n-d))(bb* q^(n-d) - cc* q^(d-n)) σ_{n-1}(W) + σ_n(W) + σ_1(V) σ_{n-1}(W)`
/// for `1 ≤ n ≤ d-1`, and `σ_d = σ_1(V) σ_{d-1}(W)`.
pub fn sigma_recursion<F: Field>(sigma1_v: &F, sigma_w: &[F], q: &F, bbs: &F, ccs: &F) -> Result<Vec<F>> {
    let d = sigma_w.len();
    let mut out = vec![q.one_like()];
    for n in 1..d {
        let e = d as i64 - n as i64;
        let k = q_diff(q, e)?.mul(&bbs.mul(&q.powi(-e)?).sub(&ccs.mul(&q.powi(e)?)));
        out.push(k.mul(&sigma_w[n - 1]).add(&sigma_w[n]).add(&sigma1_v.mul(&sigma_w[n - 1])));
    }
    out.push(sigma1_v.mul(&sigma_w[d - 1]));
    Ok(out)
}
