//! Evaluation modules, their tensor products (standard modules) with the subset-indexed
//! basis, Chevalley generators and the operators `R`, `L` as matrices.

mod relations;

pub(crate) use relations::{same, serre_form, vanishes};
pub use relations::{verify_coproduct_powers, verify_rl_properties, verify_uq_relations};

use crate::error::{Error, Result};
use crate::linalg::{inverse, Matrix, Subspace};
use crate::report::Report;
use crate::scalar::{check_feasible, check_q, Field};
use crate::td::QRacahParams;

/// Coefficients of `R = u e0+ + v e1- K1` and `L = u* e1+ + v* e0- K0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RLCoefficients<F: Field> {
    pub u: F,
    pub v: F,
    pub u_star: F,
    pub v_star: F,
}

impl<F: Field> RLCoefficients<F> {
    /// Solves `u v* = -bb* q^-1 (q - q^-1)^2` and `v u* = -cc* q^-1 (q - q^-1)^2` for `v*`, `u*`.
    pub fn from_products(q: &F, bbs: &F, ccs: &F, u: &F, v: &F) -> Result<Self> {
        check_q(q)?;
        if u.is_zero() || v.is_zero() {
            return Err(Error::InvalidParameters("u and v must be nonzero".into()));
        }
        if bbs.is_zero() || ccs.is_zero() {
            return Err(Error::InvalidParameters("bb* and cc* must be nonzero".into()));
        }
        let k = rl_factor(q)?;
        Ok(RLCoefficients {
            u: u.clone(),
            v: v.clone(),
            u_star: ccs.mul(&k).neg().div(v)?,
            v_star: bbs.mul(&k).neg().div(u)?,
        })
    }

    /// `bb*` recovered from `u v*`.
    pub fn bbs(&self, q: &F) -> Result<F> {
        self.u.mul(&self.v_star).neg().div(&rl_factor(q)?)
    }

    /// `cc*` recovered from `v u*`.
    pub fn ccs(&self, q: &F) -> Result<F> {
        self.v.mul(&self.u_star).neg().div(&rl_factor(q)?)
    }

    /// `u ↦ t u`, `v* ↦ v*/t`, `v ↦ s v`, `u* ↦ u*/s`; the constrained products are unchanged.
    pub fn rescaled(&self, t: &F, s: &F) -> Result<Self> {
        Ok(RLCoefficients {
            u: self.u.mul(t),
            v_star: self.v_star.div(t)?,
            v: self.v.mul(s),
            u_star: self.u_star.div(s)?,
        })
    }
}

/// `q^-1 (q - q^-1)^2`.
fn rl_factor<F: Field>(q: &F) -> Result<F> {
    let d = q.sub(&q.inv()?);
    d.square().div(q)
}

/// Coefficients for the given parameters with the chosen `u`, `v` (default 1, 1).
pub fn rl_coefficients<F: Field>(params: &QRacahParams<F>, u: &F, v: &F) -> Result<RLCoefficients<F>> {
    RLCoefficients::from_products(&params.q, &params.bbs(), &params.ccs(), u, v)
}

/// The six Chevalley generator matrices in the order `K0, K1, e0+, e0-, e1+, e1-`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generators<F: Field> {
    pub k0: Matrix<F>,
    pub k1: Matrix<F>,
    pub e0p: Matrix<F>,
    pub e0m: Matrix<F>,
    pub e1p: Matrix<F>,
    pub e1m: Matrix<F>,
}

impl<F: Field> Generators<F> {
    fn trivial(ctx: &F::Ctx) -> Self {
        let id = Matrix::identity(1, ctx);
        let z = Matrix::zeros(1, 1, ctx);
        Generators { k0: id.clone(), k1: id, e0p: z.clone(), e0m: z.clone(), e1p: z.clone(), e1m: z }
    }

    fn evaluation(q: &F, alpha: &F) -> Result<Self> {
        let ctx = q.ctx();
        let qi = q.inv()?;
        let o = F::one(&ctx);
        let at = |r: usize, c: usize, x: F| {
            let mut m = Matrix::zeros(2, 2, &ctx);
            m.set(r, c, x);
            m
        };
        Ok(Generators {
            k0: Matrix::diag(&[qi.clone(), q.clone()], &ctx),
            k1: Matrix::diag(&[q.clone(), qi.clone()], &ctx),
            e1m: at(1, 0, o.clone()),
            e1p: at(0, 1, o),
            e0m: at(0, 1, q.div(alpha)?),
            e0p: at(1, 0, qi.mul(alpha)),
        })
    }

    pub fn all(&self) -> [&Matrix<F>; 6] {
        [&self.k0, &self.k1, &self.e0p, &self.e0m, &self.e1p, &self.e1m]
    }

    pub const NAMES: [&'static str; 6] = ["K0", "K1", "e0+", "e0-", "e1+", "e1-"];

    /// Action on `V ⊗ W` with `self` on `V`:
    /// `e+ ↦ e+ ⊗ K + 1 ⊗ e+`, `e- ↦ e- ⊗ 1 + K^-1 ⊗ e-`, `K ↦ K ⊗ K`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.k0.rows();
        let m = other.k0.rows();
        let ctx = self.k0.ctx();
        let (iv, iw) = (Matrix::identity(n, ctx), Matrix::identity(m, ctx));
        let k0i = diag_inverse(&self.k0)?;
        let k1i = diag_inverse(&self.k1)?;
        let plus = |e: &Matrix<F>, k: &Matrix<F>, e2: &Matrix<F>| e.tensor(k).add(&iv.tensor(e2));
        let minus = |e: &Matrix<F>, ki: &Matrix<F>, e2: &Matrix<F>| e.tensor(&iw).add(&ki.tensor(e2));
        Ok(Generators {
            k0: self.k0.tensor(&other.k0),
            k1: self.k1.tensor(&other.k1),
            e0p: plus(&self.e0p, &other.k0, &other.e0p),
            e1p: plus(&self.e1p, &other.k1, &other.e1p),
            e0m: minus(&self.e0m, &k0i, &other.e0m),
            e1m: minus(&self.e1m, &k1i, &other.e1m),
        })
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self.all().iter().zip(other.all()).all(|(a, b)| if F::EXACT { *a == b } else { a.approx_eq(b) })
    }
}

/// Inverse of a diagonal matrix (falls back to a general inverse otherwise).
pub(crate) fn diag_inverse<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>> {
    let n = m.rows();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || m.get(i, j).is_exact_zero()));
    if !diagonal {
        return inverse(m);
    }
    let d: Vec<F> = (0..n).map(|i| m.get(i, i).inv()).collect::<Result<_>>()?;
    Ok(Matrix::diag(&d, m.ctx()))
}

/// Powers `q^k` for `|k| ≤ bound`.
struct QPowers<F: Field> {
    table: Vec<F>,
    bound: i64,
}

impl<F: Field> QPowers<F> {
    fn new(q: &F, bound: i64) -> Result<Self> {
        let table = (-bound..=bound).map(|k| q.powi(k)).collect::<Result<_>>()?;
        Ok(QPowers { table, bound })
    }

    fn get(&self, k: i64) -> &F {
        &self.table[(k + self.bound) as usize]
    }
}

/// Index of the basis vector `u_s`: bit `i-1` is set exactly when `i ∈ s`.
pub fn subset_index(s: &[usize]) -> usize {
    s.iter().fold(0, |acc, &i| acc | (1 << (i - 1)))
}

/// The subset `s` (1-based, ascending) of the basis vector with the given index.
pub fn index_subset(index: usize, d: usize) -> Vec<usize> {
    (1..=d).filter(|&i| index >> (i - 1) & 1 == 1).collect()
}

/// Generator matrices from the closed-form sums for the action on `u_s`.
pub fn closed_form_generators<F: Field>(q: &F, alphas: &[F]) -> Result<Generators<F>> {
    let d = alphas.len();
    let ctx = q.ctx();
    if d == 0 {
        return Ok(Generators::trivial(&ctx));
    }
    let n = 1usize << d;
    let qp = QPowers::new(q, d as i64 + 1)?;
    let alpha_inv: Vec<F> = alphas.iter().map(|a| a.inv()).collect::<Result<_>>()?;
    let mut g = Generators {
        k0: Matrix::zeros(n, n, &ctx),
        k1: Matrix::zeros(n, n, &ctx),
        e0p: Matrix::zeros(n, n, &ctx),
        e0m: Matrix::zeros(n, n, &ctx),
        e1p: Matrix::zeros(n, n, &ctx),
        e1m: Matrix::zeros(n, n, &ctx),
    };
    for s in 0..n {
        let size = s.count_ones() as i64;
        g.k0.set(s, s, qp.get(2 * size - d as i64).clone());
        g.k1.set(s, s, qp.get(d as i64 - 2 * size).clone());
        for i in 1..=d {
            let bit = 1usize << (i - 1);
            let below_s = (s & (bit - 1)).count_ones() as i64;
            let below_c = (i as i64 - 1) - below_s;
            let above_s = (s >> i).count_ones() as i64;
            let above_c = (d - i) as i64 - above_s;
            if s & bit == 0 {
                let t = s | bit;
                g.e1m.set(t, s, qp.get(below_s - below_c).clone());
                g.e0p.set(t, s, alphas[i - 1].mul(qp.get(above_s - above_c - 1)));
            } else {
                let t = s & !bit;
                g.e1p.set(t, s, qp.get(above_c - above_s).clone());
                g.e0m.set(t, s, alpha_inv[i - 1].mul(qp.get(below_c - below_s + 1)));
            }
        }
    }
    Ok(g)
}

/// Generator matrices of `V(α₁) ⊗ (V(α₂) ⊗ (… ⊗ V(α_d)))` via the coproduct.
pub fn tensor_generators<F: Field>(q: &F, alphas: &[F]) -> Result<Generators<F>> {
    let mut acc = Generators::trivial(&q.ctx());
    for (k, alpha) in alphas.iter().enumerate().rev() {
        let v = Generators::evaluation(q, alpha)?;
        acc = if k + 1 == alphas.len() { v } else { v.tensor(&acc)? };
    }
    Ok(acc)
}

/// `R`, `L` and the coefficients they were built from.
#[derive(Clone, Debug, PartialEq)]
pub struct RLOperators<F: Field> {
    pub coeffs: RLCoefficients<F>,
    pub r: Matrix<F>,
    pub l: Matrix<F>,
}

/// A standard module `V(α₁) ⊗ … ⊗ V(α_d)` of dimension `2^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardModule<F: Field> {
    q: F,
    alphas: Vec<F>,
    gens: Generators<F>,
    rl: Option<RLOperators<F>>,
    weight_spaces: Vec<Subspace<F>>,
}

/// The evaluation module `V(α)` on the basis `(x, y) = (u_∅, u_{1})`.
pub fn evaluation_module<F: Field>(alpha: &F, q: &F) -> Result<StandardModule<F>> {
    standard_module(std::slice::from_ref(alpha), q)
}

/// Builds the standard module; generator matrices are built both from the closed forms and
/// by tensoring, and the two must agree.
pub fn standard_module<F: Field>(alphas: &[F], q: &F) -> Result<StandardModule<F>> {
    check_q(q)?;
    check_feasible(q, alphas.len())?;
    if alphas.iter().any(|a| a.is_zero()) {
        return Err(Error::ZeroAlpha);
    }
    let closed = closed_form_generators(q, alphas)?;
    let tensored = tensor_generators(q, alphas)?;
    if !closed.approx_eq(&tensored) {
        return Err(Error::Assertion("closed-form generators differ from the tensor construction".into()));
    }
    let m = StandardModule::from_generators(q.clone(), alphas.to_vec(), closed);
    let inv = m.check_invariants();
    if !inv.passed() {
        return Err(Error::Assertion(format!("standard module invariants fail: {:?}", inv.failure_names())));
    }
    Ok(m)
}

/// Computes `R`, `L` on the module, stores them and returns them.
pub fn rl_operators<F: Field>(m: &mut StandardModule<F>, coeffs: &RLCoefficients<F>) -> (Matrix<F>, Matrix<F>) {
    let g = &m.gens;
    let r = g.e0p.scale(&coeffs.u).add(&g.e1m.mul(&g.k1).scale(&coeffs.v));
    let l = g.e1p.scale(&coeffs.u_star).add(&g.e0m.mul(&g.k0).scale(&coeffs.v_star));
    m.rl = Some(RLOperators { coeffs: coeffs.clone(), r: r.clone(), l: l.clone() });
    (r, l)
}

impl<F: Field> StandardModule<F> {
    fn from_generators(q: F, alphas: Vec<F>, gens: Generators<F>) -> Self {
        let d = alphas.len();
        let ctx = q.ctx();
        let n = 1usize << d;
        let weight_spaces = (0..=d)
            .map(|i| {
                let idx: Vec<usize> = (0..n).filter(|s| s.count_ones() as usize == i).collect();
                Subspace::coordinate(n, &idx, &ctx)
            })
            .collect();
        StandardModule { q, alphas, gens, rl: None, weight_spaces }
    }

    /// The module with `R`, `L` attached.
    pub fn with_rl(mut self, coeffs: &RLCoefficients<F>) -> Self {
        rl_operators(&mut self, coeffs);
        self
    }

    /// `self ⊗ other` through the coproduct; `R`, `L` carry over when `self` has them.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if !self.q.approx_eq(&other.q, self.q.magnitude().max(1.0)) {
            return Err(Error::InvalidParameters("tensor factors use different q".into()));
        }
        let alphas: Vec<F> = self.alphas.iter().chain(&other.alphas).cloned().collect();
        check_feasible(&self.q, alphas.len())?;
        let gens = if self.d() == 0 {
            other.gens.clone()
        } else if other.d() == 0 {
            self.gens.clone()
        } else {
            self.gens.tensor(&other.gens)?
        };
        let mut m = StandardModule::from_generators(self.q.clone(), alphas, gens);
        if let Some(rl) = self.rl.as_ref().or(other.rl.as_ref()) {
            rl_operators(&mut m, &rl.coeffs.clone());
        }
        Ok(m)
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn d(&self) -> usize {
        self.alphas.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.d()
    }

    pub fn ctx(&self) -> F::Ctx {
        self.q.ctx()
    }

    pub fn alphas(&self) -> &[F] {
        &self.alphas
    }

    pub fn generators(&self) -> &Generators<F> {
        &self.gens
    }

    pub fn k0(&self) -> &Matrix<F> {
        &self.gens.k0
    }

    pub fn k1(&self) -> &Matrix<F> {
        &self.gens.k1
    }

    pub fn rl(&self) -> Option<&RLOperators<F>> {
        self.rl.as_ref()
    }

    pub fn r(&self) -> Result<&Matrix<F>> {
        self.rl.as_ref().map(|x| &x.r).ok_or_else(|| Error::InvalidParameters("R, L not attached".into()))
    }

    pub fn l(&self) -> Result<&Matrix<F>> {
        self.rl.as_ref().map(|x| &x.l).ok_or_else(|| Error::InvalidParameters("R, L not attached".into()))
    }

    /// `U_0, …, U_d`.
    pub fn weight_spaces(&self) -> &[Subspace<F>] {
        &self.weight_spaces
    }

    /// `u_∅` as a coordinate vector.
    pub fn highest_weight_vector(&self) -> Vec<F> {
        let ctx = self.ctx();
        let mut v = vec![F::zero(&ctx); self.dim()];
        v[0] = F::one(&ctx);
        v
    }

    /// Weight eigenvalues of `K0`, `K1`, `K0 K1 = I`, and the weight-space dimensions.
    pub fn check_invariants(&self) -> Report {
        let mut rep = Report::new();
        let d = self.d() as i64;
        let n = self.dim();
        let ctx = self.ctx();
        let ok_k = (0..n).all(|s| {
            let size = s.count_ones() as i64;
            let (Ok(a), Ok(b)) = (self.q.powi(2 * size - d), self.q.powi(d - 2 * size)) else { return false };
            let scale = a.magnitude().max(b.magnitude()).max(1.0);
            self.gens.k0.get(s, s).approx_eq(&a, scale) && self.gens.k1.get(s, s).approx_eq(&b, scale)
        });
        rep.check("K0, K1 weights on u_s", ok_k);
        let prod = self.gens.k0.mul(&self.gens.k1);
        rep.check("K0 K1 = I", prod.approx_eq(&Matrix::identity(n, &ctx)));
        let dims_ok = self.weight_spaces.iter().enumerate().all(|(i, u)| u.dim() == binomial(self.d(), i));
        let total: usize = self.weight_spaces.iter().map(Subspace::dim).sum();
        rep.check("dim U_i = C(d, i), V = ⊕ U_i", dims_ok && total == n);
        rep
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::scalar::{parse_rational, RBig};
    use proptest::prelude::*;

    fn r(s: &str) -> RBig {
        parse_rational(s).unwrap()
    }

    fn running_coeffs() -> RLCoefficients<RBig> {
        RLCoefficients::from_products(&r("2"), &r("1"), &r("6"), &r("1"), &r("1")).unwrap()
    }

    #[test]
    fn evaluation_module_action() {
        let m = evaluation_module(&r("1"), &r("2")).unwrap();
        let g = m.generators();
        let (x, y) = (vec![r("1"), r("0")], vec![r("0"), r("1")]);
        assert_eq!(g.e0p.apply(&x), vec![r("0"), r("1/2")]);
        assert_eq!(g.e0m.apply(&y), vec![r("2"), r("0")]);
        assert_eq!(g.k0, Matrix::diag(&[r("1/2"), r("2")], &()));
        assert_eq!(g.e1p.apply(&x), vec![r("0"), r("0")]);
        assert_eq!(g.e1m.apply(&y), vec![r("0"), r("0")]);
        let m3 = evaluation_module(&r("3/7"), &r("5"));
        assert_eq!(m3.unwrap().generators().e1p.apply(&x), vec![r("0"), r("0")]);
        assert!(matches!(evaluation_module(&r("0"), &r("2")), Err(Error::ZeroAlpha)));
    }

    #[test]
    fn trivial_module() {
        let m = standard_module::<RBig>(&[], &r("2")).unwrap();
        assert_eq!(m.dim(), 1);
        let g = m.generators();
        assert_eq!(g.k0, Matrix::identity(1, &()));
        assert_eq!(g.k1, Matrix::identity(1, &()));
        assert!(g.e0p.is_zero() && g.e0m.is_zero() && g.e1p.is_zero() && g.e1m.is_zero());
    }

    #[test]
    fn diameter_two_weights() {
        let m = standard_module(&[r("1"), r("1")], &r("2")).unwrap();
        assert_eq!(m.k0().get(0, 0), &r("1/4"));
        assert_eq!(m.k0().get(subset_index(&[1, 2]), subset_index(&[1, 2])), &r("4"));
        assert_eq!(m.weight_spaces()[1].dim(), 2);
    }

    #[test]
    fn infeasible_diameter_rejected() {
        let cfg = crate::scalar::PrecisionConfig::new(64);
        let qi = crate::scalar::BigComplex::from_parts_rational(&r("0"), &r("1"), &cfg);
        let one = crate::scalar::BigComplex::from_rational(&r("1"), &cfg);
        assert!(matches!(standard_module(&[one.clone(), one], &qi), Err(Error::InfeasibleDiameter { .. })));
    }

    #[test]
    fn rl_coefficient_values() {
        let c = running_coeffs();
        assert_eq!(c.v_star, r("-9/8"));
        assert_eq!(c.u_star, r("-27/4"));
        let s = c.rescaled(&r("3"), &r("1")).unwrap();
        assert_eq!(s.u.mul(&s.v_star), c.u.mul(&c.v_star));
        assert_eq!(s.bbs(&r("2")).unwrap(), r("1"));
        assert_eq!(s.ccs(&r("2")).unwrap(), r("6"));
        assert!(RLCoefficients::from_products(&r("2"), &r("1"), &r("6"), &r("0"), &r("1")).is_err());
    }

    #[test]
    fn rl_operator_values() {
        let mut m = evaluation_module(&r("1"), &r("2")).unwrap();
        let (rr, ll) = rl_operators(&mut m, &running_coeffs());
        assert_eq!(rr.apply(&[r("1"), r("0")]), vec![r("0"), r("5/2")]);
        assert_eq!(rr.apply(&[r("0"), r("1")]), vec![r("0"), r("0")]);
        assert_eq!(ll.apply(&[r("0"), r("1")]), vec![r("-45/4"), r("0")]);
        assert_eq!(ll.apply(&[r("1"), r("0")]), vec![r("0"), r("0")]);
        let mut t = standard_module::<RBig>(&[], &r("2")).unwrap();
        let (rr, ll) = rl_operators(&mut t, &running_coeffs());
        assert!(rr.is_zero() && ll.is_zero() && rr.rows() == 1);
    }

    #[test]
    fn module_tensor_matches_standard() {
        let q = r("3/2");
        let v = evaluation_module(&r("2"), &q).unwrap().with_rl(&running_coeffs());
        let w = standard_module(&[r("-1/3"), r("5")], &q).unwrap();
        let vw = v.tensor(&w).unwrap();
        let direct = standard_module(&[r("2"), r("-1/3"), r("5")], &q).unwrap().with_rl(&running_coeffs());
        assert_eq!(vw, direct);
    }

    #[test]
    fn subset_indexing() {
        assert_eq!(subset_index(&[]), 0);
        assert_eq!(subset_index(&[1, 3]), 5);
        assert_eq!(index_subset(5, 3), vec![1, 3]);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(2, 3), 0);
    }

    fn nonzero_rational() -> impl Strategy<Value = RBig> {
        (-9i64..=9, 1i64..=7).prop_filter("nonzero", |(n, _)| *n != 0).prop_map(|(n, d)| RBig::from(n) / RBig::from(d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn closed_forms_agree_with_tensoring(alphas in prop::collection::vec(nonzero_rational(), 0..=6), qn in 2i64..5) {
            let q = RBig::from(qn) / RBig::from(qn - 1);
            let a = closed_form_generators(&q, &alphas).unwrap();
            let b = tensor_generators(&q, &alphas).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
