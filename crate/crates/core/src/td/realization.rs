use serde::Serialize;

use super::{
    build_a_astar, condition_ii, eigen_sequences, fit_qracah, ConditionIICertificate, ParameterArray, QRacahParams,
};
use crate::drinfeld::module_for_split_sequence;
use crate::error::{Error, Result};
use crate::linalg::{
    closure_under, lagrange_idempotents, largest_invariant_in, quotient_basis, rank, Matrix, Subspace,
};
use crate::report::Report;
use crate::scalar::{Field, PrecisionConfig};
use crate::uq::{binomial, rl_coefficients, same};

/// A TD system given by matrices: `A`, `A*` with their primitive idempotents in standard
/// order, the eigenvalues along those orders and the shape `ρ_i = dim E_i L`.
#[derive(Clone, Debug, PartialEq)]
pub struct TDRealization<F: Field> {
    pub dim: usize,
    pub a: Matrix<F>,
    pub a_star: Matrix<F>,
    pub e: Vec<Matrix<F>>,
    pub e_star: Vec<Matrix<F>>,
    pub shape: Vec<usize>,
    pub thetas: Vec<F>,
    pub theta_stars: Vec<F>,
}

fn eigenvalues_from<F: Field>(m: &Matrix<F>, es: &[Matrix<F>], what: &str) -> Result<Vec<F>> {
    es.iter()
        .enumerate()
        .map(|(i, e)| {
            let tr = |x: &Matrix<F>| (0..x.rows()).fold(F::zero(x.ctx()), |acc, k| acc.add(x.get(k, k)));
            tr(&m.mul(e)).div(&tr(e)).map_err(|_| Error::InvalidParameters(format!("{what}_{i} has zero trace")))
        })
        .collect()
}

impl<F: Field> TDRealization<F> {
    pub fn d(&self) -> usize {
        self.e.len() - 1
    }

    /// Builds a realization from its matrices. Eigenvalues are read off as
    /// `tr(A E_i) / tr(E_i)` and the idempotents must match the Lagrange idempotents of
    /// those eigenvalues.
    pub fn from_parts(a: Matrix<F>, a_star: Matrix<F>, e: Vec<Matrix<F>>, e_star: Vec<Matrix<F>>) -> Result<Self> {
        let n = a.rows();
        let square = |m: &Matrix<F>| m.rows() == n && m.cols() == n;
        if n == 0 || !square(&a) || !square(&a_star) || !e.iter().chain(&e_star).all(square) {
            return Err(Error::DimensionMismatch("realization matrices must all be n×n with n ≥ 1".into()));
        }
        if e.is_empty() || e.len() != e_star.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} idempotents E and {} idempotents E*",
                e.len(),
                e_star.len()
            )));
        }
        let thetas = eigenvalues_from(&a, &e, "E")?;
        let theta_stars = eigenvalues_from(&a_star, &e_star, "E*")?;
        for (m, es, th, what) in [(&a, &e, &thetas, "E"), (&a_star, &e_star, &theta_stars, "E*")] {
            let lag = lagrange_idempotents(m, th)?;
            if !lag.iter().zip(es.iter()).all(|(x, y)| same(x, y)) {
                return Err(Error::InvalidParameters(format!("{what} are not the primitive idempotents")));
            }
        }
        let shape = e.iter().map(rank).collect();
        Ok(TDRealization { dim: n, a, a_star, e, e_star, shape, thetas, theta_stars })
    }

    /// The stored invariants: both idempotent families resolve the identity, are orthogonal
    /// idempotents and reproduce `A`, `A*`; `ρ_0 = 1` and `ρ_i = ρ_{d-i}`.
    pub fn check_invariants(&self) -> Report {
        let mut rep = Report::new();
        let n = self.dim;
        let ctx = self.a.ctx();
        for (m, es, th, what) in
            [(&self.a, &self.e, &self.thetas, "E"), (&self.a_star, &self.e_star, &self.theta_stars, "E*")]
        {
            let sum = es.iter().fold(Matrix::zeros(n, n, ctx), |acc, e| acc.add(e));
            rep.check(format!("Σ {what}_i = I"), same(&sum, &Matrix::identity(n, ctx)));
            let mut orth = true;
            for (i, x) in es.iter().enumerate() {
                for (j, y) in es.iter().enumerate() {
                    let p = x.mul(y);
                    orth &= if i == j { same(&p, x) } else { same(&p, &Matrix::zeros(n, n, ctx)) };
                }
            }
            rep.check(format!("{what}_i {what}_j = δ_ij {what}_i"), orth);
            let recon = es.iter().zip(th).fold(Matrix::zeros(n, n, ctx), |acc, (e, t)| acc.add(&e.scale(t)));
            let name = if what == "E" { "A = Σ θ_i E_i" } else { "A* = Σ θ*_i E*_i" };
            rep.check(name, same(&recon, m));
        }
        let d = self.d();
        rep.check_with("ρ_0 = 1", self.shape[0] == 1, format!("{:?}", self.shape));
        rep.check("ρ_i = ρ_{d-i}", (0..=d).all(|i| self.shape[i] == self.shape[d - i]));
        rep.check("Σ ρ_i = dim", self.shape.iter().sum::<usize>() == n);
        rep
    }
}

/// Options for [`construct_realization`].
#[derive(Clone, Debug)]
pub struct BuildOptions<F: Field> {
    /// Parameters to use instead of fitting them to the eigenvalue sequences.
    pub params: Option<QRacahParams<F>>,
    pub u: F,
    pub v: F,
    pub max_d: usize,
    pub precision: PrecisionConfig,
}

impl<F: Field> BuildOptions<F> {
    /// `u = v = 1`; diameter limit 6 on exact backends and 10 otherwise.
    pub fn new(ctx: &F::Ctx) -> Self {
        BuildOptions {
            params: None,
            u: F::one(ctx),
            v: F::one(ctx),
            max_d: if F::EXACT { 6 } else { 10 },
            precision: PrecisionConfig::default(),
        }
    }
}

/// The three facts that together force irreducibility: `dim E V = 1`, `E V` generates
/// everything under `A`, `A*`, and `ker E` contains no nonzero invariant subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityCertificate {
    pub eigenspace_dim: usize,
    pub generated_dim: usize,
    pub invariant_kernel_dim: usize,
    pub total_dim: usize,
}

impl IrreducibilityCertificate {
    pub fn holds(&self) -> bool {
        self.eigenspace_dim == 1 && self.generated_dim == self.total_dim && self.invariant_kernel_dim == 0
    }
}

/// Computes the certificate for the idempotent `e`, returning the subspaces involved.
pub(crate) fn certify<F: Field>(
    a: &Matrix<F>,
    a_star: &Matrix<F>,
    e: &Matrix<F>,
) -> (IrreducibilityCertificate, Subspace<F>, Subspace<F>) {
    let ops = [a, a_star];
    let image = Subspace::image(e);
    let generated = closure_under(&ops, &image);
    let inv = largest_invariant_in(&ops, &Subspace::kernel(e));
    let cert = IrreducibilityCertificate {
        eigenspace_dim: image.dim(),
        generated_dim: generated.dim(),
        invariant_kernel_dim: inv.dim(),
        total_dim: a.rows(),
    };
    (cert, generated, inv)
}

pub fn irreducibility_certificate<F: Field>(
    a: &Matrix<F>,
    a_star: &Matrix<F>,
    e: &Matrix<F>,
) -> IrreducibilityCertificate {
    certify(a, a_star, e).0
}

/// What the construction did along the way.
#[derive(Clone, Debug)]
pub struct ConstructionTrace<F: Field> {
    pub params: QRacahParams<F>,
    pub alphas: Vec<F>,
    pub module_dim: usize,
    /// `dim T E*_0 V`
    pub generated_dim: usize,
    /// `dim M`, the maximal proper submodule
    pub maximal_dim: usize,
    pub condition: ConditionIICertificate<F>,
    pub certificate: IrreducibilityCertificate,
}

fn resolve_params<F: Field>(pa: &ParameterArray<F>, supplied: Option<&QRacahParams<F>>) -> Result<QRacahParams<F>> {
    let Some(p) = supplied else {
        return fit_qracah(&pa.thetas, &pa.theta_stars, pa.q.as_ref());
    };
    if p.d != pa.d() {
        return Err(Error::InvalidParameters(format!("parameters have d = {}, array has d = {}", p.d, pa.d())));
    }
    p.validate()?;
    let (th, ts) = eigen_sequences(p)?;
    let matches = |xs: &[F], ys: &[F]| xs.iter().zip(ys).all(|(x, y)| x.approx_eq(y, x.magnitude().max(1.0)));
    if !matches(&th, &pa.thetas) || !matches(&ts, &pa.theta_stars) {
        return Err(Error::InvalidParameters("supplied parameters do not reproduce the eigenvalue sequences".into()));
    }
    Ok(p.clone())
}

/// `∏_{k≥1} (A* - θ*_k) / (θ*_0 - θ*_k)`.
fn first_idempotent<F: Field>(a_star: &Matrix<F>, ts: &[F]) -> Result<Matrix<F>> {
    let n = a_star.rows();
    let mut e = Matrix::identity(n, a_star.ctx());
    for t in &ts[1..] {
        e = e.mul(&a_star.add_scalar(&t.neg())).scale(&ts[0].sub(t).inv()?);
    }
    Ok(e)
}

/// A TD system with parameter array `pa`: a standard module with split sequence `ζ`,
/// `A`, `A*` on it, the submodule `W` generated by `E*_0 V`, its maximal proper submodule
/// `M`, and `A`, `A*` on `W / M`.
pub fn construct_realization<F: Field>(pa: &ParameterArray<F>, opts: &BuildOptions<F>) -> Result<TDRealization<F>> {
    Ok(construct_realization_traced(pa, opts)?.0)
}

/// [`construct_realization`] together with the intermediate dimensions and certificates.
pub fn construct_realization_traced<F: Field>(
    pa: &ParameterArray<F>,
    opts: &BuildOptions<F>,
) -> Result<(TDRealization<F>, ConstructionTrace<F>)> {
    let d = pa.d();
    if d > opts.max_d {
        return Err(Error::DiameterLimit { d, limit: opts.max_d });
    }
    let condition = condition_ii(pa).into_result()?;
    let params = resolve_params(pa, opts.params.as_ref())?;
    let coeffs = rl_coefficients(&params, &opts.u, &opts.v)?;
    let m = module_for_split_sequence(&pa.zetas, &params, &coeffs, &opts.precision)?;
    let (a, a_star) = build_a_astar(&m, &params)?;
    let (th, ts) = (&pa.thetas, &pa.theta_stars);

    let ops = [&a, &a_star];
    let e0s = first_idempotent(&a_star, ts)?;
    let w = closure_under(&ops, &Subspace::image(&e0s));
    let bound = Subspace::kernel(&e0s).intersect(&w);
    let msub = largest_invariant_in(&ops, &bound);
    let qb = quotient_basis(&msub, &w)?;
    let al = qb.action(&a)?;
    let asl = qb.action(&a_star)?;
    let e = lagrange_idempotents(&al, th)?;
    let e_star = lagrange_idempotents(&asl, ts)?;

    let certificate = irreducibility_certificate(&al, &asl, &e_star[0]);
    if !certificate.holds() {
        return Err(Error::Assertion(format!("quotient fails the irreducibility certificate: {certificate:?}")));
    }
    let shape: Vec<usize> = e.iter().map(rank).collect();
    let dual_shape: Vec<usize> = e_star.iter().map(rank).collect();
    if shape.contains(&0) || dual_shape.contains(&0) {
        return Err(Error::Assertion(format!("an eigenspace vanishes on the quotient: {shape:?}, {dual_shape:?}")));
    }
    let r = TDRealization {
        dim: al.rows(),
        a: al,
        a_star: asl,
        e,
        e_star,
        shape,
        thetas: th.clone(),
        theta_stars: ts.clone(),
    };
    let inv = r.check_invariants();
    if !inv.passed() {
        return Err(Error::Assertion(format!(
            "realization invariants fail: {:?} (shape {:?})",
            inv.failure_names(),
            r.shape
        )));
    }
    let trace = ConstructionTrace {
        params,
        alphas: m.alphas().to_vec(),
        module_dim: m.dim(),
        generated_dim: w.dim(),
        maximal_dim: msub.dim(),
        condition,
        certificate,
    };
    Ok((r, trace))
}

/// `ζ_i` from `E*_0 τ_i(A) E*_0 = ζ_i E*_0 / ((θ*_0 - θ*_1)…(θ*_0 - θ*_i))`, with `E*_0` of rank one.
pub(crate) fn split_from_idempotent<F: Field>(a: &Matrix<F>, e0s: &Matrix<F>, th: &[F], ts: &[F]) -> Result<Vec<F>> {
    let n = a.rows();
    let (mut pj, mut pk, mut best) = (0, 0, 0.0);
    for j in 0..n {
        for k in 0..n {
            let mag = e0s.get(j, k).magnitude();
            if mag > best {
                (pj, pk, best) = (j, k, mag);
            }
        }
    }
    if best == 0.0 {
        return Err(Error::Proportionality("E*_0 is zero".into()));
    }
    let pivot = e0s.get(pj, pk).clone();
    let mut tau = Matrix::identity(n, a.ctx());
    let mut denom = pivot.one_like();
    let mut zetas = Vec::with_capacity(th.len());
    for i in 0..th.len() {
        if i > 0 {
            tau = tau.mul(&a.add_scalar(&th[i - 1].neg()));
            denom = denom.mul(&ts[0].sub(&ts[i]));
        }
        let x = e0s.mul(&tau).mul(e0s);
        let s = x.get(pj, pk).div(&pivot)?;
        if !same(&x, &e0s.scale(&s)) {
            return Err(Error::Proportionality(format!("E*_0 τ_{i}(A) E*_0 is not a multiple of E*_0")));
        }
        zetas.push(s.mul(&denom));
    }
    Ok(zetas)
}

/// The parameter array along the stored orderings.
pub fn parameter_array_of<F: Field>(r: &TDRealization<F>) -> Result<ParameterArray<F>> {
    let zetas = split_from_idempotent(&r.a, &r.e_star[0], &r.thetas, &r.theta_stars)?;
    ParameterArray::new(r.thetas.clone(), r.theta_stars.clone(), zetas, None)
}

/// Shape of a realization with the checks on it.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeVerdict {
    pub shape: Vec<usize>,
    pub report: Report,
}

/// `ρ_i = dim E_i L` with `ρ_i = dim E*_i L`, `ρ_i = ρ_{d-i}`, `ρ_0 = 1`, unimodality and
/// `ρ_i ≤ C(d, i)`.
pub fn shape_check<F: Field>(r: &TDRealization<F>) -> ShapeVerdict {
    let shape: Vec<usize> = r.e.iter().map(rank).collect();
    let dual: Vec<usize> = r.e_star.iter().map(rank).collect();
    let d = shape.len() - 1;
    let mut rep = Report::new();
    rep.check_with("ρ_i = dim E*_i L", shape == dual, format!("{shape:?} vs {dual:?}"));
    rep.check("ρ_i = ρ_{d-i}", (0..=d).all(|i| shape[i] == shape[d - i]));
    rep.check("ρ_0 = 1", shape[0] == 1);
    rep.check("ρ_{i-1} ≤ ρ_i for 2i ≤ d", (1..=d / 2).all(|i| shape[i - 1] <= shape[i]));
    rep.check("ρ_i ≤ C(d, i)", (0..=d).all(|i| shape[i] <= binomial(d, i)));
    rep.check("stored shape matches", shape == r.shape);
    ShapeVerdict { shape, report: rep }
}

#[cfg(test)]
mod tests {
    use super::super::params::tests::running;
    use super::*;
    use crate::drinfeld::split_sequence;
    use crate::error::ConditionClause;
    use crate::linalg::tests::m as mat;
    use crate::scalar::{parse_rational, RBig};
    use crate::uq::standard_module;

    fn r(s: &str) -> RBig {
        parse_rational(s).unwrap()
    }

    fn rs(xs: &[&str]) -> Vec<RBig> {
        xs.iter().map(|s| r(s)).collect()
    }

    fn opts() -> BuildOptions<RBig> {
        BuildOptions::new(&())
    }

    #[test]
    fn d0_realization() {
        let pa = ParameterArray::new(rs(&["5"]), rs(&["-2"]), rs(&["1"]), None).unwrap();
        let real = construct_realization(&pa, &opts()).unwrap();
        assert_eq!(real.dim, 1);
        assert_eq!(real.a, mat(&[&["5"]]));
        assert_eq!(real.a_star, mat(&[&["-2"]]));
        assert_eq!(shape_check(&real).shape, vec![1]);
        assert_eq!(parameter_array_of(&real).unwrap().zetas.zetas(), &rs(&["1"])[..]);
    }

    #[test]
    fn d1_realization() {
        let pa = ParameterArray::new(rs(&["13/2", "7/2"]), rs(&["9/2", "3"]), rs(&["1", "-225/8"]), None).unwrap();
        let (real, trace) = construct_realization_traced(&pa, &opts()).unwrap();
        assert_eq!(real.dim, 2);
        assert_eq!(real.shape, vec![1, 1]);
        assert_eq!((trace.generated_dim, trace.maximal_dim), (2, 0));
        assert_eq!(trace.params, running(1));
        // α = 1 and α = 8/3 give the same Drinfel'd polynomial; the larger one is chosen
        assert_eq!(trace.alphas, rs(&["8/3"]));
        assert_eq!(parameter_array_of(&real).unwrap(), pa);
        let v = shape_check(&real);
        assert!(v.report.passed());
        assert_eq!(v.shape, vec![1, 1]);
    }

    #[test]
    fn d2_realization_round_trips() {
        let p = running(2);
        let c = rl_coefficients(&p, &r("1"), &r("1")).unwrap();
        let m = standard_module(&rs(&["1", "1"]), &p.q).unwrap().with_rl(&c);
        let z = split_sequence(&m).unwrap();
        assert_eq!(z.zetas(), &rs(&["1", "-1521/16", "1265625/256"])[..]);
        let (th, ts) = eigen_sequences(&p).unwrap();
        let pa = ParameterArray::new(th, ts, z.zetas().to_vec(), Some(r("2"))).unwrap();
        let real = construct_realization(&pa, &opts()).unwrap();
        let v = shape_check(&real);
        assert!(v.report.passed(), "{:?}", v.report.failure_names());
        assert_eq!(v.shape.len(), 3);
        assert!(v.shape[1] <= 2);
        assert!(parameter_array_of(&real).unwrap().same_array(&pa));
    }

    #[test]
    fn refusals() {
        let bad = ParameterArray::new(rs(&["13/2", "7/2"]), rs(&["9/2", "3"]), rs(&["1", "-9/2"]), None).unwrap();
        match construct_realization(&bad, &opts()) {
            Err(Error::ConditionII { clause, certificate }) => {
                assert_eq!(clause, ConditionClause::SumZero);
                assert!(certificate.contains("\"sum\":\"0\""));
            }
            other => panic!("expected refusal, got {other:?}"),
        }
        let zero = ParameterArray::new(rs(&["13/2", "7/2"]), rs(&["9/2", "3"]), rs(&["1", "0"]), None).unwrap();
        assert!(matches!(
            construct_realization(&zero, &opts()),
            Err(Error::ConditionII { clause: ConditionClause::ZetaDZero, .. })
        ));
        let pa = ParameterArray::new(rs(&["13/2", "7/2"]), rs(&["9/2", "3"]), rs(&["1", "-225/8"]), None).unwrap();
        let mut o = opts();
        o.max_d = 0;
        assert!(matches!(construct_realization(&pa, &o), Err(Error::DiameterLimit { d: 1, limit: 0 })));
    }

    #[test]
    fn from_parts_recovers_eigenvalues() {
        let pa = ParameterArray::new(rs(&["13/2", "7/2"]), rs(&["9/2", "3"]), rs(&["1", "-225/8"]), None).unwrap();
        let real = construct_realization(&pa, &opts()).unwrap();
        let again = TDRealization::from_parts(real.a.clone(), real.a_star.clone(), real.e.clone(), real.e_star.clone())
            .unwrap();
        assert_eq!(again, real);
        let mut swapped = real.e.clone();
        swapped.swap(0, 1);
        let rev = TDRealization::from_parts(real.a.clone(), real.a_star.clone(), swapped, real.e_star.clone()).unwrap();
        assert_eq!(rev.thetas, rs(&["7/2", "13/2"]));
        let mut broken = real.e.clone();
        broken[0] = broken[0].scale(&r("2"));
        assert!(TDRealization::from_parts(real.a.clone(), real.a_star.clone(), broken, real.e_star.clone()).is_err());
    }
}
