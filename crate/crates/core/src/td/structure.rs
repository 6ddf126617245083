use super::{condition_ii, eigen_sequences, DerivedConstants, ParameterArray, QRacahParams};
use crate::drinfeld::split_sequence;
use crate::error::{Error, Result};
use crate::linalg::{lagrange_idempotents, Matrix, Subspace};
use crate::poly::{eta_at, tau_at};
use crate::report::Report;
use crate::scalar::Field;
use crate::uq::{binomial, same, serre_form, vanishes, StandardModule};

fn same_scalar<F: Field>(x: &F, y: &F) -> bool {
    x.approx_eq(y, x.magnitude().max(y.magnitude()).max(1.0))
}

/// `A = a + b K0 + c K1 + R` and `A* = a* + b* K0 + c* K1 + L` on the module.
///
/// Asserts `(A - θ_i) U_i ⊆ U_{i+1}` and `(A* - θ*_i) U_i ⊆ U_{i-1}`.
pub fn build_a_astar<F: Field>(m: &StandardModule<F>, p: &QRacahParams<F>) -> Result<(Matrix<F>, Matrix<F>)> {
    let d = m.d();
    if d != p.d {
        return Err(Error::InvalidParameters(format!("module diameter {d} differs from parameter diameter {}", p.d)));
    }
    if !same_scalar(m.q(), &p.q) {
        return Err(Error::InvalidParameters(format!("module q = {} differs from parameter q = {}", m.q(), p.q)));
    }
    let n = m.dim();
    let ctx = m.ctx();
    let part = |a: &F, b: &F, c: &F| Matrix::scalar(n, a).add(&m.k0().scale(b)).add(&m.k1().scale(c));
    let a = part(&p.a, &p.b, &p.c).add(m.r()?);
    let a_star = part(&p.a_star, &p.b_star, &p.c_star).add(m.l()?);
    let (th, ts) = eigen_sequences(p)?;
    let u = m.weight_spaces();
    let zero = Subspace::zero(n, &ctx);
    for i in 0..=d {
        let up = if i < d { &u[i + 1] } else { &zero };
        let down = if i > 0 { &u[i - 1] } else { &zero };
        for v in u[i].basis() {
            if !up.contains(&a.add_scalar(&th[i].neg()).apply(v)) {
                return Err(Error::Assertion(format!("(A - θ_{i}) U_{i} is not contained in U_{}", i + 1)));
            }
            if !down.contains(&a_star.add_scalar(&ts[i].neg()).apply(v)) {
                return Err(Error::Assertion(format!("(A* - θ*_{i}) U_{i} is not contained in U_{}", i as i64 - 1)));
            }
        }
    }
    Ok((a, a_star))
}

/// Both tridiagonal relations
/// `A^3A* - [3]A^2A*A + [3]AA*A^2 - A*A^3 = γ(A^2A* - A*A^2) + ϱ(AA* - A*A)` and its dual.
pub fn verify_tridiagonal_relations<F: Field>(a: &Matrix<F>, a_star: &Matrix<F>, k: &DerivedConstants<F>) -> Report {
    let mut rep = Report::new();
    let shaped = a.is_square() && a_star.is_square() && a.rows() == a_star.rows();
    rep.check("A, A* square of equal size", shaped);
    if !shaped {
        return rep;
    }
    let b3 = k.beta.add(&k.beta.one_like());
    let rhs = |x: &Matrix<F>, y: &Matrix<F>, g: &F, r: &F| {
        let x2 = x.mul(x);
        x2.mul(y).sub(&y.mul(&x2)).scale(g).add(&x.mul(y).sub(&y.mul(x)).scale(r))
    };
    rep.check(
        "A^3A* - [3]A^2A*A + [3]AA*A^2 - A*A^3 = γ(A^2A* - A*A^2) + ϱ(AA* - A*A)",
        same(&serre_form(a, a_star, &b3), &rhs(a, a_star, &k.gamma, &k.rho)),
    );
    rep.check(
        "A*^3A - [3]A*^2AA* + [3]A*AA*^2 - AA*^3 = γ*(A*^2A - AA*^2) + ϱ*(A*A - AA*)",
        same(&serre_form(a_star, a, &b3), &rhs(a_star, a, &k.gamma_star, &k.rho_star)),
    );
    rep
}

/// `γ = θ_{i-1} - βθ_i + θ_{i+1}` and `ϱ = θ_{i-1}^2 - βθ_{i-1}θ_i + θ_i^2 - γ(θ_{i-1} + θ_i)`
/// along both sequences.
pub fn verify_recurrences<F: Field>(thetas: &[F], theta_stars: &[F], k: &DerivedConstants<F>) -> Report {
    let mut rep = Report::new();
    for (xs, g, r, star) in [(thetas, &k.gamma, &k.rho, ""), (theta_stars, &k.gamma_star, &k.rho_star, "*")] {
        let d = xs.len() - 1;
        for i in 1..d {
            let v = xs[i - 1].sub(&k.beta.mul(&xs[i])).add(&xs[i + 1]);
            rep.check(format!("γ{star} = θ{star}_{} - βθ{star}_{i} + θ{star}_{}", i - 1, i + 1), same_scalar(&v, g));
        }
        for i in 1..=d {
            let (x, y) = (&xs[i - 1], &xs[i]);
            let v = x.square().sub(&k.beta.mul(x).mul(y)).add(&y.square()).sub(&g.mul(&x.add(y)));
            rep.check(format!("ϱ{star} from θ{star}_{} and θ{star}_{i}", i - 1), same_scalar(&v, r));
        }
    }
    rep
}

fn equal_spaces<F: Field>(x: &Subspace<F>, y: &Subspace<F>) -> bool {
    x.dim() == y.dim() && x.contains_subspace(y) && y.contains_subspace(x)
}

/// Structural facts about `A`, `A*` on a standard module: eigenspace dimensions, the two
/// flags, the diagonal entries `a_0`, `a*_d`, quasi-tridiagonality, the τ formula for the
/// split sequence and nonvanishing of `E*_0 E_0 E*_0`, `E*_0 E_d E*_0`.
pub fn verify_module_structure<F: Field>(
    m: &StandardModule<F>,
    a: &Matrix<F>,
    a_star: &Matrix<F>,
    p: &QRacahParams<F>,
) -> Report {
    let mut rep = Report::new();
    let (th, ts) = match eigen_sequences(p) {
        Ok(x) => x,
        Err(e) => {
            rep.check_with("eigenvalue sequences", false, e.to_string());
            return rep;
        }
    };
    let d = p.d;
    let n = m.dim();
    let ctx = m.ctx();
    let (es, ess) = match (lagrange_idempotents(a, &th), lagrange_idempotents(a_star, &ts)) {
        (Ok(x), Ok(y)) => (x, y),
        (x, y) => {
            rep.check_with(
                "A diagonalizable with eigenvalues θ",
                x.is_ok(),
                x.err().map(|e| e.to_string()).unwrap_or_default(),
            );
            rep.check_with(
                "A* diagonalizable with eigenvalues θ*",
                y.is_ok(),
                y.err().map(|e| e.to_string()).unwrap_or_default(),
            );
            return rep;
        }
    };
    rep.check("A diagonalizable with eigenvalues θ", true);
    rep.check("A* diagonalizable with eigenvalues θ*", true);

    let im: Vec<Subspace<F>> = es.iter().map(Subspace::image).collect();
    let ims: Vec<Subspace<F>> = ess.iter().map(Subspace::image).collect();
    for i in 0..=d {
        let c = binomial(d, i);
        rep.check_with(format!("dim E_{i}V = C({d},{i})"), im[i].dim() == c, format!("{} vs {c}", im[i].dim()));
        rep.check_with(format!("dim E*_{i}V = C({d},{i})"), ims[i].dim() == c, format!("{} vs {c}", ims[i].dim()));
    }

    let u = m.weight_spaces();
    let mut e_top = Subspace::zero(n, &ctx);
    let mut u_top = Subspace::zero(n, &ctx);
    for i in (0..=d).rev() {
        e_top = e_top.sum(&im[i]);
        u_top = u_top.sum(&u[i]);
        rep.check(format!("E_{i}V + … + E_{d}V = U_{i} + … + U_{d}"), equal_spaces(&e_top, &u_top));
    }
    let mut e_bot = Subspace::zero(n, &ctx);
    let mut u_bot = Subspace::zero(n, &ctx);
    for i in 0..=d {
        e_bot = e_bot.sum(&ims[i]);
        u_bot = u_bot.sum(&u[i]);
        rep.check(format!("E*_0V + … + E*_{i}V = U_0 + … + U_{i}"), equal_spaces(&e_bot, &u_bot));
    }

    let zetas = match split_sequence(m) {
        Ok(z) => z,
        Err(e) => {
            rep.check_with("split sequence", false, e.to_string());
            return rep;
        }
    };
    let zs = zetas.zetas();
    let e0s = &ess[0];
    let scale = a.max_magnitude().max(a_star.max_magnitude()).max(1.0);

    if d >= 1 {
        let a0 = zs[1].div(&ts[0].sub(&ts[1])).map(|x| th[0].add(&x));
        let ad = th[d - 1].sub(&th[d]).inv().map(|inv| {
            let num = zs[1].add(&ts[0].sub(&ts[1]).mul(&th[0].sub(&th[d - 1])));
            ts[1].sub(&num.mul(&inv))
        });
        match (a0, ad) {
            (Ok(a0), Ok(ad)) => {
                rep.check_with(
                    "E*_0 A E*_0 = a_0 E*_0 with a_0 = θ_0 + ζ_1/(θ*_0 - θ*_1)",
                    same(&e0s.mul(a).mul(e0s), &e0s.scale(&a0)),
                    format!("a_0 = {a0}"),
                );
                rep.check_with(
                    "E_d A* E_d = a*_d E_d with a*_d = θ*_1 - (ζ_1 + (θ*_0 - θ*_1)(θ_0 - θ_{d-1}))/(θ_{d-1} - θ_d)",
                    same(&es[d].mul(a_star).mul(&es[d]), &es[d].scale(&ad)),
                    format!("a*_d = {ad}"),
                );
            }
            _ => rep.check("a_0, a*_d denominators nonzero", false),
        }
    }

    let a_star_e: Vec<Matrix<F>> = es.iter().map(|e| a_star.mul(e)).collect();
    let a_es: Vec<Matrix<F>> = ess.iter().map(|e| a.mul(e)).collect();
    let s2 = scale * es.iter().chain(&ess).map(|e| e.max_magnitude()).fold(1.0, f64::max).powi(2);
    for i in 0..=d {
        for j in 0..=d {
            if i.abs_diff(j) > 1 {
                rep.check(format!("E_{i} A* E_{j} = 0"), vanishes(&es[i].mul(&a_star_e[j]), s2));
                rep.check(format!("E*_{i} A E*_{j} = 0"), vanishes(&ess[i].mul(&a_es[j]), s2));
            }
        }
    }

    let mut tau = Matrix::identity(n, &ctx);
    let mut denom = th[0].one_like();
    for i in 0..=d {
        if i > 0 {
            tau = tau.mul(&a.add_scalar(&th[i - 1].neg()));
            denom = denom.mul(&ts[0].sub(&ts[i]));
        }
        let ok = zs[i].div(&denom).map(|c| same(&e0s.mul(&tau).mul(e0s), &e0s.scale(&c))).unwrap_or(false);
        rep.check(format!("E*_0 τ_{i}(A) E*_0 = ζ_{i} E*_0 / ∏(θ*_0 - θ*_k)"), ok);
    }

    if let Ok(pa) = ParameterArray::new(th.clone(), ts.clone(), zs.to_vec(), Some(p.q.clone())) {
        if condition_ii(&pa).holds {
            let t0 = e0s.mul(&es[0]).mul(e0s);
            let td = e0s.mul(&es[d]).mul(e0s);
            rep.check("E*_0 E_0 E*_0 ≠ 0", !vanishes(&t0, s2));
            rep.check("E*_0 E_d E*_0 ≠ 0", !vanishes(&td, s2));
            let coef = tau_at(&th, d, &th[d]).mul(&eta_at(&ts, d, &ts[0])).inv().map(|x| x.mul(&zs[d]));
            let ok = coef.map(|c| same(&td, &e0s.scale(&c))).unwrap_or(false);
            rep.check("E*_0 E_d E*_0 = ζ_d E*_0 / (τ_d(θ_d) η*_d(θ*_0))", ok);
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::super::derived_constants;
    use super::super::params::tests::running;
    use super::*;
    use crate::linalg::tests::m as mat;
    use crate::scalar::{parse_rational, RBig};
    use crate::uq::{rl_coefficients, standard_module};
    use proptest::prelude::*;

    fn r(s: &str) -> RBig {
        parse_rational(s).unwrap()
    }

    fn module(alphas: &[&str]) -> (StandardModule<RBig>, QRacahParams<RBig>) {
        let p = running(alphas.len());
        let al: Vec<RBig> = alphas.iter().map(|s| r(s)).collect();
        let c = rl_coefficients(&p, &r("1"), &r("1")).unwrap();
        (standard_module(&al, &p.q).unwrap().with_rl(&c), p)
    }

    #[test]
    fn d1_matrices() {
        let (m, p) = module(&["1"]);
        let (a, a_star) = build_a_astar(&m, &p).unwrap();
        assert_eq!(a, mat(&[&["13/2", "0"], &["5/2", "7/2"]]));
        assert_eq!(a_star, mat(&[&["9/2", "-45/4"], &["0", "3"]]));
        let k = derived_constants(&p).unwrap();
        let rep = verify_tridiagonal_relations(&a, &a_star, &k);
        assert!(rep.passed(), "{:?}", rep.failure_names());
        let rep = verify_module_structure(&m, &a, &a_star, &p);
        assert!(rep.passed(), "{:?}", rep.failure_names());
        let a0 = rep.checks.iter().find(|c| c.name.starts_with("E*_0 A E*_0")).unwrap();
        assert_eq!(a0.detail.as_deref(), Some("a_0 = -49/4"));
        assert!(!rep.checks.iter().any(|c| c.name.contains("A* E_") && c.name.ends_with("= 0")));
    }

    #[test]
    fn r_acts_as_a_minus_theta() {
        let (m, p) = module(&["1", "2"]);
        let (a, _) = build_a_astar(&m, &p).unwrap();
        let (th, _) = eigen_sequences(&p).unwrap();
        for (i, ui) in m.weight_spaces().iter().enumerate() {
            for v in ui.basis() {
                assert_eq!(m.r().unwrap().apply(v), a.add_scalar(&th[i].neg()).apply(v));
            }
        }
    }

    #[test]
    fn d2_quasi_tridiagonal() {
        let (m, p) = module(&["1", "1"]);
        let (a, a_star) = build_a_astar(&m, &p).unwrap();
        let (th, ts) = eigen_sequences(&p).unwrap();
        let es = lagrange_idempotents(&a, &th).unwrap();
        let ess = lagrange_idempotents(&a_star, &ts).unwrap();
        assert!(es[0].mul(&a_star).mul(&es[2]).is_zero());
        assert!(ess[2].mul(&a).mul(&ess[0]).is_zero());
        let rep = verify_module_structure(&m, &a, &a_star, &p);
        assert!(rep.passed(), "{:?}", rep.failure_names());
    }

    #[test]
    fn d3_relations() {
        let (m, p) = module(&["1", "2", "3"]);
        let (a, a_star) = build_a_astar(&m, &p).unwrap();
        assert_eq!(a.rows(), 8);
        let k = derived_constants(&p).unwrap();
        assert!(verify_tridiagonal_relations(&a, &a_star, &k).passed());
        let (th, ts) = eigen_sequences(&p).unwrap();
        assert!(verify_recurrences(&th, &ts, &k).passed());
        // a perturbed A* breaks the relation
        let mut bad = a_star.clone();
        bad.set(0, 0, bad.get(0, 0).add(&r("1")));
        assert!(!verify_tridiagonal_relations(&a, &bad, &k).passed());
    }

    #[test]
    fn mismatched_module_rejected() {
        let (m, _) = module(&["1", "2"]);
        assert!(build_a_astar(&m, &running(3)).is_err());
        let (m, p) = module(&["1"]);
        let bare = standard_module(m.alphas(), m.q()).unwrap();
        assert!(build_a_astar(&bare, &p).is_err());
    }

    /// `p(λ, μ) = λ^2 - βλμ + μ^2 - γ(λ + μ) - ϱ` vanishes on consecutive eigenvalues.
    #[test]
    fn auxiliary_p_vanishes_on_neighbours() {
        let p = running(4);
        let k = derived_constants(&p).unwrap();
        let (th, _) = eigen_sequences(&p).unwrap();
        let pf = |x: &RBig, y: &RBig| {
            x.square().sub(&k.beta.mul(x).mul(y)).add(&y.square()).sub(&k.gamma.mul(&x.add(y))).sub(&k.rho)
        };
        for i in 1..=4 {
            assert_eq!(pf(&th[i - 1], &th[i]), r("0"));
        }
        assert_ne!(pf(&th[0], &th[2]), r("0"));
    }

    fn nonzero_rational() -> impl Strategy<Value = RBig> {
        (1i64..6, 1i64..4, prop::bool::ANY).prop_map(|(n, d, s)| {
            let x = RBig::from(n) / RBig::from(d);
            if s {
                -x
            } else {
                x
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn structure_holds_on_random_modules(alphas in prop::collection::vec(nonzero_rational(), 0..5)) {
            let p = running(alphas.len());
            let c = rl_coefficients(&p, &r("1"), &r("1")).unwrap();
            let m = standard_module(&alphas, &p.q).unwrap().with_rl(&c);
            let (a, a_star) = build_a_astar(&m, &p).unwrap();
            let rep = verify_module_structure(&m, &a, &a_star, &p);
            prop_assert!(rep.passed(), "{:?}", rep.failure_names());
            let k = derived_constants(&p).unwrap();
            prop_assert!(verify_tridiagonal_relations(&a, &a_star, &k).passed());
        }
    }
}
