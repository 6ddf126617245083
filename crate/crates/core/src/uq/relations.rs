use super::{diag_inverse, StandardModule};
use crate::linalg::{inverse, Matrix};
use crate::report::Report;
use crate::scalar::{q_bracket, Field};

pub(crate) fn same<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> bool {
    if F::EXACT {
        a == b
    } else {
        a.approx_eq(b)
    }
}

pub(crate) fn vanishes<F: Field>(a: &Matrix<F>, scale: f64) -> bool {
    if F::EXACT {
        a.is_zero()
    } else {
        a.is_negligible(scale.max(1.0))
    }
}

/// `x^3 y - [3] x^2 y x + [3] x y x^2 - y x^3`.
pub(crate) fn serre_form<F: Field>(x: &Matrix<F>, y: &Matrix<F>, b3: &F) -> Matrix<F> {
    let x2 = x.mul(x);
    let x3 = x2.mul(x);
    x3.mul(y).sub(&x2.mul(y).mul(x).scale(b3)).add(&x.mul(y).mul(&x2).scale(b3)).sub(&y.mul(&x3))
}

/// Checks the defining relations of the quantum affine algebra as matrix identities.
pub fn verify_uq_relations<F: Field>(m: &StandardModule<F>) -> Report {
    let mut rep = Report::new();
    let g = m.generators();
    let n = m.dim();
    let ctx = m.ctx();
    let id = Matrix::identity(n, &ctx);
    let q = m.q();
    let (Ok(qi), Ok(b3)) = (q.inv(), q_bracket(3, q)) else {
        rep.check("q invertible with [3]_q defined", false);
        return rep;
    };
    let ks = [&g.k0, &g.k1];
    let kinv: Vec<Matrix<F>> = match ks.iter().map(|k| inverse(k)).collect() {
        Ok(v) => v,
        Err(_) => {
            rep.check("K0, K1 invertible", false);
            return rep;
        }
    };
    for i in 0..2 {
        rep.check(format!("K{i} K{i}^-1 = 1"), same(&ks[i].mul(&kinv[i]), &id));
        rep.check(format!("K{i}^-1 K{i} = 1"), same(&kinv[i].mul(ks[i]), &id));
    }
    rep.check("K0 K1 = K1 K0", same(&g.k0.mul(&g.k1), &g.k1.mul(&g.k0)));
    let q2 = q.square();
    let qm2 = qi.square();
    let ep = [&g.e0p, &g.e1p];
    let em = [&g.e0m, &g.e1m];
    for i in 0..2 {
        for j in 0..2 {
            let conj = |e: &Matrix<F>| ks[i].mul(e).mul(&kinv[i]);
            let (sp, sm) = if i == j { (&q2, &qm2) } else { (&qm2, &q2) };
            rep.check(
                format!("K{i} e{j}+ K{i}^-1 = q^{} e{j}+", if i == j { 2 } else { -2 }),
                same(&conj(ep[j]), &ep[j].scale(sp)),
            );
            rep.check(
                format!("K{i} e{j}- K{i}^-1 = q^{} e{j}-", if i == j { -2 } else { 2 }),
                same(&conj(em[j]), &em[j].scale(sm)),
            );
        }
    }
    let denom_inv = match q.sub(&qi).inv() {
        Ok(x) => x,
        Err(_) => {
            rep.check("q - q^-1 invertible", false);
            return rep;
        }
    };
    let scale = g.all().iter().map(|x| x.max_magnitude()).fold(1.0, f64::max);
    for i in 0..2 {
        let lhs = ep[i].commutator(em[i]);
        let rhs = ks[i].sub(&kinv[i]).scale(&denom_inv);
        rep.check(format!("[e{i}+, e{i}-] = (K{i} - K{i}^-1)/(q - q^-1)"), same(&lhs, &rhs));
    }
    rep.check("[e0+, e1-] = 0", vanishes(&g.e0p.commutator(&g.e1m), scale * scale));
    rep.check("[e0-, e1+] = 0", vanishes(&g.e0m.commutator(&g.e1p), scale * scale));
    let s4 = scale.powi(4) * b3.magnitude().max(1.0);
    for (i, j) in [(0usize, 1usize), (1, 0)] {
        rep.check(format!("q-Serre e{i}+ e{j}+"), vanishes(&serre_form(ep[i], ep[j], &b3), s4));
        rep.check(format!("q-Serre e{i}- e{j}-"), vanishes(&serre_form(em[i], em[j], &b3), s4));
    }
    rep
}

/// Checks the `K`-conjugation identities of `R`, `L`, the two cubic relations, that
/// `L^n R^n` commutes with `K0`, `K1` for `n ≤ d`, and the weight-shift containments.
pub fn verify_rl_properties<F: Field>(m: &StandardModule<F>) -> Report {
    let mut rep = Report::new();
    let Some(rl) = m.rl() else {
        rep.check("R, L attached", false);
        return rep;
    };
    let (r, l) = (&rl.r, &rl.l);
    let q = m.q();
    let g = m.generators();
    let (Ok(k0i), Ok(k1i)) = (diag_inverse(&g.k0), diag_inverse(&g.k1)) else {
        rep.check("K0, K1 invertible", false);
        return rep;
    };
    let (Ok(qi), Ok(b3), Ok(bbs), Ok(ccs)) = (q.inv(), q_bracket(3, q), rl.coeffs.bbs(q), rl.coeffs.ccs(q)) else {
        rep.check("q admissible", false);
        return rep;
    };
    let q2 = q.square();
    let qm2 = qi.square();
    rep.check("K0 R K0^-1 = q^2 R", same(&g.k0.mul(r).mul(&k0i), &r.scale(&q2)));
    rep.check("K1 R K1^-1 = q^-2 R", same(&g.k1.mul(r).mul(&k1i), &r.scale(&qm2)));
    rep.check("K0 L K0^-1 = q^-2 L", same(&g.k0.mul(l).mul(&k0i), &l.scale(&qm2)));
    rep.check("K1 L K1^-1 = q^2 L", same(&g.k1.mul(l).mul(&k1i), &l.scale(&q2)));

    let c = (1..=3).fold(q.one_like(), |acc, k| {
        let p = q.powi(k).expect("q nonzero");
        acc.mul(&p.sub(&p.inv().expect("q nonzero")))
    });
    let r2 = r.mul(r);
    let l2 = l.mul(l);
    let rhs_r = g.k1.mul(&r2).mul(&g.k1).scale(&ccs).sub(&g.k0.mul(&r2).mul(&g.k0).scale(&bbs)).scale(&c);
    let rhs_l = g.k0.mul(&l2).mul(&g.k0).scale(&bbs).sub(&g.k1.mul(&l2).mul(&g.k1).scale(&ccs)).scale(&c);
    rep.check("R^3 L - [3] R^2 L R + [3] R L R^2 - L R^3 = (cubic right side)", same(&serre_form(r, l, &b3), &rhs_r));
    rep.check("L^3 R - [3] L^2 R L + [3] L R L^2 - R L^3 = (cubic right side)", same(&serre_form(l, r, &b3), &rhs_l));

    let n = m.dim();
    let mut rn = Matrix::identity(n, &m.ctx());
    let mut ln = rn.clone();
    let mut commute = true;
    for _ in 1..=m.d() {
        rn = rn.mul(r);
        ln = ln.mul(l);
        let lr = ln.mul(&rn);
        commute &= same(&lr.mul(&g.k0), &g.k0.mul(&lr)) && same(&lr.mul(&g.k1), &g.k1.mul(&lr));
    }
    rep.check("[L^n R^n, K0] = [L^n R^n, K1] = 0 for n ≤ d", commute);

    let ws = m.weight_spaces();
    let d = m.d();
    let raise = (0..=d).all(|i| {
        let img = ws[i].mapped(r);
        if i == d {
            img.dim() == 0
        } else {
            ws[i + 1].contains_subspace(&img)
        }
    });
    let lower = (0..=d).all(|i| {
        let img = ws[i].mapped(l);
        if i == 0 {
            img.dim() == 0
        } else {
            ws[i - 1].contains_subspace(&img)
        }
    });
    rep.check("R U_i ⊆ U_{i+1}", raise);
    rep.check("L U_i ⊆ U_{i-1}", lower);
    rep
}

/// On `V ⊗ W` with `V` of diameter 1, checks `R^n = 1 ⊗ R^n + [n] R_n` and
/// `L^n = 1 ⊗ L^n + [n] L_n` for `1 ≤ n ≤ d(V ⊗ W)`, where
/// `R_n = u q^(n-1) e0+ ⊗ R^(n-1) K0 + v q^(1-n) e1- K1 ⊗ R^(n-1) K1` and
/// `L_n = u* q^(1-n) e1+ ⊗ K1 L^(n-1) + v* q^(n-1) e0- K0 ⊗ K0 L^(n-1)`.
pub fn verify_coproduct_powers<F: Field>(v: &StandardModule<F>, w: &StandardModule<F>) -> Report {
    let mut rep = Report::new();
    if v.d() != 1 {
        rep.check("first factor has diameter 1", false);
        return rep;
    }
    let Some(rl) = v.rl().or(w.rl()) else {
        rep.check("R, L attached", false);
        return rep;
    };
    let c = rl.coeffs.clone();
    let w = w.clone().with_rl(&c);
    let vw = match v.tensor(&w) {
        Ok(x) => x.with_rl(&c),
        Err(e) => {
            rep.check_with("tensor product defined", false, e.to_string());
            return rep;
        }
    };
    let q = v.q();
    let gv = v.generators();
    let gw = w.generators();
    let (rw, lw) = (w.r().expect("attached"), w.l().expect("attached"));
    let (rvw, lvw) = (vw.r().expect("attached"), vw.l().expect("attached"));
    let iv = Matrix::identity(2, &v.ctx());
    let nw = w.dim();
    let mut rw_prev = Matrix::identity(nw, &w.ctx());
    let mut lw_prev = rw_prev.clone();
    let mut rvw_n = Matrix::identity(vw.dim(), &vw.ctx());
    let mut lvw_n = rvw_n.clone();
    let e1m_k1 = gv.e1m.mul(&gv.k1);
    let e0m_k0 = gv.e0m.mul(&gv.k0);
    let mut ok_r = true;
    let mut ok_l = true;
    for n in 1..=vw.d() {
        let nn = n as i64;
        let (Ok(bn), Ok(qa), Ok(qb)) = (q_bracket(n as u32, q), q.powi(nn - 1), q.powi(1 - nn)) else {
            rep.check("q admissible", false);
            return rep;
        };
        let r_n = gv
            .e0p
            .tensor(&rw_prev.mul(&gw.k0))
            .scale(&c.u.mul(&qa))
            .add(&e1m_k1.tensor(&rw_prev.mul(&gw.k1)).scale(&c.v.mul(&qb)));
        let l_n = gv
            .e1p
            .tensor(&gw.k1.mul(&lw_prev))
            .scale(&c.u_star.mul(&qb))
            .add(&e0m_k0.tensor(&gw.k0.mul(&lw_prev)).scale(&c.v_star.mul(&qa)));
        rw_prev = rw_prev.mul(rw);
        lw_prev = lw_prev.mul(lw);
        rvw_n = rvw_n.mul(rvw);
        lvw_n = lvw_n.mul(lvw);
        ok_r &= same(&rvw_n, &iv.tensor(&rw_prev).add(&r_n.scale(&bn)));
        ok_l &= same(&lvw_n, &iv.tensor(&lw_prev).add(&l_n.scale(&bn)));
    }
    rep.check("Δ(R^n) = 1 ⊗ R^n + [n] R_n", ok_r);
    rep.check("Δ(L^n) = 1 ⊗ L^n + [n] L_n", ok_l);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, RBig};
    use crate::uq::{evaluation_module, standard_module, RLCoefficients};

    fn r(s: &str) -> RBig {
        parse_rational(s).unwrap()
    }

    fn coeffs(q: &RBig) -> RLCoefficients<RBig> {
        RLCoefficients::from_products(q, &r("1"), &r("6"), &r("1"), &r("1")).unwrap()
    }

    #[test]
    fn relations_hold_small_cases() {
        let q = r("2");
        for alphas in [vec![], vec![r("1")], vec![r("1"), r("2"), r("3")]] {
            let m = standard_module(&alphas, &q).unwrap();
            let rep = verify_uq_relations(&m);
            assert!(rep.passed(), "{:?}", rep.failure_names());
            let rep = verify_rl_properties(&m.with_rl(&coeffs(&q)));
            assert!(rep.passed(), "{:?}", rep.failure_names());
        }
    }

    #[test]
    fn k_conjugation_scales_r() {
        let q = r("2");
        let m = evaluation_module(&r("1"), &q).unwrap().with_rl(&coeffs(&q));
        let rr = m.r().unwrap();
        let conj = m.k0().mul(rr).mul(&inverse(m.k0()).unwrap());
        assert_eq!(conj, rr.scale(&r("4")));
    }

    #[test]
    fn broken_generator_is_reported() {
        let q = r("2");
        let m = standard_module(&[r("1"), r("3")], &q).unwrap();
        let mut bad = m.clone();
        let e = &mut bad.gens.e0p;
        let x = e.get(1, 0).add(&r("1"));
        e.set(1, 0, x);
        let rep = verify_uq_relations(&bad);
        assert!(!rep.passed());
        assert!(rep.failure_names().iter().any(|n| n.contains("[e0+, e0-]")));
    }

    #[test]
    fn missing_rl_is_reported() {
        let m = standard_module(&[r("1")], &r("2")).unwrap();
        assert!(!verify_rl_properties(&m).passed());
    }

    #[test]
    fn coproduct_powers() {
        let q = r("3/2");
        let v = evaluation_module(&r("2/5"), &q).unwrap().with_rl(&coeffs(&q));
        for alphas in [vec![], vec![r("1")], vec![r("-3"), r("7/2")], vec![r("1"), r("1"), r("2")]] {
            let w = standard_module(&alphas, &q).unwrap();
            let rep = verify_coproduct_powers(&v, &w);
            assert!(rep.passed(), "{:?}", rep.failure_names());
        }
    }
}
