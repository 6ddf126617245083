use std::f64::consts::PI;

use dashu_base::{BitTest, UnsignedAbs};
use dashu_int::IBig;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::{BigComplex, Field, PrecisionConfig, RBig};

const MAX_ITER: usize = 200;
const GUARD_BITS: usize = 64;

/// All complex roots of `p` with multiplicity, sorted by (real, imaginary).
///
/// Aberth iteration from deterministic starting points at `cfg.bits + 64` bits;
/// clusters of nearly equal roots are merged and polished on the matching derivative.
pub fn poly_roots<F: Field>(p: &Polynomial<F>, cfg: &PrecisionConfig) -> Result<Vec<BigComplex>> {
    let wcfg = PrecisionConfig { bits: cfg.bits + GUARD_BITS, tolerance: cfg.tolerance };
    let coeffs: Vec<BigComplex> = p.coeffs().iter().map(|c| c.to_complex(&wcfg)).collect();
    let mut roots = complex_roots(&coeffs, &wcfg)?;
    roots.iter_mut().for_each(|r| *r = r.with_config(cfg));
    roots.sort_by(|a, b| a.cmp_lex(b));
    Ok(roots)
}

/// Roots of `p` inside the field `F` itself: exact rational roots on the exact
/// backend (error if some root is not rational), complex roots otherwise.
pub fn roots_in_field<F: Field>(p: &Polynomial<F>, cfg: &PrecisionConfig) -> Result<Vec<F>> {
    let ctx = p.ctx().clone();
    if F::EXACT {
        let rp = Polynomial::new(p.coeffs().iter().map(|c| c.to_rational().expect("exact")).collect(), &());
        Ok(rational_roots(&rp, cfg)?.iter().map(|r| F::from_rational(r, &ctx)).collect())
    } else {
        Ok(poly_roots(p, cfg)?.iter().map(|z| F::from_complex(z, &ctx).expect("complex backend")).collect())
    }
}

/// Rational roots of a polynomial that splits over the rationals, with multiplicity,
/// in ascending order. Fails with `NotRational` if some root is irrational or complex.
pub fn rational_roots(p: &Polynomial<RBig>, cfg: &PrecisionConfig) -> Result<Vec<RBig>> {
    if p.is_zero() {
        return Err(Error::InvalidParameters("the zero polynomial has no finite root set".into()));
    }
    let squarefree = {
        let g = p.gcd(&p.derivative())?;
        p.div_rem(&g)?.0
    };
    // Approximate roots that coincide, or a cluster merged into one, can hide a root;
    // found roots are divided out and the remainder searched again.
    let mut distinct: Vec<RBig> = Vec::new();
    let mut remaining = squarefree;
    while remaining.degree().is_some_and(|n| n > 0) {
        let (ints, lead) = primitive_integer(&remaining);
        let max_bits = ints.iter().map(|c| c.unsigned_abs().bit_len()).max().unwrap_or(1);
        let wcfg = PrecisionConfig::new((cfg.bits + GUARD_BITS).max(128 + 2 * max_bits));
        let coeffs: Vec<BigComplex> = remaining.coeffs().iter().map(|c| BigComplex::from_rational(c, &wcfg)).collect();
        let lead_r = RBig::from(lead);
        let mut progress = false;
        let mut stray = None;
        for z in complex_roots(&coeffs, &wcfg)? {
            let cand = round_nearest(&(z.re_rational() * &lead_r)) / &lead_r;
            if distinct.contains(&cand) || !remaining.eval(&cand).is_exact_zero() {
                stray.get_or_insert(z);
                continue;
            }
            remaining = remaining.div_rem(&Polynomial::linear_root(&cand))?.0;
            distinct.push(cand);
            progress = true;
        }
        if !progress {
            let z = stray.map(|z| z.to_string()).unwrap_or_default();
            return Err(Error::NotRational(format!("root {z} of {p} is not rational")));
        }
    }
    let mut out = Vec::new();
    let mut rest = p.clone();
    for r in distinct {
        let lin = Polynomial::linear_root(&r);
        loop {
            let (q, rem) = rest.div_rem(&lin)?;
            if !rem.is_zero() {
                break;
            }
            rest = q;
            out.push(r.clone());
        }
    }
    if rest.degree() != Some(0) {
        return Err(Error::Assertion(format!("rational root extraction left cofactor {rest}")));
    }
    out.sort();
    Ok(out)
}

fn round_nearest(x: &RBig) -> RBig {
    let two = RBig::from(2);
    let shifted = x + RBig::ONE / &two;
    let n = shifted.numerator();
    let d = IBig::from(shifted.denominator().clone());
    let mut q = n / &d;
    if n % &d < IBig::ZERO {
        q -= IBig::ONE;
    }
    RBig::from(q)
}

/// Integer multiple of `p` with coprime coefficients; returns it with its leading coefficient.
fn primitive_integer(p: &Polynomial<RBig>) -> (Vec<IBig>, IBig) {
    use dashu_base::Gcd;
    let mut l = dashu_int::UBig::ONE;
    for c in p.coeffs() {
        let d = c.denominator();
        let g = (&l).gcd(d);
        l = &l / g * d;
    }
    let lr = RBig::from(l);
    let ints: Vec<IBig> = p.coeffs().iter().map(|c| (c * &lr).numerator().clone()).collect();
    let lead = ints.last().cloned().unwrap_or(IBig::ONE);
    (ints, lead)
}

/// Root-finding core on ascending complex coefficients at the working precision of `cfg`.
fn complex_roots(coeffs: &[BigComplex], cfg: &PrecisionConfig) -> Result<Vec<BigComplex>> {
    let Some(mut deg) = coeffs.iter().rposition(|c| !c.is_exact_zero()) else {
        return Err(Error::InvalidParameters("the zero polynomial has no finite root set".into()));
    };
    let low = coeffs.iter().position(|c| !c.is_exact_zero()).unwrap_or(0);
    let zero = BigComplex::zero(cfg);
    let mut roots = vec![zero; low];
    deg -= low;
    if deg == 0 {
        return Ok(roots);
    }
    let lead_inv = coeffs[low + deg].inv()?;
    let monic: Vec<BigComplex> = coeffs[low..=low + deg].iter().map(|c| c.mul(&lead_inv)).collect();
    let found = if deg == 1 { vec![monic[0].neg()] } else { aberth(&monic, cfg) };
    let merged = merge_clusters(&monic, found, cfg);
    for r in &merged {
        let res = relative_residual(&monic, r);
        if res > cfg.tolerance {
            return Err(Error::RootFinding { residual: res });
        }
    }
    roots.extend(merged);
    Ok(roots)
}

/// `|p(z)| / Σ|a_k||z|^k`.
fn relative_residual(p: &[BigComplex], z: &BigComplex) -> f64 {
    let v = horner(p, z).0.magnitude();
    let az = z.magnitude();
    let scale = p.iter().rev().fold(0.0, |acc, c| acc * az + c.magnitude());
    if scale == 0.0 {
        0.0
    } else {
        v / scale
    }
}

fn horner(p: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex) {
    let mut val = BigComplex::zero(&z.ctx());
    let mut der = val.clone();
    for c in p.iter().rev() {
        der = der.mul(z).add(&val);
        val = val.mul(z).add(c);
    }
    (val, der)
}

fn aberth(monic: &[BigComplex], cfg: &PrecisionConfig) -> Vec<BigComplex> {
    let n = monic.len() - 1;
    let centroid_re = -monic[n - 1].re_f64() / n as f64;
    let centroid_im = -monic[n - 1].im_f64() / n as f64;
    let radius = (1..=n).map(|k| monic[n - k].magnitude().powf(1.0 / k as f64)).fold(0.0, f64::max).max(1e-3);
    let mut z: Vec<BigComplex> = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64 + 0.7;
            BigComplex::from_f64(centroid_re + radius * t.cos(), centroid_im + radius * t.sin(), cfg)
        })
        .collect();
    let target = 2f64.powi(-(cfg.bits as i32 - 8));
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..MAX_ITER {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (pv, dv) = horner(monic, &z[k]);
            if pv.is_exact_zero() {
                continue;
            }
            let Ok(newton) = pv.div(&dv) else {
                z[k] = z[k].add(&BigComplex::from_f64(1e-3, 1e-3, cfg));
                worst = f64::INFINITY;
                continue;
            };
            let mut s = BigComplex::zero(cfg);
            for j in 0..n {
                if j != k {
                    if let Ok(t) = z[k].sub(&z[j]).inv() {
                        s = s.add(&t);
                    }
                }
            }
            let denom = z[k].one_like().sub(&newton.mul(&s));
            let w = newton.div(&denom).unwrap_or(newton);
            z[k] = z[k].sub(&w);
            worst = worst.max(w.magnitude() / z[k].magnitude().max(1.0));
        }
        if worst <= target {
            break;
        }
        if worst < best * 0.5 {
            best = worst;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 8 {
                break;
            }
        }
    }
    z
}

/// Groups roots closer than the multiple-root resolution limit and replaces each
/// accepted group by a polished root of the appropriate derivative.
fn merge_clusters(monic: &[BigComplex], z: Vec<BigComplex>, cfg: &PrecisionConfig) -> Vec<BigComplex> {
    let n = z.len();
    let resolution = 2f64.powf(-(cfg.bits as f64) / n as f64) * 16.0;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = z[i].magnitude().max(z[j].magnitude()).max(1.0);
            if z[i].sub(&z[j]).magnitude() <= resolution * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if index_of[r] == usize::MAX {
            index_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of[r]].push(i);
    }
    let mut out = Vec::with_capacity(n);
    for g in groups {
        let m = g.len();
        if m == 1 {
            out.push(newton_polish(monic, z[g[0]].clone(), cfg));
            continue;
        }
        let sum = g.iter().fold(BigComplex::zero(cfg), |acc, &i| acc.add(&z[i]));
        let centroid = sum.div(&BigComplex::from_i64(m as i64, cfg)).expect("nonzero count");
        let mut deriv = monic.to_vec();
        for _ in 0..m - 1 {
            deriv = derivative(&deriv);
        }
        let r = newton_polish(&deriv, centroid, cfg);
        if is_multiple_root(monic, &r, m, cfg) {
            out.extend(std::iter::repeat_n(r, m));
        } else {
            out.extend(g.iter().map(|&i| newton_polish(monic, z[i].clone(), cfg)));
        }
    }
    out
}

fn derivative(p: &[BigComplex]) -> Vec<BigComplex> {
    p.iter().enumerate().skip(1).map(|(k, c)| c.mul(&c.int_like(k as i64))).collect()
}

fn is_multiple_root(p: &[BigComplex], r: &BigComplex, m: usize, cfg: &PrecisionConfig) -> bool {
    let loose = cfg.tolerance.sqrt();
    let mut d = p.to_vec();
    for _ in 0..m {
        if relative_residual(&d, r) > loose {
            return false;
        }
        d = derivative(&d);
    }
    true
}

fn newton_polish(p: &[BigComplex], mut z: BigComplex, cfg: &PrecisionConfig) -> BigComplex {
    if p.len() < 2 {
        return z;
    }
    let target = 2f64.powi(-(cfg.bits as i32 - 4));
    for _ in 0..60 {
        let (v, d) = horner(p, &z);
        if v.is_exact_zero() {
            break;
        }
        let Ok(step) = v.div(&d) else { break };
        z = z.sub(&step);
        if step.magnitude() <= target * z.magnitude().max(1.0) {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn r(s: &str) -> RBig {
        parse_rational(s).unwrap()
    }
    fn p(cs: &[&str]) -> Polynomial<RBig> {
        Polynomial::new(cs.iter().map(|s| r(s)).collect(), &())
    }

    #[test]
    fn complex_examples() {
        let cfg = PrecisionConfig::new(128);
        let roots = poly_roots(&p(&["-1", "0", "1"]), &cfg).unwrap();
        assert!(roots[0].approx_eq(&BigComplex::from_i64(-1, &cfg), 1.0));
        assert!(roots[1].approx_eq(&BigComplex::from_i64(1, &cfg), 1.0));
        let sq = p(&["121/4", "11", "1"]);
        let roots = poly_roots(&sq, &cfg).unwrap();
        let target = BigComplex::from_rational(&r("-11/2"), &cfg);
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|z| z.approx_eq(&target, 8.0)));
        let roots = poly_roots(&p(&["8/3", "-11/3", "1"]), &cfg).unwrap();
        assert!(roots[0].approx_eq(&BigComplex::from_i64(1, &cfg), 1.0));
        assert!(roots[1].approx_eq(&BigComplex::from_rational(&r("8/3"), &cfg), 4.0));
    }

    #[test]
    fn exact_examples() {
        let cfg = PrecisionConfig::default();
        assert_eq!(rational_roots(&p(&["-1", "0", "1"]), &cfg).unwrap(), vec![r("-1"), r("1")]);
        assert_eq!(rational_roots(&p(&["121/4", "11", "1"]), &cfg).unwrap(), vec![r("-11/2"), r("-11/2")]);
        assert_eq!(rational_roots(&p(&["8/3", "-11/3", "1"]), &cfg).unwrap(), vec![r("1"), r("8/3")]);
        assert!(matches!(rational_roots(&p(&["-2", "0", "1"]), &cfg), Err(Error::NotRational(_))));
        assert!(matches!(rational_roots(&p(&["1", "0", "1"]), &cfg), Err(Error::NotRational(_))));
        assert_eq!(rational_roots(&p(&["0", "0", "3"]), &cfg).unwrap(), vec![r("0"), r("0")]);
        assert_eq!(rational_roots(&p(&["5"]), &cfg).unwrap(), Vec::<RBig>::new());
    }

    #[test]
    fn nearly_equal_rational_roots() {
        let cfg = PrecisionConfig::default();
        let close = r("1000000000000000000000000000001/1000000000000000000000000000000");
        let roots = [r("1"), close.clone(), r("-559/75"), r("-559/75"), r("-559/75"), r("2")];
        let poly = Polynomial::from_roots(&roots, &());
        let got = rational_roots(&poly, &cfg).unwrap();
        assert_eq!(got, vec![r("-559/75"), r("-559/75"), r("-559/75"), r("1"), close, r("2")]);
        let mixed = Polynomial::from_roots(&[r("3"), r("1/2")], &()).mul(&p(&["-2", "0", "1"]));
        assert!(matches!(rational_roots(&mixed, &cfg), Err(Error::NotRational(_))));
    }

    #[test]
    fn triple_and_complex_roots() {
        let cfg = PrecisionConfig::new(128);
        // (λ - 1/3)^3 (λ^2 + 1)
        let cube = Polynomial::from_roots(&[r("1/3"), r("1/3"), r("1/3")], &());
        let f = cube.mul(&p(&["1", "0", "1"]));
        let roots = poly_roots(&f, &cfg).unwrap();
        assert_eq!(roots.len(), 5);
        let third = BigComplex::from_rational(&r("1/3"), &cfg);
        assert_eq!(roots.iter().filter(|z| z.approx_eq(&third, 1e6)).count(), 3);
        let i = BigComplex::from_parts_rational(&r("0"), &r("1"), &cfg);
        assert!(roots.iter().any(|z| z.approx_eq(&i, 1.0)));
        assert!(roots.iter().any(|z| z.approx_eq(&i.neg(), 1.0)));
    }

    #[test]
    fn reexpansion_matches() {
        let cfg = PrecisionConfig::new(128);
        let f = p(&["3", "-7/2", "0", "1/5", "2"]);
        let roots = poly_roots(&f, &cfg).unwrap();
        let fc = Polynomial::new(f.monic().unwrap().coeffs().iter().map(|c| c.to_complex(&cfg)).collect(), &cfg);
        assert!(Polynomial::from_roots(&roots, &cfg).approx_eq(&fc));
    }
}
