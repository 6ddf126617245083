//! Dense univariate polynomials, the τ/η/f families and root extraction.

mod roots;

use std::fmt;

pub use roots::{poly_roots, rational_roots, roots_in_field};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Coefficients in ascending degree; trailing exact zeros are trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<F: Field> {
    coeffs: Vec<F>,
    ctx: F::Ctx,
}

impl<F: Field> Polynomial<F> {
    pub fn new(mut coeffs: Vec<F>, ctx: &F::Ctx) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs, ctx: ctx.clone() }
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Polynomial { coeffs: Vec::new(), ctx: ctx.clone() }
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.ctx();
        Polynomial::new(vec![c], &ctx)
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Polynomial::constant(F::one(ctx))
    }

    /// `λ - r`.
    pub fn linear_root(r: &F) -> Self {
        Polynomial::new(vec![r.neg(), r.one_like()], &r.ctx())
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.sub(&c.one_like()).is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        Polynomial::new(c, &self.ctx)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k).sub(&other.coeff(k))).collect();
        Polynomial::new(c, &self.ctx)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        let mut c = vec![F::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Polynomial::new(c, &self.ctx)
    }

    pub fn scale(&self, s: &F) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c.mul(s)).collect(), &self.ctx)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(&self.ctx), |acc, c| acc.mul(x).add(c))
    }

    pub fn derivative(&self) -> Self {
        let c = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.mul(&c.int_like(k as i64))).collect();
        Polynomial::new(c, &self.ctx)
    }

    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        Ok(self.scale(&lead.inv()?))
    }

    /// Euclidean division, `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Polynomial::zero(&self.ctx), Polynomial::zero(&self.ctx)));
        };
        if nd < dd {
            return Ok((Polynomial::zero(&self.ctx), self.clone()));
        }
        let mut quot = vec![F::zero(&self.ctx); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let t = rem[k + dd].mul(&lead_inv);
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&t.mul(dc));
            }
            rem[k + dd] = F::zero(&self.ctx);
            quot[k] = t;
        }
        rem.truncate(dd);
        Ok((Polynomial::new(quot, &self.ctx), Polynomial::new(rem, &self.ctx)))
    }

    /// Monic greatest common divisor (exact backends).
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        a.monic()
    }

    /// `∏ (λ - r)` over the given roots.
    pub fn from_roots(roots: &[F], ctx: &F::Ctx) -> Self {
        roots.iter().fold(Polynomial::one(ctx), |p, r| p.mul(&Polynomial::linear_root(r)))
    }

    /// Coefficient-wise comparison with a relative tolerance on inexact backends.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let scale = self.coeffs.iter().chain(&other.coeffs).map(|c| c.magnitude()).fold(1.0, f64::max);
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| self.coeff(k).approx_eq(&other.coeff(k), scale))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_exact_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})λ")?,
                _ => write!(f, "({c})λ^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauEta {
    Tau,
    Eta,
}

/// `τ_i = (λ-θ_0)…(λ-θ_{i-1})` or `η_i = (λ-θ_d)…(λ-θ_{d-i+1})`.
pub fn tau_eta<F: Field>(thetas: &[F], i: usize, variant: TauEta) -> Result<Polynomial<F>> {
    let Some(first) = thetas.first() else {
        return Err(Error::IndexOutOfRange { index: i, max: 0 });
    };
    let d = thetas.len() - 1;
    if i > d {
        return Err(Error::IndexOutOfRange { index: i, max: d });
    }
    let ctx = first.ctx();
    let roots: Vec<F> = match variant {
        TauEta::Tau => thetas[..i].to_vec(),
        TauEta::Eta => thetas[d + 1 - i..].iter().rev().cloned().collect(),
    };
    Ok(Polynomial::from_roots(&roots, &ctx))
}

/// Value of `τ_i` at `x` without building the polynomial.
pub fn tau_at<F: Field>(thetas: &[F], i: usize, x: &F) -> F {
    thetas[..i].iter().fold(x.one_like(), |acc, t| acc.mul(&x.sub(t)))
}

/// Value of `η_i` at `x`.
pub fn eta_at<F: Field>(thetas: &[F], i: usize, x: &F) -> F {
    let d = thetas.len() - 1;
    thetas[d + 1 - i..].iter().fold(x.one_like(), |acc, t| acc.mul(&x.sub(t)))
}

/// `f_i = bb*·q^(-2i) + cc*·q^(2i) - λ`.
pub fn f_poly<F: Field>(i: usize, q: &F, bbs: &F, ccs: &F) -> Result<Polynomial<F>> {
    let q2i = q.powi(2 * i as i64)?;
    let c0 = bbs.div(&q2i)?.add(&ccs.mul(&q2i));
    Ok(Polynomial::new(vec![c0, q.one_like().neg()], &q.ctx()))
}
