//! Scalars: a [`Field`] abstraction with an exact rational backend and an
//! arbitrary-precision complex backend, plus q-analog helpers.

mod complex;
mod decimal;
mod rational;
mod tagged;

use std::cmp::Ordering;
use std::fmt;

pub use complex::BigComplex;
pub use dashu_ratio::RBig;
pub use decimal::{format_sci, parse_rational};
pub use tagged::{ArithOp, Backend, FieldScalar};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rational = RBig;

/// Working precision of the complex backend and the relative zero tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionConfig {
    pub bits: usize,
    pub tolerance: f64,
}

impl PrecisionConfig {
    /// `bits` of precision with the default tolerance `2^(-bits/2)`.
    pub fn new(bits: usize) -> Self {
        assert!(bits >= 2, "precision must be at least 2 bits");
        PrecisionConfig { bits, tolerance: (2f64).powf(-(bits as f64) / 2.0) }
    }

    pub fn with_tolerance(bits: usize, tolerance: f64) -> Result<Self> {
        if bits < 2 {
            return Err(Error::InvalidParameters(format!("precision {bits} too small")));
        }
        if !(0.0..1.0).contains(&tolerance) {
            return Err(Error::InvalidParameters(format!("tolerance {tolerance} must lie in [0, 1)")));
        }
        Ok(PrecisionConfig { bits, tolerance })
    }

    /// Significant decimal digits used when printing at this precision.
    pub fn decimal_digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig::new(128)
    }
}

/// A computable field. Algorithms in this crate are generic over it.
///
/// Zero tests on inexact backends are relative: `is_negligible(scale)` asks whether
/// the value is small compared to `scale`.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync;
    const EXACT: bool;

    fn ctx(&self) -> Self::Ctx;
    fn from_rational(r: &RBig, ctx: &Self::Ctx) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    /// True when the stored representation is exactly zero (no tolerance).
    fn is_exact_zero(&self) -> bool;
    fn is_negligible(&self, scale: f64) -> bool;
    /// Approximate absolute value, for scaling decisions only.
    fn magnitude(&self) -> f64;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    /// Order by real part, then imaginary part.
    fn cmp_lex(&self, other: &Self) -> Ordering;
    /// A square root if one exists in this backend (exact: only perfect squares).
    fn sqrt(&self) -> Option<Self>;

    fn to_complex(&self, cfg: &PrecisionConfig) -> BigComplex;
    /// Embeds a complex value; exact backends accept none.
    fn from_complex(z: &BigComplex, ctx: &Self::Ctx) -> Option<Self>;
    fn to_rational(&self) -> Option<RBig>;
    fn parse(s: &str, ctx: &Self::Ctx) -> Result<Self>;

    fn from_i64(n: i64, ctx: &Self::Ctx) -> Self {
        Self::from_rational(&RBig::from(n), ctx)
    }
    fn zero(ctx: &Self::Ctx) -> Self {
        Self::from_i64(0, ctx)
    }
    fn one(ctx: &Self::Ctx) -> Self {
        Self::from_i64(1, ctx)
    }
    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx())
    }
    fn one_like(&self) -> Self {
        Self::one(&self.ctx())
    }
    fn int_like(&self, n: i64) -> Self {
        Self::from_i64(n, &self.ctx())
    }
    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }
    fn square(&self) -> Self {
        self.mul(self)
    }
    fn is_zero(&self) -> bool {
        self.is_negligible(1.0)
    }
    fn approx_eq(&self, other: &Self, scale: f64) -> bool {
        self.sub(other).is_negligible(scale)
    }
    fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one_like();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.square();
            }
        }
        Ok(acc)
    }
}

/// `(q^n - q^-n) / (q - q^-1)`.
pub fn q_bracket<F: Field>(n: u32, q: &F) -> Result<F> {
    check_q(q)?;
    let qn = q.powi(n as i64)?;
    let num = qn.sub(&qn.inv()?);
    let den = q.sub(&q.inv()?);
    num.div(&den)
}

/// Rejects `q = 0` and `q^2 = 1`.
pub fn check_q<F: Field>(q: &F) -> Result<()> {
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if q.square().sub(&q.one_like()).is_zero() {
        return Err(Error::DegenerateQ);
    }
    Ok(())
}

/// Checks `q^(2i) != 1` for `1 <= i <= d`.
pub fn check_feasible<F: Field>(q: &F, d: usize) -> Result<()> {
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let q2 = q.square();
    let mut p = q.one_like();
    for i in 1..=d {
        p = p.mul(&q2);
        if p.sub(&q.one_like()).is_zero() {
            return Err(Error::InfeasibleDiameter { d, i });
        }
    }
    Ok(())
}

/// `q^n - q^-n`.
pub fn q_diff<F: Field>(q: &F, n: i64) -> Result<F> {
    let p = q.powi(n)?;
    Ok(p.sub(&p.inv()?))
}

/// Largest magnitude in a collection, used as the scale for relative zero tests.
pub fn max_magnitude<'a, F: Field>(xs: impl IntoIterator<Item = &'a F>) -> f64 {
    xs.into_iter().map(|x| x.magnitude()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RBig {
        parse_rational(s).unwrap()
    }

    #[test]
    fn bracket_values() {
        let q = r("2");
        assert_eq!(q_bracket(0, &q).unwrap(), r("0"));
        assert_eq!(q_bracket(1, &q).unwrap(), r("1"));
        assert_eq!(q_bracket(3, &q).unwrap(), r("21/4"));
        // q^2 + 1 + q^-2 for q = 2
        assert_eq!(q_bracket(3, &q).unwrap(), r("4") + r("1") + r("1/4"));
    }

    #[test]
    fn bracket_degenerate() {
        assert!(matches!(q_bracket(2, &r("1")), Err(Error::DegenerateQ)));
        assert!(matches!(q_bracket(2, &r("-1")), Err(Error::DegenerateQ)));
        assert!(matches!(q_bracket(2, &r("0")), Err(Error::DivisionByZero)));
    }

    #[test]
    fn bracket_complex_matches_exact() {
        let cfg = PrecisionConfig::new(128);
        let q = BigComplex::from_rational(&r("3/2"), &cfg);
        let z = q_bracket(5, &q).unwrap();
        let e = BigComplex::from_rational(&q_bracket(5, &r("3/2")).unwrap(), &cfg);
        assert!(z.approx_eq(&e, e.magnitude()));
    }

    #[test]
    fn feasibility() {
        assert!(check_feasible(&r("2"), 10).is_ok());
        let cfg = PrecisionConfig::new(64);
        // q = i: q^2 = -1, q^4 = 1 so d = 2 fails at i = 2
        let qi = BigComplex::from_parts_rational(&r("0"), &r("1"), &cfg);
        assert!(check_feasible(&qi, 1).is_ok());
        assert!(matches!(check_feasible(&qi, 2), Err(Error::InfeasibleDiameter { d: 2, i: 2 })));
    }

    #[test]
    fn default_tolerance() {
        let c = PrecisionConfig::new(128);
        assert_eq!(c.tolerance, 2f64.powi(-64));
        assert!(PrecisionConfig::with_tolerance(128, 1.0).is_err());
    }
}
