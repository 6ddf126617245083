use std::cmp::Ordering;

use dashu_base::{Abs, SquareRoot, UnsignedAbs};
use dashu_float::round::mode::HalfEven;
use dashu_int::IBig;
use dashu_ratio::RBig;

use super::{parse_rational, BigComplex, Field, PrecisionConfig};
use crate::error::{Error, Result};

impl Field for RBig {
    type Ctx = ();
    const EXACT: bool = true;

    fn ctx(&self) {}
    fn from_rational(r: &RBig, _: &()) -> Self {
        r.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RBig::ONE / self)
    }
    fn is_exact_zero(&self) -> bool {
        self.numerator() == &IBig::ZERO
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_exact_zero()
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().value().abs()
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.clone().abs().cmp(&other.clone().abs())
    }
    fn cmp_lex(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn sqrt(&self) -> Option<Self> {
        if self.numerator() < &IBig::ZERO {
            return None;
        }
        let n = self.numerator().unsigned_abs();
        let d = self.denominator();
        let sn = n.sqrt();
        let sd = d.sqrt();
        if &sn * &sn == n && &(&sd * &sd) == d {
            Some(RBig::from_parts(IBig::from(sn), sd))
        } else {
            None
        }
    }
    fn to_complex(&self, cfg: &PrecisionConfig) -> BigComplex {
        BigComplex::from_rational(self, cfg)
    }
    fn from_complex(_: &BigComplex, _: &()) -> Option<Self> {
        None
    }
    fn to_rational(&self) -> Option<RBig> {
        Some(self.clone())
    }
    fn parse(s: &str, _: &()) -> Result<Self> {
        parse_rational(s)
    }
}

/// Rounds a rational to a binary float with `bits` of precision.
pub(crate) fn rational_to_float(r: &RBig, bits: usize) -> super::complex::Float {
    r.to_float::<HalfEven, 2>(bits).value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RBig {
        parse_rational(s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(Field::add(&r("2/3"), &r("1/6")), r("5/6"));
        assert_eq!(r("-9/8").inv().unwrap(), r("-8/9"));
        assert_eq!(r("2").powi(-2).unwrap(), r("1/4"));
        assert!(matches!(r("0").inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn zero_is_exact() {
        assert!(r("0/1").is_zero());
        assert!(!r("1/1000000000").is_zero());
    }

    #[test]
    fn display_form() {
        assert_eq!(r("-225/8").to_string(), "-225/8");
        assert_eq!(r("4/2").to_string(), "2");
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(Field::sqrt(&r("9/4")), Some(r("3/2")));
        assert_eq!(Field::sqrt(&r("2")), None);
        assert_eq!(Field::sqrt(&r("-4")), None);
        assert_eq!(Field::sqrt(&r("0")), Some(r("0")));
    }
}
