use std::cmp::Ordering;
use std::fmt;

use dashu_float::round::mode::HalfEven;
use dashu_float::{Context, FBig};
use dashu_ratio::RBig;

use super::rational::rational_to_float;
use super::{format_sci, parse_rational, Field, PrecisionConfig};
use crate::error::{Error, Result};

pub(crate) type Float = FBig<HalfEven, 2>;

/// Complex number with binary floating-point parts at a configured precision.
#[derive(Clone, Debug)]
pub struct BigComplex {
    re: Float,
    im: Float,
    cfg: PrecisionConfig,
}

impl PartialEq for BigComplex {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

fn round(x: Float, bits: usize) -> Float {
    if x.repr().is_zero() {
        return Float::ZERO;
    }
    x.with_precision(bits).value()
}

fn f64_of(x: &Float) -> f64 {
    x.to_f64().value()
}

impl BigComplex {
    pub fn from_parts_rational(re: &RBig, im: &RBig, cfg: &PrecisionConfig) -> Self {
        BigComplex { re: rational_to_float(re, cfg.bits), im: rational_to_float(im, cfg.bits), cfg: *cfg }
    }

    pub fn from_f64(re: f64, im: f64, cfg: &PrecisionConfig) -> Self {
        let conv = |x: f64| round(Float::try_from(x).unwrap_or(Float::ZERO), cfg.bits);
        BigComplex { re: conv(re), im: conv(im), cfg: *cfg }
    }

    pub fn config(&self) -> PrecisionConfig {
        self.cfg
    }

    /// Re-rounds to a different precision and tolerance.
    pub fn with_config(&self, cfg: &PrecisionConfig) -> Self {
        BigComplex { re: round(self.re.clone(), cfg.bits), im: round(self.im.clone(), cfg.bits), cfg: *cfg }
    }

    pub fn re_f64(&self) -> f64 {
        f64_of(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        f64_of(&self.im)
    }

    pub fn re_rational(&self) -> RBig {
        RBig::try_from(self.re.clone()).expect("finite float")
    }

    pub fn im_rational(&self) -> RBig {
        RBig::try_from(self.im.clone()).expect("finite float")
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -&self.im, cfg: self.cfg }
    }

    /// `|z|^2` as a real complex number.
    pub fn norm_sqr(&self) -> Self {
        let n = round(&self.re * &self.re + &self.im * &self.im, self.cfg.bits);
        BigComplex { re: n, im: Float::ZERO, cfg: self.cfg }
    }

    pub fn abs(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex { re: fsqrt(&n.re, self.cfg.bits), im: Float::ZERO, cfg: self.cfg }
    }

    fn merge(&self, other: &Self) -> PrecisionConfig {
        if other.cfg.bits > self.cfg.bits {
            other.cfg
        } else {
            self.cfg
        }
    }
}

fn fsqrt(x: &Float, bits: usize) -> Float {
    if x.repr().is_zero() {
        return Float::ZERO;
    }
    Context::<HalfEven>::new(bits).sqrt(x.repr()).value()
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.cfg.decimal_digits();
        let re = format_sci(&self.re_rational(), n);
        let im = format_sci(&self.im_rational(), n);
        if im.starts_with('-') {
            write!(f, "{re}{im}*i")
        } else {
            write!(f, "{re}+{im}*i")
        }
    }
}

/// Parses `re`, `re+im*i`, `re-im*i`; parts are decimals or fractions.
fn parse_complex(s: &str) -> Result<(RBig, RBig)> {
    let s = s.trim();
    let Some(body) = s.strip_suffix("*i") else {
        return Ok((parse_rational(s)?, RBig::ZERO));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(|| Error::Parse(format!("invalid complex scalar {s:?}")))?;
    let re = parse_rational(&body[..split])?;
    let im_str = &body[split..];
    let im = parse_rational(im_str.strip_prefix('+').unwrap_or(im_str))?;
    Ok((re, im))
}

impl Field for BigComplex {
    type Ctx = PrecisionConfig;
    const EXACT: bool = false;

    fn ctx(&self) -> PrecisionConfig {
        self.cfg
    }
    fn from_rational(r: &RBig, cfg: &PrecisionConfig) -> Self {
        BigComplex { re: rational_to_float(r, cfg.bits), im: Float::ZERO, cfg: *cfg }
    }
    fn add(&self, o: &Self) -> Self {
        let cfg = self.merge(o);
        BigComplex { re: round(&self.re + &o.re, cfg.bits), im: round(&self.im + &o.im, cfg.bits), cfg }
    }
    fn sub(&self, o: &Self) -> Self {
        let cfg = self.merge(o);
        BigComplex { re: round(&self.re - &o.re, cfg.bits), im: round(&self.im - &o.im, cfg.bits), cfg }
    }
    fn mul(&self, o: &Self) -> Self {
        let cfg = self.merge(o);
        let b = cfg.bits;
        if self.im.repr().is_zero() && o.im.repr().is_zero() {
            return BigComplex { re: round(&self.re * &o.re, b), im: Float::ZERO, cfg };
        }
        let re = round(&self.re * &o.re - &self.im * &o.im, b);
        let im = round(&self.re * &o.im + &self.im * &o.re, b);
        BigComplex { re, im, cfg }
    }
    fn neg(&self) -> Self {
        BigComplex { re: -&self.re, im: -&self.im, cfg: self.cfg }
    }
    fn inv(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        let b = self.cfg.bits;
        let wide = b + 16;
        let re = round(self.re.clone(), wide);
        let im = round(self.im.clone(), wide);
        let den = round(&re * &re + &im * &im, wide);
        Ok(BigComplex { re: round(&re / &den, b), im: round(-(&im / &den), b), cfg: self.cfg })
    }
    fn is_exact_zero(&self) -> bool {
        self.re.repr().is_zero() && self.im.repr().is_zero()
    }
    fn is_negligible(&self, scale: f64) -> bool {
        if self.is_exact_zero() {
            return true;
        }
        self.magnitude() <= self.cfg.tolerance * scale
    }
    fn magnitude(&self) -> f64 {
        self.re_f64().hypot(self.im_f64())
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.norm_sqr().re.partial_cmp(&other.norm_sqr().re).unwrap_or(Ordering::Equal)
    }
    fn cmp_lex(&self, other: &Self) -> Ordering {
        self.re
            .partial_cmp(&other.re)
            .unwrap_or(Ordering::Equal)
            .then(self.im.partial_cmp(&other.im).unwrap_or(Ordering::Equal))
    }
    fn sqrt(&self) -> Option<Self> {
        if self.is_exact_zero() {
            return Some(self.clone());
        }
        let b = self.cfg.bits;
        let wide = b + 16;
        let two = Float::from(2).with_precision(wide).value();
        let r = fsqrt(&round(&self.re * &self.re + &self.im * &self.im, wide), wide);
        let zero = Float::ZERO;
        // Compute the larger part first to avoid cancellation.
        let (re, im) = if self.re >= zero {
            let re = fsqrt(&round((&r + &self.re) / &two, wide), wide);
            let im = round(&self.im / (&two * &re), wide);
            (re, im)
        } else {
            let mut im = fsqrt(&round((&r - &self.re) / &two, wide), wide);
            if self.im < zero {
                im = -im;
            }
            let re = round(&self.im / (&two * &im), wide);
            (re, im)
        };
        Some(BigComplex { re: round(re, b), im: round(im, b), cfg: self.cfg })
    }
    fn to_complex(&self, cfg: &PrecisionConfig) -> BigComplex {
        self.with_config(cfg)
    }
    fn from_complex(z: &BigComplex, cfg: &PrecisionConfig) -> Option<Self> {
        Some(z.with_config(cfg))
    }
    fn to_rational(&self) -> Option<RBig> {
        None
    }
    fn parse(s: &str, cfg: &PrecisionConfig) -> Result<Self> {
        let (re, im) = parse_complex(s)?;
        Ok(BigComplex::from_parts_rational(&re, &im, cfg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> BigComplex {
        BigComplex::parse(s, &PrecisionConfig::new(128)).unwrap()
    }

    #[test]
    fn tiny_is_zero() {
        let cfg = PrecisionConfig::new(128);
        let two = BigComplex::from_i64(2, &cfg);
        let tiny = two.powi(-200).unwrap();
        assert!(tiny.is_zero());
        assert!(!two.powi(-60).unwrap().is_zero());
    }

    #[test]
    fn field_ops() {
        let a = c("1+2*i");
        let b = c("3-1*i");
        assert_eq!(a.mul(&b), c("5+5*i"));
        let q = a.div(&b).unwrap();
        assert!(q.mul(&b).approx_eq(&a, 1.0));
        assert!(a.mul(&a.inv().unwrap()).approx_eq(&a.one_like(), 1.0));
    }

    #[test]
    fn sqrt_principal() {
        let z = c("-4");
        let s = z.sqrt().unwrap();
        assert!(s.approx_eq(&c("0+2*i"), 1.0));
        let w = c("3-4*i");
        let s = w.sqrt().unwrap();
        assert!(s.approx_eq(&c("2-1*i"), 1.0));
        let two = c("2").sqrt().unwrap();
        assert!(two.square().approx_eq(&c("2"), 1.0));
    }

    #[test]
    fn string_roundtrip() {
        let x = c("1/3-2/7*i");
        let s = x.to_string();
        assert!(s.ends_with("*i"));
        let y = c(&s);
        assert!(x.approx_eq(&y, 1.0));
        assert_eq!(c("1.5e-3+0*i"), c("3/2000"));
        assert_eq!(
            c("-2.5e+1-1e-2*i"),
            BigComplex::from_parts_rational(
                &RBig::from(-25),
                &(RBig::from(-1) / RBig::from(100)),
                &PrecisionConfig::new(128)
            )
        );
    }

    #[test]
    fn parse_errors() {
        let cfg = PrecisionConfig::new(64);
        assert!(BigComplex::parse("1+*i", &cfg).is_err());
        assert!(BigComplex::parse("x", &cfg).is_err());
    }
}
