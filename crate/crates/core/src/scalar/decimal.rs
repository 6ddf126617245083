use dashu_base::{BitTest, UnsignedAbs};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::error::{Error, Result};

/// Parses `n`, `n/d`, or a decimal such as `-1.25e-3` into an exact rational.
pub fn parse_rational(s: &str) -> Result<RBig> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: IBig = parse_int(n.trim())?;
        let d: IBig = parse_int(d.trim())?;
        if d == IBig::ZERO {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(RBig::from(n) / RBig::from(d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => {
            let e: i64 = s[k + 1..].parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..k], e)
        }
        None => (s, 0),
    };
    let (neg, mant) = match mant.as_bytes().first() {
        Some(b'-') => (true, &mant[1..]),
        Some(b'+') => (false, &mant[1..]),
        _ => (false, mant),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("no digits in {s:?}")));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid scalar {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n = RBig::from(parse_int(if digits.is_empty() { "0" } else { &digits })?);
    let shift = exp - frac_part.len() as i64;
    if shift.unsigned_abs() > 100_000 {
        return Err(Error::Parse(format!("exponent out of range in {s:?}")));
    }
    let p = RBig::from(UBig::from(10u8).pow(shift.unsigned_abs() as usize));
    n = if shift >= 0 { n * p } else { n / p };
    Ok(if neg { -n } else { n })
}

fn parse_int(s: &str) -> Result<IBig> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid integer {s:?}")));
    }
    IBig::from_str_radix(s.strip_prefix('+').unwrap_or(s), 10).map_err(|e| Error::Parse(e.to_string()))
}

/// Formats `x` in scientific notation with `digits` significant digits,
/// trailing zeros of the mantissa removed: `-1.25e-3`, `7e0`, `0`.
pub fn format_sci(x: &RBig, digits: usize) -> String {
    let digits = digits.max(1);
    if x.numerator() == &IBig::ZERO {
        return "0".into();
    }
    let neg = x.numerator() < &IBig::ZERO;
    let ax = if neg { -x.clone() } else { x.clone() };
    let nb = ax.numerator().unsigned_abs().bit_len() as i64;
    let db = ax.denominator().bit_len() as i64;
    let mut e = ((nb - db) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let lo = UBig::from(10u8).pow(digits - 1);
    let hi = &lo * UBig::from(10u8);
    let m = loop {
        let shift = digits as i64 - 1 - e;
        let p = RBig::from(UBig::from(10u8).pow(shift.unsigned_abs() as usize));
        let scaled = if shift >= 0 { &ax * p } else { &ax / p };
        let m = round_half_even(&scaled);
        if m >= hi {
            e += 1;
        } else if m < lo {
            e -= 1;
        } else {
            break m;
        }
    };
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

fn round_half_even(x: &RBig) -> UBig {
    let n = x.numerator().unsigned_abs();
    let d = x.denominator();
    let q = &n / d;
    let r = &n % d;
    let twice = &r * UBig::from(2u8);
    if &twice > d || (&twice == d && (&q % UBig::from(2u8)) == UBig::ONE) {
        q + UBig::ONE
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), RBig::from(3));
        assert_eq!(parse_rational("-9/8").unwrap(), RBig::from(-9) / RBig::from(8));
        assert_eq!(parse_rational("6/4").unwrap(), RBig::from(3) / RBig::from(2));
        assert_eq!(parse_rational("1.25e-1").unwrap(), RBig::from(1) / RBig::from(8));
        assert_eq!(parse_rational("-.5").unwrap(), RBig::from(-1) / RBig::from(2));
        assert_eq!(parse_rational("2E2").unwrap(), RBig::from(200));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1-2").is_err());
    }

    #[test]
    fn sci_format() {
        assert_eq!(format_sci(&RBig::from(0), 5), "0");
        assert_eq!(format_sci(&RBig::from(7), 5), "7e0");
        assert_eq!(format_sci(&parse_rational("-1/8").unwrap(), 5), "-1.25e-1");
        assert_eq!(format_sci(&parse_rational("1/3").unwrap(), 4), "3.333e-1");
        assert_eq!(format_sci(&parse_rational("999.96").unwrap(), 4), "1e3");
        assert_eq!(format_sci(&parse_rational("12345").unwrap(), 3), "1.23e4");
    }

    #[test]
    fn sci_roundtrip() {
        let x = parse_rational("-123456789/1000").unwrap();
        let s = format_sci(&x, 20);
        assert_eq!(parse_rational(&s).unwrap(), x);
    }
}
