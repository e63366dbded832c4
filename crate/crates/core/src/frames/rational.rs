//! Exact rational scalars.
//!
//! All probabilities, masses and weights are `BigRational`s, which are kept
//! in lowest terms with a positive denominator by construction. The text form
//! is `"num/den"`, with `"/1"` dropped for integers.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `num / den` from machine integers. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p/q"` or `"p"`. A sign is only accepted on the numerator.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = || Error::ParseRational(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num = parse_integer(num, true).ok_or_else(err)?;
    let den = match den {
        Some(d) => parse_integer(d, false).ok_or_else(err)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

fn parse_integer(text: &str, signed: bool) -> Option<BigInt> {
    let digits = match text.strip_prefix('-') {
        Some(rest) if signed => rest,
        Some(_) => return None,
        None => text,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// log₁₀ of a positive big integer, accurate to double precision even when
/// the value overflows `f64`.
pub fn log10_bigint(value: &BigInt) -> Option<f64> {
    if value.sign() != Sign::Plus {
        return None;
    }
    let bits = value.bits();
    let shift = bits.saturating_sub(64);
    let top = (value >> shift).to_f64()?;
    Some(top.log10() + shift as f64 * std::f64::consts::LOG10_2)
}

/// log₁₀ of a positive rational; `None` for zero or negative input.
pub fn log10_rational(q: &Rational) -> Option<f64> {
    if !q.is_positive() {
        return None;
    }
    Some(log10_bigint(q.numer())? - log10_bigint(q.denom())?)
}

/// Serde adapter writing rationals as their `"num/den"` string.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(t) => parse_rational(&t).map_err(de::Error::custom),
            Repr::Int(i) => Ok(Rational::from_integer(i.into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format_rational(&ratio(6, 2)), "3");
        assert_eq!(format_rational(&ratio(3, 32)), "3/32");
        assert_eq!(format_rational(&ratio(-2, 4)), "-1/2");
    }

    #[test]
    fn parses_canonical_and_unreduced_forms() {
        assert_eq!(parse_rational("3/32").unwrap(), ratio(3, 32));
        assert_eq!(parse_rational("6/64").unwrap(), ratio(3, 32));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_rational("-7/2").unwrap(), ratio(-7, 2));
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in ["", "/", "1/", "/2", "1/0", "1/-2", "+1", "1.5", "a/b", "1/2/3", " 1"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn log10_handles_huge_values() {
        let big = num_traits::pow(BigInt::from(250), 40);
        let got = log10_bigint(&big).unwrap();
        assert!((got - 40.0 * 250f64.log10()).abs() < 1e-12);
        assert_eq!(log10_rational(&Rational::zero()), None);
        assert!((log10_rational(&ratio(1, 1000)).unwrap() + 3.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn text_round_trip(n in any::<i64>(), d in 1i64..=i64::MAX, e in 0u32..4) {
            let q = pow(&ratio(n, d), e);
            prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }
}
