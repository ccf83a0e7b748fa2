//! Exact rational numbers.
//!
//! Every payoff, probability and LP coefficient in the crate is a
//! [`Rational`]: an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Nothing is ever rounded.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ParseError;

pub type Rational = BigRational;

/// `n / d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p/q` or `p`, with an optional leading `-`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let bad = || ParseError::Rational(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let value = match body.split_once('/') {
        Some((p, q)) => {
            if !digits(p) || !digits(q) {
                return Err(bad());
            }
            let q = BigInt::from_str(q).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Rational::new(BigInt::from_str(p).map_err(|_| bad())?, q)
        }
        None => {
            if !digits(body) {
                return Err(bad());
            }
            Rational::from_integer(BigInt::from_str(body).map_err(|_| bad())?)
        }
    };
    Ok(if negative { -value } else { value })
}

/// Renders `p/q` even for integers (`1/1`), the form used in witness files.
pub fn fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Renders `p` for integers and `p/q` otherwise.
pub fn short_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        fraction_string(r)
    }
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_text_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-2/4").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("0/7").unwrap(), zero());
        for bad in ["", "-", "1/0", "1/-2", "+1", "1.5", "a/b", "1//2", "/2"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn renders_text_forms() {
        assert_eq!(short_string(&rat(4, 2)), "2");
        assert_eq!(short_string(&rat(-1, 3)), "-1/3");
        assert_eq!(fraction_string(&one()), "1/1");
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms_hold_exactly(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &(-a.clone()), zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.recip(), one());
            }
        }

        #[test]
        fn stored_reduced(n in -5000i64..5000, d in 1i64..5000) {
            let r = rat(n, d);
            prop_assert!(r.denom().is_positive());
            prop_assert!(num_integer::Integer::gcd(r.numer(), r.denom()).is_one());
        }

        #[test]
        fn text_round_trip(a in arb_rational()) {
            prop_assert_eq!(parse_rational(&short_string(&a)).unwrap(), a.clone());
            prop_assert_eq!(parse_rational(&fraction_string(&a)).unwrap(), a);
        }
    }
}
