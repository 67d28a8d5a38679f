//! Exact rational scalars used for all costs, distances and thresholds.
//!
//! Every comparison in the toolkit is an exact comparison on reduced
//! fractions; no floating point enters any feasibility decision.

use num::{BigInt, BigRational, One, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`. Panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational in canonical form: lowest terms, `p/q`, or just `p`
/// when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or a plain integer. Returns `None` on malformed input or a
/// zero denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).ok()?;
            let den = BigInt::from_str(den.trim()).ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(num, den))
        }
        None => {
            let num = BigInt::from_str(s.trim()).ok()?;
            Some(Rational::from_integer(num))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-2", "5/2", "11/4"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        // non-canonical input is reduced
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
        assert!(parse_rational("1/2/3").is_none());
    }
}
