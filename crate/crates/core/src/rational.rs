//! Exact rational numbers and their `p/q` text form.

use std::str::FromStr;

use num_traits::{One, Zero};

pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational `{0}` (expected `p/q` or an integer)")]
pub struct ParseRationalError(pub String);

/// Parses `p/q`, `-p/q` or a bare integer. The result is in lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = i64::from_str(p.trim()).map_err(|_| err())?;
            let q = i64::from_str(q.trim()).map_err(|_| err())?;
            if q == 0 {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => i64::from_str(s).map(Rational::from_integer).map_err(|_| err()),
    }
}

/// Formats as `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn is_unit_interval(t: &Rational) -> bool {
    *t >= Rational::zero() && *t <= Rational::one()
}

/// All reduced fractions `p/q` with `0 < p < q <= max_denom`, sorted.
pub fn farey_interior(max_denom: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 2..=max_denom {
        for p in 1..q {
            if num_integer::gcd(p, q) == 1 {
                out.push(Rational::new(p, q));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_rational("-2/4").unwrap(), Rational::new(-1, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), Rational::from_integer(3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn format_is_lowest_terms() {
        assert_eq!(format_rational(&Rational::new(2, 4)), "1/2");
        assert_eq!(format_rational(&Rational::new(-3, 1)), "-3");
    }

    #[test]
    fn farey_small() {
        let f = farey_interior(4);
        let expect: Vec<_> =
            [(1, 4), (1, 3), (1, 2), (2, 3), (3, 4)].iter().map(|&(p, q)| Rational::new(p, q)).collect();
        assert_eq!(f, expect);
    }
}
