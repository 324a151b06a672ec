use std::collections::BTreeMap;
use std::fmt;

use super::{BigradedDims, OracleError};

/// Integer Laurent polynomial in `q`, zero coefficients never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly(BTreeMap<i32, i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Coefficients of `q^low, q^(low+1), ...`.
    pub fn from_coefficients(low: i32, coeffs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(low + i as i32, c);
        }
        p
    }

    /// Coefficients of a symmetric polynomial listed from its lowest exponent.
    pub fn symmetric(coeffs: &[i64]) -> Self {
        Self::from_coefficients(-(coeffs.len() as i32 - 1) / 2, coeffs)
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        let c = self.0.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.0.get(&exp).copied().unwrap_or(0)
    }

    /// Dense coefficient list from the lowest to the highest exponent.
    pub fn coefficients(&self) -> Vec<i64> {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo..=hi).map(|e| self.coeff(e)).collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.iter().all(|(&e, &c)| self.coeff(-e) == c)
    }

    /// Knot determinant `|Δ(-1)|`.
    pub fn determinant(&self) -> i64 {
        self.0.iter().map(|(&e, &c)| if e.rem_euclid(2) == 0 { c } else { -c }).sum::<i64>().abs()
    }

    fn shift(&self, by: i32) -> Self {
        Self(self.0.iter().map(|(&e, &c)| (e + by, c)).collect())
    }

    fn negate(&self) -> Self {
        Self(self.0.iter().map(|(&e, &c)| (e, -c)).collect())
    }

    /// Exact quotient by `q - 1`, or `None` if it does not divide.
    fn div_q_minus_1(&self) -> Option<Self> {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Some(Self::zero());
        };
        // p = (q - 1) s: s_{e-1} = p_e + s_e from the top down.
        let mut s = Self::zero();
        let mut carry = 0;
        for e in (lo + 1..=hi).rev() {
            carry += self.coeff(e);
            s.add_term(e - 1, carry);
        }
        (carry == -self.coeff(lo)).then_some(s)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, &c)) in self.0.iter().rev().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            match (i, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                _ => write!(f, " {sign} ")?,
            }
            let a = c.abs();
            let var = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            match (a, e) {
                (1, 0) => f.write_str("1")?,
                (1, _) => f.write_str(&var)?,
                _ => write!(f, "{a}{var}")?,
            }
        }
        Ok(())
    }
}

/// The symmetric Alexander polynomial with `Δ(1) = 1` read off the Euler
/// characteristic `Σ (-1)^M q^A dim = ±q^s Δ(q) (1 - q^-1)^(n-1)` of the
/// tilde homology of an `n x n` grid.
pub fn alexander_from_euler(dims: &BigradedDims, n: usize) -> Result<LaurentPoly, OracleError> {
    let mut p = dims.euler_characteristic();
    // (1 - q^-1) = q^-1 (q - 1); the power of q is absorbed by centering.
    for _ in 1..n {
        p = p.div_q_minus_1().ok_or(OracleError::NotDivisible { power: n - 1 })?;
    }
    let (Some(lo), Some(hi)) = (p.min_exp(), p.max_exp()) else {
        return Err(OracleError::NotDivisible { power: n - 1 });
    };
    if (lo + hi) % 2 != 0 {
        return Err(OracleError::NotSymmetric(p));
    }
    let mut delta = p.shift(-(lo + hi) / 2);
    let at_one: i64 = delta.0.values().sum();
    match at_one {
        1 => {}
        -1 => delta = delta.negate(),
        other => return Err(OracleError::BadNormalization(other)),
    }
    if !delta.is_symmetric() {
        return Err(OracleError::NotSymmetric(delta));
    }
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        assert_eq!(LaurentPoly::symmetric(&[1, -1, 1]).to_string(), "q - 1 + q^-1");
        assert_eq!(LaurentPoly::symmetric(&[-1, 3, -1]).to_string(), "-q + 3 - q^-1");
        assert_eq!(LaurentPoly::symmetric(&[1]).to_string(), "1");
        assert_eq!(LaurentPoly::symmetric(&[2, -3, 2]).to_string(), "2q - 3 + 2q^-1");
    }

    #[test]
    fn division_by_q_minus_1() {
        // q^2 - 1 = (q - 1)(q + 1)
        let p = LaurentPoly::from_coefficients(0, &[-1, 0, 1]);
        assert_eq!(p.div_q_minus_1().unwrap(), LaurentPoly::from_coefficients(0, &[1, 1]));
        assert!(LaurentPoly::from_coefficients(0, &[1, 0, 1]).div_q_minus_1().is_none());
    }

    #[test]
    fn unknot_euler() {
        let dims = BigradedDims(BTreeMap::from([((0, 0), 1), ((-1, -1), 1)]));
        assert_eq!(alexander_from_euler(&dims, 2).unwrap(), LaurentPoly::symmetric(&[1]));
    }

    #[test]
    fn non_knot_euler_rejected() {
        let dims = BigradedDims(BTreeMap::from([((0, 0), 1)]));
        assert!(matches!(alexander_from_euler(&dims, 2), Err(OracleError::NotDivisible { .. })));
    }

    #[test]
    fn determinants() {
        assert_eq!(LaurentPoly::symmetric(&[1, -1, 1]).determinant(), 3);
        assert_eq!(LaurentPoly::symmetric(&[-1, 3, -1]).determinant(), 5);
        assert_eq!(LaurentPoly::symmetric(&[1, -3, 5, -3, 1]).determinant(), 13);
    }
}
