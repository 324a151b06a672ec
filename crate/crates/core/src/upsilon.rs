//! Υ as an exact piecewise-linear function on `[0, 2]`.
//!
//! Υ is evaluated at every fraction in `(0, 1)` whose denominator is at most
//! `2(D + 1)`, where `D` is the spread of Alexander gradings, plus `0`, `1`
//! and the midpoint of every gap. A gap is accepted only if its midpoint is
//! collinear with its ends; otherwise it is bisected up to a fixed depth.
//! The result on `[0, 1]` is mirrored to `(1, 2]`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::chain::FilteredUComplex;
use crate::rational::{farey_interior, Rational};
use crate::tmod::{upsilon_at, TModError};

/// Bisection depth allowed on a gap whose midpoint is off the chord.
pub const SUBDIVISION_DEPTH: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PLError {
    #[error("a piecewise-linear function needs at least two breakpoints")]
    TooFewPoints,
    #[error("breakpoints must be strictly increasing in t (at t = {0})")]
    NotIncreasing(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UpsilonError {
    #[error(transparent)]
    TMod(#[from] TModError),
    #[error("Υ is not linear on [{lo}, {hi}] after {depth} bisections")]
    NotCollinear { lo: Rational, hi: Rational, depth: u32 },
    #[error("segment [{lo}, {hi}] has non-integer slope {slope}")]
    NonIntegerSlope { lo: Rational, hi: Rational, slope: Rational },
    #[error("complex has no generators")]
    Empty,
}

/// Continuous piecewise-linear function given by its breakpoints; no three
/// consecutive breakpoints are collinear.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLFunction {
    points: Vec<(Rational, Rational)>,
}

fn slope(a: (Rational, Rational), b: (Rational, Rational)) -> Rational {
    (b.1 - a.1) / (b.0 - a.0)
}

impl PLFunction {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, PLError> {
        if points.len() < 2 {
            return Err(PLError::TooFewPoints);
        }
        if let Some(w) = points.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(PLError::NotIncreasing(w[1].0));
        }
        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
        for p in points {
            if merged.len() >= 2 {
                let (a, b) = (merged[merged.len() - 2], merged[merged.len() - 1]);
                if slope(a, b) == slope(b, p) {
                    merged.pop();
                }
            }
            merged.push(p);
        }
        Ok(Self { points: merged })
    }

    /// The zero function on `[0, 2]`.
    pub fn zero() -> Self {
        Self { points: vec![(Rational::zero(), Rational::zero()), (Rational::from_integer(2), Rational::zero())] }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn domain(&self) -> (Rational, Rational) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    pub fn value(&self, t: Rational) -> Option<Rational> {
        let i = self.points.partition_point(|p| p.0 < t);
        let p = *self.points.get(i)?;
        if p.0 == t {
            return Some(p.1);
        }
        let a = *self.points.get(i.checked_sub(1)?)?;
        Some(a.1 + slope(a, p) * (t - a.0))
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.points.windows(2).map(|w| slope(w[0], w[1])).collect()
    }

    pub fn integer_slopes(&self) -> Option<Vec<i64>> {
        self.slopes().into_iter().map(|s| s.is_integer().then(|| s.to_integer())).collect()
    }

    pub fn neg(&self) -> Self {
        Self { points: self.points.iter().map(|&(t, v)| (t, -v)).collect() }
    }

    /// Pointwise sum; `None` if the domains differ.
    pub fn add(&self, other: &Self) -> Option<Self> {
        if self.domain() != other.domain() {
            return None;
        }
        let mut ts: Vec<Rational> = self.points.iter().chain(&other.points).map(|p| p.0).collect();
        ts.sort();
        ts.dedup();
        let points = ts.into_iter().map(|t| (t, self.value(t).unwrap() + other.value(t).unwrap())).collect();
        Self::new(points).ok()
    }

    pub fn scale(&self, k: i64) -> Self {
        let points = self.points.iter().map(|&(t, v)| (t, v * k)).collect();
        Self::new(points).expect("scaling keeps breakpoints increasing")
    }

    /// A `t` where the two functions differ, if any. Both are linear between
    /// the union of their breakpoints, so checking those suffices.
    pub fn first_difference(&self, other: &Self) -> Option<Rational> {
        if self.domain() != other.domain() {
            return Some(self.domain().0.min(other.domain().0));
        }
        let mut ts: Vec<Rational> = self.points.iter().chain(&other.points).map(|p| p.0).collect();
        ts.sort();
        ts.dedup();
        ts.into_iter().find(|&t| self.value(t) != other.value(t))
    }

    /// A breakpoint `t` with `f(t) != f(lo + hi - t)`, if any.
    pub fn asymmetry(&self) -> Option<Rational> {
        let (lo, hi) = self.domain();
        self.points.iter().map(|p| p.0).find(|&t| self.value(lo + hi - t) != self.value(t))
    }
}

/// `-` the slope of the first segment. The functions built here have integer
/// slopes, so this is exact.
pub fn tau(f: &PLFunction) -> i64 {
    let s = f.slopes()[0];
    debug_assert!(s.is_integer());
    -s.to_integer()
}

/// Candidate breakpoints in `[0, 1]` for a complex with Alexander spread `d`.
pub fn candidate_ts(d: i32) -> Vec<Rational> {
    let mut ts = vec![Rational::zero()];
    ts.extend(farey_interior(2 * (d as i64 + 1)));
    ts.push(Rational::one());
    ts
}

fn certify_gap(
    c: &FilteredUComplex,
    lo: (Rational, Rational),
    hi: (Rational, Rational),
    mid: Rational,
    depth: u32,
    out: &mut Vec<(Rational, Rational)>,
) -> Result<(), UpsilonError> {
    if (lo.1 + hi.1) / 2 == mid {
        return Ok(());
    }
    if depth == SUBDIVISION_DEPTH {
        return Err(UpsilonError::NotCollinear { lo: lo.0, hi: hi.0, depth });
    }
    let m = ((lo.0 + hi.0) / 2, mid);
    let left = upsilon_at(c, (lo.0 + m.0) / 2)?;
    let right = upsilon_at(c, (m.0 + hi.0) / 2)?;
    certify_gap(c, lo, m, left, depth + 1, out)?;
    out.push(m);
    certify_gap(c, m, hi, right, depth + 1, out)
}

/// Υ of the complex on `[0, 2]`.
pub fn upsilon_function(c: &FilteredUComplex) -> Result<PLFunction, UpsilonError> {
    let (a_min, a_max) = c.alexander_range().ok_or(UpsilonError::Empty)?;
    let ts = candidate_ts(a_max - a_min);
    let mids: Vec<Rational> = ts.windows(2).map(|w| (w[0] + w[1]) / 2).collect();
    let eval = |ts: &[Rational]| -> Result<Vec<Rational>, UpsilonError> {
        ts.par_iter().map(|&t| upsilon_at(c, t).map_err(UpsilonError::from)).collect()
    };
    let vals = eval(&ts)?;
    let mid_vals = eval(&mids)?;

    let mut half = vec![(ts[0], vals[0])];
    for i in 0..mids.len() {
        let (lo, hi) = ((ts[i], vals[i]), (ts[i + 1], vals[i + 1]));
        certify_gap(c, lo, hi, mid_vals[i], 0, &mut half)?;
        half.push(hi);
    }
    let two = Rational::from_integer(2);
    let mut points = half.clone();
    points.extend(half.iter().rev().skip(1).map(|&(t, v)| (two - t, v)));
    let f = PLFunction::new(points).expect("candidates are increasing");
    for w in f.breakpoints().windows(2) {
        let s = slope(w[0], w[1]);
        if !s.is_integer() {
            return Err(UpsilonError::NonIntegerSlope { lo: w[0].0, hi: w[1].0, slope: s });
        }
    }
    Ok(f)
}
