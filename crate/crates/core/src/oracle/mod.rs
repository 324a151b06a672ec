//! Slow, independent computations used to validate the fast path and to
//! certify dataset diagrams.

mod brute;
mod laurent;

pub use brute::{brute_force_homology_at_t, BRUTE_FORCE_GUARD};
pub use laurent::{alexander_from_euler, LaurentPoly};

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::chain::{build_tilde_complex, TildeComplex};
use crate::grid::GridDiagram;
use crate::limits::{SizeCap, SizeLimitError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    SizeLimit(#[from] SizeLimitError),
    #[error("Euler characteristic is not divisible by (1 - q^-1)^{power}; not a knot grid")]
    NotDivisible { power: usize },
    #[error("Alexander polynomial {0} is not symmetric under q <-> q^-1")]
    NotSymmetric(LaurentPoly),
    #[error("Alexander polynomial has |Δ(1)| = {0}, expected 1")]
    BadNormalization(i64),
    #[error("brute-force elimination limited to {guard} generators, got {len}")]
    TooLarge { len: usize, guard: usize },
    #[error("brute-force elimination met a non-monomial pivot")]
    NonMonomialPivot,
}

/// Dimensions over F2 of a bigraded vector space, keyed by `(M, A)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BigradedDims(pub BTreeMap<(i32, i32), usize>);

impl BigradedDims {
    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn get(&self, m: i32, a: i32) -> usize {
        self.0.get(&(m, a)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), usize)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    /// The distinct values of `δ = M - A` carrying homology.
    pub fn diagonals(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.0.iter().filter(|(_, &v)| v > 0).map(|(&(m, a), _)| m - a).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// `Some(δ)` if all homology sits on the single diagonal `M - A = δ`.
    pub fn thin_diagonal(&self) -> Option<i32> {
        match self.diagonals()[..] {
            [d] => Some(d),
            _ => None,
        }
    }

    /// `Σ (-1)^M q^A dim`.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for ((m, a), d) in self.iter() {
            let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(a, sign * d as i64);
        }
        p
    }

    /// Poincaré polynomial as `(M, A, dim)` triples in ascending order.
    pub fn terms(&self) -> Vec<(i32, i32, usize)> {
        self.iter().filter(|&(_, d)| d > 0).map(|((m, a), d)| (m, a, d)).collect()
    }
}

/// Rank over F2 of the rows given as bitsets, by plain Gaussian elimination.
fn rank_mod2(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let words = rows.first().map_or(0, Vec::len);
    for col in 0..words * 64 {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Bigraded homology of a tilde complex, one elimination per bidegree.
pub fn tilde_homology_of(c: &TildeComplex) -> BigradedDims {
    let mut blocks: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
    for (id, &g) in c.gradings().iter().enumerate() {
        blocks.entry(g).or_default().push(id);
    }
    let mut local = vec![0usize; c.len()];
    for ids in blocks.values() {
        for (i, &id) in ids.iter().enumerate() {
            local[id] = i;
        }
    }
    // rank of ∂ leaving the bidegree (M, A), into (M - 1, A)
    let ranks: BTreeMap<(i32, i32), usize> = blocks
        .par_iter()
        .map(|(&(m, a), ids)| {
            let width = blocks.get(&(m - 1, a)).map_or(0, Vec::len);
            let words = width.div_ceil(64);
            let rows = ids
                .iter()
                .map(|&id| {
                    let mut row = vec![0u64; words];
                    for &t in c.arrows_from(id) {
                        row[local[t] / 64] ^= 1 << (local[t] % 64);
                    }
                    row
                })
                .collect();
            ((m, a), if width == 0 { 0 } else { rank_mod2(rows) })
        })
        .collect();
    let dims = blocks
        .iter()
        .map(|(&(m, a), ids)| {
            let incoming = ranks.get(&(m + 1, a)).copied().unwrap_or(0);
            ((m, a), ids.len() - ranks[&(m, a)] - incoming)
        })
        .filter(|&(_, d)| d > 0)
        .collect();
    BigradedDims(dims)
}

/// Bigraded homology of the fully blocked complex of `g`.
pub fn tilde_homology(g: &GridDiagram, cap: SizeCap) -> Result<BigradedDims, OracleError> {
    Ok(tilde_homology_of(&build_tilde_complex(g, cap)?))
}
