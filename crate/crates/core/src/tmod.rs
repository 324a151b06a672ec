//! t-modified complexes and their homology over the long power series ring.
//!
//! The ring is never materialized. A homogeneous complex over it has every
//! matrix entry of the form `v^alpha` with `alpha = gr_t(y) - gr_t(x) + 1`,
//! so the differential is an F2 matrix plus gradings. Elimination pivots on
//! an arrow of minimal exponent: every other entry in its row and column is
//! divisible by the pivot, the basis changes are homogeneous, and the net
//! effect on the remaining generators is the zig-zag toggle `a -> b` for
//! `a -> y0 <- x0 -> b`. A pivot of exponent `alpha > 0` splits off the
//! torsion summand `R/(v^alpha)` generated by `y0`; survivors are free.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::chain::FilteredUComplex;
use crate::rational::{is_unit_interval, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TModError {
    #[error("t = {0} is outside [0, 1]")]
    TOutOfRange(Rational),
    #[error("homology at t = {0} has no free summand")]
    NoFreeSummand(Rational),
}

/// A complex over the valuation ring: generators with rational `gr_t`,
/// arrows `x -> v^alpha y` over F2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TModComplex {
    t: Rational,
    grading: Vec<Rational>,
    out: Vec<Vec<(usize, Rational)>>,
}

/// `gr_t = M - t A` and `alpha = 2k + t (A(x) - A(y))` for each arrow.
pub fn t_modify(c: &FilteredUComplex, t: Rational) -> Result<TModComplex, TModError> {
    if !is_unit_interval(&t) {
        return Err(TModError::TOutOfRange(t));
    }
    let gens = c.generators();
    let grading = gens.iter().map(|g| Rational::from_integer(g.maslov as i64) - t * g.alexander as i64).collect();
    let out = (0..c.len())
        .map(|src| {
            c.arrows_from(src)
                .iter()
                .map(|a| {
                    let da = (gens[src].alexander - gens[a.target].alexander) as i64;
                    (a.target, Rational::from_integer(2 * a.k as i64) + t * da)
                })
                .collect()
        })
        .collect();
    Ok(TModComplex { t, grading, out })
}

impl TModComplex {
    /// Builds a complex directly; used by tests and for foreign input.
    pub fn from_parts(t: Rational, grading: Vec<Rational>, out: Vec<Vec<(usize, Rational)>>) -> Self {
        Self { t, grading, out }
    }

    pub fn t(&self) -> Rational {
        self.t
    }

    pub fn len(&self) -> usize {
        self.grading.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grading.is_empty()
    }

    pub fn gradings(&self) -> &[Rational] {
        &self.grading
    }

    pub fn arrows_from(&self, id: usize) -> &[(usize, Rational)] {
        &self.out[id]
    }

    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
        self.out.iter().enumerate().flat_map(|(s, v)| v.iter().map(move |&(d, a)| (s, d, a)))
    }

    /// Degree -1: `alpha = gr_t(y) - gr_t(x) + 1` on every arrow.
    pub fn is_homogeneous(&self) -> bool {
        self.arrows().all(|(s, d, a)| a == self.grading[d] - self.grading[s] + Rational::one())
    }

    pub fn exponents_nonnegative(&self) -> bool {
        self.arrows().all(|(_, _, a)| a >= Rational::zero())
    }

    /// Expands `∂_t∘∂_t` adding exponents; every monomial must cancel mod 2.
    pub fn is_d_squared_zero(&self) -> bool {
        (0..self.len()).all(|x| {
            let mut acc: BTreeMap<(usize, Rational), bool> = BTreeMap::new();
            for &(y, a) in &self.out[x] {
                for &(z, b) in &self.out[y] {
                    let e = acc.entry((z, a + b)).or_insert(false);
                    *e = !*e;
                }
            }
            acc.values().all(|odd| !odd)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BarLength {
    Finite(Rational),
    Infinite,
}

impl BarLength {
    pub fn is_infinite(&self) -> bool {
        matches!(self, BarLength::Infinite)
    }
}

impl Ord for BarLength {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (BarLength::Finite(a), BarLength::Finite(b)) => a.cmp(b),
            (BarLength::Finite(_), BarLength::Infinite) => Ordering::Less,
            (BarLength::Infinite, BarLength::Finite(_)) => Ordering::Greater,
            (BarLength::Infinite, BarLength::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for BarLength {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BarLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarLength::Finite(l) => write!(f, "{l}"),
            BarLength::Infinite => f.write_str("inf"),
        }
    }
}

/// One summand of the homology: `R/(v^len)` or `R`, generated in grading `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub g: Rational,
    pub len: BarLength,
}

/// The graded decomposition of the homology at a fixed `t`, bars sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarSummary {
    pub t: Rational,
    bars: Vec<Bar>,
}

impl BarSummary {
    pub fn new(t: Rational, mut bars: Vec<Bar>) -> Self {
        bars.sort_unstable();
        Self { t, bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn infinite_count(&self) -> usize {
        self.bars.iter().filter(|b| b.len.is_infinite()).count()
    }

    /// Gradings of the free summands, ascending.
    pub fn infinite_gradings(&self) -> Vec<Rational> {
        let mut v: Vec<_> = self.bars.iter().filter(|b| b.len.is_infinite()).map(|b| b.g).collect();
        v.sort_unstable();
        v
    }

    /// Maximal grading of a free summand.
    pub fn max_infinite(&self) -> Option<Rational> {
        self.bars.iter().filter(|b| b.len.is_infinite()).map(|b| b.g).max()
    }
}

/// Above this many generators the elimination switches from dense bit rows
/// to sorted adjacency lists (two `n x n` bit matrices are kept).
const DENSE_LIMIT: usize = 16384;

/// Mod-2 adjacency of the working differential. Vertices are labelled in
/// ascending grading, so the first successor of a row is the target of its
/// minimal-exponent arrow.
trait Adjacency {
    fn first_succ(&self, x: u32) -> Option<u32>;
    fn preds(&self, y: u32) -> Vec<u32>;
    fn succs(&self, x: u32) -> Vec<u32>;
    /// Toggles `a -> b` for all `a` in `preds`, `b` in `succs`.
    fn toggle_block(&mut self, preds: &[u32], succs: &[u32]);
    fn detach(&mut self, v: u32);
}

struct SparseAdjacency {
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
}

impl SparseAdjacency {
    fn new(n: usize, arrows: &[(u32, u32)]) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(x, y) in arrows {
            out[x as usize].push(y);
            inn[y as usize].push(x);
        }
        for v in out.iter_mut().chain(inn.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        Self { out, inn }
    }
}

fn toggle_sorted(list: &mut Vec<u32>, v: u32) {
    match list.binary_search(&v) {
        Ok(i) => {
            list.remove(i);
        }
        Err(i) => list.insert(i, v),
    }
}

fn remove_sorted(list: &mut Vec<u32>, v: u32) {
    if let Ok(i) = list.binary_search(&v) {
        list.remove(i);
    }
}

impl Adjacency for SparseAdjacency {
    fn first_succ(&self, x: u32) -> Option<u32> {
        self.out[x as usize].first().copied()
    }

    fn preds(&self, y: u32) -> Vec<u32> {
        self.inn[y as usize].clone()
    }

    fn succs(&self, x: u32) -> Vec<u32> {
        self.out[x as usize].clone()
    }

    fn toggle_block(&mut self, preds: &[u32], succs: &[u32]) {
        for &a in preds {
            for &b in succs {
                toggle_sorted(&mut self.out[a as usize], b);
                toggle_sorted(&mut self.inn[b as usize], a);
            }
        }
    }

    fn detach(&mut self, v: u32) {
        for s in std::mem::take(&mut self.inn[v as usize]) {
            remove_sorted(&mut self.out[s as usize], v);
        }
        for t in std::mem::take(&mut self.out[v as usize]) {
            remove_sorted(&mut self.inn[t as usize], v);
        }
    }
}

/// Row-major bit matrices for `out` and its transpose.
struct DenseAdjacency {
    words: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

fn bits(row: &[u64]) -> impl Iterator<Item = u32> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let b = word.trailing_zeros();
            word &= word - 1;
            Some(w as u32 * 64 + b)
        })
    })
}

impl DenseAdjacency {
    fn new(n: usize, arrows: &[(u32, u32)]) -> Self {
        let words = n.div_ceil(64);
        let mut m = Self { words, out: vec![0; n * words], inn: vec![0; n * words] };
        for &(x, y) in arrows {
            m.out[x as usize * words + y as usize / 64] |= 1 << (y % 64);
            m.inn[y as usize * words + x as usize / 64] |= 1 << (x % 64);
        }
        m
    }

    fn row(m: &[u64], words: usize, i: u32) -> &[u64] {
        &m[i as usize * words..(i as usize + 1) * words]
    }

    fn mask(&self, ids: &[u32]) -> Vec<u64> {
        let mut mask = vec![0; self.words];
        for &i in ids {
            mask[i as usize / 64] |= 1 << (i % 64);
        }
        mask
    }
}

impl Adjacency for DenseAdjacency {
    fn first_succ(&self, x: u32) -> Option<u32> {
        bits(Self::row(&self.out, self.words, x)).next()
    }

    fn preds(&self, y: u32) -> Vec<u32> {
        bits(Self::row(&self.inn, self.words, y)).collect()
    }

    fn succs(&self, x: u32) -> Vec<u32> {
        bits(Self::row(&self.out, self.words, x)).collect()
    }

    fn toggle_block(&mut self, preds: &[u32], succs: &[u32]) {
        let w = self.words;
        let succ_mask = self.mask(succs);
        for &a in preds {
            for (o, s) in self.out[a as usize * w..(a as usize + 1) * w].iter_mut().zip(&succ_mask) {
                *o ^= s;
            }
        }
        let pred_mask = self.mask(preds);
        for &b in succs {
            for (c, p) in self.inn[b as usize * w..(b as usize + 1) * w].iter_mut().zip(&pred_mask) {
                *c ^= p;
            }
        }
    }

    fn detach(&mut self, v: u32) {
        let w = self.words;
        let (word, bit) = (v as usize / 64, 1u64 << (v % 64));
        for s in self.preds(v) {
            self.out[s as usize * w + word] &= !bit;
        }
        for t in self.succs(v) {
            self.inn[t as usize * w + word] &= !bit;
        }
        self.out[v as usize * w..(v as usize + 1) * w].fill(0);
        self.inn[v as usize * w..(v as usize + 1) * w].fill(0);
    }
}

/// Minimal-exponent elimination on vertices sorted by grading. `key` is the
/// grading scaled by `scale` (an integer multiple of every grading's
/// denominator), so exponents are compared as integers.
fn eliminate(key: &[i64], scale: i64, mut adj: impl Adjacency) -> (Vec<(u32, i64)>, Vec<u32>) {
    let n = key.len();
    let exponent = |x: u32, y: u32| key[y as usize] - key[x as usize] + scale;
    let mut alive = vec![true; n];
    let mut best: Vec<Option<(i64, u32)>> =
        (0..n as u32).map(|x| adj.first_succ(x).map(|y| (exponent(x, y), y))).collect();

    let mut finite = Vec::new();
    loop {
        let pivot = (0..n as u32).filter_map(|x| best[x as usize].map(|(e, y)| (e, x, y))).min();
        let Some((alpha, x0, y0)) = pivot else { break };
        let preds_y: Vec<u32> = adj.preds(y0).into_iter().filter(|&a| a != x0).collect();
        let succs: Vec<u32> = adj.succs(x0).into_iter().filter(|&b| b != y0).collect();
        let preds_x = adj.preds(x0);
        adj.toggle_block(&preds_y, &succs);
        adj.detach(x0);
        adj.detach(y0);
        for v in [x0, y0] {
            alive[v as usize] = false;
            best[v as usize] = None;
        }
        for &a in preds_y.iter().chain(&preds_x) {
            if alive[a as usize] {
                best[a as usize] = adj.first_succ(a).map(|y| (exponent(a, y), y));
            }
        }
        if alpha > 0 {
            finite.push((y0, alpha));
        }
    }
    let free = (0..n as u32).filter(|&v| alive[v as usize]).collect();
    (finite, free)
}

/// Bar decomposition of `H(C_t)` by minimal-exponent graded elimination.
///
/// The decomposition is unique up to isomorphism, so the tie-break among
/// pivots of equal exponent does not affect the result.
pub fn homology_at_t(ct: &TModComplex) -> BarSummary {
    homology_with(ct, ct.len() <= DENSE_LIMIT)
}

fn homology_with(ct: &TModComplex, dense: bool) -> BarSummary {
    let n = ct.len();
    let scale = ct.grading.iter().fold(*ct.t.denom(), |l, g| num_integer::lcm(l, *g.denom()));
    let scaled = |g: &Rational| (g * scale).to_integer();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (scaled(&ct.grading[i]), i));
    let mut label = vec![0u32; n];
    for (l, &i) in order.iter().enumerate() {
        label[i] = l as u32;
    }
    let key: Vec<i64> = order.iter().map(|&i| scaled(&ct.grading[i])).collect();
    let arrows: Vec<(u32, u32)> = ct.arrows().map(|(x, y, _)| (label[x], label[y])).collect();
    let (finite, free) = if dense {
        eliminate(&key, scale, DenseAdjacency::new(n, &arrows))
    } else {
        eliminate(&key, scale, SparseAdjacency::new(n, &arrows))
    };
    let grading = |l: u32| ct.grading[order[l as usize]];
    let bars = finite
        .into_iter()
        .map(|(y, e)| Bar { g: grading(y), len: BarLength::Finite(Rational::new(e, scale)) })
        .chain(free.into_iter().map(|v| Bar { g: grading(v), len: BarLength::Infinite }))
        .collect();
    BarSummary::new(ct.t, bars)
}

/// Maximal `gr_t` of a free homology class of `C^t`, for `t` in `[0, 1]`.
pub fn upsilon_at(c: &FilteredUComplex, t: Rational) -> Result<Rational, TModError> {
    let ct = t_modify(c, t)?;
    homology_at_t(&ct).max_infinite().ok_or(TModError::NoFreeSummand(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_quotient_complex, Generator};
    use crate::grid::GridDiagram;
    use crate::limits::SizeCap;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn unknot() -> FilteredUComplex {
        let g = GridDiagram::new(vec![0, 1], vec![1, 0]).unwrap();
        build_quotient_complex(&g, SizeCap::default()).unwrap()
    }

    #[test]
    fn unknot_at_half() {
        let ct = t_modify(&unknot(), r(1, 2)).unwrap();
        let mut g = ct.gradings().to_vec();
        g.sort();
        assert_eq!(g, vec![r(-1, 2), r(0, 1)]);
        assert_eq!(ct.arrows().count(), 0);
        let h = homology_at_t(&ct);
        assert_eq!(
            h.bars(),
            &[Bar { g: r(-1, 2), len: BarLength::Infinite }, Bar { g: r(0, 1), len: BarLength::Infinite }]
        );
        assert_eq!(upsilon_at(&unknot(), r(1, 3)).unwrap(), r(0, 1));
    }

    #[test]
    fn t_outside_unit_interval() {
        assert_eq!(t_modify(&unknot(), r(3, 2)).unwrap_err(), TModError::TOutOfRange(r(3, 2)));
        assert!(t_modify(&unknot(), r(-1, 2)).is_err());
    }

    #[test]
    fn t_zero_is_maslov_picture() {
        let g = GridDiagram::new(vec![1, 2, 3, 4, 0], vec![4, 0, 1, 2, 3]).unwrap();
        let c = build_quotient_complex(&g, SizeCap::default()).unwrap();
        let ct = t_modify(&c, Rational::zero()).unwrap();
        for (id, gen) in c.generators().iter().enumerate() {
            assert_eq!(ct.gradings()[id], Rational::from_integer(gen.maslov as i64));
        }
        for ((_, _, alpha), (_, _, k)) in ct.arrows().zip(c.arrows()) {
            assert_eq!(alpha, Rational::from_integer(2 * k as i64));
        }
        assert_eq!(upsilon_at(&c, Rational::zero()).unwrap(), Rational::zero());
    }

    #[test]
    fn single_torsion_bar() {
        // x -> v^{1/2} y: one bar of length 1/2 at gr(y), nothing free.
        let gens = vec![
            Generator { maslov: 0, alexander: 0, state: None },
            Generator { maslov: -1, alexander: -1, state: None },
        ];
        let c = FilteredUComplex::from_parts(gens, [(0, 1, 0)]).unwrap();
        let ct = t_modify(&c, r(1, 2)).unwrap();
        assert!(ct.is_homogeneous());
        let h = homology_at_t(&ct);
        assert_eq!(h.bars(), &[Bar { g: r(-1, 2), len: BarLength::Finite(r(1, 2)) }]);
        assert_eq!(upsilon_at(&c, r(1, 2)).unwrap_err(), TModError::NoFreeSummand(r(1, 2)));
    }

    #[test]
    fn unit_pivot_leaves_no_bar() {
        let gens = vec![
            Generator { maslov: 0, alexander: 0, state: None },
            Generator { maslov: -1, alexander: 0, state: None },
            Generator { maslov: 0, alexander: 0, state: None },
        ];
        let c = FilteredUComplex::from_parts(gens, [(0, 1, 0)]).unwrap();
        let h = homology_at_t(&t_modify(&c, r(1, 3)).unwrap());
        assert_eq!(h.bars(), &[Bar { g: r(0, 1), len: BarLength::Infinite }]);
    }

    #[test]
    fn dense_and_sparse_agree() {
        let g = GridDiagram::new(vec![1, 2, 3, 4, 0], vec![4, 0, 1, 2, 3]).unwrap();
        let c = crate::chain::reduce(&build_quotient_complex(&g, SizeCap::default()).unwrap());
        for t in [r(0, 1), r(1, 3), r(3, 4), r(1, 1)] {
            let ct = t_modify(&c, t).unwrap();
            assert_eq!(homology_with(&ct, true), homology_with(&ct, false));
        }
    }
}
