//! Filtered chain complexes over `F[U]` built from grid diagrams.
//!
//! Coefficients live in the two-element field. An arrow `x -> U^k y` records
//! a term of `∂x`; Maslov homogeneity pins `k = (M(y) - M(x) + 1) / 2`, so a
//! pair of generators carries at most one arrow and parallel contributions
//! cancel in pairs.

mod reduce;

pub use reduce::reduce;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::grid::{factorial, scan_rectangles, unrank_permutation, Grader, GridDiagram};
use crate::limits::{SizeCap, SizeLimitError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Generator {
    pub maslov: i32,
    pub alexander: i32,
    /// Lexicographic rank of the grid state this generator came from.
    pub state: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub target: usize,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantViolation {
    #[error("d^2 != 0: {from} reaches {to} through an odd number of U^{k} paths")]
    DSquared { from: usize, to: usize, k: u32 },
    #[error("arrow {src} -> U^{k} {dst} is not Maslov homogeneous")]
    Homogeneity { src: usize, dst: usize, k: u32 },
    #[error("arrow {src} -> U^{k} {dst} raises the Alexander filtration")]
    Filtration { src: usize, dst: usize, k: u32 },
    #[error("parallel contributions {src} -> {dst} carry different U-powers ({k1} vs {k2})")]
    ParallelMismatch { src: usize, dst: usize, k1: u32, k2: u32 },
    #[error("arrow {src} -> {dst} refers to a missing generator")]
    DanglingArrow { src: usize, dst: usize },
}

/// A finitely generated, graded, filtered chain complex over `F[U]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredUComplex {
    gens: Vec<Generator>,
    out: Vec<Vec<Arrow>>,
}

/// Mod-2 accumulation of arrow contributions for one source.
fn fold_mod2(src: usize, mut terms: Vec<(usize, u32)>) -> Result<Vec<Arrow>, InvariantViolation> {
    terms.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < terms.len() {
        let (dst, k) = terms[i];
        let mut j = i;
        while j < terms.len() && terms[j].0 == dst {
            if terms[j].1 != k {
                return Err(InvariantViolation::ParallelMismatch { src, dst, k1: k, k2: terms[j].1 });
            }
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(Arrow { target: dst, k });
        }
        i = j;
    }
    Ok(out)
}

impl FilteredUComplex {
    /// Builds a complex from generators and arrow contributions
    /// `(src, dst, k)`; repeated contributions cancel mod 2.
    pub fn from_parts(
        gens: Vec<Generator>,
        arrows: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Result<Self, InvariantViolation> {
        let mut per_src: Vec<Vec<(usize, u32)>> = vec![Vec::new(); gens.len()];
        for (src, dst, k) in arrows {
            if src >= gens.len() || dst >= gens.len() {
                return Err(InvariantViolation::DanglingArrow { src, dst });
            }
            per_src[src].push((dst, k));
        }
        let out =
            per_src.into_iter().enumerate().map(|(src, terms)| fold_mod2(src, terms)).collect::<Result<_, _>>()?;
        Ok(Self { gens, out })
    }

    pub(crate) fn from_adjacency(gens: Vec<Generator>, out: Vec<Vec<Arrow>>) -> Self {
        debug_assert_eq!(gens.len(), out.len());
        Self { gens, out }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, id: usize) -> &Generator {
        &self.gens[id]
    }

    /// Arrows leaving `id`, sorted by target.
    pub fn arrows_from(&self, id: usize) -> &[Arrow] {
        &self.out[id]
    }

    /// All arrows as `(src, dst, k)`.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.out.iter().enumerate().flat_map(|(s, v)| v.iter().map(move |a| (s, a.target, a.k)))
    }

    pub fn arrow_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Filtration drop `A(x) - (A(y) - k)` of the arrow `x -> U^k y`.
    pub fn filtration_drop(&self, src: usize, arrow: &Arrow) -> i32 {
        self.gens[src].alexander - self.gens[arrow.target].alexander + arrow.k as i32
    }

    pub fn alexander_range(&self) -> Option<(i32, i32)> {
        let min = self.gens.iter().map(|g| g.alexander).min()?;
        let max = self.gens.iter().map(|g| g.alexander).max()?;
        Some((min, max))
    }

    /// `M(y) - M(x) + 1 = 2k` for every arrow.
    pub fn check_homogeneity(&self) -> Result<(), InvariantViolation> {
        for (src, dst, k) in self.arrows() {
            if self.gens[dst].maslov - self.gens[src].maslov + 1 != 2 * k as i32 {
                return Err(InvariantViolation::Homogeneity { src, dst, k });
            }
        }
        Ok(())
    }

    /// `A(x) - A(y) + k >= 0` for every arrow.
    pub fn check_filtration(&self) -> Result<(), InvariantViolation> {
        for (src, arrows) in self.out.iter().enumerate() {
            for a in arrows {
                if self.filtration_drop(src, a) < 0 {
                    return Err(InvariantViolation::Filtration { src, dst: a.target, k: a.k });
                }
            }
        }
        Ok(())
    }

    /// Expands `∂∘∂` with U-powers added and checks every coefficient is even.
    pub fn check_d_squared(&self) -> Result<(), InvariantViolation> {
        let bad = (0..self.len()).into_par_iter().find_map_any(|x| {
            let mut acc: BTreeMap<(usize, u32), bool> = BTreeMap::new();
            for a in &self.out[x] {
                for b in &self.out[a.target] {
                    let e = acc.entry((b.target, a.k + b.k)).or_insert(false);
                    *e = !*e;
                }
            }
            acc.into_iter().find(|&(_, odd)| odd).map(|((to, k), _)| (x, to, k))
        });
        match bad {
            Some((from, to, k)) => Err(InvariantViolation::DSquared { from, to, k }),
            None => Ok(()),
        }
    }

    pub fn check_invariants(&self) -> Result<(), InvariantViolation> {
        self.check_homogeneity()?;
        self.check_filtration()?;
        self.check_d_squared()
    }

    /// The dual complex: `x* ` sits at `(-M, -A)` and every arrow
    /// `x -> U^k y` becomes `y* -> U^k x*`.
    pub fn dualize(&self) -> FilteredUComplex {
        let gens = self
            .gens
            .iter()
            .map(|g| Generator { maslov: -g.maslov, alexander: -g.alexander, state: g.state })
            .collect();
        let mut out = vec![Vec::new(); self.len()];
        for (src, dst, k) in self.arrows() {
            out[dst].push(Arrow { target: src, k });
        }
        for v in &mut out {
            v.sort_unstable();
        }
        Self { gens, out }
    }
}

/// Differential restricted to marking-free rectangles: preserves `A`,
/// lowers `M` by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeComplex {
    gens: Vec<(i32, i32)>,
    out: Vec<Vec<usize>>,
}

impl TildeComplex {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// `(M, A)` of every generator.
    pub fn gradings(&self) -> &[(i32, i32)] {
        &self.gens
    }

    pub fn arrows_from(&self, id: usize) -> &[usize] {
        &self.out[id]
    }

    pub fn arrow_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn check_invariants(&self) -> Result<(), InvariantViolation> {
        for (src, targets) in self.out.iter().enumerate() {
            let (m, a) = self.gens[src];
            let mut acc: BTreeMap<usize, bool> = BTreeMap::new();
            for &dst in targets {
                if self.gens[dst] != (m - 1, a) {
                    return Err(InvariantViolation::Homogeneity { src, dst, k: 0 });
                }
                for &z in &self.out[dst] {
                    let e = acc.entry(z).or_insert(false);
                    *e = !*e;
                }
            }
            if let Some((to, _)) = acc.into_iter().find(|&(_, odd)| odd) {
                return Err(InvariantViolation::DSquared { from: src, to, k: 0 });
            }
        }
        Ok(())
    }
}

/// Per-state generator and folded arrow list, computed in parallel over
/// lexicographic state ranks.
fn build_rows(
    g: &GridDiagram,
    cap: SizeCap,
    keep: impl Fn(usize, usize) -> bool + Sync,
) -> Result<Vec<(Generator, Vec<Arrow>)>, SizeLimitError> {
    cap.check(g.n())?;
    let n = g.n();
    let grader = Grader::new(g);
    let rows = (0..factorial(n))
        .into_par_iter()
        .map(|rank| {
            let perm = unrank_permutation(n, rank);
            let (maslov, alexander) = grader.grade(&perm);
            let mut terms = Vec::new();
            let mut target = perm.clone();
            scan_rectangles(g, &perm, |r| {
                if r.empty && keep(r.count_o, r.count_x) {
                    target.swap(r.left, r.right);
                    terms.push((crate::grid::rank_permutation(&target), r.count_o as u32));
                    target.swap(r.left, r.right);
                }
            });
            let arrows = fold_mod2(rank, terms).expect("empty rectangles between two states share their O-count");
            (Generator { maslov, alexander, state: Some(rank) }, arrows)
        })
        .collect();
    Ok(rows)
}

/// The quotient complex `GC^-(G)/(U_1 = ... = U_n)` over `F[U]`: one
/// generator per grid state, one `U^{#O}` term per empty rectangle.
pub fn build_quotient_complex(g: &GridDiagram, cap: SizeCap) -> Result<FilteredUComplex, SizeLimitError> {
    let (gens, out) = build_rows(g, cap, |_, _| true)?.into_iter().unzip();
    Ok(FilteredUComplex { gens, out })
}

/// The fully blocked complex: only rectangles avoiding every marking.
pub fn build_tilde_complex(g: &GridDiagram, cap: SizeCap) -> Result<TildeComplex, SizeLimitError> {
    let rows = build_rows(g, cap, |o, x| o == 0 && x == 0)?;
    let (gens, out) = rows
        .into_iter()
        .map(|(gen, arrows)| ((gen.maslov, gen.alexander), arrows.into_iter().map(|a| a.target).collect()))
        .unzip();
    Ok(TildeComplex { gens, out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unknot() -> GridDiagram {
        GridDiagram::new(vec![0, 1], vec![1, 0]).unwrap()
    }

    fn trefoil() -> GridDiagram {
        GridDiagram::new(vec![1, 2, 3, 4, 0], vec![4, 0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn unknot_quotient_has_zero_differential() {
        let c = build_quotient_complex(&unknot(), SizeCap::default()).unwrap();
        let mut grades: Vec<_> = c.generators().iter().map(|g| (g.maslov, g.alexander)).collect();
        grades.sort();
        assert_eq!(grades, vec![(-1, -1), (0, 0)]);
        assert_eq!(c.arrow_count(), 0);
        let t = build_tilde_complex(&unknot(), SizeCap::default()).unwrap();
        assert_eq!(t.arrow_count(), 0);
    }

    #[test]
    fn trefoil_quotient_invariants() {
        let c = build_quotient_complex(&trefoil(), SizeCap::default()).unwrap();
        assert_eq!(c.len(), 120);
        c.check_invariants().unwrap();
        build_tilde_complex(&trefoil(), SizeCap::default()).unwrap().check_invariants().unwrap();
    }

    #[test]
    fn filtration_drop_is_x_count() {
        let g = trefoil();
        let c = build_quotient_complex(&g, SizeCap::default()).unwrap();
        let grader = Grader::new(&g);
        for (src, gen) in c.generators().iter().enumerate() {
            let perm = unrank_permutation(5, gen.state.unwrap());
            assert_eq!(grader.grade(&perm), (gen.maslov, gen.alexander));
            let mut by_target: BTreeMap<usize, usize> = BTreeMap::new();
            scan_rectangles(&g, &perm, |r| {
                if r.empty {
                    let mut t = perm.clone();
                    t.swap(r.left, r.right);
                    by_target.insert(crate::grid::rank_permutation(&t), r.count_x);
                }
            });
            for a in c.arrows_from(src) {
                assert_eq!(c.filtration_drop(src, a) as usize, by_target[&a.target]);
            }
        }
    }

    #[test]
    fn dual_is_involution_and_negates() {
        let c = build_quotient_complex(&unknot(), SizeCap::default()).unwrap();
        let d = c.dualize();
        let mut grades: Vec<_> = d.generators().iter().map(|g| (g.maslov, g.alexander)).collect();
        grades.sort();
        assert_eq!(grades, vec![(0, 0), (1, 1)]);
        let t = build_quotient_complex(&trefoil(), SizeCap::default()).unwrap();
        let td = t.dualize();
        td.check_invariants().unwrap();
        assert_eq!(td.dualize(), t);
    }

    #[test]
    fn from_parts_cancels_and_rejects() {
        let gens = vec![
            Generator { maslov: 0, alexander: 0, state: None },
            Generator { maslov: -1, alexander: 0, state: None },
        ];
        let c = FilteredUComplex::from_parts(gens.clone(), [(0, 1, 0), (0, 1, 0)]).unwrap();
        assert_eq!(c.arrow_count(), 0);
        let err = FilteredUComplex::from_parts(gens.clone(), [(0, 1, 0), (0, 1, 1)]).unwrap_err();
        assert!(matches!(err, InvariantViolation::ParallelMismatch { .. }));
        let err = FilteredUComplex::from_parts(gens.clone(), [(0, 2, 0)]).unwrap_err();
        assert!(matches!(err, InvariantViolation::DanglingArrow { .. }));
        let bad = FilteredUComplex::from_parts(gens, [(0, 1, 1)]).unwrap();
        assert!(matches!(bad.check_homogeneity(), Err(InvariantViolation::Homogeneity { .. })));
    }
}
