//! Dense elimination over the valuation ring.
//!
//! Matrix entries are F2 polynomials in `v` with rational exponents, stored
//! as sorted exponent sets. Every step is an explicit similarity transform
//! `D -> S^-1 D S` for an elementary basis change `e'_j = e_j + c e_i`,
//! which adds `c` times column `i` to column `j` and then `c` times row `j`
//! to row `i`. Nothing about homogeneity or sparsity is assumed.

use num_traits::Zero;

use super::OracleError;
use crate::rational::Rational;
use crate::tmod::{Bar, BarLength, BarSummary, TModComplex};

pub const BRUTE_FORCE_GUARD: usize = 2000;

type Poly = Vec<Rational>;

fn add_into(a: &mut Poly, b: &Poly) {
    if b.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    *a = out;
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut terms: Vec<Rational> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
    terms.sort_unstable();
    let mut out = Vec::new();
    for e in terms {
        if out.last() == Some(&e) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

struct Dense {
    /// `d[r][c]`: coefficient of `e_r` in `∂e_c`.
    d: Vec<Vec<Poly>>,
    alive: Vec<bool>,
    dirty: Vec<bool>,
}

impl Dense {
    /// Basis change `e'_j = e_j + c e_i`.
    fn change_basis(&mut self, j: usize, i: usize, c: &Poly) {
        let n = self.d.len();
        for k in 0..n {
            if !self.d[k][i].is_empty() {
                let term = mul(c, &self.d[k][i]);
                add_into(&mut self.d[k][j], &term);
                self.dirty[k] = true;
            }
        }
        for k in 0..n {
            if !self.d[j][k].is_empty() {
                let term = mul(c, &self.d[j][k]);
                add_into(&mut self.d[i][k], &term);
            }
        }
        self.dirty[i] = true;
    }

    /// `(valuation, column)` of the first minimal-valuation entry in row `r`.
    fn row_min(&self, r: usize) -> Option<(Rational, usize)> {
        let mut best: Option<(Rational, usize)> = None;
        for (c, p) in self.d[r].iter().enumerate() {
            if let (true, Some(&v)) = (self.alive[c], p.first()) {
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, c));
                }
            }
        }
        best
    }
}

/// Bar decomposition of `H(C_t)` by dense elimination.
pub fn brute_force_homology_at_t(ct: &TModComplex) -> Result<BarSummary, OracleError> {
    let n = ct.len();
    if n > BRUTE_FORCE_GUARD {
        return Err(OracleError::TooLarge { len: n, guard: BRUTE_FORCE_GUARD });
    }
    let mut m = Dense { d: vec![vec![Vec::new(); n]; n], alive: vec![true; n], dirty: vec![true; n] };
    for (x, y, alpha) in ct.arrows() {
        add_into(&mut m.d[y][x], &vec![alpha]);
    }
    let mut mins: Vec<Option<(Rational, usize)>> = vec![None; n];
    let mut bars = Vec::new();
    loop {
        for (r, min) in mins.iter_mut().enumerate() {
            if m.dirty[r] {
                *min = if m.alive[r] { m.row_min(r) } else { None };
                m.dirty[r] = false;
            }
        }
        let pivot = (0..n).filter_map(|r| mins[r].map(|(v, c)| (v, r, c))).min();
        let Some((alpha, r, c)) = pivot else { break };
        if m.d[r][c].len() != 1 {
            return Err(OracleError::NonMonomialPivot);
        }
        let shift = |p: &Poly| -> Poly { p.iter().map(|e| e - alpha).collect() };
        for r2 in 0..n {
            if r2 != r && m.alive[r2] && !m.d[r2][c].is_empty() {
                let q = shift(&m.d[r2][c]);
                m.change_basis(r, r2, &q);
            }
        }
        for c2 in 0..n {
            if c2 != c && m.alive[c2] && !m.d[r][c2].is_empty() {
                let q = shift(&m.d[r][c2]);
                m.change_basis(c2, c, &q);
            }
        }
        let isolated = (0..n).all(|k| {
            (k == r || m.d[k][c].is_empty())
                && (k == c || m.d[r][k].is_empty())
                && m.d[k][r].is_empty()
                && m.d[c][k].is_empty()
        });
        if !isolated {
            return Err(OracleError::NonMonomialPivot);
        }
        for v in [r, c] {
            m.alive[v] = false;
            m.dirty[v] = true;
        }
        if alpha > Rational::zero() {
            bars.push(Bar { g: ct.gradings()[r], len: BarLength::Finite(alpha) });
        }
    }
    for v in (0..n).filter(|&v| m.alive[v]) {
        bars.push(Bar { g: ct.gradings()[v], len: BarLength::Infinite });
    }
    Ok(BarSummary::new(ct.t(), bars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_quotient_complex, reduce};
    use crate::grid::GridDiagram;
    use crate::limits::SizeCap;
    use crate::tmod::{homology_at_t, t_modify};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn poly_arithmetic() {
        let mut a = vec![r(0, 1), r(1, 2)];
        add_into(&mut a, &vec![r(1, 2), r(1, 1)]);
        assert_eq!(a, vec![r(0, 1), r(1, 1)]);
        // (1 + v)(1 + v) = 1 + v^2 over F2
        assert_eq!(mul(&a, &a), vec![r(0, 1), r(2, 1)]);
    }

    #[test]
    fn unknot_at_third() {
        let g = GridDiagram::new(vec![0, 1], vec![1, 0]).unwrap();
        let c = build_quotient_complex(&g, SizeCap::default()).unwrap();
        let h = brute_force_homology_at_t(&t_modify(&c, r(1, 3)).unwrap()).unwrap();
        assert_eq!(
            h.bars(),
            &[Bar { g: r(-2, 3), len: BarLength::Infinite }, Bar { g: r(0, 1), len: BarLength::Infinite }]
        );
    }

    #[test]
    fn trefoil_matches_fast_path() {
        let g = GridDiagram::new(vec![1, 2, 3, 4, 0], vec![4, 0, 1, 2, 3]).unwrap();
        let c = build_quotient_complex(&g, SizeCap::default()).unwrap();
        for cx in [reduce(&c), c.dualize()] {
            let ct = t_modify(&cx, r(1, 2)).unwrap();
            assert_eq!(brute_force_homology_at_t(&ct).unwrap(), homology_at_t(&ct));
        }
    }

    #[test]
    fn guard() {
        let ct = TModComplex::from_parts(
            r(1, 2),
            vec![Rational::zero(); BRUTE_FORCE_GUARD + 1],
            vec![Vec::new(); BRUTE_FORCE_GUARD + 1],
        );
        assert!(matches!(brute_force_homology_at_t(&ct), Err(OracleError::TooLarge { .. })));
    }
}
