//! Toroidal rectangles between grid states.

use super::state::Grader;
use super::{GridDiagram, GridState};

/// Geometry and marking counts of one rectangle from a state `x`.
///
/// The rectangle has its south-west corner at the x-point in column `left`
/// and its north-east corner at the x-point in column `right`; the target
/// state swaps the rows of those two columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RectInfo {
    pub left: usize,
    pub right: usize,
    pub bottom: usize,
    pub width: usize,
    pub height: usize,
    pub count_o: usize,
    pub count_x: usize,
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rectangle {
    pub source: GridState,
    pub target: GridState,
    pub left: usize,
    pub bottom: usize,
    pub width: usize,
    pub height: usize,
    pub count_o: usize,
    pub count_x: usize,
    pub empty: bool,
}

#[inline]
fn cyc(a: usize, b: usize, n: usize) -> usize {
    (a + n - b) % n
}

/// Calls `f` for each of the `n(n-1)` rectangles leaving `perm`: two per
/// unordered pair of columns.
pub fn scan_rectangles(g: &GridDiagram, perm: &[usize], mut f: impl FnMut(RectInfo)) {
    let n = g.n();
    let (so, sx) = (g.sigma_o(), g.sigma_x());
    for left in 0..n {
        for right in 0..n {
            if left == right {
                continue;
            }
            let width = cyc(right, left, n);
            let bottom = perm[left];
            let height = cyc(perm[right], bottom, n);
            let empty = (1..width).all(|dc| {
                let c = (left + dc) % n;
                let dr = cyc(perm[c], bottom, n);
                dr == 0 || dr >= height
            });
            let (mut count_o, mut count_x) = (0, 0);
            for dr in 0..height {
                let r = (bottom + dr) % n;
                count_o += usize::from(cyc(so[r], left, n) < width);
                count_x += usize::from(cyc(sx[r], left, n) < width);
            }
            f(RectInfo { left, right, bottom, width, height, count_o, count_x, empty });
        }
    }
}

fn materialize(grader: &Grader, x: &GridState, r: RectInfo) -> Rectangle {
    let mut perm = x.perm.clone();
    perm.swap(r.left, r.right);
    Rectangle {
        source: x.clone(),
        target: grader.state(perm),
        left: r.left,
        bottom: r.bottom,
        width: r.width,
        height: r.height,
        count_o: r.count_o,
        count_x: r.count_x,
        empty: r.empty,
    }
}

/// All rectangles leaving `x`, empty or not.
pub fn rectangles(g: &GridDiagram, x: &GridState) -> Vec<Rectangle> {
    let grader = Grader::new(g);
    let mut out = Vec::new();
    scan_rectangles(g, &x.perm, |r| out.push(materialize(&grader, x, r)));
    out
}

/// Rectangles leaving `x` whose interior contains no point of `x`.
pub fn empty_rectangles(g: &GridDiagram, x: &GridState) -> Vec<Rectangle> {
    let grader = Grader::new(g);
    let mut out = Vec::new();
    scan_rectangles(g, &x.perm, |r| {
        if r.empty {
            out.push(materialize(&grader, x, r));
        }
    });
    out
}
