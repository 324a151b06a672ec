//! Filtered cancellation.
//!
//! An arrow `x -> y` with `k = 0` and `A(x) = A(y)` is an isomorphism on the
//! associated graded object, so the pair `(x, y)` can be cancelled: every
//! zig-zag `a -> y <- x -> b` toggles a new arrow `a -> b`, and `x`, `y` are
//! removed. U-powers and filtration drops add along the zig-zag, so the
//! output is again homogeneous and filtered.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Arrow, FilteredUComplex, Generator};

struct Workspace<'a> {
    gens: &'a [Generator],
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
    alive: Vec<bool>,
}

fn toggle(list: &mut Vec<u32>, v: u32) -> bool {
    match list.binary_search(&v) {
        Ok(i) => {
            list.remove(i);
            false
        }
        Err(i) => {
            list.insert(i, v);
            true
        }
    }
}

fn remove(list: &mut Vec<u32>, v: u32) {
    if let Ok(i) = list.binary_search(&v) {
        list.remove(i);
    }
}

impl Workspace<'_> {
    fn cancellable(&self, x: u32, y: u32) -> bool {
        let (gx, gy) = (&self.gens[x as usize], &self.gens[y as usize]);
        gy.maslov == gx.maslov - 1 && gy.alexander == gx.alexander
    }

    fn present(&self, x: u32, y: u32) -> bool {
        self.alive[x as usize] && self.alive[y as usize] && self.out[x as usize].binary_search(&y).is_ok()
    }

    fn cost(&self, x: u32, y: u32) -> u64 {
        let i = self.inn[y as usize].len() as u64 - 1;
        let o = self.out[x as usize].len() as u64 - 1;
        i * o
    }

    /// Cancels `x -> y`; returns the arrows it switched on.
    fn cancel(&mut self, x: u32, y: u32) -> Vec<(u32, u32)> {
        let preds: Vec<u32> = self.inn[y as usize].iter().copied().filter(|&a| a != x).collect();
        let succs: Vec<u32> = self.out[x as usize].iter().copied().filter(|&b| b != y).collect();
        let mut created = Vec::new();
        for &a in &preds {
            for &b in &succs {
                if toggle(&mut self.out[a as usize], b) {
                    created.push((a, b));
                }
                toggle(&mut self.inn[b as usize], a);
            }
        }
        for v in [x, y] {
            for s in std::mem::take(&mut self.inn[v as usize]) {
                remove(&mut self.out[s as usize], v);
            }
            for t in std::mem::take(&mut self.out[v as usize]) {
                remove(&mut self.inn[t as usize], v);
            }
            self.alive[v as usize] = false;
        }
        created
    }
}

/// Cancels every `k = 0`, zero-filtration-drop arrow.
///
/// Pivots are chosen by a Markowitz rule: the eligible arrow `x -> y`
/// minimizing the fill-in bound `(indeg(y) - 1) * (outdeg(x) - 1)`, ties
/// broken by `(x, y)`. Costs are refreshed lazily when popped. Generator
/// order (and `state` back-references) of the survivors is preserved.
pub fn reduce(c: &FilteredUComplex) -> FilteredUComplex {
    let n = c.len();
    let mut ws =
        Workspace { gens: c.generators(), out: vec![Vec::new(); n], inn: vec![Vec::new(); n], alive: vec![true; n] };
    for (src, dst, _) in c.arrows() {
        ws.out[src].push(dst as u32);
        ws.inn[dst].push(src as u32);
    }
    for v in ws.out.iter_mut().chain(ws.inn.iter_mut()) {
        v.sort_unstable();
    }

    let mut heap = BinaryHeap::new();
    for x in 0..n as u32 {
        for &y in &ws.out[x as usize] {
            if ws.cancellable(x, y) {
                heap.push(Reverse((ws.cost(x, y), x, y)));
            }
        }
    }
    while let Some(Reverse((cost, x, y))) = heap.pop() {
        if !ws.present(x, y) {
            continue;
        }
        let now = ws.cost(x, y);
        if now != cost {
            heap.push(Reverse((now, x, y)));
            continue;
        }
        for (a, b) in ws.cancel(x, y) {
            if ws.cancellable(a, b) {
                heap.push(Reverse((ws.cost(a, b), a, b)));
            }
        }
    }

    let mut new_id = vec![usize::MAX; n];
    let mut gens = Vec::new();
    for (id, slot) in new_id.iter_mut().enumerate() {
        if ws.alive[id] {
            *slot = gens.len();
            gens.push(c.generators()[id]);
        }
    }
    let out = (0..n)
        .filter(|&id| ws.alive[id])
        .map(|src| {
            let m = c.generators()[src].maslov;
            let mut arrows: Vec<Arrow> = ws.out[src]
                .iter()
                .map(|&t| {
                    let dm = c.generators()[t as usize].maslov - m + 1;
                    Arrow { target: new_id[t as usize], k: (dm / 2) as u32 }
                })
                .collect();
            arrows.sort_unstable();
            arrows
        })
        .collect();
    FilteredUComplex::from_adjacency(gens, out)
}
