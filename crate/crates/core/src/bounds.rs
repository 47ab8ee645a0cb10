//! Upper bounds on equilibrium counts from the graph of a best-response polytope.
//!
//! The stable-set bound is `2k` where `k` is the largest common size of two
//! disjoint stable sets. It is computed by an exact branch and bound that
//! assigns vertices to the first set, the second set or neither, pruning with
//! greedy clique partitions of the remaining candidates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph the bitset solver accepts.
pub const MAX_VERTICES: usize = 128;

type Mask = u128;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundResult {
    pub vertex_count: usize,
    /// Twice the common size of the witness sets.
    pub bound: usize,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub clique_bound: Option<usize>,
}

impl BoundResult {
    pub fn obstructions(&self) -> usize {
        self.vertex_count - self.bound
    }

    /// Re-checks the witness against `g` without trusting the solver.
    pub fn witness_valid(&self, g: &Graph) -> bool {
        let disjoint = self.first.iter().all(|v| !self.second.contains(v));
        self.first.len() == self.second.len()
            && self.first.len() * 2 == self.bound
            && disjoint
            && g.is_stable(&self.first)
            && g.is_stable(&self.second)
            && self.first.iter().chain(&self.second).all(|&v| v < g.vertex_count())
    }

    /// `V b obstructions` followed by the two witness sets.
    pub fn to_text(&self) -> String {
        let fmt = |s: &[usize]| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        let mut out = format!("{} {} {}\n", self.vertex_count, self.bound, self.obstructions());
        out.push_str(&format!("S1: {}\n", fmt(&self.first)));
        out.push_str(&format!("S2: {}\n", fmt(&self.second)));
        out
    }
}

fn bit(v: usize) -> Mask {
    1 << v
}

fn members(mut m: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        out.push(v);
        m &= m - 1;
    }
    out
}

struct Solver {
    nbr: Vec<Mask>,
    best: usize,
    best_pair: (Mask, Mask),
}

impl Solver {
    fn new(g: &Graph) -> Result<Self> {
        if g.vertex_count() > MAX_VERTICES {
            return Err(Error::Invalid(format!(
                "graph with {} vertices exceeds the solver limit of {MAX_VERTICES}",
                g.vertex_count()
            )));
        }
        let nbr = (0..g.vertex_count()).map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | bit(u))).collect();
        Ok(Solver { nbr, best: 0, best_pair: (0, 0) })
    }

    /// Number of cliques in a greedy clique partition of `set`; bounds any stable subset.
    fn clique_cover(&self, mut set: Mask) -> usize {
        let mut count = 0;
        while set != 0 {
            let v = set.trailing_zeros() as usize;
            let mut cand = set & self.nbr[v];
            set &= !bit(v);
            while cand != 0 {
                let u = cand.trailing_zeros() as usize;
                set &= !bit(u);
                cand &= self.nbr[u] & !bit(u);
            }
            count += 1;
        }
        count
    }

    fn search(&mut self, s1: Mask, s2: Mask, c1: Mask, c2: Mask) {
        let (n1, n2) = (s1.count_ones() as usize, s2.count_ones() as usize);
        let k = n1.min(n2);
        if k > self.best {
            self.best = k;
            self.best_pair = (s1, s2);
        }
        let rest = c1 | c2;
        if rest == 0 {
            return;
        }
        let quick = (n1 + c1.count_ones() as usize).min(n2 + c2.count_ones() as usize);
        if quick <= self.best {
            return;
        }
        let ub = (n1 + self.clique_cover(c1)).min(n2 + self.clique_cover(c2));
        if ub <= self.best {
            return;
        }
        let v = rest.trailing_zeros() as usize;
        let b = bit(v);
        if c1 & b != 0 {
            self.search(s1 | b, s2, c1 & !b & !self.nbr[v], c2 & !b);
        }
        // the first vertex placed in a set goes to the first one
        if c2 & b != 0 && s1 != 0 {
            self.search(s1, s2 | b, c1 & !b, c2 & !b & !self.nbr[v]);
        }
        self.search(s1, s2, c1 & !b, c2 & !b);
    }

    fn max_stable(&mut self, s: Mask, c: Mask) {
        let n = s.count_ones() as usize;
        if n > self.best {
            self.best = n;
            self.best_pair = (s, 0);
        }
        if c == 0 || n + self.clique_cover(c) <= self.best {
            return;
        }
        let v = c.trailing_zeros() as usize;
        let b = bit(v);
        self.max_stable(s | b, c & !b & !self.nbr[v]);
        self.max_stable(s, c & !b);
    }
}

fn all_vertices(n: usize) -> Mask {
    if n == MAX_VERTICES {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

/// Twice the maximum common size of two disjoint stable sets, with a witness.
/// The witness is the first optimum met in a fixed search order, so results
/// are reproducible.
pub fn stable_set_bound(g: &Graph) -> Result<BoundResult> {
    let mut s = Solver::new(g)?;
    let all = all_vertices(g.vertex_count());
    s.search(0, 0, all, all);
    let (a, b) = s.best_pair;
    let k = s.best;
    // the larger set of the optimum is trimmed to the common size
    let first: Vec<usize> = members(a).into_iter().take(k).collect();
    let second: Vec<usize> = members(b).into_iter().take(k).collect();
    Ok(BoundResult { vertex_count: g.vertex_count(), bound: 2 * k, first, second, clique_bound: None })
}

/// A maximum stable set.
pub fn max_stable_set(g: &Graph) -> Result<Vec<usize>> {
    let mut s = Solver::new(g)?;
    s.max_stable(0, all_vertices(g.vertex_count()));
    Ok(members(s.best_pair.0))
}

/// `V - sum(c_i - 2)` for pairwise disjoint cliques of size at least two.
pub fn clique_bound(g: &Graph, cliques: &[Vec<usize>]) -> Result<usize> {
    let n = g.vertex_count();
    let mut used = vec![false; n];
    let mut reduction = 0;
    for c in cliques {
        if c.len() < 2 {
            return Err(Error::Invalid(format!("clique {c:?} has fewer than two vertices")));
        }
        if c.iter().any(|&v| v >= n) {
            return Err(Error::Invalid(format!("clique {c:?} has a vertex outside the graph")));
        }
        if !g.is_clique(c) {
            return Err(Error::Invalid(format!("{c:?} is not a clique")));
        }
        for &v in c {
            if std::mem::replace(&mut used[v], true) {
                return Err(Error::Invalid(format!("vertex {v} lies in two cliques")));
            }
        }
        reduction += c.len() - 2;
    }
    Ok(n - reduction)
}

/// Stable-set bound of the subgraph induced by the vertices of a facet.
/// Witness indices refer to `g`.
pub fn facet_stable_set_bound(g: &Graph, facet_vertices: &[usize]) -> Result<BoundResult> {
    let sub = g.induced(facet_vertices);
    let mut r = stable_set_bound(&sub)?;
    r.first = r.first.iter().map(|&i| facet_vertices[i]).collect();
    r.second = r.second.iter().map(|&i| facet_vertices[i]).collect();
    Ok(r)
}

/// Maximal cliques (Bron-Kerbosch with pivoting) restricted to `allowed`.
fn maximal_cliques(nbr: &[Mask], allowed: Mask) -> Vec<Mask> {
    fn bk(nbr: &[Mask], r: Mask, mut p: Mask, mut x: Mask, out: &mut Vec<Mask>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut cand = p & !nbr[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let b = bit(v);
            bk(nbr, r | b, p & nbr[v], x & nbr[v], out);
            p &= !b;
            x |= b;
            cand &= !b;
        }
    }
    let mut out = Vec::new();
    let restricted: Vec<Mask> = nbr.iter().map(|m| m & allowed).collect();
    bk(&restricted, 0, allowed, 0, &mut out);
    out
}

/// Greedy collection of pairwise disjoint cliques with at least three vertices.
/// Each round takes a largest clique among unused vertices, preferring cliques
/// that overlap the fewest other candidates.
pub fn greedy_clique_cover(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let s = Solver::new(g)?;
    let mut unused = all_vertices(g.vertex_count());
    let mut chosen = Vec::new();
    loop {
        let cands: Vec<Mask> =
            maximal_cliques(&s.nbr, unused).into_iter().filter(|c| c.count_ones() >= 3).collect();
        let Some(pick) = cands
            .iter()
            .copied()
            .max_by_key(|&c| {
                let conflicts = cands.iter().filter(|&&o| o != c && o & c != 0).count();
                (c.count_ones(), std::cmp::Reverse(conflicts), std::cmp::Reverse(c))
            })
        else {
            break;
        };
        chosen.push(members(pick));
        unused &= !pick;
    }
    Ok(chosen)
}

/// Maximum number of pairwise disjoint triangles.
pub fn disjoint_triangles(g: &Graph) -> Result<usize> {
    let s = Solver::new(g)?;
    let mut tris = Vec::new();
    for (u, v) in g.edges().iter().copied() {
        let above = if v + 1 >= MAX_VERTICES { 0 } else { !(bit(v + 1) - 1) };
        let mut common = s.nbr[u] & s.nbr[v] & above;
        while common != 0 {
            let w = common.trailing_zeros() as usize;
            tris.push(bit(u) | bit(v) | bit(w));
            common &= common - 1;
        }
    }
    fn best(tris: &[Mask], used: Mask, from: usize) -> usize {
        let mut top = 0;
        for i in from..tris.len() {
            if tris[i] & used == 0 {
                top = top.max(1 + best(tris, used | tris[i], i + 1));
            }
        }
        top
    }
    Ok(best(&tris, 0, 0))
}
