//! Combinatorial simple polytopes given by vertex-facet incidences, and the
//! census computations over catalogs of them.
//!
//! Census file format:
//!
//! ```text
//! d F
//! <id> <V> <f,f,...,f> ... <f,f,...,f>
//! ```
//!
//! Each record lists its id, vertex count and `V` comma-separated `d`-tuples
//! of 0-based facet indices. Records are self-delimiting; `;` and blank lines
//! may separate them but must not split one. `#` starts a comment.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{disjoint_triangles, facet_stable_set_bound, stable_set_bound};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialPolytope {
    pub id: String,
    pub dim: usize,
    pub facet_count: usize,
    /// Sorted facet indices incident to each vertex.
    pub vertices: Vec<Vec<usize>>,
}

impl CombinatorialPolytope {
    /// Validates simplicity, facet usage, graph regularity and connectivity.
    pub fn new(id: impl Into<String>, dim: usize, facet_count: usize, mut vertices: Vec<Vec<usize>>) -> Result<Self> {
        let id = id.into();
        let bad = |msg: String| Error::Invalid(format!("polytope {id}: {msg}"));
        for v in &mut vertices {
            v.sort_unstable();
            if v.len() != dim || v.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad(format!("vertex {v:?} is not on exactly {dim} distinct facets (not simple)")));
            }
            if let Some(f) = v.iter().find(|&&f| f >= facet_count) {
                return Err(bad(format!("facet index {f} out of range 0..{facet_count}")));
            }
        }
        let mut sorted = vertices.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("duplicate vertex".into()));
        }
        let p = CombinatorialPolytope { id: id.clone(), dim, facet_count, vertices };
        if let Some(f) = (0..facet_count).find(|&f| p.facet_vertices(f).is_empty()) {
            return Err(bad(format!("facet {f} has no vertices")));
        }
        if let Some(max) = upper_bound_vertices(dim, facet_count) {
            if p.vertex_count() > max {
                return Err(bad(format!("{} vertices exceed the maximum {max} for this class", p.vertex_count())));
            }
        }
        let g = p.graph();
        if !g.is_regular(dim) {
            return Err(bad(format!("graph is not {dim}-regular")));
        }
        if !g.is_connected() {
            return Err(bad("graph is disconnected".into()));
        }
        Ok(p)
    }

    /// The `d`-cube: facet `2i` is `x_i = 0`, facet `2i + 1` is `x_i = 1`.
    pub fn cube(d: usize) -> Self {
        let vertices = (0..1usize << d).map(|v| (0..d).map(|i| 2 * i + (v >> i & 1)).collect()).collect();
        Self::new(format!("cube{d}"), d, 2 * d, vertices).expect("cube is simple")
    }

    /// The `d`-simplex: every `d`-subset of its `d + 1` facets is a vertex.
    pub fn simplex(d: usize) -> Self {
        let vertices = (0..=d).map(|skip| (0..=d).filter(|&f| f != skip).collect()).collect();
        Self::new(format!("simplex{d}"), d, d + 1, vertices).expect("simplex is simple")
    }

    /// Product of two simple polytopes; facets of `b` are numbered after those of `a`.
    pub fn product(a: &Self, b: &Self) -> Self {
        let mut vertices = Vec::new();
        for u in &a.vertices {
            for v in &b.vertices {
                vertices.push(u.iter().copied().chain(v.iter().map(|f| f + a.facet_count)).collect());
            }
        }
        Self::new(format!("{}x{}", a.id, b.id), a.dim + b.dim, a.facet_count + b.facet_count, vertices)
            .expect("product of simple polytopes is simple")
    }

    /// Dual of the cyclic polytope `C(n, d)`: vertices are the `d`-subsets of
    /// `0..n` satisfying Gale's evenness condition.
    pub fn dual_cyclic(d: usize, n: usize) -> Self {
        let mut vertices = Vec::new();
        let mut c: Vec<usize> = (0..d).collect();
        loop {
            if gale_even(&c, n) {
                vertices.push(c.clone());
            }
            if !crate::polytope::next_combination(&mut c, n) {
                break;
            }
        }
        Self::new(format!("dualcyclic{d}_{n}"), d, n, vertices).expect("dual cyclic polytope is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Vertices adjacent iff they share `d - 1` facets.
    pub fn graph(&self) -> Graph {
        let mut edges = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let common = self.vertices[i].iter().filter(|f| self.vertices[j].binary_search(f).is_ok()).count();
                if common + 1 == self.dim {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(self.vertices.len(), edges).expect("simple graph")
    }

    pub fn facet_vertices(&self, facet: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].binary_search(&facet).is_ok()).collect()
    }

    /// Graph of a facet together with the facet's vertex indices.
    pub fn facet_subgraph(&self, facet: usize) -> Result<(Graph, Vec<usize>)> {
        if facet >= self.facet_count {
            return Err(Error::Invalid(format!("facet {facet} out of range 0..{}", self.facet_count)));
        }
        let vs = self.facet_vertices(facet);
        if vs.is_empty() {
            return Err(Error::Invalid(format!("facet {facet} is empty")));
        }
        Ok((self.graph().induced(&vs), vs))
    }

    /// Every `floor(d/2)` facets share a vertex.
    pub fn is_dual_neighborly(&self) -> bool {
        let k = self.dim / 2;
        if k == 0 || k > self.facet_count {
            return true;
        }
        let mut c: Vec<usize> = (0..k).collect();
        loop {
            if !self.vertices.iter().any(|v| c.iter().all(|f| v.binary_search(f).is_ok())) {
                return false;
            }
            if !crate::polytope::next_combination(&mut c, self.facet_count) {
                return true;
            }
        }
    }

    pub fn to_record(&self) -> String {
        let tuples: Vec<String> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            .collect();
        format!("{} {} {}", self.id, self.vertex_count(), tuples.join(" "))
    }
}

fn gale_even(s: &[usize], n: usize) -> bool {
    let inside = |i: usize| s.binary_search(&i).is_ok();
    let gaps: Vec<usize> = (0..n).filter(|&i| !inside(i)).collect();
    gaps.windows(2).all(|w| (w[0] + 1..w[1]).filter(|&i| inside(i)).count() % 2 == 0)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Maximum vertex count of a simple `d`-polytope with `f` facets (upper bound
/// theorem, attained by duals of cyclic polytopes). `None` when `f <= d`.
pub fn upper_bound_vertices(d: usize, f: usize) -> Option<usize> {
    if f <= d || d == 0 {
        return None;
    }
    let k = d / 2;
    Some(if d.is_multiple_of(2) { f * binomial(f - k, k) / (f - k) } else { 2 * binomial(f - k - 1, k) })
}

/// A parsed census file.
#[derive(Clone, Debug)]
pub struct Census {
    pub dim: usize,
    pub facet_count: usize,
    pub polytopes: Vec<CombinatorialPolytope>,
}

impl Census {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Tok<'a> {
            Word(&'a str, usize),
            Break(usize),
        }
        let mut toks = Vec::new();
        let mut header = None;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if header.is_none() {
                if !line.is_empty() {
                    header = Some((ln, line));
                }
                continue;
            }
            if line.is_empty() {
                toks.push(Tok::Break(ln));
                continue;
            }
            for part in line.split_inclusive(';') {
                let (body, brk) = match part.strip_suffix(';') {
                    Some(b) => (b, true),
                    None => (part, false),
                };
                toks.extend(body.split_whitespace().map(|w| Tok::Word(w, ln)));
                if brk {
                    toks.push(Tok::Break(ln));
                }
            }
        }
        let (hl, header) = header.ok_or_else(|| Error::parse(1, "missing header \"d F\""))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(hl, format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?;
        let [dim, facet_count] = nums[..] else {
            return Err(Error::parse(hl, "header must be \"d F\""));
        };

        let mut polytopes = Vec::new();
        let mut it = toks.into_iter().peekable();
        loop {
            while matches!(it.peek(), Some(Tok::Break(_))) {
                it.next();
            }
            let Some(Tok::Word(id, ln)) = it.next() else {
                break;
            };
            let record = polytopes.len() + 1;
            let rec_err = |line: usize, msg: String| Error::Record { record, msg: format!("line {line}: {msg}") };
            let count = match it.next() {
                Some(Tok::Word(w, l)) => w.parse::<usize>().map_err(|_| rec_err(l, format!("bad vertex count {w:?}")))?,
                _ => return Err(rec_err(ln, "missing vertex count".into())),
            };
            let mut vertices = Vec::with_capacity(count);
            for k in 0..count {
                match it.next() {
                    Some(Tok::Word(w, l)) => {
                        let tuple: Vec<usize> = w
                            .split(',')
                            .map(|t| t.parse().map_err(|_| rec_err(l, format!("bad facet index {t:?}"))))
                            .collect::<Result<_>>()?;
                        vertices.push(tuple);
                    }
                    Some(Tok::Break(l)) => {
                        return Err(rec_err(l, format!("record ends after {k} of {count} vertices")));
                    }
                    None => return Err(rec_err(ln, format!("file ends after {k} of {count} vertices"))),
                }
            }
            let p = CombinatorialPolytope::new(id, dim, facet_count, vertices)
                .map_err(|e| rec_err(ln, e.to_string()))?;
            polytopes.push(p);
        }
        Ok(Census { dim, facet_count, polytopes })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dim, self.facet_count);
        for p in &self.polytopes {
            s.push_str(&p.to_record());
            s.push('\n');
        }
        s
    }
}

/// `true` iff `g` is isomorphic to the `c`-dimensional hypercube graph.
pub fn is_cube_graph(g: &Graph, c: usize) -> bool {
    let n = 1usize << c;
    if g.vertex_count() != n || g.edge_count() != c * n / 2 || !g.is_regular(c) {
        return false;
    }
    if !g.is_connected() || !g.is_bipartite() {
        return false;
    }
    // hypercubes are vertex-transitive, so cube vertex 0 may be sent to vertex 0;
    // cube vertices are placed in BFS order so each has a placed neighbor
    let cube = Graph::hypercube(c);
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        for &w in cube.neighbors(order[i]) {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
        i += 1;
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    image[0] = 0;
    used[0] = true;
    fn extend(k: usize, order: &[usize], cube: &Graph, g: &Graph, image: &mut [usize], used: &mut [bool]) -> bool {
        if k == order.len() {
            return true;
        }
        let u = order[k];
        let anchor = cube.neighbors(u).iter().copied().find(|&w| image[w] != usize::MAX).expect("BFS order");
        for &cand in g.neighbors(image[anchor]) {
            if used[cand] {
                continue;
            }
            let consistent = (0..cube.vertex_count())
                .filter(|&w| image[w] != usize::MAX)
                .all(|w| cube.has_edge(u, w) == g.has_edge(cand, image[w]));
            if !consistent {
                continue;
            }
            image[u] = cand;
            used[cand] = true;
            if extend(k + 1, order, cube, g, image, used) {
                return true;
            }
            image[u] = usize::MAX;
            used[cand] = false;
        }
        false
    }
    extend(1, &order, &cube, g, &mut image, &mut used)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetInfo {
    pub facet: usize,
    pub size: usize,
    pub bound: usize,
    /// The facet is combinatorially a `(d-1)`-cube.
    pub is_cube: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub id: String,
    pub vertex_count: usize,
    pub bound: usize,
    pub obstructions: usize,
    pub dual_neighborly: bool,
    pub facets: Vec<FacetInfo>,
}

impl CensusRow {
    pub fn cube_facets(&self) -> usize {
        self.facets.iter().filter(|f| f.is_cube).count()
    }
}

impl fmt::Display for CensusRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:({},{}) obstructions={} dual_neighborly={} cube_facets={}",
            self.id,
            self.vertex_count,
            self.bound,
            self.obstructions,
            self.dual_neighborly,
            self.cube_facets()
        )
    }
}

pub fn analyze(p: &CombinatorialPolytope) -> Result<CensusRow> {
    let g = p.graph();
    let r = stable_set_bound(&g)?;
    let mut facets = Vec::with_capacity(p.facet_count);
    for f in 0..p.facet_count {
        let vs = p.facet_vertices(f);
        let fb = facet_stable_set_bound(&g, &vs)?;
        let is_cube = p.dim >= 1 && is_cube_graph(&g.induced(&vs), p.dim - 1);
        facets.push(FacetInfo { facet: f, size: vs.len(), bound: fb.bound, is_cube });
    }
    Ok(CensusRow {
        id: p.id.clone(),
        vertex_count: p.vertex_count(),
        bound: r.bound,
        obstructions: r.obstructions(),
        dual_neighborly: p.is_dual_neighborly(),
        facets,
    })
}

/// Rows in parallel, returned in input order.
pub fn census(polytopes: &[CombinatorialPolytope]) -> Result<Vec<CensusRow>> {
    polytopes.par_iter().map(analyze).collect()
}

/// `true` iff `p` is the 4-polytope with 8 facets, 17 vertices, stable-set
/// bound 14, exactly three cube facets and three disjoint triangles.
pub fn recognize_semi_cube(p: &CombinatorialPolytope) -> Result<bool> {
    if p.dim != 4 || p.facet_count != 8 || p.vertex_count() != 17 {
        return Ok(false);
    }
    let row = analyze(p)?;
    Ok(row.bound == 14 && row.cube_facets() == 3 && disjoint_triangles(&p.graph())? >= 3)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenEntry {
    pub id: Option<String>,
    pub vertex_count: usize,
    pub bound: usize,
}

/// Parses expected `(V, b)` pairs, one per line: `[id:] V b`.
pub fn parse_golden(text: &str) -> Result<Vec<GoldenEntry>> {
    let mut out = Vec::new();
    for (ln, line) in crate::polytope::content_lines(text) {
        let (id, rest) = match line.split_once(':') {
            Some((id, rest)) => (Some(id.trim().to_string()), rest),
            None => (None, line),
        };
        let nums: Vec<usize> = rest
            .split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| Error::parse(ln, format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?;
        let [vertex_count, bound] = nums[..] else {
            return Err(Error::parse(ln, "expected \"[id:] V b\""));
        };
        out.push(GoldenEntry { id, vertex_count, bound });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowMatch {
    pub id: String,
    pub vertex_count: usize,
    pub bound: usize,
    /// Golden entry this row was paired with.
    pub golden: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenDiff {
    /// Rows paired by id (`true`) or as a multiset of `(V, b)` pairs.
    pub keyed: bool,
    pub expected: usize,
    pub matched: usize,
    pub rows: Vec<RowMatch>,
    pub unmatched_golden: Vec<GoldenEntry>,
}

impl GoldenDiff {
    pub fn all_match(&self) -> bool {
        self.matched == self.expected && self.matched == self.rows.len()
    }
}

/// Compares census rows to a golden table. When every golden entry carries an
/// id and the row ids are exactly those ids, rows are compared by id;
/// otherwise `(V, b)` pairs are matched as multisets.
pub fn diff_golden(rows: &[CensusRow], golden: &[GoldenEntry]) -> GoldenDiff {
    let golden_ids: Option<HashMap<&str, usize>> =
        golden.iter().enumerate().map(|(i, g)| g.id.as_deref().map(|id| (id, i))).collect();
    let keyed = match &golden_ids {
        Some(ids) => rows.len() == ids.len() && rows.iter().all(|r| ids.contains_key(r.id.as_str())),
        None => false,
    };
    let mut used = vec![false; golden.len()];
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let pick = if keyed {
            let i = golden_ids.as_ref().expect("keyed")[r.id.as_str()];
            (golden[i].vertex_count == r.vertex_count && golden[i].bound == r.bound).then_some(i)
        } else {
            (0..golden.len())
                .find(|&i| !used[i] && golden[i].vertex_count == r.vertex_count && golden[i].bound == r.bound)
        };
        if let Some(i) = pick {
            used[i] = true;
        }
        out.push(RowMatch { id: r.id.clone(), vertex_count: r.vertex_count, bound: r.bound, golden: pick });
    }
    let unmatched_golden = golden.iter().zip(&used).filter(|(_, &u)| !u).map(|(g, _)| g.clone()).collect();
    let matched = used.iter().filter(|&&u| u).count();
    GoldenDiff { keyed, expected: golden.len(), matched, rows: out, unmatched_golden }
}

/// Checks on simple 4-polytopes with 9 facets:
/// (a) bound at most 20, (b) at least three obstruction vertices,
/// (c) bound 20 implies no 3-cube facet, (d) bound 20 implies at least five obstructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct T49Report {
    pub polytopes: usize,
    pub max_vertices: usize,
    pub max_bound: usize,
    pub bound_20: usize,
    /// Failing ids per check `a`..`d`.
    pub violations: BTreeMap<char, Vec<String>>,
}

impl T49Report {
    pub fn passes(&self, check: char) -> bool {
        self.violations.get(&check).is_none_or(Vec::is_empty)
    }

    pub fn all_pass(&self) -> bool {
        ['a', 'b', 'c', 'd'].iter().all(|&c| self.passes(c))
    }
}

/// Which of the four checks a single row violates.
pub fn t49_violations(row: &CensusRow) -> Vec<char> {
    let mut v = Vec::new();
    if row.bound > 20 {
        v.push('a');
    }
    if row.obstructions < 3 {
        v.push('b');
    }
    if row.bound == 20 && row.cube_facets() > 0 {
        v.push('c');
    }
    if row.bound == 20 && row.obstructions < 5 {
        v.push('d');
    }
    v
}

pub fn check_t49(rows: &[CensusRow]) -> T49Report {
    let mut violations: BTreeMap<char, Vec<String>> = ['a', 'b', 'c', 'd'].into_iter().map(|c| (c, Vec::new())).collect();
    for r in rows {
        for c in t49_violations(r) {
            violations.get_mut(&c).expect("preset").push(r.id.clone());
        }
    }
    T49Report {
        polytopes: rows.len(),
        max_vertices: rows.iter().map(|r| r.vertex_count).max().unwrap_or(0),
        max_bound: rows.iter().map(|r| r.bound).max().unwrap_or(0),
        bound_20: rows.iter().filter(|r| r.bound == 20).count(),
        violations,
    }
}
