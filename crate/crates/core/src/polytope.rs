//! Labeled polytopes `{z : -z <= 0, Cz <= 1}` and exact vertex enumeration.
//!
//! Inequality `i < d` is the nonnegativity constraint on `z_i`; inequality
//! `d + j` is row `j` of `C`. Every inequality carries a label.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{DegeneracyReport, Error, PolytopeRole, Result};
use crate::exact::{dot, parse_scalar, rank, solve_linear, ExactMatrix, Scalar};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPolytope {
    dim: usize,
    rows: ExactMatrix,
    nonneg_labels: Vec<usize>,
    row_labels: Vec<usize>,
}

impl LabeledPolytope {
    /// The standard form: nonnegativity row `i` has label `i + 1`, row labels lie in `1..=d`.
    pub fn new(rows: ExactMatrix, row_labels: Vec<usize>) -> Result<Self> {
        let d = rows.cols();
        if let Some(&bad) = row_labels.iter().find(|&&l| l == 0 || l > d) {
            return Err(Error::Invalid(format!("label {bad} outside 1..={d}")));
        }
        Self::with_labels(rows, (1..=d).collect(), row_labels)
    }

    /// Arbitrary positive labels, as used by the best-response polytopes.
    pub fn with_labels(rows: ExactMatrix, nonneg_labels: Vec<usize>, row_labels: Vec<usize>) -> Result<Self> {
        let dim = rows.cols();
        if dim == 0 {
            return Err(Error::Invalid("dimension must be at least 1".into()));
        }
        if nonneg_labels.len() != dim || row_labels.len() != rows.rows() {
            return Err(Error::Dimension(format!(
                "{} nonnegativity labels and {} row labels for a {}x{} constraint matrix",
                nonneg_labels.len(),
                row_labels.len(),
                rows.rows(),
                dim
            )));
        }
        if nonneg_labels.iter().chain(&row_labels).any(|&l| l == 0) {
            return Err(Error::Invalid("labels are 1-based".into()));
        }
        Ok(LabeledPolytope { dim, rows, nonneg_labels, row_labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The matrix `C`.
    pub fn rows(&self) -> &ExactMatrix {
        &self.rows
    }

    pub fn row_labels(&self) -> &[usize] {
        &self.row_labels
    }

    pub fn inequality_count(&self) -> usize {
        self.dim + self.rows.rows()
    }

    pub fn label(&self, ineq: usize) -> usize {
        if ineq < self.dim {
            self.nonneg_labels[ineq]
        } else {
            self.row_labels[ineq - self.dim]
        }
    }

    /// Outer normal `a` of inequality `a.z <= beta`.
    pub fn normal(&self, ineq: usize) -> Vec<Scalar> {
        if ineq < self.dim {
            let mut a = vec![Scalar::zero(); self.dim];
            a[ineq] = -Scalar::one();
            a
        } else {
            self.rows.row(ineq - self.dim).to_vec()
        }
    }

    pub fn rhs(&self, ineq: usize) -> Scalar {
        if ineq < self.dim {
            Scalar::zero()
        } else {
            Scalar::one()
        }
    }

    /// `beta - a.z`; nonnegative iff the inequality holds.
    pub fn slack(&self, ineq: usize, z: &[Scalar]) -> Scalar {
        if ineq < self.dim {
            z[ineq].clone()
        } else {
            Scalar::one() - dot(self.rows.row(ineq - self.dim), z)
        }
    }

    pub fn contains(&self, z: &[Scalar]) -> bool {
        (0..self.inequality_count()).all(|i| self.slack(i, z) >= Scalar::zero())
    }

    /// All feasible basic solutions, deduplicated, with every binding inequality recorded.
    /// On a degenerate polytope some records have more than `d` binding inequalities.
    pub fn basic_points(&self) -> Vec<VertexRecord> {
        let d = self.dim;
        let total = self.inequality_count();
        let mut found: BTreeMap<Vec<Scalar>, ()> = BTreeMap::new();
        let mut basis: Vec<usize> = (0..d).collect();
        if total >= d {
            loop {
                if let Some(z) = self.solve_basis(&basis) {
                    if !found.contains_key(&z) && self.contains(&z) {
                        found.insert(z, ());
                    }
                }
                if !next_combination(&mut basis, total) {
                    break;
                }
            }
        }
        let mut records: Vec<VertexRecord> = found.into_keys().map(|z| self.record(z)).collect();
        records.sort_by(|a, b| a.binding.cmp(&b.binding));
        records
    }

    fn solve_basis(&self, basis: &[usize]) -> Option<Vec<Scalar>> {
        // nonnegativity rows in the basis pin coordinates to zero
        let zeroed: Vec<usize> = basis.iter().copied().filter(|&i| i < self.dim).collect();
        let free: Vec<usize> = (0..self.dim).filter(|i| !zeroed.contains(i)).collect();
        let rows: Vec<usize> = basis.iter().copied().filter(|&i| i >= self.dim).map(|i| i - self.dim).collect();
        let mut z = vec![Scalar::zero(); self.dim];
        if free.is_empty() {
            return Some(z);
        }
        let mut m = ExactMatrix::zeros(rows.len(), free.len());
        for (r, &row) in rows.iter().enumerate() {
            for (c, &col) in free.iter().enumerate() {
                m[(r, c)] = self.rows[(row, col)].clone();
            }
        }
        let sol = solve_linear(&m, &vec![Scalar::one(); rows.len()]).expect("square by construction")?;
        for (c, &col) in free.iter().enumerate() {
            z[col] = sol[c].clone();
        }
        Some(z)
    }

    fn record(&self, coords: Vec<Scalar>) -> VertexRecord {
        let binding: Vec<usize> =
            (0..self.inequality_count()).filter(|&i| self.slack(i, &coords).is_zero()).collect();
        let mut labels: Vec<usize> = binding.iter().map(|&i| self.label(i)).collect();
        labels.sort_unstable();
        VertexRecord { coords, binding, labels }
    }

    /// Vertices of a simple polytope, sorted by binding set.
    pub fn enumerate_vertices(&self, role: PolytopeRole) -> Result<Vec<VertexRecord>> {
        let points = self.basic_points();
        if let Some(bad) = points.iter().find(|v| v.binding.len() > self.dim) {
            return Err(Error::Degenerate(Box::new(bad.degeneracy(role))));
        }
        Ok(points)
    }

    /// Vertices, graph and contract checks: full-dimensional, bounded (d-regular graph).
    pub fn analyze(&self, role: PolytopeRole) -> Result<VertexSet> {
        let vertices = self.enumerate_vertices(role)?;
        check_full_dimensional(&vertices, self.dim)?;
        let graph = build_graph(&vertices, self.dim);
        if let Some(v) = (0..vertices.len()).find(|&v| graph.degree(v) != self.dim) {
            return Err(Error::Contract(format!(
                "vertex {} of {role} has degree {} in a {}-polytope; the polyhedron is unbounded",
                vertices[v].display_coords(),
                graph.degree(v),
                self.dim
            )));
        }
        Ok(VertexSet { vertices, graph })
    }

    /// Parses line `d k`, then `k` lines of `d` rationals followed by a label.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(hl, format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?;
        let [d, k] = dims[..] else {
            return Err(Error::parse(hl, "header must be \"d k\""));
        };
        let mut data = Vec::with_capacity(d * k);
        let mut labels = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, l) = lines.next().ok_or_else(|| Error::parse(hl, format!("expected {k} rows")))?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != d + 1 {
                return Err(Error::parse(ln, format!("expected {} coefficients and a label", d)));
            }
            for t in &toks[..d] {
                data.push(parse_scalar(t).ok_or_else(|| Error::parse(ln, format!("bad rational {t:?}")))?);
            }
            labels.push(toks[d].parse().map_err(|_| Error::parse(ln, format!("bad label {:?}", toks[d])))?);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "trailing content"));
        }
        let rows = ExactMatrix::new(k, d, data)?;
        LabeledPolytope::new(rows, labels).map_err(|e| Error::parse(hl, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dim, self.rows.rows());
        for j in 0..self.rows.rows() {
            let row: Vec<String> = self.rows.row(j).iter().map(ToString::to_string).collect();
            s.push_str(&format!("{} {}\n", row.join(" "), self.row_labels[j]));
        }
        s
    }
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexRecord {
    pub coords: Vec<Scalar>,
    /// Sorted inequality indices binding at `coords`.
    pub binding: Vec<usize>,
    /// Labels of the binding inequalities as a sorted multiset.
    pub labels: Vec<usize>,
}

impl VertexRecord {
    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn has_label(&self, label: usize) -> bool {
        self.labels.binary_search(&label).is_ok()
    }

    pub fn display_coords(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(", "))
    }

    pub(crate) fn degeneracy(&self, role: PolytopeRole) -> DegeneracyReport {
        DegeneracyReport {
            polytope: role,
            coords: self.coords.clone(),
            binding: self.binding.clone(),
            labels: self.labels.clone(),
        }
    }
}

/// Enumerated vertices of a simple polytope together with its graph.
#[derive(Clone, Debug)]
pub struct VertexSet {
    pub vertices: Vec<VertexRecord>,
    pub graph: Graph,
}

impl VertexSet {
    /// Index of the neighbor reached from `v` by leaving the facet of inequality `ineq`.
    pub fn pivot(&self, v: usize, ineq: usize) -> Option<usize> {
        if !self.vertices[v].binding.contains(&ineq) {
            return None;
        }
        self.graph.neighbors(v).iter().copied().find(|&w| !self.vertices[w].binding.contains(&ineq))
    }

    pub fn facet_vertex_set(&self, ineq: usize) -> Vec<usize> {
        facet_vertex_set(&self.vertices, ineq)
    }
}

/// Vertices adjacent iff their binding sets share exactly `d - 1` inequalities.
pub fn build_graph(vertices: &[VertexRecord], d: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if shared(&vertices[i].binding, &vertices[j].binding) + 1 == d {
                edges.push((i, j));
            }
        }
    }
    Graph::new(vertices.len(), edges).expect("simple graph")
}

/// Indices of the vertices on which `ineq` is binding.
pub fn facet_vertex_set(vertices: &[VertexRecord], ineq: usize) -> Vec<usize> {
    (0..vertices.len()).filter(|&v| vertices[v].binding.binary_search(&ineq).is_ok()).collect()
}

fn shared(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn check_full_dimensional(vertices: &[VertexRecord], d: usize) -> Result<()> {
    let Some(first) = vertices.first() else {
        return Err(Error::Contract("polytope has no vertices".into()));
    };
    let diffs: Vec<Vec<Scalar>> = vertices[1..]
        .iter()
        .map(|v| v.coords.iter().zip(&first.coords).map(|(a, b)| a - b).collect())
        .collect();
    let r = if diffs.is_empty() { 0 } else { rank(&ExactMatrix::from_rows(diffs)?) };
    if r < d {
        return Err(Error::Contract(format!("vertices span only {r} of {d} dimensions")));
    }
    Ok(())
}

/// Advances `c` to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn cube(d: usize) -> LabeledPolytope {
        LabeledPolytope::new(ExactMatrix::identity(d), (1..=d).collect()).unwrap()
    }

    #[test]
    fn unit_cube() {
        let vs = cube(3).analyze(PolytopeRole::Labeled).unwrap();
        assert_eq!(vs.vertices.len(), 8);
        assert!(vs.vertices.iter().all(|v| v.binding.len() == 3));
        assert_eq!(vs.graph.edge_count(), 12);
        assert!(vs.graph.is_regular(3));
        // z_1 <= 1 is inequality 3
        let top = vs.facet_vertex_set(3);
        assert_eq!(top.len(), 4);
        assert!(top.iter().all(|&v| vs.vertices[v].coords[0] == int(1)));
    }

    #[test]
    fn four_cube_graph() {
        let vs = cube(4).analyze(PolytopeRole::Labeled).unwrap();
        assert_eq!(vs.vertices.len(), 16);
        assert_eq!(vs.graph.edge_count(), 32);
        assert!(vs.graph.is_regular(4));
    }

    #[test]
    fn triangle() {
        let p = LabeledPolytope::new(ExactMatrix::from_ints(&[&[1, 1]]), vec![1]).unwrap();
        let vs = p.analyze(PolytopeRole::Labeled).unwrap();
        let coords: Vec<_> = vs.vertices.iter().map(|v| v.coords.clone()).collect();
        assert_eq!(coords, vec![vec![int(0), int(0)], vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert_eq!(vs.graph, Graph::cycle(3));
        assert_eq!(vs.facet_vertex_set(2).len(), 2);
        assert_eq!(vs.vertices[0].labels, vec![1, 2]);
    }

    #[test]
    fn degenerate_point_is_reported() {
        // pyramid apex: z1 + z2 <= 1 twice makes (1,0) carry three inequalities
        let p = LabeledPolytope::new(ExactMatrix::from_ints(&[&[1, 1], &[1, 1]]), vec![1, 2]).unwrap();
        match p.enumerate_vertices(PolytopeRole::Labeled) {
            Err(Error::Degenerate(r)) => assert_eq!(r.binding.len(), 3),
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_is_a_contract_violation() {
        let p = LabeledPolytope::new(ExactMatrix::from_ints(&[&[1, -1]]), vec![1]).unwrap();
        assert!(matches!(p.analyze(PolytopeRole::Labeled), Err(Error::Contract(_))));
    }

    #[test]
    fn never_binding_inequality_has_empty_facet() {
        let p = LabeledPolytope::new(ExactMatrix::from_ints(&[&[1, 1], &[1, 0]]), vec![1, 2]).unwrap();
        // z1 <= 1 is implied by z1 + z2 <= 1 but binds at (1, 0): that is degenerate
        assert!(p.enumerate_vertices(PolytopeRole::Labeled).is_err());
        let p = LabeledPolytope::new(ExactMatrix::from_rows(vec![vec![int(1), int(1)], vec![ratio(1, 2), int(0)]]).unwrap(), vec![1, 2])
            .unwrap();
        let vs = p.analyze(PolytopeRole::Labeled).unwrap();
        assert_eq!(vs.vertices.len(), 3);
        assert!(vs.facet_vertex_set(3).is_empty());
    }

    #[test]
    fn parse_h_description() {
        let p = LabeledPolytope::parse("# triangle\n2 1\n1 1 2\n").unwrap();
        assert_eq!(p.label(2), 2);
        assert_eq!(LabeledPolytope::parse(&p.to_text()).unwrap(), p);
        assert!(matches!(LabeledPolytope::parse("2 1\n1 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(LabeledPolytope::parse("2 1\n1 x 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(LabeledPolytope::parse("2 1\n1 1 3\n").is_err());
    }

    #[test]
    fn combinations() {
        let mut c = vec![0, 1];
        let mut n = 1;
        while next_combination(&mut c, 5) {
            n += 1;
        }
        assert_eq!(n, 10);
    }
}
