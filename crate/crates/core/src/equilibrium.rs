//! Completely labeled vertex pairs of `P x Q`, their indices, and
//! Lemke-Howson paths followed on the vertex graphs.

use std::collections::{HashMap, HashSet};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{det_sign, ExactMatrix, Scalar};
use crate::game::BestResponsePair;
use crate::polytope::{LabeledPolytope, VertexRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Equilibrium {
    /// Index into the vertices of `P`.
    pub x: usize,
    /// Index into the vertices of `Q`.
    pub y: usize,
    pub artificial: bool,
    pub index: i8,
}

fn label_mask(labels: &[usize]) -> u128 {
    labels.iter().fold(0u128, |acc, &l| acc | (1u128 << l))
}

fn full_mask(d: usize) -> u128 {
    (1..=d).fold(0u128, |acc, l| acc | (1u128 << l))
}

/// All equilibria, artificial first, then in order of their `P` vertex.
pub fn enumerate_equilibria(pair: &BestResponsePair) -> Result<Vec<Equilibrium>> {
    let d = pair.m() + pair.n();
    if d >= 128 {
        return Err(Error::Invalid(format!("{d} labels exceed the supported 127")));
    }
    let full = full_mask(d);
    let mut by_labels: HashMap<u128, usize> = HashMap::new();
    for (j, v) in pair.q().vertices.iter().enumerate() {
        if by_labels.insert(label_mask(&v.labels), j).is_some() {
            return Err(Error::Contract("two vertices of Q share a label set".into()));
        }
    }
    let mut out = Vec::new();
    for (i, x) in pair.p().vertices.iter().enumerate() {
        let mask = label_mask(&x.labels);
        if let Some(&j) = by_labels.get(&(full & !mask)) {
            let y = &pair.q().vertices[j];
            let artificial = x.is_origin() && y.is_origin();
            let index = compute_index(pair, i, j)?;
            out.push(Equilibrium { x: i, y: j, artificial, index });
        }
    }
    out.sort_by_key(|e| (!e.artificial, e.x));
    Ok(out)
}

/// Index of the equilibrium at `(x, y)` via the product polytope with
/// `C = [[0, A], [B^T, 0]]`: the facet normals in label order, sign of their
/// determinant times `(-1)^(d+1)`.
pub fn compute_index(pair: &BestResponsePair, x: usize, y: usize) -> Result<i8> {
    let (m, n) = (pair.m(), pair.n());
    let d = m + n;
    let xv = &pair.p().vertices[x];
    let yv = &pair.q().vertices[y];
    // P inequality i < m is z_i >= 0; m + j is (B^T x)_j <= 1 = row m + j of C.
    // Q inequality j < n is y_j >= 0 = z_{m+j}; n + i is (Ay)_i <= 1 = row i of C.
    let mut binding = Vec::with_capacity(d);
    for &i in &xv.binding {
        binding.push(if i < m { i } else { d + i });
    }
    for &j in &yv.binding {
        binding.push(if j < n { m + j } else { d + (j - n) });
    }
    labeled_index(&pair.game().product_polytope(), &binding)
}

/// Index of a completely labeled vertex of a labeled polytope given its binding inequalities.
pub fn labeled_index(z: &LabeledPolytope, binding: &[usize]) -> Result<i8> {
    let d = z.dim();
    let mut by_label: Vec<Option<usize>> = vec![None; d + 1];
    for &i in binding {
        let l = z.label(i);
        if l > d || by_label[l].is_some() {
            return Err(Error::Contract(format!("label {l} is not carried exactly once")));
        }
        by_label[l] = Some(i);
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(d);
    for (l, ineq) in by_label.iter().enumerate().skip(1) {
        let ineq = ineq.ok_or_else(|| Error::Contract(format!("label {l} missing")))?;
        rows.push(z.normal(ineq));
    }
    let s = det_sign(&ExactMatrix::from_rows(rows)?)?;
    if s == 0 {
        return Err(Error::Contract("singular facet normals at a completely labeled vertex".into()));
    }
    Ok(if d % 2 == 1 { s } else { -s })
}

/// Completely labeled vertices of a standard labeled polytope.
pub fn completely_labeled(vertices: &[VertexRecord], d: usize) -> Vec<usize> {
    let full = full_mask(d);
    (0..vertices.len()).filter(|&v| label_mask(&vertices[v].labels) & full == full).collect()
}

/// A Lemke-Howson path as the sequence of visited vertex pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LhPath {
    pub missing: usize,
    pub steps: Vec<(usize, usize)>,
    pub start: Equilibrium,
    pub end: Equilibrium,
}

/// Follows the `h`-almost completely labeled path from `start`.
pub fn lemke_howson(pair: &BestResponsePair, start: &Equilibrium, h: usize) -> Result<LhPath> {
    let d = pair.m() + pair.n();
    if h == 0 || h > d {
        return Err(Error::Invalid(format!("missing label {h} outside 1..={d}")));
    }
    let (p, q) = (pair.p(), pair.q());
    let (mut x, mut y) = (start.x, start.y);
    let full = full_mask(d);
    if label_mask(&p.vertices[x].labels) | label_mask(&q.vertices[y].labels) != full {
        return Err(Error::Invalid("start is not completely labeled".into()));
    }
    let mut steps = vec![(x, y)];
    let mut seen = HashSet::from([(x, y)]);
    let mut drop = h;
    let mut in_p = p.vertices[x].has_label(h);
    loop {
        let picked = if in_p {
            let leave = pair.p_inequality(drop);
            x = p.pivot(x, leave).ok_or_else(|| Error::Contract(format!("no edge of P leaves label {drop}")))?;
            entering_label(pair.p_polytope(), &p.vertices[steps.last().unwrap().0], &p.vertices[x])
        } else {
            let leave = pair.q_inequality(drop);
            y = q.pivot(y, leave).ok_or_else(|| Error::Contract(format!("no edge of Q leaves label {drop}")))?;
            entering_label(pair.q_polytope(), &q.vertices[steps.last().unwrap().1], &q.vertices[y])
        };
        if !seen.insert((x, y)) {
            return Err(Error::Contract(format!("Lemke-Howson path revisits ({x}, {y})")));
        }
        steps.push((x, y));
        if picked == h {
            break;
        }
        // the picked-up label is duplicate; drop it in the other polytope
        drop = picked;
        in_p = !in_p;
    }
    let index = compute_index(pair, x, y)?;
    let artificial = p.vertices[x].is_origin() && q.vertices[y].is_origin();
    Ok(LhPath { missing: h, steps, start: *start, end: Equilibrium { x, y, artificial, index } })
}

fn entering_label(poly: &LabeledPolytope, from: &VertexRecord, to: &VertexRecord) -> usize {
    let entered = to.binding.iter().find(|i| !from.binding.contains(i)).expect("adjacent vertices differ");
    poly.label(*entered)
}

/// Degree profile of the `h`-almost completely labeled subgraph of the product graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostCompleteCheck {
    pub missing: usize,
    pub max_degree: usize,
    /// Vertex pairs of degree one.
    pub endpoints: Vec<(usize, usize)>,
    /// Completely labeled pairs.
    pub complete: Vec<(usize, usize)>,
}

impl AlmostCompleteCheck {
    pub fn sound(&self) -> bool {
        let mut a = self.endpoints.clone();
        let mut b = self.complete.clone();
        a.sort_unstable();
        b.sort_unstable();
        self.max_degree <= 2 && a == b
    }
}

/// Builds the `h`-almost completely labeled subgraph of the graph of `P x Q`.
/// An edge `(x,y)-(x',y)` belongs to it when the labels common to `x` and `x'`
/// together with those of `y` cover every label except possibly `h`.
pub fn almost_complete_subgraph(pair: &BestResponsePair, h: usize) -> AlmostCompleteCheck {
    let d = pair.m() + pair.n();
    let need = full_mask(d) & !(1u128 << h);
    let full = full_mask(d);
    let (p, q) = (pair.p(), pair.q());
    let pm: Vec<u128> = p.vertices.iter().map(|v| label_mask(&v.labels)).collect();
    let qm: Vec<u128> = q.vertices.iter().map(|v| label_mask(&v.labels)).collect();
    let mut degree: HashMap<(usize, usize), usize> = HashMap::new();
    let mut complete = Vec::new();
    for x in 0..pm.len() {
        for y in 0..qm.len() {
            let here = pm[x] | qm[y];
            if here & need != need {
                continue;
            }
            if here & full == full {
                complete.push((x, y));
            }
            let mut deg = 0;
            for &x2 in p.graph.neighbors(x) {
                if (pm[x] & pm[x2] | qm[y]) & need == need {
                    deg += 1;
                }
            }
            for &y2 in q.graph.neighbors(y) {
                if (pm[x] | qm[y] & qm[y2]) & need == need {
                    deg += 1;
                }
            }
            degree.insert((x, y), deg);
        }
    }
    let max_degree = degree.values().copied().max().unwrap_or(0);
    let mut endpoints: Vec<(usize, usize)> = degree.iter().filter(|(_, &d)| d == 1).map(|(&k, _)| k).collect();
    endpoints.sort_unstable();
    complete.sort_unstable();
    AlmostCompleteCheck { missing: h, max_degree, endpoints, complete }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub total: usize,
    pub positive: usize,
    pub negative: usize,
    pub artificial_negative: bool,
    pub passes: bool,
}

/// Even count, equal index classes, artificial equilibrium in the negative class.
pub fn verify_parity(equilibria: &[Equilibrium]) -> ParityReport {
    let total = equilibria.len();
    let positive = equilibria.iter().filter(|e| e.index == 1).count();
    let negative = equilibria.iter().filter(|e| e.index == -1).count();
    let artificial: Vec<_> = equilibria.iter().filter(|e| e.artificial).collect();
    let artificial_negative = artificial.len() == 1 && artificial[0].index == -1;
    let passes = total.is_multiple_of(2) && positive == negative && positive + negative == total && artificial_negative;
    ParityReport { total, positive, negative, artificial_negative, passes }
}

/// Pairs of equilibria whose `P` vertices (or `Q` vertices) are adjacent but
/// whose indices agree. Empty for every non-degenerate game.
pub fn edge_property_violations(pair: &BestResponsePair, equilibria: &[Equilibrium]) -> Vec<(Equilibrium, Equilibrium)> {
    let mut bad = Vec::new();
    for (i, e) in equilibria.iter().enumerate() {
        for f in &equilibria[i + 1..] {
            let adjacent = pair.p().graph.has_edge(e.x, f.x) || pair.q().graph.has_edge(e.y, f.y);
            if adjacent && e.index == f.index {
                bad.push((*e, *f));
            }
        }
    }
    bad
}

/// `x / sum(x)`; `None` for the zero vector.
pub fn rescale(v: &[Scalar]) -> Option<Vec<Scalar>> {
    let total: Scalar = v.iter().sum();
    if total.is_zero() {
        return None;
    }
    Some(v.iter().map(|c| c / &total).collect())
}

/// A Nash equilibrium as a pair of mixed strategies.
pub fn mixed_strategies(pair: &BestResponsePair, eq: &Equilibrium) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    Some((rescale(&pair.p().vertices[eq.x].coords)?, rescale(&pair.q().vertices[eq.y].coords)?))
}

fn join(v: &[Scalar]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn join_labels(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// One line per equilibrium:
/// `index x y labels(x) labels(y) mixed(x) mixed(y)`, mixed strategies `-` for the artificial one.
pub fn report_line(pair: &BestResponsePair, eq: &Equilibrium) -> String {
    let xv = &pair.p().vertices[eq.x];
    let yv = &pair.q().vertices[eq.y];
    let (mx, my) = match mixed_strategies(pair, eq) {
        Some((a, b)) => (join(&a), join(&b)),
        None => ("-".into(), "-".into()),
    };
    format!(
        "{:+} {} {} {} {} {} {}",
        eq.index,
        join(&xv.coords),
        join(&yv.coords),
        join_labels(&xv.labels),
        join_labels(&yv.labels),
        mx,
        my
    )
}
