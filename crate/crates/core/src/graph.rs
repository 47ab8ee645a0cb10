//! Simple undirected graphs on `0..n`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, parallel edges and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("edge {u}-{v} out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::Invalid(format!("self-loop at {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::Invalid(format!("parallel edge {u}-{v}")));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { adj, edges: set.into_iter().collect() })
    }

    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|u| (u, (u + 1) % n))).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|u| (u - 1, u))).expect("valid")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).expect("valid")
    }

    /// The `c`-dimensional hypercube graph; vertices are bit strings.
    pub fn hypercube(c: usize) -> Self {
        let n = 1usize << c;
        Self::new(
            n,
            (0..n).flat_map(|u| (0..c).map(move |k| (u, u ^ (1 << k))).filter(|&(u, v)| u < v)),
        )
        .expect("valid")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::new(10, outer.chain(spokes).chain(inner)).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.vertex_count();
        let mut side = vec![u8::MAX; n];
        for s in 0..n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        stack.push(v);
                    } else if side[v] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_stable(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        Graph::new(vertices.len(), edges).expect("induced subgraph of a simple graph")
    }

    /// Parses `V E` followed by `E` lines `u v` (0-based). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let (n, e) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(e);
        for _ in 0..e {
            let (ln, l) = lines.next().ok_or_else(|| Error::parse(hline, format!("expected {e} edges")))?;
            edges.push(parse_pair(ln, l)?);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "trailing content after edge list"));
        }
        Graph::new(n, edges).map_err(|err| Error::parse(hline, err.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.vertex_count(), self.edge_count());
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::parse(line, format!("expected two integers, found {:?}", text)));
    }
    let a = parts[0].parse().map_err(|_| Error::parse(line, format!("bad integer {:?}", parts[0])))?;
    let b = parts[1].parse().map_err(|_| Error::parse(line, format!("bad integer {:?}", parts[1])))?;
    Ok((a, b))
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(V={}, E={})", self.vertex_count(), self.edge_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn families() {
        let q4 = Graph::hypercube(4);
        assert_eq!((q4.vertex_count(), q4.edge_count()), (16, 32));
        assert!(q4.is_regular(4) && q4.is_bipartite() && q4.is_connected());
        let p = Graph::petersen();
        assert!(p.is_regular(3) && !p.is_bipartite());
        assert_eq!(p.edge_count(), 15);
        assert!(!Graph::complete(3).is_bipartite());
        assert!(!Graph::empty(2).is_connected());
    }

    #[test]
    fn parse_round_trip() {
        let g = Graph::parse("# square\n4 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(g, Graph::cycle(4));
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        let err = Graph::parse("3 2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = Graph::parse("3 1\n0 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn induced_subgraph() {
        let g = Graph::cycle(5).induced(&[0, 1, 2]);
        assert_eq!(g, Graph::path(3));
    }
}
