//! Attack-defense structures: simple undirected graphs over nodes `0..n`,
//! with generators, composition operators, and a JSON file format.
//!
//! Composition keeps node identity deterministic: the left operand keeps its
//! ids and the right operand's ids are shifted by the left node count.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Simple undirected graph: `n` nodes with ids `0..n`, no self-loops, no
/// duplicate edges. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Edgeless graph on `n` nodes (n = 0 allowed).
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from an edge list, validating the invariants.
    /// Edges may be given in either endpoint order; they are stored as
    /// `(min, max)`. Duplicates are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            let e = normalize_edge(n, u, v, i)?;
            if !set.insert(e) {
                return Err(Error::parse(format!(
                    "edge {i}: duplicate edge [{},{}]",
                    e.0, e.1
                )));
            }
        }
        Ok(Graph { n, edges: set })
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self> {
        require_positive(n)?;
        let mut edges = BTreeSet::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.insert((u, v));
            }
        }
        Ok(Graph { n, edges })
    }

    /// Star graph: node 0 connected to all others.
    pub fn star(n: usize) -> Result<Self> {
        require_positive(n)?;
        let edges = (1..n).map(|v| (0, v)).collect();
        Ok(Graph { n, edges })
    }

    /// Path graph: chain 0-1-...-(n-1).
    pub fn path(n: usize) -> Result<Self> {
        require_positive(n)?;
        let edges = (0..n.saturating_sub(1)).map(|u| (u, u + 1)).collect();
        Ok(Graph { n, edges })
    }

    /// Erdős–Rényi graph G(n, p): each pair `(u, v)` with `u < v` is included
    /// independently with probability `p`, drawing one uniform per pair from
    /// a [`SplitMix64`] stream seeded with `seed`, pairs in ascending order.
    /// Deterministic for a given `(n, p, seed)`.
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Self> {
        require_positive(n)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!(
                "edge probability must be in [0, 1], got {p}"
            )));
        }
        let mut rng = SplitMix64::new(seed);
        let mut edges = BTreeSet::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.next_f64() < p {
                    edges.insert((u, v));
                }
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&e)
    }

    /// Adjacency lists, neighbors ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(n={}, |E|={})", self.n, self.edges.len())
    }
}

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("node count must be >= 1"));
    }
    Ok(())
}

fn normalize_edge(n: usize, u: usize, v: usize, index: usize) -> Result<(usize, usize)> {
    if u == v {
        return Err(Error::parse(format!("edge {index}: self-loop [{u},{v}]")));
    }
    if u >= n || v >= n {
        return Err(Error::parse(format!(
            "edge {index}: endpoint out of range in [{u},{v}] (n = {n})"
        )));
    }
    Ok(if u < v { (u, v) } else { (v, u) })
}

/// Places `g1` and `g2` side by side with no cross edges; `g2`'s ids shift
/// by `g1.node_count()`.
pub fn disjoint_union(g1: &Graph, g2: &Graph) -> Graph {
    let shift = g1.n;
    let mut edges = g1.edges.clone();
    edges.extend(g2.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
    Graph {
        n: g1.n + g2.n,
        edges,
    }
}

/// Disjoint union plus every cross edge: any node of `g1` attacks any node
/// of `g2` and vice versa. `|E| = |E1| + |E2| + n1 * n2`.
pub fn full_interconnect(g1: &Graph, g2: &Graph) -> Graph {
    let shift = g1.n;
    let mut g = disjoint_union(g1, g2);
    for u in 0..g1.n {
        for v in 0..g2.n {
            g.edges.insert((u, v + shift));
        }
    }
    g
}

/// Disjoint union plus exactly the listed cross edges, given as
/// `(g1 node, g2 node)` pairs. Duplicate pairs are deduplicated.
pub fn bridge_interconnect(
    g1: &Graph,
    g2: &Graph,
    cross_edges: &[(usize, usize)],
) -> Result<Graph> {
    let shift = g1.n;
    let mut g = disjoint_union(g1, g2);
    for &(u, v) in cross_edges {
        if u >= g1.n {
            return Err(Error::invalid(format!(
                "bridge edge ({u},{v}): left node {u} out of range (n1 = {})",
                g1.n
            )));
        }
        if v >= g2.n {
            return Err(Error::invalid(format!(
                "bridge edge ({u},{v}): right node {v} out of range (n2 = {})",
                g2.n
            )));
        }
        g.edges.insert((u, v + shift));
    }
    Ok(g)
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Serializes to the graph file schema `{"n": .., "edges": [[u,v], ..]}`
/// with `u < v` and edges ascending.
pub fn to_json(g: &Graph) -> String {
    let file = GraphFile {
        n: g.n,
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("graph serialization cannot fail");
    s.push('\n');
    s
}

/// Parses the graph file schema; either endpoint order is accepted.
pub fn from_json(text: &str) -> Result<Graph> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("graph file: {e}")))?;
    Graph::from_edges(file.n, file.edges.iter().map(|e| (e[0], e[1])))
}

pub fn write_graph(g: &Graph, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(g))?;
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_counts() {
        let k1 = Graph::complete(1).unwrap();
        assert_eq!(k1.node_count(), 1);
        assert_eq!(k1.edge_count(), 0);

        let k8 = Graph::complete(8).unwrap();
        assert_eq!(k8.edge_count(), 28); // 8*7/2

        let k3 = Graph::complete(3).unwrap();
        let edges: Vec<_> = k3.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(Graph::complete(0).is_err());
        assert!(Graph::star(0).is_err());
        assert!(Graph::path(0).is_err());
        assert!(Graph::erdos_renyi(0, 0.5, 1).is_err());
    }

    #[test]
    fn star_and_path_shapes() {
        let s5 = Graph::star(5).unwrap();
        assert_eq!(s5.edge_count(), 4);
        assert!(s5.edges().all(|(u, _)| u == 0));

        let p3 = Graph::path(3).unwrap();
        let edges: Vec<_> = p3.edges().collect();
        assert_eq!(edges, vec![(0, 1), (1, 2)]);

        let p1 = Graph::path(1).unwrap();
        assert_eq!(p1.edge_count(), 0);
    }

    #[test]
    fn erdos_renyi_extremes_and_determinism() {
        let g0 = Graph::erdos_renyi(10, 0.0, 99).unwrap();
        assert_eq!(g0.edge_count(), 0);

        let g1 = Graph::erdos_renyi(10, 1.0, 99).unwrap();
        assert_eq!(g1.edge_count(), 45);

        let a = Graph::erdos_renyi(30, 0.3, 7).unwrap();
        let b = Graph::erdos_renyi(30, 0.3, 7).unwrap();
        assert_eq!(a, b);
        let c = Graph::erdos_renyi(30, 0.3, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn erdos_renyi_rejects_bad_probability() {
        assert!(Graph::erdos_renyi(5, -0.1, 1).is_err());
        assert!(Graph::erdos_renyi(5, 1.1, 1).is_err());
    }

    #[test]
    fn disjoint_union_shifts_right_operand() {
        let k4 = Graph::complete(4).unwrap();
        let k6 = Graph::complete(6).unwrap();
        let u = disjoint_union(&k4, &k6);
        assert_eq!(u.node_count(), 10);
        assert_eq!(u.edge_count(), 6 + 15);
        assert!(u.has_edge(4, 5));
        assert!(!u.has_edge(0, 4));

        let empty = Graph::empty(0);
        assert_eq!(disjoint_union(&k4, &empty), k4);

        let k1 = Graph::complete(1).unwrap();
        let two = disjoint_union(&k1, &k1);
        assert_eq!(two.node_count(), 2);
        assert_eq!(two.edge_count(), 0);
    }

    #[test]
    fn full_interconnect_of_completes_is_complete() {
        let k6 = Graph::complete(6).unwrap();
        let j = full_interconnect(&k6, &k6);
        assert_eq!(j, Graph::complete(12).unwrap());

        let k1 = Graph::complete(1).unwrap();
        assert_eq!(full_interconnect(&k1, &k1), Graph::complete(2).unwrap());

        let p2 = Graph::path(2).unwrap();
        let j = full_interconnect(&p2, &p2);
        assert_eq!(j.node_count(), 4);
        assert_eq!(j.edge_count(), 1 + 1 + 4);
        assert_eq!(j, Graph::complete(4).unwrap());
    }

    #[test]
    fn bridge_interconnect_cases() {
        let k3 = Graph::complete(3).unwrap();
        let none = bridge_interconnect(&k3, &k3, &[]).unwrap();
        assert_eq!(none, disjoint_union(&k3, &k3));

        let all: Vec<_> = (0..3).flat_map(|u| (0..3).map(move |v| (u, v))).collect();
        let full = bridge_interconnect(&k3, &k3, &all).unwrap();
        assert_eq!(full, full_interconnect(&k3, &k3));

        let one = bridge_interconnect(&k3, &k3, &[(0, 0)]).unwrap();
        assert_eq!(one.edge_count(), 7);

        // duplicates collapse
        let dup = bridge_interconnect(&k3, &k3, &[(0, 0), (0, 0)]).unwrap();
        assert_eq!(dup, one);

        assert!(bridge_interconnect(&k3, &k3, &[(3, 0)]).is_err());
        assert!(bridge_interconnect(&k3, &k3, &[(0, 3)]).is_err());
    }

    #[test]
    fn json_round_trip_and_diagnostics() {
        let k5 = Graph::complete(5).unwrap();
        let g = from_json(&to_json(&k5)).unwrap();
        assert_eq!(g, k5);

        // reader accepts either endpoint order
        let g = from_json(r#"{"n": 3, "edges": [[2, 0], [0, 1]]}"#).unwrap();
        assert!(g.has_edge(0, 2) && g.has_edge(0, 1));

        let err = from_json(r#"{"n": 3, "edges": [[0, 0]]}"#).unwrap_err();
        assert_eq!(err.category(), "parse-error");
        assert!(err.to_string().contains("self-loop"));

        let err = from_json(r#"{"n": 5, "edges": [[7, 1]]}"#).unwrap_err();
        assert!(err.to_string().contains("out of range"));

        let err = from_json(r#"{"n": 3, "edges": [[0, 1], [1, 0]]}"#).unwrap_err();
        assert!(err.to_string().contains("duplicate"));

        let err = from_json("not json").unwrap_err();
        assert_eq!(err.category(), "parse-error");
    }
}
