//! Weighted undirected edge-list graphs.
//!
//! A [`Graph`] is validated once at construction: connected, simple, with
//! strictly positive, pairwise distinct weights. After that its topology is
//! immutable and can be shared freely between threads. The only mutable
//! state is the per-edge `covered` flag, which the optimized algorithms use
//! to skip edges that can no longer contribute to the tree.

mod generate;
mod io;

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};

use thiserror::Error;

use crate::dsu::Dsu;

pub use generate::generate_graph;
pub use io::{load_graph, read_graph, save_graph, write_graph};

/// 0-based vertex index.
pub type VertexId = u32;

/// Position of an edge in [`Graph::edges`].
pub type EdgeId = u32;

/// "No edge" marker stored in minimum-edge tables.
pub const NO_EDGE: EdgeId = EdgeId::MAX;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge {edge} endpoint {vertex} is out of range for {n} vertices")]
    EndpointOutOfRange { edge: usize, vertex: u64, n: usize },
    #[error("edge {edge} is a self-loop on vertex {vertex}")]
    SelfLoop { edge: usize, vertex: VertexId },
    #[error("edge {edge} has zero weight")]
    ZeroWeight { edge: usize },
    #[error("edges {first} and {second} both join {src} and {dest}")]
    DuplicateEdge {
        first: usize,
        second: usize,
        src: VertexId,
        dest: VertexId,
    },
    #[error("edges {first} and {second} share weight {weight}")]
    DuplicateWeight {
        first: usize,
        second: usize,
        weight: u64,
    },
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("graph too large: {0}")]
    TooLarge(String),
    #[error("cannot generate {m} edges on {n} vertices (need between n-1 and n(n-1)/2)")]
    InfeasibleDegree { n: usize, m: u64 },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An undirected weighted edge. `src` and `dest` carry no direction.
#[derive(Debug)]
pub struct Edge {
    pub src: VertexId,
    pub dest: VertexId,
    pub weight: u64,
    covered: AtomicBool,
}

impl Edge {
    pub fn new(src: VertexId, dest: VertexId, weight: u64) -> Self {
        Self {
            src,
            dest,
            weight,
            covered: AtomicBool::new(false),
        }
    }

    #[inline]
    pub fn is_covered(&self) -> bool {
        self.covered.load(Ordering::Relaxed)
    }

    /// Marks the edge as internal to a component or already selected.
    /// The flag only ever moves from `false` to `true` during a run.
    #[inline]
    pub fn set_covered(&self) {
        self.covered.store(true, Ordering::Relaxed);
    }

    fn clear_covered(&self) {
        self.covered.store(false, Ordering::Relaxed);
    }
}

impl Clone for Edge {
    fn clone(&self) -> Self {
        Self {
            src: self.src,
            dest: self.dest,
            weight: self.weight,
            covered: AtomicBool::new(self.is_covered()),
        }
    }
}

/// Equality compares topology and weight only.
impl PartialEq for Edge {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src && self.dest == other.dest && self.weight == other.weight
    }
}

impl Eq for Edge {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Wraps an edge list without validating it. Callers must guarantee the
    /// invariants checked by [`Graph::validate`].
    pub(crate) fn from_parts_unchecked(n: usize, edges: Vec<Edge>) -> Self {
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id as usize]
    }

    /// Clears every `covered` flag. Algorithms call this before timing starts.
    pub fn reset_covered(&self) {
        self.edges.iter().for_each(Edge::clear_covered);
    }

    pub fn covered_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_covered()).count()
    }

    /// Checks every structural precondition the MST algorithms rely on.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.n;
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > VertexId::MAX as usize {
            return Err(GraphError::TooLarge(format!("{n} vertices")));
        }
        if self.edges.len() >= NO_EDGE as usize {
            return Err(GraphError::TooLarge(format!("{} edges", self.edges.len())));
        }

        let mut pairs: HashMap<(VertexId, VertexId), usize> =
            HashMap::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            for v in [e.src, e.dest] {
                if v as usize >= n {
                    return Err(GraphError::EndpointOutOfRange {
                        edge: i,
                        vertex: v as u64,
                        n,
                    });
                }
            }
            if e.src == e.dest {
                return Err(GraphError::SelfLoop {
                    edge: i,
                    vertex: e.src,
                });
            }
            if e.weight == 0 {
                return Err(GraphError::ZeroWeight { edge: i });
            }
            let key = (e.src.min(e.dest), e.src.max(e.dest));
            if let Some(&first) = pairs.get(&key) {
                return Err(GraphError::DuplicateEdge {
                    first,
                    second: i,
                    src: key.0,
                    dest: key.1,
                });
            }
            pairs.insert(key, i);
        }
        drop(pairs);

        let mut by_weight: Vec<usize> = (0..self.edges.len()).collect();
        by_weight.sort_unstable_by_key(|&i| (self.edges[i].weight, i));
        for w in by_weight.windows(2) {
            let (a, b) = (&self.edges[w[0]], &self.edges[w[1]]);
            if a.weight == b.weight {
                return Err(GraphError::DuplicateWeight {
                    first: w[0],
                    second: w[1],
                    weight: a.weight,
                });
            }
        }

        let mut dsu = Dsu::new(n);
        for e in &self.edges {
            dsu.union(e.src as usize, e.dest as usize);
        }
        if dsu.sets() != 1 {
            return Err(GraphError::Disconnected {
                components: dsu.sets(),
            });
        }
        Ok(())
    }
}

/// Builds and validates a graph from `(src, dest, weight)` triples.
/// All `covered` flags start out `false`.
pub fn build_graph<I>(n: usize, edges: I) -> Result<Graph, GraphError>
where
    I: IntoIterator<Item = (VertexId, VertexId, u64)>,
{
    let edges = edges
        .into_iter()
        .map(|(s, d, w)| Edge::new(s, d, w))
        .collect();
    let g = Graph { n, edges };
    g.validate()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_connected_graph() {
        let g = build_graph(2, [(0, 1, 7)]).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.m(), 1);
        assert!(!g.edge(0).is_covered());
    }

    #[test]
    fn single_vertex_is_connected() {
        let g = build_graph(1, []).unwrap();
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn triangle_is_valid() {
        let g = build_graph(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)]).unwrap();
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn rejects_duplicate_weight() {
        let err = build_graph(3, [(0, 1, 5), (1, 2, 5)]).unwrap_err();
        assert!(matches!(err, GraphError::DuplicateWeight { weight: 5, .. }));
    }

    #[test]
    fn rejects_disconnected() {
        let err = build_graph(4, [(0, 1, 1), (2, 3, 2)]).unwrap_err();
        assert!(matches!(err, GraphError::Disconnected { components: 2 }));
    }

    #[test]
    fn rejects_self_loop() {
        let err = build_graph(2, [(0, 1, 1), (1, 1, 2)]).unwrap_err();
        assert!(matches!(err, GraphError::SelfLoop { edge: 1, vertex: 1 }));
    }

    #[test]
    fn rejects_duplicate_edge_in_either_orientation() {
        let err = build_graph(2, [(0, 1, 1), (1, 0, 2)]).unwrap_err();
        assert!(matches!(
            err,
            GraphError::DuplicateEdge {
                first: 0,
                second: 1,
                ..
            }
        ));
    }

    #[test]
    fn rejects_out_of_range_endpoint() {
        let err = build_graph(2, [(0, 2, 1)]).unwrap_err();
        assert!(matches!(
            err,
            GraphError::EndpointOutOfRange { vertex: 2, .. }
        ));
    }

    #[test]
    fn rejects_zero_weight_and_empty() {
        assert!(matches!(
            build_graph(2, [(0, 1, 0)]).unwrap_err(),
            GraphError::ZeroWeight { edge: 0 }
        ));
        assert!(matches!(build_graph(0, []).unwrap_err(), GraphError::Empty));
    }

    #[test]
    fn covered_flags_reset() {
        let g = build_graph(3, [(0, 1, 1), (1, 2, 2)]).unwrap();
        g.edge(1).set_covered();
        assert_eq!(g.covered_count(), 1);
        g.reset_covered();
        assert_eq!(g.covered_count(), 0);
    }
}
