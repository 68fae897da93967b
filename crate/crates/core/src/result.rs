use std::time::Duration;

use crate::graph::{EdgeId, Graph};

/// Output of every MST algorithm in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MstResult {
    /// Selected edge ids, sorted ascending.
    pub mst_edges: Vec<EdgeId>,
    pub total_weight: u128,
    /// Outer iterations executed (1 for Kruskal).
    pub rounds: usize,
    /// Wall time of the computation proper.
    pub elapsed: Duration,
}

impl MstResult {
    pub fn new(
        graph: &Graph,
        mut mst_edges: Vec<EdgeId>,
        rounds: usize,
        elapsed: Duration,
    ) -> Self {
        mst_edges.sort_unstable();
        let total_weight = mst_edges
            .iter()
            .map(|&e| u128::from(graph.edge(e).weight))
            .sum();
        Self {
            mst_edges,
            total_weight,
            rounds,
            elapsed,
        }
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.elapsed.as_micros() as f64 / 1000.0
    }

    /// Same edge set, ignoring timing and round count.
    pub fn same_tree(&self, other: &MstResult) -> bool {
        self.mst_edges == other.mst_edges
    }
}
