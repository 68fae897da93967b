//! Checks an [`MstResult`] against the graph and the Kruskal oracle.

use std::fmt;

use thiserror::Error;

use crate::dsu::Dsu;
use crate::graph::{EdgeId, Graph};
use crate::result::MstResult;
use crate::sequential::kruskal_oracle;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("edge id {id} out of range for {m} edges")]
    InvalidEdgeId { id: EdgeId, m: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub is_spanning: bool,
    pub is_acyclic: bool,
    pub edge_count_ok: bool,
    pub weight_matches_oracle: bool,
    pub edge_set_matches_oracle: bool,
    pub details: Vec<String>,
}

impl VerifyReport {
    /// All five checks hold, so the result is the unique MST.
    pub fn all_ok(&self) -> bool {
        self.is_spanning
            && self.is_acyclic
            && self.edge_count_ok
            && self.weight_matches_oracle
            && self.edge_set_matches_oracle
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "spanning={} acyclic={} edge_count={} weight={} edge_set={}",
            self.is_spanning,
            self.is_acyclic,
            self.edge_count_ok,
            self.weight_matches_oracle,
            self.edge_set_matches_oracle
        )?;
        for d in &self.details {
            write!(f, "; {d}")?;
        }
        Ok(())
    }
}

/// Verifies `result`, recomputing the oracle tree from scratch.
pub fn verify_mst(graph: &Graph, result: &MstResult) -> Result<VerifyReport, VerifyError> {
    verify_against(graph, result, &kruskal_oracle(graph))
}

/// Verifies `result` against a precomputed oracle tree for the same graph.
pub fn verify_against(
    graph: &Graph,
    result: &MstResult,
    oracle: &MstResult,
) -> Result<VerifyReport, VerifyError> {
    let n = graph.n();
    let mut details = Vec::new();

    let mut dsu = Dsu::new(n);
    let mut is_acyclic = true;
    let mut weight: u128 = 0;
    for &id in &result.mst_edges {
        if id as usize >= graph.m() {
            return Err(VerifyError::InvalidEdgeId { id, m: graph.m() });
        }
        let e = graph.edge(id);
        weight += u128::from(e.weight);
        if !dsu.union(e.src as usize, e.dest as usize) && is_acyclic {
            is_acyclic = false;
            details.push(format!("edge {id} ({}-{}) closes a cycle", e.src, e.dest));
        }
    }

    let is_spanning = dsu.sets() == 1;
    if !is_spanning {
        details.push(format!("result leaves {} components", dsu.sets()));
    }
    let edge_count_ok = result.mst_edges.len() + 1 == n;
    if !edge_count_ok {
        details.push(format!(
            "{} edges selected, expected {}",
            result.mst_edges.len(),
            n - 1
        ));
    }
    if weight != result.total_weight {
        details.push(format!(
            "reported weight {} but edges sum to {weight}",
            result.total_weight
        ));
    }
    let weight_matches_oracle = weight == oracle.total_weight;
    if !weight_matches_oracle {
        details.push(format!("weight {weight}, oracle {}", oracle.total_weight));
    }

    let mut ours = result.mst_edges.clone();
    ours.sort_unstable();
    let edge_set_matches_oracle = ours == oracle.mst_edges;
    if !edge_set_matches_oracle {
        let missing = oracle
            .mst_edges
            .iter()
            .filter(|e| ours.binary_search(e).is_err())
            .count();
        details.push(format!("{missing} oracle edges missing from result"));
    }

    Ok(VerifyReport {
        is_spanning,
        is_acyclic,
        edge_count_ok,
        weight_matches_oracle,
        edge_set_matches_oracle,
        details,
    })
}
