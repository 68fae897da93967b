//! Single-threaded Boruvka and the Kruskal oracle.

use std::time::Instant;

use crate::dsu::Dsu;
use crate::graph::{EdgeId, Graph, NO_EDGE};
use crate::result::MstResult;
use crate::union_find::ComponentForest;

/// Plain sequential Boruvka: every round scans all edges for each
/// component's lightest outgoing edge, then merges along those edges with
/// union by size.
pub fn boruvka_seq(graph: &Graph) -> MstResult {
    boruvka(graph, false)
}

/// Sequential Boruvka that marks edges found to be internal to a component,
/// or already selected, as covered and skips them in later rounds.
pub fn boruvka_seq_opt(graph: &Graph) -> MstResult {
    boruvka(graph, true)
}

fn boruvka(graph: &Graph, skip_covered: bool) -> MstResult {
    graph.reset_covered();
    let start = Instant::now();

    let n = graph.n();
    let forest = ComponentForest::new(n, 1);
    // (weight, edge) of each component's lightest outgoing edge so far. The
    // weight sits next to the id so a comparison touches one slot.
    let mut minimum = vec![(u64::MAX, NO_EDGE); n];
    let mut mst = Vec::with_capacity(n.saturating_sub(1));
    let mut rounds = 0;

    while forest.component_count() > 1 {
        rounds += 1;
        minimum.fill((u64::MAX, NO_EDGE));

        for (id, e) in graph.edges().iter().enumerate() {
            if skip_covered && e.is_covered() {
                continue;
            }
            let c1 = forest.find_halving(e.src);
            let c2 = forest.find_halving(e.dest);
            if c1 == c2 {
                if skip_covered {
                    e.set_covered();
                }
                continue;
            }
            let id = id as EdgeId;
            for c in [c1 as usize, c2 as usize] {
                let slot = &mut minimum[c];
                if slot.1 == NO_EDGE || slot.0 > e.weight {
                    *slot = (e.weight, id);
                }
            }
        }

        for v in 0..n as u32 {
            let chosen = minimum[v as usize].1;
            if chosen == NO_EDGE || !forest.is_root(v) {
                continue;
            }
            let e = graph.edge(chosen);
            let c1 = forest.find_halving(e.src);
            let c2 = forest.find_halving(e.dest);
            if c1 == c2 {
                if skip_covered {
                    e.set_covered();
                }
                continue;
            }
            mst.push(chosen);
            forest
                .union_by_size(c1, c2)
                .expect("find returned two distinct roots");
            if skip_covered {
                e.set_covered();
            }
        }
    }

    let elapsed = start.elapsed();
    MstResult::new(graph, mst, rounds, elapsed)
}

/// Kruskal's algorithm: sort by weight, keep every edge that joins two
/// different trees. Uses its own disjoint-set forest, independent of the
/// one the Boruvka variants share.
pub fn kruskal_oracle(graph: &Graph) -> MstResult {
    let start = Instant::now();
    let mut order: Vec<EdgeId> = (0..graph.m() as EdgeId).collect();
    order.sort_unstable_by_key(|&e| graph.edge(e).weight);

    let mut dsu = Dsu::new(graph.n());
    let mut mst = Vec::with_capacity(graph.n().saturating_sub(1));
    for e in order {
        let edge = graph.edge(e);
        if dsu.union(edge.src as usize, edge.dest as usize) {
            mst.push(e);
            if mst.len() + 1 == graph.n() {
                break;
            }
        }
    }
    MstResult::new(graph, mst, 1, start.elapsed())
}
