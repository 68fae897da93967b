//! Minimum spanning trees by Boruvka's algorithm.
//!
//! The crate provides two sequential baselines ([`boruvka_seq`] and the
//! covered-edge variant [`boruvka_seq_opt`]), two multi-threaded variants
//! ([`boruvka_lock`], built on per-component permission cells, and
//! [`boruvka_cas`], built on a compare-and-swap parent swing), a Kruskal
//! oracle and an independent verifier.
//!
//! All algorithms operate on an edge-list [`Graph`] with distinct weights.
//! Because the weights are distinct the MST is unique, so results from any
//! algorithm and any thread schedule can be compared edge-for-edge.

mod barrier;
mod dsu;
pub mod graph;
pub mod parallel;
pub mod schedule;
pub mod sequential;
pub mod union_find;
pub mod verify;

mod result;

pub use graph::{
    build_graph, generate_graph, load_graph, save_graph, Edge, EdgeId, Graph, GraphError, VertexId,
    NO_EDGE,
};
pub use parallel::{
    boruvka_cas, boruvka_lock, plan_workers, run_parallel, MstError, ParallelRun, Variant,
    WorkerPlan,
};
pub use result::MstResult;
pub use sequential::{boruvka_seq, boruvka_seq_opt, kruskal_oracle};
pub use union_find::{ComponentForest, ForestError, LockAttempt, LockProtocol};
pub use verify::{verify_against, verify_mst, VerifyError, VerifyReport};
