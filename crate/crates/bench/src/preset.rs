//! Built-in workload configurations.
//!
//! Sizes 10K, 100K and 1M vertices, each with average degree 3, 6 and 9.
//! Every preset has a fixed generator seed: 100·k + d, where k is 1, 2, 3 for
//! 10K, 100K, 1M and d is the degree.

use boruvka::{generate_graph, Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub n: usize,
    pub avg_degree: u32,
    pub seed: u64,
}

impl Preset {
    pub fn generate(&self) -> Result<Graph, GraphError> {
        generate_graph(self.n, self.avg_degree, self.seed)
    }
}

const fn p(name: &'static str, n: usize, avg_degree: u32, seed: u64) -> Preset {
    Preset {
        name,
        n,
        avg_degree,
        seed,
    }
}

pub const PRESETS: [Preset; 9] = [
    p("Graph10K_3", 10_000, 3, 103),
    p("Graph10K_6", 10_000, 6, 106),
    p("Graph10K_9", 10_000, 9, 109),
    p("Graph100K_3", 100_000, 3, 203),
    p("Graph100K_6", 100_000, 6, 206),
    p("Graph100K_9", 100_000, 9, 209),
    p("Graph1M_3", 1_000_000, 3, 303),
    p("Graph1M_6", 1_000_000, 6, 306),
    p("Graph1M_9", 1_000_000, 9, 309),
];

/// Looks a preset up by name, ignoring ASCII case.
pub fn preset(name: &str) -> Option<Preset> {
    PRESETS
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .copied()
}
