use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use boruvka::{generate_graph, load_graph, Graph};
use serde::{Deserialize, Serialize};

use crate::preset::{preset, Preset};
use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Seq,
    SeqOpt,
    Lock,
    Cas,
    Kruskal,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Seq,
        Algorithm::SeqOpt,
        Algorithm::Lock,
        Algorithm::Cas,
        Algorithm::Kruskal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Seq => "seq",
            Algorithm::SeqOpt => "seq-opt",
            Algorithm::Lock => "lock",
            Algorithm::Cas => "cas",
            Algorithm::Kruskal => "kruskal",
        }
    }

    pub fn is_parallel(self) -> bool {
        matches!(self, Algorithm::Lock | Algorithm::Cas)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                format!("unknown algorithm {s:?} (expected seq, seq-opt, lock, cas or kruskal)")
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    Preset(Preset),
    Generate {
        n: usize,
        avg_degree: u32,
        seed: u64,
    },
    File(PathBuf),
}

impl GraphSource {
    pub fn preset(name: &str) -> Result<Self, BenchError> {
        preset(name)
            .map(GraphSource::Preset)
            .ok_or_else(|| BenchError::UnknownPreset(name.to_string()))
    }

    /// Name used in the `graph` column.
    pub fn name(&self) -> String {
        match self {
            GraphSource::Preset(p) => p.name.to_string(),
            GraphSource::Generate {
                n,
                avg_degree,
                seed,
            } => format!("gen_{n}_{avg_degree}_s{seed}"),
            GraphSource::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        }
    }

    pub fn load(&self) -> Result<Graph, BenchError> {
        Ok(match self {
            GraphSource::Preset(p) => p.generate()?,
            GraphSource::Generate {
                n,
                avg_degree,
                seed,
            } => generate_graph(*n, *avg_degree, *seed)?,
            GraphSource::File(path) => load_graph(path)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchPlan {
    pub source: GraphSource,
    pub algorithms: Vec<Algorithm>,
    /// Worker counts for the parallel algorithms; sequential ones run once
    /// per trial with `threads = 1`.
    pub thread_counts: Vec<usize>,
    pub repetitions: usize,
    /// Untimed runs before the timed trials of each configuration.
    pub warmup: usize,
    pub verify: bool,
    pub faithful_lock: bool,
}

impl BenchPlan {
    pub fn new(source: GraphSource, algorithms: Vec<Algorithm>) -> Self {
        Self {
            source,
            algorithms,
            thread_counts: vec![1, 2, 4, 8, 16],
            repetitions: 5,
            warmup: 1,
            verify: false,
            faithful_lock: false,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.algorithms.is_empty() {
            return Err(BenchError::InvalidPlan("no algorithms selected".into()));
        }
        if self.repetitions == 0 {
            return Err(BenchError::InvalidPlan(
                "repetitions must be at least 1".into(),
            ));
        }
        if self.thread_counts.is_empty() || self.thread_counts.contains(&0) {
            return Err(BenchError::InvalidPlan(
                "thread counts must be a non-empty list of positive integers".into(),
            ));
        }
        Ok(())
    }

    /// `(algorithm, threads)` pairs in execution order.
    pub fn configurations(&self) -> Vec<(Algorithm, usize)> {
        let mut out = Vec::new();
        for &a in &self.algorithms {
            if a.is_parallel() {
                out.extend(self.thread_counts.iter().map(|&t| (a, t)));
            } else {
                out.push((a, 1));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>(), Ok(a));
        }
        assert!("prim".parse::<Algorithm>().is_err());
    }

    #[test]
    fn sequential_algorithms_ignore_thread_counts() {
        let mut plan = BenchPlan::new(
            GraphSource::preset("Graph10K_3").unwrap(),
            vec![Algorithm::Seq, Algorithm::Cas],
        );
        plan.thread_counts = vec![1, 2, 4];
        assert_eq!(
            plan.configurations(),
            [
                (Algorithm::Seq, 1),
                (Algorithm::Cas, 1),
                (Algorithm::Cas, 2),
                (Algorithm::Cas, 4)
            ]
        );
    }

    #[test]
    fn invalid_plans() {
        let mut plan = BenchPlan::new(GraphSource::preset("Graph10K_3").unwrap(), vec![]);
        assert!(plan.validate().is_err());
        plan.algorithms = vec![Algorithm::Seq];
        plan.repetitions = 0;
        assert!(plan.validate().is_err());
        plan.repetitions = 1;
        plan.thread_counts.clear();
        assert!(plan.validate().is_err());
        plan.thread_counts = vec![2];
        assert!(plan.validate().is_ok());
    }

    #[test]
    fn source_names() {
        assert_eq!(
            GraphSource::preset("graph10k_6").unwrap().name(),
            "Graph10K_6"
        );
        assert_eq!(GraphSource::File("/tmp/road.txt".into()).name(), "road");
        assert!(matches!(
            GraphSource::preset("nope"),
            Err(BenchError::UnknownPreset(_))
        ));
    }
}
