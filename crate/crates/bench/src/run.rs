use boruvka::{
    boruvka_seq, boruvka_seq_opt, kruskal_oracle, run_parallel, verify_against, Graph,
    LockProtocol, MstResult, Variant,
};

use crate::plan::{Algorithm, BenchPlan};
use crate::report::BenchRow;
use crate::BenchError;

/// Runs one algorithm once. `threads` is ignored by the sequential ones.
pub fn run_algorithm(
    graph: &Graph,
    algorithm: Algorithm,
    threads: usize,
    faithful_lock: bool,
) -> Result<MstResult, BenchError> {
    let protocol = if faithful_lock {
        LockProtocol::Literal
    } else {
        LockProtocol::Hardened
    };
    Ok(match algorithm {
        Algorithm::Seq => boruvka_seq(graph),
        Algorithm::SeqOpt => boruvka_seq_opt(graph),
        Algorithm::Kruskal => kruskal_oracle(graph),
        Algorithm::Lock => run_parallel(graph, Variant::Lock(protocol), threads)?.result,
        Algorithm::Cas => run_parallel(graph, Variant::Cas, threads)?.result,
    })
}

/// Loads the plan's graph and runs it.
pub fn run_bench(plan: &BenchPlan) -> Result<Vec<BenchRow>, BenchError> {
    plan.validate()?;
    let graph = plan.source.load()?;
    run_bench_on(&plan.source.name(), &graph, plan)
}

/// Runs every configuration of `plan` on an already loaded graph.
///
/// Every row must report the same tree weight; with `plan.verify` each trial
/// is also checked against a Kruskal tree computed once up front.
pub fn run_bench_on(
    name: &str,
    graph: &Graph,
    plan: &BenchPlan,
) -> Result<Vec<BenchRow>, BenchError> {
    plan.validate()?;
    let oracle = plan.verify.then(|| kruskal_oracle(graph));
    let configurations = plan.configurations();
    let mut rows: Vec<BenchRow> = Vec::new();

    for &(algorithm, threads) in &configurations {
        for _ in 0..plan.warmup {
            run_algorithm(graph, algorithm, threads, plan.faithful_lock)?;
        }
    }
    // Trials go round-robin over the configurations so that slow drift in
    // machine load is spread across all of them.
    for trial in 1..=plan.repetitions {
        for &(algorithm, threads) in &configurations {
            let result = run_algorithm(graph, algorithm, threads, plan.faithful_lock)?;
            if let Some(oracle) = &oracle {
                let report = verify_against(graph, &result, oracle)?;
                if !report.all_ok() {
                    return Err(BenchError::VerificationFailed {
                        algorithm,
                        threads,
                        trial,
                        report: report.to_string(),
                    });
                }
            }
            if let Some(first) = rows.first() {
                if first.mst_weight != result.total_weight {
                    return Err(BenchError::WeightMismatch {
                        algorithm,
                        threads,
                        got: result.total_weight,
                        expected: first.mst_weight,
                    });
                }
            }
            rows.push(BenchRow {
                graph: name.to_string(),
                algorithm,
                threads,
                trial,
                elapsed_ms: result.elapsed_ms(),
                mst_weight: result.total_weight,
                rounds: result.rounds,
                verified: oracle.is_some(),
            });
        }
    }
    Ok(rows)
}
