//! Median-based speedup tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::plan::Algorithm;
use crate::report::BenchRow;
use crate::BenchError;

/// Median of `values`; the mean of the middle pair for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupRow {
    pub graph: String,
    pub algorithm: Algorithm,
    pub threads: usize,
    pub median_ms: f64,
    /// Median seq time over this median.
    pub vs_seq: Option<f64>,
    pub vs_seq_opt: Option<f64>,
    /// Lock median over CAS median at the same worker count; CAS rows only.
    pub cas_vs_lock: Option<f64>,
}

/// Best speedups per graph, each with the worker count where it occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct Headline {
    pub graph: String,
    /// `(seq - seq_opt) / seq` in percent.
    pub seq_opt_gain_pct: Option<f64>,
    pub lock_vs_seq: Option<(f64, usize)>,
    pub lock_vs_seq_opt: Option<(f64, usize)>,
    pub cas_vs_seq: Option<(f64, usize)>,
    pub cas_vs_seq_opt: Option<(f64, usize)>,
    pub cas_vs_lock_at_4: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub rows: Vec<SpeedupRow>,
    pub headlines: Vec<Headline>,
}

type Key = (String, Algorithm, usize);

pub fn summarize_speedups(rows: &[BenchRow]) -> Result<Summary, BenchError> {
    let mut times: BTreeMap<Key, Vec<f64>> = BTreeMap::new();
    for r in rows {
        times
            .entry((r.graph.clone(), r.algorithm, r.threads))
            .or_default()
            .push(r.elapsed_ms);
    }
    let medians: BTreeMap<Key, f64> = times
        .into_iter()
        .filter_map(|(k, v)| median(&v).map(|m| (k, m)))
        .collect();
    let graphs: BTreeSet<&String> = medians.keys().map(|(g, _, _)| g).collect();

    let mut out = Summary {
        rows: Vec::new(),
        headlines: Vec::new(),
    };
    for graph in graphs {
        let get = |a: Algorithm, t: usize| medians.get(&(graph.clone(), a, t)).copied();
        let seq = get(Algorithm::Seq, 1);
        let seq_opt = get(Algorithm::SeqOpt, 1);
        let series: Vec<(Algorithm, usize, f64)> = medians
            .iter()
            .filter(|((g, _, _), _)| g == graph)
            .map(|((_, a, t), &m)| (*a, *t, m))
            .collect();
        let has_parallel = series.iter().any(|(a, _, _)| a.is_parallel());
        if has_parallel && seq.is_none() && seq_opt.is_none() {
            return Err(BenchError::MissingBaseline {
                graph: graph.clone(),
            });
        }

        let mut head = Headline {
            graph: graph.clone(),
            seq_opt_gain_pct: seq.zip(seq_opt).map(|(s, o)| (s - o) / s * 100.0),
            lock_vs_seq: None,
            lock_vs_seq_opt: None,
            cas_vs_seq: None,
            cas_vs_seq_opt: None,
            cas_vs_lock_at_4: None,
        };
        for (algorithm, threads, m) in series {
            let ratio = |base: Option<f64>| base.map(|b| b / m);
            let row = SpeedupRow {
                graph: graph.clone(),
                algorithm,
                threads,
                median_ms: m,
                vs_seq: ratio(seq),
                vs_seq_opt: ratio(seq_opt),
                cas_vs_lock: (algorithm == Algorithm::Cas)
                    .then(|| ratio(get(Algorithm::Lock, threads)))
                    .flatten(),
            };
            let (best_seq, best_opt) = match algorithm {
                Algorithm::Lock => (&mut head.lock_vs_seq, &mut head.lock_vs_seq_opt),
                Algorithm::Cas => (&mut head.cas_vs_seq, &mut head.cas_vs_seq_opt),
                _ => {
                    out.rows.push(row);
                    continue;
                }
            };
            keep_max(best_seq, row.vs_seq, threads);
            keep_max(best_opt, row.vs_seq_opt, threads);
            if algorithm == Algorithm::Cas && threads == 4 {
                head.cas_vs_lock_at_4 = row.cas_vs_lock;
            }
            out.rows.push(row);
        }
        out.headlines.push(head);
    }
    Ok(out)
}

fn keep_max(slot: &mut Option<(f64, usize)>, value: Option<f64>, threads: usize) {
    if let Some(v) = value {
        if slot.is_none_or(|(best, _)| v > best) {
            *slot = Some((v, threads));
        }
    }
}

fn opt(f: &mut fmt::Formatter<'_>, v: Option<f64>) -> fmt::Result {
    match v {
        Some(v) => write!(f, " {v:>9.2}"),
        None => write!(f, " {:>9}", "-"),
    }
}

fn best(v: Option<(f64, usize)>) -> String {
    v.map_or_else(|| "-".into(), |(s, t)| format!("{s:.2}x @ {t}"))
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14} {:<8} {:>7} {:>11} {:>9} {:>9} {:>9}",
            "graph", "algo", "threads", "median_ms", "vs_seq", "vs_opt", "cas/lock"
        )?;
        for r in &self.rows {
            write!(
                f,
                "{:<14} {:<8} {:>7} {:>11.3}",
                r.graph, r.algorithm, r.threads, r.median_ms
            )?;
            opt(f, r.vs_seq)?;
            opt(f, r.vs_seq_opt)?;
            opt(f, r.cas_vs_lock)?;
            writeln!(f)?;
        }
        for h in &self.headlines {
            writeln!(f)?;
            writeln!(f, "{}:", h.graph)?;
            match h.seq_opt_gain_pct {
                Some(p) => writeln!(f, "  seq-opt improvement over seq: {p:.1}%")?,
                None => writeln!(f, "  seq-opt improvement over seq: -")?,
            }
            writeln!(f, "  best lock vs seq:     {}", best(h.lock_vs_seq))?;
            writeln!(f, "  best lock vs seq-opt: {}", best(h.lock_vs_seq_opt))?;
            writeln!(f, "  best cas vs seq:      {}", best(h.cas_vs_seq))?;
            writeln!(f, "  best cas vs seq-opt:  {}", best(h.cas_vs_seq_opt))?;
            match h.cas_vs_lock_at_4 {
                Some(r) => writeln!(f, "  cas vs lock at 4 threads: {r:.2}x")?,
                None => writeln!(f, "  cas vs lock at 4 threads: -")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(algorithm: Algorithm, threads: usize, elapsed_ms: f64) -> BenchRow {
        BenchRow {
            graph: "g".into(),
            algorithm,
            threads,
            trial: 1,
            elapsed_ms,
            mst_weight: 10,
            rounds: 3,
            verified: false,
        }
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[3.0]), Some(3.0));
        assert_eq!(median(&[5.0, 1.0, 3.0]), Some(3.0));
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), Some(2.5));
    }

    #[test]
    fn speedup_arithmetic() {
        let rows = vec![
            row(Algorithm::Seq, 1, 100.0),
            row(Algorithm::Seq, 1, 120.0),
            row(Algorithm::Seq, 1, 80.0),
            row(Algorithm::SeqOpt, 1, 80.0),
            row(Algorithm::Lock, 2, 50.0),
            row(Algorithm::Lock, 4, 40.0),
            row(Algorithm::Cas, 2, 60.0),
            row(Algorithm::Cas, 4, 32.0),
        ];
        let s = summarize_speedups(&rows).unwrap();
        let h = &s.headlines[0];
        assert_eq!(h.seq_opt_gain_pct, Some(20.0));
        assert_eq!(h.lock_vs_seq, Some((2.5, 4)));
        assert_eq!(h.lock_vs_seq_opt, Some((2.0, 4)));
        assert_eq!(h.cas_vs_seq, Some((100.0 / 32.0, 4)));
        assert_eq!(h.cas_vs_lock_at_4, Some(1.25));
        let cas2 = s
            .rows
            .iter()
            .find(|r| r.algorithm == Algorithm::Cas && r.threads == 2)
            .unwrap();
        assert_eq!(cas2.cas_vs_lock, Some(50.0 / 60.0));
        assert!(s.to_string().contains("cas vs lock at 4 threads: 1.25x"));
    }

    #[test]
    fn missing_baseline() {
        let rows = vec![row(Algorithm::Cas, 2, 10.0)];
        assert!(matches!(
            summarize_speedups(&rows),
            Err(BenchError::MissingBaseline { .. })
        ));
        // seq-opt alone is enough of a baseline.
        let rows = vec![row(Algorithm::SeqOpt, 1, 10.0), row(Algorithm::Cas, 2, 5.0)];
        let s = summarize_speedups(&rows).unwrap();
        assert_eq!(s.headlines[0].cas_vs_seq, None);
        assert_eq!(s.headlines[0].cas_vs_seq_opt, Some((2.0, 2)));
    }
}
