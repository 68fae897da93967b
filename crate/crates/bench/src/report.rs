//! CSV rows: `graph,algorithm,threads,trial,elapsed_ms,mst_weight,rounds,verified`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::plan::Algorithm;
use crate::BenchError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub graph: String,
    pub algorithm: Algorithm,
    pub threads: usize,
    /// 1-based trial number within the configuration.
    pub trial: usize,
    pub elapsed_ms: f64,
    pub mst_weight: u128,
    pub rounds: usize,
    pub verified: bool,
}

pub fn write_rows<W: Write>(rows: &[BenchRow], writer: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        w.write_record([
            "graph",
            "algorithm",
            "threads",
            "trial",
            "elapsed_ms",
            "mst_weight",
            "rounds",
            "verified",
        ])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(reader: R) -> Result<Vec<BenchRow>, BenchError> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|r| r.map_err(BenchError::from))
        .collect()
}
