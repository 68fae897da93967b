//! Plain-text graph files.
//!
//! ```text
//! <n> <m>
//! <src> <dest> <weight>     (m lines)
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Edge, Graph, GraphError};

fn parse_field<T: std::str::FromStr>(
    tok: Option<&str>,
    what: &str,
    line: usize,
) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Parse {
        line,
        reason: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        reason: format!("invalid {what} {tok:?}"),
    })
}

fn expect_end<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<(), GraphError> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(GraphError::Parse {
            line,
            reason: format!("unexpected trailing field {t:?}"),
        }),
    }
}

/// Parses and validates a graph from any reader.
pub fn read_graph<R: Read>(reader: R) -> Result<Graph, GraphError> {
    let mut lines = BufReader::new(reader).lines();

    let header = lines.next().transpose()?.ok_or(GraphError::Parse {
        line: 1,
        reason: "missing header".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n: usize = parse_field(toks.next(), "vertex count", 1)?;
    let m: usize = parse_field(toks.next(), "edge count", 1)?;
    expect_end(toks, 1)?;

    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let lineno = i + 2;
        let line = lines.next().transpose()?.ok_or_else(|| GraphError::Parse {
            line: lineno,
            reason: format!("expected {m} edges, found {i}"),
        })?;
        let mut toks = line.split_whitespace();
        let src = parse_field(toks.next(), "source vertex", lineno)?;
        let dest = parse_field(toks.next(), "destination vertex", lineno)?;
        let weight = parse_field(toks.next(), "weight", lineno)?;
        expect_end(toks, lineno)?;
        edges.push(Edge::new(src, dest, weight));
    }
    for (i, line) in lines.enumerate() {
        if !line?.trim().is_empty() {
            return Err(GraphError::Parse {
                line: m + 2 + i,
                reason: format!("more than {m} edge lines"),
            });
        }
    }

    let g = Graph::from_parts_unchecked(n, edges);
    g.validate()?;
    Ok(g)
}

pub fn write_graph<W: Write>(graph: &Graph, writer: W) -> std::io::Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "{} {}", graph.n(), graph.m())?;
    for e in graph.edges() {
        writeln!(w, "{} {} {}", e.src, e.dest, e.weight)?;
    }
    w.flush()
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    read_graph(File::open(path)?)
}

pub fn save_graph(graph: &Graph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    write_graph(graph, File::create(path)?)?;
    Ok(())
}
