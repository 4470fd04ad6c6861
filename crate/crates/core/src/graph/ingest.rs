use std::collections::HashSet;
use std::io::BufRead;

use log::warn;
use serde::Serialize;

use super::{validate_token, DirectedGraph, EdgeStats, NodeTable, UndirectedGraph};
use crate::error::{Error, Result};

/// Line accounting for one ingested edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub lines: usize,
    pub skipped_lines: usize,
    pub edges_read: usize,
    pub duplicates: usize,
    pub self_loops: usize,
}

impl IngestReport {
    fn absorb(&mut self, stats: EdgeStats) {
        self.duplicates = stats.duplicates;
        self.self_loops = stats.self_loops;
    }
}

fn is_separator(c: char) -> bool {
    c == ',' || c.is_whitespace()
}

/// Splits a data line into fields; `None` for blank and comment lines.
pub(crate) fn split_fields(line: &str) -> Option<Vec<&str>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return None;
    }
    Some(trimmed.split(is_separator).filter(|f| !f.is_empty()).collect())
}

fn read_edges<R: BufRead>(reader: R) -> Result<(NodeTable, Vec<(usize, usize)>, IngestReport)> {
    let mut nodes = NodeTable::new();
    let mut edges = Vec::new();
    let mut report = IngestReport::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        report.lines += 1;
        let Some(fields) = split_fields(&line) else {
            report.skipped_lines += 1;
            continue;
        };
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::parse(
                lineno,
                format!("expected 2 or 3 fields, found {}", fields.len()),
            ));
        }
        for f in &fields[..2] {
            validate_token(f).map_err(|e| Error::parse(lineno, e.to_string()))?;
        }
        let u = nodes.intern(fields[0]);
        let v = nodes.intern(fields[1]);
        edges.push((u, v));
        report.edges_read += 1;
    }
    if report.edges_read == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok((nodes, edges, report))
}

/// Parses a directed edge list. Self-loops and repeated edges are dropped
/// and counted in the report.
pub fn ingest_directed<R: BufRead>(reader: R) -> Result<(DirectedGraph, IngestReport)> {
    let (nodes, edges, mut report) = read_edges(reader)?;
    let (g, stats) = DirectedGraph::from_edges(nodes, edges);
    report.absorb(stats);
    Ok((g, report))
}

/// Parses an undirected edge list; `a b` and `b a` are the same edge.
pub fn ingest_undirected<R: BufRead>(reader: R) -> Result<(UndirectedGraph, IngestReport)> {
    let (nodes, edges, mut report) = read_edges(reader)?;
    let (g, stats) = UndirectedGraph::from_edges(nodes, edges);
    report.absorb(stats);
    Ok((g, report))
}

/// Ordered list of distinct node tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SeedSet {
    members: Vec<String>,
}

impl SeedSet {
    /// Keeps the first occurrence of each token.
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut members = Vec::new();
        for tok in tokens {
            let tok = tok.into();
            validate_token(&tok)?;
            if seen.insert(tok.clone()) {
                members.push(tok);
            } else {
                warn!("duplicate seed `{tok}` ignored");
            }
        }
        Ok(SeedSet { members })
    }

    pub fn members(&self) -> &[String] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.members.is_empty() {
            return Err(Error::Config("seed set is empty".into()));
        }
        Ok(())
    }

    /// Internal indices of every member; fails on the first unknown token.
    pub fn resolve(&self, nodes: &NodeTable) -> Result<Vec<usize>> {
        self.members.iter().map(|t| nodes.resolve(t)).collect()
    }
}

/// One token per line; blank lines and `#` comments are skipped.
pub fn read_seed_file<R: BufRead>(reader: R) -> Result<SeedSet> {
    let mut tokens = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let Some(fields) = split_fields(&line) else {
            continue;
        };
        if fields.len() != 1 {
            return Err(Error::parse(i + 1, "expected one token per line"));
        }
        tokens.push(fields[0].to_owned());
    }
    SeedSet::new(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphView;

    #[test]
    fn directed_basic() {
        let (g, report) = ingest_directed("a b\nb c\n".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(report.edges_read, 2);
    }

    #[test]
    fn directed_duplicates_and_loops_counted() {
        let (g, report) = ingest_directed("a b\na b\na a\n".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(report.duplicates, 1);
        assert_eq!(report.self_loops, 1);
    }

    #[test]
    fn undirected_symmetric_dedup() {
        let (g, report) = ingest_undirected("a b\nb a\n".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(report.duplicates, 1);
    }

    #[test]
    fn undirected_triangle() {
        let (g, _) = ingest_undirected("a b\nb c\nc a\n".as_bytes()).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!((0..3).all(|u| g.degree(u) == 2));
    }

    #[test]
    fn separators_comments_and_weights() {
        let text = "# header\n\na\tb\nb,c\nc   d  7\n  # indented comment\nd , e\n";
        let (g, report) = ingest_directed(text.as_bytes()).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(report.skipped_lines, 3);
        assert_eq!(g.nodes().tokens(), ["a", "b", "c", "d", "e"]);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = ingest_directed("a b\nlonely\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = ingest_directed("a b\na b c d\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn hash_inside_token_rejected() {
        let err = ingest_undirected("a b#c\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_stream_is_error() {
        assert!(matches!(ingest_directed("".as_bytes()), Err(Error::EmptyGraph)));
        assert!(matches!(
            ingest_undirected("# only comments\n\n".as_bytes()),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn tokens_are_case_sensitive() {
        let (g, _) = ingest_undirected("A a\n".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 2);
    }

    #[test]
    fn seed_file_parsing() {
        let seeds = read_seed_file("# seeds\ns1\ns2\n\ns1\n".as_bytes()).unwrap();
        assert_eq!(seeds.members(), ["s1", "s2"]);
        assert!(read_seed_file("s1 s2\n".as_bytes()).is_err());
    }
}
