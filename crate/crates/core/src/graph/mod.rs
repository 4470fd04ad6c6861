//! Graph representations shared by every pipeline stage.
//!
//! Nodes carry an opaque external token and a dense internal index assigned
//! in first-seen order. Both graph kinds are simple: self-loops and
//! duplicate edges are removed at construction time and the number removed
//! is reported through [`EdgeStats`].

mod components;
pub(crate) mod ingest;

use std::collections::HashMap;
use std::io::{self, Write};

pub use components::{components, ComponentDecomposition, ComponentSize};
pub use ingest::{
    ingest_directed, ingest_undirected, read_seed_file, IngestReport, SeedSet,
};

use crate::error::{Error, Result};

/// Bidirectional token ↔ index table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeTable {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from tokens in index order. Duplicate tokens are rejected.
    pub fn from_tokens<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = NodeTable::new();
        for tok in tokens {
            let tok = tok.into();
            validate_token(&tok)?;
            if table.index.contains_key(&tok) {
                return Err(Error::Config(format!("duplicate node token `{tok}`")));
            }
            table.intern(&tok);
        }
        Ok(table)
    }

    /// Returns the index of `token`, assigning the next free index if unseen.
    pub fn intern(&mut self, token: &str) -> usize {
        if let Some(&i) = self.index.get(token) {
            return i;
        }
        let i = self.tokens.len();
        self.tokens.push(token.to_owned());
        self.index.insert(token.to_owned(), i);
        i
    }

    pub fn get(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn resolve(&self, token: &str) -> Result<usize> {
        self.get(token)
            .ok_or_else(|| Error::UnknownNode(token.to_owned()))
    }

    pub fn token(&self, index: usize) -> &str {
        &self.tokens[index]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub(crate) fn validate_token(token: &str) -> Result<()> {
    if token.is_empty() {
        return Err(Error::Config("empty node token".into()));
    }
    if token.chars().any(|c| c.is_whitespace() || c == '#' || c == ',') {
        return Err(Error::Config(format!(
            "node token `{token}` contains whitespace, ',' or '#'"
        )));
    }
    Ok(())
}

/// Counts of edges dropped while building a simple graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct EdgeStats {
    pub duplicates: usize,
    pub self_loops: usize,
}

/// Read-only adjacency view used by the algorithms that work on any graph kind.
pub trait GraphView: Sync {
    fn nodes(&self) -> &NodeTable;

    fn node_count(&self) -> usize {
        self.nodes().len()
    }

    /// Native edge count (directed edges for a digraph).
    fn edge_count(&self) -> usize;

    fn is_directed(&self) -> bool;

    /// Successors used for shortest-path distances.
    fn successors(&self, u: usize) -> &[usize];

    /// Calls `f` for every neighbor of `u` ignoring direction. A node may be
    /// reported twice for a digraph with a reciprocal pair.
    fn for_each_neighbor(&self, u: usize, f: impl FnMut(usize));

    /// Calls `f(u, v)` once per native edge.
    fn for_each_edge(&self, mut f: impl FnMut(usize, usize)) {
        for u in 0..self.node_count() {
            for &v in self.successors(u) {
                if self.is_directed() || u < v {
                    f(u, v);
                }
            }
        }
    }
}

/// Directed simple graph: the recommendation network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    nodes: NodeTable,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl DirectedGraph {
    /// Builds a digraph over `nodes` from index pairs, dropping self-loops
    /// and duplicates.
    pub fn from_edges(
        nodes: NodeTable,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> (Self, EdgeStats) {
        let n = nodes.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut stats = EdgeStats::default();
        let mut raw = 0usize;
        for (u, v) in edges {
            assert!(u < n && v < n, "edge endpoint out of range");
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            out_adj[u].push(v);
            raw += 1;
        }
        let mut edge_count = 0;
        for list in &mut out_adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        stats.duplicates = raw - edge_count;
        let mut in_adj = vec![Vec::new(); n];
        for (u, list) in out_adj.iter().enumerate() {
            for &v in list {
                in_adj[v].push(u);
            }
        }
        (
            DirectedGraph {
                nodes,
                out_adj,
                in_adj,
                edge_count,
            },
            stats,
        )
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        &self.in_adj[u]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_adj[u].len()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.in_adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    /// Symmetrized copy: `{u,v}` is an edge iff `u→v` or `v→u` was.
    pub fn to_undirected(&self) -> UndirectedGraph {
        let adj = self
            .out_adj
            .iter()
            .zip(&self.in_adj)
            .map(|(out, inc)| merge_sorted(out, inc))
            .collect();
        UndirectedGraph::from_sorted_adjacency(self.nodes.clone(), adj)
    }

    /// Subgraph on `tokens` (in the given order) with every edge whose
    /// endpoints are both listed.
    pub fn induced_subgraph<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Self> {
        let (table, map) = subgraph_table(&self.nodes, tokens)?;
        let mut edges = Vec::new();
        for (new_u, &old_u) in map.iter().enumerate() {
            for &old_v in &self.out_adj[old_u] {
                if let Some(new_v) = table.get(self.nodes.token(old_v)) {
                    edges.push((new_u, new_v));
                }
            }
        }
        Ok(DirectedGraph::from_edges(table, edges).0)
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{}\t{}", self.nodes.token(u), self.nodes.token(v))?;
        }
        Ok(())
    }
}

impl GraphView for DirectedGraph {
    fn nodes(&self) -> &NodeTable {
        &self.nodes
    }

    fn edge_count(&self) -> usize {
        self.edge_count
    }

    fn is_directed(&self) -> bool {
        true
    }

    fn successors(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    fn for_each_neighbor(&self, u: usize, mut f: impl FnMut(usize)) {
        self.out_adj[u].iter().chain(&self.in_adj[u]).for_each(|&v| f(v));
    }
}

/// Undirected simple graph: social network, transition network, or a
/// symmetrized recommendation network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    nodes: NodeTable,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl UndirectedGraph {
    pub fn from_edges(
        nodes: NodeTable,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> (Self, EdgeStats) {
        let n = nodes.len();
        let mut adj = vec![Vec::new(); n];
        let mut stats = EdgeStats::default();
        let mut raw = 0usize;
        for (u, v) in edges {
            assert!(u < n && v < n, "edge endpoint out of range");
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
            raw += 1;
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let g = Self::from_sorted_adjacency(nodes, adj);
        stats.duplicates = raw - g.edge_count;
        (g, stats)
    }

    /// `adj` must already be sorted, deduplicated, symmetric and loop-free.
    pub(crate) fn from_sorted_adjacency(nodes: NodeTable, adj: Vec<Vec<usize>>) -> Self {
        let total: usize = adj.iter().map(Vec::len).sum();
        debug_assert_eq!(total % 2, 0);
        UndirectedGraph {
            nodes,
            adj,
            edge_count: total / 2,
        }
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter().filter(move |&&v| u < v).map(move |&v| (u, v))
        })
    }

    pub fn induced_subgraph<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Self> {
        let (table, map) = subgraph_table(&self.nodes, tokens)?;
        let mut edges = Vec::new();
        for (new_u, &old_u) in map.iter().enumerate() {
            for &old_v in &self.adj[old_u] {
                if let Some(new_v) = table.get(self.nodes.token(old_v)) {
                    if new_u < new_v {
                        edges.push((new_u, new_v));
                    }
                }
            }
        }
        Ok(UndirectedGraph::from_edges(table, edges).0)
    }

    /// Subgraph induced by a set of internal indices, keeping their relative order.
    pub fn induced_by_indices(&self, members: &[usize]) -> Self {
        let tokens: Vec<&str> = members.iter().map(|&i| self.nodes.token(i)).collect();
        self.induced_subgraph(&tokens)
            .expect("indices come from this graph")
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{}\t{}", self.nodes.token(u), self.nodes.token(v))?;
        }
        Ok(())
    }
}

impl GraphView for UndirectedGraph {
    fn nodes(&self) -> &NodeTable {
        &self.nodes
    }

    fn edge_count(&self) -> usize {
        self.edge_count
    }

    fn is_directed(&self) -> bool {
        false
    }

    fn successors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    fn for_each_neighbor(&self, u: usize, mut f: impl FnMut(usize)) {
        self.adj[u].iter().for_each(|&v| f(v));
    }
}

fn subgraph_table<S: AsRef<str>>(
    nodes: &NodeTable,
    tokens: &[S],
) -> Result<(NodeTable, Vec<usize>)> {
    let mut table = NodeTable::new();
    let mut map = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let tok = tok.as_ref();
        let old = nodes.resolve(tok)?;
        if table.get(tok).is_none() {
            table.intern(tok);
            map.push(old);
        }
    }
    Ok((table, map))
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
