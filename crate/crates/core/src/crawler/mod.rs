//! Level-bounded breadth-first crawl over a [`FriendProvider`].
//!
//! Seeds sit at depth 0. A level-`L` crawl expands every node at depth
//! `< L` in first-discovered order and records every edge returned by a
//! lookup, so the observed vertex set is the depth-`<= L` ball around the
//! seeds.

mod checkpoint;
mod provider;

use std::collections::HashSet;
use std::path::PathBuf;

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

pub use provider::{serve_friends, FriendProvider, GraphProvider, RemoteOptions, RemoteProvider};

use crate::error::{Error, ProviderError, Result};
use crate::graph::{NodeTable, SeedSet, UndirectedGraph};

pub const DEFAULT_CHECKPOINT_EVERY: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrawlOptions {
    /// Fetch each level's frontier in parallel; results are applied in
    /// the same order as the serial crawl.
    pub concurrent: bool,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: usize,
    /// Continue from `checkpoint` when that file exists.
    pub resume: bool,
}

impl Default for CrawlOptions {
    fn default() -> Self {
        CrawlOptions {
            concurrent: false,
            checkpoint: None,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
            resume: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub level: u32,
    /// Lookups issued for nodes at depth `level - 1`.
    pub expanded_count: usize,
    pub failed: usize,
    /// Nodes first seen at depth `level`.
    pub new_vertices: usize,
    /// Cumulative vertices (seeds included) after this level.
    pub discovered_vertices: usize,
    pub discovered_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrawlStats {
    pub seeds: usize,
    pub levels: Vec<LevelStats>,
    pub total_vertices: usize,
    pub total_edges: usize,
    pub failed_lookups: usize,
}

#[derive(Debug, Clone)]
pub struct CrawlOutput {
    pub observed: UndirectedGraph,
    /// BFS depth of every observed node, by observed index.
    pub depth: Vec<u32>,
    pub stats: CrawlStats,
    /// Non-seed nodes whose lookup failed.
    pub failed: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pending,
    Expanded,
    Failed,
}

struct CrawlState {
    levels: u32,
    nodes: NodeTable,
    depth: Vec<u32>,
    status: Vec<Status>,
    /// `(u, v, level)` with `u < v`; level is the expanding node's depth plus one.
    edges: Vec<(usize, usize, u32)>,
    edge_set: HashSet<(usize, usize)>,
    cursor: usize,
}

impl CrawlState {
    fn new(levels: u32, seeds: &SeedSet) -> Self {
        let mut nodes = NodeTable::new();
        for s in seeds.members() {
            nodes.intern(s);
        }
        let k = nodes.len();
        CrawlState {
            levels,
            nodes,
            depth: vec![0; k],
            status: vec![Status::Pending; k],
            edges: Vec::new(),
            edge_set: HashSet::new(),
            cursor: 0,
        }
    }

    fn restore(
        levels: u32,
        nodes: NodeTable,
        depth: Vec<u32>,
        status: Vec<Status>,
        edges: Vec<(usize, usize, u32)>,
        cursor: usize,
    ) -> Self {
        let edge_set = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        CrawlState {
            levels,
            nodes,
            depth,
            status,
            edges,
            edge_set,
            cursor,
        }
    }

    fn matches(&self, levels: u32, seeds: &SeedSet) -> bool {
        self.levels == levels
            && self.nodes.len() >= seeds.len()
            && seeds
                .members()
                .iter()
                .enumerate()
                .all(|(i, s)| self.nodes.token(i) == s && self.depth[i] == 0)
    }

    /// Next node to expand, if any remain within the level bound.
    fn next(&self) -> Option<usize> {
        (self.cursor < self.nodes.len() && self.depth[self.cursor] < self.levels).then_some(self.cursor)
    }

    /// End of the run of nodes sharing the cursor's depth.
    fn frontier_end(&self) -> usize {
        let d = self.depth[self.cursor];
        (self.cursor..self.nodes.len())
            .find(|&i| self.depth[i] != d)
            .unwrap_or(self.nodes.len())
    }

    fn apply(&mut self, u: usize, result: std::result::Result<Vec<String>, ProviderError>) -> Result<()> {
        debug_assert_eq!(u, self.cursor);
        self.cursor += 1;
        let token = self.nodes.token(u).to_owned();
        let list = match result {
            Ok(list) => list,
            Err(source) if self.depth[u] == 0 => return Err(Error::Provider { token, source }),
            Err(e) => {
                warn!("lookup of `{token}` failed ({e}); treating as leaf");
                self.status[u] = Status::Failed;
                return Ok(());
            }
        };
        self.status[u] = Status::Expanded;
        let next = self.depth[u] + 1;
        for f in &list {
            if *f == token {
                warn!("`{token}` lists itself as a friend; ignored");
                continue;
            }
            let v = match self.nodes.get(f) {
                Some(v) => v,
                None => {
                    let v = self.nodes.intern(f);
                    self.depth.push(next);
                    self.status.push(Status::Pending);
                    v
                }
            };
            let key = (u.min(v), u.max(v));
            if self.edge_set.insert(key) {
                self.edges.push((key.0, key.1, next));
            }
        }
        Ok(())
    }

    fn stats(&self) -> CrawlStats {
        let mut levels = Vec::with_capacity(self.levels as usize);
        for level in 1..=self.levels {
            let at = |d: u32| (0..self.nodes.len()).filter(move |&i| self.depth[i] == d);
            levels.push(LevelStats {
                level,
                expanded_count: at(level - 1).filter(|&i| self.status[i] != Status::Pending).count(),
                failed: at(level - 1).filter(|&i| self.status[i] == Status::Failed).count(),
                new_vertices: at(level).count(),
                discovered_vertices: self.depth.iter().filter(|&&d| d <= level).count(),
                discovered_edges: self.edges.iter().filter(|e| e.2 <= level).count(),
            });
        }
        CrawlStats {
            seeds: self.depth.iter().filter(|&&d| d == 0).count(),
            levels,
            total_vertices: self.nodes.len(),
            total_edges: self.edges.len(),
            failed_lookups: self.status.iter().filter(|&&s| s == Status::Failed).count(),
        }
    }

    fn into_output(self) -> CrawlOutput {
        let stats = self.stats();
        let failed = (0..self.nodes.len())
            .filter(|&i| self.status[i] == Status::Failed)
            .map(|i| self.nodes.token(i).to_owned())
            .collect();
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v, _)| (u, v)).collect();
        CrawlOutput {
            observed: UndirectedGraph::from_edges(self.nodes, edges).0,
            depth: self.depth,
            stats,
            failed,
        }
    }
}

fn run<P: FriendProvider + ?Sized>(
    provider: &P,
    seeds: &SeedSet,
    levels: u32,
    options: &CrawlOptions,
    mut on_step: impl FnMut(&CrawlState),
) -> Result<CrawlState> {
    seeds.require_nonempty()?;
    if levels < 1 {
        return Err(Error::Config("crawl needs at least one level".into()));
    }
    if options.checkpoint_every == 0 {
        return Err(Error::Config("checkpoint interval must be positive".into()));
    }
    let mut state = match &options.checkpoint {
        Some(path) if options.resume && path.exists() => {
            let s = checkpoint::load(path)?;
            if !s.matches(levels, seeds) {
                return Err(Error::Config(format!(
                    "checkpoint {} was written for different seeds or levels",
                    path.display()
                )));
            }
            info!("resuming crawl at node {} of {}", s.cursor, s.nodes.len());
            s
        }
        _ => CrawlState::new(levels, seeds),
    };
    on_step(&state);
    let mut since_checkpoint = 0;
    let after_apply = |state: &CrawlState, since: &mut usize| -> Result<()> {
        *since += 1;
        if let Some(path) = &options.checkpoint {
            if *since >= options.checkpoint_every {
                checkpoint::save(state, path)?;
                *since = 0;
            }
        }
        Ok(())
    };

    while let Some(u) = state.next() {
        if options.concurrent {
            let end = state.frontier_end();
            let tokens: Vec<String> = (u..end).map(|i| state.nodes.token(i).to_owned()).collect();
            let results: Vec<_> = tokens.par_iter().map(|t| provider.friends(t)).collect();
            for (i, r) in (u..end).zip(results) {
                state.apply(i, r)?;
                on_step(&state);
                after_apply(&state, &mut since_checkpoint)?;
            }
        } else {
            let r = provider.friends(state.nodes.token(u));
            state.apply(u, r)?;
            on_step(&state);
            after_apply(&state, &mut since_checkpoint)?;
        }
    }
    if let Some(path) = &options.checkpoint {
        checkpoint::save(&state, path)?;
    }
    Ok(state)
}

/// Crawls `levels` BFS levels out from `seeds`.
///
/// A failed lookup on a seed aborts the crawl; on any other node it is
/// logged and the node stays a leaf.
pub fn crawl<P: FriendProvider + ?Sized>(
    provider: &P,
    seeds: &SeedSet,
    levels: u32,
    options: &CrawlOptions,
) -> Result<CrawlOutput> {
    Ok(run(provider, seeds, levels, options, |_| {})?.into_output())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub expanded: usize,
    pub observed_vertices: usize,
    pub components: usize,
}

struct Dsu {
    parent: Vec<usize>,
    count: usize,
}

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
            self.count -= 1;
        }
    }
}

/// Component count of the observed graph after every expansion, starting
/// with the seeds alone.
pub fn crawl_component_trace<P: FriendProvider + ?Sized>(
    provider: &P,
    seeds: &SeedSet,
    levels: u32,
    options: &CrawlOptions,
) -> Result<(Vec<TraceStep>, CrawlOutput)> {
    let mut dsu = Dsu {
        parent: Vec::new(),
        count: 0,
    };
    let mut seen_edges = 0;
    let mut trace = Vec::new();
    let state = run(provider, seeds, levels, options, |s| {
        while dsu.parent.len() < s.nodes.len() {
            dsu.parent.push(dsu.parent.len());
            dsu.count += 1;
        }
        for &(u, v, _) in &s.edges[seen_edges..] {
            dsu.union(u, v);
        }
        seen_edges = s.edges.len();
        trace.push(TraceStep {
            expanded: s.cursor,
            observed_vertices: s.nodes.len(),
            components: dsu.count,
        });
    })?;
    Ok((trace, state.into_output()))
}
