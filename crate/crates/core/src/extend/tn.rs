use std::collections::{BTreeMap, HashMap};

use log::warn;
use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{GraphView, NodeTable, SeedSet, UndirectedGraph};
use crate::paths::{bfs_distances, UNREACHABLE};

/// Which social edges the transition network keeps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TnEdgeMode {
    /// Only the edges of the chosen shortest paths.
    #[default]
    Path,
    /// Every social edge between two transition-network nodes.
    Induced,
}

/// Pairwise social distances between seeders plus one canonical shortest
/// path per reachable pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeederDistanceMatrix {
    seeders: Vec<String>,
    dist: Vec<Option<u32>>,
    /// Key `(i, j)` with `i < j`; path runs from `seeders[i]` to `seeders[j]`.
    paths: BTreeMap<(usize, usize), Vec<String>>,
    position: HashMap<String, usize>,
}

impl SeederDistanceMatrix {
    fn build(
        seeders: Vec<String>,
        dist: Vec<Option<u32>>,
        paths: BTreeMap<(usize, usize), Vec<String>>,
    ) -> Self {
        let position = seeders
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        SeederDistanceMatrix {
            seeders,
            dist,
            paths,
            position,
        }
    }

    pub fn seeders(&self) -> &[String] {
        &self.seeders
    }

    pub fn len(&self) -> usize {
        self.seeders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeders.is_empty()
    }

    pub fn position(&self, token: &str) -> Option<usize> {
        self.position.get(token).copied()
    }

    pub fn distance(&self, i: usize, j: usize) -> Option<u32> {
        self.dist[i * self.seeders.len() + j]
    }

    /// Canonical path from `seeders[i]` to `seeders[j]` as node tokens.
    pub fn path(&self, i: usize, j: usize) -> Option<Vec<String>> {
        if i == j {
            return Some(vec![self.seeders[i].clone()]);
        }
        let (a, b) = (i.min(j), i.max(j));
        let p = self.paths.get(&(a, b))?;
        let mut p = p.clone();
        if i > j {
            p.reverse();
        }
        Some(p)
    }

    /// Reachable pairs `(i, j, d)` with `i < j`, in ascending order.
    pub fn reachable_pairs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        let k = self.seeders.len();
        (0..k).flat_map(move |i| {
            (i + 1..k).filter_map(move |j| self.distance(i, j).map(|d| (i, j, d)))
        })
    }

    pub fn unreachable_pair_count(&self) -> usize {
        let k = self.seeders.len();
        k * k.saturating_sub(1) / 2 - self.reachable_pairs().count()
    }

    /// Renames tokens through `rename` (seeders and path interiors alike);
    /// unmapped tokens are kept.
    pub fn relabel(&self, rename: &HashMap<String, String>) -> Self {
        let map = |t: &String| rename.get(t).cloned().unwrap_or_else(|| t.clone());
        let seeders = self.seeders.iter().map(map).collect();
        let paths = self
            .paths
            .iter()
            .map(|(&k, p)| (k, p.iter().map(map).collect()))
            .collect();
        SeederDistanceMatrix::build(seeders, self.dist.clone(), paths)
    }
}

#[derive(Debug, Clone)]
pub struct TransitionNetwork {
    pub tn: UndirectedGraph,
    pub matrix: SeederDistanceMatrix,
    pub unreachable_pairs: usize,
}

/// Walks parents from `target` back to the BFS root; the parent of `v` is
/// its smallest-index neighbor one level closer to the root.
fn canonical_path(osn: &UndirectedGraph, dist: &[u64], target: usize) -> Vec<usize> {
    let mut path = vec![target];
    let mut v = target;
    while dist[v] > 0 {
        let want = dist[v] - 1;
        v = *osn
            .neighbors(v)
            .iter()
            .find(|&&w| dist[w] == want)
            .expect("BFS layer has a predecessor");
        path.push(v);
    }
    path.reverse();
    path
}

/// Per-seeder BFS, canonical path selection and transition-network assembly.
///
/// For each reachable pair the path comes from the BFS tree rooted at the
/// lexicographically smaller seeder token.
pub fn extract_tn(
    osn: &UndirectedGraph,
    seeders: &SeedSet,
    mode: TnEdgeMode,
) -> Result<TransitionNetwork> {
    seeders.require_nonempty()?;
    let idx = seeders.resolve(osn.nodes())?;
    let tokens = seeders.members();
    let k = idx.len();

    // rows[i] = (distances to every seeder, paths to lexicographically larger seeders)
    let rows: Vec<(Vec<Option<u32>>, Vec<(usize, Vec<usize>)>)> = (0..k)
        .into_par_iter()
        .map(|i| {
            let dist = bfs_distances(osn, idx[i]);
            let to_seeders: Vec<Option<u32>> = idx
                .iter()
                .map(|&s| (dist[s] != UNREACHABLE).then(|| dist[s] as u32))
                .collect();
            let paths = (0..k)
                .filter(|&j| j != i && tokens[i] < tokens[j] && dist[idx[j]] != UNREACHABLE)
                .map(|j| (j, canonical_path(osn, &dist, idx[j])))
                .collect();
            (to_seeders, paths)
        })
        .collect();

    let mut dist = vec![None; k * k];
    let mut paths: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, (row, row_paths)) in rows.into_iter().enumerate() {
        for (j, d) in row.into_iter().enumerate() {
            dist[i * k + j] = d;
        }
        for (j, mut p) in row_paths {
            if i > j {
                p.reverse();
            }
            paths.insert((i.min(j), i.max(j)), p);
        }
    }

    let mut nodes = NodeTable::new();
    for t in tokens {
        nodes.intern(t);
    }
    let local = |nodes: &mut NodeTable, u: usize| nodes.intern(osn.nodes().token(u));
    let mut edges = Vec::new();
    for p in paths.values() {
        let mapped: Vec<usize> = p.iter().map(|&u| local(&mut nodes, u)).collect();
        edges.extend(mapped.windows(2).map(|w| (w[0], w[1])));
    }
    if mode == TnEdgeMode::Induced {
        edges.clear();
        for a in 0..nodes.len() {
            let ua = osn.nodes().resolve(nodes.token(a))?;
            for &ub in osn.neighbors(ua) {
                if let Some(b) = nodes.get(osn.nodes().token(ub)) {
                    if a < b {
                        edges.push((a, b));
                    }
                }
            }
        }
    }
    let tn = UndirectedGraph::from_edges(nodes, edges).0;

    let token_paths = paths
        .into_iter()
        .map(|(key, p)| {
            let p = p.iter().map(|&u| osn.nodes().token(u).to_owned()).collect();
            (key, p)
        })
        .collect();
    let matrix = SeederDistanceMatrix::build(tokens.to_vec(), dist, token_paths);
    let unreachable_pairs = matrix.unreachable_pair_count();
    if matrix.reachable_pairs().next().is_none() {
        warn!("no seeder pair is connected in the social graph; transition network is empty");
    }
    Ok(TransitionNetwork {
        tn,
        matrix,
        unreachable_pairs,
    })
}
