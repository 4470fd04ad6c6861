use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::paths::{ShortestPaths, UNREACHABLE};

/// Graphs above this many nodes default to sampled path metrics.
pub const DEFAULT_EXACT_LIMIT: usize = 100_000;
pub const DEFAULT_SAMPLED_SOURCES: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PathMode {
    Exact,
    /// BFS/Dijkstra from `sources` seeded-uniform roots; results are estimates.
    Sampled { sources: usize, seed: u64 },
}

impl PathMode {
    /// Exact up to `exact_limit` nodes, sampled above.
    pub fn auto(node_count: usize, exact_limit: usize, sources: usize, seed: u64) -> Self {
        if node_count <= exact_limit {
            PathMode::Exact
        } else {
            PathMode::Sampled { sources, seed }
        }
    }

    pub fn is_estimate(&self) -> bool {
        matches!(self, PathMode::Sampled { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathMetrics {
    /// Largest finite shortest-path length (a lower bound when sampled).
    pub diameter: u64,
    /// Mean over reachable ordered pairs `u != v`.
    pub avg_path_length: f64,
    pub reachable_pairs: u64,
    pub distance_sum: u128,
    pub mode: PathMode,
}

#[derive(Debug, Clone, Copy, Default)]
struct SourceTotals {
    sum: u128,
    pairs: u64,
    ecc: u64,
    farthest: usize,
}

fn source_totals<G: ShortestPaths + ?Sized>(g: &G, src: usize) -> SourceTotals {
    let dist = g.distances_from(src);
    let mut t = SourceTotals {
        farthest: src,
        ..Default::default()
    };
    for (v, &d) in dist.iter().enumerate() {
        if v == src || d == UNREACHABLE {
            continue;
        }
        t.sum += d as u128;
        t.pairs += 1;
        if d > t.ecc {
            t.ecc = d;
            t.farthest = v;
        }
    }
    t
}

/// Diameter and average path length under `mode`.
pub fn path_metrics<G: ShortestPaths + ?Sized>(g: &G, mode: PathMode) -> Result<PathMetrics> {
    let n = g.path_node_count();
    if n == 0 {
        return Err(Error::Domain("path metrics of an empty graph".into()));
    }
    let (sources, sweep_start) = match mode {
        PathMode::Exact => ((0..n).collect::<Vec<_>>(), None),
        PathMode::Sampled { sources, seed } => {
            if sources == 0 {
                return Err(Error::Config("sampled mode needs at least one source".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = sources.min(n);
            let mut picked = index::sample(&mut rng, n, k).into_vec();
            let start = picked[rng.random_range(0..k)];
            picked.sort_unstable();
            (picked, Some(start))
        }
    };

    let per_source: Vec<SourceTotals> = sources
        .par_iter()
        .map(|&s| source_totals(g, s))
        .collect();
    let mut sum: u128 = 0;
    let mut pairs: u64 = 0;
    let mut diameter: u64 = 0;
    for t in &per_source {
        sum += t.sum;
        pairs += t.pairs;
        diameter = diameter.max(t.ecc);
    }

    if let Some(start) = sweep_start {
        // Double sweep: the eccentricity of the farthest node from a
        // start vertex is a diameter lower bound.
        let first = source_totals(g, start);
        let second = source_totals(g, first.farthest);
        diameter = diameter.max(first.ecc).max(second.ecc);
    }

    if pairs == 0 {
        return Err(Error::Domain(
            "average path length undefined: no reachable pairs".into(),
        ));
    }
    Ok(PathMetrics {
        diameter,
        avg_path_length: sum as f64 / pairs as f64,
        reachable_pairs: pairs,
        distance_sum: sum,
        mode,
    })
}
