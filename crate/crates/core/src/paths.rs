//! Single-source shortest paths: BFS for unit-cost graphs and a bucket
//! queue (Dial's algorithm) for small non-negative integer costs.

use std::collections::VecDeque;

use crate::graph::GraphView;

pub const UNREACHABLE: u64 = u64::MAX;

/// Anything that can produce single-source distances over its node indices.
pub trait ShortestPaths: Sync {
    fn path_node_count(&self) -> usize;

    /// Distances from `src`, [`UNREACHABLE`] for nodes that cannot be reached.
    fn distances_from(&self, src: usize) -> Vec<u64>;

    /// Whether `d(u,v) = d(v,u)` for every pair.
    fn is_symmetric(&self) -> bool;
}

impl<G: GraphView> ShortestPaths for G {
    fn path_node_count(&self) -> usize {
        self.node_count()
    }

    fn distances_from(&self, src: usize) -> Vec<u64> {
        bfs_distances(self, src)
    }

    fn is_symmetric(&self) -> bool {
        !self.is_directed()
    }
}

/// Unit-cost BFS along successor lists.
pub fn bfs_distances<G: GraphView + ?Sized>(g: &G, src: usize) -> Vec<u64> {
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut queue = VecDeque::new();
    dist[src] = 0;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in g.successors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Multi-source BFS depth from a set of roots.
pub fn bfs_depths<G: GraphView + ?Sized>(g: &G, roots: &[usize]) -> Vec<u64> {
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut queue = VecDeque::new();
    for &r in roots {
        if dist[r] == UNREACHABLE {
            dist[r] = 0;
            queue.push_back(r);
        }
    }
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in g.successors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Dial's algorithm over `adj[u] = [(v, cost)]` with every cost in
/// `0..=max_cost`. Zero-cost edges are allowed.
pub fn dial_distances(adj: &[Vec<(usize, u32)>], src: usize, max_cost: u32) -> Vec<u64> {
    let n = adj.len();
    let mut dist = vec![UNREACHABLE; n];
    let width = max_cost as usize + 1;
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); width];
    dist[src] = 0;
    buckets[0].push(src);
    let mut pending = 1usize;
    let mut current: u64 = 0;
    while pending > 0 {
        let slot = (current % width as u64) as usize;
        // Zero-cost relaxations push back into the slot being drained.
        while let Some(u) = buckets[slot].pop() {
            pending -= 1;
            if dist[u] != current {
                continue;
            }
            for &(v, cost) in &adj[u] {
                debug_assert!(cost <= max_cost);
                let cand = current + cost as u64;
                if cand < dist[v] {
                    dist[v] = cand;
                    buckets[(cand % width as u64) as usize].push(v);
                    pending += 1;
                }
            }
        }
        current += 1;
    }
    dist
}
