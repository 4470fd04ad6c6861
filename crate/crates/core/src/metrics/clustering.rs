use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{GraphView, UndirectedGraph};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringSummary {
    /// Mean local CC over every node; degree < 2 contributes 0.
    pub global_cc: f64,
    /// Mean local CC over nodes of degree >= 2, `None` if there are none.
    pub global_cc_degree2: Option<f64>,
    pub local: Vec<f64>,
    pub triangles: Vec<usize>,
    pub by_degree: Vec<(usize, f64)>,
}

fn count_common(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Triangles through `u`: edges among its neighbors.
fn node_triangles(g: &UndirectedGraph, u: usize) -> usize {
    let nu = g.neighbors(u);
    let twice: usize = nu.iter().map(|&v| count_common(nu, g.neighbors(v))).sum();
    twice / 2
}

/// Averages `value[u]` per degree class, ascending by degree.
fn mean_by_degree(
    g: &UndirectedGraph,
    mut value: impl FnMut(usize) -> Option<f64>,
) -> Vec<(usize, f64)> {
    let mut acc: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for u in 0..g.node_count() {
        if let Some(x) = value(u) {
            let slot = acc.entry(g.degree(u)).or_insert((0.0, 0));
            slot.0 += x;
            slot.1 += 1;
        }
    }
    acc.into_iter()
        .map(|(k, (sum, n))| (k, sum / n as f64))
        .collect()
}

pub fn clustering(g: &UndirectedGraph) -> ClusteringSummary {
    let n = g.node_count();
    let triangles: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|u| node_triangles(g, u))
        .collect();
    let local: Vec<f64> = (0..n)
        .map(|u| {
            let d = g.degree(u);
            if d < 2 {
                0.0
            } else {
                2.0 * triangles[u] as f64 / (d as f64 * (d as f64 - 1.0))
            }
        })
        .collect();
    let global_cc = if n == 0 {
        0.0
    } else {
        local.iter().sum::<f64>() / n as f64
    };
    let (sum2, n2) = (0..n)
        .filter(|&u| g.degree(u) >= 2)
        .fold((0.0, 0usize), |(s, c), u| (s + local[u], c + 1));
    let global_cc_degree2 = (n2 > 0).then(|| sum2 / n2 as f64);
    let by_degree = mean_by_degree(g, |u| Some(local[u]));
    ClusteringSummary {
        global_cc,
        global_cc_degree2,
        local,
        triangles,
        by_degree,
    }
}

/// Mean neighbor degree per degree class; isolated nodes are skipped.
pub fn knn_by_degree(g: &UndirectedGraph) -> Vec<(usize, f64)> {
    mean_by_degree(g, |u| {
        let nb = g.neighbors(u);
        if nb.is_empty() {
            return None;
        }
        let total: usize = nb.iter().map(|&v| g.degree(v)).sum();
        Some(total as f64 / nb.len() as f64)
    })
}
