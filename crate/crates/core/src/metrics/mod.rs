//! Structural metrics: degree distributions, clustering, path lengths,
//! assortativity (k_nn versus k), reciprocity, recommender behavior
//! classes and the sub-network size census.

mod behavior;
mod clustering;
mod paths;

use serde::Serialize;

pub use behavior::{
    classify_behavior, BehaviorClass, BehaviorSummary, BehaviorThresholds, RatioMode,
};
pub use clustering::{clustering, knn_by_degree, ClusteringSummary};
pub use paths::{path_metrics, PathMetrics, PathMode, DEFAULT_EXACT_LIMIT, DEFAULT_SAMPLED_SOURCES};

use crate::error::{Error, Result};
use crate::graph::{ComponentDecomposition, DirectedGraph, GraphView, UndirectedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeMode {
    In,
    Out,
    Total,
}

/// Per-node degree sequence for a chosen mode.
pub trait DegreeSequence {
    fn degree_sequence(&self, mode: DegreeMode) -> Result<Vec<usize>>;
}

impl DegreeSequence for DirectedGraph {
    fn degree_sequence(&self, mode: DegreeMode) -> Result<Vec<usize>> {
        let n = self.node_count();
        Ok(match mode {
            DegreeMode::In => (0..n).map(|u| self.in_degree(u)).collect(),
            DegreeMode::Out => (0..n).map(|u| self.out_degree(u)).collect(),
            DegreeMode::Total => (0..n)
                .map(|u| self.in_degree(u) + self.out_degree(u))
                .collect(),
        })
    }
}

impl DegreeSequence for UndirectedGraph {
    fn degree_sequence(&self, mode: DegreeMode) -> Result<Vec<usize>> {
        match mode {
            DegreeMode::Total => Ok(self.degrees()),
            _ => Err(Error::Domain(format!(
                "degree mode {mode:?} requires a directed graph"
            ))),
        }
    }
}

/// Empirical CDF of a degree sequence as ascending `(degree, P(D <= degree))`.
pub fn degree_ecdf<G: DegreeSequence>(g: &G, mode: DegreeMode) -> Result<Vec<(usize, f64)>> {
    Ok(ecdf_of(g.degree_sequence(mode)?))
}

pub(crate) fn ecdf_of(mut values: Vec<usize>) -> Vec<(usize, f64)> {
    values.sort_unstable();
    let n = values.len() as f64;
    let mut out: Vec<(usize, f64)> = Vec::new();
    for (i, &d) in values.iter().enumerate() {
        let p = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == d => last.1 = p,
            _ => out.push((d, p)),
        }
    }
    out
}

/// Fraction of directed edges whose reverse edge is also present.
pub fn reciprocity(g: &DirectedGraph) -> Result<f64> {
    if g.edge_count() == 0 {
        return Err(Error::Domain("reciprocity of a graph without edges".into()));
    }
    let mutual = g.edges().filter(|&(u, v)| g.has_edge(v, u)).count();
    Ok(mutual as f64 / g.edge_count() as f64)
}

/// One row of the cumulative sub-network census: percentages (0–100) of
/// components, vertices and edges held by components with at most `size`
/// vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubnetworkRow {
    pub size: usize,
    pub networks_pct: f64,
    pub vertices_pct: f64,
    pub edges_pct: f64,
    pub undirected_edges_pct: f64,
}

pub fn subnetwork_table(dec: &ComponentDecomposition) -> Result<Vec<SubnetworkRow>> {
    if dec.is_empty() {
        return Err(Error::Domain("empty component decomposition".into()));
    }
    let mut sizes = dec.sizes().to_vec();
    sizes.sort_by_key(|s| s.vertices);
    let total_c = sizes.len() as f64;
    let total_v: usize = sizes.iter().map(|s| s.vertices).sum();
    let total_e: usize = sizes.iter().map(|s| s.edges).sum();
    let total_u: usize = sizes.iter().map(|s| s.undirected_edges).sum();
    let pct = |part: usize, whole: usize| {
        if whole == 0 {
            0.0
        } else {
            100.0 * part as f64 / whole as f64
        }
    };
    let mut rows = Vec::new();
    let (mut c, mut v, mut e, mut ue) = (0usize, 0usize, 0usize, 0usize);
    for (i, s) in sizes.iter().enumerate() {
        c += 1;
        v += s.vertices;
        e += s.edges;
        ue += s.undirected_edges;
        let last_of_size = sizes.get(i + 1).map_or(true, |n| n.vertices != s.vertices);
        if last_of_size {
            rows.push(SubnetworkRow {
                size: s.vertices,
                networks_pct: 100.0 * c as f64 / total_c,
                vertices_pct: pct(v, total_v),
                edges_pct: pct(e, total_e),
                undirected_edges_pct: pct(ue, total_u),
            });
        }
    }
    Ok(rows)
}

/// The full metric suite for one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub vertices: usize,
    pub edges: usize,
    pub diameter: u64,
    pub avg_path_length: f64,
    pub reachable_pairs: u64,
    pub global_cc: f64,
    /// Mean local CC over nodes with degree >= 2 only.
    pub global_cc_degree2: Option<f64>,
    pub reciprocity: Option<f64>,
    pub degree_ecdf: Vec<(usize, f64)>,
    pub cc_by_degree: Vec<(usize, f64)>,
    pub knn_by_degree: Vec<(usize, f64)>,
    pub mode: PathMode,
}

impl MetricsReport {
    pub fn for_undirected(g: &UndirectedGraph, mode: PathMode) -> Result<Self> {
        let paths = path_metrics(g, mode)?;
        let cc = clustering(g);
        Ok(MetricsReport {
            vertices: g.node_count(),
            edges: g.edge_count(),
            diameter: paths.diameter,
            avg_path_length: paths.avg_path_length,
            reachable_pairs: paths.reachable_pairs,
            global_cc: cc.global_cc,
            global_cc_degree2: cc.global_cc_degree2,
            reciprocity: None,
            degree_ecdf: degree_ecdf(g, DegreeMode::Total)?,
            cc_by_degree: cc.by_degree,
            knn_by_degree: knn_by_degree(g),
            mode: paths.mode,
        })
    }

    /// Directed distances for paths; clustering and k_nn on the
    /// symmetrized graph.
    pub fn for_directed(g: &DirectedGraph, mode: PathMode) -> Result<Self> {
        let paths = path_metrics(g, mode)?;
        let sym = g.to_undirected();
        let cc = clustering(&sym);
        Ok(MetricsReport {
            vertices: g.node_count(),
            edges: g.edge_count(),
            diameter: paths.diameter,
            avg_path_length: paths.avg_path_length,
            reachable_pairs: paths.reachable_pairs,
            global_cc: cc.global_cc,
            global_cc_degree2: cc.global_cc_degree2,
            reciprocity: Some(reciprocity(g)?),
            degree_ecdf: degree_ecdf(g, DegreeMode::Total)?,
            cc_by_degree: cc.by_degree,
            knn_by_degree: knn_by_degree(&sym),
            mode: paths.mode,
        })
    }
}
