use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::tn::SeederDistanceMatrix;
use crate::error::{Error, Result};
use crate::graph::{components, DirectedGraph, GraphView, NodeTable, UndirectedGraph};
use crate::metrics::{clustering, path_metrics, PathMode};
use crate::paths::{dial_distances, ShortestPaths, UNREACHABLE};
use crate::powerlaw::fit_mle;

/// Validated build parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ErnConfig {
    /// Largest social distance turned into an edge.
    pub max_weight: u32,
    /// Hop cost of an original recommendation edge (0 or 1).
    pub rn_edge_cost: u32,
}

impl ErnConfig {
    pub fn new(max_weight: i64, rn_edge_cost: u32) -> Result<Self> {
        if max_weight < 0 {
            return Err(Error::Config(format!("K must be >= 0, got {max_weight}")));
        }
        if rn_edge_cost > 1 {
            return Err(Error::Config(format!(
                "recommendation edge cost must be 0 or 1, got {rn_edge_cost}"
            )));
        }
        let max_weight = u32::try_from(max_weight)
            .map_err(|_| Error::Config(format!("K too large: {max_weight}")))?;
        Ok(ErnConfig {
            max_weight,
            rn_edge_cost,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ErnEdge {
    pub u: usize,
    pub v: usize,
    /// 0 for recommendation edges, otherwise the social distance.
    pub origin_weight: u32,
    pub hop_cost: u32,
    /// Social distance of the pair when a recommendation edge already joins
    /// two seeders within `K`.
    pub osn_distance: Option<u32>,
}

/// Undirected extended recommendation network with integer hop costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    nodes: NodeTable,
    edges: Vec<ErnEdge>,
    cost_adj: Vec<Vec<(usize, u32)>>,
    simple: UndirectedGraph,
    max_cost: u32,
}

impl WeightedGraph {
    fn new(nodes: NodeTable, edges: Vec<ErnEdge>) -> Self {
        let n = nodes.len();
        let mut cost_adj = vec![Vec::new(); n];
        let mut max_cost = 0;
        for e in &edges {
            cost_adj[e.u].push((e.v, e.hop_cost));
            cost_adj[e.v].push((e.u, e.hop_cost));
            max_cost = max_cost.max(e.hop_cost);
        }
        for list in &mut cost_adj {
            list.sort_unstable();
        }
        let simple =
            UndirectedGraph::from_edges(nodes.clone(), edges.iter().map(|e| (e.u, e.v))).0;
        WeightedGraph {
            nodes,
            edges,
            cost_adj,
            simple,
            max_cost,
        }
    }

    pub fn nodes(&self) -> &NodeTable {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[ErnEdge] {
        &self.edges
    }

    /// Same vertices and edges without weights.
    pub fn as_unweighted(&self) -> &UndirectedGraph {
        &self.simple
    }

    /// Edge count per origin weight, index = weight.
    pub fn weight_counts(&self) -> Vec<usize> {
        let top = self.edges.iter().map(|e| e.origin_weight).max().unwrap_or(0);
        let mut counts = vec![0; top as usize + 1];
        for e in &self.edges {
            counts[e.origin_weight as usize] += 1;
        }
        counts
    }

    /// Subgraph on `members` (internal indices) keeping edge metadata.
    pub fn induced_by_indices(&self, members: &[usize]) -> Self {
        let mut table = NodeTable::new();
        let mut remap = HashMap::with_capacity(members.len());
        for &m in members {
            remap.insert(m, table.intern(self.nodes.token(m)));
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                let (u, v) = (*remap.get(&e.u)?, *remap.get(&e.v)?);
                Some(ErnEdge { u, v, ..*e })
            })
            .collect();
        WeightedGraph::new(table, edges)
    }

    /// `u<TAB>v<TAB>origin_weight` per edge; the third field is ignored on
    /// ingestion, so the file also reads back as the unweighted graph.
    pub fn write_edge_list<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.edges {
            let (u, v) = (self.nodes.token(e.u), self.nodes.token(e.v));
            writeln!(out, "{u}\t{v}\t{}", e.origin_weight)?;
        }
        Ok(())
    }
}

impl ShortestPaths for WeightedGraph {
    fn path_node_count(&self) -> usize {
        self.nodes.len()
    }

    fn distances_from(&self, src: usize) -> Vec<u64> {
        dial_distances(&self.cost_adj, src, self.max_cost)
    }

    fn is_symmetric(&self) -> bool {
        true
    }
}

/// Collapsed recommendation edges plus one seeder–seeder edge per pair at
/// social distance `1..=K` that is not already recommending each other.
///
/// `matrix` must carry recommendation-network tokens (see
/// [`SeederDistanceMatrix::relabel`]).
pub fn build_ern(
    rn: &DirectedGraph,
    matrix: &SeederDistanceMatrix,
    config: ErnConfig,
) -> Result<WeightedGraph> {
    let seeder_idx: Vec<usize> = matrix
        .seeders()
        .iter()
        .map(|t| rn.nodes().resolve(t))
        .collect::<Result<_>>()?;
    let und = rn.to_undirected();
    let mut edges: Vec<ErnEdge> = und
        .edges()
        .map(|(u, v)| ErnEdge {
            u,
            v,
            origin_weight: 0,
            hop_cost: config.rn_edge_cost,
            osn_distance: None,
        })
        .collect();
    let mut rn_edge_at: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        rn_edge_at.insert((e.u, e.v), i);
    }
    for (i, j, d) in matrix.reachable_pairs() {
        if d == 0 || d > config.max_weight {
            continue;
        }
        let (a, b) = (seeder_idx[i], seeder_idx[j]);
        let key = (a.min(b), a.max(b));
        match rn_edge_at.get(&key) {
            Some(&at) => edges[at].osn_distance = Some(d),
            None => edges.push(ErnEdge {
                u: key.0,
                v: key.1,
                origin_weight: d,
                hop_cost: d,
                osn_distance: Some(d),
            }),
        }
    }
    Ok(WeightedGraph::new(rn.nodes().clone(), edges))
}

/// One row of the per-K table, computed on the largest component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErnRow {
    pub k: u32,
    pub vertices: usize,
    pub edges: usize,
    pub avg_path_length: f64,
    pub diameter: u64,
    pub global_cc: f64,
    /// `x_min = 1` fit of the component's degree sequence.
    pub alpha: Option<f64>,
    /// Edges of the component per origin weight, index = weight, length `k + 1`.
    pub weight_counts: Vec<usize>,
    /// Recommendation components holding at least one seeder.
    pub seeder_components: usize,
    /// Of those, how many ended up inside this largest component.
    pub seeder_components_in_giant: usize,
    pub mode: PathMode,
}

/// Each column as a percentage of its largest value across rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeRow {
    pub k: u32,
    pub vertices_pct: f64,
    pub edges_pct: f64,
    pub avg_path_length_pct: f64,
    pub global_cc_pct: f64,
    pub diameter_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErnSeries {
    /// The recommendation network alone (`K = 0`).
    pub baseline: ErnRow,
    pub rows: Vec<ErnRow>,
    pub relative: Vec<RelativeRow>,
}

fn summarize(
    ern: &WeightedGraph,
    k: u32,
    rn_component: &[usize],
    seeder_rn_comps: &HashSet<usize>,
    seeder_idx: &[usize],
    exact_limit: usize,
    sample: (usize, u64),
) -> Result<ErnRow> {
    let dec = components(ern.as_unweighted());
    let members = dec.members(0);
    let giant = ern.induced_by_indices(&members);
    let mode = PathMode::auto(giant.node_count(), exact_limit, sample.0, sample.1);
    let (apl, diameter) = match path_metrics(&giant, mode) {
        Ok(p) => (p.avg_path_length, p.diameter),
        Err(Error::Domain(_)) => (0.0, 0),
        Err(e) => return Err(e),
    };
    let cc = clustering(giant.as_unweighted());
    let degrees: Vec<u64> = giant
        .as_unweighted()
        .degrees()
        .into_iter()
        .map(|d| d as u64)
        .collect();
    let alpha = fit_mle(&degrees, 1, None).ok().map(|f| f.alpha);
    let mut weight_counts = giant.weight_counts();
    weight_counts.resize(k as usize + 1, 0);
    let in_giant: HashSet<usize> = seeder_idx
        .iter()
        .filter(|&&s| dec.component_of(s) == 0)
        .map(|&s| rn_component[s])
        .collect();
    Ok(ErnRow {
        k,
        vertices: giant.node_count(),
        edges: giant.edge_count(),
        avg_path_length: apl,
        diameter,
        global_cc: cc.global_cc,
        alpha,
        weight_counts,
        seeder_components: seeder_rn_comps.len(),
        seeder_components_in_giant: in_giant.len(),
        mode,
    })
}

/// Largest-component statistics of `ERN_K` for `K = 1..=k_max`.
///
/// Path metrics are exact up to `exact_limit` vertices and sampled from
/// `sample.0` sources with seed `sample.1` above that.
pub fn ern_series(
    rn: &DirectedGraph,
    matrix: &SeederDistanceMatrix,
    k_max: u32,
    rn_edge_cost: u32,
    exact_limit: usize,
    sample: (usize, u64),
) -> Result<ErnSeries> {
    if k_max < 1 {
        return Err(Error::Config("K_max must be at least 1".into()));
    }
    let seeder_idx: Vec<usize> = matrix
        .seeders()
        .iter()
        .map(|t| rn.nodes().resolve(t))
        .collect::<Result<_>>()?;
    let rn_dec = components(rn);
    let rn_component = rn_dec.assignment().to_vec();
    let seeder_rn_comps: HashSet<usize> = seeder_idx.iter().map(|&s| rn_component[s]).collect();

    let row_for = |k: u32| -> Result<ErnRow> {
        let ern = build_ern(rn, matrix, ErnConfig::new(k as i64, rn_edge_cost)?)?;
        summarize(
            &ern,
            k,
            &rn_component,
            &seeder_rn_comps,
            &seeder_idx,
            exact_limit,
            sample,
        )
    };
    let baseline = row_for(0)?;
    let rows: Vec<ErnRow> = (1..=k_max).map(row_for).collect::<Result<_>>()?;

    let max_of = |f: &dyn Fn(&ErnRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let pct = |x: f64, m: f64| if m > 0.0 { 100.0 * x / m } else { 0.0 };
    let mv = max_of(&|r| r.vertices as f64);
    let me = max_of(&|r| r.edges as f64);
    let ma = max_of(&|r| r.avg_path_length);
    let mc = max_of(&|r| r.global_cc);
    let md = max_of(&|r| r.diameter as f64);
    let relative = rows
        .iter()
        .map(|r| RelativeRow {
            k: r.k,
            vertices_pct: pct(r.vertices as f64, mv),
            edges_pct: pct(r.edges as f64, me),
            avg_path_length_pct: pct(r.avg_path_length, ma),
            global_cc_pct: pct(r.global_cc, mc),
            diameter_pct: pct(r.diameter as f64, md),
        })
        .collect();
    Ok(ErnSeries {
        baseline,
        rows,
        relative,
    })
}

/// Replaces every added edge of weight `2..=k` by the interior nodes and
/// unit edges of its canonical social path. Recommendation edges and
/// weight-1 edges stay as unit edges; added edges heavier than `k` are
/// left out. Social tokens that coincide with recommendation tokens denote
/// the same person.
pub fn expand_ern(
    ern: &WeightedGraph,
    matrix: &SeederDistanceMatrix,
    k: u32,
) -> Result<UndirectedGraph> {
    let mut nodes = ern.nodes().clone();
    let mut edges = Vec::with_capacity(ern.edge_count());
    for e in ern.edges() {
        if e.origin_weight > k {
            continue;
        }
        if e.origin_weight < 2 {
            edges.push((e.u, e.v));
            continue;
        }
        let (tu, tv) = (ern.nodes().token(e.u), ern.nodes().token(e.v));
        let missing = || Error::Consistency(format!("no canonical path for seeders `{tu}`–`{tv}`"));
        let i = matrix.position(tu).ok_or_else(missing)?;
        let j = matrix.position(tv).ok_or_else(missing)?;
        let path = matrix.path(i, j).ok_or_else(missing)?;
        if path.len() != e.origin_weight as usize + 1 {
            return Err(Error::Consistency(format!(
                "path `{tu}`–`{tv}` has {} hops but the edge weight is {}",
                path.len() - 1,
                e.origin_weight
            )));
        }
        let ids: Vec<usize> = path.iter().map(|t| nodes.intern(t)).collect();
        edges.extend(ids.windows(2).map(|w| (w[0], w[1])));
    }
    Ok(UndirectedGraph::from_edges(nodes, edges).0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeederApl {
    pub mean: f64,
    pub reachable_pairs: usize,
    pub unreachable_pairs: usize,
}

/// Mean shortest-path length between seeders (unordered pairs on symmetric
/// graphs, ordered pairs otherwise).
pub fn seeder_apl<G: ShortestPaths + ?Sized>(g: &G, seeders: &[usize]) -> Result<SeederApl> {
    if seeders.len() < 2 {
        return Err(Error::Domain("seeder APL needs at least two seeders".into()));
    }
    let symmetric = g.is_symmetric();
    let mut sum: u128 = 0;
    let (mut reach, mut unreach) = (0usize, 0usize);
    for (a, &s) in seeders.iter().enumerate() {
        let dist = g.distances_from(s);
        for (b, &t) in seeders.iter().enumerate() {
            if a == b || (symmetric && b < a) {
                continue;
            }
            match dist[t] {
                UNREACHABLE => unreach += 1,
                d => {
                    sum += d as u128;
                    reach += 1;
                }
            }
        }
    }
    if reach == 0 {
        return Err(Error::Domain("no reachable seeder pair".into()));
    }
    Ok(SeederApl {
        mean: sum as f64 / reach as f64,
        reachable_pairs: reach,
        unreachable_pairs: unreach,
    })
}
