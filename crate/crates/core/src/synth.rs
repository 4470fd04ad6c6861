//! Seeded generators.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)`. A scenario
//! splits one seed into independent streams: 1 for the recommendation
//! forest, 2 for the social graph, 3 for seeder selection and placement.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extend::SeederMap;
use crate::graph::{DirectedGraph, GraphView, NodeTable, UndirectedGraph};

pub const STREAM_RN: u64 = 1;
pub const STREAM_OSN: u64 = 2;
pub const STREAM_SEEDERS: u64 = 3;

/// Reciprocity observed in the recommendation network.
pub const DEFAULT_RECIPROCITY: f64 = 0.65;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn numbered(prefix: &str, n: usize) -> NodeTable {
    NodeTable::from_tokens((0..n).map(|i| format!("{prefix}{i}"))).expect("generated tokens")
}

/// G(n, p) on tokens `0..n`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<UndirectedGraph> {
    er_with(&mut ChaCha8Rng::seed_from_u64(seed), n, p, "")
}

fn er_with(rng: &mut ChaCha8Rng, n: usize, p: f64, prefix: &str) -> Result<UndirectedGraph> {
    if n < 1 || !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("ER needs n >= 1 and p in [0, 1], got n={n}, p={p}")));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(UndirectedGraph::from_edges(numbered(prefix, n), edges).0)
}

/// Preferential attachment from `K_{m+1}` on tokens `0..n`.
pub fn gen_ba(n: usize, m: usize, seed: u64) -> Result<UndirectedGraph> {
    Ok(ba_with(&mut ChaCha8Rng::seed_from_u64(seed), n, m, "")?.0)
}

/// Returns the graph and its endpoint list (each node once per incident edge).
fn ba_with(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    prefix: &str,
) -> Result<(UndirectedGraph, Vec<usize>)> {
    if m < 1 || n <= m {
        return Err(Error::Config(format!("BA needs n > m >= 1, got n={n}, m={m}")));
    }
    let mut edges = Vec::with_capacity(m * (m + 1) / 2 + m * (n - m - 1));
    let mut ends = Vec::with_capacity(2 * edges.capacity());
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            ends.extend([u, v]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in m + 1..n {
        targets.clear();
        while targets.len() < m {
            let t = ends[rng.random_range(0..ends.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            ends.extend([t, v]);
        }
    }
    Ok((UndirectedGraph::from_edges(numbered(prefix, n), edges).0, ends))
}

/// Component-size histogram shaped like the observed recommendation census:
/// 1,600 components, about 70% of them pairs.
pub fn default_rn_histogram() -> BTreeMap<usize, usize> {
    let mut h: BTreeMap<usize, usize> = [
        (2, 1121),
        (3, 233),
        (4, 86),
        (5, 46),
        (6, 29),
        (7, 19),
        (8, 13),
        (9, 8),
        (10, 9),
    ]
    .into_iter()
    .collect();
    for s in 11..=23 {
        h.insert(s, 2);
    }
    for s in [26, 33, 40, 46, 59, 66, 77, 82, 92, 103] {
        h.insert(s, 1);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    StarOut,
    Chain,
    RandomTree,
}

/// Forest of recommendation components on tokens `r0..`.
///
/// Each component is a star (center recommends to everyone), a chain, or a
/// random recursive tree, with edges pointing away from the root. Every tree
/// edge then gains its reverse with probability `r / (2 - r)`, which puts the
/// expected reciprocity at `r`.
pub fn gen_rn_forest(
    histogram: &BTreeMap<usize, usize>,
    reciprocity: f64,
    seed: u64,
) -> Result<DirectedGraph> {
    forest_with(&mut ChaCha8Rng::seed_from_u64(seed), histogram, reciprocity)
}

fn forest_with(
    rng: &mut ChaCha8Rng,
    histogram: &BTreeMap<usize, usize>,
    reciprocity: f64,
) -> Result<DirectedGraph> {
    if histogram.values().all(|&c| c == 0) {
        return Err(Error::Config("component histogram is empty".into()));
    }
    if let Some((&s, _)) = histogram.iter().find(|(&s, &c)| s < 2 && c > 0) {
        return Err(Error::Config(format!("component sizes must be >= 2, got {s}")));
    }
    if !(0.0..=1.0).contains(&reciprocity) {
        return Err(Error::Config(format!("reciprocity must be in [0, 1], got {reciprocity}")));
    }
    let q = reciprocity / (2.0 - reciprocity);
    let total: usize = histogram.iter().map(|(s, c)| s * c).sum();
    let mut edges = Vec::new();
    let mut base = 0;
    for (&size, &count) in histogram {
        for _ in 0..count {
            let shape = match rng.random_range(0..3) {
                0 => Shape::StarOut,
                1 => Shape::Chain,
                _ => Shape::RandomTree,
            };
            for i in 1..size {
                let parent = match shape {
                    Shape::StarOut => 0,
                    Shape::Chain => i - 1,
                    Shape::RandomTree => rng.random_range(0..i),
                };
                let (u, v) = (base + parent, base + i);
                edges.push((u, v));
                if rng.random_bool(q) {
                    edges.push((v, u));
                }
            }
            base += size;
        }
    }
    Ok(DirectedGraph::from_edges(numbered("r", total), edges).0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum OsnModel {
    Er { n: usize, p: f64 },
    Ba { n: usize, m: usize },
}

impl OsnModel {
    pub fn node_count(&self) -> usize {
        match *self {
            OsnModel::Er { n, .. } | OsnModel::Ba { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", content = "value", rename_all = "lowercase")]
pub enum SeederCount {
    Count(usize),
    /// Fraction of recommenders, in `(0, 1]`.
    Fraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Uniform,
    /// Social node chosen with probability proportional to its degree.
    #[default]
    DegreeBiased,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSpec {
    pub rn_histogram: BTreeMap<usize, usize>,
    pub reciprocity: f64,
    pub osn_model: OsnModel,
    pub seeders: SeederCount,
    pub placement: Placement,
    pub seed: u64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            rn_histogram: default_rn_histogram(),
            reciprocity: DEFAULT_RECIPROCITY,
            osn_model: OsnModel::Ba { n: 50_000, m: 3 },
            seeders: SeederCount::Count(300),
            placement: Placement::DegreeBiased,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub rn: DirectedGraph,
    pub osn: UndirectedGraph,
    pub seeder_map: SeederMap,
}

/// Recommendation forest, social graph (tokens `o0..`) and a seeder map
/// placing chosen recommenders onto distinct social nodes.
pub fn scenario_generate(spec: &ScenarioSpec) -> Result<Scenario> {
    let rn = forest_with(&mut rng_for(spec.seed, STREAM_RN), &spec.rn_histogram, spec.reciprocity)?;
    let mut osn_rng = rng_for(spec.seed, STREAM_OSN);
    let (osn, ends) = match spec.osn_model {
        OsnModel::Er { n, p } => {
            let g = er_with(&mut osn_rng, n, p, "o")?;
            let ends = g.edges().flat_map(|(u, v)| [u, v]).collect();
            (g, ends)
        }
        OsnModel::Ba { n, m } => ba_with(&mut osn_rng, n, m, "o")?,
    };

    let recommenders: Vec<usize> = (0..rn.node_count()).filter(|&u| rn.out_degree(u) > 0).collect();
    let k = match spec.seeders {
        SeederCount::Count(k) => k,
        SeederCount::Fraction(f) => {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::Config(format!("seeder fraction must be in (0, 1], got {f}")));
            }
            ((f * recommenders.len() as f64).round() as usize).max(1)
        }
    };
    if k > recommenders.len() {
        return Err(Error::Config(format!(
            "{k} seeders requested but only {} recommenders exist",
            recommenders.len()
        )));
    }
    if k > osn.node_count() {
        return Err(Error::Config(format!(
            "{k} seeders requested but the social graph has {} nodes",
            osn.node_count()
        )));
    }

    let mut rng = rng_for(spec.seed, STREAM_SEEDERS);
    let mut chosen: Vec<usize> = index::sample(&mut rng, recommenders.len(), k)
        .into_iter()
        .map(|i| recommenders[i])
        .collect();
    chosen.sort_unstable();
    let spots: Vec<usize> = match spec.placement {
        Placement::Uniform => index::sample(&mut rng, osn.node_count(), k).into_vec(),
        Placement::DegreeBiased => {
            let connected = osn.degrees().iter().filter(|&&d| d > 0).count();
            if k > connected {
                return Err(Error::Config(format!(
                    "{k} degree-biased seeders requested but only {connected} social nodes have friends"
                )));
            }
            let mut seen = HashSet::with_capacity(k);
            let mut spots = Vec::with_capacity(k);
            while spots.len() < k {
                let o = ends[rng.random_range(0..ends.len())];
                if seen.insert(o) {
                    spots.push(o);
                }
            }
            spots
        }
    };
    let pairs = chosen
        .iter()
        .zip(&spots)
        .map(|(&r, &o)| (rn.nodes().token(r).to_owned(), osn.nodes().token(o).to_owned()))
        .collect();
    Ok(Scenario {
        rn,
        osn,
        seeder_map: SeederMap::new(pairs)?,
    })
}
