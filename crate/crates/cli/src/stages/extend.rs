use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use ernkit::extend::{
    build_ern as build, ern_series as series, expand_ern as expand, extract_tn as extract, seeder_apl as apl,
    ErnConfig, SeederDistanceMatrix, SeederMap, TnEdgeMode, TransitionNetwork,
};
use ernkit::metrics::MetricsReport;
use ernkit::paths::ShortestPaths;
use ernkit::{components, DirectedGraph, GraphView, NodeTable, UndirectedGraph};
use serde::Serialize;
use serde_json::json;

use super::{config_err, mode_name, read_directed, read_undirected, write_graph, Artifact, PathArgs, PathChoice};
use crate::report::{Emitter, Inputs};
use crate::{usage, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TnModeChoice {
    /// Only edges on the chosen shortest paths.
    Path,
    /// Every social edge among transition-network nodes.
    Induced,
}

#[derive(Debug, Args, Serialize)]
pub struct SocialInputs {
    /// Social graph edge list.
    #[arg(long)]
    pub osn: PathBuf,
    /// `rn_token<TAB>osn_token` per line.
    #[arg(long)]
    pub seeders: PathBuf,
    #[arg(long, value_enum, default_value_t = TnModeChoice::Path)]
    pub tn_mode: TnModeChoice,
}

#[derive(Debug, Args, Serialize)]
pub struct PipelineInputs {
    /// Recommendation network edge list (directed).
    #[arg(long)]
    pub rn: PathBuf,
    #[command(flatten)]
    pub social: SocialInputs,
}

struct Social {
    osn: UndirectedGraph,
    map: SeederMap,
    tn: TransitionNetwork,
}

impl SocialInputs {
    fn load(&self, inputs: &mut Inputs) -> Result<Social> {
        let osn = read_undirected(inputs, "osn", &self.osn)?;
        let map = SeederMap::parse(inputs.read("seeders", &self.seeders)?.as_slice())
            .with_context(|| format!("parsing {}", self.seeders.display()))?;
        if map.is_empty() {
            return Err(anyhow::anyhow!("seeder map {} is empty", self.seeders.display()));
        }
        let mode = match self.tn_mode {
            TnModeChoice::Path => TnEdgeMode::Path,
            TnModeChoice::Induced => TnEdgeMode::Induced,
        };
        let tn = extract(&osn, &map.osn_seeds(), mode).context("extracting the transition network")?;
        Ok(Social { osn, map, tn })
    }
}

struct Pipeline {
    rn: DirectedGraph,
    social: Social,
    /// Seeder distances with recommendation-network tokens.
    matrix: SeederDistanceMatrix,
}

impl PipelineInputs {
    fn load(&self, inputs: &mut Inputs) -> Result<Pipeline> {
        let rn = read_directed(inputs, "rn", &self.rn)?;
        let social = self.social.load(inputs)?;
        let matrix = social.tn.matrix.relabel(&social.map.osn_to_rn());
        Ok(Pipeline { rn, social, matrix })
    }
}

fn mean_degree(g: &UndirectedGraph, nodes: impl Iterator<Item = usize>) -> f64 {
    let (mut sum, mut n) = (0usize, 0usize);
    for u in nodes {
        sum += g.degree(u);
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum as f64 / n as f64
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ExtractTnArgs {
    #[command(flatten)]
    pub social: SocialInputs,
    /// Write the transition network here.
    #[arg(long)]
    pub tn_out: Option<PathBuf>,
    /// Emit one record per reachable seeder pair.
    #[arg(long)]
    pub pairs: bool,
}

pub fn extract_tn(args: ExtractTnArgs, output: &Output) -> Result<()> {
    let mut inputs = Inputs::default();
    let s = args.social.load(&mut inputs)?;
    let mut em = Emitter::new("extract-tn", &args, &inputs)?;
    let m = &s.tn.matrix;
    let mut hist: BTreeMap<u32, usize> = BTreeMap::new();
    for (_, _, d) in m.reachable_pairs() {
        *hist.entry(d).or_insert(0) += 1;
    }
    let reachable: usize = hist.values().sum();
    let dist_sum: u64 = hist.iter().map(|(&d, &c)| d as u64 * c as u64).sum();
    let mode = Some(match args.social.tn_mode {
        TnModeChoice::Path => "path",
        TnModeChoice::Induced => "induced",
    });
    em.emit(
        "tn",
        "tn_summary",
        mode,
        json!({
            "seeders": m.len(),
            "vertices": s.tn.tn.node_count(),
            "edges": s.tn.tn.edge_count(),
            "reachable_pairs": reachable,
            "unreachable_pairs": s.tn.unreachable_pairs,
            "mean_distance": (reachable > 0).then(|| dist_sum as f64 / reachable as f64),
        }),
    )?;
    em.emit_rows(
        "tn",
        "distance_histogram",
        mode,
        hist.iter().map(|(&d, &c)| json!({ "distance": d, "pairs": c })),
    )?;
    let seeder_idx: Vec<usize> = s.map.osn_seeds().resolve(s.osn.nodes())?;
    let global = mean_degree(&s.osn, 0..s.osn.node_count());
    let seeder = mean_degree(&s.osn, seeder_idx.iter().copied());
    em.emit(
        "osn",
        "seeder_degree",
        None,
        json!({
            "seeder_mean_degree": seeder,
            "global_mean_degree": global,
            "ratio": if global > 0.0 { seeder / global } else { 0.0 },
        }),
    )?;
    if args.pairs {
        for (i, j, d) in m.reachable_pairs() {
            em.emit(
                "tn",
                "seeder_pair",
                mode,
                json!({
                    "a": m.seeders()[i],
                    "b": m.seeders()[j],
                    "distance": d,
                    "path": m.path(i, j),
                }),
            )?;
        }
    }
    if let Some(path) = &args.tn_out {
        let sha = write_graph(path, |b| s.tn.tn.write_edge_list(b))?;
        em.emit(
            "tn",
            "artifact",
            None,
            Artifact {
                role: "transition_network",
                path: path.display().to_string(),
                sha256: sha,
            },
        )?;
    }
    output.finish(em, "distance_histogram")
}

#[derive(Debug, Args, Serialize)]
pub struct BuildErnArgs {
    #[command(flatten)]
    pub inputs: PipelineInputs,
    /// Largest social distance turned into an edge.
    #[arg(long)]
    pub k: i64,
    /// Hop cost of recommendation edges (0 or 1).
    #[arg(long, default_value_t = 1)]
    pub rn_edge_cost: u32,
    #[arg(long)]
    pub ern_out: Option<PathBuf>,
}

pub fn build_ern(args: BuildErnArgs, output: &Output) -> Result<()> {
    let cfg = ErnConfig::new(args.k, args.rn_edge_cost).map_err(config_err)?;
    let mut inputs = Inputs::default();
    let p = args.inputs.load(&mut inputs)?;
    let ern = build(&p.rn, &p.matrix, cfg)?;
    let mut em = Emitter::new("build-ern", &args, &inputs)?;
    let id = format!("ern_k{}", cfg.max_weight);
    let dec = components(ern.as_unweighted());
    em.emit(
        &id,
        "ern_summary",
        None,
        json!({
            "k": cfg.max_weight,
            "rn_edge_cost": cfg.rn_edge_cost,
            "vertices": ern.node_count(),
            "edges": ern.edge_count(),
            "components": dec.count(),
            "giant_vertices": dec.giant().map_or(0, |g| g.vertices),
        }),
    )?;
    let mut counts = ern.weight_counts();
    counts.resize(cfg.max_weight as usize + 1, 0);
    em.emit_rows(
        &id,
        "weight_count",
        None,
        counts.iter().enumerate().map(|(w, &c)| json!({ "weight": w, "edges": c })),
    )?;
    if let Some(path) = &args.ern_out {
        let sha = write_graph(path, |b| ern.write_edge_list(b))?;
        em.emit(
            &id,
            "artifact",
            None,
            Artifact {
                role: "ern",
                path: path.display().to_string(),
                sha256: sha,
            },
        )?;
    }
    output.finish(em, "weight_count")
}

#[derive(Debug, Args, Serialize)]
pub struct ErnSeriesArgs {
    #[command(flatten)]
    pub inputs: PipelineInputs,
    #[arg(long, default_value_t = 5)]
    pub kmax: u32,
    #[arg(long, default_value_t = 1)]
    pub rn_edge_cost: u32,
    #[command(flatten)]
    pub paths: PathArgs,
}

pub fn ern_series(args: ErnSeriesArgs, output: &Output) -> Result<()> {
    if args.kmax < 1 {
        return Err(usage("--kmax must be at least 1"));
    }
    ErnConfig::new(args.kmax as i64, args.rn_edge_cost).map_err(config_err)?;
    if args.paths.sources == 0 {
        return Err(usage("--sources must be at least 1"));
    }
    let exact_limit = match args.paths.path_mode {
        PathChoice::Exact => usize::MAX,
        PathChoice::Sampled => 0,
        PathChoice::Auto => args.paths.exact_limit,
    };
    let mut inputs = Inputs::default();
    let p = args.inputs.load(&mut inputs)?;
    let s = series(
        &p.rn,
        &p.matrix,
        args.kmax,
        args.rn_edge_cost,
        exact_limit,
        (args.paths.sources, args.paths.path_seed),
    )?;
    let mut em = Emitter::new("ern-series", &args, &inputs)?;
    em.emit("rn", "ern_baseline", Some(mode_name(s.baseline.mode)), &s.baseline)?;
    for r in &s.rows {
        em.emit(&format!("ern_k{}", r.k), "ern_row", Some(mode_name(r.mode)), r)?;
    }
    for r in &s.relative {
        em.emit(&format!("ern_k{}", r.k), "ern_relative", None, r)?;
    }
    output.finish(em, "ern_row")
}

#[derive(Debug, Args, Serialize)]
pub struct ExpandErnArgs {
    #[command(flatten)]
    pub inputs: PipelineInputs,
    #[arg(long)]
    pub k: i64,
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
    #[command(flatten)]
    pub paths: PathArgs,
}

pub fn expand_ern(args: ExpandErnArgs, output: &Output) -> Result<()> {
    let cfg = ErnConfig::new(args.k, 1).map_err(config_err)?;
    let mut inputs = Inputs::default();
    let p = args.inputs.load(&mut inputs)?;
    let ern = build(&p.rn, &p.matrix, cfg)?;
    let g = expand(&ern, &p.matrix, cfg.max_weight)?;
    let dec = components(&g);
    let giant = g.induced_by_indices(&dec.members(0));
    let report = MetricsReport::for_undirected(&giant, args.paths.mode(giant.node_count())?)?;
    let mut em = Emitter::new("expand-ern", &args, &inputs)?;
    let id = format!("expanded_k{}", cfg.max_weight);
    em.emit(
        &id,
        "graph_summary",
        Some(mode_name(report.mode)),
        json!({
            "vertices": g.node_count(),
            "edges": g.edge_count(),
            "components": dec.count(),
            "giant_vertices": report.vertices,
            "giant_edges": report.edges,
            "giant_diameter": report.diameter,
            "giant_avg_path_length": report.avg_path_length,
            "giant_global_cc": report.global_cc,
            "added_social_nodes": g.node_count() - ern.node_count(),
        }),
    )?;
    if let Some(path) = &args.graph_out {
        let sha = write_graph(path, |b| g.write_edge_list(b))?;
        em.emit(
            &id,
            "artifact",
            None,
            Artifact {
                role: "expanded_ern",
                path: path.display().to_string(),
                sha256: sha,
            },
        )?;
    }
    output.finish(em, "graph_summary")
}

#[derive(Debug, Args, Serialize)]
pub struct SeederAplArgs {
    #[command(flatten)]
    pub inputs: PipelineInputs,
    #[arg(long, default_value_t = 5)]
    pub kmax: u32,
    #[arg(long, default_value_t = 1)]
    pub rn_edge_cost: u32,
}

fn seeders_in(nodes: &NodeTable, tokens: &[String]) -> Vec<usize> {
    tokens.iter().filter_map(|t| nodes.get(t)).collect()
}

fn emit_apl<G: ShortestPaths + ?Sized>(em: &mut Emitter, id: &str, g: &G, seeders: &[usize]) -> Result<()> {
    match apl(g, seeders) {
        Ok(a) => em.emit(id, "seeder_apl", None, a),
        Err(ernkit::Error::Domain(reason)) => em.emit(
            id,
            "seeder_apl",
            None,
            json!({ "mean": null, "reachable_pairs": 0, "reason": reason }),
        ),
        Err(e) => Err(e.into()),
    }
}

pub fn seeder_apl(args: SeederAplArgs, output: &Output) -> Result<()> {
    ErnConfig::new(args.kmax as i64, args.rn_edge_cost).map_err(config_err)?;
    let mut inputs = Inputs::default();
    let p = args.inputs.load(&mut inputs)?;
    let mut em = Emitter::new("seeder-apl", &args, &inputs)?;
    let osn_seeds = p.social.map.osn_seeds();
    let osn_tokens = osn_seeds.members();
    emit_apl(&mut em, "osn", &p.social.osn, &seeders_in(p.social.osn.nodes(), osn_tokens))?;
    emit_apl(&mut em, "tn", &p.social.tn.tn, &seeders_in(p.social.tn.tn.nodes(), osn_tokens))?;
    let rn_tokens = p.matrix.seeders().to_vec();
    let rn_und = p.rn.to_undirected();
    emit_apl(&mut em, "rn", &rn_und, &seeders_in(rn_und.nodes(), &rn_tokens))?;
    for k in 1..=args.kmax {
        let cfg = ErnConfig::new(k as i64, args.rn_edge_cost).map_err(config_err)?;
        let ern = build(&p.rn, &p.matrix, cfg)?;
        let idx = seeders_in(ern.nodes(), &rn_tokens);
        emit_apl(&mut em, &format!("ern_k{k}"), &ern, &idx)?;
        let expanded = expand(&ern, &p.matrix, k)?;
        emit_apl(&mut em, &format!("expanded_k{k}"), &expanded, &seeders_in(expanded.nodes(), &rn_tokens))?;
    }
    output.finish(em, "seeder_apl")
}
