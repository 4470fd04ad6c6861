use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use ernkit::metrics::{
    classify_behavior, degree_ecdf, subnetwork_table, BehaviorClass, BehaviorThresholds, DegreeMode,
    DegreeSequence, MetricsReport, RatioMode,
};
use ernkit::powerlaw::{fit_mle, select_xmin};
use ernkit::{components as decompose, ComponentDecomposition, GraphView};
use serde::Serialize;
use serde_json::json;

use super::{config_err, graph_id, mode_name, read_directed, read_undirected, PathArgs};
use crate::report::{Emitter, Inputs};
use crate::{usage, Output};

#[derive(Debug, Args, Serialize)]
pub struct ComponentsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Read the edge list as directed (edge counts per direction).
    #[arg(long)]
    pub directed: bool,
}

fn emit_components(em: &mut Emitter, id: &str, dec: &ComponentDecomposition, nodes: usize) -> Result<()> {
    for (cid, s) in dec.sizes().iter().enumerate() {
        em.emit(
            id,
            "component",
            None,
            json!({
                "id": cid,
                "vertices": s.vertices,
                "edges": s.edges,
                "undirected_edges": s.undirected_edges,
            }),
        )?;
    }
    em.emit_rows(id, "subnetwork_row", None, subnetwork_table(dec)?)?;
    let giant = dec.giant().map_or(0, |g| g.vertices);
    em.emit(
        id,
        "components_summary",
        None,
        json!({
            "components": dec.count(),
            "giant_vertices": giant,
            "giant_fraction": giant as f64 / nodes as f64,
        }),
    )
}

pub fn components(args: ComponentsArgs, output: &Output) -> Result<()> {
    let mut inputs = Inputs::default();
    let id = graph_id(&args.input);
    let (dec, n) = if args.directed {
        let g = read_directed(&mut inputs, "graph", &args.input)?;
        (decompose(&g), g.node_count())
    } else {
        let g = read_undirected(&mut inputs, "graph", &args.input)?;
        (decompose(&g), g.node_count())
    };
    let mut em = Emitter::new("components", &args, &inputs)?;
    emit_components(&mut em, &id, &dec, n)?;
    output.finish(em, "component")
}

#[derive(Debug, Args, Serialize)]
pub struct MetricsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub directed: bool,
    /// Restrict to the largest connected component.
    #[arg(long)]
    pub giant: bool,
    #[command(flatten)]
    pub paths: PathArgs,
}

#[derive(Serialize)]
struct Point {
    degree: usize,
    value: f64,
}

fn points(v: &[(usize, f64)]) -> impl Iterator<Item = Point> + '_ {
    v.iter().map(|&(degree, value)| Point { degree, value })
}

pub fn metrics(args: MetricsArgs, output: &Output) -> Result<()> {
    let mut inputs = Inputs::default();
    let mut id = graph_id(&args.input);
    let (report, extra_ecdf) = if args.directed {
        let mut g = read_directed(&mut inputs, "graph", &args.input)?;
        if args.giant {
            let members = decompose(&g).members(0);
            let tokens: Vec<&str> = members.iter().map(|&u| g.nodes().token(u)).collect();
            g = g.induced_subgraph(&tokens)?;
            id.push_str("_giant");
        }
        let report = MetricsReport::for_directed(&g, args.paths.mode(g.node_count())?)?;
        let extra = vec![
            ("in", degree_ecdf(&g, DegreeMode::In)?),
            ("out", degree_ecdf(&g, DegreeMode::Out)?),
        ];
        (report, extra)
    } else {
        let mut g = read_undirected(&mut inputs, "graph", &args.input)?;
        if args.giant {
            g = g.induced_by_indices(&decompose(&g).members(0));
            id.push_str("_giant");
        }
        (MetricsReport::for_undirected(&g, args.paths.mode(g.node_count())?)?, Vec::new())
    };
    let mut em = Emitter::new("metrics", &args, &inputs)?;
    let pm = Some(mode_name(report.mode));
    em.emit(
        &id,
        "summary",
        pm,
        json!({
            "vertices": report.vertices,
            "edges": report.edges,
            "diameter": report.diameter,
            "avg_path_length": report.avg_path_length,
            "reachable_pairs": report.reachable_pairs,
            "global_cc": report.global_cc,
            "global_cc_degree2": report.global_cc_degree2,
            "reciprocity": report.reciprocity,
            "path_mode": report.mode,
        }),
    )?;
    em.emit_rows(&id, "degree_ecdf", Some("total"), points(&report.degree_ecdf))?;
    for (mode, ecdf) in &extra_ecdf {
        em.emit_rows(&id, "degree_ecdf", Some(mode), points(ecdf))?;
    }
    em.emit_rows(&id, "cc_by_degree", None, points(&report.cc_by_degree))?;
    em.emit_rows(&id, "knn_by_degree", None, points(&report.knn_by_degree))?;
    output.finish(em, "degree_ecdf")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioChoice {
    /// out / (out + in)
    Normalized,
    /// out / in
    Raw,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Class boundaries `low,mid,high`.
    #[arg(long, default_value = "0.1,0.75,0.9")]
    pub thresholds: String,
    #[arg(long, value_enum, default_value_t = RatioChoice::Normalized)]
    pub ratio: RatioChoice,
    /// Also emit one record per node.
    #[arg(long)]
    pub per_node: bool,
}

fn parse_thresholds(s: &str) -> Result<BehaviorThresholds> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| usage(format!("--thresholds `{s}` is not three numbers")))?;
    let [low, mid, high] = v[..] else {
        return Err(usage(format!("--thresholds needs exactly three values, got {}", v.len())));
    };
    BehaviorThresholds::new(low, mid, high).map_err(config_err)
}

pub fn classify(args: ClassifyArgs, output: &Output) -> Result<()> {
    let thresholds = parse_thresholds(&args.thresholds)?;
    let mode = match args.ratio {
        RatioChoice::Normalized => RatioMode::Normalized,
        RatioChoice::Raw => RatioMode::Raw,
    };
    let mut inputs = Inputs::default();
    let g = read_directed(&mut inputs, "rn", &args.input)?;
    let id = graph_id(&args.input);
    let s = classify_behavior(&g, thresholds, mode)?;
    let mut em = Emitter::new("classify", &args, &inputs)?;
    let m = Some(match mode {
        RatioMode::Normalized => "normalized",
        RatioMode::Raw => "raw",
    });
    for (i, class) in BehaviorClass::ALL.iter().enumerate() {
        em.emit(
            &id,
            "behavior_class",
            m,
            json!({
                "class": class.name(),
                "count": s.counts[i],
                "fraction": s.fractions[i],
            }),
        )?;
    }
    em.emit(
        &id,
        "behavior_summary",
        m,
        json!({
            "classified": s.classified,
            "isolated": s.isolated,
            "infinite_ratios": s.infinite_ratios,
            "thresholds": thresholds,
        }),
    )?;
    em.emit_rows(
        &id,
        "ratio_ecdf",
        m,
        s.ratio_ecdf.iter().map(|&(ratio, p)| json!({ "ratio": ratio, "p": p })),
    )?;
    if args.per_node {
        for u in 0..g.node_count() {
            em.emit(
                &id,
                "node_class",
                m,
                json!({
                    "node": g.nodes().token(u),
                    "class": s.classes[u].map(BehaviorClass::name),
                    "ratio": s.ratios[u],
                }),
            )?;
        }
    }
    output.finish(em, "behavior_class")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeChoice {
    In,
    Out,
    Total,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    /// Edge list whose degree sequence is fitted.
    #[arg(long = "in", conflicts_with = "samples", required_unless_present = "samples")]
    pub input: Option<PathBuf>,
    /// One positive integer per line instead of a graph.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    #[arg(long, value_enum, default_value_t = DegreeChoice::Total)]
    pub degree: DegreeChoice,
    /// Fixed lower cutoff; selected by KS distance when absent.
    #[arg(long)]
    pub xmin: Option<u64>,
    #[arg(long)]
    pub xmax: Option<u64>,
}

fn parse_samples(bytes: &[u8]) -> Result<Vec<u64>> {
    let text = std::str::from_utf8(bytes).context("samples file is not UTF-8")?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(t.parse().map_err(|_| ernkit::Error::Parse {
            line: i + 1,
            message: format!("`{t}` is not a non-negative integer"),
        })?);
    }
    Ok(out)
}

pub fn fit(args: FitArgs, output: &Output) -> Result<()> {
    if args.xmax.is_some() && args.xmin.is_none() {
        return Err(usage("--xmax requires --xmin"));
    }
    let mut inputs = Inputs::default();
    let degree_mode = match args.degree {
        DegreeChoice::In => DegreeMode::In,
        DegreeChoice::Out => DegreeMode::Out,
        DegreeChoice::Total => DegreeMode::Total,
    };
    let (id, samples) = match (&args.input, &args.samples) {
        (Some(p), _) => {
            let seq = if args.directed {
                read_directed(&mut inputs, "graph", p)?.degree_sequence(degree_mode)?
            } else {
                if degree_mode != DegreeMode::Total {
                    return Err(usage("--degree in/out needs --directed"));
                }
                read_undirected(&mut inputs, "graph", p)?.degree_sequence(degree_mode)?
            };
            (graph_id(p), seq.into_iter().map(|d| d as u64).collect())
        }
        (None, Some(p)) => (graph_id(p), parse_samples(&inputs.read("samples", p)?)?),
        (None, None) => return Err(usage("one of --in or --samples is required")),
    };
    let positive: Vec<u64> = samples.iter().copied().filter(|&x| x > 0).collect();
    let fitted = match args.xmin {
        Some(x) => fit_mle(&positive, x, args.xmax)?,
        None => select_xmin(&positive)?,
    };
    let mut em = Emitter::new("fit", &args, &inputs)?;
    let how = if args.xmin.is_some() { "fixed_xmin" } else { "selected_xmin" };
    em.emit(&id, "powerlaw_fit", Some(how), fitted)?;
    em.emit(
        &id,
        "sample_summary",
        None,
        json!({ "samples": samples.len(), "zeros_dropped": samples.len() - positive.len() }),
    )?;
    output.finish(em, "powerlaw_fit")
}
