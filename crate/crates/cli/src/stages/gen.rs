use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand, ValueEnum};
use ernkit::synth::{
    default_rn_histogram, gen_ba, gen_er, gen_rn_forest, scenario_generate, OsnModel, Placement,
    ScenarioSpec, SeederCount, DEFAULT_RECIPROCITY,
};
use ernkit::GraphView;
use serde::Serialize;
use serde_json::json;

use super::{config_err, write_graph, Artifact};
use crate::report::{Emitter, Inputs};
use crate::{usage, Output};

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[command(subcommand)]
    pub model: GenModel,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GenModel {
    /// G(n, p) random graph.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        graph_out: PathBuf,
    },
    /// Preferential attachment graph.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        graph_out: PathBuf,
    },
    /// Directed recommendation forest.
    Forest {
        /// `size:count` pairs, e.g. `2:10,3:4`; default is the census-shaped histogram.
        #[arg(long)]
        histogram: Option<String>,
        #[arg(long, default_value_t = DEFAULT_RECIPROCITY)]
        reciprocity: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        graph_out: PathBuf,
    },
    /// Recommendation forest, social graph and seeder map in one directory.
    Scenario {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        histogram: Option<String>,
        #[arg(long, default_value_t = DEFAULT_RECIPROCITY)]
        reciprocity: f64,
        #[arg(long, value_enum, default_value_t = OsnChoice::Ba)]
        osn_model: OsnChoice,
        #[arg(long, default_value_t = 50_000)]
        osn_n: usize,
        #[arg(long, default_value_t = 3)]
        osn_m: usize,
        #[arg(long, default_value_t = 0.001)]
        osn_p: f64,
        /// Number of seeders (default 300).
        #[arg(long, conflicts_with = "seeder_fraction")]
        seeders: Option<usize>,
        /// Fraction of recommenders designated as seeders.
        #[arg(long)]
        seeder_fraction: Option<f64>,
        #[arg(long, value_enum, default_value_t = PlacementChoice::DegreeBiased)]
        placement: PlacementChoice,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OsnChoice {
    Er,
    Ba,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlacementChoice {
    Uniform,
    DegreeBiased,
}

fn parse_histogram(spec: Option<&str>) -> Result<BTreeMap<usize, usize>> {
    let Some(spec) = spec else {
        return Ok(default_rn_histogram());
    };
    let mut h = BTreeMap::new();
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let (s, c) = part
            .split_once(':')
            .ok_or_else(|| usage(format!("histogram entry `{part}` is not `size:count`")))?;
        let s: usize = s.trim().parse().map_err(|_| usage(format!("bad size in `{part}`")))?;
        let c: usize = c.trim().parse().map_err(|_| usage(format!("bad count in `{part}`")))?;
        *h.entry(s).or_insert(0) += c;
    }
    Ok(h)
}

pub fn run(args: GenArgs, output: &Output) -> Result<()> {
    let inputs = Inputs::default();
    let mut em = Emitter::new("gen", &args, &inputs)?;
    match &args.model {
        GenModel::Er { n, p, seed, graph_out } => {
            let g = gen_er(*n, *p, *seed).map_err(config_err)?;
            let sha = write_graph(graph_out, |b| g.write_edge_list(b))?;
            emit_graph(&mut em, "er", g.node_count(), g.edge_count(), graph_out, sha)?;
        }
        GenModel::Ba { n, m, seed, graph_out } => {
            let g = gen_ba(*n, *m, *seed).map_err(config_err)?;
            let sha = write_graph(graph_out, |b| g.write_edge_list(b))?;
            emit_graph(&mut em, "ba", g.node_count(), g.edge_count(), graph_out, sha)?;
        }
        GenModel::Forest {
            histogram,
            reciprocity,
            seed,
            graph_out,
        } => {
            let h = parse_histogram(histogram.as_deref())?;
            let g = gen_rn_forest(&h, *reciprocity, *seed).map_err(config_err)?;
            let sha = write_graph(graph_out, |b| g.write_edge_list(b))?;
            emit_graph(&mut em, "rn", g.node_count(), g.edge_count(), graph_out, sha)?;
        }
        GenModel::Scenario {
            dir,
            histogram,
            reciprocity,
            osn_model,
            osn_n,
            osn_m,
            osn_p,
            seeders,
            seeder_fraction,
            placement,
            seed,
        } => {
            let spec = ScenarioSpec {
                rn_histogram: parse_histogram(histogram.as_deref())?,
                reciprocity: *reciprocity,
                osn_model: match osn_model {
                    OsnChoice::Er => OsnModel::Er { n: *osn_n, p: *osn_p },
                    OsnChoice::Ba => OsnModel::Ba { n: *osn_n, m: *osn_m },
                },
                seeders: match (seeders, seeder_fraction) {
                    (_, Some(f)) => SeederCount::Fraction(*f),
                    (Some(k), None) => SeederCount::Count(*k),
                    (None, None) => SeederCount::Count(300),
                },
                placement: match placement {
                    PlacementChoice::Uniform => Placement::Uniform,
                    PlacementChoice::DegreeBiased => Placement::DegreeBiased,
                },
                seed: *seed,
            };
            let s = scenario_generate(&spec).map_err(config_err)?;
            em.emit("scenario", "scenario_spec", None, &spec)?;
            let rn_path = dir.join("rn.tsv");
            let osn_path = dir.join("osn.tsv");
            let map_path = dir.join("seeders.tsv");
            let sha = write_graph(&rn_path, |b| s.rn.write_edge_list(b))?;
            emit_graph(&mut em, "rn", s.rn.node_count(), s.rn.edge_count(), &rn_path, sha)?;
            let sha = write_graph(&osn_path, |b| s.osn.write_edge_list(b))?;
            emit_graph(&mut em, "osn", s.osn.node_count(), s.osn.edge_count(), &osn_path, sha)?;
            let map_text = s.seeder_map.to_file_string();
            let sha = write_graph(&map_path, |b| {
                b.extend_from_slice(map_text.as_bytes());
                Ok(())
            })?;
            em.emit(
                "seeders",
                "artifact",
                None,
                Artifact {
                    role: "seeder_map",
                    path: map_path.display().to_string(),
                    sha256: sha,
                },
            )?;
            em.emit("seeders", "seeder_summary", None, json!({ "seeders": s.seeder_map.len() }))?;
        }
    }
    output.finish(em, "graph_summary")
}

fn emit_graph(
    em: &mut Emitter,
    id: &str,
    vertices: usize,
    edges: usize,
    path: &std::path::Path,
    sha256: String,
) -> Result<()> {
    em.emit(
        id,
        "artifact",
        None,
        Artifact {
            role: "edge_list",
            path: path.display().to_string(),
            sha256,
        },
    )?;
    em.emit(id, "graph_summary", None, json!({ "vertices": vertices, "edges": edges }))
}
