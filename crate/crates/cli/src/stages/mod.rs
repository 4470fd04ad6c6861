pub mod analyze;
pub mod crawl;
pub mod extend;
pub mod gen;
pub mod summarize;

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use ernkit::metrics::{PathMode, DEFAULT_EXACT_LIMIT, DEFAULT_SAMPLED_SOURCES};
use ernkit::{ingest_directed, ingest_undirected, DirectedGraph, UndirectedGraph};
use serde::Serialize;

use crate::report::Inputs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathChoice {
    /// Exact up to --exact-limit vertices, sampled above.
    Auto,
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PathArgs {
    #[arg(long, value_enum, default_value_t = PathChoice::Auto)]
    pub path_mode: PathChoice,
    #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
    pub exact_limit: usize,
    /// Source count for sampled path metrics.
    #[arg(long, default_value_t = DEFAULT_SAMPLED_SOURCES)]
    pub sources: usize,
    /// Seed for source sampling.
    #[arg(long, default_value_t = 1)]
    pub path_seed: u64,
}

impl PathArgs {
    pub fn mode(&self, node_count: usize) -> Result<PathMode> {
        if self.sources == 0 {
            return Err(crate::usage("--sources must be at least 1"));
        }
        let sampled = PathMode::Sampled {
            sources: self.sources,
            seed: self.path_seed,
        };
        Ok(match self.path_mode {
            PathChoice::Exact => PathMode::Exact,
            PathChoice::Sampled => sampled,
            PathChoice::Auto => PathMode::auto(node_count, self.exact_limit, self.sources, self.path_seed),
        })
    }
}

pub fn mode_name(mode: PathMode) -> &'static str {
    match mode {
        PathMode::Exact => "exact",
        PathMode::Sampled { .. } => "sampled",
    }
}

pub fn graph_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn read_directed(inputs: &mut Inputs, role: &str, path: &Path) -> Result<DirectedGraph> {
    let bytes = inputs.read(role, path)?;
    let (g, report) = ingest_directed(bytes.as_slice()).with_context(|| format!("parsing {}", path.display()))?;
    log::info!("{}: {report:?}", path.display());
    Ok(g)
}

pub fn read_undirected(inputs: &mut Inputs, role: &str, path: &Path) -> Result<UndirectedGraph> {
    let bytes = inputs.read(role, path)?;
    let (g, report) =
        ingest_undirected(bytes.as_slice()).with_context(|| format!("parsing {}", path.display()))?;
    log::info!("{}: {report:?}", path.display());
    Ok(g)
}

pub fn write_graph(path: &PathBuf, write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    crate::report::write_file(path, &buf)?;
    Ok(crate::report::sha256_hex(&buf))
}

#[derive(Debug, Serialize)]
pub struct Artifact {
    pub role: &'static str,
    pub path: String,
    pub sha256: String,
}

/// Configuration errors raised by the library on flag values are usage errors.
pub fn config_err(e: ernkit::Error) -> anyhow::Error {
    match e {
        ernkit::Error::Config(m) => crate::usage(m),
        other => other.into(),
    }
}
