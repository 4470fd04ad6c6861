use std::net::TcpListener;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::Args;
use ernkit::crawler::{
    crawl, crawl_component_trace, serve_friends, CrawlOptions, FriendProvider, GraphProvider, RemoteOptions,
    RemoteProvider, DEFAULT_CHECKPOINT_EVERY,
};
use ernkit::graph::read_seed_file;
use ernkit::GraphView;
use serde::Serialize;
use serde_json::json;

use super::{config_err, graph_id, read_undirected, write_graph, Artifact};
use crate::report::{Emitter, Inputs};
use crate::{usage, Output};

#[derive(Debug, Args, Serialize)]
pub struct CrawlArgs {
    /// Ground-truth social graph served from disk.
    #[arg(long, conflicts_with = "remote", required_unless_present = "remote")]
    pub graph: Option<PathBuf>,
    /// `host:port` of a friend-list server.
    #[arg(long)]
    pub remote: Option<String>,
    /// Seed tokens, one per line.
    #[arg(long)]
    pub seeds: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub levels: u32,
    /// Fetch each frontier in parallel.
    #[arg(long)]
    pub concurrent: bool,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CHECKPOINT_EVERY)]
    pub checkpoint_every: usize,
    /// Continue from --checkpoint if it exists.
    #[arg(long, requires = "checkpoint")]
    pub resume: bool,
    #[arg(long, default_value_t = 10_000)]
    pub timeout_ms: u64,
    #[arg(long, default_value_t = 2)]
    pub retries: u32,
    /// Pause before every remote request.
    #[arg(long, default_value_t = 0)]
    pub delay_ms: u64,
    /// Write the observed graph here.
    #[arg(long)]
    pub observed_out: Option<PathBuf>,
    /// Record the component count after every expansion.
    #[arg(long)]
    pub trace: bool,
}

pub fn run(args: CrawlArgs, output: &Output) -> Result<()> {
    if args.levels == 0 {
        return Err(usage("--levels must be at least 1"));
    }
    let mut inputs = Inputs::default();
    let seeds = read_seed_file(inputs.read("seeds", &args.seeds)?.as_slice())
        .with_context(|| format!("parsing {}", args.seeds.display()))?;
    let (id, provider): (String, Box<dyn FriendProvider>) = match (&args.graph, &args.remote) {
        (Some(p), _) => (graph_id(p), Box::new(GraphProvider::new(read_undirected(&mut inputs, "graph", p)?))),
        (None, Some(addr)) => {
            let opts = RemoteOptions {
                timeout: Duration::from_millis(args.timeout_ms),
                retries: args.retries,
                delay: Duration::from_millis(args.delay_ms),
            };
            (format!("remote_{}", addr.replace(':', "_")), Box::new(RemoteProvider::new(addr.clone(), opts)))
        }
        (None, None) => return Err(usage("one of --graph or --remote is required")),
    };
    let options = CrawlOptions {
        concurrent: args.concurrent,
        checkpoint: args.checkpoint.clone(),
        checkpoint_every: args.checkpoint_every,
        resume: args.resume,
    };
    let (trace, out) = if args.trace {
        let (t, o) = crawl_component_trace(provider.as_ref(), &seeds, args.levels, &options).map_err(config_err)?;
        (Some(t), o)
    } else {
        (None, crawl(provider.as_ref(), &seeds, args.levels, &options).map_err(config_err)?)
    };

    let mut em = Emitter::new("crawl", &args, &inputs)?;
    em.emit_rows(&id, "crawl_level", None, &out.stats.levels)?;
    em.emit(
        &id,
        "crawl_summary",
        None,
        json!({
            "seeds": out.stats.seeds,
            "total_vertices": out.stats.total_vertices,
            "total_edges": out.stats.total_edges,
            "failed_lookups": out.stats.failed_lookups,
            "observed_vertices": out.observed.node_count(),
            "observed_edges": out.observed.edge_count(),
        }),
    )?;
    for f in &out.failed {
        em.emit(&id, "failed_lookup", None, json!({ "node": f }))?;
    }
    if let Some(trace) = trace {
        em.emit_rows(&id, "component_trace", None, trace)?;
    }
    if let Some(path) = &args.observed_out {
        let sha = write_graph(path, |b| out.observed.write_edge_list(b))?;
        em.emit(
            &id,
            "artifact",
            None,
            Artifact {
                role: "observed_graph",
                path: path.display().to_string(),
                sha256: sha,
            },
        )?;
    }
    output.finish(em, "crawl_level")
}

#[derive(Debug, Args, Serialize)]
pub struct ServeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value = "127.0.0.1:7070")]
    pub listen: String,
}

pub fn serve(args: ServeArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let g = read_undirected(&mut inputs, "graph", &args.graph)?;
    let listener = TcpListener::bind(&args.listen).with_context(|| format!("binding {}", args.listen))?;
    eprintln!("serving {} nodes on {}", g.node_count(), listener.local_addr()?);
    serve_friends(listener, Arc::new(GraphProvider::new(g)))?;
    Ok(())
}
