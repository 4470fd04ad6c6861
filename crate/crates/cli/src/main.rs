//! `ernkit`: one pipeline stage per invocation, NDJSON on the way out.

mod report;
mod stages;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stages::{analyze, crawl, extend, gen, summarize};

#[derive(Parser)]
#[command(name = "ernkit", version, about = "Recommendation-network extension and graph metrics")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// NDJSON destination; defaults to `$ERNKIT_OUT_DIR/<stage>.ndjson`, else stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a CSV projection of the stage's main table.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Metric projected into the CSV instead of the stage default.
    #[arg(long, global = true, requires = "csv")]
    csv_metric: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic graphs or a full scenario.
    Gen(gen::GenArgs),
    /// Connected components and the sub-network census.
    Components(analyze::ComponentsArgs),
    /// Degree, clustering, path and assortativity metrics.
    Metrics(analyze::MetricsArgs),
    /// Recommender behavior classes from out/in balance.
    Classify(analyze::ClassifyArgs),
    /// Discrete power-law fit of a degree sequence or sample file.
    Fit(analyze::FitArgs),
    /// Level-bounded BFS crawl over a stored graph or a remote provider.
    Crawl(crawl::CrawlArgs),
    /// Serve friend lists from a stored graph over the line protocol.
    Serve(crawl::ServeArgs),
    /// Transition network between seeders.
    ExtractTn(extend::ExtractTnArgs),
    /// Extended recommendation network for one K.
    BuildErn(extend::BuildErnArgs),
    /// Largest-component statistics for K = 1..K_max.
    ErnSeries(extend::ErnSeriesArgs),
    /// Replace weighted ERN edges by their social paths.
    ExpandErn(extend::ExpandErnArgs),
    /// Mean shortest-path length between seeders across graphs.
    SeederApl(extend::SeederAplArgs),
    /// Validate NDJSON files and project them to CSV.
    Report(summarize::ReportArgs),
}

/// Invalid flag values or combinations; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Output flags shared by every stage.
pub struct Output {
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub csv_metric: Option<String>,
}

impl Output {
    pub fn finish(&self, emitter: report::Emitter, default_metric: &str) -> anyhow::Result<()> {
        let metric = self.csv_metric.as_deref().unwrap_or(default_metric);
        emitter.finish(self.out.as_deref(), self.csv.as_deref(), metric)
    }
}

fn run(command: Command, output: &Output) -> anyhow::Result<()> {
    match command {
        Command::Gen(a) => gen::run(a, output),
        Command::Components(a) => analyze::components(a, output),
        Command::Metrics(a) => analyze::metrics(a, output),
        Command::Classify(a) => analyze::classify(a, output),
        Command::Fit(a) => analyze::fit(a, output),
        Command::Crawl(a) => crawl::run(a, output),
        Command::Serve(a) => crawl::serve(a),
        Command::ExtractTn(a) => extend::extract_tn(a, output),
        Command::BuildErn(a) => extend::build_ern(a, output),
        Command::ErnSeries(a) => extend::ern_series(a, output),
        Command::ExpandErn(a) => extend::expand_ern(a, output),
        Command::SeederApl(a) => extend::seeder_apl(a, output),
        Command::Report(a) => summarize::run(a, output),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let output = Output {
        out: cli.out,
        csv: cli.csv,
        csv_metric: cli.csv_metric,
    };
    let result = match cli.threads {
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(anyhow::Error::from)
            .and_then(|pool| pool.install(|| run(cli.command, &output))),
        None => run(cli.command, &output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
