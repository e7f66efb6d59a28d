use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swmention::pipeline::{self, with_workers};
use swmention::{PipelineConfig, Result};

#[derive(Parser)]
#[command(name = "swmention", version, about = "Software-mention disambiguation and linking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Pipeline configuration (TOML)
    #[arg(long, global = true, default_value = "swmention.toml")]
    config: PathBuf,
    /// Output directory, overriding paths.output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Link from local snapshots only
    #[arg(long, global = true, conflicts_with = "online")]
    offline: bool,
    /// Query live registries (needs the `live` build)
    #[arg(long, global = true)]
    online: bool,
    /// Worker threads, 0 for one per core
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Abort on the first malformed row
    #[arg(long, global = true, conflicts_with = "lenient")]
    strict: bool,
    /// Skip malformed rows and report them in the manifest
    #[arg(long, global = true)]
    lenient: bool,
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    min_pts: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Assign ids and count paper frequencies
    Ingest,
    /// Keyword, knowledge-base and string-similarity synonyms
    Synonyms,
    /// Similarity matrix, components and DBSCAN clusters
    Cluster,
    /// Exact-match linking against registry snapshots
    Link,
    /// Metrics over the evaluation files
    Evaluate,
    /// All stages in order
    RunAll,
    /// Print the effective configuration
    Config,
}

fn load(opts: &Opts) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::load(&opts.config)?;
    if let Some(out) = &opts.out {
        cfg.paths.output = out.clone();
    }
    if opts.offline {
        cfg.linking.offline = true;
    }
    if opts.online {
        cfg.linking.offline = false;
    }
    if let Some(w) = opts.workers {
        cfg.parallelism.workers = w;
    }
    if opts.strict {
        cfg.ingest.strict = true;
    }
    if opts.lenient {
        cfg.ingest.strict = false;
    }
    if let Some(e) = opts.eps {
        cfg.dbscan.eps = e;
    }
    if let Some(m) = opts.min_pts {
        cfg.dbscan.min_pts = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load(&cli.opts)?;
    let workers = cfg.parallelism.workers;
    with_workers(workers, || -> Result<()> {
        match cli.command {
            Command::Ingest => {
                let s = pipeline::ingest(&cfg)?;
                println!(
                    "ingest: {} records, {} skipped rows, {} unique mentions, {} without paper key",
                    s.records, s.skipped_rows, s.unique_mentions, s.missing_paper_key
                );
            }
            Command::Synonyms => print_synonyms(&pipeline::synonyms(&cfg)?),
            Command::Cluster => print_cluster(&pipeline::cluster(&cfg)?),
            Command::Link => print_link(&pipeline::link(&cfg)?),
            Command::Evaluate => print!("{}", pipeline::evaluate(&cfg)?.to_text()),
            Command::RunAll => {
                let s = pipeline::run_all(&cfg)?;
                println!("ingest: {} unique mentions", s.ingest.unique_mentions);
                print_synonyms(&s.synonyms);
                print_cluster(&s.cluster);
                if let Some(l) = &s.link {
                    print_link(l);
                }
                if let Some(m) = &s.metrics {
                    print!("{}", m.to_text());
                }
            }
            Command::Config => print!("{}", cfg.to_toml()),
        }
        Ok(())
    })?
}

fn print_synonyms(s: &pipeline::SynonymSummary) {
    let kw: usize = s.keyword_pairs.values().sum();
    println!("synonyms: {kw} keyword, {} knowledge-base, {} string-similarity pairs", s.kb_pairs, s.string_pairs);
}

fn print_cluster(s: &pipeline::ClusterSummary) {
    println!("cluster: {} edges, {} components, {} clusters", s.edges, s.components, s.clusters);
    println!(
        "  no_significant_synonyms {}  no_cluster_output {}  disambiguated {}",
        s.no_significant_synonyms, s.no_cluster_output, s.disambiguated
    );
}

fn print_link(s: &pipeline::LinkSummary) {
    println!("link: {} names matched, {} mentions linked ({} via cluster)", s.linked_names, s.linked_mentions, s.via_cluster);
    for (src, n, pct) in &s.coverage {
        println!("  {src}\t{n}\t{pct:.2}%");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // bad flags are a validation failure
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
