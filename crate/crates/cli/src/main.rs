use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ecdfclust_cli::pipeline;
use ecdfclust_cli::{PipelineConfig, DEFAULT_CLUSTERS};
use ecdfclust_core::MatchOptions;

#[derive(Parser)]
#[command(
    name = "ecdfclust",
    version,
    about = "Cluster ECDFs of response-to-reference similarities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one similarity list per setting.
    Score(Common),
    /// Distance matrix, PAM clustering, ranking and seriation.
    Cluster(Common),
    /// SVG plots of clusters, assignments and accuracy groups.
    Plot(Common),
    /// Plain-text summary.
    Report(Common),
    /// score, cluster, plot and report in sequence.
    RunAll(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input_dir: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long = "clusters", value_name = "m", default_value_t = DEFAULT_CLUSTERS)]
    clusters: usize,
    #[arg(long)]
    case_insensitive_match: bool,
    /// Precomputed similarities; skips embedding-based scoring.
    #[arg(long, value_name = "file")]
    similarities: Option<PathBuf>,
    #[arg(long, default_value_t = 480.0)]
    plot_width: f64,
    #[arg(long, default_value_t = 360.0)]
    plot_height: f64,
}

impl Common {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            input_dir: self.input_dir.clone(),
            out_dir: self.out_dir.clone(),
            clusters: self.clusters,
            match_options: MatchOptions {
                case_insensitive: self.case_insensitive_match,
            },
            similarities: self.similarities.clone(),
            plot_width: self.plot_width,
            plot_height: self.plot_height,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Score(c) => pipeline::score(&c.config()).map(|_| ()),
        Command::Cluster(c) => pipeline::cluster(&c.config()).map(|_| ()),
        Command::Plot(c) => pipeline::plot(&c.config()).map(|_| ()),
        Command::Report(c) => pipeline::report(&c.config()).map(|_| ()),
        Command::RunAll(c) => pipeline::run_all(&c.config()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
