//! `citemap`: quasi-JCR construction and journal mapping from WoS exports.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "citemap",
    version,
    about = "Journal citation maps from field-tagged bibliographic exports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse export files into a record store.
    Parse(ParseArgs),
    /// Aggregate records into a journal-by-journal citation matrix.
    Jcr(JcrArgs),
    /// Extract the citation environment of a seed journal or document set.
    Env(EnvArgs),
    /// Cosine network, k-cores, factors and layout of an environment.
    Map(MapArgs),
    /// Year-by-year frames of a seed journal's environment.
    Animate(AnimateArgs),
    /// Document-type, language and per-year tables.
    Stats(StatsArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// Share of the environment total a journal must exceed.
    #[arg(long)]
    pub contribution: Option<f64>,
    /// Keep edges with cosine strictly above this value.
    #[arg(long)]
    pub cosine_threshold: Option<f64>,
    #[arg(long, overrides_with = "no_fuzzy")]
    pub fuzzy: bool,
    #[arg(long)]
    pub no_fuzzy: bool,
    #[arg(long)]
    pub factors: Option<usize>,
    #[arg(long)]
    pub seed_rng: Option<u64>,
    /// Only articles, reviews, letters and proceedings papers cite.
    #[arg(long)]
    pub citable_only: bool,
    /// Contribution threshold of 0.5%.
    #[arg(long)]
    pub humanities: bool,
    #[arg(long)]
    pub anchor_weight: Option<f64>,
    #[arg(long)]
    pub size_scale: Option<f64>,
    /// Keep the diagonal cell in cosine profiles.
    #[arg(long)]
    pub include_diagonal: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionArg {
    Cited,
    Citing,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OriginArg {
    Ahci,
    Sci,
    Ssci,
}

#[derive(Args, Debug)]
pub struct ParseArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub origin: Option<OriginArg>,
    /// Keep records of files that end without an EF line.
    #[arg(long)]
    pub allow_truncated: bool,
}

#[derive(Args, Debug)]
pub struct JcrArgs {
    /// records.json written by `parse`.
    #[arg(long)]
    pub records: PathBuf,
    /// Source-journal list, one abbreviation per line.
    #[arg(long)]
    pub sources: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Only aggregate records published in this year.
    #[arg(long)]
    pub year: Option<i32>,
    /// Cells below this count are reported as sparse.
    #[arg(long, default_value_t = 5)]
    pub sparsity_cutoff: u64,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
pub struct EnvArgs {
    /// jcr.csv written by `jcr`.
    #[arg(long, conflicts_with = "records")]
    pub matrix: Option<PathBuf>,
    #[arg(long, requires = "matrix")]
    pub seed: Option<String>,
    /// Document set for a topic environment.
    #[arg(long, requires = "topic")]
    pub records: Option<PathBuf>,
    /// Documents citing the set (cited direction of a topic).
    #[arg(long)]
    pub citing_records: Option<PathBuf>,
    #[arg(long)]
    pub topic: Option<String>,
    #[arg(long, value_enum, default_value = "cited")]
    pub direction: DirectionArg,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// environment.json written by `env`.
    #[arg(long)]
    pub env: PathBuf,
    /// jcr.csv, for self-citation adjusted horizontal sizes.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub largest_component: bool,
    #[arg(long)]
    pub no_rotate: bool,
    #[arg(long)]
    pub exclude_seed: bool,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
pub struct AnimateArgs {
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long)]
    pub sources: PathBuf,
    #[arg(long)]
    pub seed: String,
    #[arg(long)]
    pub from: i32,
    #[arg(long)]
    pub to: i32,
    #[arg(long, value_enum, default_value = "cited")]
    pub direction: DirectionArg,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    pub records: PathBuf,
    /// Records citing the corpus, for the per-year table.
    #[arg(long)]
    pub citing_records: Option<PathBuf>,
    /// Two `label,count` CSV files to rank-correlate.
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    pub spearman: Option<Vec<PathBuf>>,
    /// Item count and cited-item count for the never-cited share.
    #[arg(long, num_args = 2, value_names = ["ITEMS", "CITED"])]
    pub never_cited: Option<Vec<u64>>,
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            emit_error("usage", &first);
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            emit_error(e.kind, &e.message);
            ExitCode::FAILURE
        }
    }
}

fn emit_error(kind: &str, message: &str) {
    let line = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{line}");
}
