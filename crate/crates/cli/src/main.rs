//! `netclass`: feature extraction, synthetic corpora, random forest
//! classification, evaluation, t-SNE embedding and clustering of networks.

mod commands;
mod config;
mod failure;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::Config;
use failure::{internal, CmdResult, Status};

#[derive(Parser, Debug)]
#[command(
    name = "netclass",
    version,
    about = "Classify networks by their structural features"
)]
struct Cli {
    /// Worker threads for parallel stages; 0 uses one per core
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Flat key = value file supplying defaults; flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract the 15 structural features for every graph in a manifest
    Features(FeaturesArgs),
    /// Generate a labeled Barabási–Albert / Erdős–Rényi corpus
    Generate(GenerateArgs),
    /// Train a random forest on a labeled feature CSV
    Train(TrainArgs),
    /// Predict the category of graph files with a trained model
    Predict(PredictArgs),
    /// Stratified k-fold cross-validation with confusion and error reports
    Evaluate(EvaluateArgs),
    /// Embed rows of a feature CSV or numeric table in 2-D with t-SNE
    Embed(EmbedArgs),
    /// k-means clustering with a cluster/category overlap report
    Cluster(ClusterArgs),
}

#[derive(Args, Debug)]
struct FeaturesArgs {
    /// CSV with columns path,name,category; paths relative to its directory
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Feature CSV to write
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Generator spec with [BA] and [ER] sections; default corpus if omitted
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Directory receiving the edge lists and manifest.csv
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
    /// Master seed for sections that set none [config: seed, env: NETCLASS_SEED]
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
struct ForestArgs {
    /// Trees in the forest [config: trees, default 100]
    #[arg(long)]
    trees: Option<usize>,
    /// Features tried per split [config: features_per_split, default round(sqrt(D))]
    #[arg(long)]
    features_per_split: Option<usize>,
    /// Smallest node that may be split [config: min_split, default 2]
    #[arg(long)]
    min_split: Option<usize>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    /// Labeled feature CSV
    #[arg(long, value_name = "FILE")]
    features: PathBuf,
    /// Model JSON to write
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    #[command(flatten)]
    forest: ForestArgs,
    /// Training seed [config: seed, env: NETCLASS_SEED]
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct PredictArgs {
    /// Model JSON written by `train`
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Predictions CSV to write; stdout if omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Edge-list or Matrix Market files
    #[arg(required = true, value_name = "GRAPH")]
    graphs: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Labeled feature CSV
    #[arg(long, value_name = "FILE")]
    features: PathBuf,
    /// Directory receiving confusion.csv, confusion.txt, misclassified.csv and summary.csv
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
    /// Number of folds [config: folds, default 10]
    #[arg(long)]
    folds: Option<usize>,
    #[command(flatten)]
    forest: ForestArgs,
    /// Fold and training seed [config: seed, env: NETCLASS_SEED]
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    /// Feature CSV, or a CSV with header name,category,<numeric columns>
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Embedding CSV (name,category,x,y) to write
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Target perplexity [config: perplexity, default 30]
    #[arg(long)]
    perplexity: Option<f64>,
    /// Gradient steps [config: iterations, default 1000]
    #[arg(long)]
    iterations: Option<usize>,
    /// Step size [config: learning_rate, default 200]
    #[arg(long)]
    learning_rate: Option<f64>,
    /// Early exaggeration factor [config: exaggeration, default 12]
    #[arg(long)]
    exaggeration: Option<f64>,
    /// Steps with exaggeration [config: exaggeration_iters, default 250]
    #[arg(long)]
    exaggeration_iters: Option<usize>,
    /// Initial layout seed [config: seed, env: NETCLASS_SEED]
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct ClusterArgs {
    /// Feature CSV, or a CSV with header name,category,<numeric columns> such as an embedding
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Directory receiving clusters.csv, centroids.csv, overlap.csv and merge_suggestions.csv
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
    /// Number of clusters [config: k, required]
    #[arg(long)]
    k: Option<usize>,
    /// Independent k-means++ restarts [config: restarts, default 10]
    #[arg(long)]
    restarts: Option<usize>,
    /// Lloyd iteration cap [config: max_iter, default 300]
    #[arg(long)]
    max_iter: Option<usize>,
    /// Co-clustering mass above which categories are suggested for merging [config: merge_threshold, default 0.6]
    #[arg(long)]
    merge_threshold: Option<f64>,
    /// Restart seed [config: seed, env: NETCLASS_SEED]
    #[arg(long)]
    seed: Option<u64>,
}

fn run(cli: Cli) -> CmdResult {
    let config = Config::load(cli.config.as_deref())?;
    let workers = config.resolve(cli.workers, "workers", 0usize)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(internal)?;
    pool.install(|| match &cli.command {
        Command::Features(a) => commands::features(a),
        Command::Generate(a) => commands::generate(a, &config),
        Command::Train(a) => commands::train(a, &config),
        Command::Predict(a) => commands::predict(a),
        Command::Evaluate(a) => commands::evaluate(a, &config),
        Command::Embed(a) => commands::embed(a, &config),
        Command::Cluster(a) => commands::cluster(a, &config),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Status::Success,
                _ => Status::Invalid,
            }
            .into();
        }
    };
    match run(cli) {
        Ok(status) => status.into(),
        Err(f) => {
            eprintln!("error: {f}");
            f.status.into()
        }
    }
}
