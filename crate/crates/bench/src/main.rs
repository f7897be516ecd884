use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Result};
use clap::{ArgGroup, Parser, ValueEnum};
use sipp_bench::experiment::DEFAULT_WEIGHTS;
use sipp_bench::{emit_report, run_experiment, ExperimentConfig, MapKind, MapSource, ReportFormat};
use sipp_core::{Algorithm, Connectivity};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Gen {
    Empty,
    Warehouse,
    Rooms,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    Sipp,
    WsippD,
    WsippR,
    Focal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Runs SIPP and its bounded-suboptimal variants over random queries and
/// writes per-query rows plus per-(algorithm, w) means.
#[derive(Debug, Parser)]
#[command(name = "sipp-bench", version)]
#[command(group(ArgGroup::new("world").args(["map", "gen"])))]
struct Args {
    /// movingai .map file
    #[arg(long)]
    map: Option<PathBuf>,
    /// Built-in map generator
    #[arg(long, value_enum)]
    gen: Option<Gen>,
    /// Side length of generated maps
    #[arg(long, default_value_t = 32)]
    size: usize,
    /// Grid connectivity (4, 8, 16 or 32)
    #[arg(long, default_value_t = 8)]
    conn: u32,
    /// Charge time for turning in place
    #[arg(long)]
    rotations: bool,
    #[arg(long, default_value_t = 60)]
    obstacles: usize,
    /// Obstacle trajectory file; replaces --obstacles
    #[arg(long)]
    obstacle_file: Option<PathBuf>,
    #[arg(long, default_value_t = 25)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repeatable; defaults to all algorithms
    #[arg(long = "algo", value_enum)]
    algos: Vec<Algo>,
    /// Repeatable; defaults to 1.01 1.05 1.1 1.3 2 5
    #[arg(long = "w")]
    weights: Vec<f64>,
    /// Per-query time limit in seconds
    #[arg(long, default_value_t = 30.0)]
    time_limit: f64,
    /// Runs per query; runtimes are the median
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long)]
    out: PathBuf,
    /// Defaults to the extension of --out, else csv
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn config(args: Args) -> Result<(ExperimentConfig, PathBuf)> {
    let map = match (args.map, args.gen) {
        (Some(path), _) => MapSource::File(path),
        (None, gen) => MapSource::Generated {
            kind: match gen.unwrap_or(Gen::Rooms) {
                Gen::Empty => MapKind::Empty,
                Gen::Warehouse => MapKind::Warehouse,
                Gen::Rooms => MapKind::Rooms,
            },
            size: args.size,
        },
    };
    let algorithms = if args.algos.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        args.algos
            .iter()
            .map(|a| match a {
                Algo::Sipp => Algorithm::Sipp,
                Algo::WsippD => Algorithm::WsippD,
                Algo::WsippR => Algorithm::WsippR,
                Algo::Focal => Algorithm::Focal,
            })
            .collect()
    };
    let format = match args.format {
        Some(Format::Csv) => ReportFormat::Csv,
        Some(Format::Json) => ReportFormat::Json,
        None if args.out.extension().is_some_and(|e| e == "json") => ReportFormat::Json,
        None => ReportFormat::Csv,
    };
    if !(args.time_limit > 0.0 && args.time_limit.is_finite()) {
        bail!("--time-limit must be a positive number of seconds");
    }
    let cfg = ExperimentConfig {
        map,
        connectivity: Connectivity::from_k(args.conn)?,
        rotations: args.rotations,
        obstacles: args.obstacles,
        obstacle_file: args.obstacle_file,
        queries: args.queries,
        seed: args.seed,
        algorithms,
        weights: if args.weights.is_empty() { DEFAULT_WEIGHTS.to_vec() } else { args.weights },
        format,
        time_limit: Duration::from_secs_f64(args.time_limit),
        repeats: args.repeats,
    };
    cfg.validate()?;
    Ok((cfg, args.out))
}

fn main() -> Result<()> {
    let (cfg, out) = config(Args::parse())?;
    let report = run_experiment(&cfg)?;
    for path in emit_report(&report, cfg.format, &out)? {
        eprintln!("wrote {}", path.display());
    }
    eprintln!(
        "{} rows, {} unsolvable queries",
        report.rows.len(),
        report.unsolvable.len()
    );
    println!("{:<8} {:>5} {:>6} {:>9} {:>10} {:>11} {:>9}", "algo", "w", "solved", "cost", "runtime", "expansions", "reexp");
    for s in report.summary() {
        let f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3}"));
        println!(
            "{:<8} {:>5} {:>6} {:>9} {:>10} {:>11} {:>9}",
            s.algorithm.name(),
            s.w,
            s.solved,
            f(s.mean_cost_ratio),
            f(s.mean_runtime_ratio),
            f(s.mean_expansions),
            f(s.mean_reexpansions)
        );
    }
    Ok(())
}
