//! `fathom` — branch-and-cut solver and benchmark harness CLI.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use fathom_bench::compare::{compare_runs, CompareReport};
use fathom_bench::harness::{
    features_csv, load_instance_dir, parse_features_csv, pick_diverse, resolve_config, run_bench,
    BenchJob, CurationFilter,
};
use fathom_bench::records::{parse_results_csv, write_results_csv, write_table, RunRecord};
use fathom_bench::stats::emit_histogram;
use fathom_bench::tune::{random_search_tune, TuneObjective, TuneSpace};
use fathom_core::engine::{branch_and_bound, SolveLimits};
use fathom_core::model::parse_mps;

#[derive(Parser)]
#[command(
    name = "fathom",
    about = "Branch-and-cut MILP solver with configurable cut selection",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy, Default)]
struct LimitArgs {
    /// Wall-clock limit per solve, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Node limit per solve.
    #[arg(long)]
    node_limit: Option<usize>,
}

impl LimitArgs {
    fn to_limits(self) -> SolveLimits {
        SolveLimits { time_limit: self.time_limit, node_limit: self.node_limit }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one MPS instance and print its result row.
    Solve {
        instance: PathBuf,
        /// Selector configuration file, or a built-in name
        /// (default, nocuts, unranked, filter).
        #[arg(long, default_value = "default")]
        config: String,
        /// Perturbs LP pricing tie-breaks only.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Run a directory of instances under several configurations and seeds.
    Bench {
        dir: PathBuf,
        /// Comma-separated configuration names or file paths.
        #[arg(long, default_value = "default")]
        configs: String,
        /// Seed list: `1..5` (inclusive) or `1,2,3`.
        #[arg(long, default_value = "1..5")]
        seeds: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Concurrent solves.
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        /// Write wall time as 0 so repeated runs are byte-identical.
        #[arg(long)]
        zero_time: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Compare two result CSVs over the same instance-seed pairs.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Shift for the solve-time geometric means.
        #[arg(long, default_value_t = 1.0)]
        time_shift: f64,
        /// Shift for the node-count geometric means.
        #[arg(long, default_value_t = 10.0)]
        node_shift: f64,
        /// Also write per-pair relative time improvements.
        #[arg(long)]
        improvements_out: Option<PathBuf>,
    },
    /// Extract instance features as CSV.
    Features {
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pick a maximally diverse subset of instances in feature space.
    Pick {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Prior results CSV for training-style filtering.
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, default_value_t = 0.01)]
        min_time: f64,
        #[arg(long, default_value_t = 60.0)]
        max_time: f64,
        #[arg(long, default_value_t = 10)]
        min_nodes: usize,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random-search tuning of the selector parameters.
    Tune {
        dir: PathBuf,
        #[arg(long)]
        passes: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// `time` (paper objective) or `nodes` (deterministic).
        #[arg(long, default_value = "time")]
        objective: String,
        /// Write the evaluation trace.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Write the best configuration file here (stdout otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Histogram of one numeric CSV column.
    Hist {
        csv: PathBuf,
        #[arg(long)]
        bins: usize,
        #[arg(long, default_value = "value")]
        column: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().context("bad seed range start")?;
        let hi: u64 = hi.trim().parse().context("bad seed range end")?;
        if lo > hi {
            bail!("empty seed range `{text}`");
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse::<u64>().with_context(|| format!("bad seed `{s}`")))
        .collect()
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Solve { instance, config, seed, limits } => {
            let text = std::fs::read_to_string(&instance)
                .with_context(|| format!("reading {}", instance.display()))?;
            let inst = parse_mps(&text)?;
            let name =
                instance.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let (config_id, mode) = resolve_config(&config)?;
            let stats = branch_and_bound(&inst, &mode, &limits.to_limits(), seed)?;
            let record = RunRecord::from_stats(&name, seed, &config_id, &stats, false);
            print!("{}", write_results_csv(std::slice::from_ref(&record)));
            Ok(())
        }
        Command::Bench { dir, configs, seeds, out, workers, zero_time, limits } => {
            let instances = load_instance_dir(&dir)?;
            let configs = configs
                .split(',')
                .map(|c| resolve_config(c.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let job = BenchJob {
                configs,
                seeds: parse_seeds(&seeds)?,
                limits: limits.to_limits(),
                workers,
                zero_time,
            };
            let records = run_bench(&instances, &job)?;
            emit(out.as_ref(), &write_results_csv(&records))
        }
        Command::Compare { a, b, time_shift, node_shift, improvements_out } => {
            let ra = parse_results_csv(&std::fs::read_to_string(&a)?, &a.to_string_lossy())?;
            let rb = parse_results_csv(&std::fs::read_to_string(&b)?, &b.to_string_lossy())?;
            let report = compare_runs(&ra, &rb, time_shift, node_shift)?;
            println!("{}", CompareReport::CSV_HEADER);
            println!("{}", report.to_csv_row());
            if let Some(path) = improvements_out {
                let table = write_table(
                    "instance,seed,rel_improvement",
                    &report.improvements,
                    |(inst, seed, imp)| format!("{inst},{seed},{imp}"),
                );
                emit(Some(&path), &table)?;
            }
            Ok(())
        }
        Command::Features { dir, out } => {
            let instances = load_instance_dir(&dir)?;
            emit(out.as_ref(), &features_csv(&instances))
        }
        Command::Pick {
            features,
            k,
            seed,
            stats,
            min_time,
            max_time,
            min_nodes,
            max_nodes,
            out,
        } => {
            let feats = parse_features_csv(
                &std::fs::read_to_string(&features)?,
                &features.to_string_lossy(),
            )?;
            let records;
            let stats_arg = match &stats {
                Some(path) => {
                    records = parse_results_csv(
                        &std::fs::read_to_string(path)?,
                        &path.to_string_lossy(),
                    )?;
                    let filter = CurationFilter { min_time, max_time, min_nodes, max_nodes };
                    Some((records.as_slice(), filter))
                }
                None => None,
            };
            let picked = pick_diverse(&feats, k, seed, stats_arg)?;
            let table = write_table("instance", &picked, |name| name.clone());
            emit(out.as_ref(), &table)
        }
        Command::Tune { dir, passes, seed, objective, trace_out, out, limits } => {
            let instances = load_instance_dir(&dir)?;
            let objective = match objective.as_str() {
                "time" => TuneObjective::Time,
                "nodes" => TuneObjective::Nodes,
                other => bail!("unknown objective `{other}` (use time or nodes)"),
            };
            let (best, trace) = random_search_tune(
                &TuneSpace::default(),
                &instances,
                passes,
                seed,
                objective,
                &limits.to_limits(),
            )?;
            if let Some(path) = trace_out {
                let table =
                    write_table("pass,ratio", &trace, |t| format!("{},{}", t.pass, t.ratio));
                emit(Some(&path), &table)?;
            }
            emit(out.as_ref(), &best.to_config_string())
        }
        Command::Hist { csv, bins, column, out } => {
            if bins == 0 {
                bail!("--bins must be at least 1");
            }
            let text = std::fs::read_to_string(&csv)?;
            let mut lines = text.lines();
            let header = lines.next().context("empty csv")?;
            let col = header
                .split(',')
                .position(|c| c.trim() == column)
                .with_context(|| format!("column `{column}` not in header `{header}`"))?;
            let mut values = Vec::new();
            for (idx, line) in lines.enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let field = line
                    .split(',')
                    .nth(col)
                    .with_context(|| format!("line {}: missing column", idx + 2))?;
                values.push(
                    field
                        .trim()
                        .parse::<f64>()
                        .with_context(|| format!("line {}: bad number `{field}`", idx + 2))?,
                );
            }
            let rows = emit_histogram(&values, bins);
            let table = write_table("bin_low,bin_high,count", &rows, |(lo, hi, c)| {
                format!("{lo},{hi},{c}")
            });
            emit(out.as_ref(), &table)
        }
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
