//! Per-solve result rows and their CSV form.
//!
//! The format is plain comma-separated text with a fixed header; fields
//! never contain commas or quotes. Floats are written with Rust's shortest
//! round-trip formatting, so finite values re-parse bit-exactly.

use std::fmt::Write as _;

use fathom_core::engine::{SolveStats, SolveStatus};

use crate::BenchError;

pub const RESULTS_HEADER: &str =
    "instance,seed,config_id,status,nodes,time,cuts_added,nonzeros_added,primal_bound,dual_bound";

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub seed: u64,
    pub config_id: String,
    pub status: SolveStatus,
    pub nodes: usize,
    pub time: f64,
    pub cuts_added: usize,
    pub nonzeros_added: usize,
    pub primal_bound: f64,
    pub dual_bound: f64,
}

impl RunRecord {
    pub fn from_stats(
        instance: &str,
        seed: u64,
        config_id: &str,
        stats: &SolveStats,
        zero_time: bool,
    ) -> Self {
        RunRecord {
            instance: instance.to_string(),
            seed,
            config_id: config_id.to_string(),
            status: stats.status,
            nodes: stats.nodes,
            time: if zero_time { 0.0 } else { stats.wall_time },
            cuts_added: stats.cuts_added,
            nonzeros_added: stats.nonzeros_added,
            primal_bound: stats.primal_bound,
            dual_bound: stats.dual_bound,
        }
    }

    pub fn solved(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

pub fn status_str(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::TimeLimit => "time_limit",
        SolveStatus::NodeLimit => "node_limit",
    }
}

fn status_from_str(s: &str) -> Option<SolveStatus> {
    match s {
        "optimal" => Some(SolveStatus::Optimal),
        "infeasible" => Some(SolveStatus::Infeasible),
        "time_limit" => Some(SolveStatus::TimeLimit),
        "node_limit" => Some(SolveStatus::NodeLimit),
        _ => None,
    }
}

/// Render records (sorted by instance, seed, config) as a results CSV.
pub fn write_results_csv(records: &[RunRecord]) -> String {
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.instance, a.seed, &a.config_id).cmp(&(&b.instance, b.seed, &b.config_id))
    });
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in sorted {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.instance,
            r.seed,
            r.config_id,
            status_str(r.status),
            r.nodes,
            r.time,
            r.cuts_added,
            r.nonzeros_added,
            r.primal_bound,
            r.dual_bound
        )
        .unwrap();
    }
    out
}

pub fn parse_results_csv(text: &str, path: &str) -> Result<Vec<RunRecord>, BenchError> {
    let err = |line: usize, msg: String| BenchError::Csv { path: path.to_string(), line, msg };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == RESULTS_HEADER => {}
        Some((_, header)) => {
            return Err(err(1, format!("unexpected header `{header}`")));
        }
        None => return Err(err(0, "empty file".into())),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(err(lineno, format!("expected 10 fields, found {}", f.len())));
        }
        let status = status_from_str(f[3])
            .ok_or_else(|| err(lineno, format!("unknown status `{}`", f[3])))?;
        let num =
            |s: &str| s.parse::<f64>().map_err(|_| err(lineno, format!("bad number `{s}`")));
        let int = |s: &str| {
            s.parse::<usize>().map_err(|_| err(lineno, format!("bad integer `{s}`")))
        };
        records.push(RunRecord {
            instance: f[0].to_string(),
            seed: f[1].parse().map_err(|_| err(lineno, format!("bad seed `{}`", f[1])))?,
            config_id: f[2].to_string(),
            status,
            nodes: int(f[4])?,
            time: num(f[5])?,
            cuts_added: int(f[6])?,
            nonzeros_added: int(f[7])?,
            primal_bound: num(f[8])?,
            dual_bound: num(f[9])?,
        });
    }
    Ok(records)
}

/// Generic small-table helper: `header` then one row per item.
pub fn write_table<T>(header: &str, rows: &[T], render: impl Fn(&T) -> String) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&render(row));
        out.push('\n');
    }
    out
}
