//! Batch execution over instance directories and training-set curation.

use std::path::{Path, PathBuf};

use fathom_core::cutsel::SelectorConfig;
use fathom_core::engine::{branch_and_bound, SelectorMode, SolveLimits};
use fathom_core::model::{
    compute_features, parse_mps, select_diverse_subset, InstanceFeatures, MilpInstance,
    FEATURE_COLUMNS,
};
use rayon::prelude::*;

use crate::records::RunRecord;
use crate::BenchError;

/// Load every `*.mps` file in a directory, sorted by file name so batch
/// order is stable.
pub fn load_instance_dir(dir: &Path) -> Result<Vec<(String, MilpInstance)>, BenchError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("mps")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(BenchError::Empty("no .mps files in directory"));
    }
    let mut out = Vec::with_capacity(paths.len());
    for path in paths {
        let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        let text = std::fs::read_to_string(&path)?;
        let inst = parse_mps(&text)?;
        out.push((name, inst));
    }
    Ok(out)
}

/// A named selector mode. Built-in ids: `default` (shipped configuration),
/// `nocuts` (separation off), `unranked` (pool order under the same
/// budget), `filter` (hard parallelism filtering). Anything else is read
/// as a configuration file path.
pub fn resolve_config(spec: &str) -> Result<(String, SelectorMode), BenchError> {
    match spec {
        "default" => Ok(("default".into(), SelectorMode::Scored(SelectorConfig::default()))),
        "nocuts" => Ok(("nocuts".into(), SelectorMode::Disabled)),
        "unranked" => {
            Ok(("unranked".into(), SelectorMode::Unranked(SelectorConfig::default())))
        }
        "filter" => {
            Ok(("filter".into(), SelectorMode::Scored(SelectorConfig::parallelism_filter())))
        }
        path => {
            let text = std::fs::read_to_string(path)?;
            let cfg = SelectorConfig::from_config_str(&text)?;
            let id = Path::new(path)
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            Ok((id, SelectorMode::Scored(cfg)))
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchJob {
    pub configs: Vec<(String, SelectorMode)>,
    pub seeds: Vec<u64>,
    pub limits: SolveLimits,
    pub workers: usize,
    /// Report wall time as zero so output files are bit-reproducible.
    pub zero_time: bool,
}

/// Solve every (instance, seed, config) combination, in parallel up to
/// `workers`, returning records sorted by (instance, seed, config).
pub fn run_bench(
    instances: &[(String, MilpInstance)],
    job: &BenchJob,
) -> Result<Vec<RunRecord>, BenchError> {
    let mut tasks = Vec::new();
    for (name, inst) in instances {
        for &seed in &job.seeds {
            for (config_id, mode) in &job.configs {
                tasks.push((name, inst, seed, config_id, mode));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(job.workers.max(1))
        .build()
        .expect("thread pool");
    let results: Result<Vec<RunRecord>, BenchError> = pool.install(|| {
        tasks
            .par_iter()
            .map(|(name, inst, seed, config_id, mode)| {
                let stats = branch_and_bound(inst, mode, &job.limits, *seed)?;
                Ok(RunRecord::from_stats(name, *seed, config_id, &stats, job.zero_time))
            })
            .collect()
    });
    let mut records = results?;
    records.sort_by(|a, b| {
        (&a.instance, a.seed, &a.config_id).cmp(&(&b.instance, b.seed, &b.config_id))
    });
    Ok(records)
}

pub const FEATURES_HEADER_PREFIX: &str = "instance";

/// Feature CSV: `instance` column followed by the nine feature fields.
pub fn features_csv(instances: &[(String, MilpInstance)]) -> String {
    let mut out = String::from(FEATURES_HEADER_PREFIX);
    for col in FEATURE_COLUMNS {
        out.push(',');
        out.push_str(col);
    }
    out.push('\n');
    for (name, inst) in instances {
        let f = compute_features(inst);
        out.push_str(name);
        for v in f.as_vec() {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn parse_features_csv(
    text: &str,
    path: &str,
) -> Result<Vec<(String, InstanceFeatures)>, BenchError> {
    let err = |line: usize, msg: String| BenchError::Csv { path: path.to_string(), line, msg };
    let mut lines = text.lines().enumerate();
    let expected_header = {
        let mut h = String::from(FEATURES_HEADER_PREFIX);
        for col in FEATURE_COLUMNS {
            h.push(',');
            h.push_str(col);
        }
        h
    };
    match lines.next() {
        Some((_, header)) if header.trim_end() == expected_header => {}
        Some((_, header)) => return Err(err(1, format!("unexpected header `{header}`"))),
        None => return Err(err(0, "empty file".into())),
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(err(idx + 1, format!("expected 10 fields, found {}", f.len())));
        }
        let mut vals = [0.0f64; 9];
        for (k, v) in f[1..].iter().enumerate() {
            vals[k] = v
                .parse()
                .map_err(|_| err(idx + 1, format!("bad number `{v}`")))?;
        }
        out.push((
            f[0].to_string(),
            InstanceFeatures {
                frac_rows_le: vals[0],
                frac_rows_ge: vals[1],
                frac_rows_eq: vals[2],
                frac_vars_binary: vals[3],
                frac_vars_integer: vals[4],
                frac_vars_continuous: vals[5],
                avg_row_density: vals[6],
                max_row_density: vals[7],
                objective_density: vals[8],
            },
        ));
    }
    Ok(out)
}

/// Bounds for training-style filtering of candidate instances by a prior
/// stats CSV. The scaled-down defaults suit desk-size runs.
#[derive(Debug, Clone, Copy)]
pub struct CurationFilter {
    pub min_time: f64,
    pub max_time: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
}

impl Default for CurationFilter {
    fn default() -> Self {
        CurationFilter { min_time: 0.01, max_time: 60.0, min_nodes: 10, max_nodes: 100_000 }
    }
}

impl CurationFilter {
    /// An instance stays if *every* record of it in the stats set is within
    /// the windows and solved to optimality.
    pub fn keep(&self, records: &[&RunRecord]) -> bool {
        !records.is_empty()
            && records.iter().all(|r| {
                r.solved()
                    && r.time >= self.min_time
                    && r.time <= self.max_time
                    && r.nodes >= self.min_nodes
                    && r.nodes <= self.max_nodes
            })
    }
}

/// Diverse subset selection over a feature CSV, optionally pre-filtered by
/// solve statistics. Returns the chosen instance names in pick order.
pub fn pick_diverse(
    features: &[(String, InstanceFeatures)],
    k: usize,
    seed: u64,
    stats: Option<(&[RunRecord], CurationFilter)>,
) -> Result<Vec<String>, BenchError> {
    let candidates: Vec<(String, InstanceFeatures)> = match stats {
        None => features.to_vec(),
        Some((records, filter)) => features
            .iter()
            .filter(|(name, _)| {
                let mine: Vec<&RunRecord> =
                    records.iter().filter(|r| &r.instance == name).collect();
                filter.keep(&mine)
            })
            .cloned()
            .collect(),
    };
    let feats: Vec<InstanceFeatures> = candidates.iter().map(|(_, f)| *f).collect();
    let idx = select_diverse_subset(&feats, k, seed)?;
    Ok(idx.into_iter().map(|i| candidates[i].0.clone()).collect())
}
