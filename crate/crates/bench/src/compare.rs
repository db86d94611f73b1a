//! Head-to-head comparison of two runs over the same instance-seed pairs.
//!
//! Ratios below 1.0 favor run A. Bound win counts assume minimization
//! instances (higher dual and lower primal are better).

use std::collections::BTreeMap;

use crate::records::RunRecord;
use crate::stats::{shifted_geomean, wilcoxon_signed_rank, WilcoxonResult};
use crate::BenchError;

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub pairs: usize,
    /// Pairs solved to optimality by both runs.
    pub both_solved: usize,
    /// Shifted-geomean time ratio A/B over pairs solved by both.
    pub time_ratio: Option<f64>,
    /// Shifted-geomean node ratio A/B over pairs solved by both.
    pub node_ratio: Option<f64>,
    /// Solved-count difference (A minus B).
    pub delta_solved: i64,
    /// Dual-bound win difference over pairs unsolved by at least one side.
    pub delta_dual: i64,
    /// Primal-bound win difference over those same pairs.
    pub delta_primal: i64,
    /// Fraction of pairs whose status, node count, or cut count differ.
    pub affected_fraction: f64,
    /// Wilcoxon signed-rank on (time_B, time_A) over affected solved pairs:
    /// small p with positive differences means A is faster.
    pub wilcoxon: WilcoxonResult,
    /// Per affected pair: (instance, seed, relative time improvement of A
    /// over B).
    pub improvements: Vec<(String, u64, f64)>,
}

pub fn compare_runs(
    a: &[RunRecord],
    b: &[RunRecord],
    time_shift: f64,
    node_shift: f64,
) -> Result<CompareReport, BenchError> {
    let key = |r: &RunRecord| (r.instance.clone(), r.seed);
    let map_a: BTreeMap<_, &RunRecord> = a.iter().map(|r| (key(r), r)).collect();
    let map_b: BTreeMap<_, &RunRecord> = b.iter().map(|r| (key(r), r)).collect();
    if map_a.len() != a.len() || map_b.len() != b.len() {
        return Err(BenchError::MismatchedPairs("duplicate instance-seed pair".into()));
    }
    if map_a.keys().ne(map_b.keys()) {
        let only_a = map_a.keys().find(|k| !map_b.contains_key(*k));
        let only_b = map_b.keys().find(|k| !map_a.contains_key(*k));
        return Err(BenchError::MismatchedPairs(format!(
            "a-only {only_a:?}, b-only {only_b:?}"
        )));
    }

    let mut times_a = Vec::new();
    let mut times_b = Vec::new();
    let mut nodes_a = Vec::new();
    let mut nodes_b = Vec::new();
    let mut delta_solved = 0i64;
    let mut delta_dual = 0i64;
    let mut delta_primal = 0i64;
    let mut affected = 0usize;
    let mut wilcoxon_pairs = Vec::new();
    let mut improvements = Vec::new();

    for (k, ra) in &map_a {
        let rb = map_b[k];
        delta_solved += ra.solved() as i64 - rb.solved() as i64;
        let pair_affected = ra.status != rb.status
            || ra.nodes != rb.nodes
            || ra.cuts_added != rb.cuts_added;
        if pair_affected {
            affected += 1;
            let denom = rb.time.max(1e-9);
            improvements.push((k.0.clone(), k.1, (rb.time - ra.time) / denom));
        }
        if ra.solved() && rb.solved() {
            times_a.push(ra.time);
            times_b.push(rb.time);
            nodes_a.push(ra.nodes as f64);
            nodes_b.push(rb.nodes as f64);
            if pair_affected {
                wilcoxon_pairs.push((rb.time, ra.time));
            }
        } else {
            // Bound wins among pairs unsolved by at least one side.
            if ra.dual_bound > rb.dual_bound + 1e-9 {
                delta_dual += 1;
            } else if rb.dual_bound > ra.dual_bound + 1e-9 {
                delta_dual -= 1;
            }
            if ra.primal_bound < rb.primal_bound - 1e-9 {
                delta_primal += 1;
            } else if rb.primal_bound < ra.primal_bound - 1e-9 {
                delta_primal -= 1;
            }
        }
    }

    let ratio = |xs: &[f64], ys: &[f64], shift: f64| -> Option<f64> {
        if xs.is_empty() {
            return None;
        }
        let gx = shifted_geomean(xs, shift).ok()?;
        let gy = shifted_geomean(ys, shift).ok()?;
        Some(gx / gy)
    };
    let time_ratio = ratio(&times_a, &times_b, time_shift);
    let node_ratio = ratio(&nodes_a, &nodes_b, node_shift);

    Ok(CompareReport {
        pairs: map_a.len(),
        both_solved: times_a.len(),
        time_ratio,
        node_ratio,
        delta_solved,
        delta_dual,
        delta_primal,
        affected_fraction: affected as f64 / map_a.len().max(1) as f64,
        wilcoxon: wilcoxon_signed_rank(&wilcoxon_pairs),
        improvements,
    })
}

impl CompareReport {
    pub const CSV_HEADER: &'static str = "pairs,both_solved,time_ratio,node_ratio,delta_solved,\
        delta_dual,delta_primal,affected_fraction,wilcoxon_p,wilcoxon_low_power";

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or("nan".to_string(), |x| x.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.pairs,
            self.both_solved,
            opt(self.time_ratio),
            opt(self.node_ratio),
            self.delta_solved,
            self.delta_dual,
            self.delta_primal,
            self.affected_fraction,
            self.wilcoxon.p_value,
            self.wilcoxon.low_power
        )
    }
}
