//! Cut scoring, filtering, and selection.
//!
//! A separation round hands a pool of candidate cuts to [`select_cuts`],
//! which removes cuts above a density threshold, ranks the rest by a
//! weighted sum of scoring measures, and picks greedily while either
//! removing or penalizing cuts parallel to earlier picks. Selection stops
//! when the pool is exhausted, the per-round cut count is reached, or the
//! nonzero budget `ceil(mu * n)` would be exceeded.
//!
//! Measures without an inherent [0, 1] range (efficacy, expected
//! improvement, pseudo-cost, lock) are normalized by their maximum over the
//! round's pool; objective parallelism, integer support, and the sparsity
//! score are bounded by construction.

mod config;

pub use config::ConfigError;

use crate::model::Cut;

/// Per-round scoring inputs: the fractional LP solution plus per-variable
/// statistics maintained by the solving process.
#[derive(Debug, Clone)]
pub struct ScoringContext {
    pub x_lp: Vec<f64>,
    pub objective: Vec<f64>,
    /// Pseudo-cost estimate per variable, nonnegative.
    pub pseudocosts: Vec<f64>,
    pub downlocks: Vec<u32>,
    pub uplocks: Vec<u32>,
    pub integrality: Vec<bool>,
}

impl ScoringContext {
    pub fn num_vars(&self) -> usize {
        self.x_lp.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterMode {
    /// Remove remaining cuts too parallel to each selected cut.
    ParallelismFilter,
    /// Subtract a parallelism penalty from their score instead, removing
    /// them only when the score drops below the removal threshold.
    ParallelismPenalty,
    NoFilter,
}

/// All knobs of the selection algorithm. Loadable from a `key = value`
/// configuration file; see [`SelectorConfig::from_config_str`].
#[derive(Debug, Clone, PartialEq)]
pub struct SelectorConfig {
    pub lambda_eff: f64,
    pub lambda_exp: f64,
    pub lambda_obp: f64,
    pub lambda_isp: f64,
    pub lambda_psc: f64,
    pub lambda_loc: f64,
    pub lambda_sps: f64,
    /// Score cuts on variables with few locks instead of many.
    pub lock_complement: bool,
    pub maxsps: f64,
    pub endsps: f64,
    pub density_threshold: f64,
    pub filter_mode: FilterMode,
    pub parallelism_threshold: f64,
    pub penalty: f64,
    pub removal_threshold: f64,
    pub budget_multiplier: f64,
    pub max_cuts_per_round: usize,
    pub max_rounds: usize,
}

impl Default for SelectorConfig {
    fn default() -> Self {
        SelectorConfig {
            lambda_eff: 1.0,
            lambda_exp: 0.1,
            lambda_obp: 0.1,
            lambda_isp: 0.1,
            lambda_psc: 0.1,
            lambda_loc: 0.1,
            lambda_sps: 0.2,
            lock_complement: false,
            maxsps: 1.0,
            endsps: 0.4,
            density_threshold: 0.4,
            filter_mode: FilterMode::ParallelismPenalty,
            parallelism_threshold: 0.5,
            penalty: 0.1,
            removal_threshold: 0.0,
            budget_multiplier: 1.0,
            max_cuts_per_round: 100,
            max_rounds: 10,
        }
    }
}

impl SelectorConfig {
    /// Preset using hard parallelism filtering at the customary 0.95
    /// threshold.
    pub fn parallelism_filter() -> Self {
        SelectorConfig {
            filter_mode: FilterMode::ParallelismFilter,
            parallelism_threshold: 0.95,
            ..SelectorConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let weights = [
            ("lambda_eff", self.lambda_eff),
            ("lambda_exp", self.lambda_exp),
            ("lambda_obp", self.lambda_obp),
            ("lambda_isp", self.lambda_isp),
            ("lambda_psc", self.lambda_psc),
            ("lambda_loc", self.lambda_loc),
            ("lambda_sps", self.lambda_sps),
            ("maxsps", self.maxsps),
            ("penalty", self.penalty),
        ];
        for (name, w) in weights {
            if !w.is_finite() || w < 0.0 {
                return Err(ConfigError::Range { key: name, msg: "must be finite and >= 0" });
            }
        }
        if !(self.endsps > 0.0 && self.endsps <= 1.0) {
            return Err(ConfigError::Range { key: "endsps", msg: "must lie in (0, 1]" });
        }
        if !(self.density_threshold > 0.0 && self.density_threshold <= 1.0) {
            return Err(ConfigError::Range { key: "density_threshold", msg: "must lie in (0, 1]" });
        }
        if !(0.0..=1.0).contains(&self.parallelism_threshold) {
            return Err(ConfigError::Range {
                key: "parallelism_threshold",
                msg: "must lie in [0, 1]",
            });
        }
        if !(self.budget_multiplier > 0.0) {
            return Err(ConfigError::Range { key: "budget_multiplier", msg: "must be > 0" });
        }
        if !self.removal_threshold.is_finite() {
            return Err(ConfigError::Range { key: "removal_threshold", msg: "must be finite" });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    PoolExhausted,
    NonzeroBudget,
    MaxCuts,
}

/// Outcome of one selection pass.
#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub selected: Vec<Cut>,
    /// Index of each selected cut in the input pool.
    pub selected_indices: Vec<usize>,
    /// Score of each selected cut at the moment it was picked.
    pub scores: Vec<f64>,
    pub rejected_density: usize,
    pub rejected_parallelism: usize,
    pub nonzeros_added: usize,
    pub stop_reason: StopReason,
}

/// Distance from `x_lp` to the cut hyperplane, signed: positive iff the cut
/// is violated.
pub fn efficacy(cut: &Cut, x_lp: &[f64]) -> f64 {
    cut.violation(x_lp) / cut.norm()
}

/// Absolute cosine of the angle between the cut and the objective, in
/// [0, 1]; zero when the objective vector vanishes.
pub fn objective_parallelism(cut: &Cut, objective: &[f64]) -> f64 {
    let c_norm = objective.iter().map(|c| c * c).sum::<f64>().sqrt();
    if c_norm == 0.0 {
        return 0.0;
    }
    let dot: f64 = cut.alpha.iter().map(|&(j, v)| v * objective[j]).sum();
    (dot.abs() / (cut.norm() * c_norm)).min(1.0)
}

/// Fraction of the cut's support on integrality-constrained variables.
pub fn integer_support(cut: &Cut, integrality: &[bool]) -> f64 {
    let int_nnz = cut.alpha.iter().filter(|&&(j, _)| integrality[j]).count();
    int_nnz as f64 / cut.nnz() as f64
}

/// Estimated objective change from projecting the LP optimum onto the cut:
/// objective parallelism times efficacy times the objective norm.
pub fn expected_improvement(cut: &Cut, x_lp: &[f64], objective: &[f64]) -> f64 {
    let c_norm = objective.iter().map(|c| c * c).sum::<f64>().sqrt();
    objective_parallelism(cut, objective) * efficacy(cut, x_lp) * c_norm
}

/// Objective change predicted by the pseudo-costs: each support variable
/// contributes its pseudo-cost times the magnitude of its coordinate after
/// projecting `x_lp` onto the cut hyperplane.
pub fn pseudocost_score(cut: &Cut, x_lp: &[f64], pseudocosts: &[f64]) -> f64 {
    let norm_sq: f64 = cut.alpha.iter().map(|&(_, v)| v * v).sum();
    let violation = cut.violation(x_lp);
    cut.alpha
        .iter()
        .map(|&(j, v)| pseudocosts[j] * (x_lp[j] - v * violation / norm_sq).abs())
        .sum()
}

/// Total down- plus up-locks over the cut's support, averaged by the
/// variable count. Complement handling happens after round normalization.
pub fn lock_score(cut: &Cut, downlocks: &[u32], uplocks: &[u32], n: usize) -> f64 {
    let total: u64 = cut
        .alpha
        .iter()
        .map(|&(j, _)| downlocks[j] as u64 + uplocks[j] as u64)
        .sum();
    total as f64 / n as f64
}

/// Sparsity reward: linear decay from `maxsps` at density zero down to zero
/// at density `endsps`, clamped at zero beyond.
pub fn sparsity_score(cut: &Cut, n: usize, maxsps: f64, endsps: f64) -> f64 {
    let density = cut.density(n);
    (maxsps - maxsps / endsps * density).max(0.0)
}

/// Divide every score by the round maximum; an all-zero round stays zero.
pub fn normalize_round(raw: &[f64]) -> Vec<f64> {
    let max = raw.iter().cloned().fold(0.0f64, f64::max);
    if max > 0.0 {
        raw.iter().map(|s| s / max).collect()
    } else {
        vec![0.0; raw.len()]
    }
}

/// Absolute cosine similarity of two cuts' coefficient vectors.
pub fn parallelism(a: &Cut, b: &Cut) -> f64 {
    let mut dot = 0.0;
    let (mut ia, mut ib) = (0, 0);
    while ia < a.alpha.len() && ib < b.alpha.len() {
        let (ja, va) = a.alpha[ia];
        let (jb, vb) = b.alpha[ib];
        if ja == jb {
            dot += va * vb;
            ia += 1;
            ib += 1;
        } else if ja < jb {
            ia += 1;
        } else {
            ib += 1;
        }
    }
    (dot.abs() / (a.norm() * b.norm())).min(1.0)
}

/// Round-normalized lock scores, optionally complemented.
pub fn normalized_lock_scores(pool: &[Cut], ctx: &ScoringContext, complement: bool) -> Vec<f64> {
    let raw: Vec<f64> = pool
        .iter()
        .map(|c| lock_score(c, &ctx.downlocks, &ctx.uplocks, ctx.num_vars()))
        .collect();
    let mut normalized = normalize_round(&raw);
    if complement {
        for v in &mut normalized {
            *v = 1.0 - *v;
        }
    }
    normalized
}

/// Weighted-sum score of every cut in the pool. Efficacy and expected
/// improvement are clamped at zero before normalization so that pools
/// containing satisfied cuts keep every normalized measure in [0, 1].
pub fn total_score(pool: &[Cut], ctx: &ScoringContext, cfg: &SelectorConfig) -> Vec<f64> {
    let n = ctx.num_vars();
    let eff_raw: Vec<f64> = pool.iter().map(|c| efficacy(c, &ctx.x_lp).max(0.0)).collect();
    let exp_raw: Vec<f64> = pool
        .iter()
        .map(|c| expected_improvement(c, &ctx.x_lp, &ctx.objective).max(0.0))
        .collect();
    let psc_raw: Vec<f64> =
        pool.iter().map(|c| pseudocost_score(c, &ctx.x_lp, &ctx.pseudocosts)).collect();
    let eff_hat = normalize_round(&eff_raw);
    let exp_hat = normalize_round(&exp_raw);
    let psc_hat = normalize_round(&psc_raw);
    let loc_hat = normalized_lock_scores(pool, ctx, cfg.lock_complement);
    pool.iter()
        .enumerate()
        .map(|(i, cut)| {
            cfg.lambda_eff * eff_hat[i]
                + cfg.lambda_exp * exp_hat[i]
                + cfg.lambda_obp * objective_parallelism(cut, &ctx.objective)
                + cfg.lambda_isp * integer_support(cut, &ctx.integrality)
                + cfg.lambda_psc * psc_hat[i]
                + cfg.lambda_loc * loc_hat[i]
                + cfg.lambda_sps * sparsity_score(cut, n, cfg.maxsps, cfg.endsps)
        })
        .collect()
}

/// Remove cuts with density strictly above the threshold; the boundary is
/// kept. Runs before any scoring.
pub fn density_filter(pool: Vec<Cut>, n: usize, threshold: f64) -> (Vec<Cut>, usize) {
    let before = pool.len();
    let kept: Vec<Cut> = pool.into_iter().filter(|c| c.density(n) <= threshold).collect();
    let rejected = before - kept.len();
    (kept, rejected)
}

/// Per-round nonzero budget `ceil(mu * n)`. A small slack keeps exact
/// products like 0.3 * 10 from rounding up.
pub fn nonzero_budget(n: usize, multiplier: f64) -> usize {
    ((multiplier * n as f64) - 1e-9).ceil().max(0.0) as usize
}

struct Candidate {
    pool_idx: usize,
    cut: Cut,
    score: f64,
    eff: f64,
    nnz: usize,
}

/// Greedy selection under the configured scoring, filtering, and stopping
/// rules. Ties in score break by higher efficacy, then fewer nonzeros, then
/// lower pool index. The first pick is admitted even when it alone exceeds
/// the nonzero budget.
pub fn select_cuts(pool: &[Cut], ctx: &ScoringContext, cfg: &SelectorConfig) -> SelectionResult {
    let n = ctx.num_vars();
    // Density filtering runs before scoring; keep input-pool indices for
    // deterministic tie-breaking. The predicate matches `density_filter`.
    let mut kept = Vec::new();
    let mut kept_idx = Vec::new();
    for (i, c) in pool.iter().enumerate() {
        if c.density(n) <= cfg.density_threshold {
            kept.push(c.clone());
            kept_idx.push(i);
        }
    }
    let rejected_density = pool.len() - kept.len();
    let scores = total_score(&kept, ctx, cfg);
    let mut remaining: Vec<Candidate> = kept
        .into_iter()
        .zip(kept_idx)
        .zip(scores)
        .map(|((cut, pool_idx), score)| Candidate {
            pool_idx,
            eff: efficacy(&cut, &ctx.x_lp),
            nnz: cut.nnz(),
            cut,
            score,
        })
        .collect();

    let budget = nonzero_budget(n, cfg.budget_multiplier);
    let mut selected = Vec::new();
    let mut selected_indices = Vec::new();
    let mut picked_scores = Vec::new();
    let mut rejected_parallelism = 0usize;
    let mut nonzeros_added = 0usize;
    let stop_reason;

    loop {
        if selected.len() >= cfg.max_cuts_per_round {
            stop_reason = StopReason::MaxCuts;
            break;
        }
        if remaining.is_empty() {
            stop_reason = StopReason::PoolExhausted;
            break;
        }
        let best_pos = argmax_candidate(&remaining);
        if nonzeros_added + remaining[best_pos].nnz > budget {
            stop_reason = StopReason::NonzeroBudget;
            if selected.is_empty() {
                let best = remaining.swap_remove(best_pos);
                nonzeros_added += best.nnz;
                picked_scores.push(best.score);
                selected_indices.push(best.pool_idx);
                selected.push(best.cut);
            }
            break;
        }
        let best = remaining.remove(best_pos);
        nonzeros_added += best.nnz;
        picked_scores.push(best.score);
        selected_indices.push(best.pool_idx);
        let picked = best.cut;

        match cfg.filter_mode {
            FilterMode::ParallelismFilter => {
                let before = remaining.len();
                remaining.retain(|c| parallelism(&picked, &c.cut) <= cfg.parallelism_threshold);
                rejected_parallelism += before - remaining.len();
            }
            FilterMode::ParallelismPenalty => {
                for c in &mut remaining {
                    let p = parallelism(&picked, &c.cut);
                    if p > cfg.parallelism_threshold {
                        c.score -= cfg.penalty * p;
                    }
                }
                let before = remaining.len();
                remaining.retain(|c| c.score >= cfg.removal_threshold);
                rejected_parallelism += before - remaining.len();
            }
            FilterMode::NoFilter => {}
        }
        selected.push(picked);
    }

    SelectionResult {
        selected,
        selected_indices,
        scores: picked_scores,
        rejected_density,
        rejected_parallelism,
        nonzeros_added,
        stop_reason,
    }
}

fn argmax_candidate(remaining: &[Candidate]) -> usize {
    let mut best = 0;
    for i in 1..remaining.len() {
        let (a, b) = (&remaining[i], &remaining[best]);
        let better = if a.score != b.score {
            a.score > b.score
        } else if a.eff != b.eff {
            a.eff > b.eff
        } else if a.nnz != b.nnz {
            a.nnz < b.nnz
        } else {
            a.pool_idx < b.pool_idx
        };
        if better {
            best = i;
        }
    }
    best
}
