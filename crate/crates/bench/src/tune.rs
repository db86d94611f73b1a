//! Random-search parameter tuning.
//!
//! Configurations are sampled uniformly from declared ranges (log-uniform
//! for the scoring weights, which span decades), each is benchmarked
//! against the shipped default on the same instance set, and the
//! configuration minimizing the shifted-geomean ratio wins. Deterministic
//! for a fixed seed.

use fathom_core::cutsel::{FilterMode, SelectorConfig};
use fathom_core::engine::{branch_and_bound, SelectorMode, SolveLimits};
use fathom_core::model::MilpInstance;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::stats::shifted_geomean;
use crate::BenchError;

/// Which solve statistic the tuning objective aggregates. Solve time is
/// the usual choice; node counts are deterministic and therefore suit
/// tests and tiny instances where timing noise dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TuneObjective {
    Time,
    Nodes,
}

impl TuneObjective {
    fn shift(self) -> f64 {
        match self {
            TuneObjective::Time => 1.0,
            TuneObjective::Nodes => 10.0,
        }
    }
}

/// Sampling ranges; collapse a range to a point to pin a parameter.
#[derive(Debug, Clone)]
pub struct TuneSpace {
    /// Log-uniform range applied to each scoring weight independently.
    pub weight_range: (f64, f64),
    pub maxsps_range: (f64, f64),
    pub endsps_range: (f64, f64),
    pub density_range: (f64, f64),
    pub parallelism_range: (f64, f64),
    /// Log-uniform.
    pub penalty_range: (f64, f64),
    pub budget_range: (f64, f64),
    pub modes: Vec<FilterMode>,
    pub allow_lock_complement: bool,
}

impl Default for TuneSpace {
    fn default() -> Self {
        TuneSpace {
            weight_range: (0.01, 10.0),
            maxsps_range: (0.1, 2.0),
            endsps_range: (0.1, 1.0),
            density_range: (0.1, 1.0),
            parallelism_range: (0.1, 1.0),
            penalty_range: (0.01, 1.0),
            budget_range: (0.25, 4.0),
            modes: vec![
                FilterMode::ParallelismFilter,
                FilterMode::ParallelismPenalty,
                FilterMode::NoFilter,
            ],
            allow_lock_complement: true,
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        (rng.gen_range(lo.ln()..hi.ln())).exp()
    }
}

impl TuneSpace {
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> SelectorConfig {
        let base = SelectorConfig::default();
        SelectorConfig {
            lambda_eff: log_uniform(rng, self.weight_range),
            lambda_exp: log_uniform(rng, self.weight_range),
            lambda_obp: log_uniform(rng, self.weight_range),
            lambda_isp: log_uniform(rng, self.weight_range),
            lambda_psc: log_uniform(rng, self.weight_range),
            lambda_loc: log_uniform(rng, self.weight_range),
            lambda_sps: log_uniform(rng, self.weight_range),
            lock_complement: self.allow_lock_complement && rng.gen_bool(0.5),
            maxsps: uniform(rng, self.maxsps_range),
            endsps: uniform(rng, self.endsps_range),
            density_threshold: uniform(rng, self.density_range),
            filter_mode: self.modes[rng.gen_range(0..self.modes.len())],
            parallelism_threshold: uniform(rng, self.parallelism_range),
            penalty: log_uniform(rng, self.penalty_range),
            removal_threshold: base.removal_threshold,
            budget_multiplier: uniform(rng, self.budget_range),
            max_cuts_per_round: base.max_cuts_per_round,
            max_rounds: base.max_rounds,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TuneTrial {
    pub pass: usize,
    pub config: SelectorConfig,
    /// Shifted-geomean ratio of the objective metric vs the default
    /// configuration; below 1.0 is an improvement.
    pub ratio: f64,
}

/// Evaluate one configuration over the instance set, returning the chosen
/// metric per instance.
fn evaluate(
    cfg: &SelectorConfig,
    instances: &[(String, MilpInstance)],
    objective: TuneObjective,
    limits: &SolveLimits,
    solve_seed: u64,
) -> Result<Vec<f64>, BenchError> {
    let mode = SelectorMode::Scored(cfg.clone());
    let mut metrics = Vec::with_capacity(instances.len());
    for (_, inst) in instances {
        let stats = branch_and_bound(inst, &mode, limits, solve_seed)?;
        metrics.push(match objective {
            TuneObjective::Time => stats.wall_time,
            TuneObjective::Nodes => stats.nodes as f64,
        });
    }
    Ok(metrics)
}

/// Random search: sample `passes` configurations, benchmark each against
/// the default config, and return the minimizer together with the full
/// trace. Ties keep the earliest trial.
pub fn random_search_tune(
    space: &TuneSpace,
    instances: &[(String, MilpInstance)],
    passes: usize,
    seed: u64,
    objective: TuneObjective,
    limits: &SolveLimits,
) -> Result<(SelectorConfig, Vec<TuneTrial>), BenchError> {
    if instances.is_empty() {
        return Err(BenchError::Empty("tuning needs at least one instance"));
    }
    assert!(passes >= 1, "passes must be >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift = objective.shift();

    let baseline = evaluate(&SelectorConfig::default(), instances, objective, limits, 1)?;
    let baseline_gm = shifted_geomean(&baseline, shift)?;

    let mut trace = Vec::with_capacity(passes);
    let mut best: Option<(f64, SelectorConfig)> = None;
    for pass in 0..passes {
        let cfg = space.sample(&mut rng);
        let metrics = evaluate(&cfg, instances, objective, limits, 1)?;
        let gm = shifted_geomean(&metrics, shift)?;
        // Compare shifted means directly; add the shift back to both sides
        // so an all-zero baseline stays well-defined.
        let ratio = (gm + shift) / (baseline_gm + shift);
        if best.as_ref().map_or(true, |(b, _)| ratio < *b) {
            best = Some((ratio, cfg.clone()));
        }
        trace.push(TuneTrial { pass, config: cfg, ratio });
    }
    Ok((best.expect("passes >= 1").1, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fathom_core::model::{Row, RowSense};

    fn toy_instance() -> (String, MilpInstance) {
        let inst = MilpInstance {
            name: "toy".into(),
            objective: vec![-5.0, -4.0],
            var_names: vec!["x0".into(), "x1".into()],
            rows: vec![
                Row {
                    name: "r0".into(),
                    coeffs: vec![(0, 6.0), (1, 4.0)],
                    sense: RowSense::Le,
                    rhs: 24.0,
                },
                Row {
                    name: "r1".into(),
                    coeffs: vec![(0, 1.0), (1, 2.0)],
                    sense: RowSense::Le,
                    rhs: 6.0,
                },
            ],
            lower: vec![0.0, 0.0],
            upper: vec![10.0, 10.0],
            integrality: vec![true, true],
            minimize: true,
        };
        ("toy".into(), inst)
    }

    fn collapsed_space() -> TuneSpace {
        TuneSpace {
            weight_range: (1.0, 1.0),
            maxsps_range: (1.0, 1.0),
            endsps_range: (0.4, 0.4),
            density_range: (0.4, 0.4),
            parallelism_range: (0.5, 0.5),
            penalty_range: (0.1, 0.1),
            budget_range: (1.0, 1.0),
            modes: vec![FilterMode::ParallelismPenalty],
            allow_lock_complement: false,
        }
    }

    #[test]
    fn collapsed_space_returns_the_single_point() {
        let instances = vec![toy_instance()];
        let space = collapsed_space();
        let (best, trace) = random_search_tune(
            &space,
            &instances,
            1,
            7,
            TuneObjective::Nodes,
            &SolveLimits::default(),
        )
        .unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(best, trace[0].config);
        assert_eq!(best.lambda_eff, 1.0);
        assert_eq!(best.density_threshold, 0.4);
        assert!(trace[0].ratio.is_finite());
    }

    #[test]
    fn identical_seeds_identical_traces() {
        let instances = vec![toy_instance()];
        let space = TuneSpace::default();
        let run = |seed| {
            random_search_tune(
                &space,
                &instances,
                4,
                seed,
                TuneObjective::Nodes,
                &SolveLimits::default(),
            )
            .unwrap()
        };
        let (best1, trace1) = run(33);
        let (best2, trace2) = run(33);
        assert_eq!(best1, best2);
        assert_eq!(trace1.len(), trace2.len());
        for (a, b) in trace1.iter().zip(&trace2) {
            assert_eq!(a.config, b.config);
            assert_eq!(a.ratio.to_bits(), b.ratio.to_bits());
        }
    }

    #[test]
    fn density_threshold_dominates_when_only_useful_cuts_are_dense() {
        // Three variables, but every root GMI cut lives on {x0, x1}: cut
        // density is 2/3, so only configurations with density_threshold
        // >= 2/3 can apply cuts and collapse the tree to one node. The
        // tuner, free only in the density threshold, must land above it.
        let mut inst = toy_instance().1;
        inst.objective.push(0.0);
        inst.var_names.push("x2".into());
        inst.lower.push(0.0);
        inst.upper.push(1.0);
        inst.integrality.push(true);
        inst.rows.push(Row {
            name: "pad".into(),
            coeffs: vec![(2, 1.0)],
            sense: RowSense::Le,
            rhs: 1.0,
        });
        let instances = vec![("toy3".to_string(), inst)];

        let space = TuneSpace { density_range: (0.1, 1.0), ..collapsed_space() };
        let (best, trace) = random_search_tune(
            &space,
            &instances,
            12,
            5,
            TuneObjective::Nodes,
            &SolveLimits::default(),
        )
        .unwrap();
        let cut_density = 2.0 / 3.0;
        assert!(
            best.density_threshold >= cut_density,
            "tuner picked threshold {} below the useful cut density",
            best.density_threshold
        );
        let best_ratio = trace.iter().map(|t| t.ratio).fold(f64::INFINITY, f64::min);
        assert!(best_ratio < 1.0, "no sampled config beat the default: {best_ratio}");
        // Low thresholds must really be worse, or the test proves nothing.
        let low = trace.iter().find(|t| t.config.density_threshold < 0.6).unwrap();
        assert!(low.ratio > best_ratio);
    }

    #[test]
    fn empty_instance_set_errors() {
        let space = TuneSpace::default();
        assert!(random_search_tune(
            &space,
            &[],
            1,
            0,
            TuneObjective::Nodes,
            &SolveLimits::default()
        )
        .is_err());
    }
}
