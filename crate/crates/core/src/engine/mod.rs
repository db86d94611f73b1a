//! Separation rounds, pseudo-cost and lock bookkeeping, and the
//! cut-and-branch solver.

mod bb;

pub use bb::{branch_and_bound, SelectorMode, SolveLimits, SolveStats, SolveStatus};

use thiserror::Error;

use crate::cutgen::generate_gmi_cuts;
use crate::cutsel::{
    nonzero_budget, select_cuts, ScoringContext, SelectionResult, SelectorConfig, StopReason,
};
use crate::model::{Cut, MilpInstance, RowSense};
use crate::simplex::{LpSession, LpSolution, LpStatus, SimplexError};

/// Tolerance for declaring a variable's LP value integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;
/// Fractionality window for GMI candidate rows.
const GMI_FRAC_TOL: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("root LP relaxation is unbounded")]
    RootUnbounded,
    #[error("LP did not converge (iteration limit)")]
    LpStall,
    #[error("pseudo-cost update requires positive fractionality, got {0}")]
    NonpositiveFractionality(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchDirection {
    Down,
    Up,
}

/// Historical objective gain per unit fractionality, per variable and
/// branching direction.
#[derive(Debug, Clone)]
pub struct PseudocostTable {
    up_sum: Vec<f64>,
    up_count: Vec<u32>,
    down_sum: Vec<f64>,
    down_count: Vec<u32>,
}

impl PseudocostTable {
    pub fn new(num_vars: usize) -> Self {
        PseudocostTable {
            up_sum: vec![0.0; num_vars],
            up_count: vec![0; num_vars],
            down_sum: vec![0.0; num_vars],
            down_count: vec![0; num_vars],
        }
    }

    /// Record one branching observation: `objective_gain / fractionality`
    /// is added to the directional sum.
    pub fn update(
        &mut self,
        var: usize,
        direction: BranchDirection,
        objective_gain: f64,
        fractionality: f64,
    ) -> Result<(), EngineError> {
        if !(fractionality > 0.0) {
            return Err(EngineError::NonpositiveFractionality(fractionality));
        }
        let unit = objective_gain / fractionality;
        match direction {
            BranchDirection::Up => {
                self.up_sum[var] += unit;
                self.up_count[var] += 1;
            }
            BranchDirection::Down => {
                self.down_sum[var] += unit;
                self.down_count[var] += 1;
            }
        }
        Ok(())
    }

    fn dir_avg(&self, var: usize, direction: BranchDirection) -> Option<f64> {
        let (sum, count) = match direction {
            BranchDirection::Up => (self.up_sum[var], self.up_count[var]),
            BranchDirection::Down => (self.down_sum[var], self.down_count[var]),
        };
        (count > 0).then(|| sum / count as f64)
    }

    /// Mean of the per-direction averages over every initialized
    /// (variable, direction) pair; 1.0 when nothing is initialized yet.
    fn global_fallback(&self) -> f64 {
        let mut total = 0.0;
        let mut entries = 0usize;
        for v in 0..self.up_sum.len() {
            if self.up_count[v] > 0 {
                total += self.up_sum[v] / self.up_count[v] as f64;
                entries += 1;
            }
            if self.down_count[v] > 0 {
                total += self.down_sum[v] / self.down_count[v] as f64;
                entries += 1;
            }
        }
        if entries == 0 {
            1.0
        } else {
            total / entries as f64
        }
    }

    /// Directional pseudo-cost with the global-average fallback.
    pub fn psi_dir(&self, var: usize, direction: BranchDirection) -> f64 {
        self.dir_avg(var, direction).unwrap_or_else(|| self.global_fallback())
    }

    /// Pseudo-cost of a variable: the mean of its up- and down-direction
    /// averages, with uninitialized directions falling back to the global
    /// average (1.0 on a fresh table).
    pub fn psi(&self, var: usize) -> f64 {
        0.5 * (self.psi_dir(var, BranchDirection::Up) + self.psi_dir(var, BranchDirection::Down))
    }

    pub fn psi_vector(&self) -> Vec<f64> {
        (0..self.up_sum.len()).map(|v| self.psi(v)).collect()
    }
}

/// Count, for every variable, the constraints blocking movement toward its
/// lower bound (down-locks) and upper bound (up-locks). An equality row
/// locks both directions of every support variable.
pub fn compute_locks(inst: &MilpInstance) -> (Vec<u32>, Vec<u32>) {
    let n = inst.num_vars();
    let mut down = vec![0u32; n];
    let mut up = vec![0u32; n];
    for row in &inst.rows {
        for &(j, v) in &row.coeffs {
            if v == 0.0 {
                continue;
            }
            match row.sense {
                RowSense::Le => {
                    if v > 0.0 {
                        up[j] += 1;
                    } else {
                        down[j] += 1;
                    }
                }
                RowSense::Ge => {
                    if v > 0.0 {
                        down[j] += 1;
                    } else {
                        up[j] += 1;
                    }
                }
                RowSense::Eq => {
                    down[j] += 1;
                    up[j] += 1;
                }
            }
        }
    }
    (down, up)
}

/// How the root separation picks cuts from each round's pool.
#[derive(Debug, Clone)]
pub(crate) enum CutPolicy<'a> {
    /// Full scoring, filtering, and stopping rules.
    Scored(&'a SelectorConfig),
    /// Pool order up to the same nonzero budget and per-round cut count;
    /// no scoring or parallelism handling.
    Unranked(&'a SelectorConfig),
}

/// Take cuts in pool order under the budget and count limits only.
fn select_unranked(pool: &[Cut], n: usize, cfg: &SelectorConfig) -> SelectionResult {
    let budget = nonzero_budget(n, cfg.budget_multiplier);
    let mut selected = Vec::new();
    let mut selected_indices = Vec::new();
    let mut nonzeros_added = 0usize;
    let stop_reason;
    let mut i = 0;
    loop {
        if selected.len() >= cfg.max_cuts_per_round {
            stop_reason = StopReason::MaxCuts;
            break;
        }
        if i >= pool.len() {
            stop_reason = StopReason::PoolExhausted;
            break;
        }
        let cut = &pool[i];
        if nonzeros_added + cut.nnz() > budget {
            stop_reason = StopReason::NonzeroBudget;
            if selected.is_empty() {
                nonzeros_added += cut.nnz();
                selected.push(cut.clone());
                selected_indices.push(i);
            }
            break;
        }
        nonzeros_added += cut.nnz();
        selected.push(cut.clone());
        selected_indices.push(i);
        i += 1;
    }
    let count = selected.len();
    SelectionResult {
        selected,
        selected_indices,
        scores: vec![0.0; count],
        rejected_density: 0,
        rejected_parallelism: 0,
        nonzeros_added,
        stop_reason,
    }
}

pub(crate) struct SeparationOutcome {
    pub solution: LpSolution,
    pub rounds: Vec<SelectionResult>,
}

/// Run separation rounds on an already-optimal session: generate GMI cuts,
/// select, append, resolve. Stops on the round limit, an integral optimum,
/// an empty pool or selection, or a resolve that fails to reach optimality
/// (the last optimal solution is kept).
pub(crate) fn run_separation(
    session: &mut LpSession,
    mut sol: LpSolution,
    inst: &MilpInstance,
    policy: &CutPolicy,
    round_limit: usize,
    pseudocosts: &[f64],
    downlocks: &[u32],
    uplocks: &[u32],
) -> Result<SeparationOutcome, EngineError> {
    let mut rounds = Vec::new();
    for round in 0..round_limit {
        if sol.status != LpStatus::Optimal || inst.is_integral(&sol.x, INTEGRALITY_TOL) {
            break;
        }
        let pool = generate_gmi_cuts(session, &sol, round, GMI_FRAC_TOL, usize::MAX);
        if pool.is_empty() {
            break;
        }
        let result = match policy {
            CutPolicy::Scored(cfg) => {
                let ctx = ScoringContext {
                    x_lp: sol.x.clone(),
                    objective: inst.objective.clone(),
                    pseudocosts: pseudocosts.to_vec(),
                    downlocks: downlocks.to_vec(),
                    uplocks: uplocks.to_vec(),
                    integrality: inst.integrality.clone(),
                };
                select_cuts(&pool, &ctx, cfg)
            }
            CutPolicy::Unranked(cfg) => select_unranked(&pool, inst.num_vars(), cfg),
        };
        if result.selected.is_empty() {
            rounds.push(result);
            break;
        }
        session.append_cuts(&result.selected)?;
        let resolved = session.solve();
        rounds.push(result);
        if resolved.status != LpStatus::Optimal {
            break;
        }
        sol = resolved;
    }
    Ok(SeparationOutcome { solution: sol, rounds })
}

/// Run up to `round_limit` separation rounds on the LP relaxation of
/// `inst`, with fresh pseudo-costs and instance locks. Returns the final
/// relaxation solution and the per-round selection results.
pub fn separation_loop(
    inst: &MilpInstance,
    cfg: &SelectorConfig,
    round_limit: usize,
) -> Result<(LpSolution, Vec<SelectionResult>), EngineError> {
    let mut session = LpSession::new(inst, &[])?;
    let sol = session.solve();
    if sol.status != LpStatus::Optimal {
        return Ok((sol, Vec::new()));
    }
    let (down, up) = compute_locks(inst);
    let psi = PseudocostTable::new(inst.num_vars()).psi_vector();
    let outcome =
        run_separation(&mut session, sol, inst, &CutPolicy::Scored(cfg), round_limit, &psi, &down, &up)?;
    Ok((outcome.solution, outcome.rounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Row;

    fn single_row(coeffs: Vec<(usize, f64)>, sense: RowSense, rhs: f64, n: usize) -> MilpInstance {
        MilpInstance {
            name: "t".into(),
            objective: vec![0.0; n],
            var_names: (0..n).map(|j| format!("x{j}")).collect(),
            rows: vec![Row { name: "r0".into(), coeffs, sense, rhs }],
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            integrality: vec![false; n],
            minimize: true,
        }
    }

    #[test]
    fn lock_sign_rules() {
        let inst = single_row(vec![(0, 1.0), (1, 1.0)], RowSense::Le, 1.0, 2);
        assert_eq!(compute_locks(&inst), (vec![0, 0], vec![1, 1]));

        let inst = single_row(vec![(0, 1.0), (1, -1.0)], RowSense::Le, 0.0, 2);
        assert_eq!(compute_locks(&inst), (vec![0, 1], vec![1, 0]));

        let inst = single_row(vec![(0, 1.0), (1, 1.0)], RowSense::Eq, 1.0, 2);
        assert_eq!(compute_locks(&inst), (vec![1, 1], vec![1, 1]));
    }

    #[test]
    fn locks_equivariant_under_row_reorder() {
        let mut inst = single_row(vec![(0, 1.0), (1, -2.0)], RowSense::Le, 1.0, 3);
        inst.rows.push(Row {
            name: "r1".into(),
            coeffs: vec![(1, 1.0), (2, 1.0)],
            sense: RowSense::Ge,
            rhs: 0.0,
        });
        let before = compute_locks(&inst);
        inst.rows.reverse();
        assert_eq!(compute_locks(&inst), before);
    }

    #[test]
    fn pseudocost_update_and_mean() {
        let mut t = PseudocostTable::new(2);
        t.update(0, BranchDirection::Up, 2.0, 0.5).unwrap();
        assert_eq!(t.up_sum[0], 4.0);
        assert_eq!(t.up_count[0], 1);
        // Zero gain still counts an observation.
        t.update(0, BranchDirection::Up, 0.0, 0.5).unwrap();
        assert_eq!(t.up_sum[0], 4.0);
        assert_eq!(t.up_count[0], 2);
        // Two observations averaging to 3.
        let mut t2 = PseudocostTable::new(1);
        t2.update(0, BranchDirection::Down, 4.0, 1.0).unwrap();
        t2.update(0, BranchDirection::Down, 2.0, 1.0).unwrap();
        assert_eq!(t2.dir_avg(0, BranchDirection::Down), Some(3.0));
    }

    #[test]
    fn psi_fallbacks() {
        let t = PseudocostTable::new(3);
        assert_eq!(t.psi(0), 1.0); // empty table

        let mut t = PseudocostTable::new(2);
        t.update(0, BranchDirection::Up, 3.0, 1.0).unwrap();
        t.update(0, BranchDirection::Down, 1.0, 1.0).unwrap();
        assert_eq!(t.psi(0), 2.0);

        // Only a down entry of 5 elsewhere: untouched variables inherit it.
        let mut t = PseudocostTable::new(2);
        t.update(0, BranchDirection::Down, 5.0, 1.0).unwrap();
        assert_eq!(t.psi(1), 5.0);
    }

    #[test]
    fn pseudocost_rejects_bad_fractionality() {
        let mut t = PseudocostTable::new(1);
        assert!(t.update(0, BranchDirection::Up, 1.0, 0.0).is_err());
        assert!(t.update(0, BranchDirection::Up, 1.0, -0.5).is_err());
    }

    #[test]
    fn separation_zero_rounds_returns_relaxation() {
        let mut inst = single_row(vec![(0, 2.0)], RowSense::Le, 3.0, 1);
        inst.objective = vec![-1.0];
        inst.integrality = vec![true];
        let cfg = SelectorConfig::default();
        let (sol, rounds) = separation_loop(&inst, &cfg, 0).unwrap();
        assert!(rounds.is_empty());
        assert!((sol.x[0] - 1.5).abs() < 1e-9);
    }

    #[test]
    fn separation_tightens_single_knapsack() {
        // LP value -1.5 must rise to -1 after one round.
        let mut inst = single_row(vec![(0, 2.0)], RowSense::Le, 3.0, 1);
        inst.objective = vec![-1.0];
        inst.integrality = vec![true];
        let cfg = SelectorConfig { density_threshold: 1.0, ..SelectorConfig::default() };
        let (sol, rounds) = separation_loop(&inst, &cfg, 5).unwrap();
        assert!(!rounds.is_empty());
        assert!(sol.objective > -1.5 + 1e-9, "objective {}", sol.objective);
        assert!((sol.objective - (-1.0)).abs() < 1e-6);
    }

    #[test]
    fn separation_integral_optimum_stops_immediately() {
        let mut inst = single_row(vec![(0, 1.0)], RowSense::Le, 2.0, 1);
        inst.objective = vec![-1.0];
        inst.integrality = vec![true];
        let cfg = SelectorConfig::default();
        let (sol, rounds) = separation_loop(&inst, &cfg, 5).unwrap();
        assert!(rounds.is_empty());
        assert!((sol.x[0] - 2.0).abs() < 1e-9);
    }
}
