//! Cut-and-branch: separation at the root, then best-bound-first
//! branch-and-bound with pseudo-cost branching.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::cutsel::SelectorConfig;
use crate::model::MilpInstance;
use crate::simplex::{LpSession, LpStatus};

use super::{
    compute_locks, run_separation, BranchDirection, CutPolicy, EngineError, PseudocostTable,
    INTEGRALITY_TOL,
};

/// Nodes whose LP bound is within this of the incumbent are fathomed.
const PRUNE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    TimeLimit,
    NodeLimit,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveLimits {
    /// Wall-clock limit in seconds.
    pub time_limit: Option<f64>,
    /// Maximum number of node LPs to solve.
    pub node_limit: Option<usize>,
}

/// Solve outcome. For a minimization instance `dual_bound <= primal_bound`
/// (within tolerance) whenever both are finite; the inequality flips for
/// maximization.
#[derive(Debug, Clone, Copy)]
pub struct SolveStats {
    pub status: SolveStatus,
    pub primal_bound: f64,
    pub dual_bound: f64,
    pub nodes: usize,
    pub rounds: usize,
    pub cuts_added: usize,
    pub nonzeros_added: usize,
    pub wall_time: f64,
}

/// Root cut treatment.
#[derive(Debug, Clone)]
pub enum SelectorMode {
    /// Score, filter, and select per the configuration.
    Scored(SelectorConfig),
    /// Add generated cuts in pool order up to the same budget, bypassing
    /// scoring and filtering.
    Unranked(SelectorConfig),
    /// No cuts at all.
    Disabled,
}

struct Node {
    bound: f64,
    id: u64,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// (variable, direction, fractionality, parent objective) of the branch
    /// that created this node; None for the root's children bookkeeping.
    branch: Option<(usize, BranchDirection, f64, f64)>,
}

/// Min-heap ordering on (bound, id).
impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.id == other.id
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap pops the maximum, we want the smallest bound,
        // then the smallest id.
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.id.cmp(&self.id))
    }
}

fn fractional_part(v: f64) -> f64 {
    v - v.floor()
}

/// Check a candidate incumbent against the *original* rows, bounds, and
/// integrality before accepting it.
fn accepts_incumbent(inst: &MilpInstance, x: &[f64]) -> bool {
    for j in 0..inst.num_vars() {
        if x[j] < inst.lower[j] - INTEGRALITY_TOL || x[j] > inst.upper[j] + INTEGRALITY_TOL {
            return false;
        }
        if inst.integrality[j] && (x[j] - x[j].round()).abs() > INTEGRALITY_TOL {
            return false;
        }
    }
    inst.rows.iter().all(|row| row.satisfied_by(x, INTEGRALITY_TOL))
}

/// Exact cut-and-branch solver: separation rounds at the root only, then
/// best-bound-first branch-and-bound with pseudo-cost branching (product
/// rule; on a fresh table this degrades to most-fractional). `seed`
/// perturbs LP pricing tie-breaks only.
pub fn branch_and_bound(
    inst: &MilpInstance,
    mode: &SelectorMode,
    limits: &SolveLimits,
    seed: u64,
) -> Result<SolveStats, EngineError> {
    let start = Instant::now();
    // Canonicalize to minimization; bounds are mapped back at the end.
    let flip = !inst.minimize;
    let work = if flip {
        let mut w = inst.clone();
        w.objective.iter_mut().for_each(|c| *c = -*c);
        w.minimize = true;
        w
    } else {
        inst.clone()
    };

    let finish = |status, primal: f64, dual: f64, nodes, rounds, cuts, nnz| {
        let (primal_bound, dual_bound) = if flip { (-primal, -dual) } else { (primal, dual) };
        Ok(SolveStats {
            status,
            primal_bound,
            dual_bound,
            nodes,
            rounds,
            cuts_added: cuts,
            nonzeros_added: nnz,
            wall_time: start.elapsed().as_secs_f64(),
        })
    };

    let n = work.num_vars();
    let mut session = LpSession::with_seed(&work, &[], seed)?;
    let mut sol = session.solve();
    let mut nodes = 1usize;
    match sol.status {
        LpStatus::Infeasible => {
            return finish(SolveStatus::Infeasible, f64::INFINITY, f64::INFINITY, nodes, 0, 0, 0)
        }
        LpStatus::Unbounded => return Err(EngineError::RootUnbounded),
        LpStatus::IterationLimit => return Err(EngineError::LpStall),
        LpStatus::Optimal => {}
    }

    let mut table = PseudocostTable::new(n);
    let (downlocks, uplocks) = compute_locks(&work);

    // Root separation.
    let (mut rounds_run, mut cuts_added, mut nonzeros_added) = (0usize, 0usize, 0usize);
    if !matches!(mode, SelectorMode::Disabled) {
        let policy = match mode {
            SelectorMode::Scored(cfg) => CutPolicy::Scored(cfg),
            SelectorMode::Unranked(cfg) => CutPolicy::Unranked(cfg),
            SelectorMode::Disabled => unreachable!(),
        };
        let round_limit = match mode {
            SelectorMode::Scored(cfg) | SelectorMode::Unranked(cfg) => cfg.max_rounds,
            SelectorMode::Disabled => 0,
        };
        let psi = table.psi_vector();
        let outcome = run_separation(
            &mut session,
            sol,
            &work,
            &policy,
            round_limit,
            &psi,
            &downlocks,
            &uplocks,
        )?;
        sol = outcome.solution;
        rounds_run = outcome.rounds.len();
        for r in &outcome.rounds {
            cuts_added += r.selected.len();
            nonzeros_added += r.nonzeros_added;
        }
    }

    let mut incumbent: Option<f64> = None;
    let mut heap: BinaryHeap<Node> = BinaryHeap::new();
    let mut next_id = 0u64;

    // Process the root like any node, then loop over the heap.
    let mut pending = Some(Node {
        bound: sol.objective,
        id: next_id,
        lower: work.lower.clone(),
        upper: work.upper.clone(),
        branch: None,
    });
    next_id += 1;
    let mut root_solution = Some(sol);

    let status = loop {
        if let Some(limit) = limits.time_limit {
            if start.elapsed().as_secs_f64() >= limit {
                break SolveStatus::TimeLimit;
            }
        }
        let node = match pending.take() {
            Some(node) => node,
            None => match heap.pop() {
                Some(node) => node,
                None => break SolveStatus::Optimal,
            },
        };
        if let Some(best) = incumbent {
            if node.bound >= best - PRUNE_TOL {
                continue; // fathomed by bound before solving
            }
        }

        // Root reuses the already-solved relaxation.
        let node_sol = match root_solution.take() {
            Some(s) => s,
            None => {
                if let Some(limit) = limits.node_limit {
                    if nodes >= limit {
                        // Re-queue so the dual bound still covers this node.
                        heap.push(node);
                        break SolveStatus::NodeLimit;
                    }
                }
                for j in 0..n {
                    session.set_var_bounds(j, node.lower[j], node.upper[j]);
                }
                let s = session.solve();
                nodes += 1;
                if let Some((var, dir, frac, parent_obj)) = node.branch {
                    if s.status == LpStatus::Optimal {
                        let gain = (s.objective - parent_obj).max(0.0);
                        table.update(var, dir, gain, frac)?;
                    }
                }
                s
            }
        };

        match node_sol.status {
            LpStatus::Infeasible => continue,
            LpStatus::Optimal => {}
            LpStatus::Unbounded => return Err(EngineError::RootUnbounded),
            LpStatus::IterationLimit => return Err(EngineError::LpStall),
        }
        let obj = node_sol.objective;
        if let Some(best) = incumbent {
            if obj >= best - PRUNE_TOL {
                continue;
            }
        }

        if work.is_integral(&node_sol.x, INTEGRALITY_TOL) {
            if accepts_incumbent(&work, &node_sol.x) {
                incumbent = Some(obj);
            }
            continue;
        }

        // Rounding check: snap integer variables and test original rows.
        let mut rounded = node_sol.x.clone();
        for j in 0..n {
            if work.integrality[j] {
                rounded[j] = rounded[j].round();
            }
        }
        if accepts_incumbent(&work, &rounded) {
            let robj = work.objective_value(&rounded);
            if incumbent.map_or(true, |best| robj < best - PRUNE_TOL) {
                incumbent = Some(robj);
                if obj >= robj - PRUNE_TOL {
                    continue;
                }
            }
        }

        // Pseudo-cost product branching with 1e-6 offsets.
        let mut branch_var = usize::MAX;
        let mut branch_score = f64::NEG_INFINITY;
        for j in 0..n {
            if !work.integrality[j] {
                continue;
            }
            let f = fractional_part(node_sol.x[j]);
            if f <= INTEGRALITY_TOL || f >= 1.0 - INTEGRALITY_TOL {
                continue;
            }
            let down = table.psi_dir(j, BranchDirection::Down) * f;
            let up = table.psi_dir(j, BranchDirection::Up) * (1.0 - f);
            let score = down.max(1e-6) * up.max(1e-6);
            if score > branch_score {
                branch_score = score;
                branch_var = j;
            }
        }
        debug_assert!(branch_var != usize::MAX);
        let x_val = node_sol.x[branch_var];
        let f = fractional_part(x_val);

        let mut down_child = Node {
            bound: obj,
            id: next_id,
            lower: node.lower.clone(),
            upper: node.upper.clone(),
            branch: Some((branch_var, BranchDirection::Down, f, obj)),
        };
        next_id += 1;
        down_child.upper[branch_var] = x_val.floor();
        let mut up_child = Node {
            bound: obj,
            id: next_id,
            lower: node.lower,
            upper: node.upper,
            branch: Some((branch_var, BranchDirection::Up, 1.0 - f, obj)),
        };
        next_id += 1;
        up_child.lower[branch_var] = x_val.ceil();
        heap.push(down_child);
        heap.push(up_child);
    };

    let primal = incumbent.unwrap_or(f64::INFINITY);
    let dual = match status {
        SolveStatus::Optimal => {
            if incumbent.is_some() {
                primal
            } else {
                f64::INFINITY // exhausted tree, no integer point: infeasible
            }
        }
        _ => {
            let open = heap.iter().map(|nd| nd.bound).fold(f64::INFINITY, f64::min);
            open.min(primal)
        }
    };
    let status = match status {
        SolveStatus::Optimal if incumbent.is_none() => SolveStatus::Infeasible,
        s => s,
    };
    finish(status, primal, dual, nodes, rounds_run, cuts_added, nonzeros_added)
}
