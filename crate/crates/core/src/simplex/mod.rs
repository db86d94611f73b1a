//! Bounded-variable primal simplex.
//!
//! The solver works on the computational form `Ax + s = b` with one slack
//! per row; row sense is folded into slack bounds (LE: `s >= 0`, GE:
//! `s <= 0`, EQ: `s = 0`). Cut rows are LE rows appended after the
//! instance's own. The basis inverse is kept explicitly and refactorized
//! every [`REFACTOR_INTERVAL`] pivots; between refactorizations it is
//! maintained by product-form updates.
//!
//! Feasibility is restored (phase 1) by minimizing the sum of bound
//! violations of the basic variables with costs recomputed each iteration;
//! an infeasible basic variable moving toward its violated bound blocks
//! there, so total infeasibility never increases. Pricing is Dantzig with a
//! switch to Bland's rule after `10 * (num vars + num rows)` iterations.
//!
//! A session owns mutable factorization state and must not be shared across
//! threads; independent sessions may run concurrently.

use thiserror::Error;

use crate::model::{Cut, MilpInstance, RowSense};

/// Bound-violation tolerance for declaring a point feasible.
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// Reduced-cost tolerance for declaring a basis optimal.
pub const OPTIMALITY_TOL: f64 = 1e-9;

const PIVOT_TOL: f64 = 1e-9;
const RATIO_TIE: f64 = 1e-9;
const REFACTOR_INTERVAL: u32 = 50;

#[derive(Debug, Error)]
pub enum SimplexError {
    #[error("cut references variable {var} but instance has {n} variables")]
    CutDimension { var: usize, n: usize },
    #[error("warm basis has {got} statuses, expected between {min} and {max}")]
    BasisDimension { got: usize, min: usize, max: usize },
    #[error("warm basis marks {got} variables basic, expected {expected}")]
    BasisCount { got: usize, expected: usize },
    #[error("variable {0} is not basic")]
    NotBasic(usize),
    #[error("no optimal factorization available; call solve() first")]
    NotSolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Per-variable basis tag. Slots `0..n` are structural variables, slots
/// `n..n+m` the row slacks. A nonbasic free variable is tagged `AtLower`
/// and sits at value zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
}

/// A snapshot of basis tags, usable to warm-start a later solve (possibly
/// one with additional cut rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub statuses: Vec<VarStatus>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Structural variable values; meaningful when status is `Optimal`.
    pub x: Vec<f64>,
    /// Objective `c'x` in the instance's stated sense.
    pub objective: f64,
    pub basis: Basis,
    /// `a_i'x` for every row, instance rows first, then cuts.
    pub row_activities: Vec<f64>,
}

/// One row of the simplex tableau: `sum_j coeffs[j] * z_j = rhs` holds for
/// every point `z` (structural variables then slacks) satisfying all rows,
/// and `coeffs[basic_var] = 1`.
#[derive(Debug, Clone)]
pub struct TableauRow {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
    pub basic_value: f64,
}

/// Internal row storage: coefficients over structural variables plus the
/// equality right-hand side; sense lives in the slack bounds.
struct SessionRow {
    coeffs: Vec<(usize, f64)>,
    rhs: f64,
}

/// A solver session: one LP (instance rows plus appended cuts) together
/// with mutable basis/factorization state.
pub struct LpSession {
    n: usize,
    rows: Vec<SessionRow>,
    /// Column-major structural coefficients; slack columns are implicit.
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Internal minimization costs (structural slots only are nonzero).
    cost: Vec<f64>,
    /// +1 when the instance minimizes, -1 when it maximizes.
    obj_sign: f64,
    integrality: Vec<bool>,
    seed: u64,

    status: Vec<VarStatus>,
    basic: Vec<usize>,
    /// Row-major m x m explicit basis inverse.
    binv: Vec<f64>,
    /// Basic variable values, aligned with `basic`.
    xb: Vec<f64>,
    pivots_since_refactor: u32,
    needs_refactor: bool,
    needs_revalue: bool,
    solved_optimal: bool,
}

impl LpSession {
    pub fn new(inst: &MilpInstance, cuts: &[Cut]) -> Result<Self, SimplexError> {
        Self::with_seed(inst, cuts, 0)
    }

    /// `seed` perturbs pricing tie-breaks only; the returned optimum is
    /// unaffected.
    pub fn with_seed(inst: &MilpInstance, cuts: &[Cut], seed: u64) -> Result<Self, SimplexError> {
        let n = inst.num_vars();
        let obj_sign = if inst.minimize { 1.0 } else { -1.0 };
        let mut session = LpSession {
            n,
            rows: Vec::with_capacity(inst.num_rows() + cuts.len()),
            cols: vec![Vec::new(); n],
            lower: inst.lower.clone(),
            upper: inst.upper.clone(),
            cost: inst.objective.iter().map(|c| obj_sign * c).collect(),
            obj_sign,
            integrality: inst.integrality.clone(),
            seed,
            status: Vec::new(),
            basic: Vec::new(),
            binv: Vec::new(),
            xb: Vec::new(),
            pivots_since_refactor: 0,
            needs_refactor: false,
            needs_revalue: false,
            solved_optimal: false,
        };
        for row in &inst.rows {
            let (slack_lo, slack_hi) = match row.sense {
                RowSense::Le => (0.0, f64::INFINITY),
                RowSense::Ge => (f64::NEG_INFINITY, 0.0),
                RowSense::Eq => (0.0, 0.0),
            };
            session.push_row(row.coeffs.clone(), row.rhs, slack_lo, slack_hi);
        }
        session.append_cuts(cuts)?;
        session.crash_basis();
        Ok(session)
    }

    pub fn num_structural(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn total_vars(&self) -> usize {
        self.n + self.rows.len()
    }

    pub fn is_integer_var(&self, j: usize) -> bool {
        j < self.n && self.integrality[j]
    }

    pub fn var_bounds(&self, j: usize) -> (f64, f64) {
        (self.lower[j], self.upper[j])
    }

    pub fn var_status(&self, j: usize) -> VarStatus {
        self.status[j]
    }

    /// Structural coefficients and equality rhs of row `i` (`a_i'x + s_i = b_i`).
    pub fn row_data(&self, i: usize) -> (&[(usize, f64)], f64) {
        (&self.rows[i].coeffs, self.rows[i].rhs)
    }

    fn push_row(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64, slack_lo: f64, slack_hi: f64) {
        let row_idx = self.rows.len();
        for &(j, v) in &coeffs {
            self.cols[j].push((row_idx, v));
        }
        self.rows.push(SessionRow { coeffs, rhs });
        self.lower.insert(self.n + row_idx, slack_lo);
        self.upper.insert(self.n + row_idx, slack_hi);
        self.cost.push(0.0);
    }

    /// Append cut rows (`alpha'x <= beta`), keeping the current basis; the
    /// new slacks become basic. The next solve restores feasibility from
    /// there.
    pub fn append_cuts(&mut self, cuts: &[Cut]) -> Result<(), SimplexError> {
        for cut in cuts {
            if let Some(&(j, _)) = cut.alpha.last() {
                if j >= self.n {
                    return Err(SimplexError::CutDimension { var: j, n: self.n });
                }
            }
        }
        let had_basis = !self.basic.is_empty();
        for cut in cuts {
            let row_idx = self.rows.len();
            self.push_row(cut.alpha.clone(), cut.beta, 0.0, f64::INFINITY);
            if had_basis {
                let slack = self.n + row_idx;
                self.status.push(VarStatus::Basic);
                self.basic.push(slack);
            }
        }
        if !cuts.is_empty() {
            self.needs_refactor = true;
            self.solved_optimal = false;
        }
        Ok(())
    }

    /// Change a structural variable's bounds (tightening or relaxing); the
    /// basis is kept and nonbasic values follow the new bounds.
    pub fn set_var_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        debug_assert!(j < self.n);
        self.lower[j] = lo;
        self.upper[j] = hi;
        self.needs_revalue = true;
        self.solved_optimal = false;
    }

    /// Install a warm basis. The snapshot may come from a solve with fewer
    /// cut rows; slacks of rows it does not cover become basic.
    pub fn install_basis(&mut self, basis: &Basis) -> Result<(), SimplexError> {
        let total = self.total_vars();
        let min = self.n; // covering only structural variables is useless but harmless
        if basis.statuses.len() < min || basis.statuses.len() > total {
            return Err(SimplexError::BasisDimension {
                got: basis.statuses.len(),
                min,
                max: total,
            });
        }
        let covered_rows = basis.statuses.len() - self.n;
        let basic_count = basis.statuses.iter().filter(|s| **s == VarStatus::Basic).count();
        if basic_count != covered_rows {
            return Err(SimplexError::BasisCount { got: basic_count, expected: covered_rows });
        }
        self.status = basis.statuses.clone();
        self.status.resize(total, VarStatus::Basic);
        self.basic = (0..total).filter(|&j| self.status[j] == VarStatus::Basic).collect();
        self.needs_refactor = true;
        self.solved_optimal = false;
        Ok(())
    }

    /// All-slack starting basis with structural variables at a finite bound
    /// (or zero when free).
    fn crash_basis(&mut self) {
        let m = self.rows.len();
        self.status = Vec::with_capacity(self.total_vars());
        for j in 0..self.n {
            if self.lower[j].is_finite() {
                self.status.push(VarStatus::AtLower);
            } else if self.upper[j].is_finite() {
                self.status.push(VarStatus::AtUpper);
            } else {
                self.status.push(VarStatus::AtLower); // free, sits at zero
            }
        }
        for _ in 0..m {
            self.status.push(VarStatus::Basic);
        }
        self.basic = (0..m).map(|i| self.n + i).collect();
        self.binv = identity(m);
        self.pivots_since_refactor = 0;
        self.compute_basic_values();
        self.needs_refactor = false;
        self.needs_revalue = false;
        self.solved_optimal = false;
    }

    /// Value of a nonbasic variable under its status tag.
    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.status[j] {
            VarStatus::AtLower => {
                if self.lower[j].is_finite() {
                    self.lower[j]
                } else {
                    0.0
                }
            }
            VarStatus::AtUpper => {
                if self.upper[j].is_finite() {
                    self.upper[j]
                } else {
                    0.0
                }
            }
            VarStatus::Basic => unreachable!("nonbasic_value on basic variable"),
        }
    }

    fn column(&self, j: usize) -> ColumnIter<'_> {
        if j < self.n {
            ColumnIter::Structural(self.cols[j].iter())
        } else {
            ColumnIter::Slack(Some(j - self.n))
        }
    }

    /// `xb = binv * (b - A_N x_N)`.
    fn compute_basic_values(&mut self) {
        let m = self.rows.len();
        let mut t: Vec<f64> = self.rows.iter().map(|r| r.rhs).collect();
        for j in 0..self.total_vars() {
            if self.status[j] == VarStatus::Basic {
                continue;
            }
            let val = self.nonbasic_value(j);
            if val != 0.0 {
                for (r, v) in self.column(j) {
                    t[r] -= v * val;
                }
            }
        }
        self.xb = vec![0.0; m];
        for p in 0..m {
            let mut acc = 0.0;
            for r in 0..m {
                acc += self.binv[p * m + r] * t[r];
            }
            self.xb[p] = acc;
        }
    }

    /// Rebuild the explicit inverse from the basic columns. Returns false
    /// when the basis matrix is numerically singular.
    fn refactor(&mut self) -> bool {
        let m = self.rows.len();
        // Gauss-Jordan on [B | I] with partial pivoting.
        let mut b = vec![0.0; m * m];
        for (p, &var) in self.basic.iter().enumerate() {
            for (r, v) in self.column(var) {
                b[r * m + p] = v;
            }
        }
        let mut inv = identity(m);
        for col in 0..m {
            let mut piv_row = col;
            let mut piv_abs = b[col * m + col].abs();
            for r in col + 1..m {
                let a = b[r * m + col].abs();
                if a > piv_abs {
                    piv_abs = a;
                    piv_row = r;
                }
            }
            if piv_abs < 1e-11 {
                return false;
            }
            if piv_row != col {
                for k in 0..m {
                    b.swap(col * m + k, piv_row * m + k);
                    inv.swap(col * m + k, piv_row * m + k);
                }
            }
            let piv = b[col * m + col];
            for k in 0..m {
                b[col * m + k] /= piv;
                inv[col * m + k] /= piv;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = b[r * m + col];
                if f == 0.0 {
                    continue;
                }
                for k in 0..m {
                    b[r * m + k] -= f * b[col * m + k];
                    inv[r * m + k] -= f * inv[col * m + k];
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refactor = 0;
        true
    }

    fn ensure_factorized(&mut self) -> bool {
        if self.needs_refactor {
            if !self.refactor() {
                self.crash_basis();
            }
            self.compute_basic_values();
            self.needs_refactor = false;
            self.needs_revalue = false;
        } else if self.needs_revalue {
            self.compute_basic_values();
            self.needs_revalue = false;
        }
        true
    }

    fn total_infeasibility(&self) -> f64 {
        let mut total = 0.0;
        for (p, &var) in self.basic.iter().enumerate() {
            let x = self.xb[p];
            if x > self.upper[var] {
                total += x - self.upper[var];
            } else if x < self.lower[var] {
                total += self.lower[var] - x;
            }
        }
        total
    }

    /// Solve from the current basis, running phase 1 first when basic
    /// values violate their bounds.
    pub fn solve(&mut self) -> LpSolution {
        self.ensure_factorized();
        let status = self.iterate();
        self.solved_optimal = status == LpStatus::Optimal;
        self.extract_solution(status)
    }

    fn iterate(&mut self) -> LpStatus {
        let total = self.total_vars();
        let bland_after = 10 * total as u64;
        let iter_limit = 200 * total as u64 + 10_000;
        let mut iterations = 0u64;
        let mut phase1_costs: Vec<f64> = Vec::new();

        loop {
            if iterations > iter_limit {
                return LpStatus::IterationLimit;
            }
            let bland = iterations > bland_after;
            let infeas = self.total_infeasibility();
            let phase1 = infeas > FEASIBILITY_TOL;

            let costs: &[f64] = if phase1 {
                phase1_costs.clear();
                phase1_costs.resize(total, 0.0);
                for (p, &var) in self.basic.iter().enumerate() {
                    let x = self.xb[p];
                    if x > self.upper[var] + FEASIBILITY_TOL {
                        phase1_costs[var] = 1.0;
                    } else if x < self.lower[var] - FEASIBILITY_TOL {
                        phase1_costs[var] = -1.0;
                    }
                }
                &phase1_costs
            } else {
                &self.cost
            };

            let Some((entering, direction)) = self.price(costs, bland) else {
                if phase1 {
                    return LpStatus::Infeasible;
                }
                return LpStatus::Optimal;
            };

            match self.step(entering, direction, phase1, bland) {
                StepOutcome::Moved => {}
                StepOutcome::Unbounded => {
                    if phase1 {
                        // A bounded-below objective cannot have an improving
                        // ray; treat as numerical noise.
                        if self.pivots_since_refactor == 0 {
                            return LpStatus::IterationLimit;
                        }
                        if !self.refactor() {
                            return LpStatus::IterationLimit;
                        }
                        self.compute_basic_values();
                    } else {
                        return LpStatus::Unbounded;
                    }
                }
            }
            iterations += 1;
        }
    }

    /// Choose an entering variable and its movement direction (+1 increase,
    /// -1 decrease), or None when the current basis is optimal for `costs`.
    fn price(&self, costs: &[f64], bland: bool) -> Option<(usize, f64)> {
        let m = self.rows.len();
        // y = c_B' * binv
        let mut y = vec![0.0; m];
        for (p, &var) in self.basic.iter().enumerate() {
            let cb = costs[var];
            if cb == 0.0 {
                continue;
            }
            for r in 0..m {
                y[r] += cb * self.binv[p * m + r];
            }
        }
        let mut best: Option<(usize, f64)> = None;
        let mut best_improvement = OPTIMALITY_TOL;
        let mut best_key = 0u64;
        for j in 0..self.total_vars() {
            if self.status[j] == VarStatus::Basic || self.lower[j] == self.upper[j] {
                continue;
            }
            let mut d = costs[j];
            for (r, v) in self.column(j) {
                d -= y[r] * v;
            }
            let free = self.lower[j] == f64::NEG_INFINITY && self.upper[j] == f64::INFINITY;
            let (eligible, direction) = match self.status[j] {
                VarStatus::AtLower if free => (d.abs() > OPTIMALITY_TOL, if d < 0.0 { 1.0 } else { -1.0 }),
                VarStatus::AtLower => (d < -OPTIMALITY_TOL, 1.0),
                VarStatus::AtUpper => (d > OPTIMALITY_TOL, -1.0),
                VarStatus::Basic => unreachable!(),
            };
            if !eligible {
                continue;
            }
            if bland {
                return Some((j, direction));
            }
            let improvement = d.abs();
            if best.is_none() || improvement > best_improvement + 1e-12 {
                best = Some((j, direction));
                best_improvement = improvement;
                best_key = tie_key(self.seed, j);
            } else if improvement > best_improvement - 1e-12 {
                let key = tie_key(self.seed, j);
                if key > best_key {
                    best = Some((j, direction));
                    best_key = key;
                }
            }
        }
        best
    }

    /// Ratio test and pivot (or bound flip) for `entering` moving in
    /// `direction`. Phase 1 blocks infeasible basic variables at the bound
    /// they violate so total infeasibility cannot increase.
    fn step(&mut self, entering: usize, direction: f64, phase1: bool, bland: bool) -> StepOutcome {
        let m = self.rows.len();
        let mut w = vec![0.0; m];
        for (r, v) in self.column(entering) {
            for p in 0..m {
                let b = self.binv[p * m + r];
                if b != 0.0 {
                    w[p] += b * v;
                }
            }
        }

        // Step length at which the entering variable hits its own far bound.
        let own_gap = if self.lower[entering].is_finite() && self.upper[entering].is_finite() {
            self.upper[entering] - self.lower[entering]
        } else {
            f64::INFINITY
        };

        let mut best_t = f64::INFINITY;
        let mut leave: Option<(usize, f64)> = None; // (basic position, bound hit)
        for p in 0..m {
            if w[p].abs() <= PIVOT_TOL {
                continue;
            }
            let var = self.basic[p];
            let x = self.xb[p];
            let rate = -direction * w[p];
            let (lo_target, hi_target) = if phase1 {
                if x > self.upper[var] + FEASIBILITY_TOL {
                    (self.upper[var], f64::INFINITY)
                } else if x < self.lower[var] - FEASIBILITY_TOL {
                    (f64::NEG_INFINITY, self.lower[var])
                } else {
                    (self.lower[var], self.upper[var])
                }
            } else {
                (self.lower[var], self.upper[var])
            };
            let (ratio, bound_hit) = if rate < 0.0 {
                if lo_target == f64::NEG_INFINITY {
                    continue;
                }
                (((x - lo_target).max(0.0)) / -rate, lo_target)
            } else {
                if hi_target == f64::INFINITY {
                    continue;
                }
                (((hi_target - x).max(0.0)) / rate, hi_target)
            };
            let take = match leave {
                None => ratio < best_t,
                Some((cur_p, _)) => {
                    if ratio < best_t - RATIO_TIE {
                        true
                    } else if ratio <= best_t + RATIO_TIE {
                        if bland {
                            self.basic[p] < self.basic[cur_p]
                        } else {
                            w[p].abs() > w[cur_p].abs()
                        }
                    } else {
                        false
                    }
                }
            };
            if take {
                best_t = best_t.min(ratio);
                leave = Some((p, bound_hit));
            }
        }

        if own_gap.is_finite() && own_gap <= best_t {
            // Bound flip: the entering variable crosses to its other bound.
            for p in 0..m {
                self.xb[p] -= direction * own_gap * w[p];
            }
            self.status[entering] = match self.status[entering] {
                VarStatus::AtLower => VarStatus::AtUpper,
                VarStatus::AtUpper => VarStatus::AtLower,
                VarStatus::Basic => unreachable!(),
            };
            return StepOutcome::Moved;
        }

        let Some((leave_pos, bound_hit)) = leave else {
            return StepOutcome::Unbounded;
        };
        let t = best_t;
        let entering_value = self.nonbasic_value(entering) + direction * t;
        for p in 0..m {
            self.xb[p] -= direction * t * w[p];
        }
        let leaving_var = self.basic[leave_pos];
        self.status[leaving_var] = if bound_hit == self.lower[leaving_var] {
            VarStatus::AtLower
        } else {
            VarStatus::AtUpper
        };
        self.status[entering] = VarStatus::Basic;
        self.basic[leave_pos] = entering;
        self.xb[leave_pos] = entering_value;

        // Product-form update of the explicit inverse.
        let piv = w[leave_pos];
        for k in 0..m {
            self.binv[leave_pos * m + k] /= piv;
        }
        for p in 0..m {
            if p == leave_pos {
                continue;
            }
            let f = w[p];
            if f == 0.0 {
                continue;
            }
            for k in 0..m {
                self.binv[p * m + k] -= f * self.binv[leave_pos * m + k];
            }
        }
        self.pivots_since_refactor += 1;
        if self.pivots_since_refactor >= REFACTOR_INTERVAL {
            if self.refactor() {
                self.compute_basic_values();
            }
        }
        StepOutcome::Moved
    }

    fn extract_solution(&self, status: LpStatus) -> LpSolution {
        let mut x = vec![0.0; self.n];
        for j in 0..self.n {
            x[j] = match self.status[j] {
                VarStatus::Basic => {
                    let p = self.basic.iter().position(|&v| v == j).expect("basic var in list");
                    self.xb[p]
                }
                _ => self.nonbasic_value(j),
            };
        }
        let internal_obj: f64 = self.cost[..self.n].iter().zip(&x).map(|(c, v)| c * v).sum();
        let row_activities = self
            .rows
            .iter()
            .map(|r| r.coeffs.iter().map(|&(j, v)| v * x[j]).sum())
            .collect();
        LpSolution {
            status,
            x,
            objective: self.obj_sign * internal_obj,
            basis: Basis { statuses: self.status.clone() },
            row_activities,
        }
    }

    /// Simplex tableau row of a basic variable, expressed over all
    /// structural and slack variables.
    pub fn tableau_row(&self, basic_var: usize) -> Result<TableauRow, SimplexError> {
        if !self.solved_optimal {
            return Err(SimplexError::NotSolved);
        }
        let m = self.rows.len();
        let p = self
            .basic
            .iter()
            .position(|&v| v == basic_var)
            .ok_or(SimplexError::NotBasic(basic_var))?;
        let brow = &self.binv[p * m..(p + 1) * m];
        let mut coeffs = vec![0.0; self.total_vars()];
        for j in 0..self.n {
            let mut acc = 0.0;
            for &(r, v) in &self.cols[j] {
                acc += brow[r] * v;
            }
            coeffs[j] = acc;
        }
        for r in 0..m {
            coeffs[self.n + r] = brow[r];
        }
        let rhs = self.rows.iter().enumerate().map(|(r, row)| brow[r] * row.rhs).sum();
        Ok(TableauRow { coeffs, rhs, basic_value: self.xb[p] })
    }

    /// Dual values `y = c_B' B^-1` of the internal minimization form.
    pub fn duals(&self) -> Result<Vec<f64>, SimplexError> {
        if !self.solved_optimal {
            return Err(SimplexError::NotSolved);
        }
        let m = self.rows.len();
        let mut y = vec![0.0; m];
        for (p, &var) in self.basic.iter().enumerate() {
            let cb = self.cost[var];
            if cb == 0.0 {
                continue;
            }
            for r in 0..m {
                y[r] += cb * self.binv[p * m + r];
            }
        }
        Ok(y)
    }

    /// Internal minimization cost of variable `j` (slack slots are zero).
    pub fn internal_cost(&self, j: usize) -> f64 {
        self.cost[j]
    }
}

enum StepOutcome {
    Moved,
    Unbounded,
}

enum ColumnIter<'a> {
    Structural(std::slice::Iter<'a, (usize, f64)>),
    Slack(Option<usize>),
}

impl Iterator for ColumnIter<'_> {
    type Item = (usize, f64);
    fn next(&mut self) -> Option<(usize, f64)> {
        match self {
            ColumnIter::Structural(it) => it.next().copied(),
            ColumnIter::Slack(r) => r.take().map(|r| (r, 1.0)),
        }
    }
}

fn identity(m: usize) -> Vec<f64> {
    let mut id = vec![0.0; m * m];
    for i in 0..m {
        id[i * m + i] = 1.0;
    }
    id
}

/// splitmix64; used only to break pricing ties per seed.
fn tie_key(seed: u64, j: usize) -> u64 {
    let mut z = seed ^ (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Solve the LP relaxation of `inst` with `cuts` appended as LE rows.
///
/// A dimensionally consistent `warm` basis changes the iteration count but
/// never the returned optimum.
pub fn solve_relaxation(
    inst: &MilpInstance,
    cuts: &[Cut],
    warm: Option<&Basis>,
) -> Result<LpSolution, SimplexError> {
    let mut session = LpSession::new(inst, cuts)?;
    if let Some(basis) = warm {
        session.install_basis(basis)?;
    }
    Ok(session.solve())
}
