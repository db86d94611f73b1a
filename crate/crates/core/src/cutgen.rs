//! Gomory mixed-integer cuts from the optimal simplex tableau.
//!
//! For each basic integer variable with a fractional value, the tableau row
//! is shifted so every nonbasic variable is measured as a nonnegative
//! distance from the bound it sits at, the mixed-integer rounding formula is
//! applied, and slack variables are substituted out so the cut lives on the
//! structural variables only. Slacks are always treated as continuous,
//! which is valid regardless of row data.

use crate::cutsel::efficacy;
use crate::model::{Cut, CutOrigin};
use crate::simplex::{LpSession, LpSolution, LpStatus, VarStatus};

/// Coefficients smaller than this are dropped from finished cuts.
const COEFF_DROP_TOL: f64 = 1e-11;
/// Cuts with max/min coefficient ratio above this are discarded.
const MAX_DYNAMISM: f64 = 1e8;
/// A returned cut must beat this efficacy against the LP optimum.
const MIN_EFFICACY: f64 = 1e-9;

fn frac(v: f64) -> f64 {
    v - v.floor()
}

fn is_integral_value(v: f64) -> bool {
    (v - v.round()).abs() < 1e-9
}

/// Generate GMI cuts for every basic integer variable whose value has
/// fractional part in `[frac_tol, 1 - frac_tol]`, most fractional first, at
/// most `max_cuts` of them. Every returned cut is violated by `sol.x` and
/// valid for all mixed-integer feasible points.
pub fn generate_gmi_cuts(
    session: &LpSession,
    sol: &LpSolution,
    round: usize,
    frac_tol: f64,
    max_cuts: usize,
) -> Vec<Cut> {
    if sol.status != LpStatus::Optimal {
        return Vec::new();
    }
    let n = session.num_structural();
    // Candidates ordered by decreasing distance from integrality.
    let mut candidates: Vec<(usize, f64)> = (0..n)
        .filter(|&j| session.is_integer_var(j) && session.var_status(j) == VarStatus::Basic)
        .filter_map(|j| {
            let f = frac(sol.x[j]);
            if f >= frac_tol && f <= 1.0 - frac_tol {
                Some((j, f.min(1.0 - f)))
            } else {
                None
            }
        })
        .collect();
    candidates.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));

    let mut cuts = Vec::new();
    for (var, _) in candidates {
        if cuts.len() >= max_cuts {
            break;
        }
        if let Some(cut) = gmi_from_row(session, sol, var, round) {
            cuts.push(cut);
        }
    }
    cuts
}

/// Derive a single GMI cut from the tableau row of basic variable `var`,
/// or None when the row is unusable (free nonbasic support, negligible
/// coefficients, bad dynamism, or no violation).
fn gmi_from_row(session: &LpSession, sol: &LpSolution, var: usize, round: usize) -> Option<Cut> {
    let row = session.tableau_row(var).ok()?;
    let f0 = frac(row.basic_value);
    if f0 <= 0.0 || f0 >= 1.0 {
        return None;
    }
    let n = session.num_structural();
    let total = session.total_vars();

    // gamma_j coefficients of the `sum gamma_j w_j >= 1` form, expressed
    // back over the original variables z (structural + slacks):
    // `sum g_j z_j >= h`.
    let mut g = vec![0.0; total];
    let mut h = 1.0;
    for j in 0..total {
        if j == var || session.var_status(j) == VarStatus::Basic {
            continue;
        }
        let abar = row.coeffs[j];
        if abar.abs() < COEFF_DROP_TOL {
            continue;
        }
        let (lo, hi) = session.var_bounds(j);
        let (bound, at_lower) = match session.var_status(j) {
            VarStatus::AtLower => (lo, true),
            VarStatus::AtUpper => (hi, false),
            VarStatus::Basic => unreachable!(),
        };
        if !bound.is_finite() {
            // Free nonbasic variable in the support: no valid shift exists.
            return None;
        }
        // Shifted coefficient of the nonnegative distance variable w_j.
        let atilde = if at_lower { abar } else { -abar };
        let integer_w = session.is_integer_var(j) && is_integral_value(bound);
        let gamma = if integer_w {
            let fj = frac(atilde);
            if fj <= f0 {
                fj / f0
            } else {
                (1.0 - fj) / (1.0 - f0)
            }
        } else if atilde > 0.0 {
            atilde / f0
        } else {
            -atilde / (1.0 - f0)
        };
        if gamma == 0.0 {
            continue;
        }
        if at_lower {
            g[j] += gamma;
            h += gamma * bound;
        } else {
            g[j] -= gamma;
            h -= gamma * bound;
        }
    }

    // Substitute out slacks: z_{n+i} = b_i - a_i'x.
    let mut dense = vec![0.0; n];
    for (j, coeff) in g.iter().enumerate().take(n) {
        dense[j] = *coeff;
    }
    for i in 0..session.num_rows() {
        let gs = g[n + i];
        if gs == 0.0 {
            continue;
        }
        let (coeffs, rhs) = session.row_data(i);
        for &(col, v) in coeffs {
            dense[col] -= gs * v;
        }
        h -= gs * rhs;
    }

    // `dense'x >= h` becomes `alpha'x <= beta`.
    let mut alpha: Vec<(usize, f64)> = Vec::new();
    let mut max_abs = 0.0f64;
    let mut min_abs = f64::INFINITY;
    for (j, &v) in dense.iter().enumerate() {
        let a = -v;
        if a.abs() < COEFF_DROP_TOL {
            continue;
        }
        max_abs = max_abs.max(a.abs());
        min_abs = min_abs.min(a.abs());
        alpha.push((j, a));
    }
    if alpha.is_empty() || max_abs / min_abs > MAX_DYNAMISM {
        return None;
    }
    let cut = Cut::new(alpha, -h, CutOrigin { round, generator: "gmi", tableau_row: var });
    if efficacy(&cut, &sol.x) <= MIN_EFFICACY {
        return None;
    }
    Some(cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MilpInstance, Row, RowSense};

    fn knapsack_single() -> MilpInstance {
        // min -x1  s.t.  2 x1 <= 3, x1 >= 0 integer; LP optimum x1 = 1.5.
        MilpInstance {
            name: "k".into(),
            objective: vec![-1.0],
            var_names: vec!["x1".into()],
            rows: vec![Row {
                name: "c1".into(),
                coeffs: vec![(0, 2.0)],
                sense: RowSense::Le,
                rhs: 3.0,
            }],
            lower: vec![0.0],
            upper: vec![f64::INFINITY],
            integrality: vec![true],
            minimize: true,
        }
    }

    #[test]
    fn single_row_cut_implies_rounding_down() {
        let inst = knapsack_single();
        let mut session = LpSession::new(&inst, &[]).unwrap();
        let sol = session.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 1.5).abs() < 1e-9);
        let cuts = generate_gmi_cuts(&session, &sol, 0, 1e-4, usize::MAX);
        assert_eq!(cuts.len(), 1);
        let cut = &cuts[0];
        // The cut must admit x1 = 1 and reject the fractional optimum.
        assert!(cut.violation(&[1.0]) <= 1e-9);
        assert!(cut.violation(&sol.x) > 1e-9);
        // And it must imply x1 <= 1: at x1 = 1 + eps it is violated.
        assert!(cut.violation(&[1.0 + 1e-6]) > 0.0);
    }

    #[test]
    fn integral_optimum_yields_no_cuts() {
        let mut inst = knapsack_single();
        inst.rows[0].rhs = 4.0; // LP optimum x1 = 2, integral
        let mut session = LpSession::new(&inst, &[]).unwrap();
        let sol = session.solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        let cuts = generate_gmi_cuts(&session, &sol, 0, 1e-4, usize::MAX);
        assert!(cuts.is_empty());
    }

    #[test]
    fn deterministic_output() {
        let inst = knapsack_single();
        let mut s1 = LpSession::new(&inst, &[]).unwrap();
        let sol1 = s1.solve();
        let mut s2 = LpSession::new(&inst, &[]).unwrap();
        let sol2 = s2.solve();
        let c1 = generate_gmi_cuts(&s1, &sol1, 0, 1e-4, usize::MAX);
        let c2 = generate_gmi_cuts(&s2, &sol2, 0, 1e-4, usize::MAX);
        assert_eq!(c1, c2);
    }
}
