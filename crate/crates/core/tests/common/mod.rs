//! Shared generators and independent oracles for the integration suites.
//!
//! Everything here is deliberately written from first principles (dense
//! Gaussian elimination, explicit enumeration) so oracle results do not
//! share any code path with the solver under test.

#![allow(dead_code)]

use fathom_core::model::{MilpInstance, Row, RowSense};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random bounded LP with the origin feasible: LE rows have nonnegative
/// rhs, GE rows nonpositive, and every variable lives in a finite box.
pub fn random_bounded_lp(rng: &mut ChaCha8Rng, n: usize, m: usize) -> MilpInstance {
    let objective: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut coeffs = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.7) {
                let v: f64 = rng.gen_range(-3.0..3.0);
                if v.abs() > 0.05 {
                    coeffs.push((j, v));
                }
            }
        }
        if coeffs.is_empty() {
            coeffs.push((rng.gen_range(0..n), 1.0 + rng.gen_range(0.0..2.0)));
        }
        let sense = if rng.gen_bool(0.7) { RowSense::Le } else { RowSense::Ge };
        let rhs = match sense {
            RowSense::Le => rng.gen_range(0.5..5.0),
            RowSense::Ge => -rng.gen_range(0.5..5.0),
            RowSense::Eq => 0.0,
        };
        rows.push(Row { name: format!("r{i}"), coeffs, sense, rhs });
    }
    MilpInstance {
        name: "rand-lp".into(),
        var_names: (0..n).map(|j| format!("x{j}")).collect(),
        objective,
        rows,
        lower: vec![0.0; n],
        upper: (0..n).map(|_| rng.gen_range(1.0..4.0)).collect(),
        integrality: vec![false; n],
        minimize: true,
    }
}

/// Random pure-integer program over a small box, origin feasible. Row data
/// stays continuous so relaxation optima are usually fractional.
pub fn random_bounded_ip(rng: &mut ChaCha8Rng, n: usize, m: usize, max_ub: u32) -> MilpInstance {
    let mut inst = random_bounded_lp(rng, n, m);
    inst.name = "rand-ip".into();
    inst.integrality = vec![true; n];
    for u in &mut inst.upper {
        *u = rng.gen_range(1..=max_ub) as f64;
    }
    inst
}

/// Solve `a x = b` (dense, square) by Gaussian elimination with partial
/// pivoting. Returns None when singular.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Brute-force LP oracle: enumerate every choice of `n` active constraints
/// (rows as equalities plus variable bounds), solve the square system, keep
/// feasible vertices, and return the best objective. The instance must be
/// boxed so the optimum is attained at a vertex.
pub fn lp_vertex_enumeration(inst: &MilpInstance) -> Option<f64> {
    let n = inst.num_vars();
    // Candidate active constraints: (normal vector, rhs).
    let mut cands: Vec<(Vec<f64>, f64)> = Vec::new();
    for row in &inst.rows {
        let mut dense = vec![0.0; n];
        for &(j, v) in &row.coeffs {
            dense[j] = v;
        }
        cands.push((dense, row.rhs));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        if inst.lower[j].is_finite() {
            cands.push((e.clone(), inst.lower[j]));
        }
        if inst.upper[j].is_finite() {
            cands.push((e, inst.upper[j]));
        }
    }

    let mut best: Option<f64> = None;
    let k = cands.len();
    let mut choice: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<f64>> = choice.iter().map(|&i| cands[i].0.clone()).collect();
        let b: Vec<f64> = choice.iter().map(|&i| cands[i].1).collect();
        if let Some(x) = dense_solve(a, b) {
            if point_feasible(inst, &x, 1e-7) {
                let obj = inst.objective_value(&x);
                best = Some(match best {
                    None => obj,
                    Some(cur) => {
                        if inst.minimize {
                            cur.min(obj)
                        } else {
                            cur.max(obj)
                        }
                    }
                });
            }
        }
        // Next combination in lexicographic order.
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if choice[i] != i + k - n {
                break;
            }
        }
        choice[i] += 1;
        for j in i + 1..n {
            choice[j] = choice[j - 1] + 1;
        }
    }
}

pub fn point_feasible(inst: &MilpInstance, x: &[f64], tol: f64) -> bool {
    for j in 0..inst.num_vars() {
        if x[j] < inst.lower[j] - tol || x[j] > inst.upper[j] + tol {
            return false;
        }
    }
    inst.rows.iter().all(|row| row.satisfied_by(x, tol))
}

/// Every integer point of the bound box that satisfies all rows. The box
/// must be small; callers keep `prod(u - l + 1)` manageable.
pub fn enumerate_integer_points(inst: &MilpInstance) -> Vec<Vec<f64>> {
    let n = inst.num_vars();
    let lows: Vec<i64> = inst.lower.iter().map(|&l| l.ceil() as i64).collect();
    let highs: Vec<i64> = inst.upper.iter().map(|&u| u.floor() as i64).collect();
    let mut points = Vec::new();
    let mut cur = lows.clone();
    'outer: loop {
        let x: Vec<f64> = cur.iter().map(|&v| v as f64).collect();
        if inst.rows.iter().all(|row| row.satisfied_by(&x, 1e-9)) {
            points.push(x);
        }
        let mut d = 0;
        loop {
            if d == n {
                break 'outer;
            }
            if cur[d] < highs[d] {
                cur[d] += 1;
                break;
            }
            cur[d] = lows[d];
            d += 1;
        }
    }
    points
}

/// Best integer-feasible objective by exhaustive enumeration.
pub fn ip_enumeration_optimum(inst: &MilpInstance) -> Option<f64> {
    let points = enumerate_integer_points(inst);
    let objs = points.iter().map(|x| inst.objective_value(x));
    if inst.minimize {
        objs.fold(None, |acc: Option<f64>, o| Some(acc.map_or(o, |a| a.min(o))))
    } else {
        objs.fold(None, |acc: Option<f64>, o| Some(acc.map_or(o, |a| a.max(o))))
    }
}
