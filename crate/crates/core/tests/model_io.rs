//! MPS round-trip identity on randomized instances, plus a semantic
//! cross-check of RANGES handling against an independent minimal reader.

mod common;

use common::rng;
use fathom_core::model::{parse_mps, write_mps, MilpInstance, Row, RowSense};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn random_instance(rng: &mut ChaCha8Rng) -> MilpInstance {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(0..=6);
    let mut rows = Vec::new();
    for i in 0..m {
        let mut coeffs = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.6) {
                let v: f64 = rng.gen_range(-4.0..4.0);
                if v != 0.0 {
                    coeffs.push((j, v));
                }
            }
        }
        if coeffs.is_empty() {
            coeffs.push((rng.gen_range(0..n), 1.5));
        }
        let sense = match rng.gen_range(0..3) {
            0 => RowSense::Le,
            1 => RowSense::Ge,
            _ => RowSense::Eq,
        };
        rows.push(Row { name: format!("c{i}"), coeffs, sense, rhs: rng.gen_range(-9.0..9.0) });
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut integrality = Vec::new();
    for _ in 0..n {
        let (l, u) = match rng.gen_range(0..5) {
            0 => (0.0, f64::INFINITY),
            1 => (f64::NEG_INFINITY, f64::INFINITY),
            2 => (rng.gen_range(-5.0..0.0), rng.gen_range(0.0..5.0)),
            3 => {
                let v: f64 = rng.gen_range(-3.0..3.0);
                (v, v)
            }
            _ => (0.0, 1.0),
        };
        lower.push(l);
        upper.push(u);
        integrality.push(rng.gen_bool(0.4));
    }
    MilpInstance {
        name: "randmodel".into(),
        objective: (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect(),
        var_names: (0..n).map(|j| format!("v{j}")).collect(),
        rows,
        lower,
        upper,
        integrality,
        minimize: rng.gen_bool(0.8),
    }
}

#[test]
fn parse_write_parse_identity_on_random_instances() {
    let mut rng = rng(0x10DE1);
    for trial in 0..200 {
        let inst = random_instance(&mut rng);
        inst.validate().unwrap();
        let text = write_mps(&inst);
        let parsed = parse_mps(&text).unwrap_or_else(|e| panic!("trial {trial}: {e}\n{text}"));
        assert_eq!(parsed, inst, "trial {trial} round trip differs\n{text}");
        // And a second trip from the reparsed value is byte-stable.
        assert_eq!(write_mps(&parsed), text);
    }
}

/// Minimal second-opinion reader: dense matrices, interval row semantics
/// (RANGES produce `[lo, hi]` rows directly instead of row pairs). Only the
/// subset used by the fixture below.
mod independent {
    pub struct DenseMilp {
        pub objective: Vec<f64>,
        pub rows: Vec<(Vec<f64>, f64, f64)>, // (coeffs, lo, hi)
        pub lower: Vec<f64>,
        pub upper: Vec<f64>,
    }

    pub fn read(text: &str) -> DenseMilp {
        let mut section = String::new();
        let mut row_order: Vec<String> = Vec::new();
        let mut row_sense = std::collections::HashMap::new();
        let mut obj_row = String::new();
        let mut cols: Vec<(String, String, f64)> = Vec::new();
        let mut rhs = std::collections::HashMap::new();
        let mut range = std::collections::HashMap::new();
        let mut bounds: Vec<(String, String, f64)> = Vec::new();
        for line in text.lines() {
            if line.trim().is_empty() || line.starts_with('*') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !line.starts_with(' ') {
                section = toks[0].to_uppercase();
                continue;
            }
            match section.as_str() {
                "ROWS" => {
                    if toks[0] == "N" {
                        obj_row = toks[1].into();
                    } else {
                        row_sense.insert(toks[1].to_string(), toks[0].to_string());
                        row_order.push(toks[1].into());
                    }
                }
                "COLUMNS" => {
                    if line.contains("MARKER") {
                        continue;
                    }
                    for pair in toks[1..].chunks(2) {
                        cols.push((toks[0].into(), pair[0].into(), pair[1].parse().unwrap()));
                    }
                }
                "RHS" => {
                    for pair in toks[1..].chunks(2) {
                        rhs.insert(pair[0].to_string(), pair[1].parse::<f64>().unwrap());
                    }
                }
                "RANGES" => {
                    for pair in toks[1..].chunks(2) {
                        range.insert(pair[0].to_string(), pair[1].parse::<f64>().unwrap());
                    }
                }
                "BOUNDS" => {
                    bounds.push((toks[0].into(), toks[2].into(), toks[3].parse().unwrap()));
                }
                _ => {}
            }
        }
        let mut var_order: Vec<String> = Vec::new();
        for (c, _, _) in &cols {
            if !var_order.contains(c) {
                var_order.push(c.clone());
            }
        }
        let n = var_order.len();
        let vidx = |name: &str| var_order.iter().position(|v| v == name).unwrap();
        let mut objective = vec![0.0; n];
        let mut dense: Vec<Vec<f64>> = vec![vec![0.0; n]; row_order.len()];
        for (c, r, v) in &cols {
            if *r == obj_row {
                objective[vidx(c)] = *v;
            } else {
                let ri = row_order.iter().position(|x| x == r).unwrap();
                dense[ri][vidx(c)] = *v;
            }
        }
        let rows = row_order
            .iter()
            .enumerate()
            .map(|(ri, name)| {
                let b = *rhs.get(name).unwrap_or(&0.0);
                let r = range.get(name).copied();
                let (lo, hi) = match (row_sense[name].as_str(), r) {
                    ("L", None) => (f64::NEG_INFINITY, b),
                    ("L", Some(r)) => (b - r.abs(), b),
                    ("G", None) => (b, f64::INFINITY),
                    ("G", Some(r)) => (b, b + r.abs()),
                    ("E", None) => (b, b),
                    ("E", Some(r)) if r >= 0.0 => (b, b + r),
                    ("E", Some(r)) => (b + r, b),
                    _ => unreachable!(),
                };
                (dense[ri].clone(), lo, hi)
            })
            .collect();
        let mut lower = vec![0.0; n];
        let mut upper = vec![f64::INFINITY; n];
        for (kind, var, v) in &bounds {
            let j = vidx(var);
            match kind.as_str() {
                "UP" => upper[j] = *v,
                "LO" => lower[j] = *v,
                _ => {}
            }
        }
        DenseMilp { objective, rows, lower, upper }
    }

    impl DenseMilp {
        pub fn feasible(&self, x: &[f64], tol: f64) -> bool {
            for (j, &v) in x.iter().enumerate() {
                if v < self.lower[j] - tol || v > self.upper[j] + tol {
                    return false;
                }
            }
            self.rows.iter().all(|(coeffs, lo, hi)| {
                let act: f64 = coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
                act >= lo - tol && act <= hi + tol
            })
        }
    }
}

#[test]
fn ranges_agree_with_independent_reader() {
    let text = "\
NAME rngcheck
ROWS
 N OBJ
 L cap
 G floor
 E exact
COLUMNS
    x  OBJ  -1  cap  2
    x  floor  1  exact  1
    y  OBJ  -2  cap  1
    y  floor  1  exact  2
RHS
    RHS  cap  10  floor  1
    RHS  exact  4
RANGES
    RNG  cap  6  floor  4
    RNG  exact  1.5
BOUNDS
 UP BND  x  6
 UP BND  y  6
ENDATA
";
    let ours = parse_mps(text).unwrap();
    let theirs = independent::read(text);
    assert_eq!(ours.objective, theirs.objective);
    // Each ranged row expands to a pair, so row counts differ; compare
    // semantics: both readers must accept exactly the same points.
    let mut rng = rng(0x4A4E);
    let mut agree_feasible = 0;
    for _ in 0..2000 {
        let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..7.0)).collect();
        let ours_ok = ours.rows.iter().all(|r| r.satisfied_by(&x, 1e-9))
            && (0..2).all(|j| x[j] >= ours.lower[j] - 1e-9 && x[j] <= ours.upper[j] + 1e-9);
        let theirs_ok = theirs.feasible(&x, 1e-9);
        assert_eq!(ours_ok, theirs_ok, "disagreement at {x:?}");
        if ours_ok {
            agree_feasible += 1;
        }
    }
    assert!(agree_feasible > 0, "degenerate test: no feasible samples");
}
