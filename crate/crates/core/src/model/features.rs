//! Diverse training-subset selection in instance-feature space.

use super::{InstanceFeatures, ModelError};

/// Column names for feature CSV export, in the field order of
/// [`InstanceFeatures`].
pub const FEATURE_COLUMNS: [&str; 9] = [
    "frac_rows_le",
    "frac_rows_ge",
    "frac_rows_eq",
    "frac_vars_binary",
    "frac_vars_integer",
    "frac_vars_continuous",
    "avg_row_density",
    "max_row_density",
    "objective_density",
];

fn dist(a: &[f64; 9], b: &[f64; 9]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Pick `k` indices by greedy farthest-point traversal under Euclidean
/// distance: start from the point farthest from the centroid, then repeatedly
/// add the point maximizing its minimum distance to the chosen set. Ties
/// break toward the lowest index, so the result is deterministic for a fixed
/// input order. `_seed` is reserved for randomized restarts.
pub fn select_diverse_subset(
    features: &[InstanceFeatures],
    k: usize,
    _seed: u64,
) -> Result<Vec<usize>, ModelError> {
    if k > features.len() {
        return Err(ModelError::SubsetTooLarge { k, population: features.len() });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let points: Vec<[f64; 9]> = features.iter().map(|f| f.as_vec()).collect();
    let mut centroid = [0.0f64; 9];
    for p in &points {
        for (c, v) in centroid.iter_mut().zip(p) {
            *c += v;
        }
    }
    for c in &mut centroid {
        *c /= points.len() as f64;
    }

    let mut chosen = Vec::with_capacity(k);
    let first = argmax_by(&points, |p| dist(p, &centroid));
    chosen.push(first);

    // min_dist[i] = distance from point i to the chosen set.
    let mut min_dist: Vec<f64> = points.iter().map(|p| dist(p, &points[first])).collect();
    while chosen.len() < k {
        let mut best = usize::MAX;
        let mut best_d = f64::NEG_INFINITY;
        for (i, &d) in min_dist.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            if d > best_d {
                best_d = d;
                best = i;
            }
        }
        chosen.push(best);
        for (i, d) in min_dist.iter_mut().enumerate() {
            let nd = dist(&points[i], &points[best]);
            if nd < *d {
                *d = nd;
            }
        }
    }
    Ok(chosen)
}

fn argmax_by(points: &[[f64; 9]], score: impl Fn(&[f64; 9]) -> f64) -> usize {
    let mut best = 0;
    let mut best_s = f64::NEG_INFINITY;
    for (i, p) in points.iter().enumerate() {
        let s = score(p);
        if s > best_s {
            best_s = s;
            best = i;
        }
    }
    best
}
