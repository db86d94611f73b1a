//! Aggregate solver metrics: shifted geometric means, the Wilcoxon
//! signed-rank test, and histogram binning.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::BenchError;

/// Shifted geometric mean `(prod (v_i + shift))^(1/N) - shift`, computed in
/// log space. With shift zero this is the plain geometric mean.
pub fn shifted_geomean(values: &[f64], shift: f64) -> Result<f64, BenchError> {
    if values.is_empty() {
        return Err(BenchError::Empty("shifted_geomean needs at least one value"));
    }
    debug_assert!(values.iter().all(|v| *v >= 0.0) && shift >= 0.0);
    let log_sum: f64 = values.iter().map(|v| (v + shift).ln()).sum();
    Ok((log_sum / values.len() as f64).exp() - shift)
}

#[derive(Debug, Clone, Copy)]
pub struct WilcoxonResult {
    /// Rank sum of the positive differences.
    pub w_plus: f64,
    /// Informative (non-tied) pair count.
    pub n_used: usize,
    /// Two-sided p-value from the normal approximation with continuity
    /// correction.
    pub p_value: f64,
    /// Fewer than six informative pairs: the approximation has little power.
    pub low_power: bool,
}

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// are dropped; tied absolute differences receive averaged ranks with the
/// matching variance correction. All-tied input yields `p = 1`.
pub fn wilcoxon_signed_rank(pairs: &[(f64, f64)]) -> WilcoxonResult {
    let diffs: Vec<f64> = pairs.iter().map(|&(a, b)| a - b).filter(|d| *d != 0.0).collect();
    let n = diffs.len();
    if n == 0 {
        return WilcoxonResult { w_plus: 0.0, n_used: 0, p_value: 1.0, low_power: true };
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diffs[i].abs().partial_cmp(&diffs[j].abs()).unwrap());
    let mut ranks = vec![0.0; n];
    let mut tie_correction = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && diffs[order[j + 1]].abs() == diffs[order[i]].abs() {
            j += 1;
        }
        // Positions i..=j share the average rank.
        let avg = (i + 1 + j + 1) as f64 / 2.0;
        for k in i..=j {
            ranks[order[k]] = avg;
        }
        let t = (j - i + 1) as f64;
        tie_correction += t * t * t - t;
        i = j + 1;
    }

    let w_plus: f64 =
        diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| *r).sum();
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_correction / 48.0;
    let p_value = if var <= 0.0 || w_plus == mean {
        1.0
    } else {
        let correction = 0.5 * (w_plus - mean).signum();
        let z = (w_plus - mean - correction) / var.sqrt();
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        (2.0 * (1.0 - normal.cdf(z.abs()))).clamp(0.0, 1.0)
    };
    WilcoxonResult { w_plus, n_used: n, p_value, low_power: n < 6 }
}

/// Equal-width histogram over `[min, max]`; the last bin is closed on the
/// right. Identical values collapse to a single bin. Counts always sum to
/// the input length.
pub fn emit_histogram(values: &[f64], bins: usize) -> Vec<(f64, f64, usize)> {
    assert!(bins >= 1, "bins must be >= 1");
    if values.is_empty() {
        return Vec::new();
    }
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return vec![(min, max, values.len())];
    }
    let width = (max - min) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = (((v - min) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (min + i as f64 * width, min + (i + 1) as f64 * width, c))
        .collect()
}
