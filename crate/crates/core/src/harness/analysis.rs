//! Post-processing of recorded series.

use std::collections::BTreeMap;

use super::sweep::SweepRecord;

/// Time of the maximum inside each maximal run of values above `threshold`.
pub fn peak_times(times: &[usize], values: &[f64], threshold: f64) -> Vec<usize> {
    let mut peaks = Vec::new();
    let mut best: Option<(usize, f64)> = None;
    for (&t, &v) in times.iter().zip(values) {
        if v > threshold {
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((t, v));
            }
        } else if let Some((bt, _)) = best.take() {
            peaks.push(bt);
        }
    }
    if let Some((bt, _)) = best {
        peaks.push(bt);
    }
    peaks
}

/// Density-normalized histogram of values in `[0, 1]` with uniform bins.
pub fn histogram(values: &[f64], bins: usize) -> Vec<f64> {
    let mut counts = vec![0usize; bins];
    for &v in values {
        if (0.0..=1.0).contains(&v) {
            let b = ((v * bins as f64) as usize).min(bins - 1);
            counts[b] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    let width = 1.0 / bins as f64;
    counts
        .into_iter()
        .map(|c| {
            if total == 0 {
                0.0
            } else {
                c as f64 / (total as f64 * width)
            }
        })
        .collect()
}

/// Longest stretch of steps without a value above `threshold`, counting the
/// start at 0 and the end at `t_end` as boundaries.
pub fn longest_gap(times: &[usize], values: &[f64], threshold: f64, t_end: usize) -> usize {
    let mut last = 0usize;
    let mut gap = 0usize;
    for (&t, &v) in times.iter().zip(values) {
        if v > threshold {
            gap = gap.max(t - last);
            last = t;
        }
    }
    gap.max(t_end.saturating_sub(last))
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Summary of sweep records sharing a wall count.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassStats {
    pub wall_count: usize,
    pub count: usize,
    pub mean_entropy: f64,
    pub sd_entropy: f64,
    pub mean_neg_ln_ipr: f64,
    pub sd_neg_ln_ipr: f64,
}

pub fn class_statistics(records: &[SweepRecord]) -> Vec<ClassStats> {
    let mut groups: BTreeMap<usize, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in records {
        let g = groups.entry(r.wall_count).or_default();
        g.0.push(r.entropy_half);
        g.1.push(r.neg_ln_ipr);
    }
    groups
        .into_iter()
        .map(|(wall_count, (s, i))| {
            let (mean_entropy, sd_entropy) = mean_sd(&s);
            let (mean_neg_ln_ipr, sd_neg_ln_ipr) = mean_sd(&i);
            ClassStats {
                wall_count,
                count: s.len(),
                mean_entropy,
                sd_entropy,
                mean_neg_ln_ipr,
                sd_neg_ln_ipr,
            }
        })
        .collect()
}

/// Pooled standard deviation of the entropies of two classes.
pub fn pooled_sd(a: &ClassStats, b: &ClassStats) -> f64 {
    let dof = (a.count + b.count) as f64 - 2.0;
    if dof <= 0.0 {
        return 0.0;
    }
    let va = a.sd_entropy.powi(2) * (a.count as f64 - 1.0);
    let vb = b.sd_entropy.powi(2) * (b.count as f64 - 1.0);
    ((va + vb) / dof).sqrt()
}
