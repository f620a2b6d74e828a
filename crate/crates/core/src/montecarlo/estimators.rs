//! Distances between an empirical distribution and `N(0, 1)`.

use rayon::prelude::*;

use super::normal::{normal_cdf, quantile_unchecked};
use super::rng::NormalStream;
use super::SampleBatch;
use crate::error::{Error, Result};

pub const MIN_ESTIMATOR_COUNT: usize = 1000;
pub const BOOTSTRAP_RESAMPLES: usize = 200;

/// Key mixed into the batch seed so bootstrap streams never coincide with
/// the sampling streams.
const BOOTSTRAP_KEY: u64 = 0x6a09_e667_f3bc_c908;

/// `sqrt(ln(2/δ) / (2 N))`: with probability at least `1 - δ` the
/// empirical CDF of `N` draws stays this close to the true one.
pub fn dkw_envelope(count: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * count as f64)).sqrt()
}

fn sorted_values(batch: &SampleBatch) -> Result<Vec<f64>> {
    if batch.values.len() < MIN_ESTIMATOR_COUNT {
        return Err(Error::domain(format!(
            "estimators need at least {MIN_ESTIMATOR_COUNT} draws, got {}",
            batch.values.len()
        )));
    }
    if batch.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("batch contains non-finite draws"));
    }
    let mut v = batch.values.clone();
    v.sort_unstable_by(f64::total_cmp);
    Ok(v)
}

/// Distinct sorted values with their multiplicities.
fn distinct_with_counts(sorted: &[f64]) -> (Vec<f64>, Vec<u32>) {
    let mut values = Vec::new();
    let mut counts: Vec<u32> = Vec::new();
    for &x in sorted {
        if values.last() == Some(&x) {
            *counts.last_mut().unwrap() += 1;
        } else {
            values.push(x);
            counts.push(1);
        }
    }
    (values, counts)
}

/// `sup_z |G(z) - Φ(z)|` for the distribution putting weight
/// `weights[i] / total` on the `i`-th distinct value. The supremum is taken
/// over both one-sided limits at each atom, so ties are exact.
fn ks_weighted(phi: &[f64], weights: &[u32], total: u64) -> f64 {
    let total = total as f64;
    let mut below = 0u64;
    let mut sup = 0.0f64;
    for (&p, &w) in phi.iter().zip(weights) {
        if w == 0 {
            continue;
        }
        let left = below as f64 / total;
        below += w as u64;
        let right = below as f64 / total;
        sup = sup.max(p - left).max(right - p);
    }
    sup
}

/// Multinomial counts of one bootstrap resample: `owner[pos]` is the
/// distinct value behind sorted position `pos`.
fn resample_counts(owner: &[u32], distinct: usize, stream: &mut NormalStream) -> Vec<u32> {
    let mut out = vec![0u32; distinct];
    for _ in 0..owner.len() {
        out[owner[stream.next_below(owner.len())] as usize] += 1;
    }
    out
}

fn bootstrap_stderr(
    batch_seed: u64,
    salt: u64,
    counts: &[u32],
    statistic: impl Fn(&[u32]) -> f64 + Sync,
) -> f64 {
    let owner: Vec<u32> = counts
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(i as u32, c as usize))
        .collect();
    let stats: Vec<f64> = (0..BOOTSTRAP_RESAMPLES as u64)
        .into_par_iter()
        .map(|b| {
            let mut stream = NormalStream::new(batch_seed ^ BOOTSTRAP_KEY ^ salt, b);
            statistic(&resample_counts(&owner, counts.len(), &mut stream))
        })
        .collect();
    let m = stats.len() as f64;
    let mean = stats.iter().sum::<f64>() / m;
    (stats.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (m - 1.0)).sqrt()
}

/// Kolmogorov distance to `N(0, 1)` with a bootstrap standard error.
pub fn empirical_kolmogorov(batch: &SampleBatch) -> Result<(f64, f64)> {
    let sorted = sorted_values(batch)?;
    let total = sorted.len();
    let (values, counts) = distinct_with_counts(&sorted);
    let phi: Vec<f64> = values.iter().map(|&x| normal_cdf(x)).collect();
    let distance = ks_weighted(&phi, &counts, total as u64);
    let stderr = bootstrap_stderr(batch.seed, 1, &counts, |w| {
        ks_weighted(&phi, w, total as u64)
    });
    Ok((distance, stderr))
}

/// `(1/N) Σ_i |x_(i) - Φ⁻¹((i - 1/2)/N)|` for counts over sorted atoms.
fn wasserstein_weighted(values: &[f64], weights: &[u32], quantiles: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut i = 0usize;
    for (&x, &w) in values.iter().zip(weights) {
        for q in &quantiles[i..i + w as usize] {
            sum += (x - q).abs();
        }
        i += w as usize;
    }
    sum / quantiles.len() as f64
}

fn quantile_grid(total: usize) -> Vec<f64> {
    (0..total)
        .map(|i| quantile_unchecked((i as f64 + 0.5) / total as f64))
        .collect()
}

/// Order-statistics estimate of the Wasserstein-1 distance to `N(0, 1)`.
pub fn empirical_wasserstein1(batch: &SampleBatch) -> Result<f64> {
    let sorted = sorted_values(batch)?;
    let (values, counts) = distinct_with_counts(&sorted);
    Ok(wasserstein_weighted(
        &values,
        &counts,
        &quantile_grid(sorted.len()),
    ))
}

/// [`empirical_wasserstein1`] with a bootstrap standard error.
pub fn empirical_wasserstein1_with_stderr(batch: &SampleBatch) -> Result<(f64, f64)> {
    let sorted = sorted_values(batch)?;
    let total = sorted.len();
    let (values, counts) = distinct_with_counts(&sorted);
    let grid = quantile_grid(total);
    let distance = wasserstein_weighted(&values, &counts, &grid);
    let stderr = bootstrap_stderr(batch.seed, 2, &counts, |w| {
        wasserstein_weighted(&values, w, &grid)
    });
    Ok((distance, stderr))
}

/// Two-sample Kolmogorov statistic between the draws and their negatives.
pub fn symmetry_statistic(batch: &SampleBatch) -> Result<f64> {
    let sorted = sorted_values(batch)?;
    let negated: Vec<f64> = sorted.iter().rev().map(|x| -x).collect();
    let total = sorted.len() as f64;
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    while i < sorted.len() || j < negated.len() {
        let next = match (sorted.get(i), negated.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        while i < sorted.len() && sorted[i] == next {
            i += 1;
        }
        while j < negated.len() && negated[j] == next {
            j += 1;
        }
        sup = sup.max((i as f64 - j as f64).abs() / total);
    }
    Ok(sup)
}
