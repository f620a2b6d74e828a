//! Seeded simulation of `F_n = S_n / V_n` and Monte Carlo oracles.

mod estimators;
mod normal;
mod rng;

pub use estimators::{
    dkw_envelope, empirical_kolmogorov, empirical_wasserstein1, empirical_wasserstein1_with_stderr,
    symmetry_statistic, BOOTSTRAP_RESAMPLES, MIN_ESTIMATOR_COUNT,
};
pub use normal::{normal_cdf, normal_quantile};
pub use rng::{NormalStream, CHUNK, GENERATOR_VERSION};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite::hermite_eval_all;
use crate::patterns::MultiplicityPattern;
use crate::summation::CompensatedSum;

/// What the batch values are draws of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    SelfNormalized {
        n: usize,
    },
    /// Plain standard normals, for calibrating the estimators.
    StandardNormal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub second_moment: f64,
    pub mean_stderr: f64,
    pub second_moment_stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub law: Law,
    pub seed: u64,
    pub count: usize,
    pub values: Vec<f64>,
    pub summary: Summary,
    pub generator: &'static str,
}

impl SampleBatch {
    /// Dimension of the self-normalized sum, if that is what was drawn.
    pub fn n(&self) -> Option<usize> {
        match self.law {
            Law::SelfNormalized { n } => Some(n),
            Law::StandardNormal => None,
        }
    }
}

fn summarize(values: &[f64]) -> Summary {
    let count = values.len();
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    let mut s4 = CompensatedSum::new();
    for &v in values {
        let sq = v * v;
        s1.add(v);
        s2.add(sq);
        s4.add(sq * sq);
    }
    let nf = count as f64;
    let mean = s1.value() / nf;
    let second_moment = s2.value() / nf;
    let stderr = |m1: f64, m2: f64| {
        if count < 2 {
            f64::NAN
        } else {
            ((m2 - m1 * m1).max(0.0) * nf / (nf - 1.0) / nf).sqrt()
        }
    };
    Summary {
        count,
        mean,
        second_moment,
        mean_stderr: stderr(mean, second_moment),
        second_moment_stderr: stderr(second_moment, s4.value() / nf),
    }
}

/// Calls `visit` with the `n` increments of every draw in one chunk.
fn for_each_draw(seed: u64, chunk: u64, draws: usize, n: usize, mut visit: impl FnMut(&[f64])) {
    let mut stream = NormalStream::new(seed, chunk);
    let mut x = vec![0.0; n];
    for _ in 0..draws {
        for v in x.iter_mut() {
            *v = stream.next_normal();
        }
        visit(&x);
    }
}

fn self_normalized(x: &[f64]) -> f64 {
    let (s, v2) = x
        .iter()
        .fold((0.0, 0.0), |(s, v2), &xi| (s + xi, v2 + xi * xi));
    s / v2.sqrt()
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::domain("sample count must be at least 1"));
    }
    Ok(())
}

/// `count` draws of `F_n`, reproducible from `seed`.
pub fn sample_fn(n: usize, count: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::domain("sample_fn needs n >= 1"));
    }
    check_count(count)?;
    let limit = (n as f64).sqrt() * (1.0 + 1e-12);
    let chunks: Vec<Vec<f64>> = rng::chunks(count)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(c, draws)| {
            let mut out = Vec::with_capacity(draws);
            for_each_draw(seed, c, draws, n, |x| out.push(self_normalized(x)));
            out
        })
        .collect();
    let values: Vec<f64> = chunks.concat();
    if let Some(bad) = values.iter().find(|v| v.is_nan() || v.abs() > limit) {
        return Err(Error::Invariant(format!(
            "draw {bad} exceeds sqrt(n) = {}",
            (n as f64).sqrt()
        )));
    }
    Ok(SampleBatch {
        law: Law::SelfNormalized { n },
        seed,
        count,
        summary: summarize(&values),
        values,
        generator: GENERATOR_VERSION,
    })
}

/// `count` standard normal draws from the same generator.
pub fn sample_standard_normal(count: usize, seed: u64) -> Result<SampleBatch> {
    check_count(count)?;
    let chunks: Vec<Vec<f64>> = rng::chunks(count)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(c, draws)| {
            let mut out = Vec::with_capacity(draws);
            for_each_draw(seed, c, draws, 1, |x| out.push(x[0]));
            out
        })
        .collect();
    let values = chunks.concat();
    Ok(SampleBatch {
        law: Law::StandardNormal,
        seed,
        count,
        summary: summarize(&values),
        values,
        generator: GENERATOR_VERSION,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// `a(p) = E[F_n ∏_r H_{p_r}(X_r)]` estimated on the increments behind
/// `batch`, with the pattern parts placed on the first increments.
pub fn mc_coefficient(p: &MultiplicityPattern, batch: &SampleBatch) -> Result<McEstimate> {
    let slots: Vec<usize> = (0..p.part_count()).collect();
    Ok(mc_coefficients(&[(p.clone(), slots)], batch)?[0])
}

/// Several estimates in one pass over the draws. Each pattern comes with
/// the (distinct, zero-based) increments that receive its parts.
pub fn mc_coefficients(
    patterns: &[(MultiplicityPattern, Vec<usize>)],
    batch: &SampleBatch,
) -> Result<Vec<McEstimate>> {
    let Law::SelfNormalized { n } = batch.law else {
        return Err(Error::domain(
            "coefficient estimates need a batch of F_n draws",
        ));
    };
    for (p, slots) in patterns {
        if p.part_count() > n {
            return Err(Error::domain(format!(
                "pattern {p} has {} parts but n={n}",
                p.part_count()
            )));
        }
        let mut sorted = slots.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if slots.len() != p.part_count()
            || sorted.len() != slots.len()
            || sorted.iter().any(|&s| s >= n)
        {
            return Err(Error::domain(format!(
                "bad slot assignment {slots:?} for pattern {p} at n={n}"
            )));
        }
    }
    let max_degree = patterns
        .iter()
        .flat_map(|(p, _)| p.parts().to_vec())
        .max()
        .unwrap_or(0) as usize;
    let per_chunk: Vec<Vec<(f64, f64)>> = rng::chunks(batch.count)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(c, draws)| {
            let mut sums = vec![(0.0, 0.0); patterns.len()];
            let mut h: Vec<Vec<f64>> = vec![Vec::new(); n];
            for_each_draw(batch.seed, c, draws, n, |x| {
                let f = self_normalized(x);
                for (slot, values) in h.iter_mut().enumerate() {
                    hermite_eval_all(max_degree, x[slot], values);
                }
                for ((p, slots), acc) in patterns.iter().zip(sums.iter_mut()) {
                    let mut y = f;
                    for (&part, &slot) in p.parts().iter().zip(slots) {
                        y *= h[slot][part as usize];
                    }
                    acc.0 += y;
                    acc.1 += y * y;
                }
            });
            sums
        })
        .collect();
    let nf = batch.count as f64;
    Ok((0..patterns.len())
        .map(|i| {
            let mut s1 = CompensatedSum::new();
            let mut s2 = CompensatedSum::new();
            for chunk in &per_chunk {
                s1.add(chunk[i].0);
                s2.add(chunk[i].1);
            }
            let mean = s1.value() / nf;
            let var = if batch.count > 1 {
                ((s2.value() - nf * mean * mean) / (nf - 1.0)).max(0.0)
            } else {
                f64::NAN
            };
            McEstimate {
                estimate: mean,
                stderr: (var / nf).sqrt(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests;
