//! Partial sums of `Σ_k 1/(2k+1)! Σ_{tuples} a²`, which equal `E[F_n²] = 1`
//! in the limit.
//!
//! Coefficients themselves overflow binary64 once `k` is in the hundreds,
//! so each chaos term is formed as one exact rational times `k0²`:
//! `k0² Q(k,n)² Σ_p count(p) P(p)² / (4^k (2k+1)!)`.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::exact::{alternating_sum, prefactor};
use super::k0_coefficient;
use crate::error::{Error, Result};
use crate::exact::{factorial, ratio_to_f64};
use crate::patterns::{enumerate_patterns, tuple_count};
use crate::summation::CompensatedSum;

/// Contribution of chaos order `2k+1` to `E[F_n²]`.
pub fn chaos_norm_term(n: usize, k: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("chaos norm needs n >= 2, got {n}")));
    }
    let k0 = k0_coefficient(n)?;
    let q = alternating_sum(k, n);
    let mut weighted = BigUint::zero();
    for p in enumerate_patterns(k, n) {
        let pref = prefactor(&p).expect("enumerated patterns do not vanish");
        weighted += tuple_count(&p, n) * &pref * &pref;
    }
    let num = &q.numerator * &q.numerator * BigInt::from(weighted);
    let den = &q.denominator
        * &q.denominator
        * BigInt::from(factorial(2 * k as u64 + 1) << (2 * k as u64));
    Ok(k0 * k0 * ratio_to_f64(&num, &den))
}

/// Running partial sums for `k = 0, 1, 2, ...`, without an upper limit.
#[derive(Debug, Clone)]
pub struct ChaosNormSeries {
    n: usize,
    k: u32,
    sum: CompensatedSum,
}

impl ChaosNormSeries {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("chaos norm needs n >= 2, got {n}")));
        }
        Ok(Self {
            n,
            k: 0,
            sum: CompensatedSum::new(),
        })
    }

    /// Index of the chaos the next call to `next` adds.
    pub fn next_k(&self) -> u32 {
        self.k
    }
}

impl Iterator for ChaosNormSeries {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let term = chaos_norm_term(self.n, self.k).expect("n validated in constructor");
        self.sum.add(term);
        self.k += 1;
        Some(self.sum.value())
    }
}

/// Partial sums for `k = 0..=max_k`.
pub fn chaos_norm_partial(n: usize, max_k: u32) -> Result<Vec<f64>> {
    Ok(ChaosNormSeries::new(n)?.take(max_k as usize + 1).collect())
}
