//! Primary coefficient path.
//!
//! For a pattern with odd part `2d_1+1` and even parts `2d_j`, `k = Σ d_j`:
//!
//! `a = P · 2^{-k-1/2} Σ_l (-1)^{|l|} ∏ C(d_j, l_j) R(k+1-|l|)`
//!
//! with `P = (2d_1+1)!/d_1! · ∏ (2d_j)!/d_j!` and
//! `R(s) = Γ(s+(n-1)/2)/Γ(s+n/2)`. Grouping the multi-index `l` by `L = |l|`
//! turns `∏ C(d_j, l_j)` into `C(k, L)` (Vandermonde), and
//! `R(s+1) = R(s) (2s+n-1)/(2s+n)`, so the alternating sum equals
//! `R(1) Q(k,n)` with the rational
//!
//! `Q(k,n) = Σ_L (-1)^L C(k,L) ∏_{s=1}^{k-L} (2s+n-1)/(2s+n)`.
//!
//! `Q` is summed exactly over the common denominator `∏_{s=1}^{k} (2s+n)`,
//! so the cancellation in the alternating sum costs nothing; only the
//! final `R(1)` factor is a floating-point Gamma ratio.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::exact::{binomial, factorial, ratio_to_f64};
use crate::patterns::MultiplicityPattern;

/// `Q(k,n)` as `numerator / denominator`, both positive in the denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingSum {
    pub numerator: BigInt,
    pub denominator: BigInt,
    /// `Σ_L |term_L|` over the same denominator.
    pub absolute_numerator: BigInt,
}

impl AlternatingSum {
    pub fn value(&self) -> f64 {
        ratio_to_f64(&self.numerator, &self.denominator)
    }

    /// Decimal digits a plain floating-point evaluation of the alternating
    /// sum would lose: `log10(Σ|term| / |Σ term|)`.
    pub fn cancellation_digits(&self) -> f64 {
        if self.numerator.is_zero() {
            return f64::INFINITY;
        }
        ratio_to_f64(&self.absolute_numerator, &self.numerator.abs()).log10()
    }
}

pub fn alternating_sum(k: u32, n: usize) -> AlternatingSum {
    let n = n as u64;
    let k64 = k as u64;
    // up[j] = ∏_{s=1}^{j} (2s+n-1), down_tail[j] = ∏_{s=j+1}^{k} (2s+n)
    let mut up = Vec::with_capacity(k as usize + 1);
    up.push(BigInt::one());
    for s in 1..=k64 {
        let next = up.last().unwrap() * BigInt::from(2 * s + n - 1);
        up.push(next);
    }
    let mut down_tail = vec![BigInt::one(); k as usize + 1];
    for j in (0..k as usize).rev() {
        down_tail[j] = &down_tail[j + 1] * BigInt::from(2 * (j as u64 + 1) + n);
    }
    let mut numerator = BigInt::zero();
    let mut absolute_numerator = BigInt::zero();
    for l in 0..=k64 {
        let j = (k64 - l) as usize;
        let term = BigInt::from(binomial(k64, l)) * &up[j] * &down_tail[j];
        absolute_numerator += &term;
        if l % 2 == 0 {
            numerator += term;
        } else {
            numerator -= term;
        }
    }
    AlternatingSum {
        numerator,
        denominator: down_tail[0].clone(),
        absolute_numerator,
    }
}

/// `(2d_1+1)!/d_1! · ∏ (2d_j)!/d_j!`.
pub fn prefactor(p: &MultiplicityPattern) -> Option<BigUint> {
    let (d1, evens) = p.half_multiplicities()?;
    let mut acc = factorial(2 * d1 as u64 + 1) / factorial(d1 as u64);
    for d in evens {
        acc *= factorial(2 * d as u64) / factorial(d as u64);
    }
    Some(acc)
}
