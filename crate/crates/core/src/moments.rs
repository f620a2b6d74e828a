//! Gaussian moments of the form `E[∏ W_i^{2a_i} / V_n]`.
//!
//! With `p` nonzero half-exponents the closed form
//! `(2π)^{-n/2} 2^{Σa+(n-1)/2} Γ(Σa+(n-1)/2)/Γ(Σa+n/2) ∏ Γ(a_i+1/2)` is
//! rewritten before any floating-point work: each of the `n-p` implicit
//! slots contributes `Γ(1/2)/√(2π) = 2^{-1/2}`, which leaves
//! `2^{Σa-1/2} π^{-p/2} Γ(Σa+(n-1)/2)/Γ(Σa+n/2) ∏_{nonzero} Γ(a_i+1/2)`.

use crate::error::{Error, Result};
use crate::special::{gamma_ratio, ln_gamma};

/// Sparse vector of half-exponents `a_i` over `n` Gaussian slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenExponentVector {
    n: usize,
    /// `(slot, a_i)` with distinct slots in `1..=n` and `a_i > 0`.
    pairs: Vec<(usize, u32)>,
}

impl EvenExponentVector {
    /// Builds the vector from `(slot, half_exponent)` pairs. Zero
    /// half-exponents are dropped.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, u32)>) -> Result<Self> {
        let mut stored: Vec<(usize, u32)> = Vec::new();
        for (slot, a) in pairs {
            if slot == 0 || slot > n {
                return Err(Error::domain(format!("slot {slot} outside 1..={n}")));
            }
            if stored.iter().any(|&(s, _)| s == slot) {
                return Err(Error::domain(format!("slot {slot} given twice")));
            }
            if a > 0 {
                stored.push((slot, a));
            }
        }
        stored.sort_unstable();
        Ok(Self { n, pairs: stored })
    }

    /// Dense form: `half_exponents[i]` belongs to slot `i + 1`.
    pub fn from_dense(n: usize, half_exponents: &[u32]) -> Result<Self> {
        if half_exponents.len() > n {
            return Err(Error::domain(format!(
                "{} exponents for {n} slots",
                half_exponents.len()
            )));
        }
        Self::new(
            n,
            half_exponents.iter().enumerate().map(|(i, &a)| (i + 1, a)),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, u32)] {
        &self.pairs
    }

    pub fn total(&self) -> u64 {
        self.pairs.iter().map(|&(_, a)| a as u64).sum()
    }
}

/// `E[∏ W_i^{2a_i} / V_n]`, accumulated in log space.
pub fn gaussian_moment_over_vn(e: &EvenExponentVector) -> Result<f64> {
    Ok(ln_gaussian_moment_over_vn(e)?.exp())
}

/// Natural log of [`gaussian_moment_over_vn`].
pub fn ln_gaussian_moment_over_vn(e: &EvenExponentVector) -> Result<f64> {
    let n = e.n();
    let total = e.total() as f64;
    if n == 0 || (n == 1 && total == 0.0) {
        return Err(Error::domain(format!(
            "divergent inverse moment: E[1/V_n] with n={n}"
        )));
    }
    let half_n = n as f64 / 2.0;
    let p = e.pairs().len() as f64;
    let mut acc = (total - 0.5) * std::f64::consts::LN_2 - 0.5 * p * std::f64::consts::PI.ln();
    acc += ln_gamma(total + half_n - 0.5)? - ln_gamma(total + half_n)?;
    for &(_, a) in e.pairs() {
        acc += ln_gamma(a as f64 + 0.5)?;
    }
    Ok(acc)
}

/// `E[∏ W_i^{k_i} / V_n]` for arbitrary exponents: zero as soon as one
/// exponent is odd, the closed form otherwise.
pub fn odd_monomial_moment_is_zero(n: usize, exponents: &[u32]) -> Result<f64> {
    if exponents.iter().any(|k| k % 2 == 1) {
        return Ok(0.0);
    }
    let halves: Vec<u32> = exponents.iter().map(|k| k / 2).collect();
    gaussian_moment_over_vn(&EvenExponentVector::from_dense(n, &halves)?)
}

/// `E[V_n] = √2 Γ((n+1)/2) / Γ(n/2)`.
pub fn chi_mean(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("chi_mean needs n >= 1"));
    }
    let n = n as f64;
    Ok(std::f64::consts::SQRT_2 * gamma_ratio((n + 1.0) / 2.0, n / 2.0)?)
}
