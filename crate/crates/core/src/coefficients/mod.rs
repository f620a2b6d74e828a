//! Chaos-expansion coefficients of `F_n = S_n / V_n`.
//!
//! `F_n = Σ_k 1/(2k+1)! Σ_{i_1..i_{2k+1}} a_{i_1..i_{2k+1}} I_{2k+1}(φ_{i_1} ⊗ ...)`,
//! and by exchangeability of the increments `a` depends on its index tuple
//! only through the [`MultiplicityPattern`].

pub mod exact;
mod norm;
mod table;
mod via_moments;

pub use norm::{chaos_norm_partial, chaos_norm_term, ChaosNormSeries};
pub use table::{
    cache_dir_from_env, table_build, CachePolicy, CacheStats, CoefficientTable, TableMetadata,
    CACHE_DIR_ENV, DEFAULT_CACHE_DIR,
};
pub use via_moments::coefficient_via_moments;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::ratio_to_f64;
use crate::patterns::MultiplicityPattern;
use crate::special::gamma_ratio;

/// A coefficient with the cancellation a floating-point evaluation of the
/// alternating Gamma-ratio sum would have suffered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientValue {
    pub value: f64,
    /// `log10(Σ|term| / |Σ term|)`; zero for vanishing patterns.
    pub cancellation_digits: f64,
}

/// `a_i = (√2/n) Γ((n+1)/2) / Γ(n/2)`, the common first-chaos coefficient.
pub fn k0_coefficient(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("k0_coefficient needs n >= 1"));
    }
    let nf = n as f64;
    Ok(std::f64::consts::SQRT_2 / nf * gamma_ratio((nf + 1.0) / 2.0, nf / 2.0)?)
}

fn check_dimension(p: &MultiplicityPattern, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("coefficients need n >= 2, got {n}")));
    }
    if p.part_count() > n {
        return Err(Error::domain(format!(
            "pattern {p} has {} parts but n={n}",
            p.part_count()
        )));
    }
    Ok(())
}

/// The coefficient shared by every index tuple with pattern `p`.
pub fn coefficient(p: &MultiplicityPattern, n: usize) -> Result<f64> {
    Ok(coefficient_with_diagnostic(p, n)?.value)
}

pub fn coefficient_with_diagnostic(p: &MultiplicityPattern, n: usize) -> Result<CoefficientValue> {
    check_dimension(p, n)?;
    let Some(pref) = exact::prefactor(p) else {
        return Ok(CoefficientValue {
            value: 0.0,
            cancellation_digits: 0.0,
        });
    };
    let k = p
        .half_order()
        .expect("non-vanishing patterns have odd order");
    let q = exact::alternating_sum(k, n);
    let num = BigInt::from(pref) * &q.numerator;
    let den = &q.denominator << (k as usize);
    let value = k0_coefficient(n)? * ratio_to_f64(&num, &den);
    if !value.is_finite() {
        return Err(Error::Overflow(format!("coefficient of {p} at n={n}")));
    }
    Ok(CoefficientValue {
        value,
        cancellation_digits: q.cancellation_digits(),
    })
}

#[cfg(test)]
mod tests;
