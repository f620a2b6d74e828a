//! Oracle coefficient path by Gaussian integration by parts.
//!
//! `a = E[(S_n/V_n) ∏_r H_{d_r}(W_r)] = Σ_s E[(W_s/V_n) ∏_r H_{d_r}(W_r)]`,
//! where `r` runs over the pattern's slots. Slots outside the pattern give
//! an odd power of `W_s` and drop out. Each remaining term is expanded into
//! monomials with the exact Hermite coefficients and every monomial is
//! evaluated with the closed-form moment `E[∏ W^{2a} / V_n]`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hermite::hermite_coefficients;
use crate::moments::{gaussian_moment_over_vn, EvenExponentVector};
use crate::patterns::MultiplicityPattern;
use crate::summation::CompensatedSum;

pub fn coefficient_via_moments(p: &MultiplicityPattern, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("coefficient needs n >= 2, got {n}")));
    }
    if p.part_count() > n {
        return Err(Error::domain(format!(
            "pattern {p} has {} parts but n={n}",
            p.part_count()
        )));
    }
    let polys: Vec<Vec<(usize, BigInt)>> = p
        .parts()
        .iter()
        .map(|&d| {
            hermite_coefficients(d as usize)
                .terms()
                .map(|(j, c)| (j, c.clone()))
                .collect()
        })
        .collect();
    let mut sum = CompensatedSum::new();
    let mut exponents = vec![0usize; polys.len()];
    for s in 0..polys.len() {
        expand(&polys, s, 0, BigInt::from(1), &mut exponents, n, &mut sum)?;
    }
    Ok(sum.value())
}

/// Walks the Cartesian product of monomials, slot by slot. `s` is the slot
/// carrying the extra factor `W_s`.
fn expand(
    polys: &[Vec<(usize, BigInt)>],
    s: usize,
    slot: usize,
    coeff: BigInt,
    exponents: &mut [usize],
    n: usize,
    sum: &mut CompensatedSum,
) -> Result<()> {
    if slot == polys.len() {
        if exponents.iter().any(|e| e % 2 == 1) {
            return Ok(());
        }
        let halves = exponents
            .iter()
            .enumerate()
            .map(|(i, &e)| (i + 1, (e / 2) as u32));
        let moment = gaussian_moment_over_vn(&EvenExponentVector::new(n, halves)?)?;
        let c = coeff
            .to_f64()
            .ok_or_else(|| Error::Overflow("Hermite coefficient product".into()))?;
        sum.add(c * moment);
        return Ok(());
    }
    let extra = usize::from(slot == s);
    for (j, c) in &polys[slot] {
        if c.is_zero() {
            continue;
        }
        exponents[slot] = j + extra;
        expand(polys, s, slot + 1, &coeff * c, exponents, n, sum)?;
    }
    Ok(())
}
