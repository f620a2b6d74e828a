//! The Stein-Malliavin discrepancy `E(1 - ⟨DF_n, D(-L)^{-1} F_n⟩)²`.
//!
//! `⟨DF_n, D(-L)^{-1}F_n⟩ - 1 = Σ_{m≥1} I_{2m}(h_{2m})`, so the discrepancy
//! is `Σ_m (2m)! ‖h̃_{2m}‖²` where `h̃` is the symmetrization of
//!
//! `h_{2m}(i) = Σ_k 1/(k!(2m-k)!) Σ_r (1/r!) 1/(2m-k+r+1) Σ_u a_{u,i_1..i_k} a_{u,i_{k+1}..i_{2m}}`.
//!
//! `h_{2m}` as written is not symmetric in `i` once `m ≥ 2`, and the
//! isometry only sees its symmetrization. [`KernelForm::Literal`] evaluates
//! `(2m)! ‖h_{2m}‖²` without symmetrizing, which is an upper bound on the
//! true shell.

mod bounds;
mod kernel;

pub use bounds::{berry_esseen_bound, bound_report, classical_bound, BoundReport, Distance};

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::coefficients::CoefficientTable;
use crate::error::{Error, Result};
use crate::patterns::{enumerate_patterns_up_to, tuple_count};
use crate::summation::CompensatedSum;
use kernel::{
    distinct_labels, factorial_f64, falling, kernel_by_r, permutations, restricted_growth_strings,
    symmetrize, KernelMemo,
};

/// Largest `m_max` the enumeration supports: `(2m)!` permutations of
/// `Bell(2m)` classes beyond that is no longer desk-scale.
pub const MAX_SUPPORTED_M: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub m_max: u32,
    pub r_max: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { m_max: 2, r_max: 4 }
    }
}

impl Truncation {
    /// Largest `k` such that coefficients of order `2k+1` are looked up.
    pub fn required_max_k(&self) -> u32 {
        // Orders r + 1 + 2m at most.
        (self.r_max + 2 * self.m_max) / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelForm {
    /// `(2m)! ‖h̃_{2m}‖²` with `h̃` symmetrized over the `2m` positions.
    #[default]
    Symmetrized,
    /// `(2m)! ‖h_{2m}‖²` of the kernel as written.
    Literal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelNormReport {
    pub n: usize,
    pub truncation: Truncation,
    pub form: KernelForm,
    /// `m -> (2m)! ‖h_{2m}‖²`.
    pub per_order: BTreeMap<u32, f64>,
    pub total: f64,
    /// How much the total moves when the last two `r` values (one of each
    /// parity) are dropped.
    pub truncation_diagnostic: f64,
}

pub fn bracket_kernel_norms(
    table: &CoefficientTable,
    n: usize,
    truncation: Truncation,
    form: KernelForm,
) -> Result<KernelNormReport> {
    if truncation.m_max == 0 {
        return Err(Error::domain("m_max must be at least 1"));
    }
    if truncation.m_max > MAX_SUPPORTED_M {
        return Err(Error::Unsupported(format!(
            "m_max={} exceeds the implemented enumeration (at most {MAX_SUPPORTED_M})",
            truncation.m_max
        )));
    }
    if n < 2 {
        return Err(Error::domain(format!(
            "the discrepancy needs n >= 2, got {n}"
        )));
    }
    let r_max = truncation.r_max as usize;
    let mut per_order = BTreeMap::new();
    let mut total = CompensatedSum::new();
    let mut total_short = CompensatedSum::new();
    for m in 1..=truncation.m_max {
        let (full, short) = shell(table, n, m as usize, r_max, form)?;
        per_order.insert(m, full);
        total.add(full);
        total_short.add(short);
    }
    let total = total.value();
    Ok(KernelNormReport {
        n,
        truncation,
        form,
        per_order,
        total,
        truncation_diagnostic: (total - total_short.value()).abs(),
    })
}

/// `(2m)! Σ_i h(i)²` at `r_max` and at `r_max - 2`.
fn shell(
    table: &CoefficientTable,
    n: usize,
    m: usize,
    r_max: usize,
    form: KernelForm,
) -> Result<(f64, f64)> {
    let len = 2 * m;
    let classes: Vec<Vec<u8>> = restricted_growth_strings(len)
        .into_iter()
        .filter(|s| distinct_labels(s) <= n)
        .collect();
    let values: Vec<Vec<f64>> = classes
        .par_iter()
        .map(|s| kernel_by_r(table, n, s, r_max))
        .collect::<Result<_>>()?;
    let memo: KernelMemo = classes.iter().cloned().zip(values).collect();
    let perms = match form {
        KernelForm::Symmetrized => permutations(len),
        KernelForm::Literal => Vec::new(),
    };
    let mut full = CompensatedSum::new();
    let mut short = CompensatedSum::new();
    for s in &classes {
        let by_r = match form {
            KernelForm::Symmetrized => symmetrize(&memo, s, &perms),
            KernelForm::Literal => memo[s].clone(),
        };
        let weight = falling(n, distinct_labels(s));
        let c: f64 = by_r.iter().sum();
        let c_short: f64 = by_r[..by_r.len().saturating_sub(2)].iter().sum();
        full.add(weight * c * c);
        short.add(weight * c_short * c_short);
    }
    let scale = factorial_f64(len);
    Ok((scale * full.value(), scale * short.value()))
}

/// The truncated discrepancy with the symmetrized kernel.
pub fn stein_discrepancy(
    table: &CoefficientTable,
    n: usize,
    truncation: Truncation,
) -> Result<f64> {
    Ok(bracket_kernel_norms(table, n, truncation, KernelForm::Symmetrized)?.total)
}

/// The order-zero chaos of the bracket,
/// `Σ_{r=1}^{r_max} (1/r!) Σ_{u ∈ {1..n}^r} a_u²`, which tends to 1.
pub fn h0_check(table: &CoefficientTable, n: usize, r_max: u32) -> Result<f64> {
    let max_k = r_max.saturating_sub(1) / 2;
    let mut acc = CompensatedSum::new();
    if r_max == 0 {
        return Ok(0.0);
    }
    for p in enumerate_patterns_up_to(max_k, n) {
        let a = table.get(n, &p)?;
        let count = crate::exact::to_f64(&tuple_count(&p, n));
        acc.add(count * a * a / factorial_f64(p.order() as usize));
    }
    Ok(acc.value())
}

fn order_three(table: &CoefficientTable, n: usize) -> Result<(f64, f64, f64)> {
    Ok((
        table.get(n, &"1".parse()?)?,
        table.get(n, &"3".parse()?)?,
        table.get(n, &"2,1".parse()?)?,
    ))
}

/// The `k = 0, l = 1` example term in its simplified form
/// `(1/3) Σ_j (Σ_u a_u a_{u,j,j})²`, which drops `j_1 ≠ j_2`.
pub fn toy_term(table: &CoefficientTable, n: usize) -> Result<f64> {
    let (a1, a3, a21) = order_three(table, n)?;
    // u = j gives pattern (3); the other n-1 values of u give (2,1).
    let inner = a1 * a3 + (n - 1) as f64 * a1 * a21;
    Ok(n as f64 * inner * inner / 3.0)
}

/// `(1/3) Σ_{j_1,j_2} (Σ_u a_u a_{u,j_1,j_2})²` with the off-diagonal
/// `j_1 ≠ j_2` included: there `u ∈ {j_1, j_2}` gives pattern (2,1), so
/// the inner sum is `2 a_1 a_{(2,1)}` rather than zero. The extra part is
/// `O(n^{-2})` and does not change the `1/n` rate.
pub fn toy_term_full(table: &CoefficientTable, n: usize) -> Result<f64> {
    let (a1, _, a21) = order_three(table, n)?;
    let off = 2.0 * a1 * a21;
    Ok(toy_term(table, n)? + (n * (n - 1)) as f64 * off * off / 3.0)
}
