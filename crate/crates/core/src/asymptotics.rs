//! Large-`n` behaviour of the coefficients: `a(p, n) ~ C(p) n^{-(1/2 + k)}`
//! for a pattern of order `2k+1`.
//!
//! Three constants are reported side by side: the two printed forms of the
//! limit (`1/k!` and `k!` in front), and a constant fitted to exact values.
//! The exact limit `(-1)^k (2k-1)!! P 2^{-k}` with
//! `P = (2d_1+1)!/d_1! ∏ (2d_j)!/d_j!` follows from expanding `Q(k,n)` in
//! `1/n` and is exposed as [`limit_constant`].

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::One;

use crate::coefficients::{coefficient, exact::prefactor};
use crate::error::{Error, Result};
use crate::exact::{double_factorial_odd, factorial, ratio_to_f64};
use crate::hermite::alternating_power_sum;
use crate::patterns::MultiplicityPattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantVariant {
    /// Leading factor `(2k-1)!!/k!`.
    Statement,
    /// Leading factor `k! (2k-1)!!`.
    Proof,
}

fn half_order(p: &MultiplicityPattern) -> Result<u32> {
    if p.is_vanishing() {
        return Err(Error::domain(format!("pattern {p} vanishes identically")));
    }
    Ok(p.half_order()
        .expect("non-vanishing patterns have odd order"))
}

/// `1/2 + k` for a pattern of order `2k+1`.
pub fn decay_exponent(p: &MultiplicityPattern) -> Result<Ratio<u32>> {
    let k = half_order(p)?;
    Ok(Ratio::new(2 * k + 1, 2))
}

fn exponent_f64(p: &MultiplicityPattern) -> Result<f64> {
    Ok(f64::from(half_order(p)?) + 0.5)
}

/// Literal evaluation of the printed limit constant
/// `c_k (2k-1)!! (2d_1+1)! ∏(2d_j)! / (∏ d_j!)² · 2^{-2k} (-1)^k ∏ t(d_j)`,
/// with `c_k = 1/k!` or `k!` and `t(d) = Σ_l (-1)^l C(d,l) l^d`.
pub fn paper_constant(p: &MultiplicityPattern, variant: ConstantVariant) -> Result<f64> {
    let k = half_order(p)?;
    let (d1, evens) = p.half_multiplicities().expect("checked above");
    let mut num = BigInt::from(double_factorial_odd(k as u64) * factorial(2 * d1 as u64 + 1));
    let mut den = BigInt::from(factorial(d1 as u64).pow(2)) << (2 * k as usize);
    num *= alternating_power_sum(d1 as usize);
    for &d in &evens {
        num *= BigInt::from(factorial(2 * d as u64)) * alternating_power_sum(d as usize);
        den *= BigInt::from(factorial(d as u64).pow(2));
    }
    match variant {
        ConstantVariant::Statement => den *= BigInt::from(factorial(k as u64)),
        ConstantVariant::Proof => num *= BigInt::from(factorial(k as u64)),
    }
    if k % 2 == 1 {
        num = -num;
    }
    Ok(ratio_to_f64(&num, &den))
}

/// `lim n^{1/2+k} a(p, n) = (-1)^k (2k-1)!! P 2^{-k}`.
pub fn limit_constant(p: &MultiplicityPattern) -> Result<f64> {
    let k = half_order(p)?;
    let pref: BigUint = prefactor(p).expect("checked above");
    let num = BigInt::from(double_factorial_odd(k as u64) * pref);
    let den = BigInt::one() << k as usize;
    let value = ratio_to_f64(&num, &den);
    Ok(if k % 2 == 1 { -value } else { value })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedConstant {
    pub constant: f64,
    /// Largest absolute deviation of `ln|a|` from the fitted line.
    pub residual: f64,
}

fn log_samples(p: &MultiplicityPattern, n_grid: &[usize]) -> Result<Vec<(f64, f64, f64)>> {
    n_grid
        .iter()
        .map(|&n| {
            let a = coefficient(p, n)?;
            if a == 0.0 || !a.is_normal() {
                return Err(Error::domain(format!(
                    "coefficient of {p} at n={n} underflows ({a}); use a smaller order or smaller n"
                )));
            }
            Ok(((n as f64).ln(), a.abs().ln(), a.signum()))
        })
        .collect()
}

/// Least-squares constant for `ln|a| = ln|C| - e ln n` with the exponent
/// fixed at its theoretical value.
pub fn fitted_constant(p: &MultiplicityPattern, n_grid: &[usize]) -> Result<FittedConstant> {
    let e = exponent_f64(p)?;
    if n_grid.len() < 4 {
        return Err(Error::domain("a constant fit needs at least 4 grid points"));
    }
    let min_n = 20 * p.order() as usize;
    if let Some(&n) = n_grid.iter().find(|&&n| n < min_n) {
        return Err(Error::domain(format!(
            "grid point n={n} is below 20 x order = {min_n} for pattern {p}"
        )));
    }
    let samples = log_samples(p, n_grid)?;
    let intercept = samples
        .iter()
        .map(|&(ln_n, ln_a, _)| ln_a + e * ln_n)
        .sum::<f64>()
        / samples.len() as f64;
    let residual = samples
        .iter()
        .map(|&(ln_n, ln_a, _)| (ln_a - (intercept - e * ln_n)).abs())
        .fold(0.0, f64::max);
    let largest = samples
        .iter()
        .zip(n_grid)
        .max_by_key(|(_, &n)| n)
        .map(|(s, _)| s.2)
        .expect("grid is nonempty");
    Ok(FittedConstant {
        constant: largest * intercept.exp(),
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares of `ln y` on `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 2 {
        return Err(Error::domain("a slope fit needs at least 2 points"));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::domain("log-log fit needs positive values"));
    }
    let m = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x.ln(), sy + y.ln()));
    let (mx, my) = (sx / m, sy / m);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x.ln() - mx;
        sxx += dx * dx;
        sxy += dx * (y.ln() - my);
    }
    if sxx == 0.0 {
        return Err(Error::domain("slope fit needs distinct abscissae"));
    }
    let slope = sxy / sxx;
    Ok(SlopeFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// Free-slope fit of `ln|a(p, n)|` against `ln n`.
pub fn coefficient_slope(p: &MultiplicityPattern, n_grid: &[usize]) -> Result<SlopeFit> {
    let points = n_grid
        .iter()
        .map(|&n| Ok((n as f64, coefficient(p, n)?.abs())))
        .collect::<Result<Vec<_>>>()?;
    log_log_slope(&points)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub pattern: MultiplicityPattern,
    pub exponent: Ratio<u32>,
    pub paper_constant_statement: f64,
    pub paper_constant_proof: f64,
    pub fitted_constant: f64,
    pub fit_residual: f64,
    pub limit_constant: f64,
    pub free_slope: f64,
    pub n_grid: Vec<usize>,
}

impl AsymptoticReport {
    /// True when neither printed variant is within 10% of the fitted constant.
    pub fn paper_constant_mismatch(&self) -> bool {
        let off = |c: f64| ((self.fitted_constant - c) / self.fitted_constant).abs() > 0.10;
        off(self.paper_constant_statement) && off(self.paper_constant_proof)
    }
}

pub fn asymptotic_report(p: &MultiplicityPattern, n_grid: &[usize]) -> Result<AsymptoticReport> {
    let fit = fitted_constant(p, n_grid)?;
    Ok(AsymptoticReport {
        pattern: p.clone(),
        exponent: decay_exponent(p)?,
        paper_constant_statement: paper_constant(p, ConstantVariant::Statement)?,
        paper_constant_proof: paper_constant(p, ConstantVariant::Proof)?,
        fitted_constant: fit.constant,
        fit_residual: fit.residual,
        limit_constant: limit_constant(p)?,
        free_slope: coefficient_slope(p, n_grid)?.slope,
        n_grid: n_grid.to_vec(),
    })
}
