//! Probabilists' Hermite polynomials with exact integer coefficients.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{binomial, factorial};

/// `H_d` in the monomial basis: `coeffs[j]` multiplies `x^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitePoly {
    degree: usize,
    coeffs: Vec<BigInt>,
}

impl HermitePoly {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Nonzero `(power, coefficient)` pairs in increasing power.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Horner evaluation of the monomial form. Loses accuracy for large
    /// degree; [`hermite_eval`] is the stable evaluator.
    pub fn eval_monomial(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

/// Exact coefficients of `H_d`:
/// the coefficient of `x^{d-2l}` is `d! (-1)^l / (2^l l! (d-2l)!)`.
pub fn hermite_coefficients(d: usize) -> HermitePoly {
    let mut coeffs = vec![BigInt::zero(); d + 1];
    let d_fact = factorial(d as u64);
    for l in 0..=d / 2 {
        let denom: BigUint =
            (BigUint::one() << l) * factorial(l as u64) * factorial((d - 2 * l) as u64);
        let magnitude = BigInt::from(&d_fact / denom);
        coeffs[d - 2 * l] = if l % 2 == 0 { magnitude } else { -magnitude };
    }
    HermitePoly { degree: d, coeffs }
}

/// `H_d(x)` by the three-term recurrence `H_{j+1} = x H_j - j H_{j-1}`.
pub fn hermite_eval(d: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if d == 0 {
        return prev;
    }
    let mut cur = x;
    for j in 1..d {
        let next = x * cur - j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Values `H_0(x), ..., H_d(x)` in one pass of the recurrence.
pub fn hermite_eval_all(d: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if d == 0 {
        return;
    }
    out.push(x);
    for j in 1..d {
        let next = x * out[j] - j as f64 * out[j - 1];
        out.push(next);
    }
}

/// `t(d) = Σ_{l=0}^{d} (-1)^l C(d,l) l^d`, with `0^0 = 1`.
pub fn alternating_power_sum(d: usize) -> BigInt {
    alternating_power_moment(d, d)
}

/// `Σ_{l=0}^{d} (-1)^l C(d,l) l^q`, with `0^0 = 1`.
pub fn alternating_power_moment(d: usize, q: usize) -> BigInt {
    let mut acc = BigInt::zero();
    for l in 0..=d {
        let power = if q == 0 {
            BigInt::one()
        } else {
            BigInt::from(l).pow(q as u32)
        };
        let term = BigInt::from(binomial(d as u64, l as u64)) * power;
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
