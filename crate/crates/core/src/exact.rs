//! Small exact-integer helpers shared by the combinatorial modules.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(2k-1)!!`, with `(-1)!! = 1`.
pub fn double_factorial_odd(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, j| acc * (2 * j - 1))
}

/// Nearest binary64 to `num / den`, valid for operands of any size.
///
/// Results below the subnormal range flush to zero and results above the
/// binary64 range become infinite.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    assert!(!den.is_zero(), "ratio_to_f64: zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let n = num.magnitude();
    let d = den.magnitude();
    // Scale so the integer quotient carries 64..66 significant bits.
    let shift = d.bits() as i64 - n.bits() as i64 + 66;
    let (q, r) = if shift >= 0 {
        (n << shift as u64).div_rem(d)
    } else {
        n.div_rem(&(d << (-shift) as u64))
    };
    // Sticky bit so the final rounding by to_f64 is not fooled by truncation.
    let q = if r.is_zero() {
        q
    } else {
        (q << 1u32) | BigUint::one()
    };
    let extra = if r.is_zero() { 0 } else { 1 };
    let mantissa = q.to_f64().expect("finite by construction");
    let value = scale_by_pow2(mantissa, -(shift + extra));
    if negative {
        -value
    } else {
        value
    }
}

/// `x * 2^e` without intermediate overflow or underflow.
pub fn scale_by_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

pub fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}
