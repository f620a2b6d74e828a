use super::*;
use crate::moments::gaussian_moment_over_vn;
use crate::moments::EvenExponentVector;
use crate::patterns::{enumerate_patterns, enumerate_patterns_up_to, tuple_count};
use crate::special::gamma_ratio;
use proptest::prelude::*;

fn pat(s: &str) -> MultiplicityPattern {
    s.parse().unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn k0_examples() {
    assert!(
        rel(
            k0_coefficient(1).unwrap(),
            (2.0 / std::f64::consts::PI).sqrt()
        ) < 1e-14
    );
    assert!((k0_coefficient(2).unwrap() - 0.626_657_1).abs() < 1e-7);
    let n = 10_000usize;
    assert!(((n as f64).sqrt() * k0_coefficient(n).unwrap() - 1.0).abs() < 1e-3);
    assert!(k0_coefficient(0).is_err());
}

#[test]
fn coefficient_examples() {
    assert!((coefficient(&pat("1"), 2).unwrap() - 0.626_657_1).abs() < 1e-7);
    // 6 · 2^{-3/2} (Γ(2.5)/Γ(3) - Γ(1.5)/Γ(2)), straight from Gamma ratios.
    let oracle =
        6.0 * 2f64.powf(-1.5) * (gamma_ratio(2.5, 3.0).unwrap() - gamma_ratio(1.5, 2.0).unwrap());
    let got = coefficient(&pat("3"), 2).unwrap();
    assert!(rel(got, oracle) < 1e-14, "{got} vs {oracle}");
    // ≈ -0.47003 to the rounding of the hand evaluation; exactly -0.469992801493313.
    assert!((got + 0.470_03).abs() < 1e-3);
    assert!(rel(got, -0.469_992_801_493_313) < 1e-14);
    assert_eq!(coefficient(&pat("1,1,1"), 3).unwrap(), 0.0);
    assert!(coefficient(&pat("2,2,1"), 2).is_err());
    assert!(coefficient(&pat("1"), 1).is_err());
}

#[test]
fn moments_path_examples() {
    // E[(W^4 - 3W^2)/V_2] from two closed-form moments.
    let m2 = gaussian_moment_over_vn(&EvenExponentVector::new(2, [(1, 2)]).unwrap()).unwrap();
    let m1 = gaussian_moment_over_vn(&EvenExponentVector::new(2, [(1, 1)]).unwrap()).unwrap();
    let got = coefficient_via_moments(&pat("3"), 2).unwrap();
    assert!(rel(got, m2 - 3.0 * m1) < 1e-14);
    assert!(coefficient_via_moments(&pat("1,1,1"), 3).unwrap().abs() <= 1e-12);
    let a = coefficient(&pat("2,1"), 2).unwrap();
    let b = coefficient_via_moments(&pat("2,1"), 2).unwrap();
    assert!(rel(a, b) < 1e-10);
}

/// Σ over the full product of index sums: the original multi-index form of
/// the primary formula, without the Vandermonde collapse.
fn coefficient_by_full_multi_index(p: &MultiplicityPattern, n: usize) -> f64 {
    let (d1, evens) = p.half_multiplicities().unwrap();
    let mut ds = vec![d1];
    ds.extend(evens);
    let k: u32 = ds.iter().sum();
    let mut pref = 1.0;
    for (i, &d) in ds.iter().enumerate() {
        let top = if i == 0 { 2 * d + 1 } else { 2 * d };
        pref *= (1..=top).map(f64::from).product::<f64>() / (1..=d).map(f64::from).product::<f64>();
    }
    let binom = |a: u32, b: u32| -> f64 {
        (0..b).fold(1.0, |acc, i| acc * f64::from(a - i) / f64::from(i + 1))
    };
    let nf = n as f64;
    let mut total = 0.0;
    let mut ls = vec![0u32; ds.len()];
    loop {
        let l: u32 = ls.iter().sum();
        let weight: f64 = ds.iter().zip(&ls).map(|(&d, &li)| binom(d, li)).product();
        let s = f64::from(k + 1 - l);
        let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
        total += sign * weight * gamma_ratio(s + (nf - 1.0) / 2.0, s + nf / 2.0).unwrap();
        let mut i = 0;
        loop {
            if i == ls.len() {
                return pref * 2f64.powf(-(f64::from(k)) - 0.5) * total;
            }
            ls[i] += 1;
            if ls[i] <= ds[i] {
                break;
            }
            ls[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn collapsed_sum_matches_full_multi_index_sum() {
    for n in [2usize, 3, 5, 9] {
        for p in enumerate_patterns_up_to(3, n) {
            let a = coefficient(&p, n).unwrap();
            let b = coefficient_by_full_multi_index(&p, n);
            assert!(
                (a - b).abs() <= 1e-11 * a.abs().max(1.0),
                "{p} n={n}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn dual_path_agreement() {
    for n in 2..=12 {
        for p in enumerate_patterns_up_to(3, n) {
            let a = coefficient(&p, n).unwrap();
            let b = coefficient_via_moments(&p, n).unwrap();
            assert!(
                (a - b).abs() <= 1e-10 * a.abs().max(1.0),
                "{p} n={n}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn vanishing_patterns_on_moments_path() {
    for n in 2..=6usize {
        for order in 1..=6u32 {
            for p in all_partitions(order)
                .into_iter()
                .filter(|p| p.is_vanishing() && p.part_count() <= n)
            {
                let v = coefficient_via_moments(&p, n).unwrap();
                assert!(v.abs() <= 1e-12, "{p} n={n}: {v}");
                assert_eq!(coefficient(&p, n).unwrap(), 0.0);
            }
        }
    }
}

fn all_partitions(order: u32) -> Vec<MultiplicityPattern> {
    fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiplicityPattern>) {
        if rem == 0 {
            out.push(MultiplicityPattern::new(cur.clone()).unwrap());
            return;
        }
        for part in (1..=max.min(rem)).rev() {
            cur.push(part);
            go(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(order, order, &mut Vec::new(), &mut out);
    out
}

#[test]
fn order_three_is_negative() {
    for n in 2..=100 {
        assert!(coefficient(&pat("3"), n).unwrap() < 0.0, "n={n}");
    }
}

#[test]
fn norm_examples() {
    let s = chaos_norm_partial(2, 6).unwrap();
    assert!(rel(s[0], std::f64::consts::FRAC_PI_4) < 1e-14);
    assert!(s.windows(2).all(|w| w[0] <= w[1]));
    assert!(s.iter().all(|&v| v <= 1.0 + 1e-9));
    assert!(chaos_norm_partial(1, 3).is_err());
}

#[test]
fn norm_term_matches_table_sum() {
    // The exact-rational term against the plain float sum of count · a².
    for n in [2usize, 3, 7] {
        for k in 0..=4u32 {
            let mut direct = 0.0;
            for p in enumerate_patterns(k, n) {
                let a = coefficient(&p, n).unwrap();
                direct += crate::exact::to_f64(&tuple_count(&p, n)) * a * a;
            }
            direct /= (1..=2 * k + 1).map(f64::from).product::<f64>();
            let term = chaos_norm_term(n, k).unwrap();
            assert!(rel(term, direct) < 1e-12, "n={n} k={k}: {term} vs {direct}");
        }
    }
}

#[test]
fn norm_approaches_one() {
    let s = chaos_norm_partial(8, 8).unwrap();
    assert!(*s.last().unwrap() > 0.999 && *s.last().unwrap() <= 1.0 + 1e-9);
}

#[test]
fn cancellation_is_reported() {
    let small = coefficient_with_diagnostic(&pat("3"), 200).unwrap();
    let large = coefficient_with_diagnostic(&pat("7"), 200).unwrap();
    assert!(small.cancellation_digits > 0.0);
    assert!(large.cancellation_digits > small.cancellation_digits);
    assert_eq!(
        coefficient_with_diagnostic(&pat("2,2"), 4)
            .unwrap()
            .cancellation_digits,
        0.0
    );
}

proptest! {
    #[test]
    fn dual_path_on_random_dimensions(n in 2usize..60, k in 0u32..=3, pick in any::<prop::sample::Index>()) {
        let patterns = enumerate_patterns(k, n);
        let p = pick.get(&patterns);
        let a = coefficient(p, n).unwrap();
        let b = coefficient_via_moments(p, n).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{} n={}: {} vs {}", p, n, a, b);
    }
}
