use super::*;
use crate::coefficients::{coefficient, k0_coefficient};

fn pat(s: &str) -> MultiplicityPattern {
    s.parse().unwrap()
}

#[test]
fn rademacher_case() {
    let b = sample_fn(1, 5000, 3).unwrap();
    assert!(b.values.iter().all(|&v| v == 1.0 || v == -1.0));
}

#[test]
fn moments_of_f() {
    let b = sample_fn(16, 200_000, 11).unwrap();
    let s = b.summary;
    assert!(
        (s.second_moment - 1.0).abs() <= 4.0 * s.second_moment_stderr,
        "{s:?}"
    );
    assert!(s.mean.abs() <= 4.0 * s.mean_stderr, "{s:?}");
    let limit = 4.0;
    assert!(b.values.iter().all(|v| v.abs() <= limit));
}

#[test]
fn reproducible() {
    let a = sample_fn(5, 70_000, 99).unwrap();
    let b = sample_fn(5, 70_000, 99).unwrap();
    let c = sample_fn(5, 70_000, 100).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.values, c.values);
    // A shorter batch is a prefix of a longer one.
    let short = sample_fn(5, 1234, 99).unwrap();
    assert_eq!(short.values[..], a.values[..1234]);
    assert_eq!(a.generator, GENERATOR_VERSION);
}

#[test]
fn rejects_bad_arguments() {
    assert!(sample_fn(3, 0, 1).is_err());
    assert!(sample_fn(0, 10, 1).is_err());
    let small = sample_fn(3, 999, 1).unwrap();
    assert!(empirical_kolmogorov(&small).is_err());
    assert!(empirical_wasserstein1(&small).is_err());
    let b = sample_fn(2, 100, 1).unwrap();
    assert!(mc_coefficient(&pat("1,1,1"), &b).is_err());
    let normal = sample_standard_normal(2000, 1).unwrap();
    assert!(mc_coefficient(&pat("1"), &normal).is_err());
}

#[test]
fn coefficient_estimates() {
    let b2 = sample_fn(2, 400_000, 5).unwrap();
    for p in ["1", "3", "2,1"] {
        let e = mc_coefficient(&pat(p), &b2).unwrap();
        let exact = coefficient(&pat(p), 2).unwrap();
        assert!(
            (e.estimate - exact).abs() <= 4.0 * e.stderr,
            "{p}: {e:?} vs {exact}"
        );
    }
    let e = mc_coefficient(&pat("1"), &b2).unwrap();
    assert!((e.estimate - k0_coefficient(2).unwrap()).abs() < 5e-3);
    let b3 = sample_fn(3, 200_000, 6).unwrap();
    let e = mc_coefficient(&pat("1,1,1"), &b3).unwrap();
    assert!(e.estimate.abs() <= 4.0 * e.stderr, "{e:?}");
}

#[test]
fn estimates_ignore_slot_choice() {
    let b = sample_fn(6, 200_000, 8).unwrap();
    let p = pat("2,1");
    let est = mc_coefficients(&[(p.clone(), vec![0, 1]), (p.clone(), vec![5, 2])], &b).unwrap();
    let spread = (est[0].stderr.powi(2) + est[1].stderr.powi(2)).sqrt();
    assert!(
        (est[0].estimate - est[1].estimate).abs() <= 4.0 * spread,
        "{est:?}"
    );
    assert!(mc_coefficients(&[(p.clone(), vec![0, 0])], &b).is_err());
    assert!(mc_coefficients(&[(p, vec![0, 6])], &b).is_err());
}

#[test]
fn kolmogorov_rademacher() {
    let b = sample_fn(1, 100_000, 21).unwrap();
    let (d, se) = empirical_kolmogorov(&b).unwrap();
    assert!((d - 0.341_344_746).abs() < 0.01, "{d}");
    assert!(se > 0.0 && se < 0.01);
}

#[test]
fn kolmogorov_null() {
    let b = sample_standard_normal(100_000, 4).unwrap();
    let (d, _) = empirical_kolmogorov(&b).unwrap();
    assert!(d < dkw_envelope(100_000, 0.01), "{d}");
}

#[test]
fn kolmogorov_matches_naive_formula() {
    let b = sample_fn(3, 2000, 17).unwrap();
    let mut v = b.values.clone();
    v.sort_by(f64::total_cmp);
    let nf = v.len() as f64;
    let naive = v
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let p = normal_cdf(x);
            ((i + 1) as f64 / nf - p).max(p - i as f64 / nf)
        })
        .fold(0.0, f64::max);
    assert_eq!(empirical_kolmogorov(&b).unwrap().0, naive);
}

#[test]
fn wasserstein_values() {
    let null = sample_standard_normal(200_000, 2).unwrap();
    assert!(empirical_wasserstein1(&null).unwrap() < 5e-3);

    // 2 ∫_{1/2}^{1} |1 - Φ⁻¹(q)| dq by the midpoint rule.
    let m = 2_000_000;
    let oracle = (0..m)
        .map(|i| {
            let q = 0.5 + 0.5 * (i as f64 + 0.5) / m as f64;
            (1.0 - normal_quantile(q).unwrap()).abs()
        })
        .sum::<f64>()
        / m as f64;
    let b = sample_fn(1, 100_000, 9).unwrap();
    let w = empirical_wasserstein1(&b).unwrap();
    assert!((w - oracle).abs() < 0.01, "{w} vs {oracle}");
    // Independent value of the same integral (adaptive quadrature).
    assert!((oracle - 0.535_377_323_375_318_5).abs() < 1e-6, "{oracle}");

    let ws: Vec<f64> = [4usize, 16, 64]
        .iter()
        .map(|&n| empirical_wasserstein1(&sample_fn(n, 100_000, 12).unwrap()).unwrap())
        .collect();
    assert!(ws[0] > ws[1] && ws[1] > ws[2], "{ws:?}");

    let (w2, se) = empirical_wasserstein1_with_stderr(&b).unwrap();
    assert_eq!(w, w2);
    assert!(se > 0.0 && se < 0.01);
}

#[test]
fn symmetric_in_law() {
    let b = sample_fn(10, 100_000, 13).unwrap();
    let s = symmetry_statistic(&b).unwrap();
    assert!(s <= 2.0 * dkw_envelope(100_000, 0.01), "{s}");
    let shifted = SampleBatch {
        values: b.values.iter().map(|v| v + 0.1).collect(),
        ..b
    };
    assert!(symmetry_statistic(&shifted).unwrap() > 2.0 * dkw_envelope(100_000, 0.01));
}
