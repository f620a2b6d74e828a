use chaosnorm::coefficients::{coefficient, table_build, CachePolicy};
use chaosnorm::montecarlo::{empirical_kolmogorov, mc_coefficients, sample_fn};
use chaosnorm::patterns::enumerate_patterns_up_to;
use chaosnorm::stein::{bound_report, bracket_kernel_norms, KernelForm, Truncation};

#[test]
fn cached_table_matches_direct_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let policy = CachePolicy::ReadWrite(dir.path().to_path_buf());
    let first = table_build(&[3, 7], 3, &policy).unwrap();
    let second = table_build(&[3, 7], 3, &policy).unwrap();
    assert_eq!(second.cache_stats().misses, 0);
    assert_eq!(second.cache_stats().hits, first.len());
    for n in [3, 7] {
        for (p, v) in second.entries_for(n) {
            assert_eq!(
                v.to_bits(),
                coefficient(p, n).unwrap().to_bits(),
                "{p} n={n}"
            );
        }
    }
}

#[test]
fn bound_dominates_simulation_at_small_n() {
    let truncation = Truncation { m_max: 2, r_max: 4 };
    let table = table_build(&[4], truncation.required_max_k(), &CachePolicy::Disabled).unwrap();
    let norms = bracket_kernel_norms(&table, 4, truncation, KernelForm::Symmetrized).unwrap();
    let report = bound_report(4, norms.total).unwrap();
    let batch = sample_fn(4, 50_000, 11).unwrap();
    let (ks, se) = empirical_kolmogorov(&batch).unwrap();
    assert!(ks <= report.bound_kolmogorov + 2.0 * se);
    assert!(report.classical_bound_p3 > 1.0);
}

#[test]
fn monte_carlo_tracks_every_low_order_coefficient() {
    let n = 4;
    let batch = sample_fn(n, 200_000, 99).unwrap();
    let jobs: Vec<_> = enumerate_patterns_up_to(2, n)
        .into_iter()
        .map(|p| {
            let slots = (0..p.part_count()).rev().collect();
            (p, slots)
        })
        .collect();
    let estimates = mc_coefficients(&jobs, &batch).unwrap();
    for ((p, _), e) in jobs.iter().zip(&estimates) {
        let exact = coefficient(p, n).unwrap();
        assert!(
            (exact - e.estimate).abs() < 5.0 * e.stderr,
            "{p}: {exact} vs {e:?}"
        );
    }
}
