//! One function per subcommand. Each validates its arguments, computes,
//! and returns the rendered CSV.

use anyhow::Context;

use chaosnorm::asymptotics::{asymptotic_report, log_log_slope};
use chaosnorm::coefficients::{
    chaos_norm_partial, chaos_norm_term, coefficient_via_moments, table_build, CachePolicy,
    CacheStats, CoefficientTable,
};
use chaosnorm::montecarlo::{
    empirical_kolmogorov, empirical_wasserstein1_with_stderr, mc_coefficients, sample_fn,
    symmetry_statistic, GENERATOR_VERSION, MIN_ESTIMATOR_COUNT,
};
use chaosnorm::patterns::enumerate_patterns_up_to;
use chaosnorm::stein::{
    bound_report, bracket_kernel_norms, KernelForm, Truncation, MAX_SUPPORTED_M,
};

use super::output::{num, opt_num, quoted, Document};
use super::{Cli, Command, Dims, Failure, Truncations};

type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Coeffs(a) => {
            let dims = dimensions(&a.dims, 2)?;
            if a.mc_samples != 0 && a.mc_samples < MIN_ESTIMATOR_COUNT {
                return Err(usage(format!(
                    "--mc-samples must be 0 or at least {MIN_ESTIMATOR_COUNT}, got {}",
                    a.mc_samples
                )));
            }
            let config = format!(
                "{} max_k={} mc_samples={} seed={}",
                a.dims.describe(),
                a.max_k,
                a.mc_samples,
                a.seed
            );
            coeffs(cli, &config, &dims, a.max_k, a.mc_samples, a.seed)
        }
        Command::Norm(a) => {
            let dims = dimensions(&a.dims, 2)?;
            norm(
                cli,
                &format!("{} max_k={}", a.dims.describe(), a.max_k),
                &dims,
                a.max_k,
            )
        }
        Command::Asymptotics(a) => {
            let grid = a.n_grid.points();
            let min_n = 20 * (2 * a.max_k as usize + 1);
            if grid.len() < 4 || grid[0] < min_n {
                return Err(usage(format!(
                    "--n-grid needs at least 4 points, all >= {min_n} for max_k={}",
                    a.max_k
                )));
            }
            let config = format!("max_k={} n_grid={:?}", a.max_k, grid);
            asymptotics(cli, &config, &grid, a.max_k)
        }
        Command::Bound(a) => {
            let dims = dimensions(&a.dims, 2)?;
            let truncation = truncation(&a.truncations)?;
            let config = format!(
                "{} {}",
                a.dims.describe(),
                describe_truncation(&a.truncations)
            );
            bound(cli, &config, &dims, truncation, a.truncations.kernel.into())
        }
        Command::Simulate(a) => {
            let dims = dimensions(&a.dims, 1)?;
            check_samples(a.samples)?;
            let config = format!(
                "{} samples={} seed={}",
                a.dims.describe(),
                a.samples,
                a.seed
            );
            simulate(cli, &config, &dims, a.samples, a.seed)
        }
        Command::Compare(a) => {
            let dims = dimensions(&a.dims, 2)?;
            let truncation = truncation(&a.truncations)?;
            check_samples(a.samples)?;
            let config = format!(
                "{} {} samples={} seed={}",
                a.dims.describe(),
                describe_truncation(&a.truncations),
                a.samples,
                a.seed
            );
            compare(
                cli,
                &config,
                &dims,
                truncation,
                a.truncations.kernel.into(),
                a.samples,
                a.seed,
            )
        }
    }
}

fn dimensions(dims: &Dims, min_n: usize) -> Result<Vec<usize>, Failure> {
    let points = dims.points();
    if points.is_empty() {
        return Err(usage("the dimension grid is empty"));
    }
    if let Some(&bad) = points.iter().find(|&&n| n < min_n) {
        return Err(usage(format!("this command needs n >= {min_n}, got {bad}")));
    }
    Ok(points)
}

fn check_samples(samples: usize) -> Result<(), Failure> {
    if samples < MIN_ESTIMATOR_COUNT {
        return Err(usage(format!(
            "--samples must be at least {MIN_ESTIMATOR_COUNT}, got {samples}"
        )));
    }
    Ok(())
}

fn truncation(t: &Truncations) -> Result<Truncation, Failure> {
    if !(1..=MAX_SUPPORTED_M).contains(&t.m_max) {
        return Err(usage(format!(
            "--m-max must be between 1 and {MAX_SUPPORTED_M}, got {}",
            t.m_max
        )));
    }
    Ok(Truncation {
        m_max: t.m_max,
        r_max: t.r_max,
    })
}

fn describe_truncation(t: &Truncations) -> String {
    let kernel = match KernelForm::from(t.kernel) {
        KernelForm::Symmetrized => "symmetrized",
        KernelForm::Literal => "literal",
    };
    format!("m_max={} r_max={} kernel={kernel}", t.m_max, t.r_max)
}

fn document(cli: &Cli, command: &str, config: &str) -> Document {
    let cache = match cli.cache_policy() {
        CachePolicy::Disabled => "disabled".to_string(),
        CachePolicy::ReadWrite(dir) => format!("read-write dir={}", dir.display()),
        CachePolicy::Refresh(dir) => format!("refresh dir={}", dir.display()),
    };
    let output = cli
        .output
        .as_ref()
        .map_or_else(|| "-".to_string(), |p| p.display().to_string());
    Document::new(
        command,
        &format!("{config} output={output}"),
        &cache,
        Some(GENERATOR_VERSION),
    )
}

/// Hit and miss counts vary between runs, so they go to stderr rather than
/// the file header.
fn build_table(cli: &Cli, dims: &[usize], max_k: u32) -> Result<CoefficientTable, Failure> {
    let table =
        table_build(dims, max_k, &cli.cache_policy()).context("building the coefficient table")?;
    let CacheStats {
        hits,
        misses,
        corrupt_files,
        files_written,
    } = table.cache_stats();
    eprintln!("cache: hits={hits} misses={misses} corrupt={corrupt_files} written={files_written}");
    Ok(table)
}

fn coeffs(
    cli: &Cli,
    config: &str,
    dims: &[usize],
    max_k: u32,
    mc_samples: usize,
    seed: u64,
) -> Outcome {
    let table = build_table(cli, dims, max_k)?;
    let mut doc = document(cli, "coeffs", config);
    doc.columns(&[
        "pattern",
        "n",
        "value_exact",
        "value_moments_path",
        "delta",
        "value_mc",
        "mc_stderr",
    ]);
    for &n in dims {
        let patterns = enumerate_patterns_up_to(max_k, n);
        let mc = if mc_samples > 0 {
            let batch = sample_fn(n, mc_samples, seed)?;
            let jobs: Vec<_> = patterns
                .iter()
                .map(|p| (p.clone(), (0..p.part_count()).collect()))
                .collect();
            Some(mc_coefficients(&jobs, &batch)?)
        } else {
            None
        };
        for (i, p) in patterns.iter().enumerate() {
            let exact = table.get(n, p)?;
            let moments = coefficient_via_moments(p, n)?;
            let est = mc.as_ref().map(|m| m[i]);
            doc.row(vec![
                quoted(&p.to_string()),
                n.to_string(),
                num(exact),
                num(moments),
                num((exact - moments).abs()),
                opt_num(est.map(|e| e.estimate)),
                opt_num(est.map(|e| e.stderr)),
            ]);
        }
    }
    Ok(doc.render())
}

fn norm(cli: &Cli, config: &str, dims: &[usize], max_k: u32) -> Outcome {
    let mut doc = document(cli, "norm", config);
    doc.columns(&["n", "k", "term", "partial_sum"]);
    for &n in dims {
        let partial = chaos_norm_partial(n, max_k)?;
        for (k, &s) in (0u32..).zip(&partial) {
            doc.row(vec![
                n.to_string(),
                k.to_string(),
                num(chaos_norm_term(n, k)?),
                num(s),
            ]);
        }
    }
    Ok(doc.render())
}

fn asymptotics(cli: &Cli, config: &str, grid: &[usize], max_k: u32) -> Outcome {
    let mut doc = document(cli, "asymptotics", config);
    doc.columns(&[
        "pattern",
        "exponent",
        "const_statement",
        "const_proof",
        "const_fitted",
        "residual",
        "n_min",
        "n_max",
        "paper_constant_mismatch",
        "const_limit",
        "free_slope",
    ]);
    let widest = 2 * max_k as usize + 1;
    for p in enumerate_patterns_up_to(max_k, widest) {
        let r = asymptotic_report(&p, grid)?;
        doc.row(vec![
            quoted(&p.to_string()),
            r.exponent.to_string(),
            num(r.paper_constant_statement),
            num(r.paper_constant_proof),
            num(r.fitted_constant),
            num(r.fit_residual),
            grid[0].to_string(),
            grid[grid.len() - 1].to_string(),
            r.paper_constant_mismatch().to_string(),
            num(r.limit_constant),
            num(r.free_slope),
        ]);
    }
    Ok(doc.render())
}

const SHELL_COLUMNS: [&str; 3] = ["shell_m1", "shell_m2", "shell_m3"];

fn bound(
    cli: &Cli,
    config: &str,
    dims: &[usize],
    truncation: Truncation,
    form: KernelForm,
) -> Outcome {
    let table = build_table(cli, dims, truncation.required_max_k())?;
    let shells = truncation.m_max.max(2) as usize;
    let mut columns = vec!["n", "m_max", "r_max", "discrepancy"];
    columns.extend_from_slice(&SHELL_COLUMNS[..shells]);
    columns.extend_from_slice(&[
        "last_shell_diag",
        "bound_K",
        "bound_W",
        "bound_TV",
        "bound_FM",
        "classical_p3",
    ]);
    let mut doc = document(cli, "bound", config);
    doc.columns(&columns);
    let mut points = Vec::new();
    for &n in dims {
        let norms = bracket_kernel_norms(&table, n, truncation, form)?;
        let b = bound_report(n, norms.total)?;
        points.push((n as f64, norms.total));
        let mut row = vec![
            n.to_string(),
            truncation.m_max.to_string(),
            truncation.r_max.to_string(),
            num(norms.total),
        ];
        for m in 1..=shells as u32 {
            row.push(opt_num(norms.per_order.get(&m).copied()));
        }
        row.extend([
            num(norms.truncation_diagnostic),
            num(b.bound_kolmogorov),
            num(b.bound_wasserstein),
            num(b.bound_total_variation),
            num(b.bound_fortet_mourier),
            num(b.classical_bound_p3),
        ]);
        doc.row(row);
    }
    if points.len() >= 2 && points.iter().all(|&(_, d)| d > 0.0) {
        let fit = log_log_slope(&points)?;
        doc.note(format!("loglog_slope={}", num(fit.slope)));
    }
    Ok(doc.render())
}

fn simulate(cli: &Cli, config: &str, dims: &[usize], samples: usize, seed: u64) -> Outcome {
    let mut doc = document(cli, "simulate", config);
    doc.columns(&["n", "seed", "count", "stat", "value", "stderr"]);
    for &n in dims {
        let batch = sample_fn(n, samples, seed)?;
        let (ks, ks_se) = empirical_kolmogorov(&batch)?;
        let (w, w_se) = empirical_wasserstein1_with_stderr(&batch)?;
        let s = batch.summary;
        let rows = [
            ("kolmogorov", ks, Some(ks_se)),
            ("wasserstein", w, Some(w_se)),
            ("mean", s.mean, Some(s.mean_stderr)),
            (
                "second_moment",
                s.second_moment,
                Some(s.second_moment_stderr),
            ),
            ("symmetry", symmetry_statistic(&batch)?, None),
        ];
        for (stat, value, stderr) in rows {
            doc.row(vec![
                n.to_string(),
                seed.to_string(),
                samples.to_string(),
                stat.to_string(),
                num(value),
                opt_num(stderr),
            ]);
        }
    }
    Ok(doc.render())
}

fn compare(
    cli: &Cli,
    config: &str,
    dims: &[usize],
    truncation: Truncation,
    form: KernelForm,
    samples: usize,
    seed: u64,
) -> Outcome {
    let table = build_table(cli, dims, truncation.required_max_k())?;
    let mut doc = document(cli, "compare", config);
    doc.columns(&[
        "n",
        "discrepancy",
        "bound_K",
        "empirical_K",
        "empirical_K_stderr",
        "dominated_K",
        "bound_W",
        "empirical_W",
        "empirical_W_stderr",
        "dominated_W",
        "classical_p3",
        "classical_vacuous",
    ]);
    for &n in dims {
        let discrepancy = bracket_kernel_norms(&table, n, truncation, form)?.total;
        let mut b = bound_report(n, discrepancy)?;
        let batch = sample_fn(n, samples, seed)?;
        b.empirical_kolmogorov = Some(empirical_kolmogorov(&batch)?);
        b.empirical_wasserstein = Some(empirical_wasserstein1_with_stderr(&batch)?);
        let (ks, ks_se) = b.empirical_kolmogorov.unwrap_or_default();
        let (w, w_se) = b.empirical_wasserstein.unwrap_or_default();
        doc.row(vec![
            n.to_string(),
            num(discrepancy),
            num(b.bound_kolmogorov),
            num(ks),
            num(ks_se),
            (ks - 2.0 * ks_se <= b.bound_kolmogorov).to_string(),
            num(b.bound_wasserstein),
            num(w),
            num(w_se),
            (w - 2.0 * w_se <= b.bound_wasserstein).to_string(),
            num(b.classical_bound_p3),
            (b.classical_bound_p3 > 1.0).to_string(),
        ]);
    }
    Ok(doc.render())
}
