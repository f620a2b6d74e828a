use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaosnorm"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows after the column row, without trailing `#` notes.
fn rows(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    lines.next().expect("column row");
    lines.map(split_csv).collect()
}

fn columns(text: &str) -> Vec<String> {
    text.lines()
        .find(|l| !l.starts_with('#'))
        .map(split_csv)
        .unwrap()
}

fn split_csv(line: &str) -> Vec<String> {
    let mut fields = vec![String::new()];
    let mut quoted = false;
    for c in line.chars() {
        match c {
            '"' => quoted = !quoted,
            ',' if !quoted => fields.push(String::new()),
            _ => fields.last_mut().unwrap().push(c),
        }
    }
    fields
}

#[test]
fn coeffs_lists_three_patterns_for_n2_k1() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(
        &["coeffs", "--n", "2", "--max-k", "1", "--mc-samples", "0"],
        dir.path(),
    ));
    assert_eq!(
        columns(&text),
        [
            "pattern",
            "n",
            "value_exact",
            "value_moments_path",
            "delta",
            "value_mc",
            "mc_stderr"
        ]
    );
    let rows = rows(&text);
    let patterns: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(patterns, ["1", "3", "2,1"]);
    for r in &rows {
        assert!(r[5].is_empty() && r[6].is_empty());
        let delta: f64 = r[4].parse().unwrap();
        assert!(delta < 1e-12);
    }
    let a1: f64 = rows[0][2].parse().unwrap();
    assert!((a1 - 0.6266570686577501).abs() < 1e-15);
}

#[test]
fn coeffs_with_monte_carlo_fills_columns() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(
        &[
            "coeffs",
            "--n",
            "3",
            "--max-k",
            "1",
            "--mc-samples",
            "20000",
            "--seed",
            "3",
        ],
        dir.path(),
    ));
    for r in rows(&text) {
        let exact: f64 = r[2].parse().unwrap();
        let mc: f64 = r[5].parse().unwrap();
        let se: f64 = r[6].parse().unwrap();
        assert!((exact - mc).abs() < 5.0 * se, "{r:?}");
    }
}

#[test]
fn header_is_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(&["norm", "--n", "4", "--max-k", "3"], dir.path()));
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(header[0].starts_with("# chaosnorm "));
    assert!(header.iter().any(|l| l.contains("config: n=4 max_k=3")));
    assert!(header.iter().any(|l| l.starts_with("# cache: read-write")));
    assert!(header.iter().any(|l| l.starts_with("# generator: ")));
    assert!(header.contains(&"# created: unix=0"));
}

#[test]
fn norm_partial_sums_are_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(&["norm", "--n", "2", "--max-k", "6"], dir.path()));
    let sums: Vec<f64> = rows(&text).iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(sums.len(), 7);
    assert!(sums.windows(2).all(|w| w[0] <= w[1]));
    assert!(*sums.last().unwrap() < 1.0);
}

#[test]
fn usage_errors_exit_2_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.csv");
    let target_arg = target.to_str().unwrap();
    let cases: [&[&str]; 6] = [
        &["norm", "--n", "1"],
        &["bound", "--n-grid", "64:8:geometric"],
        &["simulate", "--n", "16", "--samples", "100"],
        &["bound", "--n", "8", "--m-max", "9"],
        &["coeffs", "--n", "2", "--n-grid", "2:4:linear"],
        &["nonsense"],
    ];
    for args in cases {
        let mut full = args.to_vec();
        full.extend(["--output", target_arg]);
        let out = run(&full, &dir.path().join("cache"));
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(!target.exists(), "{args:?}");
    }
}

#[test]
fn computation_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("not-a-dir");
    fs::write(&blocker, "x").unwrap();
    let target = dir.path().join("out.csv");
    let out = run(
        &[
            "coeffs",
            "--n",
            "2",
            "--max-k",
            "1",
            "--output",
            target.to_str().unwrap(),
        ],
        &blocker,
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!target.exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("bound.csv");
    let args = ["bound", "--n-grid", "8:16:geometric"];
    let piped = stdout(&run(&args, &dir.path().join("cache")));
    let mut with_file = args.to_vec();
    with_file.extend(["-o", target.to_str().unwrap()]);
    let out = run(&with_file, &dir.path().join("cache"));
    assert!(out.status.success() && out.stdout.is_empty());
    let written = fs::read_to_string(&target).unwrap();
    let strip = |s: &str| -> String {
        s.lines()
            .filter(|l| !l.starts_with("# config"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&written), strip(&piped));
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn bound_reports_grid_and_slope() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(
        &[
            "bound",
            "--n-grid",
            "8:64:geometric",
            "--m-max",
            "2",
            "--r-max",
            "4",
        ],
        dir.path(),
    ));
    let cols = columns(&text);
    assert!(cols.contains(&"classical_p3".to_string()));
    let rows = rows(&text);
    assert_eq!(rows.len(), 4);
    let d: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(d.iter().all(|&x| x > 0.0));
    assert!(d.windows(2).all(|w| w[1] < w[0]));
    let slope_line = text
        .lines()
        .find(|l| l.starts_with("# loglog_slope="))
        .unwrap();
    let slope: f64 = slope_line
        .trim_start_matches("# loglog_slope=")
        .parse()
        .unwrap();
    assert!(slope < -0.8 && slope > -1.4, "{slope}");
}

#[test]
fn simulate_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "simulate",
        "--n",
        "16",
        "--samples",
        "20000",
        "--seed",
        "42",
    ];
    let a = stdout(&run(&args, dir.path()));
    let b = stdout(&run(&args, dir.path()));
    assert_eq!(a, b);
    let stats: Vec<String> = rows(&a).into_iter().map(|r| r[3].clone()).collect();
    assert!(stats.contains(&"kolmogorov".to_string()));
    assert!(stats.contains(&"wasserstein".to_string()));
    let other = stdout(&run(
        &[
            "simulate",
            "--n",
            "16",
            "--samples",
            "20000",
            "--seed",
            "43",
        ],
        dir.path(),
    ));
    assert_ne!(rows(&a), rows(&other));
}

#[test]
fn compare_flags_vacuous_classical_bound() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(
        &[
            "compare",
            "--n-grid",
            "8:16:geometric",
            "--samples",
            "20000",
        ],
        dir.path(),
    ));
    let cols = columns(&text);
    let at = |name: &str| cols.iter().position(|c| c == name).unwrap();
    for r in rows(&text) {
        assert_eq!(r[at("dominated_K")], "true");
        assert_eq!(r[at("classical_vacuous")], "true");
    }
}

#[test]
fn asymptotics_flags_paper_constant_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(&["asymptotics", "--max-k", "1"], dir.path()));
    let rows = rows(&text);
    let three = rows.iter().find(|r| r[0] == "3").unwrap();
    assert_eq!(three[1], "3/2");
    assert_eq!(three[8], "true");
    let one = rows.iter().find(|r| r[0] == "1").unwrap();
    assert_eq!(one[8], "false");
}

#[test]
fn cache_round_trip_keeps_values() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["coeffs", "--n-grid", "2:5:linear", "--max-k", "2"];
    let cold = stdout(&run(&args, &cache));
    assert!(cache.join("coefficients-n5.txt").exists());
    let warm = stdout(&run(&args, &cache));
    assert_eq!(cold, warm);
    fs::write(cache.join("coefficients-n3.txt"), "garbage").unwrap();
    let repaired = stdout(&run(&args, &cache));
    assert_eq!(cold, repaired);
    let disabled = stdout(&run(
        &[&args[..], &["--no-cache"]].concat(),
        &dir.path().join("unused"),
    ));
    assert_eq!(rows(&cold), rows(&disabled));
    assert!(!dir.path().join("unused").exists());
}
