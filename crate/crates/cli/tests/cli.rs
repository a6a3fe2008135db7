use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use reslab::airy_model::BoundaryCondition;
use reslab::resonance::{ball_resonances, fit_cubic_slope, ResonanceQuery};

fn reslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_field(out: &Output, key: &str) -> f64 {
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    v[key].as_f64().unwrap_or_else(|| panic!("missing {key} in {v}"))
}

fn dir_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn airy_prime_zeros_are_printed_to_five_places() {
    let out = reslab(&["airy-zeros", "--kind", "ai-prime", "--count", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1.01879\n3.24820\n4.82010\n");
}

#[test]
fn airy_zeros_json_carries_full_precision() {
    let out = reslab(&["airy-zeros", "--kind", "ai", "--count", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let z = v["zeros"][0].as_f64().unwrap();
    assert!((z - 2.338_107_410_459_767).abs() < 1e-10, "{z}");
}

#[test]
fn unit_curvature_barrier() {
    let out = reslab(&["barrier", "--min-curvature", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    // 2^{-1/3} cos(π/6) · 1.0187929716 = 0.7002824…
    assert_eq!(stdout(&out), "S = 0.70028\n");
    let out = reslab(&["barrier", "--min-curvature", "1e0", "--json"]);
    assert!((json_field(&out, "S") - 0.700_282_446_044_828).abs() < 1e-12);
}

#[test]
fn ellipsoid_barrier_uses_the_flattest_point() {
    // Smallest principal curvature of the (2, 1.5, 1) ellipsoid is c/a² = 1/4.
    let e = reslab(&["barrier", "--ellipsoid", "2,1.5,1", "--json"]);
    let k = reslab(&["barrier", "--min-curvature", "0.25", "--json"]);
    assert!((json_field(&e, "S") - json_field(&k, "S")).abs() < 1e-9);
}

#[test]
fn neumann_monopole_of_the_unit_ball() {
    let dir = tempfile::tempdir().unwrap();
    let out = reslab(&[
        "ball",
        "--bc",
        "neumann",
        "--radius",
        "1",
        "--l-min",
        "0",
        "--l-max",
        "0",
        "--out",
        dir_str(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("resonances.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "l,re_zeta,im_zeta,residual,class,bc,gamma,radius");
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "0");
    assert!(fields[1].parse::<f64>().unwrap().abs() < 1e-10);
    assert!((fields[2].parse::<f64>().unwrap() + 1.0).abs() < 1e-10);
    assert_eq!(&fields[4..], ["resonance", "neumann", "0.0", "1.0"]);

    let barrier: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("barrier.json")).unwrap()).unwrap();
    for key in ["S", "C_fit", "S_fit", "stderr", "n_entries", "l_range"] {
        assert!(barrier.get(key).is_some(), "barrier.json lacks {key}");
    }
    let mirror: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("resonances.json")).unwrap()).unwrap();
    assert_eq!(mirror["query"]["l_max"], 0);
    assert_eq!(mirror["entries"].as_array().unwrap().len(), 1);
}

#[test]
fn no_temporary_files_are_left_behind() {
    let dir = tempfile::tempdir().unwrap();
    let out = reslab(&[
        "ball",
        "--bc",
        "dirichlet",
        "--l-max",
        "3",
        "--out",
        dir_str(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["barrier.json", "resonances.csv", "resonances.json"]);
}

#[test]
fn repeated_runs_write_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = reslab(&[
            "ball",
            "--bc",
            "robin",
            "--gamma",
            "0.5",
            "--l-max",
            "12",
            "--out",
            dir_str(d.path()),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    for name in ["resonances.csv", "resonances.json", "barrier.json"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name} differs between runs"
        );
    }
}

#[test]
fn fit_round_trips_through_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = reslab(&["ball", "--bc", "neumann", "--l-max", "40", "--out", dir_str(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let csv = dir.path().join("resonances.csv");
    let out = reslab(&[
        "fit",
        "--input",
        csv.to_str().unwrap(),
        "--l-lo",
        "10",
        "--l-hi",
        "40",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let from_file = json_field(&out, "S_fit");

    let set = ball_resonances(&ResonanceQuery::new(1.0, BoundaryCondition::neumann(), 0, 40)).unwrap();
    let (in_process, _) = fit_cubic_slope(&set, 10, 40).unwrap();
    assert!((from_file - in_process).abs() <= 1e-12, "{from_file} vs {in_process}");
}

#[test]
fn verify_reports_violations_of_a_low_candidate() {
    let dir = tempfile::tempdir().unwrap();
    reslab(&["ball", "--bc", "neumann", "--l-max", "8", "--out", dir_str(dir.path())]);
    let csv = dir.path().join("resonances.csv");
    let input = csv.to_str().unwrap();
    let fitted = reslab(&["verify", "--input", input, "--s", "0.70028", "--json"]);
    assert_eq!(fitted.status.code(), Some(0));
    let c_fit = json_field(&fitted, "C_fit");

    let at = format!("{}", c_fit + 1e-9);
    let ok = reslab(&["verify", "--input", input, "--s", "0.70028", "--c", &at, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);

    let below = format!("{}", c_fit - 0.05);
    let bad = reslab(&["verify", "--input", input, "--s", "0.70028", "--c", &below, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn model_eigs_match_airy_prime_zeros() {
    let out = reslab(&["model", "--eigs", "3", "--bc", "neumann", "--n", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let vals: Vec<f64> = stdout(&out).lines().map(|l| l.parse().unwrap()).collect();
    for (v, z) in vals.iter().zip([1.018_792_971_6, 3.248_197_582_2, 4.820_099_211_2]) {
        assert!((v - z).abs() < 1e-4, "{v} vs {z}");
    }
}

#[test]
fn model_suite_reports_seed_and_verdict() {
    let out = reslab(&[
        "model", "--suite", "ei:nh0", "--h", "1e-2", "--trials", "100", "--seed", "7", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["suite"], "ei:nh0");
    assert_eq!(v["passed"], true);
}

#[test]
fn symbol_window_is_open_for_the_ball() {
    let out = reslab(&["symbol", "--theta", "0.3", "--hess", "ball", "--delta", "0.1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_field(&out, "epsilon") > 0.0);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["airy-zeros", "--kind", "bi", "--count", "2"],
        &["ball", "--bc", "neumann", "--l-max", "2", "--bogus"],
        &["ball", "--bc", "robin", "--l-max", "2"],
        &["ball", "--bc", "neumann", "--l-max", "2", "--radius", "-1"],
        &["barrier"],
        &["barrier", "--min-curvature", "0"],
        &["model", "--eigs", "3", "--rayleigh"],
        &["model", "--suite", "xx:yy"],
        &[
            "fit",
            "--input",
            "/nonexistent/resonances.csv",
            "--l-lo",
            "0",
            "--l-hi",
            "30",
        ],
    ] {
        let out = reslab(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_and_version_exit_cleanly() {
    assert_eq!(reslab(&["--help"]).status.code(), Some(0));
    assert_eq!(reslab(&["--version"]).status.code(), Some(0));
}

#[test]
fn numerical_failures_exit_with_three() {
    // 500 grid points on [0, 40 h^{2/3}] cannot resolve the Airy scale to the
    // spacing min_rayleigh demands.
    let out = reslab(&["model", "--rayleigh", "--bc", "neumann", "--h", "1e-3", "--n", "500"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn thread_cap_does_not_change_results() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |d: &Path, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_reslab"))
            .env("RESLAB_THREADS", threads)
            .args(["ball", "--bc", "dirichlet", "--l-max", "10", "--out", dir_str(d)])
            .output()
            .unwrap()
    };
    assert_eq!(run(a.path(), "1").status.code(), Some(0));
    assert_eq!(run(b.path(), "4").status.code(), Some(0));
    assert_eq!(
        fs::read(a.path().join("resonances.csv")).unwrap(),
        fs::read(b.path().join("resonances.csv")).unwrap()
    );
}

#[test]
fn dispatch_is_callable_in_process() {
    assert_eq!(reslab_cli::dispatch(["reslab", "barrier", "--min-curvature", "2"]), 0);
    assert_eq!(reslab_cli::dispatch(["reslab", "barrier", "--min-curvature", "-2"]), 2);
}
