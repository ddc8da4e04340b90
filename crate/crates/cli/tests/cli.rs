use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;
use spindiscord::quadrature::QuadratureConfig;
use spindiscord::{
    critical_field, discord_profile, fit_exponential, quantum_discord, select_model, xy_discord_profile, DiscordMethod,
    MeasuredSide, XXZSystem, XYChain, XYParams,
};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spindiscord"))
        .args(args)
        .env_remove("SPINDISCORD_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json", "--digits", "17"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout_ok(&full)).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

/// Data rows of a CSV document, header and footer comments excluded.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn xy_pair_matches_library_exactly() {
    let v = json(&["xy", "pair", "--gamma", "0.5", "--lambda", "1.5", "--n", "4"]);
    let chain = XYChain::with_config(XYParams::ground(0.5, 1.5).unwrap(), 4, &QuadratureConfig::default()).unwrap();
    let obs = chain.observables(4).unwrap();
    let report = quantum_discord(&chain.pair_state(4).unwrap(), DiscordMethod::ClosedForm).unwrap();
    assert_eq!(num(&v["mz"]), obs.mz);
    assert_eq!(num(&v["gxx"]), obs.gxx);
    assert_eq!(num(&v["gyy"]), obs.gyy);
    assert_eq!(num(&v["gzz"]), obs.gzz);
    assert_eq!(num(&v["mutual_info"]), report.mutual_info);
    assert_eq!(num(&v["classical_corr"]), report.classical_corr);
    assert_eq!(num(&v["discord"]), report.discord);
    assert_eq!(v["method"], "closed_form");
}

#[test]
fn xy_pair_reference_points() {
    let v = json(&["xy", "pair", "--gamma", "1", "--lambda", "0", "--n", "3"]);
    assert_eq!(num(&v["discord"]), 0.0);
    let v = json(&["xy", "pair", "--gamma", "1", "--lambda", "1", "--n", "1"]);
    assert!((num(&v["gxx"]) - 2.0 / PI).abs() < 1e-8);
    let v = json(&[
        "xy",
        "pair",
        "--gamma",
        "0.5",
        "--lambda",
        "0.5",
        "--n",
        "2",
        "--method",
        "optimized",
    ]);
    assert_eq!(v["method"], "optimized");
}

#[test]
fn xy_profile_fit_and_determinism() {
    let args = [
        "xy", "profile", "--gamma", "0.5", "--lambda", "0.75", "--n-max", "10", "--fit",
    ];
    let a = stdout_ok(&[&["--threads", "1"], &args[..]].concat());
    let b = stdout_ok(&[&["--threads", "4"], &args[..]].concat());
    assert_eq!(a, b);
    assert_eq!(csv_rows(&a).len(), 10);
    assert!(a.starts_with("n,discord\n"));
    assert!(!a.contains('\r'));

    let v = json(&args);
    assert!(num(&v["fit"]["a"]).abs() <= 1e-3);
    let profile = xy_discord_profile(&XYParams::ground(0.5, 0.75).unwrap(), 10, 1e-10).unwrap();
    let fit = fit_exponential(&profile).unwrap();
    assert_eq!(num(&v["fit"]["c"]), fit.c);
    for (row, &(n, q)) in v["rows"].as_array().unwrap().iter().zip(profile.samples()) {
        assert_eq!(row["n"].as_u64().unwrap() as usize, n);
        assert_eq!(num(&row["discord"]), q);
    }

    let v = json(&[
        "xy", "profile", "--gamma", "0.5", "--lambda", "1.5", "--n-max", "10", "--fit",
    ]);
    let q10 = num(&v["rows"][9]["discord"]);
    assert!(num(&v["fit"]["a"]) > 0.9 * q10);
}

#[test]
fn xy_profile_fit_needs_four_points() {
    let out = run(&[
        "xy", "profile", "--gamma", "0.5", "--lambda", "0.5", "--n-max", "3", "--fit",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn heatmap_shape_and_masking() {
    let text = stdout_ok(&[
        "xy",
        "heatmap",
        "--gamma-min",
        "0.5",
        "--gamma-max",
        "1",
        "--gamma-steps",
        "3",
        "--lambda-min",
        "0",
        "--lambda-max",
        "1.5",
        "--lambda-steps",
        "3",
        "--m",
        "10",
    ]);
    assert!(text.starts_with("gamma,lambda,ratio\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 9);
    // λ = 0 is the first column of every γ row.
    for r in rows.iter().step_by(3) {
        assert_eq!(r[2], "nan");
    }

    let cell = |lambda: &str| {
        let v = json(&[
            "xy",
            "heatmap",
            "--gamma-min",
            "0.5",
            "--gamma-max",
            "0.5",
            "--gamma-steps",
            "1",
            "--lambda-min",
            lambda,
            "--lambda-max",
            lambda,
            "--lambda-steps",
            "1",
            "--m",
            "10",
        ]);
        num(&v["rows"][0]["ratio"])
    };
    assert!(cell("1.5") > cell("0.5"));
}

#[test]
fn critical_field_cases() {
    let v = json(&["xxz", "critical-field", "--delta", "1.4142135623730951"]);
    assert!((num(&v["critical_field"]) - 0.5).abs() < 1e-15);
    assert_eq!(num(&v["critical_field"]), critical_field(2f64.sqrt()).unwrap());
    let v = json(&["xxz", "critical-field", "--delta", "1"]);
    assert_eq!(num(&v["critical_field"]), 0.0);
    let out = run(&["xxz", "critical-field", "--delta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn xxz_profile_matches_library() {
    let v = json(&[
        "xxz", "profile", "--delta", "-1.5", "--h", "5", "--sites", "10", "--n-max", "4",
    ]);
    let prof = discord_profile(&XXZSystem::new(10, -1.5, 5.0).unwrap(), 4, MeasuredSide::Second).unwrap();
    let sel = select_model(&prof.profile).unwrap();
    for (row, &(_, q)) in v["rows"].as_array().unwrap().iter().zip(prof.profile.samples()) {
        assert_eq!(num(&row["discord"]), q);
    }
    assert_eq!(num(&v["ground_energy"]), prof.energy);
    assert_eq!(num(&v["power_law_fit"]["b"]), sel.power_law.b);
    assert_eq!(v["preferred"], sel.preferred.to_string());
    assert_eq!(v["sector"], prof.sector);
}

#[test]
fn xxz_profile_phases() {
    let v = json(&["xxz", "profile", "--delta", "0.5", "--h", "5", "--sites", "14"]);
    assert_eq!(v["preferred"], "power_law");
    let v = json(&["xxz", "profile", "--delta=-1.5", "--h", "5", "--sites", "14"]);
    assert_eq!(v["preferred"], "exponential");
    let v = json(&["xxz", "profile", "--delta", "1.5", "--h", "0.1", "--sites", "10"]);
    assert_eq!(v["degenerate"], true);
    for row in v["rows"].as_array().unwrap() {
        assert!(num(&row["discord"]) <= 1e-9);
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["xy", "pair", "--gamma", "0.5"][..],
        &[
            "--digits", "5", "xy", "pair", "--gamma", "0.5", "--lambda", "1", "--n", "1",
        ],
        &[
            "--tol", "0", "xy", "pair", "--gamma", "0.5", "--lambda", "1", "--n", "1",
        ],
        &["xy", "pair", "--gamma", "0.5", "--lambda", "-1", "--n", "1"],
        &["xxz", "profile", "--delta", "0.5", "--h", "1", "--sites", "40"],
        &["no-such-command"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn fit_external_profile() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("profile.csv");
    let mut text = String::from("n,discord\n");
    for n in 1..=10 {
        text += &format!("{n},{}\n", 0.05 + 0.3 * (n as f64).powf(-1.0));
    }
    std::fs::write(&input, text).unwrap();
    let out_path = dir.path().join("fit.csv");
    stdout_ok(&[
        "fit",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with("model,a,b,c,sse,aic,converged,iterations\n"));
    assert!(written.contains("# preferred: \"power_law\""));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"format": "json", "digits": 6}"#).unwrap();
    let base = ["xy", "pair", "--gamma", "1", "--lambda", "1", "--n", "1"];
    let text = stdout_ok(&[&["--config", cfg.to_str().unwrap()], &base[..]].concat());
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["gxx"].to_string(), "0.63662");
    let text = stdout_ok(&[&["--config", cfg.to_str().unwrap(), "--format", "csv"], &base[..]].concat());
    assert!(text.starts_with("n,mz,gxx"));
    assert!(text.contains(",0.63662,"));
}

#[test]
fn xy_profile_default_couplings() {
    let text = stdout_ok(&["xy", "profile", "--gamma", "0.5", "--n-max", "5", "--fit"]);
    assert!(text.starts_with("lambda,n,discord\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 20);
    let lambdas: Vec<&str> = rows.iter().step_by(5).map(|r| r[0].as_str()).collect();
    assert_eq!(lambdas, ["0.5", "0.75", "1.1", "1.5"]);
    let v = json(&[
        "xy", "profile", "--gamma", "0.5", "--lambda", "0.5,1.5", "--n-max", "5", "--fit",
    ]);
    assert_eq!(v["fit"].as_array().unwrap().len(), 2);
    assert_eq!(num(&v["fit"][1]["lambda"]), 1.5);
}
