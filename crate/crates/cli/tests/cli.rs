//! End-to-end tests of the `ttdl` binary: flag-only operation, config
//! files, output formats, determinism, and the exit-code contract
//! (0 success, 1 computation/constraint failure, 2 config error).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ttdl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttdl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Extracts one value from the `# fsr_ghz=… mslr_db=… bw3db_ghz=…`
/// metrics line.
fn metric(text: &str, key: &str) -> String {
    let line = text
        .lines()
        .find(|l| l.starts_with("# fsr_ghz="))
        .unwrap_or_else(|| panic!("no metrics line in: {text}"));
    line.split_whitespace()
        .filter_map(|tok| tok.strip_prefix(&format!("{key}=")))
        .next()
        .unwrap_or_else(|| panic!("no {key} in metrics line: {line}"))
        .to_string()
}

fn metric_f64(text: &str, key: &str) -> f64 {
    metric(text, key).parse().expect("numeric metric")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).expect("config written");
    path
}

fn assert_close(value: f64, target: f64, rel: f64, what: &str) {
    let err = (value - target).abs() / target.abs();
    assert!(
        err <= rel,
        "{what}: {value} vs {target} (relative error {err:.4} > {rel})"
    );
}

// ---------------------------------------------------------------------
// flag-only FBG paths
// ---------------------------------------------------------------------

#[test]
fn fbg_wavelength_diversity_fsrs() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("c6.csv");
    let out = ttdl(&[
        "filter",
        "--paper-layout",
        "--diversity",
        "wavelength",
        "--core",
        "6",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert_close(
        metric_f64(&stdout(&out), "fsr_ghz"),
        4.97,
        0.05,
        "core-6 FSR",
    );

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("frequency_ghz,magnitude_db"));
    assert_eq!(lines.next(), Some("0.00000000e0,0.00000000e0"));

    let out4 = ttdl(&[
        "filter",
        "--paper-layout",
        "--diversity",
        "wavelength",
        "--core",
        "4",
    ]);
    assert_eq!(exit_code(&out4), 0);
    assert_close(
        metric_f64(&stdout(&out4), "fsr_ghz"),
        4.45,
        0.05,
        "core-4 FSR",
    );
}

#[test]
fn fbg_spatial_diversity_fsrs() {
    // 8 mm inter-core displacement (third channel)
    let out8 = ttdl(&[
        "filter",
        "--paper-layout",
        "--diversity",
        "spatial",
        "--channel",
        "1546.26",
    ]);
    assert_eq!(exit_code(&out8), 0, "stderr: {}", stderr(&out8));
    assert_close(
        metric_f64(&stdout(&out8), "fsr_ghz"),
        12.50,
        0.05,
        "8 mm FSR",
    );

    // 6 mm displacement (first channel)
    let out6 = ttdl(&[
        "filter",
        "--paper-layout",
        "--diversity",
        "spatial",
        "--channel",
        "1537.07",
    ]);
    assert_eq!(exit_code(&out6), 0);
    assert_close(
        metric_f64(&stdout(&out6), "fsr_ghz"),
        17.76,
        0.05,
        "6 mm FSR",
    );

    // both readouts show the uniform 3-tap sidelobe ratio
    assert_close(
        metric_f64(&stdout(&out8), "mslr_db"),
        9.5424,
        0.01,
        "3-tap MSLR",
    );
}

// ---------------------------------------------------------------------
// flag-only fiber-link paths
// ---------------------------------------------------------------------

#[test]
fn hetero_link_fsr_hits_design_targets() {
    let out60 = ttdl(&[
        "filter",
        "--paper-layout",
        "--lambda-nm",
        "1560",
        "--length-km",
        "10",
    ]);
    assert_eq!(exit_code(&out60), 0, "stderr: {}", stderr(&out60));
    assert_close(
        metric_f64(&stdout(&out60), "fsr_ghz"),
        10.0,
        0.02,
        "FSR at 1560 nm",
    );

    // --length-km defaults to 10
    let out70 = ttdl(&["filter", "--paper-layout", "--lambda-nm", "1570"]);
    assert_eq!(exit_code(&out70), 0);
    assert_close(
        metric_f64(&stdout(&out70), "fsr_ghz"),
        5.0,
        0.02,
        "FSR at 1570 nm",
    );
}

// ---------------------------------------------------------------------
// determinism
// ---------------------------------------------------------------------

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = |p: &Path| {
        vec![
            "filter".to_string(),
            "--paper-layout".into(),
            "--diversity".into(),
            "wavelength".into(),
            "--core".into(),
            "5".into(),
            "--output".into(),
            p.to_str().unwrap().into(),
        ]
    };
    let ra = ttdl(&args(&a).iter().map(String::as_str).collect::<Vec<_>>());
    let rb = ttdl(&args(&b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(exit_code(&ra), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ra.stdout, rb.stdout);

    // the design report is deterministic too
    let d1 = ttdl(&["design"]);
    let d2 = ttdl(&["design"]);
    assert_eq!(exit_code(&d1), 0);
    assert_eq!(d1.stdout, d2.stdout);
}

// ---------------------------------------------------------------------
// explicit tap sources
// ---------------------------------------------------------------------

#[test]
fn explicit_single_tap_is_flat_with_no_metrics() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "one.json",
        r#"{
  "schema_version": 1,
  "filter": {
    "source": { "explicit": { "delays_ps": [0.0] } },
    "grid": { "start_ghz": 0.0, "stop_ghz": 10.0, "points": 11 }
  }
}"#,
    );
    let out = ttdl(&["filter", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(!text.contains("# fsr_ghz="), "single tap has no FSR");
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",0.00000000e0"), "flat response, got {line}");
    }
}

#[test]
fn explicit_two_taps_report_na_lobe_metrics() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "two.json",
        r#"{
  "schema_version": 1,
  "filter": { "source": { "explicit": { "delays_ps": [0.0, 100.0] } } }
}"#,
    );
    let out = ttdl(&["filter", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert_close(metric_f64(&text, "fsr_ghz"), 10.0, 1e-9, "two-tap FSR");
    assert_eq!(metric(&text, "mslr_db"), "NA");
    assert_eq!(metric(&text, "bw3db_ghz"), "NA");
}

#[test]
fn non_uniform_taps_exit_1_after_writing_the_curve() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "skew.json",
        r#"{
  "schema_version": 1,
  "filter": { "source": { "explicit": { "delays_ps": [0.0, 100.0, 250.0] } } }
}"#,
    );
    let csv = dir.path().join("skew.csv");
    let out = ttdl(&[
        "filter",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1, "non-uniform spacing fails the FSR");
    assert!(stderr(&out).contains("uniform"), "stderr: {}", stderr(&out));
    // the curve itself is still delivered
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("frequency_ghz,magnitude_db\n"));
    assert!(text.lines().count() > 100);
}

// ---------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------

#[test]
fn analyze_reports_smf_dispersion_and_is_idempotent() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "smf.json",
        r#"{
  "schema_version": 1,
  "analyze": {
    "wavelength_nm": 1550.0,
    "profiles": [ { "a1_um": 4.1, "delta1_percent": 0.36 } ]
  }
}"#,
    );
    let out = ttdl(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["command"], "analyze");
    let d = report["cores"][0]["dispersion_ps_km_nm"].as_f64().unwrap();
    assert!((d - 17.0).abs() <= 1.5, "SMF-like dispersion, got {d}");
    let n_eff = report["cores"][0]["n_eff"].as_f64().unwrap();
    assert!(
        n_eff > 1.444 && n_eff < 1.45,
        "plausible n_eff, got {n_eff}"
    );

    let again = ttdl(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn analyze_grid_writes_the_curve_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "grid.json",
        r#"{
  "schema_version": 1,
  "analyze": {
    "wavelength_nm": 1550.0,
    "profiles": [ { "a1_um": 4.1, "delta1_percent": 0.36 } ],
    "grid": { "start_nm": 1545.0, "stop_nm": 1555.0, "points": 5 }
  }
}"#,
    );
    let csv = dir.path().join("curve.csv");
    let out = ttdl(&[
        "analyze",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    // report still lands on stdout
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["cores"].as_array().unwrap().len(), 1);

    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "wavelength_nm,n_eff,group_delay_ps_per_km,dispersion_ps_km_nm"
    );
    assert_eq!(lines.len(), 6);
    // n_eff decreases with wavelength
    let n_effs: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(
        n_effs.windows(2).all(|p| p[1] < p[0]),
        "n_eff falls with λ: {n_effs:?}"
    );

    // a grid with several profiles is ambiguous
    let multi = write_config(
        dir.path(),
        "multi.json",
        r#"{
  "schema_version": 1,
  "analyze": {
    "profiles": [
      { "a1_um": 4.1, "delta1_percent": 0.36 },
      { "a1_um": 4.5, "delta1_percent": 0.36 }
    ],
    "grid": { "start_nm": 1545.0, "stop_nm": 1555.0, "points": 3 }
  }
}"#,
    );
    let bad = ttdl(&[
        "analyze",
        "--config",
        multi.to_str().unwrap(),
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&bad), 2);
    // and a grid needs somewhere to put the curve
    let nosink = ttdl(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&nosink), 2);
}

// ---------------------------------------------------------------------
// design
// ---------------------------------------------------------------------

#[test]
fn design_report_roundtrips_through_analyze() {
    let dir = TempDir::new().unwrap();
    let report_path = dir.path().join("design.json");
    let out = ttdl(&["design", "--output", report_path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let cores = report["cores"].as_array().unwrap();
    assert_eq!(cores.len(), 7);
    let flags = &report["tolerances"];
    assert_eq!(flags["all_ok"], true, "design meets its targets: {flags}");
    let stencil_nm = report["stencil_step_nm"].as_f64().unwrap();

    // rebuild the achieved geometry as an analyze config
    let profiles: Vec<String> = cores
        .iter()
        .map(|c| {
            format!(
                r#"{{ "a1_um": {}, "delta1_percent": {}, "trench": {{ "a2_um": {}, "w_um": {}, "delta2_percent": {} }} }}"#,
                c["a1_um"], c["delta1_percent"], c["a2_um"], c["w_um"], c["delta2_percent"]
            )
        })
        .collect();
    let cfg = write_config(
        dir.path(),
        "reanalyze.json",
        &format!(
            r#"{{
  "schema_version": 1,
  "analyze": {{
    "wavelength_nm": {},
    "stencil_step_nm": {},
    "profiles": [ {} ]
  }}
}}"#,
            report["lambda_nm"].as_f64().unwrap(),
            stencil_nm,
            profiles.join(", ")
        ),
    );
    let re = ttdl(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&re), 0, "stderr: {}", stderr(&re));
    let reanalyzed: serde_json::Value = serde_json::from_str(&stdout(&re)).unwrap();
    for (orig, again) in cores.iter().zip(reanalyzed["cores"].as_array().unwrap()) {
        for (key, tol) in [
            ("n_eff", 1e-9),
            ("tau_g0_ps_km", 1e-4),
            ("dispersion_ps_km_nm", 1e-3),
            ("slope_ps_km_nm2", 1e-4),
        ] {
            let a = orig[key].as_f64().unwrap();
            let b = again[key].as_f64().unwrap();
            assert!(
                (a - b).abs() <= tol,
                "core {} {key}: {a} vs {b}",
                orig["index"]
            );
        }
    }
}

#[test]
fn design_homogeneous_request_warns_and_omits_bend_radius() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "homog.json",
        r#"{
  "schema_version": 1,
  "design": { "n_cores": 2, "delta_d_ps_km_nm": 0.0 }
}"#,
    );
    let out = ttdl(&["design", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("homogeneous"),
        "warning on stderr: {}",
        stderr(&out)
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["bend_threshold_radius_m"].is_null());
    for c in report["cores"].as_array().unwrap() {
        let d = c["dispersion_ps_km_nm"].as_f64().unwrap();
        assert!((d - 14.75).abs() <= 0.05, "flat ladder, got {d}");
    }
}

#[test]
fn design_with_unreachable_floor_exits_1_naming_the_constraint() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "floor.json",
        r#"{
  "schema_version": 1,
  "design": { "n_cores": 2, "min_adjacent_delta_n_eff": 0.05 }
}"#,
    );
    let out = ttdl(&["design", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(
        stderr(&out).contains("core 2"),
        "failing core named: {}",
        stderr(&out)
    );
}

// ---------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------

#[test]
fn sweep_wavelength_fsr_falls_monotonically() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "sweep.json",
        r#"{
  "schema_version": 1,
  "sweep": {
    "parameter": "lambda_nm",
    "start": 1555.0, "stop": 1570.0, "points": 4,
    "source": { "hetero_link": { "lambda_nm": 1560.0, "length_km": 10.0 } }
  }
}"#,
    );
    let out = ttdl(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda_nm,fsr_ghz"));
    let fsr: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(fsr.len(), 4);
    assert!(fsr.windows(2).all(|p| p[1] < p[0]), "falling: {fsr:?}");
    assert_close(fsr[0], 20.0, 0.02, "FSR at 1555 nm");
    assert_close(fsr[3], 5.0, 0.02, "FSR at 1570 nm");
}

#[test]
fn sweep_length_doubling_halves_the_fsr() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "lsweep.json",
        r#"{
  "schema_version": 1,
  "sweep": {
    "parameter": "length_km",
    "start": 5.0, "stop": 20.0, "points": 4,
    "source": { "hetero_link": { "lambda_nm": 1560.0, "length_km": 10.0 } }
  }
}"#,
    );
    let out = ttdl(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let rows: Vec<(f64, f64)> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    // lengths 5, 10, 15, 20: FSR ∝ 1/L exactly; the 9-significant-digit
    // CSV quantizes each value at ~1e-9 relative
    assert_close(rows[0].1 / rows[2].1, 3.0, 1e-7, "FSR(5)/FSR(15)");
    assert_close(rows[1].1 / rows[3].1, 2.0, 1e-7, "FSR(10)/FSR(20)");
}

#[test]
fn sweep_group_index_scales_fbg_fsr_inversely() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "ngsweep.json",
        r#"{
  "schema_version": 1,
  "sweep": {
    "parameter": "group_index",
    "start": 1.3, "stop": 1.6, "points": 4,
    "source": { "fbg_layout": { "diversity": { "wavelength": { "core": 6 } } } }
  }
}"#,
    );
    let out = ttdl(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let rows: Vec<(f64, f64)> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(stdout(&out).lines().next(), Some("group_index,fsr_ghz"));
    for w in rows.windows(2) {
        assert_close(w[0].0 * w[0].1, w[1].0 * w[1].1, 1e-7, "n_g · FSR constant");
    }
}

// ---------------------------------------------------------------------
// exit-code contract
// ---------------------------------------------------------------------

#[test]
fn config_and_usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();

    // no config where one is required
    assert_eq!(exit_code(&ttdl(&["analyze"])), 2);
    assert_eq!(exit_code(&ttdl(&["sweep"])), 2);
    // missing file
    assert_eq!(
        exit_code(&ttdl(&["analyze", "--config", "/nonexistent.json"])),
        2
    );

    // malformed JSON
    let broken = write_config(dir.path(), "broken.json", "{ not json");
    assert_eq!(
        exit_code(&ttdl(&["analyze", "--config", broken.to_str().unwrap()])),
        2
    );

    // unknown key
    let unknown = write_config(
        dir.path(),
        "unknown.json",
        r#"{ "schema_version": 1, "analyze": { "profiles": [], "rainbow": true } }"#,
    );
    assert_eq!(
        exit_code(&ttdl(&["analyze", "--config", unknown.to_str().unwrap()])),
        2
    );

    // wrong schema generation
    let vers = write_config(
        dir.path(),
        "vers.json",
        r#"{ "schema_version": 99, "analyze": { "profiles": [] } }"#,
    );
    assert_eq!(
        exit_code(&ttdl(&["analyze", "--config", vers.to_str().unwrap()])),
        2
    );

    // empty profile list
    let empty = write_config(
        dir.path(),
        "empty.json",
        r#"{ "schema_version": 1, "analyze": { "profiles": [] } }"#,
    );
    let out = ttdl(&["analyze", "--config", empty.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("profile"));

    // config without the command's section
    let other = write_config(
        dir.path(),
        "other.json",
        r#"{ "schema_version": 1, "design": {} }"#,
    );
    assert_eq!(
        exit_code(&ttdl(&["analyze", "--config", other.to_str().unwrap()])),
        2
    );

    // degenerate sweep range
    let degenerate = write_config(
        dir.path(),
        "deg.json",
        r#"{
  "schema_version": 1,
  "sweep": {
    "parameter": "lambda_nm", "start": 1560.0, "stop": 1560.0, "points": 1,
    "source": { "hetero_link": { "lambda_nm": 1560.0, "length_km": 10.0 } }
  }
}"#,
    );
    assert_eq!(
        exit_code(&ttdl(&["sweep", "--config", degenerate.to_str().unwrap()])),
        2
    );

    // sweep parameter incompatible with the source
    let mismatch = write_config(
        dir.path(),
        "mismatch.json",
        r#"{
  "schema_version": 1,
  "sweep": {
    "parameter": "group_index", "start": 1.3, "stop": 1.6, "points": 3,
    "source": { "hetero_link": { "lambda_nm": 1560.0, "length_km": 10.0 } }
  }
}"#,
    );
    assert_eq!(
        exit_code(&ttdl(&["sweep", "--config", mismatch.to_str().unwrap()])),
        2
    );
}

#[test]
fn filter_flag_misuse_exits_2() {
    // no source at all
    assert_eq!(exit_code(&ttdl(&["filter"])), 2);
    assert_eq!(exit_code(&ttdl(&["filter", "--paper-layout"])), 2);
    // two sources at once
    let out = ttdl(&[
        "filter",
        "--paper-layout",
        "--lambda-nm",
        "1560",
        "--diversity",
        "wavelength",
        "--core",
        "6",
    ]);
    assert_eq!(exit_code(&out), 2);
    // missing selector for the chosen diversity
    assert_eq!(
        exit_code(&ttdl(&[
            "filter",
            "--paper-layout",
            "--diversity",
            "wavelength"
        ])),
        2
    );
    assert_eq!(
        exit_code(&ttdl(&[
            "filter",
            "--paper-layout",
            "--diversity",
            "spatial"
        ])),
        2
    );
    // selector for the wrong diversity
    let wrong = ttdl(&[
        "filter",
        "--paper-layout",
        "--diversity",
        "spatial",
        "--core",
        "6",
    ]);
    assert_eq!(exit_code(&wrong), 2);
    // unknown core in the device
    let nocore = ttdl(&[
        "filter",
        "--paper-layout",
        "--diversity",
        "wavelength",
        "--core",
        "9",
    ]);
    assert_eq!(exit_code(&nocore), 2);
    assert!(stderr(&nocore).contains('9'), "stderr: {}", stderr(&nocore));
}
