//! End-to-end tests of the command-line interface and its exit-code contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn optonet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optonet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const FIG2_SET: &[&str] = &[
    "--set",
    "gamma1=1e-5",
    "--set",
    "gamma2=1e-5",
    "--set",
    "g1=0.15",
    "--set",
    "g2=0.15",
    "--set",
    "gs1=0.1",
    "--set",
    "nbar1=100",
    "--set",
    "nbar2=100",
];

#[test]
fn solve_reports_fig2_point_with_exit_zero() {
    let mut args = vec!["solve"];
    args.extend_from_slice(FIG2_SET);
    let out = optonet(&args);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["stability"]["class"], "stable");
    let en1 = report["pairs"][0]["log_neg"].as_f64().unwrap();
    assert!((en1 - 0.0976).abs() < 1e-3, "E_N1 = {en1}");
    assert_eq!(report["pairs"][0]["pair"], "a_b1");
    assert_eq!(report["covariance"].as_array().unwrap().len(), 8);
}

#[test]
fn solve_csv_format_lists_pairs_only() {
    let mut args = vec!["solve", "--format", "csv"];
    args.extend_from_slice(FIG2_SET);
    let out = optonet(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.starts_with("pair,sigma_minus,log_neg\n"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn solve_unstable_point_exits_3_without_covariance() {
    let out = optonet(&[
        "solve",
        "--set",
        "delta_c=-1",
        "--set",
        "g1=0.5",
        "--set",
        "g2=0.15",
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["stability"]["class"], "unstable");
    assert!(report.get("covariance").is_none());
    assert_eq!(report["stability"]["spectrum"].as_array().unwrap().len(), 8);
}

#[test]
fn bad_config_exits_2_with_field_and_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    fs::write(&path, "omega1 = 1.0\ngs_1 = 0.1\n").unwrap();
    let out = optonet(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("gs_1"), "{err}");
    assert!(err.contains("bad.conf:2"), "{err}");
}

#[test]
fn conflicting_duplicate_set_flags_are_an_error() {
    let out = optonet(&["solve", "--set", "g1=0.1", "--set", "g1=0.2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inline_overrides_win_over_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("base.conf");
    fs::write(&path, "g1 = 0.15\ng2 = 0.15\ngs1 = 0\n").unwrap();
    let out = optonet(&[
        "solve",
        "--config",
        path.to_str().unwrap(),
        "--set",
        "gs1=0.1",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["params"]["gs1"].as_f64().unwrap(), 0.1);
}

#[test]
fn solve_json_round_trips_through_overrides() {
    let mut args = vec!["solve"];
    args.extend_from_slice(FIG2_SET);
    let out = optonet(&args);
    let first = stdout_str(&out);
    let report: serde_json::Value = serde_json::from_str(&first).unwrap();

    // replay every echoed parameter as an inline override
    let mut replay: Vec<String> = vec!["solve".into()];
    for (key, value) in report["params"].as_object().unwrap() {
        replay.push("--set".into());
        replay.push(format!("{key}={value}"));
    }
    let replay_args: Vec<&str> = replay.iter().map(String::as_str).collect();
    let second = stdout_str(&optonet(&replay_args));
    assert_eq!(first, second, "re-ingested report differs");
}

#[test]
fn darkmode_exit_code_reflects_verdict() {
    // eta switched off, matched gs couplings: dark mode exists -> exit 0
    let out = optonet(&[
        "darkmode",
        "--set",
        "g1=0.15",
        "--set",
        "g2=0.15",
        "--set",
        "gs1=0.1",
        "--set",
        "gs2=0.1",
        "--set",
        "j_hop=0.05",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let diag: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(diag["dark_mode"]["dark_mode_exists"], true);

    // gs2/gs1 = 2 at the network point: broken -> exit 4
    let out = optonet(&[
        "darkmode",
        "--set",
        "g1=0.15",
        "--set",
        "g2=0.15",
        "--set",
        "gs1=0.1",
        "--set",
        "gs2=0.2",
        "--set",
        "j_hop=0.05",
        "--set",
        "eta_hop=0.05",
    ]);
    assert_eq!(out.status.code(), Some(4), "{out:?}");
    let diag: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(diag["dark_mode"]["dark_mode_exists"], false);
    assert!((diag["dark_mode"]["m2"].as_f64().unwrap() - (-0.015)).abs() < 1e-12);

    // degenerate configuration: g1 = g2 = 0 -> exit 2
    let out = optonet(&["darkmode", "--set", "gs1=0.1"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn sweep_subcommand_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = optonet(&[
        "sweep",
        "--set",
        "g1=0.15",
        "--set",
        "g2=0.15",
        "--set",
        "gs1=0.1",
        "--axis",
        "delta_s=linear:0.5:1.5:11",
        "--output",
        "en_a_b1,max_re_eig",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "delta_s,en_a_b1,max_re_eig,status");
    assert_eq!(lines.len(), 12);
    assert!(lines[1].ends_with(",ok"));
}

#[test]
fn sweep_rejects_unknown_axis_and_output() {
    let out = optonet(&["sweep", "--axis", "delta_sss=linear:0:1:5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = optonet(&[
        "sweep",
        "--axis",
        "delta_s=linear:0:1:5",
        "--output",
        "bogus",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = optonet(&["sweep", "--axis", "delta_s=weird:0:1:5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure_writes_stable_filenames_and_reruns_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("fig4a");
    let run = |d: &Path| {
        let out = optonet(&["figure", "fig4a", "--out-dir", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    };
    run(&out_dir);
    let csv0 = out_dir.join("fig4a__gs1_0.csv");
    let csv1 = out_dir.join("fig4a__gs1_0.1.csv");
    let json0 = out_dir.join("fig4a__gs1_0.json");
    assert!(csv0.exists() && csv1.exists() && json0.exists());

    let first = fs::read(&csv1).unwrap();
    let first_manifest = fs::read(&json0).unwrap();
    run(&out_dir);
    assert_eq!(fs::read(&csv1).unwrap(), first, "rerun changed CSV bytes");
    assert_eq!(
        fs::read(&json0).unwrap(),
        first_manifest,
        "rerun changed manifest bytes"
    );

    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(&json0).unwrap()).unwrap();
    assert_eq!(manifest["preset"], "fig4a");
    assert_eq!(manifest["variant"], "gs1_0");
    assert_eq!(manifest["n_points"], 201);
}

#[test]
fn figure_fig6c_emits_six_variants() {
    let dir = tempfile::tempdir().unwrap();
    let out = optonet(&["figure", "fig6c", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let mut csvs: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    csvs.sort();
    assert_eq!(csvs.len(), 6, "{csvs:?}");
    assert!(csvs.contains(&"fig6c__off_J_eta.csv".to_string()));
    assert!(csvs.contains(&"fig6c__off_Gs1_Gs2.csv".to_string()));
}

#[test]
fn unknown_preset_exits_2_and_lists_names() {
    let out = optonet(&["figure", "fig99"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("fig2a"), "{err}");
    assert!(err.contains("fig11b"), "{err}");
}

#[test]
fn workers_flag_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("w1.csv");
    let p4 = dir.path().join("w4.csv");
    for (workers, path) in [("1", &p1), ("4", &p4)] {
        let out = optonet(&[
            "sweep",
            "--workers",
            workers,
            "--set",
            "g1=0.15",
            "--set",
            "g2=0.15",
            "--set",
            "gs1=0.1",
            "--axis",
            "delta_s=linear:0.5:1.5:41",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p4).unwrap());
}
