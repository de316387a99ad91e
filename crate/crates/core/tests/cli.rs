use std::process::{Command, Output};

use qunet::construct::lp_matrices;
use qunet::geometry::analyze;
use qunet::pointgen::generate_points;
use qunet::{report, Execution, NetPoints, Norm};

fn qunet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qunet"))
        .args(args)
        .output()
        .expect("run qunet")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn generate_then_analyze_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("lp.txt");
    let path = file.to_str().unwrap();
    let out = qunet(&["generate", "lp", "--b", "3", "--m", "4", "--out", path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let written = NetPoints::parse(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let expected = generate_points(&lp_matrices(3, 4).unwrap(), None, Execution::Sequential).unwrap();
    assert_eq!(written.coords(), expected.coords());

    let out = qunet(&["--json", "analyze", path, "--p", "inf", "--toroidal"]);
    assert!(out.status.success());
    let got = stdout_json(&out);
    let rep = analyze(&expected, Norm::Inf, true, None, Execution::Sequential).unwrap();
    assert_eq!(got["q"], report::radius_json(&rep, None, None)["q"]);
    assert_eq!(got["h_upper"], report::radius_json(&rep, None, None)["h_upper"]);
    assert!(got["approx"]["q"].is_f64());
}

#[test]
fn check_sep_reports_lp_level() {
    let out = qunet(&[
        "--json",
        "check-sep",
        "--construction",
        "lp",
        "--m",
        "6",
        "--shift-seed",
        "7",
        "--toroidal",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let kappa = v["kappa"].as_u64().unwrap();
    assert!(kappa <= 4, "kappa {kappa}");
    assert_eq!(v["method"], "criterion");

    let out = qunet(&[
        "--json",
        "check-sep",
        "--construction",
        "hammersley",
        "--m",
        "4",
        "--c",
        "2,2",
        "--method",
        "bruteforce",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["outcome"], "violated");
}

#[test]
fn exit_codes() {
    assert_eq!(qunet(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qunet(&["generate", "lp", "--b", "4"]).status.code(), Some(2));
    assert_eq!(
        qunet(&["reproduce", "faure", "--b", "3", "--w", "1"]).status.code(),
        Some(0)
    );
    // the near pair of the Hammersley net is farther apart than claimed
    assert_eq!(
        qunet(&["reproduce", "hammersley", "--b", "2", "--m", "4"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn tvalue_and_csv() {
    let out = qunet(&["--csv", "tvalue", "fiblattice", "--m", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "fiblattice,2,7,2,0");
}
