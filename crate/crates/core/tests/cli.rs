//! End-to-end tests of the `ratsurf` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn ratsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratsurf"))
        .args(args)
        .env_remove("RATSURF_MAX_TRUNC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn plane_cubic_row_two() {
    let o = ratsurf(&[
        "--surface",
        "p2",
        "--class",
        "3H",
        "--r",
        "2",
        "--trunc",
        "5",
        "--checks",
        "zseries",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["series"][2]["n"], 2);
    assert_eq!(v["series"][2]["h0"], 56);
    assert_eq!(v["series"].as_array().unwrap().len(), 6);
    assert_eq!(v["checks"][0]["pass"], true);
}

#[test]
fn genus_two_rank_nine() {
    let o = ratsurf(&[
        "--surface",
        "f1",
        "--class",
        "2G+4F",
        "--r",
        "3",
        "--checks",
        "invariants",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("rank 9 = 3^2"));
}

#[test]
fn conic_is_genus_nonpositive() {
    let o = ratsurf(&[
        "--surface",
        "p2",
        "--class",
        "2H",
        "--r",
        "9",
        "--trunc",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let h0: Vec<i64> = v["series"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["h0"].as_i64().unwrap())
        .collect();
    assert_eq!(h0, [1, 6, 21, 56]);
    assert_eq!(v["branch"], "GenusNonPositive");
}

#[test]
fn output_is_deterministic() {
    for format in ["text", "json", "csv"] {
        let args = [
            "--surface",
            "f0",
            "--class",
            "2G+3F",
            "--r",
            "4",
            "--trunc",
            "25",
            "--checks",
            "conditions,zseries,invariants,gtsec,dualizing",
            "--format",
            format,
        ];
        let a = ratsurf(&args);
        let b = ratsurf(&args);
        assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn json_roundtrip_through_the_binary() {
    let o = ratsurf(&[
        "--surface",
        "p2",
        "--class",
        "10H",
        "--r",
        "1",
        "--trunc",
        "120",
        "--format",
        "json",
    ]);
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    // Coefficients beyond u64 stay JSON numbers.
    let last = &v["series"][120]["h0"];
    assert!(last.is_number());
    assert!(last.as_u64().is_none());
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, text);
    let report: ratsurf::cli::Report = serde_json::from_str(&text).unwrap();
    assert_eq!(
        ratsurf::cli::render(&report, ratsurf::cli::Format::Json).unwrap(),
        text
    );
}

#[test]
fn csv_emits_the_series_table() {
    let o = ratsurf(&[
        "zseries",
        "--surface",
        "p2",
        "--class",
        "3H",
        "--r",
        "3",
        "--trunc",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&o), "n,h0,chi\n0,1,1\n1,10,10\n2,56,56\n3,231,231\n");
}

#[test]
fn failed_check_exits_one_with_witness() {
    let o = ratsurf(&[
        "--surface",
        "p2",
        "--class",
        "3H",
        "--r",
        "2",
        "--checks",
        "gtsec",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("gtsec.cohomology failed: needs F_0 or F_1"));
    let c = ratsurf(&["conditions", "--surface", "p2", "--class", "2H"]);
    assert_eq!(c.status.code(), Some(1));
    assert!(stderr(&c).contains("{H, H}"), "{}", stderr(&c));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["--surface", "p3", "--class", "H"][..],
        &["--surface", "p2", "--class", "3Q"],
        &["--surface", "p2", "--class", "3H", "--r", "0"],
        &["--surface", "p2", "--class", "-H"],
        &["--surface", "p2"],
        &["--surface", "p2", "--class", "3H", "--checks", "bogus"],
    ] {
        let o = ratsurf(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn unsupported_branch_exits_three() {
    let o = ratsurf(&["--surface", "p2", "--class", "4H", "--r", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(
        err.contains("torsion-free") && err.contains("locally free"),
        "{err}"
    );
}

#[test]
fn truncation_cap_exits_four() {
    let o = ratsurf(&["--surface", "p2", "--class", "3H", "--trunc", "201"]);
    assert_eq!(o.status.code(), Some(4));
    let raised = Command::new(env!("CARGO_BIN_EXE_ratsurf"))
        .args(["--surface", "p2", "--class", "3H", "--trunc", "201"])
        .env("RATSURF_MAX_TRUNC", "500")
        .output()
        .unwrap();
    assert_eq!(raised.status.code(), Some(0));
    let lowered = Command::new(env!("CARGO_BIN_EXE_ratsurf"))
        .args(["--surface", "p2", "--class", "3H", "--trunc", "10"])
        .env("RATSURF_MAX_TRUNC", "5")
        .output()
        .unwrap();
    assert_eq!(lowered.status.code(), Some(4));
}

#[test]
fn enumeration_cap_exits_four() {
    let o = ratsurf(&["conditions", "--surface", "p2", "--class", "30H"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn report_subcommand_matches_top_level_flags() {
    let a = ratsurf(&["--surface", "f1", "--class", "2G+3F", "--r", "5"]);
    let b = ratsurf(&["report", "--surface", "f1", "--class", "2G+3F", "--r", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
