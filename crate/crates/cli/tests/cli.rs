use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ringpert_cli::{parse_descriptor, strip_timing, Report, TableRow};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../descriptors").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringpert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn machine(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--machine");
    let out = run(&all);
    let json = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), json)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ringpert-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn perturb_on_the_line_uses_the_main_bound() {
    let line = fixture("line.desc");
    let (code, report) = machine(&["perturb", line.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["ok"], true);
    assert_eq!(report["result"]["bound"]["n"], 3);
    assert_eq!(report["result"]["violations"], 0);
}

#[test]
fn invariants_of_the_line() {
    let line = fixture("line.desc");
    let (code, report) = machine(&["invariants", line.to_str().unwrap(), "--flavor", "prop32"]);
    assert_eq!(code, 0);
    let r = &report["result"];
    assert_eq!(r["loewy_length"], 4);
    assert_eq!(r["prefixes"][0]["artin_rees"], 1);
    assert_eq!(r["bound"]["n"], 2);
}

#[test]
fn malformed_descriptor_exits_two_with_position() {
    let out = run(&["invariants", fixture("bad.desc").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.desc:7:10:"), "{err}");
}

#[test]
fn missing_file_and_unknown_property_exit_two() {
    assert_eq!(run(&["resolve", "/nonexistent/x.desc"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--properties", "nope"]).status.code(), Some(2));
}

#[test]
fn injected_fault_exits_one() {
    let (code, report) = machine(&[
        "verify", "--profile", "deep", "--cases", "5", "--properties", "main_betti", "--fault", "flip-betti",
    ]);
    assert_eq!(code, 1);
    assert_eq!(report["ok"], false);
    assert_eq!(report["result"]["all_passed"], false);
}

#[test]
fn written_report_is_a_fixed_point() {
    let dir = scratch("report");
    let out = dir.join("report.json");
    let ci = fixture("complete_intersection.desc");
    let status = run(&["threshold", ci.to_str().unwrap(), "--budget", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(report.command, "threshold");
    assert_eq!(report.to_json(), text.trim_end());
    let echoed = report.input.expect("descriptor echoed");
    assert_eq!(parse_descriptor(&echoed.to_string(), "echo").unwrap(), echoed);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn resolve_writes_csv_rows() {
    let dir = scratch("csv");
    let csv_path = dir.join("tables.csv");
    let sq = fixture("square_zero.desc");
    let out = run(&["resolve", sq.to_str().unwrap(), "--jmax", "4", "--csv", csv_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<TableRow> = csv::Reader::from_path(&csv_path)
        .unwrap()
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    let module: Vec<usize> = rows.iter().filter(|r| r.side == "module").map(|r| r.beta).collect();
    assert_eq!(module, vec![1, 2, 4, 8, 16]);
    assert!(rows.iter().any(|r| r.side == "quotient"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn generated_descriptors_parse_and_repeat() {
    for profile in ["small", "deep", "mixed"] {
        let a = run(&["gen-random", "--seed", "9", "--profile", profile]);
        let b = run(&["gen-random", "--seed", "9", "--profile", profile]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        parse_descriptor(&String::from_utf8(a.stdout).unwrap(), "gen").unwrap();
    }
}

#[test]
fn verify_is_deterministic_without_timing() {
    let args = ["verify", "--seed", "4", "--cases", "4", "--machine"];
    let a = run(&args);
    let b = run(&args);
    let a = strip_timing(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    let b = strip_timing(std::str::from_utf8(&b.stdout).unwrap()).unwrap();
    assert_eq!(a, b);
}
