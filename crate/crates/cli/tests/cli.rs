use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use stabilis_cli::corpus;
use stabilis_cli::report::Report;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stabilis"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stabilis-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn cone_density_vector() {
    let f = write("cone.json", r#"{"dim":1,"gens":[[2],[3]],"query":[25]}"#);
    let v = stdout_json(&run(&["cone", "--in", path(&f)]));
    assert_eq!(v["w0"], serde_json::json!([25]));
    assert_eq!(v["membership"]["verdict"], "member");
}

#[test]
fn restrict_reports_missing_extension_property() {
    let f = write("z4.json", r#"{"g":{"named":"Z4"},"h_generators":[[2,3,0,1]]}"#);
    let v = stdout_json(&run(&["restrict", "--in", path(&f)]));
    assert_eq!(v["extension_property"], false);
    let f = write("klein.json", r#"{"g":{"named":"klein"},"h_generators":[[1,0,2,3]]}"#);
    assert_eq!(stdout_json(&run(&["restrict", "--in", path(&f)]))["extension_property"], true);
}

#[test]
fn group_table() {
    let f = write("g.json", r#"{"named":"D4"}"#);
    let v = stdout_json(&run(&["group", "--in", path(&f)]));
    assert_eq!(v["order"], 8);
    assert_eq!(v["classes"].as_array().unwrap().len(), 8);
}

#[test]
fn zero_perturbation_leaves_input_unchanged() {
    let s = serde_json::to_string(&corpus::get("double_s3_z3").unwrap()).unwrap();
    let f = write("s3.json", &s);
    let v = stdout_json(&run(&["perturb", "--in", path(&f), "--k", "0", "--seed", "5"]));
    assert_eq!(v["defect"], "0");
    let perturbed = write("s3p.json", &serde_json::to_string(&v["scenario"]).unwrap());
    let out = scratch("s3p.report.json");
    assert!(run(&["stabilize", "--in", path(&perturbed), "--out", path(&out)]).status.success());
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.result.output_distance, stabilis_core::Rational64::from_integer(0));
    assert_eq!(report.output, report.input);
}

#[test]
fn reports_round_trip_and_verify() {
    let out = scratch("all.json");
    assert!(run(&["stabilize", "--corpus", "all", "--out", path(&out)]).status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let reports: Vec<Report> = serde_json::from_str(&text).unwrap();
    assert_eq!(reports.len(), corpus::names().len());
    assert_eq!(serde_json::to_string_pretty(&reports).unwrap(), text);
    let o = run(&["verify", "--in", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exit_codes() {
    let bad = write("bad.json", "{ not json");
    assert_eq!(run(&["cone", "--in", path(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["stabilize", "--corpus", "nope"]).status.code(), Some(2));
    let hard = write("hard.json", r#"{"dim":1,"gens":[[7],[11]],"query":[59]}"#);
    assert_eq!(run(&["cone", "--in", path(&hard), "--budget", "1"]).status.code(), Some(3));

    let out = scratch("one.json");
    assert!(run(&["stabilize", "--corpus", "hnn_klein", "--out", path(&out)]).status.success());
    let mut report: Report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let stabilis_cli::report::ActionsEcho::Hnn { tau, .. } = &mut report.output else { panic!() };
    tau.swap(0, 1);
    let corrupted = write("corrupted.json", &report.to_json().unwrap());
    let o = run(&["verify", "--in", path(&corrupted)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("relator"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = scratch("sweep-a.csv");
    let b = scratch("sweep-b.csv");
    for p in [&a, &b] {
        let o = run(&["sweep", "--corpus", "double_z4_z2", "--seeds", "3", "--seed", "11", "--out", path(p)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let r1 = run(&["stabilize", "--corpus", "all"]);
    let r2 = run(&["stabilize", "--corpus", "all"]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn operator_norm_scenario() {
    let f = write(
        "op.json",
        r#"{"spec":{"kind":"amalgam","h":{"named":"Z2"},"g1":{"named":"klein"},"g2":{"named":"Z4"},
            "i1":[[1,0,2,3]],"i2":[[2,3,0,1]]},
           "phi1":[[[[1,0],[0,0]],[[0,0],[-1,0]]], [[[-1,0],[0,0]],[[0,0],[1,0]]]],
           "phi2":[[[[0.99995,0],[-0.0099998,0]],[[0.0099998,0],[0.99995,0]]]]}"#,
    );
    let o = run(&["op", "--in", path(&f)]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stdout));
}
