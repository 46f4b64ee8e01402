use parchi_cli::commands::{self, Format};
use parchi_cli::report::{DiagonalRecord, ReportRecord, WallcrossRecord};
use parchi_cli::spec::{Bound, SweepSpec};
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn parchi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parchi"))
        .args(args)
        .env_remove("PARCHI_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn parchi_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_parchi"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn record(out: &Output) -> ReportRecord {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("a report record")
}

#[test]
fn line_bundle_at_level_one_is_the_verlinde_number() {
    let rec = record(&parchi(&["chi", r#"{"r":2,"g":2,"k":1,"lambda":[0,0]}"#]));
    assert_eq!(rec.value, "4");
    assert_eq!(rec.mode, "line");
    assert_eq!(rec.c, vec!["3/10", "-3/10"]);
    assert!(rec.elapsed_us.is_none());
}

#[test]
fn trivial_representation_gives_zero() {
    let rec = record(&parchi(&["chi", r#"{"r":3,"g":2,"k":1,"lambda":[1,0,-1],"nu":[0,0,0]}"#]));
    assert_eq!(rec.mode, "vector");
    assert_eq!(rec.value, "0");
}

#[test]
fn spec_from_stdin_and_file() {
    let doc = r#"{"r":2,"g":2,"k":2}"#;
    assert_eq!(record(&parchi_stdin(&["chi", "-"], doc)).value, "10");
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("q.json");
    std::fs::write(&p, doc).unwrap();
    let arg = format!("@{}", p.display());
    assert_eq!(record(&parchi(&["chi", &arg])).value, "10");
}

#[test]
fn malformed_inputs_exit_with_validation_code() {
    for doc in [
        r#"{"r":2,"g":2,"k":1,"c":["1/0","0"]}"#,
        r#"{"r":2,"g":2,"k":1,"lambda":[1,1]}"#,
        r#"{"r":2,"g":1,"k":1}"#,
        r#"{"r":2,"g":2,"k":1,"c":["1/2","-1/2"]}"#,
        r#"{"r":2,"g":2,"k":1,"extra":1}"#,
        r#"{"r":2,"g":2,"k":1,"mode":"line","nu":[1,0]}"#,
        "not json",
    ] {
        let out = parchi(&["chi", doc]);
        assert_eq!(out.status.code(), Some(2), "{doc}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(parchi(&["chi", "--mode", "vector", r#"{"r":2,"g":2,"k":1}"#]).status.code(), Some(2));
}

#[test]
fn mode_flag_overrides_inference() {
    let doc = r#"{"r":2,"g":2,"k":1,"nu":[1,0]}"#;
    let v = record(&parchi(&["chi", doc]));
    let m = record(&parchi(&["chi", "--mode", "multi", doc]));
    assert_eq!(v.mode, "vector");
    assert_eq!(m.mode, "multi");
    assert_eq!(v.value, m.value);
}

#[test]
fn report_record_round_trips() {
    let out = parchi(&["chi", "--timing", r#"{"r":3,"g":2,"k":1,"lambda":[1,0,-1]}"#]);
    let rec = record(&out);
    assert!(rec.elapsed_us.is_some());
    let again: ReportRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
    assert_eq!(rec, again);
    assert_eq!(rec.basis.len(), 2);
    assert_eq!(rec.per_basis.len(), 2);
    assert_eq!(rec.chamber.len(), 3);
}

#[test]
fn output_is_deterministic_without_timing() {
    let doc = r#"{"r":3,"g":2,"k":2,"lambda":[1,0,-1]}"#;
    assert_eq!(parchi(&["chi", doc]).stdout, parchi(&["chi", doc]).stdout);
}

#[test]
fn sweep_runs_cells_in_order() {
    let doc = r#"{"r":2,"g":2,"k":{"from":1,"to":2},"lambda":[{"from":"-k","to":"k"}]}"#;
    let out = parchi(&["sweep", doc]);
    assert_eq!(out.status.code(), Some(0));
    let recs: Vec<ReportRecord> = serde_json::from_slice(&out.stdout).unwrap();
    let got: Vec<(i64, String, String)> = recs.iter().map(|r| (r.k, r.lambda[0].clone(), r.value.clone())).collect();
    let want = [(1, "-1", "-4"), (1, "0", "4"), (1, "1", "0"), (2, "-2", "-70"), (2, "-1", "-10"), (2, "0", "10"), (2, "1", "6"), (2, "2", "-6")];
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert_eq!((g.0, g.1.as_str(), g.2.as_str()), w);
    }
    let csv = parchi(&["--output", "csv", "--jobs", "2", "sweep", doc]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.starts_with("mode,r,g,k,lambda,nu,c,value,elapsed_us"));
}

#[test]
fn sweep_of_level_and_weight_has_nine_rows() {
    let doc = r#"{"r":2,"g":2,"k":{"from":1,"to":3},"lambda":[{"from":0,"to":"k"}]}"#;
    let out = parchi(&["--output", "csv", "sweep", doc]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1 + 9);
}

#[test]
fn sweep_across_a_wall_jumps_by_the_wallcross_value() {
    let sweep = r#"{"r":3,"g":2,"k":1,"lambda":[-6,2],"nu":[1,0,0],"cs":[["5/12","1/12","-1/2"],["1/2","-1/12","-5/12"]]}"#;
    let recs: Vec<ReportRecord> = serde_json::from_slice(&parchi(&["sweep", sweep]).stdout).unwrap();
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0].lambda, vec!["-6", "2", "4"]);
    let jump: i64 = recs[0].value.parse::<i64>().unwrap() - recs[1].value.parse::<i64>().unwrap();
    let wc = r#"{"r":3,"g":2,"k":1,"lambda":[-6,2,4],"nu":[1,0,0],"wall":{"pi1":[2],"level":0},"c_plus":["5/12","1/12","-1/2"],"c_minus":["1/2","-1/12","-5/12"]}"#;
    let rec: WallcrossRecord = serde_json::from_slice(&parchi(&["wallcross", wc]).stdout).unwrap();
    assert_eq!(rec.geometric, jump.to_string());
    assert_eq!(rec.residue, jump.to_string());
}

#[test]
fn sweep_over_several_weights_and_genera() {
    let doc = r#"{"r":2,"g":{"from":2,"to":3},"k":1,"cs":[["3/10","-3/10"],["1/10","-1/10"]]}"#;
    let recs: Vec<ReportRecord> = serde_json::from_slice(&parchi(&["sweep", doc]).stdout).unwrap();
    assert_eq!(recs.len(), 4);
    assert_eq!(recs.iter().map(|r| r.g).collect::<Vec<_>>(), vec![2, 2, 3, 3]);
    // λ = 0 lies in the alcove, so both weights give the Verlinde number
    assert_eq!(recs[0].value, "4");
    assert_eq!(recs[1].value, "4");
    assert_eq!(recs[2].value, "8");
}

#[test]
fn empty_sweep_prints_an_empty_table() {
    let doc = r#"{"r":2,"g":2,"k":{"from":3,"to":1}}"#;
    let out = parchi(&["sweep", doc]);
    assert_eq!(out.status.code(), Some(0));
    let recs: Vec<ReportRecord> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(recs.is_empty());
    let csv = parchi(&["--output", "csv", "sweep", doc]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 1);
}

#[test]
fn oversize_sweep_is_rejected() {
    let out = parchi(&["sweep", r#"{"r":4,"g":{"from":2,"to":1000},"k":{"from":1,"to":30},"lambda":[{"from":"-k","to":"k"},{"from":"-k","to":"k"},{"from":"-k","to":"k"}]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("100000"));
}

#[test]
fn sweep_error_in_one_cell_fails_the_whole_run() {
    let out = parchi(&["sweep", r#"{"r":2,"g":{"from":1,"to":2},"k":1}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_cell_enumeration() {
    let spec: SweepSpec =
        serde_json::from_str(r#"{"r":3,"g":2,"k":2,"lambda":[{"from":"-k+1","to":"k-1"},0]}"#).unwrap();
    let cells = spec.cells().unwrap();
    let ls: Vec<Vec<i64>> = cells.iter().map(|c| c.lambda.clone().unwrap()).collect();
    assert_eq!(ls, vec![vec![-1, 0, 1], vec![0, 0, 0], vec![1, 0, -1]]);
    assert_eq!(Bound::Expr("-k-2".into()).at(5).unwrap(), -7);
    assert!(Bound::Expr("2k".into()).at(5).is_err());
}

#[test]
fn wallcross_rank3_standard_representation() {
    let doc = r#"{"r":3,"g":2,"k":1,"lambda":[-6,2,4],"nu":[1,0,0],"wall":{"pi1":[2],"level":0},"c_plus":["5/12","1/12","-1/2"]}"#;
    let out = parchi(&["wallcross", doc]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rec: WallcrossRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert!(rec.equal);
    assert_eq!(rec.geometric, rec.residue);
    assert_eq!(rec.residue, rec.residue_product);
    assert_eq!(rec.geometric, "-4488");
}

#[test]
fn wallcross_line_bundle() {
    let doc = r#"{"r":3,"g":2,"k":2,"lambda":[-6,3,3],"wall":{"pi1":[2],"level":0},"c_plus":["5/12","1/12","-1/2"]}"#;
    let rec: WallcrossRecord = serde_json::from_slice(&parchi(&["wallcross", doc]).stdout).unwrap();
    assert!(rec.nu.is_empty());
    assert!(rec.equal);
    assert_eq!(rec.geometric, "32625");
}

#[test]
fn wallcross_wrong_side_is_a_validation_error() {
    let doc = r#"{"r":3,"g":2,"k":1,"wall":{"pi1":[2],"level":0},"c_plus":["1/2","-1/12","-5/12"]}"#;
    assert_eq!(parchi(&["wallcross", doc]).status.code(), Some(2));
}

#[test]
fn diagonal_bases_have_factorial_size() {
    for (r, n) in [(2, 1), (3, 2), (4, 6)] {
        let out = parchi(&["diagonal", &r.to_string()]);
        assert_eq!(out.status.code(), Some(0));
        let rec: DiagonalRecord = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(rec.basis.len(), n);
        assert!(rec.transcript.diagonal);
        assert!(!rec.supplied);
    }
    assert_eq!(parchi(&["diagonal", "6"]).status.code(), Some(2));
}

#[test]
fn diagonal_certifies_a_supplied_set() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, "[[[2,3],[1,2]],[[3,2],[1,3]]]").unwrap();
    let out = parchi(&["diagonal", "3", "--basis-file", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rec: DiagonalRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert!(rec.supplied && rec.transcript.diagonal);

    // the same tree twice is not diagonal
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "[[[2,3],[1,2]],[[2,3],[1,2]]]").unwrap();
    let out = parchi(&["diagonal", "3", "--basis-file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // and chi refuses it outright
    let out = parchi(&["chi", "--basis-file", bad.to_str().unwrap(), r#"{"r":3,"g":2,"k":1}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn supplied_basis_gives_the_same_value() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("b.json");
    std::fs::write(&p, "[[[2,3],[1,2]],[[3,2],[1,3]]]").unwrap();
    let doc = r#"{"r":3,"g":2,"k":1,"lambda":[1,0,-1]}"#;
    let a = record(&parchi(&["chi", doc]));
    let b = record(&parchi(&["chi", "--basis-file", p.to_str().unwrap(), doc]));
    assert_eq!(a.value, b.value);
}

#[test]
fn verify_characters_suite_passes() {
    let out = parchi(&["verify", "characters"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suite"], "characters");
    assert_eq!(parchi(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(parchi(&["--output", "csv", "verify", "characters"]).status.code(), Some(2));
}

#[test]
fn library_entry_points_match_the_binary() {
    let r = commands::chi(r#"{"r":2,"g":3,"k":1}"#, None, None, Format::Json, false).unwrap();
    let rec: ReportRecord = serde_json::from_str(&r.text).unwrap();
    assert_eq!(rec.value, "8");
    let e = commands::chi(r#"{"r":1,"g":2,"k":1}"#, None, None, Format::Json, false).unwrap_err();
    assert_eq!(e.code, 2);
}
