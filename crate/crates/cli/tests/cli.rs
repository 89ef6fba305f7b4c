use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn infcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infcount")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn build_model(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["model", "build"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = infcount(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn bound_report_line() {
    let o = infcount(&["bound", "--M", "9", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "m=- M=9 d=2 gs=- fif=722 dominant=648\n");
}

#[test]
fn alignment_polygon_vertex_list_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let o = infcount(&["align", "polygon", "--s1", "01", "--s2", "10", "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2 3\n0 0\n1 1\n2 0\n");
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.contains("<svg") && text.contains("<polygon"));
}

#[test]
fn alignment_best_and_slopes() {
    let o = infcount(&["align", "best", "--s1", "00", "--s2", "01", "--alpha", "1/2", "--beta", "2/5"]);
    assert_eq!(stdout(&o), "00\n01\nx=1 y=0 z=1 score=1/2\n");
    let o = infcount(&["align", "slopes", "--n", "10"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("u=1 v=2 a=4 b=1 "));
}

#[test]
fn hmm_count_viterbi_and_polytope() {
    let dir = tempfile::tempdir().unwrap();
    let model = build_model(dir.path(), "hmm2.json", &["--family", "hmm", "--n", "2"]);
    let m = model.to_str().unwrap();
    let o = infcount(&["count", "--model", m]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("count=38\n"), "{out}");
    let o = infcount(&["np", "--model", m, "--obs", "01"]);
    assert!(stdout(&o).starts_with("8 "));
    let o = infcount(&["viterbi", "--model", m, "--obs", "01", "--logparams", "-1,0,0,0,0,0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("score=0"));
}

#[test]
fn lowerbound_viterbi_switches_paths() {
    let dir = tempfile::tempdir().unwrap();
    let model = build_model(dir.path(), "lb.json", &["--family", "lowerbound", "--d", "2", "--n", "7"]);
    let m = model.to_str().unwrap();
    let pos = infcount(&["viterbi", "--model", m, "--obs", "SCSCCSC", "--logparams", "1,1"]);
    let neg = infcount(&["viterbi", "--model", m, "--obs", "SCSCCSC", "--logparams", "1,-1"]);
    assert!(stdout(&pos).contains("score=5"));
    assert!(stdout(&pos).starts_with("s1 "));
    assert!(stdout(&neg).starts_with("s'1 "));
    assert!(stdout(&neg).contains("score=0"));
}

#[test]
fn exit_codes() {
    // validation errors
    assert_eq!(infcount(&["align", "best", "--s1", "0", "--s2", "1", "--alpha", "0.5", "--beta", "1"]).status.code(), Some(2));
    assert_eq!(infcount(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(infcount(&["bound", "--M", "3", "--d", "2", "--bogus"]).status.code(), Some(2));
    // budget refusals
    assert_eq!(infcount(&["arrangement", "--d", "5", "--n", "10"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let model = build_model(dir.path(), "hmm3.json", &["--family", "hmm", "--n", "3"]);
    assert_eq!(infcount(&["count", "--model", model.to_str().unwrap(), "--cap", "4"]).status.code(), Some(3));
    // missing model file
    assert_eq!(infcount(&["count", "--model", dir.path().join("none.json").to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn stochastic_runs_echo_seed_and_repeat_exactly() {
    let args = ["primprob", "--d", "2", "--m", "1", "--box", "1000", "--samples", "2000", "--seed", "17", "--jobs", "3"];
    let a = infcount(&args);
    let b = infcount(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("seed=17\n"));
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let model = build_model(dir.path(), "hmm1.json", &["--family", "hmm", "--n", "2"]);
    let m = model.to_str().unwrap();
    let one = infcount(&["count", "--model", m, "--samples", "50", "--seed", "4", "--jobs", "1"]);
    let four = infcount(&["count", "--model", m, "--samples", "50", "--seed", "4", "--jobs", "4"]);
    assert!(stdout(&one).starts_with("seed=4\n"));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn arrangement_record() {
    let o = infcount(&["arrangement", "--d", "2", "--n", "4", "--rays"]);
    assert_eq!(stdout(&o), "d=2 n=4 normals=3 chambers=6 max_rays=2\n");
}

#[test]
fn model_json_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = build_model(dir.path(), "a.json", &["--family", "alignment", "--n1", "2", "--n2", "2"]);
    let text = std::fs::read_to_string(&a).unwrap();
    let o = infcount(&["np", "--model", a.to_str().unwrap(), "--obs", "0101"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let b = build_model(dir.path(), "b.json", &["--family", "alignment", "--n1", "2", "--n2", "2"]);
    assert_eq!(text, std::fs::read_to_string(b).unwrap());
}
