use std::fs;

use mfchains::cli::{render_frames, run};
use mfchains::parse_action;
use mfchains::simulate::{RawTrajectory, Trajectory};
use tempfile::tempdir;

fn mf(args: &[&str]) -> i32 {
    run(std::iter::once("mfchains").chain(args.iter().copied()))
}

#[test]
fn pascal_csv() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("pascal.csv");
    let code = mf(&["coeffs", "--action", "un:n=1", "--max-weight", "4", "--format", "csv", "--output", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(out).unwrap();
    let mut rdr = csv::ReaderBuilder::new().delimiter(b';').from_reader(text.as_bytes());
    let mut seen = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let m: u64 = rec[0].parse().unwrap_or(0);
        let j: u64 = rec[1].parse().unwrap_or(0);
        let v: mfchains::Rational = rec[2].parse().unwrap();
        assert_eq!(v, mfchains::rational::binomial_q(m, j), "{m} {j}");
        seen += 1;
    }
    assert_eq!(seen, 15);
}

#[test]
fn exit_codes() {
    assert_eq!(mf(&["coeffs", "--action", "bogus:n=2", "--max-weight", "2"]), 1);
    assert_eq!(mf(&["coeffs", "--max-weight", "2"]), 1);
    assert_eq!(mf(&["semigroup", "--action", "un:n=2", "--direction", "birth", "--from", "1", "--to", "2", "--x", "3/2"]), 1);
    let dir = tempdir().unwrap();
    let out = dir.path().join("v.txt");
    let code = mf(&["verify", "--suite", "row_sums", "--action", "symc:m=2", "--max-weight", "3", "--output", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(fs::read_to_string(out).unwrap().trim_end().lines().last().unwrap().starts_with("PASS"));
}

#[test]
fn tv_threshold_sets_exit_code() {
    let dir = tempdir().unwrap();
    let jsonl = dir.path().join("paths.jsonl");
    let summary = dir.path().join("summary.json");
    let base = [
        "simulate", "--action", "torus:n=2", "--direction", "birth", "--t-max", "0.3", "--paths", "200", "--seed", "3",
        "--at", "0.3", "--report-tv",
    ];
    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--output", jsonl.to_str().unwrap(), "--summary", summary.to_str().unwrap()]);
    let mut strict = args.clone();
    strict.extend(["--max-tv", "0.000001"]);
    assert_eq!(mf(&strict), 2);
    let mut loose = args.clone();
    loose.extend(["--max-tv", "1"]);
    assert_eq!(mf(&loose), 0);
    let s: serde_json::Value = serde_json::from_str(&fs::read_to_string(summary).unwrap()).unwrap();
    assert!(s["tv_vs_exact"].as_f64().unwrap() > 0.0);
}

#[test]
fn trajectories_round_trip_and_diagram() {
    let dir = tempdir().unwrap();
    let jsonl = dir.path().join("paths.jsonl");
    let summary = dir.path().join("s.json");
    let args = [
        "simulate", "--action", "symc:m=3", "--direction", "birth", "--t-max", "0.4", "--paths", "5", "--seed", "11",
        "--output", jsonl.to_str().unwrap(), "--summary", summary.to_str().unwrap(),
    ];
    assert_eq!(mf(&args), 0);
    let text = fs::read_to_string(&jsonl).unwrap();
    let action = parse_action("symc:m=3").unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    for line in &lines {
        let tr = Trajectory::from_json_line(&action, line).unwrap();
        assert_eq!(&tr.to_json_line(), line);
    }
    assert_eq!(mf(&["inspect", "--kind", "trajectories", "--input", jsonl.to_str().unwrap(), "--action", "symc:m=3"]), 0);

    let longest = lines.iter().max_by_key(|l| Trajectory::from_json_line(&action, l).unwrap().events.len()).unwrap();
    let raw = RawTrajectory::from_json_line(longest).unwrap();
    let frames = render_frames(&raw);
    let boxes: Vec<usize> = frames
        .split("t = ")
        .filter(|f| !f.trim().is_empty())
        .map(|f| f.matches('#').count())
        .collect();
    assert_eq!(boxes.len(), raw.events.len() + 1);
    for w in boxes.windows(2) {
        assert_eq!(w[1], w[0] + 1);
    }
    let out = dir.path().join("frames.txt");
    assert_eq!(mf(&["diagram", "--input", jsonl.to_str().unwrap(), "--path", "0", "--output", out.to_str().unwrap()]), 0);
    assert!(fs::read_to_string(out).unwrap().starts_with("t = "));
}

#[test]
fn generator_export_imports() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("gen.json");
    let code = mf(&[
        "rates", "--action", "matc:m=2", "--direction", "death", "--max-weight", "3", "--format", "json", "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(mf(&["inspect", "--kind", "generator", "--input", out.to_str().unwrap()]), 0);
}
