use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn symcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcone"))
        .args(args)
        .env_remove("SYMCONE_MAX_DIM")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = symcone(&all);
    (serde_json::from_slice(&o.stdout).expect("valid JSON"), o.status.code().unwrap())
}

fn write_family(dir: &Path, tag: &str) -> String {
    let path = dir.join(format!("{}.txt", tag.replace([':', ','], "_")));
    let o = symcone(&["family", tag]);
    assert!(o.status.success());
    fs::write(&path, &o.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn orbits_of_two_pairs() {
    let o = symcone(&["orbits", "--n", "4", "--partition", "1,2|3,4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 12);
    let (v, _) = json(&["orbits", "--partition", "1,2|3,4"]);
    let orbits = v["orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), 12);
    let facets: u64 = orbits.iter().map(|o| o["facets"].as_u64().unwrap()).sum();
    assert_eq!(facets, 28);
}

#[test]
fn rays_of_the_full_symmetric_cone() {
    let (v, code) = json(&["rays", "--n", "4", "--partition", "1,2,3,4"]);
    assert_eq!(code, 0);
    let dirs: Vec<Vec<i64>> = v["rays"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["direction"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect())
        .collect();
    assert_eq!(dirs, vec![vec![1, 1, 1, 1], vec![1, 2, 2, 2], vec![1, 2, 3, 3], vec![1, 2, 3, 4]]);
    for r in v["rays"].as_array().unwrap() {
        assert_eq!(r["tight"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn zhang_yeung_violation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_family(dir.path(), "gap:2,2");
    let o = symcone(&["check", "--zy", "--function", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "zhang_yeung fail -1");
    let o = symcone(&["check", "--polymatroid", "--membership", "--partition", "1,2|3,4", "--function", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    let o = symcone(&["orbits", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(symcone(&["facets"]).status.code(), Some(2));
    assert_eq!(symcone(&["family", "nonsense"]).status.code(), Some(2));
    assert_eq!(symcone(&["orbits", "--n", "3", "--partition", "1,2|3,4"]).status.code(), Some(2));
}

#[test]
fn decomposition_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let o = symcone(&["family", "ukm:2,4,3", "--format", "json"]);
    fs::write(&path, &o.stdout).unwrap();
    let f = path.to_str().unwrap();
    for extra in [&[][..], &["--inductive"]] {
        let mut args = vec!["decompose", "--function", f];
        args.extend(extra);
        let (v, code) = json(&args);
        assert_eq!(code, 0);
        assert_eq!(v["feasible"], true);
        for c in v["coefficients"].as_array().unwrap() {
            let expected = if c["generator"] == "ukm:2,4,3" { "1" } else { "0" };
            assert_eq!(c["coefficient"], expected);
        }
    }
}

#[test]
fn outside_point_yields_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.txt");
    fs::write(&path, "0 0\n1 1\n2 1\n3 -1\n4 1\n5 -1\n6 1\n7 1\n").unwrap();
    let (v, code) = json(&["decompose", "--function", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["feasible"], false);
    assert_eq!(v["certificate"].as_array().unwrap().len(), 5);
}

#[test]
fn project_prints_the_symmetric_image() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.txt");
    // |A ∩ {1}|: averaging over the pair block gives |A ∩ {1,2}| / 2.
    fs::write(&path, "0 0\n1 1\n2 0\n3 1\n").unwrap();
    let (v, _) = json(&["project", "--partition", "1,2", "--function", path.to_str().unwrap()]);
    let values: Vec<&str> = v["s"].as_array().unwrap().iter().map(|e| e["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["0", "1/2", "1"]);
}

#[test]
fn repeated_runs_are_identical() {
    let a = symcone(&["verify", "--quick", "--no-timing", "--format", "json"]);
    let b = symcone(&["verify", "--quick", "--no-timing", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    for v in report.as_array().unwrap() {
        assert_eq!(v["pass"], true);
        assert!(v.get("claim").is_some() && v.get("params").is_some() && v.get("wall_time_ms").is_some());
    }
    let r1 = symcone(&["facets", "--partition", "1|2,3", "--format", "csv"]);
    let r2 = symcone(&["facets", "--partition", "1|2,3", "--format", "csv"]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn dimension_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_symcone"))
        .args(["rays", "--n", "4", "--max-dim", "20"])
        .env("SYMCONE_MAX_DIM", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap 2"));
}
