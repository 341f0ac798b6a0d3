use std::path::Path;
use std::process::{Command, Output};

use cayley::lineset;
use cayley::report::{csv_cell, Report};
use proptest::prelude::*;

fn cayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hexagon_passes_with_counts_and_girth() {
    let out = cayley(&["hexagon", "--q", "2", "--class", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r.pass);
    assert_eq!(r.seed, 7);
    let check = |suite: &str, item: &str| r.suite(suite).unwrap().checks.iter().find(|c| c.item == item).unwrap().value.clone();
    assert_eq!(check("counts", "class 0 points"), 63);
    assert_eq!(check("counts", "class 0 lines"), 63);
    assert_eq!(check("hexagon", "class 0 girth"), 12);
    assert!(r.suite("negative-control").unwrap().pass);
}

#[test]
fn corrupted_hexagon_fails_with_witness_cycle() {
    let out = cayley(&["hexagon", "--q", "2", "--class", "0", "--corrupt-seed", "7"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert!(!r.pass);
    assert_eq!(r.corrupt_seed, Some(7));
    let h = r.suite("hexagon").unwrap();
    let cycle = h.witnesses[0]["cycle"].as_array().unwrap();
    let girth = h.checks.iter().find(|c| c.item.ends_with("girth")).unwrap().value.as_u64().unwrap();
    assert!(girth <= 10);
    assert_eq!(cycle.len() as u64, girth);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["hexagon", "--q", "6"][..],
        &["hexagon", "--q", "2", "--class", "3"],
        &["hexagon", "--q", "3", "--modulus", "1,0,1"],
        &["verify", "--q", "2", "--suite", "nonsense"],
        &["frobnicate"],
        &["hexagon", "--q", "2", "--threads", "0"],
    ] {
        assert_eq!(cayley(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn modulus_is_recorded() {
    let out = cayley(&["hexagon", "--q", "3", "--modulus", "2,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).field.modulus, [2, 1, 1]);
}

#[test]
fn census_rows_and_csv_agree_with_json() {
    let json = cayley(&["census", "--q", "2"]);
    assert_eq!(json.status.code(), Some(0));
    let r = report(&json);
    let sizes: Vec<u64> = r.suite("line-orbits").unwrap().checks[..4].iter().map(|c| c.value.as_u64().unwrap()).collect();
    assert_eq!(sizes, [9, 36, 108, 162]);
    let pc = r.suite("plane-census").unwrap();
    let get = |item: &str| pc.checks.iter().find(|c| c.item == item).unwrap().value.as_u64().unwrap();
    assert_eq!((get("class 0 N0"), get("class 0 N1"), get("class 0 Nq+1")), (72, 0, 63));

    let csv_out = cayley(&["census", "--q", "2", "--format", "csv"]);
    assert_eq!(csv_out.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(&csv_out.stdout[..]);
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    let flat: Vec<(&str, &cayley::Check)> = r.suites.iter().flat_map(|s| s.checks.iter().map(move |c| (s.suite.as_str(), c))).collect();
    assert_eq!(rows.len(), flat.len());
    for (row, (suite, c)) in rows.iter().zip(flat) {
        assert_eq!(&row[0], suite);
        assert_eq!(&row[1], c.item);
        assert_eq!(row[2], csv_cell(&c.value));
        assert_eq!(row[3], csv_cell(&c.expected));
        assert_eq!(&row[4], if c.pass { "true" } else { "false" });
    }
}

#[test]
fn census_q3_rows() {
    let r = report(&cayley(&["census", "--q", "3"]));
    let sizes: Vec<u64> = r.suite("line-orbits").unwrap().checks[..4].iter().map(|c| c.value.as_u64().unwrap()).collect();
    assert_eq!(sizes, [28, 252, 2016, 1344]);
    assert!(r.pass);
}

#[test]
fn reports_are_identical_across_runs_and_thread_counts() {
    let a = cayley(&["verify", "--q", "2", "--no-timings", "--threads", "1"]);
    let b = cayley(&["verify", "--q", "2", "--no-timings", "--threads", "4"]);
    let c = cayley(&["verify", "--q", "2", "--no-timings"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let timed = cayley(&["verify", "--q", "2", "--threads", "2"]);
    assert_eq!(report(&timed).payload(), report(&a));
    assert!(!report(&timed).timings_ms.is_empty());
}

#[test]
fn exported_lines_certify_with_their_class() {
    let dir = tempfile::tempdir().unwrap();
    for (q, class) in [(2, 1), (3, 2)] {
        let file = dir.path().join(format!("omega{q}.json"));
        let ex = cayley(&["export", "--q", &q.to_string(), "--class", &class.to_string(), "--out", path(&file)]);
        assert_eq!(ex.status.code(), Some(0));
        let out = cayley(&["certify", "--input", path(&file)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        let recovered = r.suites[0].checks.iter().find(|c| c.item == "recovered norm class").unwrap();
        assert_eq!(recovered.value, class);
    }
}

#[test]
fn spread_union_fails_at_connectivity() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("union.json");
    assert_eq!(cayley(&["export", "--q", "2", "--kind", "spread-union", "--out", path(&file)]).status.code(), Some(0));
    let out = cayley(&["certify", "--input", path(&file)]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let first_fail = r.suites[0].checks.iter().find(|c| !c.pass).unwrap();
    assert_eq!(first_fail.item, "connectivity");
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    cayley(&["export", "--q", "2", "--out", path(&good)]);
    let text = std::fs::read_to_string(&good).unwrap();
    let cases = [
        ("truncated", text[..text.len() / 2].to_string()),
        ("form", text.replace("parabolic-6", "hyperbolic-8")),
        ("entry", text.replacen("[0,0,1,0,0,1,0]", "[0,0,5,0,0,1,0]", 1)),
        ("width", text.replacen("[0,0,1,0,0,1,0]", "[0,0,1,0,0,1]", 1)),
        ("rank", text.replacen("[0,0,1,0,0,1,0],[0,0,0,1,1,1,0]", "[0,0,1,0,0,1,0],[0,0,1,0,0,1,0]", 1)),
    ];
    for (name, body) in cases {
        assert_ne!(body, text, "{name} case must change the file");
        let f = dir.path().join(format!("{name}.json"));
        std::fs::write(&f, body).unwrap();
        let out = cayley(&["certify", "--input", path(&f)]);
        assert_eq!(out.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(cayley(&["certify", "--input", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(cayley(&["certify", "--q", "3", "--input", path(&good)]).status.code(), Some(2));
}

#[test]
fn non_singular_line_is_a_certification_failure() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    cayley(&["export", "--q", "2", "--out", path(&good)]);
    let mut file = lineset::parse(&std::fs::read_to_string(&good).unwrap()).unwrap();
    file.lines[0] = [vec![1, 0, 0, 0, 0, 0, 0], vec![0, 1, 0, 0, 0, 0, 0]];
    let f = dir.path().join("bad.json");
    std::fs::write(&f, lineset::to_json(&file)).unwrap();
    let out = cayley(&["certify", "--input", path(&f)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn other_exports_are_json() {
    for kind in ["gamma", "classes", "stabiliser"] {
        let out = cayley(&["export", "--q", "2", "--kind", kind]);
        assert_eq!(out.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["q"], 2);
    }
    let g: serde_json::Value = serde_json::from_slice(&cayley(&["export", "--q", "2", "--kind", "gamma"]).stdout).unwrap();
    assert_eq!(g["points"].as_array().unwrap().len(), 63);
    assert_eq!(g["incidences"].as_array().unwrap().len(), 189);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn line_sets_roundtrip(q in prop::sample::select(vec![2usize, 3]), picks in prop::collection::vec(0usize..100_000, 1..30)) {
        use cayley_core::{BcsMap, Field, HermitianSurface};
        let s = HermitianSurface::new(Field::new(q).unwrap());
        let bcs = BcsMap::new(&s).unwrap();
        let lines: Vec<_> = picks.iter().map(|&i| bcs.lines()[i % bcs.lines().len()].clone()).collect();
        let file = lineset::encode(s.field(), &lines);
        let text = lineset::to_json(&file);
        let back = lineset::decode(s.field(), &lineset::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(back, lines);
    }

    #[test]
    fn control_payloads_depend_only_on_seed(seed in any::<u64>()) {
        let a = cayley(&["hexagon", "--q", "2", "--no-timings", "--seed", &seed.to_string()]);
        let b = cayley(&["hexagon", "--q", "2", "--no-timings", "--seed", &seed.to_string(), "--threads", "3"]);
        prop_assert_eq!(a.status.code(), Some(0));
        let r = report(&a);
        prop_assert_eq!(r.seed, seed);
        prop_assert_eq!(a.stdout, b.stdout);
    }
}
