use std::path::Path;
use std::process::{Command, Output};

use hopflab_core::hopf::{complex_hopf_fiber, octonionic_hopf_projection, stereographic_projection};
use hopflab_core::report::{FiberPolylineFile, Projection, RunReport};
use hopflab_core::UnitVector;

fn hopflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopflab"))
        .args(args)
        .env_remove("HOPFLAB_DEFAULT_SEED")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> RunReport {
    RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn polylines(out: &Output) -> FiberPolylineFile {
    FiberPolylineFile::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn outcome<'a>(r: &'a RunReport, name: &str) -> &'a hopflab_core::CheckOutcome {
    r.outcomes.iter().find(|o| o.name == name).unwrap_or_else(|| panic!("no outcome {name}"))
}

fn sub(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm2(a: [f64; 3]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

/// Center of the circle through three points of R^3.
fn circumcenter(a: &[f64], b: &[f64], c: &[f64]) -> [f64; 3] {
    let (u, v) = (sub(b, a), sub(c, a));
    let w = cross(u, v);
    let p = cross(v, w);
    let q = cross(w, u);
    let d = 2.0 * norm2(w);
    std::array::from_fn(|k| a[k] + (norm2(u) * p[k] + norm2(v) * q[k]) / d)
}

fn assert_on_one_circle(points: &[Vec<f64>]) {
    let center = circumcenter(&points[0], &points[1], &points[2]);
    let r = norm2(sub(&points[0], &center)).sqrt();
    for p in points {
        let d = norm2(sub(p, &center)).sqrt();
        assert!((d - r).abs() < 1e-6 * r.max(1.0), "{d} vs {r}");
    }
}

#[test]
fn fibers_shape_contract() {
    let out = hopflab(&["fibers", "complex", "--dim", "3", "--count", "2", "--grid", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let file = polylines(&out);
    assert_eq!(file.format_version, 1);
    assert_eq!(file.projection, Projection::None);
    assert_eq!(file.fibers.len(), 2);
    for f in &file.fibers {
        assert_eq!(f.points.len(), 4);
        for p in &f.points {
            assert_eq!(p.len(), 4);
            assert!((p.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn stereographic_fibers_are_circles() {
    let out = hopflab(&["fibers", "complex", "--count", "5", "--grid", "12", "--projection", "stereographic"]);
    assert_eq!(out.status.code(), Some(0));
    let file = polylines(&out);
    assert_eq!(file.arity(), 3);
    for f in &file.fibers {
        assert_on_one_circle(&f.points);
    }
}

#[test]
fn stereographic_image_of_fiber_through_one() {
    let fiber = complex_hopf_fiber(&UnitVector::axis(3, 0)).unwrap();
    let points: Vec<Vec<f64>> = fiber
        .grid(32)
        .iter()
        .map(|p| stereographic_projection(p.coords()).unwrap())
        .collect();
    assert_on_one_circle(&points);
}

#[test]
fn octonionic_fibers_share_a_base_point() {
    let out = hopflab(&["fibers", "octonionic", "--dim", "15", "--count", "3", "--grid", "16"]);
    assert_eq!(out.status.code(), Some(0));
    for f in &polylines(&out).fibers {
        let base = |p: &Vec<f64>| octonionic_hopf_projection(&UnitVector::new(p.clone()).unwrap()).unwrap();
        let first = base(&f.points[0]);
        for p in &f.points {
            assert!(base(p).distance(&first).unwrap() < 1e-9);
        }
    }
}

#[test]
fn incompatible_family_and_dimension_is_a_usage_error() {
    for args in [
        &["fibers", "complex", "--dim", "4"][..],
        &["fibers", "quaternionic", "--dim", "5"],
        &["fibers", "octonionic", "--dim", "7"],
        &["fibers", "quaternionic", "--projection", "stereographic"],
    ] {
        assert_eq!(hopflab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn validate_constant_map() {
    let out = hopflab(&["validate-map", "constant", "--trials", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r.ok());
    assert_eq!(outcome(&r, "round-map-classifier").detail.as_deref(), Some("hopf"));
    assert_eq!(outcome(&r, "homogeneity-scan").detail.as_deref(), Some("constant axes"));
}

#[test]
fn validate_identity_fails_but_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("identity.json");
    let out = hopflab(&["validate-map", "identity", "--trials", "500", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = RunReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(!outcome(&r, "distance-decreasing").ok);
    assert_eq!(
        outcome(&r, "round-map-classifier").detail.as_deref(),
        Some("distance-preserving-excluded")
    );
}

#[test]
fn validate_polar_contraction() {
    let out = hopflab(&["validate-map", "polar-contraction:0.5", "--trials", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(outcome(&r, "distance-decreasing").ok);
    assert!(outcome(&r, "disjoint-fibers").ok);
    assert_eq!(outcome(&r, "homogeneity-scan").detail.as_deref(), Some("not locally homogeneous"));
}

#[test]
fn validate_map_parse_errors() {
    for spec in ["bogus", "constant:1,2", "polar-contraction", "polar-contraction:x", "constant:0,0,0"] {
        assert_eq!(hopflab(&["validate-map", spec]).status.code(), Some(2), "{spec}");
    }
}

#[test]
fn fs_commands() {
    let r = report(&hopflab(&["fs", "su2", "defining"]));
    assert_eq!(outcome(&r, "indicator").detail.as_deref(), Some("nearest -1 (quaternionic)"));
    let r = report(&hopflab(&["fs", "su3", "defining"]));
    assert_eq!(outcome(&r, "indicator").detail.as_deref(), Some("nearest 0 (complex)"));
    let r = report(&hopflab(&["fs", "so3", "trivial", "--trials", "1000"]));
    assert_eq!(outcome(&r, "indicator").value, 1.0);
    let r = report(&hopflab(&["fs", "su2xsu2", "defining,defining", "--trials", "20000"]));
    assert_eq!(outcome(&r, "indicator").detail.as_deref(), Some("nearest 1 (real)"));

    assert_eq!(hopflab(&["fs", "g2", "defining"]).status.code(), Some(2));
    assert_eq!(hopflab(&["fs", "u1", "ext2"]).status.code(), Some(2));
    assert_eq!(hopflab(&["fs", "su2", "defining", "--trials", "10"]).status.code(), Some(2));
}

#[test]
fn homogeneity_targets() {
    for target in ["hopf-s3", "figure1:1", "figure1:0", "figure1"] {
        let out = hopflab(&["homogeneity", target]);
        assert_eq!(out.status.code(), Some(0), "{target}");
        assert!(report(&out).ok());
    }
    assert_eq!(hopflab(&["homogeneity", "figure2"]).status.code(), Some(2));
    assert_eq!(hopflab(&["homogeneity", "figure1:nan"]).status.code(), Some(2));
}

#[test]
fn seed_from_environment_and_flag() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_hopflab"));
        cmd.args(["homogeneity", "figure1", "--trials", "10"]);
        cmd.env_remove("HOPFLAB_DEFAULT_SEED");
        if let Some(e) = env {
            cmd.env("HOPFLAB_DEFAULT_SEED", e);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        report(&cmd.output().unwrap()).seed
    };
    assert_eq!(run(None, None), 0);
    assert_eq!(run(Some("5"), None), 5);
    assert_eq!(run(Some("5"), Some("9")), 9);
}

#[test]
fn csv_output() {
    let out = hopflab(&["homogeneity", "hopf-s3", "--trials", "10", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("section,name,ok,value,tolerance,detail\n"));
    assert!(text.contains("\nmeta,format_version,,1,,\n"));
    let out = hopflab(&["fibers", "complex", "--count", "1", "--grid", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn output_is_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    std::fs::write(&path, "stale").unwrap();
    let out = hopflab(&["homogeneity", "hopf-s3", "--trials", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r = RunReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.format_version, 1);
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1, "temporary files left behind");
}

#[test]
fn unwritable_output_is_an_error() {
    let missing = Path::new("/nonexistent-dir-for-hopflab/report.json");
    let out = hopflab(&["homogeneity", "hopf-s3", "--trials", "10", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(hopflab(&[]).status.code(), Some(2));
    assert_eq!(hopflab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hopflab(&["fs", "su2", "defining", "--seed", "-1"]).status.code(), Some(2));
    assert_eq!(hopflab(&["fs", "su2", "defining", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(hopflab(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_reparse_losslessly() {
    let out = hopflab(&["validate-map", "polar-contraction:0.3", "--trials", "500"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let r = RunReport::from_json(&text).unwrap();
    assert_eq!(r.to_json().unwrap(), text);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
    assert!(keys.contains(&"format_version") && keys.contains(&"timestamp"));
}
