use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn galileo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galileo")).args(args).output().unwrap()
}

fn scene(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

#[test]
fn eval_reports_curvature() {
    let dir = tempfile::tempdir().unwrap();
    let p = scene(
        dir.path(),
        "p.json",
        r#"{"kind":"parametric","x":"u","y":"v","z":"u^2+v^2"}"#,
    );
    let out = galileo(&["eval", &p, "0", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["k"].as_f64(), v["h_paper"].as_f64()), (Some(4.0), Some(2.0)));
    assert_eq!(v["w"].as_f64(), Some(1.0));

    let plane = scene(
        dir.path(),
        "plane.json",
        r#"{"kind":"parametric","x":"u","y":"v","z":"2*u-v","domain":{"u":[0,10],"v":[0,10]}}"#,
    );
    let v: Value = serde_json::from_slice(&galileo(&["eval", &plane, "5", "5"]).stdout).unwrap();
    for key in ["k", "h_canonical", "h_paper"] {
        assert_eq!(v[key].as_f64(), Some(0.0), "{key}");
    }
    assert_eq!(galileo(&["eval", &plane, "-1", "5"]).status.code(), Some(2));
}

#[test]
fn shipped_examples_certify() {
    let ex = examples();
    for (file, theorem) in [
        ("constant_k.json", "K_affine"),
        ("circle_surface.json", "H_type3"),
        ("cmc_ode.json", "H_type4_cmc"),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let out_path = dir.path().join("cert.json");
        let path = ex.join(file);
        let out = galileo(&[
            "verify",
            path.to_str().unwrap(),
            "--theorem",
            theorem,
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{file}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let cert: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
        assert_eq!(cert["pass"], Value::Bool(true));
        assert_eq!(cert["theorem"], Value::String(theorem.into()));
    }
}

#[test]
fn scene_output_path_is_relative_to_scene() {
    let dir = tempfile::tempdir().unwrap();
    let p = scene(
        dir.path(),
        "s.json",
        r#"{"kind":"parametric","x":"u","y":"v","z":"u*v","grid":[3,3],"output":{"path":"s.obj"}}"#,
    );
    let out = galileo(&["mesh", &p, "-q"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty() && out.stderr.is_empty());
    let obj = std::fs::read_to_string(dir.path().join("s.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 9);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 4);
}

#[test]
fn circle_heatmap_has_constant_mean_curvature() {
    let path = examples().join("circle_surface.json");
    let out = galileo(&["heatmap", path.to_str().unwrap(), "--grid", "11x11", "-q"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,v,x,y,z,K,H_canonical,H_paper"));
    let h: Vec<f64> = lines.map(|l| l.split(',').nth(7).unwrap().parse().unwrap()).collect();
    assert_eq!(h.len(), 121);
    assert!(h.iter().all(|x| (x - h[0]).abs() < 1e-9));
    assert!((h[0].abs() - 2.0).abs() < 1e-9);
}

#[test]
fn probes_run_without_scene() {
    let out = galileo(&["verify", "--probe", "type4", "--grid", "11x11", "-q"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["spread_h_paper"].as_f64().unwrap() > 0.1);
    let seeded = |s| galileo(&["verify", "--probe", "type3_circle_control", "--seed", s, "-q"]).stdout;
    assert_eq!(seeded("9"), seeded("9"));
    assert_ne!(seeded("9"), seeded("10"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = scene(
        dir.path(),
        "p.json",
        r#"{"kind":"parametric","x":"u","y":"v","z":"u^2"}"#,
    );
    for args in [
        vec!["verify", &p, "--theorem", "K_affine"],
        vec!["verify", &p, "--theorem", "nonsense"],
        vec!["verify", &p, "--grid", "1x4"],
        vec!["verify", "--probe", "type9"],
        vec!["mesh", "/definitely/not/here.json"],
        vec!["frobnicate"],
    ] {
        assert_eq!(galileo(&args).status.code(), Some(2), "{args:?}");
    }
    let bad = scene(
        dir.path(),
        "bad.json",
        r#"{"kind":"parametric","x":"u","y":"v","z":"u+*v"}"#,
    );
    let out = galileo(&["verify", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 2"));
}

#[test]
fn failed_verdict_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = scene(dir.path(), "k.json", r#"{"kind":"constant_k_type1","k0":2.0,"c":1.0}"#);
    assert_eq!(galileo(&["verify", &p, "--expect", "k", "-q"]).status.code(), Some(0));
    assert_eq!(galileo(&["verify", &p, "--expect", "h", "-q"]).status.code(), Some(1));
    assert_eq!(
        galileo(&["verify", &p, "--theorem", "H_affine", "-q"]).status.code(),
        Some(2)
    );
    let t3 = scene(
        dir.path(),
        "t3.json",
        r#"{"kind":"type3","f1":"u^2","f2":"u^3","g1":"sin(v)","g2":"cos(v)"}"#,
    );
    assert_eq!(
        galileo(&["verify", &t3, "--theorem", "K_type3", "-q"]).status.code(),
        Some(1)
    );
}
