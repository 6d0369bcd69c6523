use std::process::{Command, Output};

use infharm::cli::{parse_matrix_json, write_matrix_json};
use serde_json::Value;
use tempfile::TempDir;

fn infharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infharm"))
        .args(args)
        .env_remove("INFHARM_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn check_reports_exact_residual_and_families() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a.json", "[[2,0,0],[0,3,0],[0,0,1]]");
    let out = infharm(&["check", "--domain", "sol", "--target", "sol", "--matrix", &m]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["harmonic"], true);
    assert_eq!(v["energy"], "14");
    assert_eq!(v["constant_energy"], true);
    assert_eq!(v["families"], serde_json::json!(["sol-diag-a33-plus-one"]));
    assert!(v["numeric_residual_max"].as_f64().unwrap() < 1e-6);
}

#[test]
fn non_harmonic_matrix_has_nonzero_tau() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a.json", "[[1,1,1],[0,1,0],[0,0,1]]");
    let out = infharm(&["classify", "--domain", "sol", "--target", "sol", "--matrix", &m]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["harmonic"], false);
    assert_eq!(v["families"], serde_json::json!([]));
    assert!(v["tau"].as_array().unwrap().iter().any(|t| t != "0"));
}

#[test]
fn text_format_and_output_file() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a.json", "[[1,1,1],[2,2,2]]");
    let target = dir.path().join("out.txt");
    let out = infharm(&[
        "energy", "--domain", "heisenberg", "--target", "euclidean:2", "--matrix", &m, "--format", "text",
        "--output", target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.contains("constant_energy: false"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("energy: ")));
}

#[test]
fn polynomial_components_and_custom_metric() {
    let dir = TempDir::new().unwrap();
    let sigma = write(&dir, "sigma.json", r#"["x", "y", "z + x*y/2"]"#);
    let out = infharm(&["isometry", "--domain", "heisenberg", "--target", "nil", "--matrix", &sigma]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["isometry"], true);
    assert_eq!(v["pullback"], v["domain_metric"]);

    let metric = write(
        &dir,
        "sol.toml",
        "name = \"sol-copy\"\ncoords = [\"x\", \"y\", \"z\"]\nlower = [[\"exp(2*z)\"], [\"0\", \"exp(-2*z)\"], [\"0\", \"0\", \"1\"]]\n",
    );
    let m = write(&dir, "a.json", "[[0,0,0],[0,0,0],[0,0,2]]");
    let spec = format!("file:{metric}");
    let out = infharm(&["check", "--domain", &spec, "--target", &spec, "--matrix", &m]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["harmonic"], true);
}

#[test]
fn enumerate_and_audit() {
    let out = infharm(&["enumerate", "--domain", "heisenberg", "--target", "euclidean:2", "--grid", "-1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["grid_size"], 729);
    assert_eq!(v["mismatch_count"], 0);

    let out = infharm(&["audit", "--domain", "sol", "--target", "nil", "--grid", "-1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank"]["max_rank"], 2);
    assert_eq!(v["every_rank2_nonconstant"], true);
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "[[1,2],[3]]");
    let good = write(&dir, "good.json", "[[1,0,0],[0,1,0],[0,0,1]]");
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", "--domain", "sol", "--target", "sol", "--matrix", &bad],
        vec!["check", "--domain", "solv", "--target", "sol", "--matrix", &good],
        vec!["check", "--domain", "sol", "--target", "sol", "--matrix", "/nonexistent/a.json"],
        vec!["classify", "--domain", "nil", "--target", "nil", "--matrix", &good],
        vec!["enumerate", "--domain", "sol", "--target", "sol", "--grid", "1,x"],
    ];
    for args in cases {
        let out = infharm(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_infharm"))
        .args(["enumerate", "--domain", "heisenberg", "--target", "euclidean:2", "--grid", "0,1"])
        .env("INFHARM_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matrix_json_round_trip() {
    for text in ["[[1,-2,0],[0,1,3]]", r#"[[1,"1/2"],["-3/4",0]]"#] {
        let a = parse_matrix_json(text).unwrap();
        let back = parse_matrix_json(&write_matrix_json(&a)).unwrap();
        assert_eq!(a, back);
        let compact: Value = serde_json::from_str(&write_matrix_json(&a)).unwrap();
        assert_eq!(compact, serde_json::from_str::<Value>(text).unwrap());
    }
}
