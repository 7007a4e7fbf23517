use std::path::Path;
use std::process::{Command, Output};

fn porism(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_porism"))
        .args(args)
        .env_remove("PORISM_TOLERANCE_PROFILE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv_text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let body = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, body)
}

const REF: [&str; 8] = ["--n", "3", "--r", "1", "--x0", "0.1", "--lambda", "1"];

#[test]
fn sweep_matches_golden_fixture() {
    let mut args = vec!["sweep"];
    args.extend(REF);
    args.extend(["--samples", "360"]);
    let out = porism(&args);
    assert!(out.status.success());
    let fixture =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/sweep_n3_r1_x0.1_l1.csv"))
            .unwrap();
    let (h1, got) = rows(&stdout(&out));
    let (h2, want) = rows(&fixture);
    assert_eq!(h1, h2);
    assert_eq!(got.len(), 360);
    assert_eq!(want.len(), 360);
    for (g, w) in got.iter().zip(&want) {
        for (a, b) in g.iter().zip(w) {
            let (a, b): (f64, f64) = (a.parse().unwrap(), b.parse().unwrap());
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
        }
    }
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let mut args = vec!["sweep"];
    args.extend(["--n", "5", "--r", "1.2", "--x0", "1.9", "--lambda", "0.8", "--samples", "90"]);
    let a = porism(&args);
    let b = porism(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn centered_sweep_has_constant_tau() {
    let out = porism(&["sweep", "--n", "3", "--r", "1", "--x0", "0", "--lambda", "1", "--samples", "36"]);
    assert!(out.status.success());
    let (header, body) = rows(&stdout(&out));
    let col = header.iter().position(|h| h == "tau").unwrap();
    for row in body {
        let tau: f64 = row[col].parse().unwrap();
        assert!((tau - 3f64.sqrt()).abs() < 1e-13, "{tau}");
    }
}

#[test]
fn sweep_columns_for_larger_n() {
    let out = porism(&["sweep", "--n", "6", "--r", "1", "--x0", "0.2", "--lambda", "1", "--samples", "8"]);
    let (header, body) = rows(&stdout(&out));
    assert_eq!(header.len(), 1 + 12 + 12 + 3 + 1 + 4);
    assert_eq!(body.len(), 8);
    assert!(body.iter().all(|r| r.iter().all(|c| !c.is_empty())));
}

#[test]
fn config_errors_exit_2() {
    let missing = porism(&["sweep", "--n", "3", "--r", "1", "--x0", "0.1"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("lambda"));

    let invalid = porism(&["sweep", "--n", "2", "--r", "1", "--x0", "0.1", "--lambda", "1"]);
    assert_eq!(invalid.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&invalid.stderr).contains("N must be at least 3"));

    let on_incircle = porism(&["sweep", "--n", "3", "--r", "1", "--x0", "0.5", "--lambda", "1"]);
    assert_eq!(on_incircle.status.code(), Some(2));

    let center = porism(&["locus", "--center", "999"]);
    assert_eq!(center.status.code(), Some(2));

    let n4 = porism(&["locus", "--center", "2", "--n", "4", "--r", "1", "--x0", "0.1", "--lambda", "1"]);
    assert_eq!(n4.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"n": 3, "r": 1, "x0": 0.3, "lambda": 1}"#).unwrap();
    let p = path.to_str().unwrap();
    let from_file = porism(&["sweep", "--config", p, "--samples", "4"]);
    let from_flags = porism(&["sweep", "--n", "3", "--r", "1", "--x0", "0.3", "--lambda", "1", "--samples", "4"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flags.stdout);
    let overridden = porism(&["sweep", "--config", p, "--x0", "0", "--samples", "4"]);
    let centered = porism(&["sweep", "--n", "3", "--r", "1", "--x0", "0", "--lambda", "1", "--samples", "4"]);
    assert_eq!(overridden.stdout, centered.stdout);

    std::fs::write(&path, r#"{"n": 3, "r": 1, "x0": 0.3, "lambda": 1, "colour": 2}"#).unwrap();
    assert_eq!(porism(&["sweep", "--config", p]).status.code(), Some(2));
}

#[test]
fn bad_profile_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_porism"))
        .args(["sweep", "--samples", "4"])
        .env("PORISM_TOLERANCE_PROFILE", "lenient")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let strict = Command::new(env!("CARGO_BIN_EXE_porism"))
        .args(["locus", "--center", "3", "--classify"])
        .env("PORISM_TOLERANCE_PROFILE", "strict")
        .output()
        .unwrap();
    assert!(strict.status.success());
}

fn classification(args: &[&str]) -> serde_json::Value {
    let out = porism(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    serde_json::from_str(first.strip_prefix("# ").expect("comment header")).unwrap()
}

#[test]
fn locus_classification_header() {
    let c2 = classification(&["locus", "--center", "2", "--classify"]);
    assert_eq!(c2["kind"], "Conic");
    assert_eq!(c2["center"], 2);
    let c20 = classification(&["locus", "--center", "20", "--classify"]);
    assert_eq!(c20["kind"], "Segment");
    for p in c20["params"]["segment"].as_array().unwrap() {
        assert!(p["y"].as_f64().unwrap().abs() < 1e-9);
    }
    let c15 = classification(&["locus", "--center", "15", "--classify"]);
    assert_eq!(c15["kind"], "Circle");
}

#[test]
fn locus_csv_rows() {
    let out = porism(&["locus", "--center", "4", "--samples", "48"]);
    let (header, body) = rows(&stdout(&out));
    assert_eq!(header, ["t", "x", "y"]);
    assert_eq!(body.len(), 48);
    assert_eq!(porism(&["locus", "--center", "4", "--samples", "8"]).status.code(), Some(2));
}

fn assert_layers(svg: &str) {
    let doc = roxmltree::Document::parse(svg).expect("well-formed XML");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.attribute("version"), Some("1.1"));
    for layer in ["outer-conic", "caustic", "chain", "locus"] {
        let g = doc.descendants().find(|n| n.attribute("id") == Some(layer)).unwrap_or_else(|| panic!("layer {layer}"));
        assert_eq!(g.tag_name().name(), "g");
        assert!(g.children().any(|c| c.is_element()), "layer {layer} is empty");
    }
}

#[test]
fn render_regimes_are_valid_svg() {
    for cfg in [
        ["--n", "3", "--r", "1", "--x0", "0.1", "--lambda", "1"],
        ["--n", "3", "--r", "1", "--x0", "0.7", "--lambda", "1"],
        ["--n", "3", "--r", "1", "--x0", "0.1339745962155614", "--lambda", "1"],
    ] {
        let mut args = vec!["render"];
        args.extend(cfg);
        args.extend(["--center", "4", "--samples", "90"]);
        let out = porism(&args);
        assert!(out.status.success());
        assert_layers(&stdout(&out));
    }
    let hexagon = porism(&["render", "--n", "6", "--r", "1", "--x0", "0.3", "--lambda", "1"]);
    assert!(hexagon.status.success());
    let doc_text = stdout(&hexagon);
    let doc = roxmltree::Document::parse(&doc_text).unwrap();
    let chain = doc.descendants().find(|n| n.attribute("id") == Some("chain")).unwrap();
    assert_eq!(chain.children().filter(|c| c.has_tag_name("circle")).count(), 6);
}

#[test]
fn locus_svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("x3.svg");
    let out = porism(&["locus", "--center", "3", "--samples", "90", "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success());
    assert_layers(&std::fs::read_to_string(&svg).unwrap());
}

#[test]
fn verify_single_claim_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = porism(&["verify", "--only", "descartes", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("descartes"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 1);
    assert_eq!(arr[0]["id"], "descartes");
    assert_eq!(arr[0]["status"], "PASS");
}

#[test]
fn verify_input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"configs\": [").unwrap();
    assert_eq!(porism(&["verify", "--suite", bad.to_str().unwrap()]).status.code(), Some(2));
    let narrow = dir.path().join("narrow.json");
    std::fs::write(&narrow, r#"{"configs": [{"n": 3, "r": 1, "x0": 0.1, "lambda": 1}]}"#).unwrap();
    assert_eq!(porism(&["verify", "--suite", narrow.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(porism(&["verify", "--only", "no_such_claim"]).status.code(), Some(2));
    assert_eq!(porism(&["verify", "--suite", "/nonexistent/suite.json"]).status.code(), Some(2));
}

#[test]
fn verify_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let tight = dir.path().join("tight.json");
    let configs = r#"[{"n": 3, "r": 1, "x0": 0.1, "lambda": 1}]"#;
    std::fs::write(&tight, format!(r#"{{"configs": {configs}, "samples": 64, "tolerances": {{"geometry": 0.0}}}}"#))
        .unwrap();
    let out = porism(&["verify", "--suite", tight.to_str().unwrap(), "--only", "descartes"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn full_verify_is_deterministic_and_passes() {
    let a = porism(&["verify", "--json", "-"]);
    let b = porism(&["verify", "--json", "-"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn clap_usage_errors_exit_2() {
    assert_eq!(porism(&["sweep", "--samples", "many"]).status.code(), Some(2));
    assert_eq!(porism(&["frobnicate"]).status.code(), Some(2));
}
