use std::process::{Command, Output};

fn satband(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satband")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn pattern_pd_text() {
    let o = satband(&["pattern", "1", "1", "0", "3", "--format", "pd"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("PD["));
    assert_eq!(text.matches("X(").count(), 7);
}

#[test]
fn even_q_is_rejected_with_the_constraint() {
    let o = satband(&["pattern", "1", "1", "0", "2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("q must be odd"));
    let o = satband(&["satellite", "0", "1", "0", "3"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("m must be nonzero"));
    let o = satband(&["satellite", "1", "1", "0", "1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("|q| must be at least 3"));
}

#[test]
fn negative_parameters_parse() {
    let o = satband(&["pattern", "-1", "2", "-2", "-3", "--format", "gauss"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn banded_certificate_is_trivial() {
    let o = satband(&["certify", "--band", "1", "1", "0", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "ReducedToZero");
    assert_eq!(v["simplifiedCrossings"], 0);
    assert!(v["moveTrace"].as_array().is_some_and(|t| !t.is_empty()));
}

#[test]
fn certify_fails_on_a_knotted_file() {
    let dir = std::env::temp_dir().join(format!("satband-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trefoil.pd");
    std::fs::write(&path, "PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap();
    let o = satband(&["certify", path.to_str().unwrap(), "--budget-nodes", "50"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "NontrivialWitness");
}

#[test]
fn invariants_of_the_pattern_and_satellite() {
    let o = satband(&["invariants", "--pattern", "1", "1", "0", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["components"], 1);
    assert_eq!(v["crossings"], 7);
    let o = satband(&["invariants", "1", "1", "0", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["determinant"], "3");
    assert_eq!(v["homology"], "Z/3");
}

#[test]
fn json_diagram_round_trips_and_renders() {
    let dir = std::env::temp_dir().join(format!("satband-cli-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pattern.json");
    let o = satband(&["pattern", "2", "1", "0", "3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let pd_direct = stdout(&satband(&["pattern", "2", "1", "0", "3"]));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["geometry"].is_object());
    let svg = satband(&["render", path.to_str().unwrap()]);
    assert!(svg.status.success());
    assert!(stdout(&svg).starts_with("<svg"));
    let inv = satband(&["invariants", path.to_str().unwrap()]);
    assert!(inv.status.success());
    assert!(pd_direct.starts_with("PD["));
}

#[test]
fn render_needs_geometry() {
    let dir = std::env::temp_dir().join(format!("satband-cli-render-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kink.pd");
    std::fs::write(&path, "PD[X(1,1,2,2)]").unwrap();
    let o = satband(&["render", path.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no geometry"));
}

#[test]
fn verify_small_grid() {
    let o = satband(&["verify", "--grid", "m=1,n=1,p=0,q=3", "--format", "json", "--jobs", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tuples"].as_array().unwrap().len(), 1);
    let table = stdout(&satband(&["verify", "--grid", "m=1,n=1,p=0,q=3"]));
    assert!(table.contains("1/1 tuples pass"));
}

#[test]
fn generalized_pattern() {
    let o = satband(&["generalized", "1", "1", "1", "1", "0", "3"]);
    assert!(o.status.success());
    let o = satband(&["generalized", "1", "1", "1", "0", "3"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("N must be even"));
}
