use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn toric3d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric3d")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a JSON report")
}

fn temp(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn classify_parallel_lines() {
    let cfg = data("parallel_lines.json");
    let o = toric3d(&["classify", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["verdict"], "NotGroundSector");
    assert_eq!(r["witness"]["kind"], "colliding");
    assert_eq!(r["witness"]["pair"], serde_json::json!([0, 1]));
    let o = toric3d(&["--expect-ground", "classify", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classify_ground_state_and_label() {
    let p = temp(
        "three_axes.json",
        r#"{"strings":[
            {"neg_period":"X+","pos_period":"X+","base":[0,0,0]},
            {"neg_period":"Y+","pos_period":"Y+","base":[5,0,3]},
            {"neg_period":"Z+","pos_period":"Z+","base":[0,7,0]}],
           "charges":[[1,1,1]]}"#,
    );
    let o = toric3d(&["--expect-ground", "classify", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["verdict"], "GroundState");
    assert_eq!(r["label"]["case"], "A");
    assert_eq!(r["label"]["charge_parity"], 1);
    assert_eq!(r["label"]["strings"][2]["halves"][0]["transverse"], serde_json::json!([0, 7]));
}

#[test]
fn surgery_gives_two_u_shapes() {
    let o = toric3d(&[
        "surgery",
        data("parallel_lines.json").to_str().unwrap(),
        "--surface",
        data("parallel_surface.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let strings = r["strings"].as_array().unwrap();
    assert_eq!(strings.len(), 2);
    for s in strings {
        assert_eq!(s["d_plus"], s["d_minus"]);
        assert_eq!(s["d_plus"].as_array().unwrap().len(), 1);
    }
    // the emitted configuration is itself a valid input
    let p = temp("after_surgery.json", &r["configuration"].to_string());
    let o = toric3d(&["classify", p.to_str().unwrap()]);
    assert_eq!(json(&o)["witness"]["kind"], "non_escaping");
}

#[test]
fn verify_gauge() {
    let o = toric3d(&["verify", "--n", "1", "--checks", "gauge"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["checks"][0]["gauge_rank"], 1);
    assert_eq!(r["pass"], true);
}

#[test]
fn verify_everything_at_two() {
    let o = toric3d(&["verify", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn energy_and_straighten() {
    let p = temp(
        "bump.json",
        r#"{"strings":[{"neg_period":"Z+","core":"X+Z+X-","pos_period":"Z+","base":[0,0,0]}],"charges":[[0,0,0]]}"#,
    );
    let o = toric3d(&["energy", p.to_str().unwrap(), "--region", "0,0,0:1,0,1"]);
    let r = json(&o);
    assert_eq!(r["flux_energy"], 6);
    assert_eq!(r["charge_energy"], 2);
    assert_eq!(r["region"]["dual"]["min_position"], serde_json::json!([0.5, 0.5, 0.5]));
    let o = toric3d(&["straighten", p.to_str().unwrap(), "--region", "0,0,-1:1,0,2", "--string", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = json(&o);
    let steps = r["results"][0]["steps"].as_array().unwrap();
    assert!(!steps.is_empty());
    let core = r["results"][0]["result"]["core"].as_str().unwrap();
    assert!(!core.is_empty() && core.replace("Z+", "").is_empty(), "{core}");

    let lines = data("parallel_lines.json");
    let r = json(&toric3d(&["energy", lines.to_str().unwrap(), "--region", "-4,-4,-4:4,4,4"]));
    assert_eq!(r["flux_energy"], 32);
}

#[test]
fn enumerate_two_strings() {
    let r = json(&toric3d(&["enumerate", "--strings", "2"]));
    assert_eq!(r["raw_count"], r["raw_count_by_masks"]);
    assert_eq!(r["cases"], serde_json::json!(["I", "II.A", "II.B", "II.C", "III.A", "III.B", "IV.A"]));
}

#[test]
fn errors_exit_two() {
    let p = temp(
        "bad_atom.json",
        "{\"strings\":[\n{\"neg_period\":\"Z+\",\"core\":\"Z+Q\",\"pos_period\":\"Z+\",\"base\":[0,0,0]}]}",
    );
    let o = toric3d(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let r = json(&o);
    assert_eq!(r["error"]["kind"], "SyntaxError");
    assert_eq!(r["error"]["line"], 2);
    assert_eq!(r["error"]["column"], 30);
    let p =
        temp("bad_path.json", r#"{"strings":[{"neg_period":"Z+","core":"X+X-","pos_period":"Z+","base":[0,0,0]}]}"#);
    let r = json(&toric3d(&["validate", p.to_str().unwrap()]));
    assert_eq!(r["error"]["kind"], "SemanticError");
    assert_eq!(r["error"]["index"], 0);
    assert_eq!(toric3d(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(toric3d(&["energy", p.to_str().unwrap(), "--region", "1,2"]).status.code(), Some(2));
    assert_eq!(toric3d(&["enumerate", "--strings", "4"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let cfg = data("parallel_lines.json");
    let a = toric3d(&["classify", cfg.to_str().unwrap()]);
    let b = toric3d(&["classify", cfg.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}
