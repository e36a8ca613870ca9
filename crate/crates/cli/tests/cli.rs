use std::process::{Command, Output};

use serde_json::Value;

fn modlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modlie"))
        .args(args)
        .env_remove("MODLIE_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn construct_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w21.json");
    let out = modlie(&["construct", "w-n-1", "--n", "2", "--p", "5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["dim"], 50);
    assert_eq!(v["grading_range"], serde_json::json!([-1, 7]));
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file["dim"], 50);
    assert_eq!(file["meta"]["family"], "w-n-1");

    let sl = json(&modlie(&["construct", "sl", "--n", "2", "--p", "5"]));
    assert_eq!(sl["dim"], 3);

    let w = json(&modlie(&["construct", "w-m-n", "--m", "1", "--n-vec", "2", "--p", "5"]));
    assert_eq!(w["dim"], 25);
    assert!(w["pmap"].is_null());
}

#[test]
fn construct_errors_exit_two() {
    assert_eq!(modlie(&["construct", "k-3-1", "--n", "2"]).status.code(), Some(2));
    assert_eq!(modlie(&["construct", "w-n-1", "--n", "4"]).status.code(), Some(2));
    assert_eq!(modlie(&["construct", "w-1-1", "--p", "4"]).status.code(), Some(2));
    assert_eq!(modlie(&["construct", "w-1-1", "--p", "3"]).status.code(), Some(2));
    assert_eq!(modlie(&["construct", "w-1-1", "--p", "3", "--allow-small-prime"]).status.code(), Some(0));
    assert_eq!(modlie(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn validate_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sl2.json");
    let p = path.to_str().unwrap();
    assert!(modlie(&["construct", "sl-n", "--n", "2", "--out", p]).status.success());
    let ok = modlie(&["validate", p]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["valid"], true);

    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let sc = file["sc"].as_array_mut().unwrap();
    sc.retain(|e| !(e[0] == 0 && e[1] == 2));
    std::fs::write(&path, file.to_string()).unwrap();
    let bad = modlie(&["validate", p]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["valid"], false);

    std::fs::write(&path, "{\"p\": 5}").unwrap();
    assert_eq!(modlie(&["validate", p]).status.code(), Some(2));
}

#[test]
fn weights_standard_and_search() {
    let v = json(&modlie(&["weights", "--algebra", "w-n-1", "--n", "2", "--torus", "standard"]));
    assert_eq!(v["table"].as_object().unwrap().len(), 25);
    assert_eq!(v["checks"]["coverage"]["full"], true);
    assert_eq!(v["checks"]["dimension_identity"]["formula"], "50 = 2 + 24*2");

    let sl = json(&modlie(&["weights", "--algebra", "sl-n", "--n", "2"]));
    assert_eq!(sl["checks"]["coverage"]["missing"], serde_json::json!(["(1)", "(4)"]));

    let s = json(&modlie(&["weights", "--algebra", "w-1-1", "--torus", "search"]));
    assert_eq!(s["torus"]["dim"], 1);
    assert_eq!(s["checks"]["dimension_identity"]["holds"], true);
}

#[test]
fn embed_reports_expansion() {
    let out = modlie(&["embed", "--m", "1", "--n-vec", "2", "--p", "5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["injective"], true);
    assert!(v["first_bracket_failure"].is_null());
    assert_eq!(v["envelope_dim"], 26);
    assert_eq!(v["d_expansion"]["blocks"][0]["signs"], serde_json::json!([1, -1]));
    assert_eq!(v["matrix"].as_array().unwrap().len(), 50);
}

#[test]
fn lift_prints_restriction() {
    let v = json(&modlie(&["lift", "--n", "2", "--p", "5", "--matrix", "1,2;0,1"]));
    assert_eq!(v["restriction_to_t0"], serde_json::json!([[1, 0], [3, 1]]));
    assert_eq!(v["convention"], "InverseTranspose");
    assert_eq!(v["checks"]["bracket_preserving"], true);
    assert_eq!(v["checks"]["stabilizes_c"], true);

    let one = json(&modlie(&["lift", "--matrix", "2"]));
    assert_eq!(one["restriction_to_t0"], serde_json::json!([[3]]));

    let swap = json(&modlie(&["lift", "--matrix", "0,1;1,0"]));
    assert_eq!(swap["checks"]["stabilizes_c"], false);

    assert_eq!(modlie(&["lift", "--matrix", "1,2;2,4"]).status.code(), Some(2));
    assert_eq!(modlie(&["lift", "--n", "3", "--matrix", "1,0;0,1"]).status.code(), Some(2));
}

#[test]
fn torus_search_is_seeded() {
    let a = modlie(&["torus-search", "--algebra", "w-n-1", "--n", "2", "--seed", "7"]);
    let b = Command::new(env!("CARGO_BIN_EXE_modlie"))
        .args(["torus-search", "--algebra", "w-n-1", "--n", "2"])
        .env("MODLIE_SEED", "7")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["torus"]["dim"], 2);
    assert_eq!(v["seed"], 7);
}

#[test]
fn verify_exit_codes_and_determinism() {
    let strip = |mut v: Value| {
        for c in v["checks"].as_array_mut().unwrap() {
            c["wall_time_ms"] = Value::from(0);
        }
        v
    };
    let a = modlie(&["verify", "fibers", "--p", "5"]);
    assert_eq!(a.status.code(), Some(0));
    let b = modlie(&["verify", "fibers", "--p", "5", "--jobs", "2"]);
    assert_eq!(strip(json(&a)), strip(json(&b)));
    let r = json(&a);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["suite"], "fibers");
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));

    let sylow = modlie(&["verify", "sylow", "--n", "2", "--p", "5"]);
    assert_eq!(sylow.status.code(), Some(1));
    let s = json(&sylow);
    let u = s["checks"].as_array().unwrap().iter().find(|c| c["id"] == "sylow/u-lifts-stabilize").unwrap();
    assert_eq!(u["status"], "pass");
    assert_eq!(u["witness"]["stabilizing"], 5);

    assert_eq!(modlie(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(modlie(&["verify", "axioms", "--jobs", "0"]).status.code(), Some(2));
}

#[test]
fn verify_skryabin_passes() {
    let out = modlie(&["verify", "skryabin", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
}
