use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

fn scratch(tag: &str) -> PathBuf {
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let n = COUNTER.fetch_add(1, Ordering::SeqCst);
    let dir = std::env::temp_dir().join(format!("supermap-cli-{}-{tag}-{n}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn supermap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supermap")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

const DUAL_NUMBERS: &str = r#"{
  "name": "dual",
  "algebra": { "family": "sl", "params": [2, 1] },
  "ideal": [ { "point": ["0"], "mult": 2 } ],
  "modules": [ { "kind": "natural", "name": "N", "point": ["0"] } ],
  "verify": [ { "check": "irreducible", "module": "N" }, { "check": "quasifinite", "module": "N" } ]
}"#;

#[test]
fn natural_module_over_dual_numbers_succeeds() {
    let dir = scratch("dual");
    let cfg = write_config(&dir, DUAL_NUMBERS);
    let out = dir.join("out");
    let o = supermap(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["passed"], true);
    assert_eq!(report["field"], "rational");
    assert_eq!(report["modules"][0]["dim"], 3);
    assert!(out.join("modules/N.json").exists());
    assert!(out.join("weights/N.csv").exists());
    assert!(out.join("structure.json").exists());
}

#[test]
fn json_format_prints_the_report() {
    let dir = scratch("json");
    let cfg = write_config(&dir, DUAL_NUMBERS);
    let o = supermap(&["--format", "json", "run", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["name"], "dual");
    assert_eq!(v["sections"].as_array().unwrap().len(), 2);
}

#[test]
fn non_equivariant_datum_is_a_validation_error() {
    let dir = scratch("noneq");
    let cfg = write_config(
        &dir,
        r#"{
          "algebra": { "family": "sl", "params": [2, 1] },
          "ring": { "kind": "laurent", "vars": 1 },
          "ideal": [ { "point": ["1"] }, { "point": ["-1"] } ],
          "group": { "orders": [2], "multiloop": true, "automorphisms": [["1", "-1", "1"]] },
          "modules": [ { "kind": "ev_gamma", "name": "G", "psi": [ { "point": ["1"], "module": "natural" } ] } ]
        }"#,
    );
    let o = supermap(&["run", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("equivariance"));
}

#[test]
fn empty_verification_list_succeeds() {
    let dir = scratch("empty");
    let cfg = write_config(&dir, r#"{ "algebra": { "family": "osp", "params": [1, 2] } }"#);
    assert_eq!(code(&supermap(&["run", cfg.to_str().unwrap()])), 0);
    let d = supermap(&["describe", cfg.to_str().unwrap()]);
    assert_eq!(code(&d), 0);
    assert!(String::from_utf8_lossy(&d.stdout).contains("empty plan"));
}

#[test]
fn exceptional_family_is_rejected() {
    let dir = scratch("f4");
    let cfg = write_config(&dir, r#"{ "algebra": { "family": "f4" } }"#);
    let o = supermap(&["run", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&supermap(&["describe", cfg.to_str().unwrap()])), 3);
}

#[test]
fn malformed_json_is_a_parse_error() {
    let dir = scratch("bad");
    let cfg = write_config(&dir, r#"{ "algebra": { "family": "sl", "params": [2, 1] "#);
    assert_eq!(code(&supermap(&["run", cfg.to_str().unwrap()])), 2);
    let cfg = write_config(&dir, r#"{ "algebra": { "family": "sl" }, "colour": 1 }"#);
    assert_eq!(code(&supermap(&["run", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&supermap(&["run", dir.join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn unknown_module_reference_is_rejected() {
    let dir = scratch("ref");
    let cfg = write_config(
        &dir,
        r#"{
          "algebra": { "family": "sl", "params": [2, 1] },
          "ideal": [ { "point": ["0"] } ],
          "verify": [ { "check": "irreducible", "module": "nowhere" } ]
        }"#,
    );
    assert_eq!(code(&supermap(&["run", cfg.to_str().unwrap()])), 3);
}

#[test]
fn failed_verification_exits_with_one() {
    let dir = scratch("fail");
    let cfg = write_config(
        &dir,
        r#"{
          "algebra": { "family": "sl", "params": [2, 1] },
          "ideal": [ { "point": ["0"] }, { "point": ["1"] } ],
          "modules": [
            { "kind": "natural", "name": "A", "point": ["0"] },
            { "kind": "natural", "name": "B", "point": ["1"] }
          ],
          "verify": [ { "check": "isomorphic", "modules": ["A", "B"] } ]
        }"#,
    );
    assert_eq!(code(&supermap(&["run", cfg.to_str().unwrap()])), 1);
}

#[test]
fn runs_are_byte_identical() {
    let dir = scratch("det");
    let cfg = write_config(
        &dir,
        r#"{
          "algebra": { "family": "sl", "params": [2, 1] },
          "ideal": [ { "point": ["0"] }, { "point": ["1"] } ],
          "modules": [
            { "kind": "natural", "name": "A", "point": ["0"] },
            { "kind": "natural", "name": "B", "point": ["1"] },
            { "kind": "tensor", "name": "AB", "factors": ["A", "B"] }
          ],
          "verify": [
            { "check": "structure" },
            { "check": "irreducible", "module": "AB" },
            { "check": "annihilator", "module": "AB" },
            { "check": "quasifinite", "module": "AB" }
          ]
        }"#,
    );
    let runs: Vec<PathBuf> = ["1", "4"]
        .iter()
        .map(|jobs| {
            let out = dir.join(format!("out{jobs}"));
            let o = supermap(&["--jobs", jobs, "run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
            assert_eq!(code(&o), 0);
            out
        })
        .collect();
    for rel in ["report.json", "structure.json", "modules/AB.json", "weights/AB.csv"] {
        let a = std::fs::read(runs[0].join(rel)).unwrap();
        let b = std::fs::read(runs[1].join(rel)).unwrap();
        assert_eq!(a, b, "{rel} differs between runs");
    }
}

#[test]
fn shipped_configs_pass() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["sl21_dual_numbers.json", "sl21_two_points.json", "osp12_evaluation.json", "twisted_sl21.json"] {
        let o = supermap(&["run", root.join(name).to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn multiloop_preset_describes_the_fixed_subalgebra() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/twisted_sl21.json");
    let o = supermap(&["--format", "json", "describe", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let plan: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(plan["fixed_subalgebra_dim"], 16);
    assert_eq!(plan["map_dim"], 32);
    assert_eq!(plan["group_order"], 2);
}
