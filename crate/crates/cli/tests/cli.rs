use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tightbell::fixtures;
use tightbell::Scenario;
use tightbell_cli::commands::build_catalog;
use tightbell_cli::io::{fixture_file, state_file};
use tightbell_cli::RunConfig;
use tightbell_quantum::{ThreeQubitState, C64};

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> PathBuf {
    fixture_dir().join(name)
}

fn tightbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tightbell")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn expected_files() -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = fixtures::all()
        .iter()
        .map(|f| (format!("{}.json", f.name), fixture_file(f)))
        .collect();
    let pure = |s: ThreeQubitState| match s {
        ThreeQubitState::Pure(v) => v.iter().copied().collect::<Vec<C64>>(),
        ThreeQubitState::Mixed(_) => unreachable!(),
    };
    files.push(("ghz.txt".into(), state_file("(|000> + |111>)/sqrt(2)", &pure(ThreeQubitState::ghz()))));
    files.push(("product_000.txt".into(), state_file("|000>", &pure(ThreeQubitState::basis(0)))));
    let rho = ThreeQubitState::maximally_mixed().density_matrix();
    let flat: Vec<C64> = (0..64).map(|n| rho[(n / 8, n % 8)]).collect();
    files.push(("maximally_mixed.txt".into(), state_file("identity/8, row-major density matrix", &flat)));
    let mut zero = serde_json::json!({
        "name": "zero", "scenario": [3, 3, 3], "denom_exp": 2, "numerators": vec![0; 27]
    })
    .to_string();
    zero.push('\n');
    files.push(("zero.json".into(), zero));
    files
}

#[test]
fn fixture_files_match_builtins() {
    let bless = std::env::var_os("TIGHTBELL_BLESS").is_some();
    for (name, text) in expected_files() {
        let path = fixture(&name);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text, "{name} is stale");
    }
}

#[test]
fn verify_reports() {
    let o = tightbell(&["verify", "--tight", p(&fixture("nine_setting.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["admissible"], true);
    assert_eq!(v["certificate"]["is_facet"], true);
    assert_eq!(v["certificate"]["affine_rank"], 26);
    assert_eq!(v["delta_families"][0], serde_json::json!(["VI", "VII", "VII"]));

    let o = tightbell(&["verify", p(&fixture("zero.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["admissible"], false);

    let o = tightbell(&["verify", "--tight", p(&fixture("parent_2x4x4.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["scenario"], serde_json::json!([2, 4, 4]));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"scenario\": [3, 3, 3],\n  \"numerators\": [1, 2,]\n}\n").unwrap();
    let o = tightbell(&["verify", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");

    std::fs::write(&bad, "{\"scenario\": [3, 3, 3], \"numerators\": [9]}").unwrap();
    let err = String::from_utf8(tightbell(&["verify", p(&bad)]).stderr).unwrap();
    assert!(err.contains("field `numerators`"), "{err}");

    let state = dir.path().join("s.txt");
    std::fs::write(&state, "1 0\n0 0 0\n").unwrap();
    let o = tightbell(&["violate", p(&fixture("mabk.json")), p(&state)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 2"));

    std::fs::write(&state, "1 0\n".repeat(8)).unwrap();
    let o = tightbell(&["violate", p(&fixture("mabk.json")), p(&state)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("non-physical"));

    assert_eq!(tightbell(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tightbell(&["enumerate", "--scenario", "2x2x2x2"]).status.code(), Some(2));
    assert_eq!(tightbell(&["enumerate", "--scenario", "2x2"]).status.code(), Some(2));
}

#[test]
fn tighten_reports() {
    let o = tightbell(&["tighten", p(&fixture("chsh.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["certificate"]["affine_rank"], 8);
    let o = tightbell(&["tighten", p(&fixture("zero.json"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn enumerate_two_party_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cat.json");
    let o = tightbell(&["enumerate", "--scenario", "3x3", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 classes"));
    let first = std::fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["class_count"], 2);
    let names: Vec<_> = v["records"].as_array().unwrap().iter().map(|r| r["fixtures"][0].clone()).collect();
    assert!(names.contains(&"chsh".into()) && names.contains(&"trivial_2".into()));
    tightbell(&["enumerate", "--scenario", "3x3", "--out", p(&out)]);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
}

#[test]
fn enumerate_with_tiny_budget_is_flagged() {
    let o = tightbell(&["enumerate", "--scenario", "3x3x3", "--budget-nodes", "1000", "--restarts", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["complete"], false);
}

#[test]
fn three_party_catalog_is_deterministic() {
    let cfg = RunConfig {
        restarts: 8,
        ..RunConfig::default()
    };
    let s = Scenario::three_by_three_by_three();
    let (cat, a) = build_catalog(&s, &cfg).unwrap();
    let (_, b) = build_catalog(&s, &cfg).unwrap();
    assert_eq!(a, b);
    assert!(cat.complete);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let mut seen: Vec<String> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r["fixtures"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()))
        .collect();
    seen.sort();
    let mut want: Vec<String> = fixtures::three_party_signs().iter().map(|f| f.name.to_string()).collect();
    want.sort();
    assert_eq!(seen, want);
    for r in v["records"].as_array().unwrap() {
        let q = &r["ghz"];
        let (s, g) = (q["seesaw"].as_f64().unwrap(), q["grid"].as_f64().unwrap());
        assert!(s >= g - 1e-6 && s - g < 5e-3, "{r}");
    }
}

#[test]
fn violate_reports() {
    let ghz = fixture("ghz.txt");
    let o = tightbell(&["violate", p(&fixture("mabk.json")), p(&ghz), "--restarts", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["seesaw"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert_eq!(v["violation"], true);
    assert_eq!(v["seesaw"]["settings"].as_array().unwrap().len(), 3);

    let o = tightbell(&["violate", p(&fixture("nine_setting.json")), p(&ghz)]);
    let v = json(&o);
    assert!(v["seesaw"]["value"].as_f64().unwrap() > 1.0);
    assert!(v["grid_delta"].as_f64().unwrap() < 1e-3);
    let again = tightbell(&["violate", p(&fixture("nine_setting.json")), p(&ghz)]);
    assert_eq!(o.stdout, again.stdout);

    let o = tightbell(&["violate", p(&fixture("nine_setting.json")), p(&fixture("maximally_mixed.txt"))]);
    assert_eq!(json(&o)["seesaw"]["value"], 0.0);
}

#[test]
fn conditions_reports() {
    let o = tightbell(&["conditions", p(&fixture("product_000.txt")), "--restarts", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["nine_setting"]["max"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(v["nine_setting"]["sufficient"], true);
    let o = tightbell(&["conditions", p(&fixture("ghz.txt")), "--restarts", "8"]);
    let v = json(&o);
    assert!(v["nine_setting"]["max"].as_f64().unwrap() >= 4.0 - 1e-6);
    assert_eq!(v["nine_setting"]["sufficient"], false);
}
