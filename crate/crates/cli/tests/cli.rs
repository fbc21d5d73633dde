use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ghom::groupoid::{cyclic_group, pair_groupoid, trivial_group, Functor, GSet};
use ghom::invsemi::symmetric_inverse_monoid;
use ghom::schema;
use tempfile::TempDir;

fn ghom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghom")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, schema::to_string(value)).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn homology_tables() {
    let dir = TempDir::new().unwrap();
    let z2 = write(dir.path(), "z2.json", &cyclic_group(2).to_data());
    let o = ghom(&["homology", s(&z2), "--max-degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "H0: Z\nH1: Z/2\nH2: 0\nH3: Z/2\n");

    let p2 = write(dir.path(), "p2.json", &pair_groupoid(2).to_data());
    let o = ghom(&["homology", s(&p2), "--max-degree", "2"]);
    assert_eq!(stdout(&o), "H0: Z\nH1: 0\nH2: 0\n");

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"objects":[],"arrows":[],"mul":[],"inv":{}}"#).unwrap();
    let o = ghom(&["homology", s(&empty), "--max-degree", "2"]);
    assert_eq!(stdout(&o), "H0: 0\nH1: 0\nH2: 0\n");
}

#[test]
fn homology_output_is_deterministic_json() {
    let dir = TempDir::new().unwrap();
    let z3 = write(dir.path(), "z3.json", &cyclic_group(3).to_data());
    let a = ghom(&["homology", s(&z3), "--format", "json"]);
    let b = ghom(&["homology", s(&z3), "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["homology"][1]["group"], "Z/3");
    assert_eq!(v["homology"][2]["group"], "0");
    assert_eq!(v["homology"].as_array().unwrap().len(), 5);
}

#[test]
fn twisted_coefficients() {
    let dir = TempDir::new().unwrap();
    let z2 = write(dir.path(), "z2.json", &cyclic_group(2).to_data());
    let sign = dir.path().join("sign.json");
    std::fs::write(&sign, r#"{"groupoid":"z2","fibers":{"*":1},"action":{"0":[[1]],"1":[[-1]]}}"#).unwrap();
    let o = ghom(&["homology", s(&z2), "--coefficients", s(&sign), "--max-degree", "2"]);
    assert_eq!(stdout(&o), "H0: Z/2\nH1: 0\nH2: Z/2\n", "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"objects\": [\n  1,").unwrap();
    let o = ghom(&["homology", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    // Composition table missing products.
    let broken = dir.path().join("broken.json");
    std::fs::write(
        &broken,
        r#"{"objects":["x"],"arrows":[{"id":"e","src":"x","dst":"x"},{"id":"a","src":"x","dst":"x"}],"mul":[["e","e","e"]],"inv":{"e":"e","a":"a"}}"#,
    )
    .unwrap();
    assert_eq!(ghom(&["homology", s(&broken)]).status.code(), Some(1));

    let z2 = write(dir.path(), "z2.json", &cyclic_group(2).to_data());
    let wrong = dir.path().join("wrong.json");
    std::fs::write(&wrong, r#"{"groupoid":"other","fibers":{"*":1},"action":{"0":[[1]],"1":[[1]]}}"#).unwrap();
    assert_eq!(ghom(&["homology", s(&z2), "--coefficients", s(&wrong)]).status.code(), Some(1));
}

#[test]
fn induced_map_from_collapse_and_identity() {
    let dir = TempDir::new().unwrap();
    let (p2, one) = (pair_groupoid(2), trivial_group());
    let gp = write(dir.path(), "p2.json", &p2.to_data());
    let go = write(dir.path(), "one.json", &one.to_data());
    let phi = Functor::new(&p2, &one, vec![0; 2], vec![0; 4]).unwrap();
    let fp = write(dir.path(), "collapse.json", &phi.to_data(&p2, &one, "p2", "one"));
    let o = ghom(&[
        "induced-map",
        "--from-homomorphism",
        s(&fp),
        "--groupoid",
        s(&gp),
        "--groupoid",
        &format!("one={}", s(&go)),
        "--max-degree",
        "0",
    ]);
    assert_eq!(stdout(&o), "H0: Z -> Z\n  [1]\n", "{}", String::from_utf8_lossy(&o.stderr));

    let z3 = cyclic_group(3);
    let gz = write(dir.path(), "z3.json", &z3.to_data());
    let id = ghom::correspondence::EtaleCorrespondence::identity(&z3);
    let cp = write(dir.path(), "id.json", &id.to_data("z3", "z3"));
    let o = ghom(&["induced-map", s(&cp), "--groupoid", s(&gz), "--min-degree", "1", "--max-degree", "3"]);
    assert_eq!(stdout(&o), "H1: Z/3 -> Z/3\n  [1]\nH2: 0 -> 0\nH3: Z/3 -> Z/3\n  [1]\n");

    // Unresolved groupoid name.
    let o = ghom(&["induced-map", s(&cp)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn induced_map_from_action() {
    let dir = TempDir::new().unwrap();
    let z2 = cyclic_group(2);
    let gz = write(dir.path(), "z2.json", &z2.to_data());
    let x = write(dir.path(), "x.json", &GSet::objects(&z2).to_data(&z2, "z2"));
    let o = ghom(&["induced-map", "--from-action", s(&x), "--groupoid", s(&gz), "--max-degree", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["maps"][0]["matrix"], serde_json::json!([[1]]));
    assert_eq!(v["maps"][1]["source"], "Z/2");
}

#[test]
fn induced_map_omega_s_is_unimodular() {
    let dir = TempDir::new().unwrap();
    let sp = write(dir.path(), "sim2.json", &symmetric_inverse_monoid(2).unwrap().to_data());
    let o = ghom(&["induced-map", "--omega-s", s(&sp), "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("H0: Z^2 -> Z^2\n"), "{out}");
    assert_eq!(out.matches("chain map: unimodular").count(), 3, "{out}");
}

#[test]
fn verify_suites_and_replay() {
    let o = ghom(&["verify", "--suite", "homotopy"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "homotopy: pass (10 cases)\n");

    let o = ghom(&["verify", "--suite", "functoriality", "--seed", "42", "--cases", "5"]);
    assert_eq!(o.status.code(), Some(0));

    let dir = TempDir::new().unwrap();
    let dump = dir.path().join("dump");
    let o = ghom(&["verify", "--suite", "homotopy", "--inject-face-sign-bug", "--cases", "2", "--dump-dir", s(&dump)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("homotopy: FAIL"));
    let first = dump.join("homotopy-0.json");
    let o = ghom(&["verify", "--replay", s(&first)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("replay: fail"));

    assert_eq!(ghom(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}
