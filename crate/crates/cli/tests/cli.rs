use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn ptolemy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptolemy")).args(args).output().expect("spawn")
}

fn out_dir(dir: &Path) -> String {
    dir.to_string_lossy().into_owned()
}

fn sorted_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn pipeline_runs_are_byte_identical() {
    let m009 = fixture("m009.json");
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = ptolemy(&["pipeline", m009.to_str().unwrap(), "--mode", "psl2", "--out", &out_dir(d.path())]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (fa, fb) = (sorted_files(a.path()), sorted_files(b.path()));
    assert_eq!(fa.len(), 10);
    assert_eq!(fa, fb);
    assert!(fa.iter().all(|(n, _)| !n.ends_with(".tmp")));
}

#[test]
fn solving_from_ideal_artifact_reproduces_solutions() {
    let m009 = fixture("m009.json");
    let d = tempfile::tempdir().unwrap();
    let dir = out_dir(d.path());
    let o = ptolemy(&["ideal", m009.to_str().unwrap(), "--mode", "psl2", "--reduced", "--out", &dir]);
    assert!(o.status.success());
    let o = ptolemy(&["solve", m009.to_str().unwrap(), "--mode", "psl2", "--out", &dir]);
    assert!(o.status.success());
    for c in 1..=3 {
        let ideal = d.path().join(format!("m009.ideal-reduced.psl2-c{c}.json"));
        let direct = fs::read(d.path().join(format!("m009.solutions.psl2-c{c}.json"))).unwrap();
        let o = ptolemy(&["solve", "--from", ideal.to_str().unwrap()]);
        assert!(o.status.success());
        assert_eq!(o.stdout, direct, "class {c}");
    }
}

#[test]
fn reps_rebuilt_from_solutions_match() {
    let m009 = fixture("m009.json");
    let d = tempfile::tempdir().unwrap();
    let dir = out_dir(d.path());
    let o = ptolemy(&["pipeline", m009.to_str().unwrap(), "--mode", "psl2", "--class", "2", "--out", &dir]);
    assert!(o.status.success());
    let sols = d.path().join("m009.solutions.psl2-c2.json");
    let o = ptolemy(&["reps", m009.to_str().unwrap(), "--mode", "psl2", "--class", "2", "--from", sols.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(o.stdout, fs::read(d.path().join("m009.reps.psl2-c2.json")).unwrap());
}

#[test]
fn sl2_variety_of_m009_is_empty() {
    let o = ptolemy(&["solve", fixture("m009.json").to_str().unwrap(), "--mode", "sl2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["status"] == "empty"));
}

#[test]
fn enhanced_apoly_of_m009() {
    let d = tempfile::tempdir().unwrap();
    let dir = out_dir(d.path());
    let o = ptolemy(&["pipeline", fixture("m009.json").to_str().unwrap(), "--mode", "enhanced", "--apoly", "--out", &dir]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value =
        serde_json::from_slice(&fs::read(d.path().join("m009.apoly.enhanced.json")).unwrap()).unwrap();
    let shown = v["display"].as_str().unwrap();
    assert_eq!(shown, "m^6*l - 2*m^4*l - m^3*l^2 - m^3 - 2*m^2*l + l");
}

#[test]
fn malformed_input_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let bad = d.path().join("bad.json");
    fs::write(&bad, "{\"tetrahedra\": 3").unwrap();
    let o = ptolemy(&["parse", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "input");
    let o = ptolemy(&["ideal", fixture("m009.json").to_str().unwrap(), "--mode", "gl3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tiny_budget_exits_3() {
    let o = ptolemy(&["--budget", "2", "solve", fixture("m009.json").to_str().unwrap(), "--mode", "enhanced"]);
    assert_eq!(o.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "budget");
}

#[test]
fn tampered_solution_exits_4() {
    let m009 = fixture("m009.json");
    let d = tempfile::tempdir().unwrap();
    let o = ptolemy(&["solve", m009.to_str().unwrap(), "--mode", "psl2", "--class", "3"]);
    assert!(o.status.success());
    let mut sols: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let coords = sols
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|r| r["status"] == "points")
        .map(|r| &mut r["points"][0]["coordinates"])
        .unwrap();
    let key = coords.as_object().unwrap().keys().next_back().unwrap().clone();
    coords[&key] = serde_json::json!(["3"]);
    let path = d.path().join("tampered.json");
    fs::write(&path, serde_json::to_vec(&sols).unwrap()).unwrap();
    let o = ptolemy(&["reps", m009.to_str().unwrap(), "--mode", "psl2", "--class", "3", "--from", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}
