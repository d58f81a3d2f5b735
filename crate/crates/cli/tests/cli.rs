use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn dihedral() -> Command {
    Command::cargo_bin("dihedral").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = dihedral().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn lists_twelve_algebras() {
    let out = stdout(&["algebras", "list"]);
    assert_eq!(out.lines().count(), 12);
    assert!(out.contains("D(3L)") && out.contains("dim=22"));
}

#[test]
fn show_accepts_loose_names() {
    let out = stdout(&["algebras", "show", "d3b21"]);
    assert!(out.starts_with("algebra \"D(3B)_{2,1}\""));
    assert!(out.contains("dim = 15"));
}

#[test]
fn classify_examples() {
    let v = json(&["classify", "-a", "D(3B)_{2,1}", "string:delta*gamma^-1", "--json"]);
    assert_eq!(v["report"]["ring"], "k");
    let v = json(&["classify", "-a", "D(3Q)", "band:3:1", "--p", "13", "--json"]);
    assert_eq!(v["report"]["ring"], "k[[t]]");
    assert_eq!(v["report"]["power_series"]["certificate"], "d3q-band");
    let v = json(&["classify", "-a", "D(2A)_0", "proj:0", "--json"]);
    assert_eq!(v["report"]["ring"], "versal-only");
    assert_eq!(v["report"]["stable_end_dim"], 0);
}

#[test]
fn classify_reports_obstruction_order() {
    let out = stdout(&["classify", "-a", "D(2A)_0", "simple:0"]);
    assert!(out.contains("R = k[[t]]/(t^2)"));
    assert!(out.contains("obstruction at order: 3"));
}

#[test]
fn bad_input_exits_nonzero() {
    dihedral().args(["classify", "-a", "D(3K)", "cube:1"]).assert().failure();
    dihedral().args(["classify", "-a", "D(9Z)", "simple:0"]).assert().failure();
    dihedral().args(["classify", "-a", "D(1)_1", "simple:0", "--p", "5"]).assert().failure();
    dihedral().args(["classify", "-a", "D(3K)", "string:beta*beta"]).assert().failure();
    dihedral().args(["census", "-a", "D(3K)", "--max-len", "13"]).assert().failure();
}

#[test]
fn json_reports_match_schemas() {
    let c = schema("classify.schema.json");
    for args in [
        ["classify", "-a", "D(1)_0", "simple:0"],
        ["classify", "-a", "D(3L)", "string:delta*beta*alpha^-1"],
        ["classify", "-a", "D(2A)_0", "string:alpha^-1"],
    ] {
        let mut a = args.to_vec();
        a.push("--json");
        assert_valid(&c, &json(&a));
    }
    assert_valid(&schema("census.schema.json"), &json(&["census", "-a", "D(2A)_0", "--max-len", "4", "--json"]));
}

#[test]
fn reproduce_exits_zero_and_validates() {
    let v = json(&["reproduce", "--p", "5", "--json"]);
    assert_eq!(v["passed"], true);
    assert_valid(&schema("reproduce.schema.json"), &v);
}

#[test]
fn reproduce_at_three_notes_vacuity() {
    let out = stdout(&["reproduce", "--p", "3"]);
    assert!(out.contains("exception set is empty"));
    assert_eq!(out.matches("[PASS]").count(), 7);
}

#[test]
fn census_csv_is_deterministic() {
    let args = ["census", "-a", "D(3A)_2", "--max-len", "5"];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    assert_eq!(a.lines().next().unwrap(), "algebra,p,module,dims,stable_end_dim,ext1,verdict,orbit");
}

#[test]
fn census_of_3k_has_rigid_simples() {
    let v = json(&["census", "-a", "D(3K)", "--max-len", "4", "--json"]);
    for s in ["simple:0", "simple:1", "simple:2"] {
        let row = v["rows"].as_array().unwrap().iter().find(|r| r["module"] == s).unwrap();
        assert_eq!(row["verdict"], "k");
    }
}

#[test]
fn census_shows_wide_tubes_in_2a() {
    let v = json(&["census", "-a", "D(2A)_0", "--max-len", "6", "--json"]);
    let rows = v["rows"].as_array().unwrap();
    for w in ["alpha", "alpha^-1*gamma", "alpha^-1*gamma*beta*alpha^-1"] {
        let row = rows
            .iter()
            .find(|r| r["module"] == format!("string:{w}") || r["module"] == format!("string:{}", invert(w)))
            .unwrap_or_else(|| panic!("{w} missing"));
        assert!(row["stable_end_dim"].as_u64().unwrap() > 1, "{w}");
    }
}

fn invert(w: &str) -> String {
    w.split('*')
        .rev()
        .map(|l| match l.strip_suffix("^-1") {
            Some(a) => a.to_string(),
            None => format!("{l}^-1"),
        })
        .collect::<Vec<_>>()
        .join("*")
}

#[test]
fn classify_agrees_with_census() {
    let v = json(&["census", "-a", "D(3D)_2", "--max-len", "3", "--json"]);
    for row in v["rows"].as_array().unwrap().iter().step_by(4) {
        let m = row["module"].as_str().unwrap();
        let c = json(&["classify", "-a", "D(3D)_2", m, "--json"]);
        assert_eq!(c["report"]["ring"], row["ring"], "{m}");
        assert_eq!(c["report"]["stable_end_dim"], row["stable_end_dim"], "{m}");
        assert_eq!(c["report"]["ext1"], row["ext1"], "{m}");
    }
}

#[test]
fn module_json_round_trips_through_files() {
    let dir = std::env::temp_dir().join(format!("dihedral-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    let text = stdout(&["module", "-a", "D(3Q)", "string", "delta*rho^-1*beta*alpha^-1", "--json"]);
    std::fs::write(&path, text).unwrap();
    let arg = format!("file:{}", path.display());
    let out = stdout(&["stend", "-a", "D(3Q)", &arg]);
    assert_eq!(out.trim(), "1");
    let c = json(&["classify", "-a", "D(3Q)", &arg, "--json"]);
    assert_eq!(c["report"]["ring"], "k[[t]]");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn algebra_file_flag() {
    let dir = std::env::temp_dir().join(format!("dihedral-alg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kronecker.alg");
    std::fs::write(
        &path,
        "algebra \"local\"\nchar any\nvertex 0\narrow x 0 0\narrow y 0 0\nrelations\n  x*x\n  y*y\n  x*y - y*x\n",
    )
    .unwrap();
    let out = stdout(&["algebras", "show", "--algebra-file", path.to_str().unwrap()]);
    assert!(out.contains("dim = 4"));
    let out = stdout(&["ext", "--algebra-file", path.to_str().unwrap(), "simple:0"]);
    assert_eq!(out.trim(), "2");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn omega_steps_and_hom() {
    let out = stdout(&["omega", "-a", "D(1)_0", "simple:0", "--steps", "2"]);
    assert!(out.contains("Omega^1: dims [3]"));
    let out = stdout(&["hom", "-a", "D(2A)_0", "simple:0", "proj:0"]);
    assert!(out.contains("dim Hom = 1"));
}
