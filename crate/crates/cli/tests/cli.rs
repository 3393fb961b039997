use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_misolab"));
    c.env_remove("MISOLAB_SEED");
    c
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn report(dir: &TempDir, args: &[&str]) -> (Output, Value) {
    let out = dir.path().join("report.json");
    let mut all: Vec<&str> = args.to_vec();
    let out_str = out.to_str().unwrap().to_string();
    all.push("--output");
    all.push(&out_str);
    let o = run(&all);
    let v = std::fs::read_to_string(&out).map(|s| serde_json::from_str(&s).unwrap()).unwrap_or(Value::Null);
    (o, v)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => !n.is_f64(),
        Value::Array(xs) => xs.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn jordan_block_has_order_three() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "j.json", r#"{"mode": "exact", "jordan_blocks": [{"z": 1, "size": 2}]}"#);
    let (o, v) = report(&dir, &["order", s(&f)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(v["verdict"]["kind"], "strict_order");
    assert_eq!(v["verdict"]["m"], 3);
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["survey"]["orbits"][1]["degree"], 2);
    assert!(no_floats(&v));
    assert!(String::from_utf8_lossy(&o.stdout).contains("strict 3-isometry"));
}

#[test]
fn identity_is_an_isometry() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.json", r#"{"mode": "exact", "matrix": [[1,0,0],[0,1,0],[0,0,1]]}"#);
    let (o, v) = report(&dir, &["order", s(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(v["verdict"]["m"], 1);
}

#[test]
fn worked_example_is_not_within_default_bound() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "w.json", r#"{"mode": "exact", "matrix": [["0+1i", 2], [0, "0-1i"]]}"#);
    let (o, v) = report(&dir, &["order", s(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(v["verdict"]["kind"], "not_within_bound");
    assert_eq!(v["verdict"]["m_max"], 5);
    assert!(v["verdict"]["witness"].is_object());
    assert_eq!(v["defect_norms"].as_array().unwrap().len(), 5);
    assert!(no_floats(&v));
}

#[test]
fn float_mode_reports_pairs_and_tolerances() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "w.json", r#"{"mode": "float", "matrix": [[[0, 1], 2], [0, [0, -1]]]}"#);
    let (o, v) = report(&dir, &["order", s(&f), "--mmax", "9"]);
    assert_eq!(code(&o), 0);
    assert_eq!(v["verdict"]["kind"], "not_within_bound");
    assert_eq!(v["parameters"]["tol"], 1e-8);
    assert!(v["defect_norms"][0]["max_abs_sq"].is_array());
}

#[test]
fn decompose_certifies_orthogonal_blocks() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "d.json",
        r#"{"mode": "exact", "jordan_blocks": [{"z": 1, "size": 2}, {"z": -1, "size": 1}]}"#,
    );
    let (o, v) = report(&dir, &["decompose", s(&f)]);
    assert_eq!(code(&o), 0);
    let d = &v["decomposition"];
    assert_eq!(d["certified"], true);
    assert_eq!(d["predicted_strict_order"], 3);
    assert_eq!(d["gram_residual"], "0");
    assert_eq!(d["reassembles"], true);
    assert_eq!(v["verdict"]["m"], 3);
    assert!(no_floats(&v));
}

#[test]
fn decompose_refuses_coupled_blocks() {
    let dir = TempDir::new().unwrap();
    // J(1,1) ⊕ J(-1,1) conjugated by a shear: eigenvectors (1,0) and (1,-2)
    let f = write(
        &dir,
        "d.json",
        r#"{"mode": "exact", "matrix": [[1, 1], [0, -1]], "eigen_hints": [1, -1]}"#,
    );
    let (o, v) = report(&dir, &["decompose", s(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(v["decomposition"]["certified"], false);
    assert_eq!(v["verdict"]["kind"], "not_within_bound");
}

#[test]
fn exact_decompose_without_hints_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d.json", r#"{"mode": "exact", "matrix": [[1, 1], [0, -1]]}"#);
    assert_eq!(code(&run(&["decompose", s(&f)])), 3);
}

#[test]
fn shift_from_linear_polynomial_is_a_2_isometry() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "s.json", r#"{"mode": "exact", "shift": {"polynomial": [1, 1], "prefix": 16}}"#);
    let (o, v) = report(&dir, &["shift", s(&f), "--m", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(v["verdict"]["kind"], "shift_order");
    assert_eq!(v["verdict"]["is_m_isometry"], true);
    assert_eq!(v["verdict"]["order"], 2);
    assert_eq!(v["shift"]["squared_weights"][0], "2");
    assert_eq!(v["shift"]["squared_weights"][1], "3/2");
    let (_, v) = report(&dir, &["shift", s(&f), "--m", "1"]);
    assert_eq!(v["verdict"]["is_m_isometry"], false);
}

#[test]
fn localization_shift_of_a_matrix() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "j.json", r#"{"mode": "exact", "jordan_blocks": [{"z": "0+1i", "size": 2}]}"#);
    let (o, v) = report(&dir, &["shift", s(&f), "--h", "0,1", "--m", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(v["verdict"]["is_m_isometry"], true);
    assert_eq!(v["verdict"]["order"], 3);
}

#[test]
fn ortho_on_the_worked_example() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "w.json", r#"{"mode": "exact", "matrix": [["0+1i", 2], [0, "0-1i"]]}"#);
    let (o, v) = report(
        &dir,
        &["ortho", s(&f), "--h1", "1,0", "--h2", "0+1i,1", "--z1", "0+1i", "--z2", "0-1i"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = &v["orthogonality"];
    assert_eq!(r["case"], "opposite");
    assert_eq!(r["sum_orbit_polynomial"], true);
    assert_eq!(r["re_inner_vanishes"], true);
    assert_eq!(r["mixed_inner_vanishes"], false);
    assert_eq!(r["eps_orbits_polynomial"], false);
    assert_eq!(r["consistent"], true);
    assert_eq!(r["conditions"], serde_json::json!([false, false, false, false, false]));
    assert!(no_floats(&v));
}

#[test]
fn ortho_rejects_off_circle_eigenvalues() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t.json", r#"{"mode": "exact", "matrix": [[2, 0], [0, 1]]}"#);
    let o = run(&["ortho", s(&f), "--h1", "1,0", "--h2", "0,1", "--z1", "2", "--z2", "1"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn perturb_equal_blocks() {
    let dir = TempDir::new().unwrap();
    let a = write(
        &dir,
        "a.json",
        r#"{"mode": "exact", "jordan_blocks": [{"z": 1, "size": 2}, {"z": 1, "size": 2}]}"#,
    );
    let n = write(
        &dir,
        "n.json",
        r#"{"mode": "exact", "matrix": [[0,0,1,0],[0,0,0,1],[0,0,0,0],[0,0,0,0]]}"#,
    );
    let (o, v) = report(&dir, &["perturb", s(&a), s(&n)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let p = &v["perturbation"];
    assert_eq!(p["m_a"], 3);
    assert_eq!(p["nu"], 2);
    assert_eq!(p["m_n_bound"], 5);
    assert_eq!(p["strict"], true);
    assert_eq!(v["verdict"]["m"], 5);
}

#[test]
fn perturb_rejects_non_commuting() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"mode": "exact", "matrix": [[1, 0], [0, -1]]}"#);
    let n = write(&dir, "n.json", r#"{"mode": "exact", "matrix": [[0, 1], [0, 0]]}"#);
    assert_eq!(code(&run(&["perturb", s(&a), s(&n)])), 3);
}

#[test]
fn verify_jordan_orders() {
    let o = run(&["verify", "--suite", "jordan-orders", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("suite jordan-orders: ok"));
}

#[test]
fn environment_seed_overrides_flag() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let o = bin()
        .env("MISOLAB_SEED", "11")
        .args(["verify", "--suite", "worked-example", "--seed", "7", "--output", s(&out)])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["parameters"]["seed"], 11);
    assert_eq!(v["suites"][0]["seed"], 11);
    let o = bin().env("MISOLAB_SEED", "x").args(["verify", "--suite", "worked-example"]).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn parse_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let cases = [
        r#"{"mode": "exact""#,
        r#"{"mode": "exact", "matrix": [[1, 0]]}"#,
        r#"{"mode": "exact", "matrix": [[1]], "jordan_blocks": [{"z": 1, "size": 1}]}"#,
        r#"{"mode": "exact"}"#,
        r#"{"mode": "exact", "jordan_blocks": [{"z": 1, "size": 0}]}"#,
        r#"{"mode": "exact", "matrix": [[0.5]]}"#,
        r#"{"mode": "exact", "matrix": [["1/0"]]}"#,
        r#"{"mode": "exact", "shift": {"polynomial": [0, 0], "prefix": 4}}"#,
        r#"{"mode": "complex", "matrix": [[1]]}"#,
        r#"{"mode": "exact", "matrix": [[1]], "extra": 1}"#,
    ];
    for (i, text) in cases.iter().enumerate() {
        let f = write(&dir, &format!("bad{i}.json"), text);
        assert_eq!(code(&run(&["order", s(&f)])), 2, "{text}");
    }
    assert_eq!(code(&run(&["order", "/nonexistent/spec.json"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "nope"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn non_positive_shift_polynomial_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "s.json", r#"{"mode": "exact", "shift": {"polynomial": [3, -1], "prefix": 8}}"#);
    assert_eq!(code(&run(&["shift", s(&f), "--m", "2"])), 3);
}

#[test]
fn exact_reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "d.json",
        r#"{"mode": "exact", "jordan_blocks": [{"z": "3/5+4/5i", "size": 3}, {"z": "0-1i", "size": 1}]}"#,
    );
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(code(&run(&["decompose", s(&f), "--output", s(&a)])), 0);
    assert_eq!(code(&run(&["decompose", s(&f), "--output", s(&b)])), 0);
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert!(no_floats(&v));
    assert_eq!(v["decomposition"]["blocks"][0]["z"], "3/5+4/5i");
    assert_eq!(v["verdict"]["m"], 5);
}

#[test]
fn json_to_stdout() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.json", r#"{"mode": "exact", "matrix": [[1]]}"#);
    let o = run(&["order", s(&f), "--output", "-"]);
    let text = String::from_utf8_lossy(&o.stdout);
    let start = text.find('{').unwrap();
    let v: Value = serde_json::from_str(&text[start..]).unwrap();
    assert_eq!(v["command"], "order");
}
