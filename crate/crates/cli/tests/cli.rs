use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SQUARE: &str = r#"{"dim": 2, "closed": true, "mode": "rational",
 "params": ["0", "1/4", "1/2", "3/4"],
 "points": [["1","0","1","0"], ["0","1","0","-1"], ["-1","0","-1","0"], ["0","-1","0","1"]]}"#;

const Z2_DZ1: &str = r#"{"nvars": 2, "components": [
 {"nvars": 2, "terms": [{"exp": [0, 1], "coef": ["1", "0"]}]},
 {"nvars": 2, "terms": []}]}"#;

const BALL: &str = r#"{"center": ["1", "0", "1", "0"], "radius": "1/4"}"#;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvehull"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("square.json"), SQUARE).unwrap();
    fs::write(dir.path().join("form.json"), Z2_DZ1).unwrap();
    fs::write(dir.path().join("ball.json"), BALL).unwrap();
    dir
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn certify_conjugate_square_in_both_modes() {
    let dir = setup();
    let v = stdout_json(&run(&["certify", "--curve", "square.json", "--form", "form.json"], dir.path()));
    // ∮ z̄ dz = 2i · area, and the square has area 2.
    assert_eq!(v["result"]["integral"], serde_json::json!(["0/1", "4/1"]));
    assert_eq!(v["result"]["verdict"], "certified-polynomially-convex");
    assert_eq!(v["mode"], "rational");
    assert!(v["inputs"]["curve"].as_str().unwrap().len() == 64);

    let f = stdout_json(&run(&["--mode", "f64", "certify", "--curve", "square.json", "--form", "form.json"], dir.path()));
    assert_eq!(f["result"]["integral"][1].as_f64(), Some(4.0));
}

#[test]
fn perturb_is_byte_identical_under_a_fixed_seed() {
    let dir = setup();
    let args = |out: &'static str| {
        ["perturb", "--curve", "square.json", "--eps", "1/10", "--ball", "ball.json", "--seed", "5", "--out", out]
    };
    assert!(run(&args("a"), dir.path()).status.success());
    assert!(run(&args("b"), dir.path()).status.success());
    let a = fs::read(dir.path().join("a/perturb.json")).unwrap();
    let b = fs::read(dir.path().join("b/perturb.json")).unwrap();
    assert_eq!(a, b);
    assert_eq!(fs::read(dir.path().join("a/perturb.svg")).unwrap(), fs::read(dir.path().join("b/perturb.svg")).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["result"]["certificate"]["verdict"], "certified-polynomially-convex");
}

#[test]
fn demo_slit_writes_table_plot_and_manifest() {
    let dir = setup();
    let out = run(&["demo", "slit", "--k", "2,4", "--n", "128", "--out", "slit"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("slit/slit.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("k,mesh,dh_curve_circle,dh_hull_circle,dh_hull_disc,dist_zero_hull,winding_zero")
    );
    assert_eq!(lines.count(), 2);
    let svg = fs::read_to_string(dir.path().join("slit/slit.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let manifest: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("slit/slit.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "demo slit");
}

#[test]
fn exit_codes_follow_error_kinds() {
    let dir = setup();
    fs::write(dir.path().join("broken.json"), "{ not json").unwrap();
    // Figure-eight: vertices 0..3 cross at the origin.
    fs::write(
        dir.path().join("eight.json"),
        r#"{"dim": 1, "closed": true, "params": ["0", "1/4", "1/2", "3/4"],
            "points": [["1","1"], ["-1","-1"], ["1","-1"], ["-1","1"]]}"#,
    )
    .unwrap();
    fs::write(
        dir.path().join("z0.json"),
        r#"{"nvars": 1, "components": [{"nvars": 1, "terms": [{"exp": [0], "coef": ["1", "0"]}]}]}"#,
    )
    .unwrap();
    let code = |args: &[&str]| run(args, dir.path()).status.code();

    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["no-such-command"]), Some(1));
    assert_eq!(code(&["certify", "--curve", "broken.json", "--form", "form.json"]), Some(1));
    assert_eq!(code(&["certify", "--curve", "missing.json", "--form", "form.json"]), Some(1));
    assert_eq!(code(&["certify", "--curve", "eight.json", "--form", "z0.json"]), Some(2));
    assert_eq!(code(&["--mode", "f64", "perturb", "--curve", "square.json", "--eps", "1/10", "--ball", "ball.json"]), Some(2));
    let far = r#"{"center": ["9", "9", "9", "9"], "radius": "1/4"}"#;
    fs::write(dir.path().join("far.json"), far).unwrap();
    assert_eq!(code(&["perturb", "--curve", "square.json", "--eps", "1/10", "--ball", "far.json"]), Some(2));
}

#[test]
fn malformed_input_names_file_and_position() {
    let dir = setup();
    fs::write(dir.path().join("broken.json"), "{\n  \"dim\": 2,\n  oops\n}").unwrap();
    let out = run(&["certify", "--curve", "broken.json", "--form", "form.json"], dir.path());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken.json") && err.contains("line 3"), "{err}");
}
