use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_jetspace"));
    c.env_remove("JETSPACE_BUDGET");
    c
}

fn e6() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/e6.json")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("jetspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

fn p(x: &Path) -> &str {
    x.to_str().unwrap()
}

#[test]
fn certified_case_exits_zero_and_revalidates() {
    let out = scratch("c52.json");
    let o = run(&["wedge", "--fixture", p(&e6()), "--pair", "5,2", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["verdict"], "certified");
    let o = run(&["validate-cert", p(&out)]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("all consistent"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let out = scratch("c41.json");
    assert_eq!(code(&run(&["wedge", "--fixture", p(&e6()), "--pair", "4,1", "--out", p(&out)])), 0);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    // claim the (vacuous) check branch as a closed proof branch without refutations
    let b = &mut v["branches"][1];
    b["role"] = "proof".into();
    b["closed"] = true.into();
    b["certificates"] = serde_json::json!([]);
    let bad = scratch("c41-bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = run(&["validate-cert", p(&bad)]);
    assert_eq!(code(&o), 1, "{}", text(&o));
    assert!(text(&o).contains("invalid"));
}

#[test]
fn open_case_exits_two() {
    let o = run(&["wedge", "--fixture", p(&e6()), "--pair", "4,2"]);
    assert_eq!(code(&o), 2, "{}", text(&o));
    assert!(text(&o).contains("Open"));
}

#[test]
fn pair_without_script_is_an_error() {
    let o = run(&["wedge", "--fixture", p(&e6()), "--pair", "2,1"]);
    assert_eq!(code(&o), 1);
    assert!(text(&o).contains("no case script"), "{}", text(&o));
}

#[test]
fn malformed_json_reports_position() {
    let f = scratch("broken.json");
    std::fs::write(&f, "{\n  \"schema_version\": 1,\n  \"name\": oops\n}\n").unwrap();
    let o = run(&["valuative", "--fixture", p(&f)]);
    assert_eq!(code(&o), 1);
    let t = text(&o);
    assert!(t.contains("line 3"), "{}", t);
    assert!(t.contains("column"), "{}", t);
}

fn small_fixture(divisors: &str) -> String {
    format!(
        r#"{{"schema_version": 1, "name": "tiny", "surface": "z^2+y^3+x^4",
            "test_functions": ["x", "y", "z"], "divisors": [{}],
            "symmetry": {{"divisors": [], "functions": []}}, "cases": []}}"#,
        divisors
    )
}

#[test]
fn single_divisor_has_no_residual_pairs() {
    let f = scratch("one.json");
    std::fs::write(&f, small_fixture(r#"{"name": "E1", "mu": [2, 2, 3], "test_orders": {"x": 2, "y": 2, "z": 3}}"#)).unwrap();
    let o = run(&["valuative", "--fixture", p(&f)]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("residual pairs: \n") || text(&o).contains("residual pairs: \r\n"), "{}", text(&o));
    // nothing residual, nothing to prove: run-all certifies
    let o = run(&["run-all", "--fixture", p(&f)]);
    assert_eq!(code(&o), 0, "{}", text(&o));
}

#[test]
fn missing_test_order_fails_validation() {
    let f = scratch("gap.json");
    std::fs::write(&f, small_fixture(r#"{"name": "E1", "mu": [2, 2, 3], "test_orders": {"x": 2, "y": 2}}"#)).unwrap();
    let o = run(&["valuative", "--fixture", p(&f)]);
    assert_eq!(code(&o), 1);
    assert!(text(&o).contains("z"), "{}", text(&o));
}

#[test]
fn missing_scripts_give_partial() {
    let f = scratch("noscripts.json");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(e6()).unwrap()).unwrap();
    v["cases"] = serde_json::json!([]);
    std::fs::write(&f, v.to_string()).unwrap();
    let o = run(&["run-all", "--fixture", p(&f)]);
    assert_eq!(code(&o), 2, "{}", text(&o));
    assert!(text(&o).contains("partial: residual pairs open"));
}

#[test]
fn jets_prints_family_and_checks_k() {
    let o = run(&["jets", "--fixture", p(&e6()), "--divisor", "E4", "--k", "11"]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let t = text(&o);
    assert!(t.lines().next().unwrap().starts_with("f_4,8 = "), "{}", t);
    assert!(t.contains("f_4,11"));
    let o = run(&["jets", "--fixture", p(&e6()), "--divisor", "E4", "--k", "5"]);
    assert_eq!(code(&o), 1);
    assert!(text(&o).contains("< o_i"), "{}", text(&o));
    let o = run(&["jets", "--fixture", p(&e6()), "--divisor", "E9", "--k", "12"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn budget_comes_from_the_environment() {
    let o = bin().args(["wedge", "--fixture", p(&e6()), "--pair", "6,1"]).env("JETSPACE_BUDGET", "3").output().unwrap();
    assert_eq!(code(&o), 1, "{}", text(&o));
    assert!(text(&o).contains("budget"), "{}", text(&o));
    // the flag wins over the environment
    let o = bin().args(["wedge", "--fixture", p(&e6()), "--pair", "6,1", "--budget", "20000000"]).env("JETSPACE_BUDGET", "3").output().unwrap();
    assert_eq!(code(&o), 0, "{}", text(&o));
}

fn strip_timing(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(m) => {
            m.remove("timing_ms");
            m.values_mut().for_each(strip_timing);
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn run_all_is_deterministic() {
    let (a, b) = (scratch("all-a.json"), scratch("all-b.json"));
    let oa = run(&["run-all", "--fixture", p(&e6()), "--jobs", "1", "--out", p(&a)]);
    let ob = run(&["run-all", "--fixture", p(&e6()), "--jobs", "4", "--out", p(&b)]);
    assert_eq!(code(&oa), 2, "{}", text(&oa));
    assert_eq!(code(&ob), 2);
    let mut va: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let mut vb: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    strip_timing(&mut va);
    strip_timing(&mut vb);
    assert_eq!(va, vb);
    assert_eq!(va["open_pairs"], serde_json::json!(["4,2"]));
}
