use std::process::{Command, Output};

fn arithdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arithdyn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn preperiodic_height_row() {
    let o = arithdyn(&["height", "--map", "p1: x^2-29/16", "--point", "1/4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "point,height,finite_part,htilde,error_bound,preperiodic\n1/4,0,0,,0e0,true\n");
}

#[test]
fn henon_fixed_point() {
    let o = arithdyn(&["height", "--map", "henon: P=y^2, delta=1", "--point", "(0,0)"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("\"(0, 0)\",0,0,0,0e0,true\n"));
}

#[test]
fn malformed_point_exits_2_with_position() {
    let o = arithdyn(&["height", "--map", "p1: x^2", "--point", "(1,,2)"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("position 3") && err.contains("`point`"), "{err}");
}

#[test]
fn malformed_map_names_field() {
    let o = arithdyn(&["freeness", "--F", "skew: p = x^2; q = y^", "--G", "p1: x^2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("`F`"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = arithdyn(&["common-zeros", "--F", "p1: x^2", "--C", "p1: 2x", "--m", "20"]);
    assert_eq!(o.status.code(), Some(3));
    let o = arithdyn(&["common-zeros", "--F", "p1: x^2 + 1/3", "--C", "p1: x", "--m", "3", "--budget-bits", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn freeness_certificate() {
    let o = arithdyn(&["freeness", "--F", "skew: p=x^2; q=y^2", "--G", "skew: p=x^2; q=-y^2", "--max-len", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("true,\"[G,G]\",\"[G,F]\",true,true"));
}

#[test]
fn ritt_classify_chebyshev() {
    let o = arithdyn(&["ritt", "classify", "--poly", "2x^2-1"]);
    assert!(stdout(&o).contains("Chebyshev-conjugate via l(x)=2*x, sign +"));
    let o = arithdyn(&["ritt", "first-step", "--a", "(x+1)^2", "--c", "x^2-1", "--d", "x^2", "--b", "x^2"]);
    assert_eq!(stdout(&o), "mu\nx + 1\n");
}

#[test]
fn equidist_circle_with_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("hist.csv");
    let o = arithdyn(&["equidist", "--map", "p1: x^2", "--period", "10", "--law", "circle", "--histogram", hist.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["points"], 1025);
    assert!(v[0]["ks"].as_f64().unwrap() < 0.05);
    let h = std::fs::read_to_string(hist).unwrap();
    assert_eq!(h.lines().count(), 33);
    assert!(h.starts_with("bin_center,empirical_mass,reference_mass\n"));
}

#[test]
fn common_zeros_are_exact() {
    let o = arithdyn(&["common-zeros", "--F", "skew: p=x^2; q=y^2", "--G", "poly2: y^2; x^2", "--C", "poly2: x; y", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let pts: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["rational_point"].as_str().unwrap()).collect();
    assert_eq!(pts, vec!["(1, 1)", "(0, 0)"]);
    let o = arithdyn(&["common-zeros", "--F", "p1: x^2", "--C", "p1: x + 1"]);
    assert!(stdout(&o).contains("0,\"[-1,-1,1]\",2,\"[0,1]\",,1,true"));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "map = \"p1: x^2 - 1\"\npoint = [\"0\", \"2\"]\nformat = \"json\"\n").unwrap();
    let o = arithdyn(&["preperiodic", "--config", cfg.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v[0]["preperiodic"].as_bool(), v[1]["preperiodic"].as_bool()), (Some(true), Some(false)));
    let o = arithdyn(&["preperiodic", "--config", cfg.to_str().unwrap(), "--point", "-1", "--format", "csv"]);
    assert_eq!(stdout(&o), "point,preperiodic,tail,cycle\n-1,true,0,2\n");
    std::fs::write(&cfg, "mapp = 1\n").unwrap();
    assert_eq!(arithdyn(&["preperiodic", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["green", "--map", "skew: p = x^2 - 1; q = y^2 + x/2", "--point", "(3, 1/2)", "--place", "inf", "--place", "2"];
    let a = stdout(&arithdyn(&args));
    assert_eq!(a, stdout(&arithdyn(&args)));
    let o = Command::new(env!("CARGO_BIN_EXE_arithdyn"))
        .args(args)
        .args(["--out", "g.csv"])
        .env("ARITHDYN_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(dir.path().join("g.csv")).unwrap(), a);
}

#[test]
fn missing_value_names_flag() {
    let o = arithdyn(&["equidist", "--map", "p1: x^2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("--period"));
}
