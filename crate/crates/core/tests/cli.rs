use std::process::Command;

use serde_json::Value;

use cube_core::cli::{self, EXIT_PASS, EXIT_USAGE};
use cube_core::networks::{recurrence_poly, CharPoly};
use cube_core::LaurentPoly;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(std::iter::once("cube").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn value_at(json: &Value, vertex: &str, t: i64) -> LaurentPoly {
    LaurentPoly::from_json(&json[format!("x[{vertex}]@{t}")]).unwrap()
}

#[test]
fn table_scenario_from_the_command_line() {
    let (code, out, _) = run(&["evolve", "--region", "triangle", "--m", "5", "--tmax", "12", "--assign", "x[1,3,1]=3", "--assign", "x[1,1,3]=1", "--assign", "x[1,2,2]=1", "--assign", "x[2,1,2]=1", "--assign", "x[2,2,1]=1", "--assign", "x[3,1,1]=1"]);
    assert_eq!(code, EXIT_PASS);
    let json: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value_at(&json, "2,2,1", 7), LaurentPoly::int(13));
    assert_eq!(value_at(&json, "2,1,2", 5), LaurentPoly::int(41));
    assert_eq!(value_at(&json, "3,1,1", 6), LaurentPoly::int(19));
}

#[test]
fn output_is_deterministic() {
    let args = ["evolve", "--region", "cylinder", "--n", "1", "--m", "3", "--tmax", "9", "--random", "--seed", "42"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.0, EXIT_PASS);
    assert_eq!(a.1, b.1);
    let c = run(&["evolve", "--region", "cylinder", "--n", "1", "--m", "3", "--tmax", "9", "--random", "--seed", "43"]);
    assert_ne!(a.1, c.1);
}

#[test]
fn qpoly_json_round_trips() {
    let (code, out, _) = run(&["qpoly", "--n", "1", "--m", "3"]);
    assert_eq!(code, EXIT_PASS);
    let parsed = CharPoly::from_json(&serde_json::from_str(&out).unwrap()).unwrap();
    assert_eq!(parsed, recurrence_poly(1, 3).unwrap());
    let (_, out, _) = run(&["qpoly", "--n", "1", "--m", "2", "--r", "2"]);
    let p = CharPoly::from_json(&serde_json::from_str(&out).unwrap()).unwrap();
    assert_eq!(p.coeffs, vec![LaurentPoly::int(-1), LaurentPoly::int(1)]);
}

#[test]
fn usage_errors_name_the_flag() {
    let (code, _, err) = run(&["evolve", "--region", "triangle", "--tmax", "3"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--m"), "{err}");
    let (code, _, err) = run(&["evolve", "--region", "triangle", "--m", "5", "--tmax", "3", "--assign", "x[1,3,1]=0.5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("0.5"), "{err}");
    let (code, _, err) = run(&["evolve", "--region", "triangle", "--m", "5", "--tmax", "3", "--assign", "x[0,3,2]=2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--assign"), "{err}");
    let (code, _, _) = run(&["jcoeff", "--n", "1"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn verify_subcommands_pass() {
    for args in [
        &["verify", "cylrec", "--n", "1", "--m", "2"][..],
        &["verify", "periodicity", "--m", "3", "--symbolic"],
        &["verify", "pleth", "--n", "1", "--m", "3", "--i", "1"],
        &["verify", "groves", "--t", "3", "--n", "1", "--m", "2"],
        &["verify", "entropy", "--tmax", "10"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, EXIT_PASS, "{args:?}: {err}");
        let json: Value = serde_json::from_str(&out).unwrap();
        assert!(json.get("passed").is_some() || json.get("degrees").is_some(), "{out}");
    }
}

#[test]
fn cylrec_reports_default_window() {
    let (_, out, _) = run(&["verify", "cylrec", "--n", "1", "--m", "2"]);
    let json: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["certificates"][0]["window"][1], 8);
}

#[test]
fn files_are_written() {
    let dir = std::env::temp_dir().join(format!("cube-cli-{}", std::process::id()));
    let svg_dir = dir.join("groves");
    let edges = dir.join("n12.txt");
    std::fs::create_dir_all(&dir).unwrap();
    let (code, _, _) = run(&["groves", "--t", "2", "--svg", svg_dir.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(std::fs::read_dir(&svg_dir).unwrap().count(), 3);
    let (code, _, _) = run(&["network", "--n", "1", "--m", "2", "--dot", edges.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    let text = std::fs::read_to_string(&edges).unwrap();
    assert_eq!(text, cube_core::networks::build_strip_network(1, 2).unwrap().to_edge_list());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_cube"))
        .args(["jcoeff", "--n", "1", "--m", "2"])
        .env("CUBE_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["counts"], serde_json::json!([1, 6, 1]));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grove counts"));

    let bad = Command::new(env!("CARGO_BIN_EXE_cube")).args(["evolve"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}

#[test]
fn json_and_svg_paths() {
    let dir = std::env::temp_dir().join(format!("cube-cli-paths-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("q.json");
    let (code, stdout, _) = run(&["qpoly", "--n", "1", "--m", "2", "--json", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout);
    let (code, _, _) = run(&["jcoeff", "--n", "1", "--m", "2", "--json"]);
    assert_eq!(code, EXIT_PASS);

    let one = dir.join("g.svg");
    run(&["groves", "--t", "2", "--v", "0,0,0", "--svg", one.to_str().unwrap()]);
    for k in 0..3 {
        assert!(dir.join(format!("g_{k:04}.svg")).exists());
    }
    let (code, _, _) = run(&["evolve", "--region", "torus", "--A", "3,-3,0", "--B", "0,3,-3", "--tmax", "3"]);
    assert_eq!(code, EXIT_PASS);
    std::fs::remove_dir_all(&dir).unwrap();
}
