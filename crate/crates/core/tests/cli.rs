use serde_json::Value;

use twobridge::cli::{run, table_csv, EXIT_INVARIANT, EXIT_PASS, EXIT_USAGE};
use twobridge::holonomy::{
    cusp_parameter, geometric_rep, prop42_table, solve_fillings, two_bridge_presentation, CuspData, DEFAULT_T0,
};

fn twobridge(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("twobridge").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = twobridge(args);
    assert_eq!(code, EXIT_PASS, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn knot_summary() {
    let v = json(&["knot", "--knot", "5/3"]);
    assert_eq!(v["w"], "bABa");
    assert_eq!(v["riley_polynomial"], "c^2 + c + 1");
    assert_eq!(v["e"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(twobridge(&["knot", "--knot", "6/1"]).0, EXIT_USAGE);
    assert_eq!(twobridge(&["knot", "--knot", "five"]).0, EXIT_USAGE);
    assert_eq!(twobridge(&["no-such-command"]).0, EXIT_USAGE);
    assert_eq!(twobridge(&["fill", "--tol", "-1"]).0, EXIT_USAGE);
    assert_eq!(twobridge(&["--help"]).0, EXIT_PASS);

    let (code, _, err) = twobridge(&["parabolic", "--knot", "3/1"]);
    assert_eq!(code, EXIT_INVARIANT);
    let diag: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(diag["invariant"], "solver");

    let (code, out, _) = twobridge(&["lemma31", "--b-grid", "300", "--alpha-grid", "1", "--trials", "1"]);
    assert_eq!((code, out.as_str()), (EXIT_USAGE, ""));
}

#[test]
fn table_matches_library() {
    let (code, out, err) = twobridge(&["table", "--n", "10,20", "--N", "1,2", "--k", "-1..1"]);
    assert_eq!(code, EXIT_PASS, "{err}");

    let knot = two_bridge_presentation(5, 3).unwrap();
    let seed = geometric_rep(&knot).unwrap();
    let tau0 = cusp_parameter(&seed, &knot).unwrap();
    let frs = solve_fillings(&knot, &[10, 20], &seed).unwrap();
    let rows = prop42_table(&frs, &CuspData::new(DEFAULT_T0, tau0), &[1, 2], &[-1, 0, 1]);
    assert_eq!(out, table_csv(&rows).unwrap());
    assert_eq!(out.lines().count(), 1 + 2 * 2 * 3);
    assert!(!out.contains("NaN") && !out.contains("inf"));
}

#[test]
fn deterministic_for_a_seed() {
    let args = ["lemma31", "--b-grid", "1,5", "--alpha-grid", "0.5,1", "--trials", "20", "--seed", "3"];
    let first = twobridge(&args);
    assert_eq!(first.0, EXIT_PASS, "{}", first.2);
    assert_eq!(first, twobridge(&args));
    let other = twobridge(&["lemma31", "--b-grid", "1,5", "--alpha-grid", "0.5,1", "--trials", "20", "--seed", "4"]);
    assert_ne!(first.1, other.1);
}

#[test]
fn config_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let art = dir.path().join("fill.json");
    std::fs::write(&cfg, r#"{"knot": "7/3", "n": [12], "out": "/nonexistent/dir/x.json"}"#).unwrap();

    let cfg_s = cfg.to_str().unwrap();
    let (code, out, err) = twobridge(&["fill", "--config", cfg_s, "--out", art.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{err}");
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&art).unwrap()).unwrap();
    assert_eq!(v[0]["knot"], "7/3");
    assert_eq!(v[0]["n"], 12);

    // Flags win over the config.
    let code = twobridge(&["fill", "--config", cfg_s, "--out", art.to_str().unwrap(), "--n", "15", "--knot", "5/3"]).0;
    assert_eq!(code, EXIT_PASS);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&art).unwrap()).unwrap();
    assert_eq!((v[0]["knot"].as_str(), v[0]["n"].as_i64()), (Some("5/3"), Some(15)));

    // The config's own out path is used when no flag is given.
    assert_eq!(twobridge(&["fill", "--config", cfg_s]).0, EXIT_USAGE);

    std::fs::write(&cfg, r#"{"colour": "red"}"#).unwrap();
    assert_eq!(twobridge(&["fill", "--config", cfg_s]).0, EXIT_USAGE);
}

#[test]
fn nielsen_and_hnn_commands() {
    let v = json(&["nielsen", "primitive", "ababaaba"]);
    assert_eq!(v["primitive"], true);
    let v = json(&["nielsen", "basis", "a,bab"]);
    assert_eq!(v["basis"], false);
    let v = json(&["hnn", "check", "x,y", "--g", "xy", "--k", "2"]);
    assert!(v.is_object());
}
