use std::path::Path;
use std::process::{Command, Output};

use detquartic::catalog::{default_dir, find, load_default};
use detquartic::format::pencil_to_json;
use detquartic_core::{GMatrix, HermitianMatrix, HermitianPencil, Rational};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detquartic"))
        .args(args)
        .env("DETQUARTIC_CATALOG", default_dir())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_pencil(dir: &Path, name: &str, p: &HermitianPencil, e: Option<&[Rational]>) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&pencil_to_json(name, p, e, None)).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn analyze_exit_codes() {
    let o = run(&["analyze", "--entry", "4.4/(3,3,0)", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["eta"].as_u64(), v["rho"].as_u64(), v["sigma"].as_u64()), (Some(3), Some(3), Some(0)));

    let dir = tempfile::tempdir().unwrap();
    let diag = HermitianPencil::new(core::array::from_fn(|k| {
        let mut re = [0; 16];
        re[5 * k] = 1;
        HermitianMatrix::new(GMatrix::from_ints(4, 4, &re, &[0; 16])).unwrap()
    }));
    let one = vec![Rational::from_integer(1.into()); 4];
    let path = write_pencil(dir.path(), "diag.json", &diag, Some(&one));
    assert_eq!(run(&["analyze", &path]).status.code(), Some(2));

    let truncated = dir.path().join("cut.json");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    let o = run(&["analyze", truncated.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());

    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_single_entry_is_flagged() {
    let o = run(&["verify-catalog", "--entry", "4.5/(4,4,3)", "--json", "--lines", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let e = &v["entries"][0];
    assert_eq!(e["name"], "4.5/(4,4,3)");
    assert_eq!(e["flagged"], true);
    assert_eq!(e["profile_matches"], true);
    assert_eq!(e["square_identity"], true);
    assert_eq!(e["hyperbolic_fraction"].as_f64(), Some(1.0));
    assert_eq!(run(&["verify-catalog", "--entry", "(9,9,9)"]).status.code(), Some(1));
}

#[test]
fn verify_is_robust_to_a_coarse_tolerance() {
    let names = ["4.3/(2,2,1)", "4.6/(5,5,2)", "4.9/(8,8,5)"];
    for n in names {
        let fine = run(&["verify-catalog", "--entry", n, "--lines", "20"]);
        let coarse = run(&["verify-catalog", "--entry", n, "--lines", "20", "--tol", "1e-3"]);
        assert_eq!(fine.status.code(), Some(0), "{n}");
        assert_eq!(stdout(&fine), stdout(&coarse), "{n}");
    }
}

#[test]
fn realify_reports_the_identity() {
    let o = run(&["realify", "--entry", "4.2/(1,1,1)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["square_identity"], true);
    assert_eq!(v["size"], 8);
    let coeffs = v["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 4);
    assert!(coeffs.iter().all(|m| m.as_array().unwrap().len() == 8));
    // symmetric
    for m in coeffs {
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(m[i][j], m[j][i]);
            }
        }
    }
}

#[test]
fn x2_and_curves_checks() {
    let o = run(&["x2-check", "--samples", "25", "--seed", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let codims = v["tangent_codims"].as_array().unwrap();
    assert_eq!(codims.len(), 25);
    assert!(codims.iter().all(|c| c == 4));

    let o = run(&["curves-check", "--entry", "4.5/(4,4,4)", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["samples"], 20);
    assert_eq!(v["essential_residuals"].as_array().unwrap().len(), 4);

    let o = run(&["hyperbolicity", "--entry", "4.7/(6,6,4)", "--lines", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["hyperbolicity", "--entry", "3/example"]).status.code(), Some(1));
}

#[test]
fn search_writes_log_and_tracker() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["search", "--target", "2,2,1", "--budget", "20", "--seed", "0", "--out", out, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["found"].as_array().unwrap().len(), 1);
    let again = run(&["search", "--target", "2,2,1", "--budget", "20", "--seed", "0", "--out", out, "--json"]);
    assert_eq!(stdout(&o), stdout(&again));

    let log = std::fs::read_to_string(dir.path().join("found.ndjson")).unwrap();
    assert_eq!(log.lines().count(), 2);
    let tracker: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("tracker.json")).unwrap()).unwrap();
    let row2 = tracker["rows"].as_array().unwrap().iter().find(|r| r["eta"] == 2).unwrap();
    assert_eq!(row2["found"], serde_json::json!([[2, 1]]));

    assert_eq!(run(&["search", "--target", "9,9,0"]).status.code(), Some(1));
    assert_eq!(run(&["search", "--target", "4,2,3"]).status.code(), Some(1));
    assert_eq!(run(&["search", "--target", "two"]).status.code(), Some(1));

    // an exhausted budget is not an error
    let o = run(&["search", "--target", "4,0,0", "--budget", "1", "--seed", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["found"].as_array().unwrap().len(), 0);
    assert_eq!(v["stats"]["candidates"], 1);
}

#[test]
fn export_writes_an_obj() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.obj");
    let o = run(&[
        "export-surface",
        "--entry",
        "4.1/(0,0,0)",
        "--resolution",
        "24",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let v = text.lines().filter(|l| l.starts_with("v ")).count();
    let f: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
    assert!(v > 0 && !f.is_empty());
    for line in &f {
        for idx in line.split_whitespace().skip(1) {
            let k: usize = idx.parse().unwrap();
            assert!(k >= 1 && k <= v);
        }
    }
    assert_eq!(run(&["export-surface", "--entry", "4.1/(0,0,0)", "--chart", "7"]).status.code(), Some(1));
}

#[test]
fn file_and_entry_inputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let entries = load_default().unwrap();
    let e = find(&entries, "4.3/(2,0,0)").unwrap();
    let path = write_pencil(dir.path(), "p.json", &e.pencil, e.e.as_deref());
    let a = run(&["analyze", &path, "--json"]);
    let b = run(&["analyze", "--entry", "4.3/(2,0,0)", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}
