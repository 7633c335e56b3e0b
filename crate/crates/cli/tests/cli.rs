use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use opfactor_cli::{ErrorRecord, ProblemFile, Report};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opfactor"))
}

fn problem(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_json(cmd: &str, file: &str, extra: &[&str]) -> (Report, Value) {
    let path = problem(file);
    let mut args = vec![cmd, path.to_str().unwrap(), "--json"];
    args.extend_from_slice(extra);
    let out = run(&args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{cmd} {file}: stdout {stdout} stderr {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Report = serde_json::from_str(&stdout).unwrap();
    let value: Value = serde_json::from_str(&stdout).unwrap();
    assert!(report.ok);
    assert!(report.warnings.is_empty(), "{cmd} {file}: {:?}", report.warnings);
    (report, value)
}

fn error_of(out: &Output) -> ErrorRecord {
    let stderr = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(stderr.trim()).unwrap_or_else(|e| panic!("stderr is not an error record ({e}): {stderr}"))
}

fn values(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

#[test]
fn first_example_integers() {
    let (_, v) = run_json("paper-examples", "worked_example_i.json", &[]);
    let e = &v["results"]["example_i"];
    let got: Vec<i64> = ["ma_h", "nu", "mg_h", "mg_k", "ma_k1"].iter().map(|k| e[k].as_i64().unwrap()).collect();
    assert_eq!(got, [2, 2, 1, 1, 1]);
    let (_, v) = run_json("verify-bs", "worked_example_i.json", &[]);
    let verdict = &v["results"]["verdicts"][0];
    assert_eq!(verdict["ma_h"]["value"], 2);
    assert_eq!(verdict["nu"], 2);
    assert_eq!(verdict["mg_h"], 1);
    assert_eq!(verdict["mg_k"], 1);
    // the eigenvalue 1 of H0 disappears; its lost multiplicity balances the gain at 0
    assert_eq!(v["results"]["balance_total"], 0);
    let (_, v) = run_json("factorize", "worked_example_i.json", &[]);
    assert_eq!(values(&v["results"]["forward"]["p"]), [1, 1]);
    let (_, v) = run_json("verify-bs", "worked_example_i.json", &["--z0", "1,0"]);
    assert_eq!(v["results"]["verdicts"][0]["wa_index"]["value"], -2);
    assert!(v["results"].get("balance_total").is_none());
}

#[test]
fn second_example_integers() {
    let (_, v) = run_json("paper-examples", "worked_example_ii.json", &[]);
    let e = &v["results"]["example_ii"];
    let got: Vec<i64> = ["ma_h", "nu", "mg_h", "mg_k", "ma_k1"].iter().map(|k| e[k].as_i64().unwrap()).collect();
    assert_eq!(got, [1, 1, 1, 1, 2]);
    let (_, v) = run_json("verify-bs", "worked_example_ii.json", &[]);
    let verdict = &v["results"]["verdicts"][0];
    assert_eq!(verdict["ma_k1"], 2);
    assert_eq!(verdict["mg_k1"], 1);
}

#[test]
fn pencil_files() {
    let (_, v) = run_json("factorize", "pencil_identity_3.json", &[]);
    assert_eq!(values(&v["results"]["forward"]["p"]), [3]);
    assert_eq!(values(&v["results"]["reversed"]["p"]), [3]);
    let (_, v) = run_json("multiplicity", "pencil_identity_3.json", &[]);
    assert_eq!(v["results"]["riesz"]["value"], 3);

    let (_, v) = run_json("factorize", "pencil_jordan.json", &[]);
    assert_eq!(values(&v["results"]["forward"]["p"]), [1, 1]);
    let (_, v) = run_json("multiplicity", "pencil_jordan.json", &["--z0", "3,0"]);
    assert_eq!(v["results"]["argument_principle"]["value"], 1);
}

#[test]
fn diagonal_polynomial() {
    let (_, v) = run_json("factorize", "diag_z2_z.json", &[]);
    assert_eq!(values(&v["results"]["forward"]["p"]), [2, 1]);
    assert_eq!(v["results"]["forward"]["nu"], 3);
    assert_eq!(v["results"]["forward"]["order"], 2);
    let (_, v) = run_json("multiplicity", "diag_z2_z.json", &[]);
    assert_eq!(v["results"]["determinant_order"]["value"], 3);
}

#[test]
fn pole_index() {
    let (_, v) = run_json("multiplicity", "resolvent_pole.json", &[]);
    assert_eq!(v["results"]["meromorphic_index"]["value"], -2);
}

#[test]
fn zero_perturbation_is_all_shared() {
    let (report, v) = run_json("verify-bs", "zero_perturbation.json", &[]);
    assert_eq!(v["results"]["balance_total"], 0);
    let verdicts = v["results"]["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 2);
    for verdict in verdicts {
        assert_eq!(verdict["wa_index"]["value"], 0);
        assert_eq!(verdict["wa_ok"], true);
    }
    assert!(report.checks.iter().all(|c| c.ok));
}

#[test]
fn pair_files() {
    for (file, index) in [("pair_index_one.json", 1), ("pair_generic.json", 0), ("pair_random.json", 1)] {
        let (_, v) = run_json("projections", file, &[]);
        assert_eq!(v["results"]["index"]["index"], index, "{file}");
        let m: Vec<i64> = v["results"]["m_function"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["value"].as_i64().unwrap())
            .collect();
        assert_eq!(m, [-index, 0, index], "{file}");
    }
    // a different seed gives a different pair with the same invariants
    let (_, v) = run_json("projections", "pair_random.json", &["--seed", "99"]);
    assert_eq!(v["results"]["index"]["index"], 1);
}

#[test]
fn output_is_deterministic() {
    for (cmd, file) in [
        ("factorize", "worked_example_i.json"),
        ("verify-bs", "zero_perturbation.json"),
        ("projections", "pair_random.json"),
        ("multiplicity", "pencil_jordan.json"),
    ] {
        let path = problem(file);
        for json in [false, true] {
            let mut args = vec![cmd, path.to_str().unwrap()];
            if json {
                args.push("--json");
            }
            let a = run(&args);
            let b = run(&args);
            assert_eq!(a.status.code(), Some(0));
            assert_eq!(a.stdout, b.stdout, "{cmd} {file} json={json}");
        }
    }
}

#[test]
fn canonical_problem_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut entries: Vec<_> = std::fs::read_dir(problem("")).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    assert!(entries.len() >= 8);
    for path in entries {
        let original = ProblemFile::read(&path).unwrap();
        let canonical = original.canonical();
        let parsed = ProblemFile::parse(&canonical).unwrap();
        assert_eq!(parsed, original, "{}", path.display());
        assert_eq!(parsed.canonical(), canonical);

        // the canonical copy gives the same report
        let copy = dir.path().join(path.file_name().unwrap());
        std::fs::write(&copy, &canonical).unwrap();
        let cmd = if path.to_str().unwrap().contains("pair") {
            "projections"
        } else {
            "multiplicity"
        };
        if original.z0.is_none() && cmd == "multiplicity" {
            continue;
        }
        let a = run(&[cmd, path.to_str().unwrap(), "--json"]);
        let b = run(&[cmd, copy.to_str().unwrap(), "--json"]);
        assert_eq!(a.stdout, b.stdout, "{}", path.display());
    }
}

#[test]
fn reports_echo_tolerances() {
    let path = problem("pencil_jordan.json");
    let out = run(&["multiplicity", path.to_str().unwrap(), "--rtol", "1e-9"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rtol=1e-9 (flag) eps=auto (default) quadrature: nodes=64 doublings=6 rel_tol=1e-10 (default)"));
    let (report, _) = run_json("multiplicity", "pencil_jordan.json", &["--eps", "0.25"]);
    assert_eq!(report.tolerances.eps, Some(0.25));
    assert!(report.timings.is_none());
    let (report, _) = run_json("multiplicity", "pencil_jordan.json", &["--timings"]);
    assert!(!report.timings.unwrap().is_empty());
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let bad_json = write("bad.json", "{ not json");
    let unknown = write("unknown.json", r#"{"kind": "projection_pair", "pair": {"source": "explicit", "p": [[[1, 0]]], "q": [[[0, 0]]]}, "color": 1}"#);
    let wrong_kind = write("kind.json", r#"{"kind": "perturbation", "pair": {"source": "explicit", "p": [[[1, 0]]], "q": [[[0, 0]]]}}"#);
    let not_projection = write("np.json", r#"{"kind": "projection_pair", "pair": {"source": "explicit", "p": [[[2, 0]]], "q": [[[0, 0]]]}}"#);
    let jordan = problem("pencil_jordan.json");
    let zero = problem("zero_perturbation.json");
    let pair = problem("pair_index_one.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["factorize", "/nonexistent/problem.json"],
        vec!["factorize", bad_json.to_str().unwrap()],
        vec!["projections", unknown.to_str().unwrap()],
        vec!["verify-bs", wrong_kind.to_str().unwrap()],
        vec!["projections", not_projection.to_str().unwrap()],
        vec!["factorize", jordan.to_str().unwrap(), "--z0", "0.5,0"],
        vec!["factorize", zero.to_str().unwrap()],
        vec!["factorize", pair.to_str().unwrap(), "--z0", "0,0"],
        vec!["multiplicity", jordan.to_str().unwrap(), "--eps", "-1"],
        vec!["multiplicity", jordan.to_str().unwrap(), "--z0", "1,zero"],
        vec!["multiplicity"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?}");
        assert_eq!(error_of(&out).exit_code, 2);
    }
}

#[test]
fn failed_identities_exit_3() {
    // the circle of radius 2.5 around 1 also encloses the eigenvalue 3, so
    // the local factorization no longer accounts for the whole count
    let path = problem("pencil_jordan.json");
    let out = run(&["multiplicity", path.to_str().unwrap(), "--eps", "2.5", "--json"]);
    assert_eq!(out.status.code(), Some(3));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report.ok);
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["nu"]);
}

#[test]
fn help_and_version_exit_0() {
    for flag in ["--help", "--version"] {
        let out = run(&[flag]);
        assert_eq!(out.status.code(), Some(0));
        assert!(!out.stdout.is_empty());
    }
}
