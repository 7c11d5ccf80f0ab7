use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

/// `(stdout, exit code)`.
fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_fincyc")).args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

/// Runs with `--out`, then checks the artifact with `verify`.
fn run_with_witness(args: &[&str]) -> (String, i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    let p = path.display().to_string();
    let mut full = args.to_vec();
    full.extend(["--out", &p]);
    let (stdout, code) = run(&full);
    let witness = std::fs::read_to_string(&path).unwrap();
    let (v, vcode) = run(&["verify", &p]);
    assert_eq!(vcode, 0, "{v}\n{witness}");
    assert!(v.starts_with("VERIFIED"), "{v}");
    (stdout, code, witness)
}

#[test]
fn order_command() {
    let (out, code, _) = run_with_witness(&["order", &fixture("swap.auto")]);
    assert_eq!((out.as_str(), code), ("order 2, f0 = 1\n", 0));
    let (out, code) = run(&["order", &fixture("identity.auto")]);
    assert_eq!((out.as_str(), code), ("order 1, f0 = 1\n", 0));
    let (out, code) = run(&["order", &fixture("growth.auto")]);
    assert!(out.starts_with("exceeded at power "), "{out}");
    assert_eq!(code, 2);
}

#[test]
fn center_command() {
    for (file, expected) in [("swap.auto", "t^2 1\n"), ("ad_a.auto", "t^1 A\n"), ("rotation.auto", "t^4 1\n")] {
        let (out, code, _) = run_with_witness(&["center", &fixture(file)]);
        assert_eq!((out.as_str(), code), (expected, 0), "{file}");
    }
}

#[test]
fn torus_conj_command() {
    let swap = fixture("swap.auto");
    let (out, code, _) = run_with_witness(&["torus-conj", &swap, "t^0 a", "t^0 b"]);
    assert_eq!((out.as_str(), code), ("CONJUGATE t^1 1\n", 0));
    let (out, code, _) = run_with_witness(&["torus-conj", &swap, "t^1 1", "t^2 1"]);
    assert_eq!((out.as_str(), code), ("NOT_CONJUGATE exponent\n", 2));
    let (out, code, _) = run_with_witness(&["torus-conj", &swap, "t^0 a", "t^0 A"]);
    assert_eq!((out.as_str(), code), ("NOT_CONJUGATE free-conjugacy\n", 2));
}

#[test]
fn out_conj_and_whitehead_commands() {
    let (out, code, _) = run_with_witness(&["out-conj", &fixture("swap.auto"), &fixture("rotation.auto")]);
    assert!(out.starts_with("NOT_CONJUGATE "), "{out}");
    assert_eq!(code, 2);
    let (out, code, _) = run_with_witness(&["out-conj", &fixture("theta.auto"), &fixture("theta.auto")]);
    assert!(out.starts_with("CONJUGATE "), "{out}");
    assert_eq!(code, 0);
    let (out, code, _) = run_with_witness(&["whitehead", "abAB", "BAba"]);
    assert!(out.starts_with("EQUIVALENT "), "{out}");
    assert_eq!(code, 0);
    let (out, code, _) = run_with_witness(&["whitehead", "a", "abAB"]);
    assert_eq!((out.as_str(), code), ("INEQUIVALENT\n", 2));
}

#[test]
fn congruence_command() {
    let (out, code, witness) =
        run_with_witness(&["congruence", &fixture("swap.auto"), &fixture("invert_t.tauto"), "--max-order", "48"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("invert_t separated"), "{out}");
    assert!(witness.starts_with("fincyc-witness v1\nkind congruence\n"));
}

#[test]
fn catalog_and_precheck_commands() {
    let (out, code) = run(&["catalog", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("orders 1 2 3 4 6"));
    let swap = fixture("swap.auto");
    assert_eq!(run(&["mwh-precheck", &swap, "t^1 a;b", "t^1 b;a"]), ("PASS\n".into(), 0));
    let (out, code) = run(&["mwh-precheck", &swap, "t^1 a", "t^2 a"]);
    assert_eq!((out.as_str(), code), ("FAIL exponent at 1.1: 1 vs 2\n", 2));
}

#[test]
fn input_errors_exit_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_fincyc"))
        .args(["order", &fixture("bad.auto")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column 6"), "{err}");
    assert_eq!(run(&["order", "/nonexistent.auto"]).1, 1);
    assert_eq!(run(&["no-such-command"]).1, 1);
    assert_eq!(run(&["torus-conj", &fixture("swap.auto"), "t^x a", "a"]).1, 1);
}

#[test]
fn tampered_witness_is_rejected() {
    let (_, _, witness) = run_with_witness(&["center", &fixture("swap.auto")]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, witness.replace("center t^2 1", "center t^2 a")).unwrap();
    let (out, code) = run(&["verify", &path.display().to_string()]);
    assert_eq!(code, 2);
    assert!(out.starts_with("FALSIFIED"), "{out}");
}

#[test]
fn output_is_deterministic() {
    let args = ["torus-conj", &fixture("swap.auto"), "t^1 ab", "t^1 Ba"];
    let (_, _, first) = run_with_witness(&args);
    let (_, _, second) = run_with_witness(&args);
    assert_eq!(first, second);
    assert_eq!(run(&["catalog", "2"]), run(&["catalog", "2"]));
}
