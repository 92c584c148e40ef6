//! End-to-end tests for the binary: exit-code policy, output envelopes, and
//! rejection of malformed input files.
//!
//! Exit codes: 0 = verified/computed, 1 = property is false, 2 = undecided or
//! window too small, 64 = usage error, 65 = malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prismlab"))
        .current_dir(workspace_root())
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

// ---------------------------------------------------------------------------
// exit code 0: verified / computed
// ---------------------------------------------------------------------------

#[test]
fn verify_prism_passes_on_transversal_spec() {
    let out = run(&["verify-prism", "--spec", "ex/p-minus-T2.spec"]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout_str(&out);
    assert!(
        text.contains("transversal"),
        "classification missing: {text}"
    );
    assert!(text.contains("delta(d)"), "certificate missing: {text}");
}

#[test]
fn classify_crystalline_spec() {
    let out = run(&["classify", "--spec", "ex/zp-crystalline.spec"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_str(&out).contains("crystalline"));
}

#[test]
fn hodge_tate_table_computes() {
    let out = run(&["hodge-tate", "--rank-r", "2", "--j-max", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    // D_i(2) = i + 1 and the filtration totals are triangular numbers.
    assert!(text.contains('5'), "rank row missing: {text}");
}

#[test]
fn correspond_accepts_scaling_matrix() {
    let out = run(&[
        "correspond",
        "--spec",
        "ex/p-minus-TS.spec",
        "--iprime",
        "ex/p-minus-21TS.spec",
        "--matrix",
        "2,0;0,3",
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn kunz_flat_on_field_fiber() {
    let out = run(&["kunz-artinian", "--spec", "ex/fp-as-quotient.spec"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_str(&out).contains("flat"));
}

// ---------------------------------------------------------------------------
// exit code 1: the property under test is false
// ---------------------------------------------------------------------------

#[test]
fn kunz_rejects_nonreduced_fiber() {
    let out = run(&["kunz-artinian", "--spec", "ex/kunz-nonfree.spec"]);
    assert_eq!(code(&out), 1);
    assert!(stdout_str(&out).contains("not flat"));
}

#[test]
fn regularity_detects_singular_quotient() {
    let out = run(&["regularity", "--spec", "ex/nonreduced-fiber.spec"]);
    assert_eq!(code(&out), 1);
    assert!(stdout_str(&out).contains("proven singular"));
}

#[test]
fn verify_prism_rejects_undistinguished_orientation() {
    // delta(T) = 0 in the rank-one structure, so T is not distinguished:
    // the verdict is a definite "no", not a usage problem.
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("undistinguished.spec");
    let mut file = std::fs::File::create(&path).expect("create spec");
    writeln!(
        file,
        "prismlab-spec v1\n\n[ring]\np = 5\nprecision = 3\ndegree = 6\nvars = T\n\n[ideal]\ngen = T"
    )
    .expect("write spec");
    let out = run(&["verify-prism", "--spec", path.to_str().expect("utf-8 path")]);
    assert_eq!(code(&out), 1, "stdout: {}", stdout_str(&out));
}

#[test]
fn correspond_rejects_degenerate_matrix() {
    let out = run(&[
        "correspond",
        "--spec",
        "ex/p-minus-TS.spec",
        "--iprime",
        "ex/p-minus-21TS.spec",
        "--matrix",
        "0,0;0,0",
    ]);
    assert_eq!(code(&out), 1);
}

// ---------------------------------------------------------------------------
// exit code 2: undecided / window too small
// ---------------------------------------------------------------------------

#[test]
fn regseq_reports_window_too_small() {
    // The stored window (cap 8) cannot hold phi(d) shifts for the twist
    // suite, which needs degree 10: honestly undecidable there.
    let out = run(&["regseq", "--spec", "ex/p-minus-T2.spec", "--i-max", "1"]);
    assert_eq!(code(&out), 2, "stdout: {}", stdout_str(&out));
}

// ---------------------------------------------------------------------------
// exit code 64: usage
// ---------------------------------------------------------------------------

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(code(&out), 64);
}

#[test]
fn missing_required_flag_is_usage_error() {
    let out = run(&["verify-prism"]);
    assert_eq!(code(&out), 64);
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["classify", "--spec", "ex/p-minus-T2.spec", "--frosting"]);
    assert_eq!(code(&out), 64);
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_str(&out).contains("Usage"));
}

// ---------------------------------------------------------------------------
// exit code 65: malformed input
// ---------------------------------------------------------------------------

#[test]
fn invalid_conformance_corpus_is_rejected() {
    let invalid_dir = workspace_root().join("ex/conformance/invalid");
    let mut seen = 0;
    for entry in std::fs::read_dir(&invalid_dir).expect("invalid corpus dir") {
        let path = entry.expect("dir entry").path();
        if path.extension().and_then(|e| e.to_str()) != Some("spec") {
            continue;
        }
        seen += 1;
        let out = run(&["verify-prism", "--spec", path.to_str().expect("utf-8 path")]);
        assert_eq!(
            code(&out),
            65,
            "{} must be rejected as malformed, stdout: {}",
            path.display(),
            stdout_str(&out)
        );
    }
    assert!(
        seen >= 6,
        "expected at least six invalid conformance files, found {seen}"
    );
}

#[test]
fn valid_conformance_corpus_is_readable() {
    // The valid conformance files must at least parse; their quotients need
    // not be regular, so accept any verdict code but never 64/65.  The
    // regularity command accepts any number of ideal generators.
    let valid_dir = workspace_root().join("ex/conformance/valid");
    for entry in std::fs::read_dir(&valid_dir).expect("valid corpus dir") {
        let path = entry.expect("dir entry").path();
        if path.extension().and_then(|e| e.to_str()) != Some("spec") {
            continue;
        }
        let out = run(&["regularity", "--spec", path.to_str().expect("utf-8 path")]);
        assert!(
            code(&out) < 64,
            "{} should parse cleanly, got {}: {}",
            path.display(),
            code(&out),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn missing_file_is_malformed_input() {
    let out = run(&["verify-prism", "--spec", "ex/no-such-file.spec"]);
    assert_eq!(code(&out), 65);
}

#[test]
fn correspond_rejects_mismatched_ring_windows() {
    let out = run(&[
        "correspond",
        "--spec",
        "ex/p-minus-T2.spec",
        "--iprime",
        "ex/p-minus-TS.spec",
        "--matrix",
        "1",
    ]);
    assert_eq!(code(&out), 65);
}

#[test]
fn counterexample_rejects_composite_prime() {
    let out = run(&["counterexample", "--prime", "4", "--precision", "2"]);
    assert_eq!(code(&out), 65);
}

// ---------------------------------------------------------------------------
// JSON envelope
// ---------------------------------------------------------------------------

#[test]
fn json_envelope_has_stable_shape() {
    let out = run(&[
        "--format",
        "json",
        "classify",
        "--spec",
        "ex/p-minus-T2.spec",
    ]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("stdout is JSON");
    let obj = value.as_object().expect("top-level object");
    assert_eq!(obj.get("schema_version"), Some(&serde_json::json!(1)));
    assert_eq!(obj.get("command"), Some(&serde_json::json!("classify")));
    assert_eq!(obj.get("ok"), Some(&serde_json::json!(true)));
    assert!(obj.contains_key("data"), "missing data payload: {value}");
    assert_eq!(obj.len(), 4, "unexpected extra envelope keys: {value}");
}

#[test]
fn json_error_envelope_reports_failure() {
    let out = run(&[
        "--format",
        "json",
        "verify-prism",
        "--spec",
        "ex/no-such-file.spec",
    ]);
    assert_eq!(code(&out), 65);
    let value: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("stdout is JSON");
    let obj = value.as_object().expect("top-level object");
    assert_eq!(obj.get("ok"), Some(&serde_json::json!(false)));
    assert!(obj.contains_key("error"), "missing error payload: {value}");
}

#[test]
fn json_hilbert_samuel_reports_lengths() {
    let out = run(&[
        "--format",
        "json",
        "hilbert-samuel",
        "--spec",
        "ex/p-minus-T2.spec",
        "--s-max",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("stdout is JSON");
    // The quotient is a one-dimensional regular local ring: lengths 1, 2, 3.
    assert_eq!(value["data"]["lengths"], serde_json::json!([1, 2, 3]));
}
