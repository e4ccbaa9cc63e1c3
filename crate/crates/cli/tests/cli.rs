//! End-to-end tests of the command-line binary: exit codes, report text,
//! byte-determinism, and agreement with direct library calls.

use std::path::{Path, PathBuf};
use std::process::Command;

use cnfdecomp::fixtures::non_monotone_two_input_circuit;
use cnfdecomp::io::emit_gates;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_cnfdecomp"))
        .args(args)
        .output()
        .expect("the binary runs");
    Output {
        code: out.status.code().expect("the binary exits normally"),
        stdout: String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr is UTF-8"),
    }
}

/// Writes a fixture to a file in `dir` and returns its path.
fn fixture_file(dir: &Path, name: &str, file: &str) -> PathBuf {
    let path = dir.join(file);
    let out = run(["fixtures", name, "-o", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "fixtures {name}: {}", out.stderr);
    path
}

#[test]
fn fixtures_are_deterministic_across_runs() {
    for name in [
        "example1",
        "example1-table",
        "example2",
        "example3",
        "example4",
    ] {
        let first = run(["fixtures", name]);
        let second = run(["fixtures", name]);
        assert_eq!(first.code, 0, "{name}: {}", first.stderr);
        assert!(!first.stdout.is_empty(), "{name} printed nothing");
        assert_eq!(first.stdout, second.stdout, "{name} differs between runs");
    }
}

#[test]
fn encoding_the_fixture_table_reproduces_the_fixture_encoding() {
    let dir = tempfile::tempdir().unwrap();
    let table = fixture_file(dir.path(), "example1-table", "pair.tbl");
    let encoded = run(["encode-table".as_ref(), table.as_os_str()]);
    assert_eq!(encoded.code, 0, "{}", encoded.stderr);
    assert_eq!(encoded.stdout, run(["fixtures", "example1"]).stdout);
}

#[test]
fn validate_passes_matching_oracles_and_fails_mismatched_ones() {
    let dir = tempfile::tempdir().unwrap();
    let table = fixture_file(dir.path(), "example1-table", "pair.tbl");
    let encoding = fixture_file(dir.path(), "example1", "prop.cnf");
    let checker = fixture_file(dir.path(), "example2", "check.cnf");
    let oracle = format!("table:{}", table.display());

    let pass = run([
        "validate".as_ref(),
        encoding.as_os_str(),
        "--oracle".as_ref(),
        oracle.as_ref(),
    ]);
    assert_eq!(pass.code, 0, "{}", pass.stderr);
    assert!(pass.stdout.contains("states-checked=9"), "{}", pass.stdout);
    assert!(pass.stdout.contains("verdict=pass"), "{}", pass.stdout);

    let pass = run([
        "validate".as_ref(),
        checker.as_os_str(),
        "--oracle".as_ref(),
        oracle.as_ref(),
    ]);
    assert_eq!(pass.code, 0, "{}", pass.stderr);

    // The pair table is not the alldifferent constraint, so validating
    // against that oracle reports state counterexamples on stdout.
    let fail = run([
        "validate".as_ref(),
        checker.as_os_str(),
        "--oracle".as_ref(),
        "alldiff:2:2".as_ref(),
    ]);
    assert_eq!(fail.code, 1, "{}", fail.stderr);
    assert!(
        fail.stdout.contains("issue=output-mismatch"),
        "{}",
        fail.stdout
    );
    assert!(fail.stdout.contains("verdict=fail"), "{}", fail.stdout);

    let refused = run([
        "validate".as_ref(),
        checker.as_os_str(),
        "--oracle".as_ref(),
        "alldiff:3:3".as_ref(),
    ]);
    assert_eq!(refused.code, 2);
    assert!(
        refused.stderr.contains("does not match"),
        "{}",
        refused.stderr
    );
}

#[test]
fn lowering_round_trips_through_circuit_and_clause_forms() {
    let dir = tempfile::tempdir().unwrap();
    let checker = fixture_file(dir.path(), "example4", "chained.cnf");
    let gates = dir.path().join("chained.gates");

    let out = run([
        "to-circuit".as_ref(),
        checker.as_os_str(),
        "-o".as_ref(),
        gates.as_os_str(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let listing = std::fs::read_to_string(&gates).unwrap();
    assert_eq!(
        listing.lines().filter(|l| l.starts_with("gate ")).count(),
        9
    );
    assert!(listing.contains("gate 15 OR 13 14 6"), "{listing}");

    let equiv = run([
        "verify-equiv".as_ref(),
        checker.as_os_str(),
        gates.as_os_str(),
    ]);
    assert_eq!(equiv.code, 0, "{}", equiv.stderr);
    assert!(
        equiv.stdout.contains("states-checked=127"),
        "{}",
        equiv.stdout
    );
    assert!(
        equiv.stdout.contains("verdict=equivalent"),
        "{}",
        equiv.stdout
    );

    let reencoded = dir.path().join("lowered.cnf");
    let out = run([
        "to-cnf".as_ref(),
        gates.as_os_str(),
        "--domains".as_ref(),
        "7".as_ref(),
        "-o".as_ref(),
        reencoded.as_os_str(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let equiv = run([
        "verify-equiv".as_ref(),
        checker.as_os_str(),
        reencoded.as_os_str(),
    ]);
    assert_eq!(equiv.code, 0, "{}", equiv.stderr);
    assert!(
        equiv.stdout.contains("verdict=equivalent"),
        "{}",
        equiv.stdout
    );
}

#[test]
fn wrapping_the_generated_encoding_matches_the_hand_built_checker() {
    let dir = tempfile::tempdir().unwrap();
    let encoding = fixture_file(dir.path(), "example1", "prop.cnf");
    let checker = fixture_file(dir.path(), "example2", "check.cnf");
    let wrapped = dir.path().join("wrapped.cnf");

    let out = run([
        "prop-to-checker".as_ref(),
        encoding.as_os_str(),
        "-o".as_ref(),
        wrapped.as_os_str(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let equiv = run([
        "verify-equiv".as_ref(),
        wrapped.as_os_str(),
        checker.as_os_str(),
    ]);
    assert_eq!(equiv.code, 0, "{}", equiv.stderr);
    assert!(
        equiv.stdout.contains("verdict=equivalent"),
        "{}",
        equiv.stdout
    );
}

#[test]
fn normalize_leaves_clean_checkers_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let checker = fixture_file(dir.path(), "example2", "check.cnf");
    for mode in ["remove", "substitute"] {
        let out = run([
            "normalize".as_ref(),
            checker.as_os_str(),
            "--strip-mode".as_ref(),
            mode.as_ref(),
        ]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(
            out.stdout,
            std::fs::read_to_string(&checker).unwrap(),
            "mode {mode}"
        );
    }
}

#[test]
fn to_cnf_refuses_circuits_with_negation() {
    let dir = tempfile::tempdir().unwrap();
    let gates = dir.path().join("mixed.gates");
    std::fs::write(&gates, emit_gates(&non_monotone_two_input_circuit())).unwrap();
    let out = run(["to-cnf".as_ref(), gates.as_os_str()]);
    assert_eq!(out.code, 2);
    assert!(
        out.stderr.contains("not structurally monotone"),
        "{}",
        out.stderr
    );
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(run(["no-such-verb"]).code, 2);
    assert_eq!(run(["fixtures", "example99"]).code, 2);
    assert_eq!(
        run(["validate", "/nonexistent.cnf", "--oracle", "alldiff:2:2"]).code,
        2
    );

    let dir = tempfile::tempdir().unwrap();
    let checker = fixture_file(dir.path(), "example2", "check.cnf");
    let table = fixture_file(dir.path(), "example1-table", "pair.tbl");
    let oracle = format!("table:{}", table.display());
    let over_budget = run([
        "validate".as_ref(),
        checker.as_os_str(),
        "--oracle".as_ref(),
        oracle.as_ref(),
        "--budget".as_ref(),
        "3".as_ref(),
    ]);
    assert_eq!(over_budget.code, 2, "{}", over_budget.stdout);
    assert!(
        over_budget.stderr.contains("budget"),
        "{}",
        over_budget.stderr
    );
}
