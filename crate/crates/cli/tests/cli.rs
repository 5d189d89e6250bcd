//! End-to-end checks of the command-line contract: subcommand behavior,
//! the three-way exit-code split (0 certified, 1 mathematical finding,
//! 2 unusable input), and determinism of generated output.

use std::io::Write;
use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_quasivar"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
        out.status.code().expect("process exits normally"),
    )
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn validate_reports_audits_and_exits_zero() {
    let (stdout, stderr, code) = run(&["validate", &data("w3.inst")]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.contains("audits_ok: true"));
    assert!(stdout.contains("t1: false"));
}

#[test]
fn validate_flags_failed_audits_as_a_finding() {
    let (stdout, _, code) = run(&["validate", &data("w3_pairs_empty.inst")]);
    assert_eq!(code, 1);
    assert!(stdout.contains("d_ord: false"));
    assert!(stdout.contains("d_ord_witness: d(b, a) = 0 but not a <= b"));
    assert!(stdout.contains("audits_ok: false"));
}

#[test]
fn validate_rejects_unreadable_and_malformed_input() {
    let (_, stderr, code) = run(&["validate", "/nonexistent/nowhere.inst"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("cannot read"));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "version 1\npoints 2 a b\nmetric matrix\n0 1/0\n1 0\npreorder total\nphi 0 0")
        .unwrap();
    let (_, stderr, code) = run(&["validate", bad.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 4"), "stderr: {stderr}");
}

#[test]
fn wek_certifies_the_worked_example() {
    let (stdout, _, code) = run(&["solve", "wek", &data("w3.inst")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("z: c"));
    assert!(stdout.contains("path: a -> c"));
    assert!(stdout.contains("s_of_z: {c}"));
    assert!(stdout.contains("certified: true"));
}

#[test]
fn wek_accepts_labels_or_indices_for_the_start() {
    let by_label = run(&["solve", "wek", &data("w3.inst"), "--start", "c"]);
    let by_index = run(&["solve", "wek", &data("w3.inst"), "--start", "2"]);
    assert_eq!(by_label, by_index);
    assert_eq!(by_label.2, 0);
    assert!(by_label.0.contains("moves: 0"));

    let (_, stderr, code) = run(&["solve", "wek", &data("w3.inst"), "--start", "zzz"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown start point"));
}

#[test]
fn wek_outside_the_domain_is_a_finding() {
    let (stdout, _, code) = run(&["solve", "wek", &data("w3_inf.inst"), "--start", "a"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("finding:"));
    assert!(stdout.contains("at: a"));
}

#[test]
fn solving_an_unaudited_instance_is_a_finding() {
    let (stdout, _, code) = run(&["solve", "wek", &data("w3_pairs_empty.inst")]);
    assert_eq!(code, 1);
    assert!(stdout.contains("finding: instance audits not satisfied"));
}

#[test]
fn ekeland_certifies_within_the_gate_and_reports_violations_outside() {
    let (stdout, _, code) = run(&[
        "solve", "ekeland", &data("w3.inst"), "--eps", "3", "--lambda", "3",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("gamma: 1"));
    assert!(stdout.contains("z: c"));
    assert!(stdout.contains("within_radius: true"));

    let (stdout, _, code) = run(&[
        "solve", "ekeland", &data("w3.inst"), "--eps", "2", "--lambda", "1",
    ]);
    assert_eq!(code, 1);
    assert!(stdout.contains("finding: hypothesis violated"));
    assert!(stdout.contains("3 exceeds eps + inf phi = 2"));
}

#[test]
fn ekeland_rejects_nonpositive_parameters_as_usage_errors() {
    for (eps, lambda) in [("--eps=0", "--lambda=1"), ("--eps=1", "--lambda=-2")] {
        let (_, stderr, code) = run(&["solve", "ekeland", &data("w3.inst"), eps, lambda]);
        assert_eq!(code, 2, "{eps} {lambda}");
        assert!(stderr.contains("invalid parameter"));
    }
    let (_, _, code) = run(&[
        "solve", "ekeland", &data("w3.inst"), "--eps", "1/0", "--lambda", "1",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn takahashi_reports_the_first_violation_as_a_finding() {
    let (stdout, _, code) = run(&["solve", "takahashi", &data("w3.inst")]);
    assert_eq!(code, 1);
    assert!(stdout.contains("hypothesis_ok: false"));
    assert!(stdout.contains("violation: b"));
    assert!(stdout.contains("attained_at: c"));
}

#[test]
fn caristi_certifies_feasible_maps_and_flags_infeasible_ones() {
    let (stdout, _, code) = run(&[
        "solve", "caristi", &data("w3.inst"), "--map", &data("w3_single.map"),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("z: c"));
    assert!(stdout.contains("phi_equal: true"));
    assert!(stdout.contains("in_closure: true"));

    let (stdout, _, code) = run(&[
        "solve", "caristi", &data("w3.inst"), "--map", &data("w3_single_bad.map"),
    ]);
    assert_eq!(code, 1);
    assert!(stdout.contains("finding: map is not a feasible Caristi map"));
    assert!(stdout.contains("at: b"));
}

#[test]
fn caristi_accepts_set_valued_maps() {
    let (stdout, _, code) = run(&[
        "solve", "caristi", &data("w3.inst"), "--map", &data("w3_multi.map"),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("map_kind: multi"));
    assert!(stdout.contains("witness: c"));
}

#[test]
fn map_file_structure_is_checked_before_solving() {
    let cases: [(&str, &str); 4] = [
        ("map single 2\na b\nb a\n", "declares 2 points"),
        ("map single 3\na b\na c\nc c\n", "appears twice"),
        ("map single 3\na b\nb zzz\nc c\n", "unknown point"),
        ("maps 3\n", "expected `map single <count>`"),
    ];
    for (text, needle) in cases {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        let (_, stderr, code) = run(&[
            "solve", "caristi", &data("w3.inst"), "--map", f.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 2, "map text: {text:?}");
        assert!(stderr.contains(needle), "stderr {stderr:?} lacks {needle:?}");
    }
}

#[test]
fn lab_equivalence_agrees_with_the_solver_on_the_worked_example() {
    let (stdout, _, code) = run(&["lab", "equivalence", &data("w3.inst")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("wek_holds: true"));
    assert!(stdout.contains("wek_points: {b, c}"));
    assert!(stdout.contains("tak_negation: false"));
    assert!(stdout.contains("caristi_consistent: true"));
}

#[test]
fn lab_corpus_summarizes_every_run_consistently() {
    let (stdout, _, code) = run(&[
        "lab", "corpus", "--n", "5", "--count", "8", "--seed", "3", "--format", "machine",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.matches("caristi_consistent=true").count(), 8);
    assert!(stdout.contains("summary.all_consistent=true"));
    assert!(stdout.contains("runs.seed-10.preorder="));
}

#[test]
fn gen_is_deterministic_and_its_output_validates() {
    let args = ["gen", "--n", "6", "--seed", "11", "--preorder", "reachability"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first, second);
    assert_eq!(first.2, 0);

    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(first.0.as_bytes()).unwrap();
    let (stdout, _, code) = run(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(code, 0, "generated instance failed validation:\n{stdout}");
    assert!(stdout.contains("audits_ok: true"));
}

#[test]
fn gen_validates_its_parameters() {
    let (_, stderr, code) = run(&["gen", "--n", "0", "--seed", "1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("invalid parameter"));
    let (_, _, code) = run(&[
        "gen", "--n", "3", "--seed", "1", "--zero-edge-prob", "3/2",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn witness_reports_the_mechanism_and_gates_degenerate_sizes() {
    let (stdout, _, code) = run(&["witness", "--N", "6"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("forward_unit: true"));
    assert!(stdout.contains("limit_candidates: {}"));
    assert!(stdout.contains("wek_holds: false"));
    assert!(stdout.contains("tak_negation: true"));

    let (_, stderr, code) = run(&["witness", "--N", "1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("invalid parameter"));
}

#[test]
fn machine_format_flattens_the_same_values() {
    let (stdout, _, code) = run(&["solve", "wek", &data("w3.inst"), "--format", "machine"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("z=c\n"));
    assert!(stdout.contains("checks.strict_outside=true\n"));
    assert!(stdout.contains("run.path=a -> c\n"));
}

#[test]
fn digraph_instances_compile_and_solve_through_the_cli() {
    let (stdout, _, code) = run(&["validate", &data("w3_digraph.inst")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("audits_ok: true"));

    // Under the conjugate specialization order only b sits above a, so the
    // iteration from a stops at b instead of c.
    let (stdout, _, code) = run(&["solve", "wek", &data("w3_digraph.inst")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("z: b"));
}

#[test]
fn usage_errors_exit_two() {
    let (_, _, code) = run(&["solve", "ekeland", &data("w3.inst"), "--eps", "1"]);
    assert_eq!(code, 2, "missing --lambda");
    let (_, _, code) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}
