//! Acceptance gate for the command-line layer: report output is golden-file
//! stable. Every covered invocation is run twice; both runs must agree byte
//! for byte with each other and with the committed golden file, and exit
//! with the documented code. One summary line reports the verdict.

use std::process::Command;

fn run(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_quasivar"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().expect("process exits normally"))
}

#[test]
fn criterion_9_cli_golden_stability() {
    let w3 = "tests/data/w3.inst";
    let cases: [(&[&str], &str, i32); 10] = [
        (&["validate", w3], "validate_w3", 0),
        (&["solve", "wek", w3], "solve_wek_w3", 0),
        (&["solve", "wek", w3, "--format", "machine"], "solve_wek_w3_machine", 0),
        (
            &["solve", "ekeland", w3, "--eps", "3", "--lambda", "3"],
            "solve_ekeland_w3",
            0,
        ),
        (&["solve", "takahashi", w3], "solve_takahashi_w3", 1),
        (
            &["solve", "caristi", w3, "--map", "tests/data/w3_single.map"],
            "solve_caristi_w3",
            0,
        ),
        (&["lab", "equivalence", w3], "lab_equivalence_w3", 0),
        (
            &["lab", "corpus", "--n", "4", "--count", "4", "--seed", "5", "--format", "machine"],
            "lab_corpus",
            0,
        ),
        (&["gen", "--n", "4", "--seed", "9", "--preorder", "pairs"], "gen_n4_seed9", 0),
        (&["witness", "--N", "8"], "witness_n8", 0),
    ];

    let mut failures = Vec::new();
    for (args, name, want_code) in cases {
        let golden_path = format!("{}/tests/golden/{name}.golden", env!("CARGO_MANIFEST_DIR"));
        let golden = std::fs::read(&golden_path).expect("golden file exists");
        let (first, first_code) = run(args);
        let (second, second_code) = run(args);
        if first != second || first_code != second_code {
            failures.push(format!("{name}: two consecutive runs differ"));
        } else if first != golden {
            failures.push(format!("{name}: output differs from the golden file"));
        } else if first_code != want_code {
            failures.push(format!("{name}: exit code {first_code}, expected {want_code}"));
        }
    }

    if failures.is_empty() {
        println!(
            "[PASS] criterion 9 (cli): {} invocations byte-stable across two runs and equal to committed goldens",
            cases.len()
        );
    } else {
        println!("[FAIL] criterion 9 (cli): {}", failures.join("; "));
        panic!("golden stability failures: {failures:?}");
    }
}
