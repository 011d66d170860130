use std::process::{Command, Output};

fn qfsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfsplit")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let out = qfsplit(&full);
    let v = serde_json::from_slice(&out.stdout).expect("valid json");
    (out.status.code().unwrap(), v)
}

#[test]
fn fpure_xy() {
    let (code, v) = json(&["fpure", "--p", "2", "--vars", "x,y", "x*y"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "fpure");
    assert_eq!(v["verdict"], "F_PURE");
    assert_eq!(v["soundness"], "EXACT");
    assert_eq!(v["certificate"]["escape"]["monomial"], "x*y");
}

#[test]
fn fpure_negative_is_definitive() {
    let (code, v) = json(&["fpure", "--p", "2", "--vars", "x,y,z", "z^2+x^3+y^2*z"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "NOT_F_PURE");
}

#[test]
fn qfr_witness_replay() {
    let args = [
        "qfr", "--p", "2", "--vars", "x,y,z", "--n", "2", "--c", "x^4", "--e-range", "1..8",
        "--witness", "x^7*y^15*z", "z^2+x^3+y^2*z",
    ];
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "QFR_CERTIFIED");
    assert_eq!(v["soundness"], "EXACT");
    let cert = &v["certificate"];
    assert_eq!(cert["e"], 6);
    assert_eq!(cert["multiplier"], "x^7*y^15*z");
    assert_eq!(cert["convention"], "STANDARD");
    assert_eq!(cert["escape"]["monomial"], "x*y*z");
    assert_eq!(v["parameters"]["c"], "x^4");
}

#[test]
fn qfr_bad_witness_fails_loudly() {
    let out = qfsplit(&[
        "qfr", "--p", "2", "--vars", "x,y,z", "--n", "2", "--c", "x^4", "--e", "6",
        "--witness", "x*y*z", "z^2+x^3+y^2*z",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(stdout(&out).contains("verdict: INCONCLUSIVE"));
}

#[test]
fn height_of_fermat_cubic() {
    let (code, v) = json(&["height", "--p", "2", "--vars", "x,y,z", "--n", "5", "x^3+y^3+z^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "HEIGHT");
    assert_eq!(v["certificate"]["height"], 2);
}

#[test]
fn height_inconclusive_exits_two() {
    let (code, v) = json(&["height", "--p", "2", "--vars", "x", "--n", "3", "x^2"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "INCONCLUSIVE");
}

#[test]
fn usage_and_input_errors_exit_one() {
    let cases: [&[&str]; 5] = [
        &["fpure", "--p", "4", "--vars", "x,y", "x*y"],
        &["fpure", "--p", "2", "--vars", "x,y", "x*+y"],
        &["fpure", "--p", "2", "--vars", "x,y", "x*w"],
        &["fpure", "--p", "2", "--vars", "x,y", "--bogus", "x*y"],
        &["qfr", "--p", "2", "--vars", "x", "--e", "1", "--e-range", "1..2", "--c", "x", "x"],
    ];
    for args in cases {
        let out = qfsplit(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(qfsplit(&["--help"]).status.code(), Some(0));
}

#[test]
fn text_and_json_carry_the_same_fields() {
    let args = ["qfe", "--p", "2", "--vars", "x,y,z", "--n", "2", "--e", "1", "z^2+x^3+y^2*z"];
    let text = stdout(&qfsplit(&args));
    let (_, v) = json(&args);
    assert!(text.contains(&format!("verdict: {}\n", v["verdict"].as_str().unwrap())));
    assert!(text.contains(&format!("certificate.multiplier: {}\n", v["certificate"]["multiplier"].as_str().unwrap())));
    assert!(text.contains("ring.vars: x, y, z\n"));
}

#[test]
fn output_is_identical_across_thread_counts() {
    let base = ["qfe", "--p", "2", "--vars", "x,y,z", "--n", "2", "--e", "5", "--json", "z^2+x^3+y^2*z"];
    let runs: Vec<Vec<u8>> = [None, Some("1"), Some("3")]
        .into_iter()
        .map(|t| {
            let mut args = base.to_vec();
            if let Some(t) = t {
                args.extend(["--threads", t]);
            }
            let out = qfsplit(&args);
            assert_eq!(out.status.code(), Some(0));
            out.stdout
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn tau_lists_closure() {
    let (code, v) = json(&["tau", "--p", "2", "--vars", "x,y,z", "--c", "x^4", "z^2+x^3+y^2*z"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["test_element"], "x");
    let elements = v["certificate"]["elements"].as_array().unwrap();
    assert!(elements.iter().any(|e| e == "x"));
}

#[test]
fn witt_selftest_passes() {
    let out = qfsplit(&["witt-selftest", "--p", "3", "--n", "3", "--trials", "50", "--seed", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 5);
    let again = qfsplit(&["witt-selftest", "--p", "3", "--n", "3", "--trials", "50", "--seed", "1", "--json"]);
    assert_eq!(out.stdout, again.stdout);
}
