use std::process::Command;

fn ogsr(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ogsr"))
        .args(args)
        .output()
        .expect("spawn ogsr");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn field<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

#[test]
fn axioms_exit_codes() {
    assert_eq!(ogsr(&["axioms", "--ring", "rat"]).0, 0);
    assert_eq!(ogsr(&["axioms", "--ring", "fixture:all-positive"]).0, 1);
    assert_eq!(ogsr(&["axioms", "--ring", "fixture:noncomm-add"]).0, 1);
    let (code, _, err) = ogsr(&["axioms", "--ring", "octonions"]);
    assert_eq!(code, 2);
    assert!(err.contains("octonions"));
}

#[test]
fn residue_inversion() {
    let (code, out, _) = ogsr(&[
        "invert",
        "--ring",
        "padic:5,4",
        "--x",
        "-4",
        "--seminorm",
        "padic",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "status"), Some("ExactInverse"));
    assert_eq!(field(&out, "inverse_candidate"), Some("156"));
    assert_eq!(field(&out, "iterations"), Some("4"));
}

#[test]
fn seminormed_hypothesis_failure_exits_one() {
    let (code, out, _) = ogsr(&[
        "invert",
        "--ring",
        "series:8",
        "--x",
        "[0,1]",
        "--seminorm",
        "ord2",
    ]);
    assert_eq!(code, 1);
    assert_eq!(field(&out, "status"), Some("HypothesisFailed"));
}

#[test]
fn short_budget_exits_three() {
    let (code, out, _) = ogsr(&[
        "invert",
        "--ring",
        "rat",
        "--x",
        "1/2",
        "--budget",
        "4",
        "--family-depth",
        "16",
    ]);
    assert_eq!(code, 3);
    assert_eq!(field(&out, "status"), Some("BudgetExhausted"));
}

#[test]
fn dual_two_sided() {
    let (code, out, _) = ogsr(&[
        "invert",
        "--ring",
        "pair:lex,dual",
        "--x",
        "(1,-1)",
        "--witness",
        "(2,0)",
        "--direction",
        "both",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "direction"), Some("two-sided"));
    assert_eq!(field(&out, "inverse_candidate"), Some("(1,1)"));
}

#[test]
fn topology_queries() {
    let open = "open{ below: [0], above: [5] }";
    let (code, out, _) = ogsr(&[
        "topology", "--ring", "int", "--op", "contains", "--open", open, "--x", "3",
    ]);
    assert_eq!((code, out.trim()), (0, "true"));
    let (code, out, _) = ogsr(&[
        "topology",
        "--ring",
        "int",
        "--op",
        "translate",
        "--open",
        open,
        "--a",
        "2",
    ]);
    assert_eq!((code, out.trim()), (0, "open{ below: [2], above: [7] }"));
    let (code, out, _) = ogsr(&[
        "topology",
        "--ring",
        "rat",
        "--op",
        "sup-limit",
        "--sup",
        "1",
        "--sequence",
        "dyadic",
        "--open",
        "open{ below: [1/2], above: [2] }",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "verdict"), Some("pass"));
    assert_eq!(
        ogsr(&["topology", "--ring", "int", "--op", "contains", "--open", "garbage", "--x", "3"]).0,
        2
    );
}

#[test]
fn suite_selection() {
    let (code, out, _) = ogsr(&["suite", "--id", "remark-antilex"]);
    assert_eq!(code, 0);
    assert!(out.contains("suite: 1/1 scenarios meet expectations"));
    assert_eq!(ogsr(&["suite", "--id", "nope"]).0, 2);
}

#[test]
fn config_files_and_overrides() {
    let dir = std::env::temp_dir().join(format!("ogsr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(
        &good,
        r#"{"ring": "rat", "x": "1/2", "witness": "2", "budget": 32, "family-depth": 16}"#,
    )
    .unwrap();
    let (code, out, _) = ogsr(&["invert", "--config", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "status"), Some("ConvergentEvidence"));
    // Flags win over the file.
    let (code, _, _) = ogsr(&[
        "invert",
        "--config",
        good.to_str().unwrap(),
        "--budget",
        "4",
    ]);
    assert_eq!(code, 3);

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"rng": "rat"}"#).unwrap();
    let (code, _, err) = ogsr(&["invert", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("rng"));
    assert_eq!(
        ogsr(&[
            "invert",
            "--config",
            dir.join("missing.json").to_str().unwrap()
        ])
        .0,
        2
    );

    let report = dir.join("report.txt");
    let (code, out, _) = ogsr(&[
        "suite",
        "--id",
        "optimality-z",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&report).unwrap(), out);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "axioms",
        "--ring",
        "series:8",
        "--seed",
        "7",
        "--samples",
        "200",
    ];
    assert_eq!(ogsr(&args).1, ogsr(&args).1);
    assert_eq!(ogsr(&["suite"]).1, ogsr(&["suite"]).1);
}
