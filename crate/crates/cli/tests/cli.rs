use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data")).join(name)
}

fn argdial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_argdial"))
        .args(args)
        .env_remove("ARGDIAL_SCHEME_PATH")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn schemes_list_shows_the_six_builtins() {
    let o = argdial(&["schemes", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let ids: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    let mut want = vec![
        "defeasible_modus_ponens",
        "argument_from_sign",
        "argument_from_an_established_rule",
        "practical_inference",
        "ethotic",
        "ethotic_mathematical",
    ];
    want.sort();
    assert_eq!(ids, want);
}

#[test]
fn schemes_show_prints_parsable_dsl() {
    let o = argdial(&["schemes", "show", "argument_from_sign"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = argdial::formats::parse_scheme_dsl(&stdout(&o));
    assert!(doc.is_clean());
    assert!(
        doc.schemes[0].same_structure(&argdial::library::builtin("argument_from_sign").unwrap())
    );
    assert_eq!(argdial(&["schemes", "show", "nope"]).status.code(), Some(1));
}

#[test]
fn instantiate_with_unbound_variable_fails() {
    let o = argdial(&[
        "instantiate",
        "defeasible_modus_ponens",
        "--bind",
        "P=it rains",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("incomplete substitution"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn instantiate_prints_the_layout() {
    let o = argdial(&[
        "instantiate",
        "defeasible_modus_ponens",
        "--bind",
        "P=it rains",
        "--bind",
        "Q=the street is wet",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("  claim: Therefore, the street is wet."));
    assert!(text.contains("  cq2 undercut: Is the present case an exception"));
}

#[test]
fn simulate_embedded_inquiry_reports_three_shifts() {
    let o = argdial(&["simulate", data("embedded_inquiry.dlg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let report: Vec<&str> = text
        .lines()
        .skip_while(|l| *l != "shift-report")
        .skip(1)
        .take_while(|l| l.starts_with("  shift "))
        .collect();
    assert_eq!(
        report,
        [
            "  shift 3 embed inquiry persuasion",
            "  shift 10 pop persuasion inquiry",
            "  shift 12 replace inquiry information-seeking-pedagogical",
        ]
    );
}

#[test]
fn shift_report_replays_a_rendered_transcript() {
    let o = argdial(&["simulate", data("embedded_inquiry.dlg").to_str().unwrap()]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("embedded_inquiry.transcript");
    std::fs::write(&path, &o.stdout).unwrap();
    let r = argdial(&["shift-report", path.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
    assert_eq!(stdout(&r).lines().count(), 3);

    let tampered = stdout(&o).replace("  shift 10 pop persuasion inquiry\n", "");
    std::fs::write(&path, tampered).unwrap();
    assert_eq!(
        argdial(&["shift-report", path.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn sceptic_in_oracular_dialogue_poses_nothing() {
    let o = argdial(&[
        "simulate",
        data("oracle.dlg").to_str().unwrap(),
        "--policy-proponent",
        "sceptic",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(!text.contains("pose-cq"));
    assert!(text.contains("status closed"));
}

#[test]
fn prover_answers_the_sceptic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.dlg");
    std::fs::write(
        &path,
        "dialogue persuasion\nparticipants pro con\n\
         pro argue a argument_from_sign A=\"smoke\" B=\"fire\"\n",
    )
    .unwrap();
    let o = argdial(&[
        "simulate",
        path.to_str().unwrap(),
        "--policy-proponent",
        "prover",
        "--policy-respondent",
        "sceptic",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("con pose-cq a 1"));
    assert!(text.contains("pro answer-cq a 1"));
    assert!(text.contains("con concede \"fire is true in this situation.\""));
    assert!(text.contains("  a IN presumable"));
}

#[test]
fn evaluate_is_stable_across_runs() {
    let file = data("chain.arg");
    let file = file.to_str().unwrap();
    for args in [
        vec!["evaluate", file],
        vec!["evaluate", file, "--report"],
        vec!["evaluate", file, "--format", "machine"],
    ] {
        let a = argdial(&args);
        let b = argdial(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
    let machine = argdial(&["evaluate", file, "--format", "machine"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&machine)).unwrap();
    assert_eq!(v["arguments"].as_array().unwrap().len(), 3);
}

#[test]
fn sign_graph_evaluates_out() {
    let o = argdial(&["evaluate", data("sign.arg").to_str().unwrap(), "--report"]);
    assert!(stdout(&o).starts_with("s1 [argument_from_sign] OUT"));
}

#[test]
fn validate_keeps_input_order_and_flags_problems() {
    let files = ["sign.scheme", "broken.scheme", "embedded_inquiry.dlg", "chain.arg"].map(data);
    let args: Vec<&str> = std::iter::once("validate")
        .chain(files.iter().map(|p| p.to_str().unwrap()))
        .collect();
    let o = argdial(&args);
    assert_eq!(o.status.code(), Some(1));
    let ok: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(ok.len(), 3);
    assert!(ok[0].contains("sign.scheme: ok"));
    assert!(ok[1].contains("embedded_inquiry.dlg: ok"));
    assert!(ok[2].contains("chain.arg: ok"));
    assert!(stderr(&o).contains("broken.scheme:1:1: scheme `no_conclusion`"));
}

#[test]
fn scheme_path_adds_schemes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(data("sign.scheme"), dir.path().join("sign.scheme")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_argdial"))
        .args(["schemes", "list"])
        .env("ARGDIAL_SCHEME_PATH", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sign_by_hand"));
}

#[test]
fn localize_renames_words() {
    let o = argdial(&[
        "localize",
        "ethotic",
        "--map",
        "moral=mathematical",
        "--as",
        "ethotic_local",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = argdial::formats::parse_scheme_dsl(&stdout(&o));
    assert!(
        doc.schemes[0].same_structure(&argdial::library::builtin("ethotic_mathematical").unwrap())
    );
    let taken = argdial(&[
        "localize",
        "ethotic",
        "--map",
        "moral=mathematical",
        "--as",
        "ethotic_mathematical",
    ]);
    assert_eq!(taken.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(argdial(&["bogus"]).status.code(), Some(2));
    assert_eq!(argdial(&[]).status.code(), Some(2));
    assert_eq!(
        argdial(&["instantiate", "ethotic", "--bind", "novalue"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        argdial(&["evaluate", "x.arg", "--report", "--format", "machine"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(argdial(&["--help"]).status.code(), Some(0));
}

#[test]
fn violations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.dlg");
    std::fs::write(&path, "dialogue eristic\nparticipants a b\na pose-cq x 1\n").unwrap();
    let o = argdial(&["simulate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("status violation"));
}
