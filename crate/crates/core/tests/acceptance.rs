//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use argdial::dialogue::{
    dialogue_type, dialogue_types, new_dialogue, replay, run_simulation, shift_report, types_for,
    Act, DialogueError, DialogueTypeId, ExhaustiveSceptic, InitialSituation, MainGoal, Move,
    MoveKind, ScriptLine, ScriptPolicy, ShiftMode, Side, Status,
};
use argdial::evaluation::{ArgumentGraph, AttackKind, Framework, Label};
use argdial::formats::{
    export_graph, parse_graph, parse_scheme_dsl, parse_script, parse_transcript,
    render_transcript, serialize_scheme, serialize_schemes, serialize_script, verify_transcript,
    ScriptDocument, ScriptHeader,
};
use argdial::library::{builtin, builtin_schemes, SchemeRegistry, TermMap};
use argdial::scheme::{validate_scheme, ArgId, CqKind, Qualifier, Scheme};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
const GOLDEN: &str = include_str!("golden/builtin_schemes.txt");

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{DATA}/{name}")).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// 1

fn render_golden(s: &Scheme) -> String {
    let mut out = format!("[{}]\n", s.id);
    for p in &s.premises {
        out.push_str(&format!("{}: {}\n", p.role, p.template.render_schematic()));
    }
    out.push_str(&format!("{}: {}\n", s.conclusion.role, s.render_conclusion()));
    for cq in &s.cqs {
        out.push_str(&format!("cq{}: {}\n", cq.index, cq.template.render_schematic()));
    }
    out
}

fn builtin_fidelity() -> Outcome {
    let schemes = builtin_schemes();
    ensure(schemes.len() == 6, || format!("{} built-ins", schemes.len()))?;
    let registry = SchemeRegistry::with_builtins();
    for s in &schemes {
        let report = validate_scheme(s);
        ensure(report.passed(), || format!("{} fails validation", s.id))?;
        ensure(registry.contains(&s.id), || format!("{} not registered", s.id))?;
    }
    let expected: Vec<&str> = GOLDEN
        .split("\n\n")
        .map(str::trim)
        .filter(|b| b.starts_with('['))
        .collect();
    ensure(expected.len() == 6, || format!("golden file has {} blocks", expected.len()))?;
    for (s, want) in schemes.iter().zip(&expected) {
        let got = render_golden(s);
        if got.trim() != *want {
            let diff = got
                .trim()
                .lines()
                .zip(want.lines())
                .find(|(a, b)| a != b)
                .map(|(a, b)| format!("got `{a}`, want `{b}`"))
                .unwrap_or_else(|| "line count differs".into());
            return Err(format!("{}: {diff}", s.id));
        }
    }
    Ok("6 schemes valid and verbatim".into())
}

// 2

fn localization_identity() -> Outcome {
    let registry = SchemeRegistry::with_builtins();
    let map = TermMap::new([("moral", "mathematical")]).map_err(|e| e.to_string())?;
    let local = registry
        .localize("ethotic", &map, "ethotic_localized")
        .map_err(|e| e.to_string())?;
    let target = builtin("ethotic_mathematical").unwrap();
    ensure(local.scheme.same_structure(&target), || {
        "localized scheme differs structurally from ethotic_mathematical".into()
    })?;
    ensure(local.warnings.is_empty(), || format!("warnings: {:?}", local.warnings))?;
    ensure(validate_scheme(&local.scheme).passed(), || "localized scheme invalid".into())?;
    let a = serialize_scheme(&local.scheme);
    let b = serialize_scheme(&target);
    ensure(a.lines().skip(1).eq(b.lines().skip(1)), || {
        "serializations differ beyond the header line".into()
    })?;
    Ok("structurally equal".into())
}

// 3

type Scenario = (&'static str, ArgumentGraph, Vec<(&'static str, Label)>);

fn hand_scenarios() -> Vec<Scenario> {
    let mut r = rng(3);
    let dmp = builtin("defeasible_modus_ponens").unwrap();
    let sign = builtin("argument_from_sign").unwrap();
    let eth = builtin("ethotic").unwrap();
    let id = |s: &str| ArgId::new(s);
    let mut out = Vec::new();

    let mut g = ArgumentGraph::new();
    g.add_argument(common::instance(&mut r, &dmp, "a")).unwrap();
    let posed = g.pose_cq(&id("a"), 1).unwrap();
    out.push(("posed backing challenge", posed.clone(), vec![("a", Label::Out)]));
    let answered = posed.answer_cq(&id("a"), 1, "the rule is documented").unwrap();
    out.push(("answered backing challenge", answered, vec![("a", Label::In)]));
    let undercut = g.pose_cq(&id("a"), 2).unwrap();
    out.push(("posed undercut", undercut, vec![("a", Label::Out)]));

    let mut g = ArgumentGraph::new();
    g.add_argument(common::instance(&mut r, &eth, "e")).unwrap();
    out.push(("qualifier challenge", g.pose_cq(&id("e"), 3).unwrap(), vec![("e", Label::In)]));

    let mut g = ArgumentGraph::new();
    g.add_argument(common::instance(&mut r, &sign, "a")).unwrap();
    g.add_argument(common::instance(&mut r, &sign, "b")).unwrap();
    g.add_attack(&id("a"), &id("b"), AttackKind::Rebut).unwrap();
    g.add_attack(&id("b"), &id("a"), AttackKind::Rebut).unwrap();
    out.push(("mutual rebuttal", g.clone(), vec![("a", Label::Undec), ("b", Label::Undec)]));
    let broken = g.pose_cq(&id("b"), 1).unwrap();
    out.push((
        "challenge breaks the tie",
        broken,
        vec![("a", Label::In), ("b", Label::Out)],
    ));

    let mut g = ArgumentGraph::new();
    for a in ["a", "b", "c"] {
        g.add_argument(common::instance(&mut r, &dmp, a)).unwrap();
    }
    g.add_attack(&id("a"), &id("b"), AttackKind::Undercut).unwrap();
    g.add_attack(&id("b"), &id("c"), AttackKind::Undercut).unwrap();
    out.push((
        "chain",
        g.clone(),
        vec![("a", Label::In), ("b", Label::Out), ("c", Label::In)],
    ));
    g.add_attack(&id("c"), &id("a"), AttackKind::Undercut).unwrap();
    out.push((
        "odd cycle",
        g.clone(),
        vec![("a", Label::Undec), ("b", Label::Undec), ("c", Label::Undec)],
    ));
    let g = g.pose_cq(&id("a"), 2).unwrap();
    out.push((
        "challenge on a cycle",
        g,
        vec![("a", Label::Out), ("b", Label::In), ("c", Label::Out)],
    ));

    let mut g = ArgumentGraph::new();
    g.add_argument(common::instance(&mut r, &sign, "s")).unwrap();
    g.add_attack(&id("s"), &id("s"), AttackKind::Rebut).unwrap();
    out.push(("self attack", g, vec![("s", Label::Undec)]));

    let reg = SchemeRegistry::with_builtins();
    for (name, file, expect) in [
        ("sign file", "sign.arg", vec![("s1", Label::Out)]),
        ("chain file", "chain.arg", vec![]),
    ] {
        let doc = parse_graph(&data(file), &reg);
        assert!(doc.diagnostics.is_empty(), "{file}: {:?}", doc.diagnostics);
        out.push((name, doc.graph, expect));
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(0x6a7f);
    let mut graphs = 0;
    for i in 0..1000 {
        let g = common::random_graph(&mut r, 12);
        ensure(g.nodes().len() <= 12, || format!("graph {i} too large"))?;
        let brute = g.brute_force_labelling().map_err(|e| e.to_string())?;
        ensure(g.grounded_labelling() == brute, || format!("argument graph {i} differs"))?;
        graphs += 1;
    }
    for i in 0..1000 {
        let n = r.gen_range(1..=12);
        let p = r.gen_range(0.05..0.4);
        let mut f = Framework::new(n);
        for a in 0..n {
            for b in 0..n {
                if r.gen_bool(p) {
                    f.add_attack(a, b);
                }
            }
        }
        ensure(f.brute_force().as_deref() == Some(&f.grounded()[..]), || {
            format!("framework {i} differs")
        })?;
        graphs += 1;
    }
    let scenarios = hand_scenarios();
    for (name, g, expect) in &scenarios {
        let grounded = g.grounded_labelling();
        let brute = g.brute_force_labelling().map_err(|e| e.to_string())?;
        ensure(grounded == brute, || format!("scenario `{name}` differs"))?;
        for (arg, label) in expect {
            let got = grounded.argument(&ArgId::new(*arg));
            ensure(got == Some(*label), || format!("scenario `{name}`: {arg} is {got:?}"))?;
        }
    }
    Ok(format!("{graphs} random graphs, {} scenarios", scenarios.len()))
}

// 4

fn reinstatement() -> Outcome {
    let mut r = rng(4);
    let mut cases = 0;
    for s in builtin_schemes() {
        for cq in s.cqs.iter().filter(|c| c.kind != CqKind::QualifierChallenge) {
            let mut g = ArgumentGraph::new();
            g.add_argument(common::instance(&mut r, &s, "x")).unwrap();
            let x = ArgId::new("x");
            ensure(g.grounded_labelling().argument(&x) == Some(Label::In), || {
                format!("{} starts out of IN", s.id)
            })?;
            let posed = g.pose_cq(&x, cq.index).map_err(|e| e.to_string())?;
            ensure(posed.grounded_labelling().argument(&x) == Some(Label::Out), || {
                format!("{} cq{} pose does not defeat", s.id, cq.index)
            })?;
            let answered = posed
                .answer_cq(&x, cq.index, "it has been addressed")
                .map_err(|e| e.to_string())?;
            ensure(answered.grounded_labelling().argument(&x) == Some(Label::In), || {
                format!("{} cq{} answer does not reinstate", s.id, cq.index)
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} scheme/question pairs"))
}

// 5

fn table_coherence() -> Outcome {
    let people = common::participants();
    let mut valid = 0;
    let mut rejected = 0;
    for &goal in MainGoal::ALL {
        for &situation in InitialSituation::ALL {
            let cell = types_for(goal, situation);
            for &kind in DialogueTypeId::ALL {
                let made = new_dialogue(kind, situation, goal, people.clone());
                let fits = cell.is_some_and(|c| c.contains(&kind));
                ensure(made.is_ok() == fits, || {
                    format!("{kind} in ({goal}, {situation}): {made:?}")
                })?;
            }
            match cell {
                Some(c) => {
                    ensure(!c.is_empty(), || "empty cell".into())?;
                    valid += 1;
                }
                None => {
                    for &kind in DialogueTypeId::ALL {
                        let e = new_dialogue(kind, situation, goal, people.clone());
                        ensure(matches!(e, Err(DialogueError::Incoherent { .. })), || {
                            format!("N/A cell ({goal}, {situation}) accepted {kind}")
                        })?;
                    }
                    rejected += 1;
                }
            }
        }
    }
    ensure(valid == 6 && rejected == 3, || format!("{valid} valid, {rejected} N/A"))?;
    for t in dialogue_types() {
        ensure(new_dialogue(t.id, t.situation, t.goal, people.clone()).is_ok(), || {
            format!("{} rejected in its own cell", t.id)
        })?;
    }
    Ok("6 cells constructed, 3 N/A rejected".into())
}

// 6

fn oracular_restriction() -> Outcome {
    let reg = SchemeRegistry::with_builtins();
    let doc = parse_script(&data("oracle.dlg"), &reg);
    ensure(doc.diagnostics.is_empty(), || format!("{:?}", doc.diagnostics))?;
    let header = doc.header.clone().unwrap();
    let initial = header.initial_state().map_err(|e| e.to_string())?;
    let asker = initial.participant(Side::Proponent).clone();
    let oracle = initial.participant(Side::Respondent).clone();

    let after = initial
        .apply_move(&Move::new(oracle.clone(), Act::Assert("the answer is 42".into())))
        .map_err(|e| e.to_string())?;
    let challenge = Move::new(
        asker.clone(),
        Act::PoseCq {
            arg: ArgId::new("the answer is 42"),
            cq: 1,
        },
    );
    match after.apply_move(&challenge) {
        Err(DialogueError::Violation(v)) if v.kind == MoveKind::PoseCq => {}
        other => return Err(format!("pose-cq was not rejected: {other:?}")),
    }
    let legal = after.legal_moves().map_err(|e| e.to_string())?;
    ensure(!legal.iter().any(|(_, k)| *k == MoveKind::PoseCq), || {
        "pose-cq listed as legal".into()
    })?;
    let argue = Move::new(
        oracle.clone(),
        Act::Argue(common::instance(&mut rng(6), &builtin("ethotic").unwrap(), "o")),
    );
    ensure(after.apply_move(&argue).is_err(), || "oracle may argue".into())?;

    let mut sceptic = ExhaustiveSceptic;
    let mut script = ScriptPolicy::solo(doc.lines, &oracle);
    let t = run_simulation(&initial, &mut sceptic, &mut script, 50).map_err(|e| e.to_string())?;
    let posed = t
        .moves()
        .iter()
        .filter(|m| m.kind() == MoveKind::PoseCq)
        .count();
    ensure(posed == 0, || format!("sceptic posed {posed} questions"))?;
    ensure(t.status == Status::Closed, || format!("status {}", t.status.as_str()))?;
    ensure(
        t.final_state.commitments(Side::Proponent).contains("the answer is 42"),
        || "asker did not take the answer on".into(),
    )?;
    Ok(format!("rejected; sceptic closed after {} turns", t.turns.len()))
}

// 7

fn embedded_inquiry_scenario() -> Outcome {
    let reg = SchemeRegistry::with_builtins();
    let doc = parse_script(&data("embedded_inquiry.dlg"), &reg);
    ensure(doc.diagnostics.is_empty(), || format!("{:?}", doc.diagnostics))?;
    let initial = doc.header.as_ref().unwrap().initial_state().map_err(|e| e.to_string())?;
    let run = || {
        let (mut a, mut b) = ScriptPolicy::pair(doc.lines.clone());
        run_simulation(&initial, &mut a, &mut b, 100)
    };
    let first = run().map_err(|e| e.to_string())?;
    let second = run().map_err(|e| e.to_string())?;
    ensure(first == second, || "two runs differ".into())?;
    ensure(first.status == Status::Closed, || format!("status {}", first.status.as_str()))?;
    let replayed = replay(&initial, &first.moves()).map_err(|e| e.to_string())?;
    ensure(replayed == first, || "replay differs from the run".into())?;

    let modes: Vec<ShiftMode> = shift_report(&first).iter().map(|e| e.mode).collect();
    ensure(modes == [ShiftMode::Embed, ShiftMode::Pop, ShiftMode::Replace], || {
        format!("shift report {modes:?}")
    })?;
    let report = shift_report(&first);
    ensure(
        report[0].from == DialogueTypeId::Inquiry && report[0].to == DialogueTypeId::Persuasion,
        || "embed is not inquiry -> persuasion".into(),
    )?;
    ensure(report[2].to == DialogueTypeId::InformationSeekingPedagogical, || {
        "replacement is not pedagogical".into()
    })?;

    // The claim conceded inside the persuasion must be in both root
    // stores right after the pop.
    let claim = "the conjecture holds.";
    let pop_turn = report[1].turn;
    let after_pop = replay(&initial, &first.moves()[..=pop_turn]).map_err(|e| e.to_string())?;
    let root = &after_pop.final_state.frames()[0];
    ensure(after_pop.final_state.depth() == 1, || "pop left the stack deep".into())?;
    for side in [Side::Proponent, Side::Respondent] {
        ensure(root.local(side).contains(claim), || {
            format!("{} root store lacks the claim", side.as_str())
        })?;
        ensure(first.final_state.commitments(side).contains(claim), || {
            format!("{} lost the claim by the end", side.as_str())
        })?;
    }
    Ok("[embed, pop, replace]".into())
}

// 8

const STRICT: &str = r#"
scheme "strict_modus_ponens" class A qualifier certain {
  premise data: "{P}.";
  premise warrant: "If {P}, then {Q}.";
  conclusion claim: "{Q}.";
  cq 1 premise-challenge: "Is it true that {P}?";
  cq 2 qualifier-challenge: "Is {Q} really certain?";
}
scheme "proof_macro" class B qualifier certain {
  premise data: "{P} has a proof.";
  conclusion claim: "{P}.";
  cq 1 backing-challenge: "Is the proof of {P} correct?";
  cq 2 undercut: "Does the proof of {P} apply here?";
  cq 3 qualifier-challenge: "Is {P} beyond doubt?";
}
"#;

/// A random interleaving of pose and answer steps, every answer after
/// its pose.
fn random_ordering<R: Rng>(r: &mut R, cqs: usize) -> Vec<(usize, bool)> {
    let mut pending: Vec<Vec<(usize, bool)>> = (1..=cqs)
        .map(|i| match r.gen_range(0..3) {
            0 => vec![],
            1 => vec![(i, false)],
            _ => vec![(i, true), (i, false)],
        })
        .collect();
    let mut out = Vec::new();
    while pending.iter().any(|p| !p.is_empty()) {
        let live: Vec<usize> = (0..pending.len()).filter(|&i| !pending[i].is_empty()).collect();
        let i = *live.choose(r).unwrap();
        out.push(pending[i].pop().unwrap());
    }
    out
}

fn qualifier_laws() -> Outcome {
    let doc = parse_scheme_dsl(STRICT);
    ensure(doc.is_clean(), || format!("{:?}", doc.diagnostics))?;
    let mut schemes: Vec<Arc<Scheme>> = doc.schemes.into_iter().map(Arc::new).collect();
    schemes.push(builtin("ethotic").unwrap());
    schemes.push(builtin("ethotic_mathematical").unwrap());
    let mut r = rng(8);
    let mut steps = 0;
    for round in 0..500 {
        for s in &schemes {
            let mut g = ArgumentGraph::new();
            g.add_argument(common::instance(&mut r, s, "x")).unwrap();
            let x = ArgId::new("x");
            let qualifier_cqs: Vec<usize> = s
                .cqs
                .iter()
                .filter(|c| c.kind == CqKind::QualifierChallenge)
                .map(|c| c.index)
                .collect();
            for (cq, answer) in random_ordering(&mut r, s.cqs.len()) {
                g = if answer {
                    g.answer_cq(&x, cq, "answered")
                } else {
                    g.pose_cq(&x, cq)
                }
                .map_err(|e| e.to_string())?;
                let q = g.effective_qualifier(&x).map_err(|e| e.to_string())?;
                let open = g.open_cqs(&x);
                let want = if s.class.is_deductive() {
                    Qualifier::Certain
                } else if qualifier_cqs.iter().any(|c| open.contains(c)) {
                    s.default_qualifier.weaker()
                } else {
                    s.default_qualifier
                };
                ensure(q == want, || {
                    format!("round {round}, {}: open {open:?} gives {q}, want {want}", s.id)
                })?;
                steps += 1;
            }
        }
    }
    ensure(Qualifier::Presumable.weaker() == Qualifier::Plausible, || {
        "presumable does not step down to plausible".into()
    })?;
    Ok(format!("{steps} steps over random orderings"))
}

// 9

fn script_of(initial_header: &ScriptHeader, moves: &[Move]) -> ScriptDocument {
    ScriptDocument {
        header: Some(initial_header.clone()),
        lines: moves
            .iter()
            .map(|m| ScriptLine {
                speaker: Some(m.speaker.clone()),
                act: m.act.clone(),
            })
            .collect(),
        diagnostics: vec![],
    }
}

fn header_for(kind: DialogueTypeId) -> ScriptHeader {
    let t = dialogue_type(kind);
    ScriptHeader {
        kind,
        situation: t.situation,
        goal: t.goal,
        participants: common::participants(),
        opener: None,
    }
}

fn mutate<R: Rng>(r: &mut R, seed: &str) -> String {
    let mut chars: Vec<char> = seed.chars().collect();
    const NOISE: &[char] = &['"', '{', '}', ';', ':', '=', '\\', '\n', ' ', '#', 'é', '\0', 'x', '9', '-'];
    for _ in 0..r.gen_range(1..=8) {
        let pos = r.gen_range(0..=chars.len());
        match r.gen_range(0..3) {
            0 => chars.insert(pos, *NOISE.choose(r).unwrap()),
            1 if pos < chars.len() => {
                chars.remove(pos);
            }
            _ if !chars.is_empty() => {
                let end = (pos + r.gen_range(0..40)).min(chars.len());
                let start = pos.min(end);
                chars.drain(start..end);
            }
            _ => {}
        }
    }
    chars.into_iter().collect()
}

fn fuzz_input<R: Rng>(r: &mut R, seeds: &[String]) -> String {
    const WORDS: &[&str] = &[
        "scheme", "class", "qualifier", "premise", "conclusion", "cq", "var", "indicator", "name",
        "argument", "attack", "pose", "answer", "dialogue", "participants", "opener", "turn",
        "rejected", "shift", "shift-report", "labels", "stores", "transcript", "P1", "P2",
        "assert", "argue", "pose-cq", "answer-cq", "close", "offer", "cost", "embed", "pop",
        "{", "}", ";", ":", "=", "\"", "\"x\"", "1", "-3", "\n", "A", "certain", "eristic",
    ];
    match r.gen_range(0..3) {
        0 => {
            let bytes: Vec<u8> = (0..r.gen_range(0..200)).map(|_| r.gen()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        }
        1 => (0..r.gen_range(0..40))
            .map(|_| *WORDS.choose(r).unwrap())
            .collect::<Vec<_>>()
            .join(" "),
        _ => {
            let seed = seeds.choose(r).unwrap();
            mutate(r, seed)
        }
    }
}

fn round_trips_and_totality() -> Outcome {
    let reg = SchemeRegistry::with_builtins();
    let mut r = rng(9);

    let mut schemes: Vec<Scheme> = builtin_schemes().iter().map(|s| (**s).clone()).collect();
    schemes.extend(parse_scheme_dsl(STRICT).schemes);
    schemes.extend(parse_scheme_dsl(&data("sign.scheme")).schemes);
    let text = serialize_schemes(schemes.iter());
    let back = parse_scheme_dsl(&text);
    ensure(back.is_clean() && back.schemes == schemes, || "scheme round trip failed".into())?;

    let mut graph_texts = Vec::new();
    for i in 0..300 {
        let g = common::random_graph(&mut r, 12);
        let text = export_graph(&g);
        let doc = parse_graph(&text, &reg);
        ensure(doc.diagnostics.is_empty() && doc.graph == g, || {
            format!("graph {i} round trip failed: {:?}", doc.diagnostics)
        })?;
        graph_texts.push(text);
    }

    let mut script_texts = vec![data("embedded_inquiry.dlg"), data("oracle.dlg")];
    let mut transcript_texts = Vec::new();
    for i in 0..300 {
        let kind = *DialogueTypeId::ALL.choose(&mut r).unwrap();
        let walk = common::random_walk(&mut r, common::start(kind), 30);
        let moves: Vec<Move> = walk.iter().filter_map(|(m, _)| m.clone()).collect();
        let doc = script_of(&header_for(kind), &moves);
        let text = serialize_script(&doc);
        let back = parse_script(&text, &reg);
        ensure(back == doc, || format!("script {i} round trip failed: {:?}", back.diagnostics))?;
        let t = replay(&common::start(kind), &moves).map_err(|e| e.to_string())?;
        let rendered = render_transcript(&t);
        let parsed = parse_transcript(&rendered, &reg);
        ensure(parsed.diagnostics.is_empty() && parsed.moves == t.moves(), || {
            format!("transcript {i} round trip failed: {:?}", parsed.diagnostics)
        })?;
        script_texts.push(text);
        transcript_texts.push(rendered);
    }
    let scheme_seeds = vec![text.clone(), data("sign.scheme"), data("broken.scheme")];

    const CASES: usize = 10_000;
    let mut crashes = Vec::new();
    let mut fuzz = |name: &str, seeds: &[String], f: &dyn Fn(&str)| {
        for i in 0..CASES {
            let input = fuzz_input(&mut r, seeds);
            if catch_unwind(AssertUnwindSafe(|| f(&input))).is_err() {
                crashes.push(format!("{name} case {i}: {input:?}"));
            }
        }
    };
    let prev = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    fuzz("scheme", &scheme_seeds, &|s| {
        let doc = parse_scheme_dsl(s);
        let _ = serialize_schemes(doc.schemes.iter());
    });
    fuzz("graph", &graph_texts, &|s| {
        let doc = parse_graph(s, &reg);
        let _ = doc.graph.grounded_labelling();
        let _ = export_graph(&doc.graph);
    });
    fuzz("script", &script_texts, &|s| {
        let doc = parse_script(s, &reg);
        if let Some(Ok(initial)) = doc.header.as_ref().map(|h| h.initial_state()) {
            let (mut a, mut b) = ScriptPolicy::pair(doc.lines);
            let _ = run_simulation(&initial, &mut a, &mut b, 40);
        }
    });
    fuzz("transcript", &transcript_texts, &|s| {
        let _ = verify_transcript(&parse_transcript(s, &reg));
    });
    std::panic::set_hook(prev);
    ensure(crashes.is_empty(), || {
        format!("{} crashes, first: {}", crashes.len(), crashes[0])
    })?;
    Ok(format!("round trips hold; {} fuzz cases per parser, no crashes", CASES))
}

// 10

fn determinism() -> Outcome {
    let reg = SchemeRegistry::with_builtins();
    let mut transcripts = Vec::new();
    let script = parse_script(&data("embedded_inquiry.dlg"), &reg);
    let initial = script.header.as_ref().unwrap().initial_state().map_err(|e| e.to_string())?;
    let (mut a, mut b) = ScriptPolicy::pair(script.lines.clone());
    transcripts.push(run_simulation(&initial, &mut a, &mut b, 100).map_err(|e| e.to_string())?);
    let mut r = rng(10);
    for _ in 0..300 {
        let kind = *DialogueTypeId::ALL.choose(&mut r).unwrap();
        let walk = common::random_walk(&mut r, common::start(kind), 40);
        let mut moves: Vec<Move> = walk.iter().filter_map(|(m, _)| m.clone()).collect();
        // Sometimes end on a rejected move.
        if r.gen_bool(0.3) {
            let last = &walk.last().unwrap().1;
            moves.push(common::random_move(&mut r, last));
        }
        let t = match replay(&common::start(kind), &moves) {
            Ok(t) => t,
            Err(e) => return Err(e.to_string()),
        };
        transcripts.push(t);
    }
    for (i, t) in transcripts.iter().enumerate() {
        let text = render_transcript(t);
        let doc = parse_transcript(&text, &reg);
        let once = verify_transcript(&doc)?;
        let twice = verify_transcript(&doc)?;
        ensure(once.final_state == twice.final_state && once == *t, || {
            format!("transcript {i}: replays disagree")
        })?;
        let (a, b) = (render_transcript(&once), render_transcript(&twice));
        ensure(a == b && a == text, || format!("transcript {i}: renders differ"))?;
    }
    Ok(format!("{} transcripts byte-identical", transcripts.len()))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("built-in fidelity", Duration::from_secs(1), builtin_fidelity),
        ("localization identity", Duration::from_secs(1), localization_identity),
        ("oracle equivalence", Duration::from_secs(60), oracle_equivalence),
        ("reinstatement", Duration::from_secs(5), reinstatement),
        ("dialogue table coherence", Duration::from_secs(1), table_coherence),
        ("oracular restriction", Duration::from_secs(1), oracular_restriction),
        ("embedded inquiry scenario", Duration::from_secs(1), embedded_inquiry_scenario),
        ("qualifier laws", Duration::from_secs(5), qualifier_laws),
        ("round trips and parser totality", Duration::from_secs(120), round_trips_and_totality),
        ("determinism", Duration::from_secs(5), determinism),
    ];
    let mut failed = 0;
    for (i, (name, bound, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *bound => Err(format!("{detail}, but over the {bound:?} bound")),
            o => o,
        };
        let ms = elapsed.as_secs_f64() * 1000.0;
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({ms:.0} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({ms:.0} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
