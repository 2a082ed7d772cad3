//! Argument graph files.
//!
//! ```text
//! argument a1 argument_from_sign A="smoke" B="fire"
//! attack a2 a1 rebut
//! pose a1 2
//! answer a1 2 "the smoke machine is off"
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::lex::{lines, quote, tokenize, Cursor};
use super::Diagnostic;
use crate::evaluation::{ArgumentGraph, AttackKind, Label};
use crate::library::SchemeRegistry;
use crate::scheme::{
    instantiate_scheme, is_identifier, ArgId, ArgumentInstance, Qualifier, Substitution, Variable,
};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphDocument {
    pub graph: ArgumentGraph,
    pub diagnostics: Vec<Diagnostic>,
}

/// Reads `<id> <scheme> VAR="term"... [qualifier <level>]`.
pub(crate) fn parse_instance(
    c: &mut Cursor<'_>,
    registry: &SchemeRegistry,
) -> Result<ArgumentInstance, Diagnostic> {
    let id_tok = c.expect_word("argument id")?;
    let id = id_tok.word().unwrap_or_default();
    if !is_identifier(id) {
        return Err(id_tok.diag(format!("invalid argument id `{id}`")));
    }
    let scheme_tok = c.expect_word("scheme id")?;
    let scheme_id = scheme_tok.word().unwrap_or_default();
    let scheme = registry
        .lookup(scheme_id)
        .map_err(|_| scheme_tok.diag(format!("unknown scheme `{scheme_id}`")))?;
    let mut sub = Substitution::new();
    let mut qualifier = None;
    while let Some(t) = c.next() {
        let w = t
            .word()
            .ok_or_else(|| t.diag(format!("expected binding, found {}", t.describe())))?;
        if w == "qualifier" {
            qualifier = Some(c.parse_word::<Qualifier>("qualifier level")?);
            c.expect_end()?;
            break;
        }
        let var = Variable::new(w).map_err(|e| t.diag(e.to_string()))?;
        if !scheme.declares(&var) {
            return Err(t.diag(format!(
                "scheme `{scheme_id}` has no variable {var} (declared: {})",
                scheme
                    .variables
                    .iter()
                    .map(Variable::as_str)
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        c.expect_sym('=')?;
        let (term_tok, term) = c.expect_string("bound term")?;
        sub.bind(var, term).map_err(|e| term_tok.diag(e.to_string()))?;
    }
    let inst = instantiate_scheme(scheme, id, sub).map_err(|e| id_tok.diag(e.to_string()))?;
    match qualifier {
        Some((t, q)) => inst.with_qualifier(q).map_err(|e| t.diag(e.to_string())),
        None => Ok(inst),
    }
}

pub(crate) fn write_instance(inst: &ArgumentInstance) -> String {
    let mut out = format!("{} {}", inst.id, inst.scheme_id());
    for v in &inst.scheme().variables {
        if let Some(term) = inst.substitution.get(v) {
            let _ = write!(out, " {v}={}", quote(term));
        }
    }
    if inst.qualifier != inst.scheme().default_qualifier {
        let _ = write!(out, " qualifier {}", inst.qualifier);
    }
    out
}

pub fn parse_graph(text: &str, registry: &SchemeRegistry) -> GraphDocument {
    let (tokens, mut diagnostics) = tokenize(text);
    let mut graph = ArgumentGraph::new();
    for line in lines(tokens) {
        let mut c = Cursor::new(&line);
        if let Err(d) = graph_line(&mut c, &mut graph, registry) {
            diagnostics.push(d);
        }
    }
    diagnostics.sort_by_key(|d| (d.line, d.column));
    GraphDocument { graph, diagnostics }
}

fn graph_line(
    c: &mut Cursor<'_>,
    graph: &mut ArgumentGraph,
    registry: &SchemeRegistry,
) -> Result<(), Diagnostic> {
    let head = c.expect_word("`argument`, `attack`, `pose` or `answer`")?;
    match head.word().unwrap_or_default() {
        "argument" => {
            let inst = parse_instance(c, registry)?;
            graph
                .add_argument(inst)
                .map_err(|e| head.diag(e.to_string()))?;
        }
        "attack" => {
            let a = arg_ref(c, graph)?;
            let b = arg_ref(c, graph)?;
            let t = c.expect_word("attack kind")?;
            let kind = AttackKind::parse(t.word().unwrap_or_default())
                .ok_or_else(|| t.diag("expected undermine, rebut or undercut"))?;
            c.expect_end()?;
            graph
                .add_attack(&a, &b, kind)
                .map_err(|e| head.diag(e.to_string()))?;
        }
        "pose" => {
            let a = arg_ref(c, graph)?;
            let (t, n) = c.parse_word::<usize>("question number")?;
            c.expect_end()?;
            *graph = graph.pose_cq(&a, n).map_err(|e| t.diag(e.to_string()))?;
        }
        "answer" => {
            let a = arg_ref(c, graph)?;
            let (t, n) = c.parse_word::<usize>("question number")?;
            let (_, text) = c.expect_string("answer text")?;
            c.expect_end()?;
            *graph = graph
                .answer_cq(&a, n, text)
                .map_err(|e| t.diag(e.to_string()))?;
        }
        other => return Err(head.diag(format!("unknown statement `{other}`"))),
    }
    Ok(())
}

fn arg_ref(c: &mut Cursor<'_>, graph: &ArgumentGraph) -> Result<ArgId, Diagnostic> {
    let t = c.expect_word("argument id")?;
    let id = ArgId::new(t.word().unwrap_or_default());
    if graph.argument(&id).is_none() {
        return Err(t.diag(format!("unknown argument `{id}`")));
    }
    Ok(id)
}

/// Canonical graph text followed by the computed labels as comments.
pub fn export_graph(graph: &ArgumentGraph) -> String {
    let mut out = String::new();
    for inst in graph.arguments() {
        let _ = writeln!(out, "argument {}", write_instance(inst));
    }
    for e in graph.user_attacks() {
        let _ = writeln!(out, "attack {} {} {}", e.attacker.arg(), e.target.arg(), e.kind);
    }
    for ev in graph.cq_events() {
        let _ = writeln!(out, "pose {} {}", ev.target, ev.cq);
        if let Some(a) = &ev.answer {
            let _ = writeln!(out, "answer {} {} {}", ev.target, ev.cq, quote(a));
        }
    }
    let labels = graph.grounded_labelling();
    if !labels.is_empty() {
        out.push_str("# labels\n");
        for (node, label) in &labels.labels {
            let _ = writeln!(out, "# {node} {label}");
        }
    }
    out
}

#[derive(Serialize)]
struct MachineGraph<'a> {
    arguments: Vec<MachineArgument<'a>>,
    attacks: Vec<MachineAttack<'a>>,
    events: Vec<MachineEvent<'a>>,
    labels: BTreeMap<String, Label>,
}

#[derive(Serialize)]
struct MachineArgument<'a> {
    id: &'a str,
    scheme: &'a str,
    bindings: BTreeMap<&'a str, &'a str>,
    qualifier: Qualifier,
    label: Label,
    effective_qualifier: Qualifier,
    open_cqs: Vec<usize>,
}

#[derive(Serialize)]
struct MachineAttack<'a> {
    attacker: &'a str,
    target: &'a str,
    kind: AttackKind,
}

#[derive(Serialize)]
struct MachineEvent<'a> {
    argument: &'a str,
    cq: usize,
    answer: Option<&'a str>,
}

/// The graph and its evaluation as JSON.
pub fn export_graph_machine(graph: &ArgumentGraph) -> String {
    let labels = graph.grounded_labelling();
    let arguments = graph
        .arguments()
        .map(|a| {
            let eval = graph
                .evaluate_argument(&a.id)
                .expect("argument is in the graph");
            MachineArgument {
                id: a.id.as_str(),
                scheme: a.scheme_id(),
                bindings: a.substitution.iter().map(|(v, t)| (v.as_str(), t)).collect(),
                qualifier: a.qualifier,
                label: eval.label,
                effective_qualifier: eval.qualifier,
                open_cqs: eval.open_cqs,
            }
        })
        .collect();
    let doc = MachineGraph {
        arguments,
        attacks: graph
            .user_attacks()
            .iter()
            .map(|e| MachineAttack {
                attacker: e.attacker.arg().as_str(),
                target: e.target.arg().as_str(),
                kind: e.kind,
            })
            .collect(),
        events: graph
            .cq_events()
            .iter()
            .map(|e| MachineEvent {
                argument: e.target.as_str(),
                cq: e.cq,
                answer: e.answer.as_deref(),
            })
            .collect(),
        labels: labels
            .labels
            .iter()
            .map(|(n, l)| (n.to_string(), *l))
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

/// Human-readable evaluation of every argument.
pub fn evaluation_report(graph: &ArgumentGraph) -> String {
    let mut out = String::new();
    for a in graph.arguments() {
        let eval = graph
            .evaluate_argument(&a.id)
            .expect("argument is in the graph");
        let _ = writeln!(
            out,
            "{} [{}] {} {}",
            a.id,
            a.scheme_id(),
            eval.label,
            eval.qualifier
        );
        for p in &a.premises {
            let _ = writeln!(out, "  {}: {}", p.role, p.text);
        }
        let indicator = a
            .scheme()
            .indicator
            .as_deref()
            .map(|i| format!("{i}, "))
            .unwrap_or_default();
        let _ = writeln!(out, "  {}: {indicator}{}", a.conclusion.role, a.conclusion.text);
        for cq in &a.scheme().cqs {
            let status = match graph
                .cq_events()
                .iter()
                .find(|e| e.target == a.id && e.cq == cq.index)
            {
                None => "not posed".to_string(),
                Some(e) => match &e.answer {
                    None => "open".to_string(),
                    Some(ans) => format!("answered: {ans}"),
                },
            };
            let _ = writeln!(out, "  cq{} {} ({status})", cq.index, cq.kind);
        }
    }
    out
}
