//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use argdial::dialogue::{
    dialogue_type, new_dialogue, Act, Cost, DialogueState, DialogueTypeId, Move, MoveKind,
    Participant, ShiftMode, Side,
};
use argdial::evaluation::{ArgumentGraph, AttackKind};
use argdial::library::builtin;
use argdial::scheme::{instantiate_scheme, ArgumentInstance, Scheme, Substitution};
use rand::seq::SliceRandom;
use rand::Rng;

/// Words that never occur in a built-in template, so instances match
/// back unambiguously.
pub const WORDS: &[&str] = &["zork", "blip", "quux", "fnord", "wib", "snark", "plugh", "xyzzy"];

pub fn term<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn instance<R: Rng>(rng: &mut R, scheme: &Arc<Scheme>, id: &str) -> ArgumentInstance {
    let sub = Substitution::from_pairs(scheme.variables.iter().map(|v| (v.as_str().to_string(), term(rng))))
        .unwrap();
    instantiate_scheme(scheme, id, sub).unwrap()
}

/// A graph over sign and modus ponens instances with random attacks and
/// CQ events, at most `max_nodes` nodes in total.
pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize) -> ArgumentGraph {
    let schemes = [
        builtin("argument_from_sign").unwrap(),
        builtin("defeasible_modus_ponens").unwrap(),
    ];
    let mut g = ArgumentGraph::new();
    let n_args = rng.gen_range(1..=max_nodes.clamp(1, 6));
    let ids: Vec<String> = (0..n_args).map(|i| format!("a{i}")).collect();
    for id in &ids {
        let s = schemes.choose(rng).unwrap();
        g.add_argument(instance(rng, s, id)).unwrap();
    }
    let kinds = [AttackKind::Undermine, AttackKind::Rebut, AttackKind::Undercut];
    for _ in 0..rng.gen_range(0..=n_args * 2) {
        let a = ids.choose(rng).unwrap().as_str().into();
        let b = ids.choose(rng).unwrap().as_str().into();
        g.add_attack(&a, &b, *kinds.choose(rng).unwrap()).unwrap();
    }
    for _ in 0..rng.gen_range(0..=4) {
        let arg = ids.choose(rng).unwrap().as_str().into();
        let cq = rng.gen_range(1..=2);
        let next = if rng.gen_bool(0.5) {
            g.pose_cq(&arg, cq)
        } else {
            g.answer_cq(&arg, cq, &term(rng))
        };
        if let Ok(next) = next {
            if next.nodes().len() <= max_nodes {
                g = next;
            }
        }
    }
    g
}

pub fn participants() -> [Participant; 2] {
    [Participant::new("P1").unwrap(), Participant::new("P2").unwrap()]
}

pub fn start(kind: DialogueTypeId) -> DialogueState {
    let t = dialogue_type(kind);
    new_dialogue(kind, t.situation, t.goal, participants()).unwrap()
}

const STATEMENTS: &[&str] = &["s0", "s1", "s2", "s3"];

/// A random, often illegal, move for `state`.
pub fn random_move<R: Rng>(rng: &mut R, state: &DialogueState) -> Move {
    let side = if rng.gen_bool(0.9) {
        state.turn()
    } else {
        state.turn().other()
    };
    let speaker = state.participant(side).clone();
    let text = |rng: &mut R| -> String {
        let pool: Vec<String> = state
            .commitments(side)
            .into_iter()
            .chain(state.commitments(side.other()))
            .chain(STATEMENTS.iter().map(|s| s.to_string()))
            .collect();
        pool.choose(rng).unwrap().clone()
    };
    let arg = |rng: &mut R| format!("a{}", rng.gen_range(0..4));
    let kind = *MoveKind::ALL.choose(rng).unwrap();
    let act = match kind {
        MoveKind::Assert => Act::Assert(text(rng)),
        MoveKind::Argue => {
            let s = if rng.gen_bool(0.5) {
                builtin("argument_from_sign").unwrap()
            } else {
                builtin("defeasible_modus_ponens").unwrap()
            };
            let id = arg(rng);
            Act::Argue(instance(rng, &s, &id))
        }
        MoveKind::PoseCq => Act::PoseCq {
            arg: arg(rng).as_str().into(),
            cq: rng.gen_range(1..=3),
        },
        MoveKind::AnswerCq => Act::AnswerCq {
            arg: arg(rng).as_str().into(),
            cq: rng.gen_range(1..=3),
            answer: STATEMENTS.choose(rng).unwrap().to_string(),
        },
        MoveKind::Concede => Act::Concede(text(rng)),
        MoveKind::Retract => Act::Retract(text(rng)),
        MoveKind::Offer => Act::Offer {
            terms: text(rng),
            cost: Cost::new(rng.gen_range(0..100) as f64),
        },
        MoveKind::Accept => Act::Accept,
        MoveKind::ProposeShift => Act::ProposeShift {
            mode: if rng.gen_bool(0.5) {
                ShiftMode::Replace
            } else {
                ShiftMode::Embed
            },
            target: *DialogueTypeId::ALL.choose(rng).unwrap(),
        },
        MoveKind::AcceptShift => Act::AcceptShift,
        MoveKind::Close => Act::Close {
            conclusion: rng.gen_bool(0.3).then(|| text(rng)),
        },
    };
    Move::new(speaker, act)
}

/// Random moves applied until `steps` were tried or the dialogue closed.
/// Returns every state reached, the initial one first, with the move
/// that led to it.
pub fn random_walk<R: Rng>(
    rng: &mut R,
    initial: DialogueState,
    steps: usize,
) -> Vec<(Option<Move>, DialogueState)> {
    let mut out = vec![(None, initial)];
    for _ in 0..steps {
        let state = &out.last().unwrap().1;
        if state.is_closed() {
            break;
        }
        let mv = random_move(rng, state);
        if let Ok(next) = state.apply_move(&mv) {
            out.push((Some(mv), next));
        }
    }
    out
}

pub fn side_index(side: Side) -> usize {
    side.index()
}
