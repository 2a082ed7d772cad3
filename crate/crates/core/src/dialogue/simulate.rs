use std::cell::RefCell;
use std::collections::{BTreeSet, VecDeque};
use std::rc::Rc;

use super::state::{Act, DialogueError, DialogueState, Move, Participant, ShiftEntry};
use super::types::{dialogue_type, MoveKind, Side};
use crate::evaluation::Label;
use crate::scheme::{ArgId, Qualifier};

/// Chooses the next move for one side.
pub trait Policy {
    /// `None` means the policy has nothing more to say.
    fn next_move(&mut self, state: &DialogueState, side: Side) -> Option<Move>;
}

/// A line of a dialogue script. A line without a speaker is played by
/// whoever holds the turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptLine {
    pub speaker: Option<Participant>,
    pub act: Act,
}

/// Replays scripted lines in order.
pub struct ScriptPolicy {
    lines: Rc<RefCell<VecDeque<ScriptLine>>>,
}

impl ScriptPolicy {
    /// Two policies sharing one cursor over the script, so lines are
    /// consumed in script order whichever side plays them.
    pub fn pair(lines: Vec<ScriptLine>) -> (ScriptPolicy, ScriptPolicy) {
        let shared = Rc::new(RefCell::new(VecDeque::from(lines)));
        (
            ScriptPolicy {
                lines: Rc::clone(&shared),
            },
            ScriptPolicy { lines: shared },
        )
    }

    /// A policy that plays only the lines of `who` (and unattributed ones).
    pub fn solo(lines: Vec<ScriptLine>, who: &Participant) -> ScriptPolicy {
        let own = lines
            .into_iter()
            .filter(|l| l.speaker.as_ref().is_none_or(|s| s == who))
            .collect();
        ScriptPolicy {
            lines: Rc::new(RefCell::new(own)),
        }
    }
}

impl Policy for ScriptPolicy {
    fn next_move(&mut self, state: &DialogueState, side: Side) -> Option<Move> {
        let line = self.lines.borrow_mut().pop_front()?;
        let speaker = line
            .speaker
            .unwrap_or_else(|| state.participant(side).clone());
        Some(Move::new(speaker, line.act))
    }
}

/// Poses every critical question it can, then concedes claims that
/// survived, then closes.
#[derive(Debug, Default)]
pub struct ExhaustiveSceptic;

impl Policy for ExhaustiveSceptic {
    fn next_move(&mut self, state: &DialogueState, side: Side) -> Option<Move> {
        let who = state.participant(side).clone();
        let legal: BTreeSet<MoveKind> = state.legal_moves().ok()?.into_iter().map(|(_, k)| k).collect();
        if legal.contains(&MoveKind::PoseCq) {
            let (arg, cq) = state.poseable_cqs(side).into_iter().next()?;
            return Some(Move::new(who, Act::PoseCq { arg, cq }));
        }
        if legal.contains(&MoveKind::Concede) {
            let labels = state.graph().grounded_labelling();
            let mine = state.commitments(side);
            let survivor = state.graph().arguments().find(|a| {
                state.owner(&a.id) == Some(side.other())
                    && labels.argument(&a.id) == Some(Label::In)
                    && state.graph().open_cqs(&a.id).is_empty()
                    && state.commitments(side.other()).contains(a.claim())
                    && !mine.contains(a.claim())
            });
            if let Some(a) = survivor {
                return Some(Move::new(who, Act::Concede(a.claim().to_string())));
            }
            // An oracle's word is taken as given.
            if dialogue_type(state.current_type()).oracle_mode {
                if let Some(text) = state.concedable(side).into_iter().next() {
                    return Some(Move::new(who, Act::Concede(text)));
                }
            }
        }
        legal
            .contains(&MoveKind::Close)
            .then(|| Move::new(who, Act::Close { conclusion: None }))
    }
}

/// Answers every open question on its own arguments, works through its
/// agenda, then closes.
#[derive(Debug, Default)]
pub struct CompliantProver {
    agenda: VecDeque<Act>,
}

impl CompliantProver {
    pub fn new(agenda: impl IntoIterator<Item = Act>) -> Self {
        CompliantProver {
            agenda: agenda.into_iter().collect(),
        }
    }
}

impl Policy for CompliantProver {
    fn next_move(&mut self, state: &DialogueState, side: Side) -> Option<Move> {
        let who = state.participant(side).clone();
        if let Some((arg, cq)) = state.answerable_cqs(side).into_iter().next() {
            let question = state
                .graph()
                .argument(&arg)
                .and_then(|a| a.cq_text(cq))
                .unwrap_or_default();
            let answer = format!("Addressed: {question}");
            return Some(Move::new(who, Act::AnswerCq { arg, cq, answer }));
        }
        if let Some(act) = self.agenda.pop_front() {
            return Some(Move::new(who, act));
        }
        Some(Move::new(who, Act::Close { conclusion: None }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Closed,
    /// Turn budget spent or no policy had a move.
    Timeout,
    Violation(DialogueError),
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Closed => "closed",
            Status::Timeout => "timeout",
            Status::Violation(_) => "violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnRecord {
    pub index: usize,
    pub mv: Move,
    /// Statements that entered or left a current effective store.
    pub added: Vec<(Side, String)>,
    pub removed: Vec<(Side, String)>,
    pub shifts: Vec<ShiftEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentOutcome {
    pub arg: ArgId,
    pub label: Label,
    pub qualifier: Qualifier,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub initial: DialogueState,
    pub turns: Vec<TurnRecord>,
    /// The rejected move, when the run ended in a violation.
    pub attempted: Option<Move>,
    pub status: Status,
    pub outcomes: Vec<ArgumentOutcome>,
    pub final_state: DialogueState,
}

impl Transcript {
    /// Every move played, followed by the rejected one if any.
    pub fn moves(&self) -> Vec<Move> {
        self.turns
            .iter()
            .map(|t| t.mv.clone())
            .chain(self.attempted.clone())
            .collect()
    }

    pub fn shift_log(&self) -> &[ShiftEntry] {
        self.final_state.shift_log()
    }
}

type Entries = Vec<(Side, String)>;

fn store_delta(before: &DialogueState, after: &DialogueState) -> (Entries, Entries) {
    let mut added = Vec::new();
    let mut removed = Vec::new();
    for side in [Side::Proponent, Side::Respondent] {
        let (b, a) = (before.commitments(side), after.commitments(side));
        added.extend(a.difference(&b).map(|s| (side, s.clone())));
        removed.extend(b.difference(&a).map(|s| (side, s.clone())));
    }
    (added, removed)
}

/// Plays the two policies against each other from `initial`.
pub fn run_simulation(
    initial: &DialogueState,
    proponent: &mut dyn Policy,
    respondent: &mut dyn Policy,
    max_turns: usize,
) -> Result<Transcript, DialogueError> {
    if max_turns == 0 {
        return Err(DialogueError::NoTurns);
    }
    let mut state = initial.clone();
    let mut turns = Vec::new();
    let mut attempted = None;
    let mut status = Status::Timeout;
    for _ in 0..max_turns {
        if state.is_closed() {
            break;
        }
        let side = state.turn();
        let policy: &mut dyn Policy = match side {
            Side::Proponent => &mut *proponent,
            Side::Respondent => &mut *respondent,
        };
        let Some(mv) = policy.next_move(&state, side) else {
            break;
        };
        match state.apply_move(&mv) {
            Ok(next) => {
                let (added, removed) = store_delta(&state, &next);
                let shifts = next.shift_log()[state.shift_log().len()..].to_vec();
                turns.push(TurnRecord {
                    index: state.move_count(),
                    mv,
                    added,
                    removed,
                    shifts,
                });
                state = next;
            }
            Err(e) => {
                attempted = Some(mv);
                status = Status::Violation(e);
                break;
            }
        }
    }
    if state.is_closed() {
        status = Status::Closed;
    }
    let labels = state.graph().grounded_labelling();
    let outcomes = state
        .graph()
        .arguments()
        .map(|a| ArgumentOutcome {
            arg: a.id.clone(),
            label: labels.argument(&a.id).unwrap_or(Label::Undec),
            qualifier: state
                .graph()
                .effective_qualifier(&a.id)
                .unwrap_or(a.qualifier),
        })
        .collect();
    Ok(Transcript {
        initial: initial.clone(),
        turns,
        attempted,
        status,
        outcomes,
        final_state: state,
    })
}

/// Replays recorded moves from `initial`.
pub fn replay(initial: &DialogueState, moves: &[Move]) -> Result<Transcript, DialogueError> {
    let lines = moves
        .iter()
        .map(|m| ScriptLine {
            speaker: Some(m.speaker.clone()),
            act: m.act.clone(),
        })
        .collect();
    let (mut a, mut b) = ScriptPolicy::pair(lines);
    run_simulation(initial, &mut a, &mut b, moves.len() + 1)
}

/// Every shift in order, pops included.
pub fn shift_report(transcript: &Transcript) -> Vec<ShiftEntry> {
    transcript.shift_log().to_vec()
}
