use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::types::{
    dialogue_type, types_for, DialogueTypeId, InitialSituation, MainGoal, MoveKind, ShiftMode,
    Side,
};
use crate::evaluation::{ArgumentGraph, Label};
use crate::scheme::{is_identifier, normalize, ArgId, ArgumentInstance};

/// Deepest allowed stack of embedded dialogues, the root included.
pub const MAX_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Participant(String);

impl Participant {
    pub fn new(id: impl Into<String>) -> Result<Self, DialogueError> {
        let id = id.into();
        if is_identifier(&id) {
            Ok(Participant(id))
        } else {
            Err(DialogueError::InvalidParticipant(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Participant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite, non-negative offer cost.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Cost(f64);

impl Cost {
    pub fn new(value: f64) -> Option<Cost> {
        (value.is_finite() && value >= 0.0).then_some(Cost(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

// Finite by construction, so equality is total.
impl Eq for Cost {}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The content of a move. Each variant carries exactly the payload of
/// its kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Act {
    Assert(String),
    Argue(ArgumentInstance),
    PoseCq { arg: ArgId, cq: usize },
    AnswerCq { arg: ArgId, cq: usize, answer: String },
    Concede(String),
    Retract(String),
    Offer { terms: String, cost: Option<Cost> },
    Accept,
    ProposeShift { mode: ShiftMode, target: DialogueTypeId },
    AcceptShift,
    Close { conclusion: Option<String> },
}

impl Act {
    pub fn kind(&self) -> MoveKind {
        match self {
            Act::Assert(_) => MoveKind::Assert,
            Act::Argue(_) => MoveKind::Argue,
            Act::PoseCq { .. } => MoveKind::PoseCq,
            Act::AnswerCq { .. } => MoveKind::AnswerCq,
            Act::Concede(_) => MoveKind::Concede,
            Act::Retract(_) => MoveKind::Retract,
            Act::Offer { .. } => MoveKind::Offer,
            Act::Accept => MoveKind::Accept,
            Act::ProposeShift { .. } => MoveKind::ProposeShift,
            Act::AcceptShift => MoveKind::AcceptShift,
            Act::Close { .. } => MoveKind::Close,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub speaker: Participant,
    pub act: Act,
}

impl Move {
    pub fn new(speaker: Participant, act: Act) -> Self {
        Move { speaker, act }
    }

    pub fn kind(&self) -> MoveKind {
        self.act.kind()
    }
}

/// A rejected move: who tried what, and which rule it broke.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleViolation {
    pub turn: usize,
    pub speaker: Participant,
    pub kind: MoveKind,
    pub rule: String,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "turn {}: {} {}: {}",
            self.turn, self.speaker, self.kind, self.rule
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DialogueError {
    #[error("incoherent dialogue {kind} in ({goal}, {situation}): {reason}")]
    Incoherent {
        kind: DialogueTypeId,
        situation: InitialSituation,
        goal: MainGoal,
        reason: String,
    },
    #[error("invalid participant id `{0}`")]
    InvalidParticipant(String),
    #[error("participants must be distinct, got `{0}` twice")]
    SameParticipants(Participant),
    #[error("dialogue is closed")]
    Closed,
    #[error("rule violation at {0}")]
    Violation(RuleViolation),
    #[error("no accepted shift proposal precedes this shift")]
    ShiftNotAgreed,
    #[error("embedding depth {0} reached")]
    DepthExceeded(usize),
    #[error("the root dialogue cannot be popped")]
    PopRoot,
    #[error("the embedded dialogue has not been closed")]
    FrameOpen,
    #[error("max turns must be positive")]
    NoTurns,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Offer {
    pub by: Side,
    pub terms: String,
    pub cost: Option<Cost>,
    pub accepted: bool,
}

/// One dialogue on the embedding stack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub kind: DialogueTypeId,
    pub situation: InitialSituation,
    pub goal: MainGoal,
    local: [BTreeSet<String>; 2],
    /// Effective stores of the parent at embedding time; read-only here.
    background: [BTreeSet<String>; 2],
    history: Vec<Move>,
    pending_shift: Option<(Side, ShiftMode, DialogueTypeId)>,
    offers: Vec<Offer>,
    closed: bool,
    conclusion: Option<String>,
}

impl Frame {
    fn open(kind: DialogueTypeId, background: [BTreeSet<String>; 2]) -> Self {
        let t = dialogue_type(kind);
        Frame {
            kind,
            situation: t.situation,
            goal: t.goal,
            local: Default::default(),
            background,
            history: Vec::new(),
            pending_shift: None,
            offers: Vec::new(),
            closed: false,
            conclusion: None,
        }
    }

    pub fn local(&self, side: Side) -> &BTreeSet<String> {
        &self.local[side.index()]
    }

    pub fn background(&self, side: Side) -> &BTreeSet<String> {
        &self.background[side.index()]
    }

    pub fn effective(&self, side: Side) -> BTreeSet<String> {
        self.local[side.index()]
            .union(&self.background[side.index()])
            .cloned()
            .collect()
    }

    fn commits(&self, side: Side, text: &str) -> bool {
        self.local[side.index()].contains(text) || self.background[side.index()].contains(text)
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn offers(&self) -> &[Offer] {
        &self.offers
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn conclusion(&self) -> Option<&str> {
        self.conclusion.as_deref()
    }

    fn pending_offer(&self, by: Side) -> Option<usize> {
        self.offers
            .iter()
            .rposition(|o| o.by == by && !o.accepted)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftEntry {
    pub turn: usize,
    pub from: DialogueTypeId,
    pub to: DialogueTypeId,
    pub mode: ShiftMode,
    /// A shift into eristic from any other type.
    pub degraded: bool,
}

impl ShiftEntry {
    fn new(turn: usize, from: DialogueTypeId, to: DialogueTypeId, mode: ShiftMode) -> Self {
        ShiftEntry {
            turn,
            from,
            to,
            mode,
            degraded: to == DialogueTypeId::Eristic && from != DialogueTypeId::Eristic,
        }
    }
}

/// The full state of a dialogue, root frame first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialogueState {
    participants: [Participant; 2],
    stack: Vec<Frame>,
    turn: Side,
    graph: ArgumentGraph,
    owners: BTreeMap<ArgId, Side>,
    shift_log: Vec<ShiftEntry>,
    moves: usize,
    closed: bool,
}

/// Starts a dialogue of type `kind`. The first participant is the
/// proponent and opens.
pub fn new_dialogue(
    kind: DialogueTypeId,
    situation: InitialSituation,
    goal: MainGoal,
    participants: [Participant; 2],
) -> Result<DialogueState, DialogueError> {
    let incoherent = |reason: String| DialogueError::Incoherent {
        kind,
        situation,
        goal,
        reason,
    };
    match types_for(goal, situation) {
        None => {
            return Err(incoherent(format!(
                "no dialogue type has main goal {goal} in situation {situation}"
            )))
        }
        Some(cell) if !cell.contains(&kind) => {
            let names: Vec<&str> = cell.iter().map(|t| t.as_str()).collect();
            return Err(incoherent(format!(
                "this cell holds {}, not {kind}",
                names.join(" or ")
            )));
        }
        Some(_) => {}
    }
    if participants[0] == participants[1] {
        return Err(DialogueError::SameParticipants(participants[0].clone()));
    }
    let mut root = Frame::open(kind, Default::default());
    root.situation = situation;
    root.goal = goal;
    Ok(DialogueState {
        participants,
        stack: vec![root],
        turn: Side::Proponent,
        graph: ArgumentGraph::new(),
        owners: BTreeMap::new(),
        shift_log: Vec::new(),
        moves: 0,
        closed: false,
    })
}

impl DialogueState {
    /// Lets the respondent move first.
    pub fn with_opener(mut self, side: Side) -> Self {
        if self.moves == 0 {
            self.turn = side;
        }
        self
    }

    pub fn participants(&self) -> &[Participant; 2] {
        &self.participants
    }

    pub fn participant(&self, side: Side) -> &Participant {
        &self.participants[side.index()]
    }

    pub fn side_of(&self, p: &Participant) -> Option<Side> {
        if *p == self.participants[0] {
            Some(Side::Proponent)
        } else if *p == self.participants[1] {
            Some(Side::Respondent)
        } else {
            None
        }
    }

    pub fn turn(&self) -> Side {
        self.turn
    }

    /// Index the next move will get.
    pub fn move_count(&self) -> usize {
        self.moves
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn depth(&self) -> usize {
        self.stack.len()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.stack
    }

    pub fn current(&self) -> &Frame {
        self.stack.last().expect("stack is never empty")
    }

    fn current_mut(&mut self) -> &mut Frame {
        self.stack.last_mut().expect("stack is never empty")
    }

    pub fn current_type(&self) -> DialogueTypeId {
        self.current().kind
    }

    pub fn graph(&self) -> &ArgumentGraph {
        &self.graph
    }

    pub fn owner(&self, arg: &ArgId) -> Option<Side> {
        self.owners.get(arg).copied()
    }

    pub fn shift_log(&self) -> &[ShiftEntry] {
        &self.shift_log
    }

    /// Effective commitment store of `side` in the current frame.
    pub fn commitments(&self, side: Side) -> BTreeSet<String> {
        self.current().effective(side)
    }

    /// Every frame's (situation, goal) still names its type.
    pub fn check_coherent(&self) -> Result<(), DialogueError> {
        for f in &self.stack {
            let ok = types_for(f.goal, f.situation).is_some_and(|c| c.contains(&f.kind));
            if !ok {
                return Err(DialogueError::Incoherent {
                    kind: f.kind,
                    situation: f.situation,
                    goal: f.goal,
                    reason: "frame does not match its table cell".into(),
                });
            }
        }
        Ok(())
    }

    /// Move kinds available to whoever holds the turn.
    pub fn legal_moves(&self) -> Result<Vec<(Participant, MoveKind)>, DialogueError> {
        if self.closed {
            return Err(DialogueError::Closed);
        }
        let side = self.turn;
        let who = self.participant(side);
        Ok(MoveKind::ALL
            .iter()
            .copied()
            .filter(|&k| self.availability(side, k).is_ok())
            .map(|k| (who.clone(), k))
            .collect())
    }

    /// CQs `side` could pose now, as (argument, index), lowest first.
    pub fn poseable_cqs(&self, side: Side) -> Vec<(ArgId, usize)> {
        let posed: BTreeSet<(&ArgId, usize)> = self
            .graph
            .cq_events()
            .iter()
            .map(|e| (&e.target, e.cq))
            .collect();
        let mut out = Vec::new();
        for inst in self.graph.arguments() {
            if self.owner(&inst.id) != Some(side.other()) {
                continue;
            }
            for cq in &inst.scheme().cqs {
                if !posed.contains(&(&inst.id, cq.index)) {
                    out.push((inst.id.clone(), cq.index));
                }
            }
        }
        out
    }

    /// Open CQs on arguments owned by `side`.
    pub fn answerable_cqs(&self, side: Side) -> Vec<(ArgId, usize)> {
        let mut out = Vec::new();
        for inst in self.graph.arguments() {
            if self.owner(&inst.id) == Some(side) {
                for cq in self.graph.open_cqs(&inst.id) {
                    out.push((inst.id.clone(), cq));
                }
            }
        }
        out
    }

    /// Statements of the other party that `side` could concede.
    pub fn concedable(&self, side: Side) -> Vec<String> {
        let f = self.current();
        f.effective(side.other())
            .into_iter()
            .filter(|s| !f.commits(side, s))
            .collect()
    }

    /// Whether `kind` is permitted for `side` and has something to act on.
    fn availability(&self, side: Side, kind: MoveKind) -> Result<(), String> {
        let frame = self.current();
        let t = dialogue_type(frame.kind);
        if !t.permits(side, kind) {
            return Err(format!(
                "{kind} is not permitted for the {side} in {}",
                frame.kind
            ));
        }
        let pending = frame.pending_shift;
        let has = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
        match kind {
            MoveKind::Assert | MoveKind::Argue | MoveKind::Offer | MoveKind::Close => Ok(()),
            MoveKind::PoseCq => has(
                !self.poseable_cqs(side).is_empty(),
                "no critical question is left to pose",
            ),
            MoveKind::AnswerCq => has(
                !self.answerable_cqs(side).is_empty(),
                "no open critical question on own arguments",
            ),
            MoveKind::Concede => has(
                !self.concedable(side).is_empty(),
                "nothing of the other party's to concede",
            ),
            MoveKind::Retract => has(
                !frame.local(side).is_empty(),
                "own local store is empty",
            ),
            MoveKind::Accept => has(
                frame.pending_offer(side.other()).is_some(),
                "no pending offer from the other party",
            ),
            MoveKind::ProposeShift => has(pending.is_none(), "a shift proposal is pending"),
            MoveKind::AcceptShift => has(
                pending.is_some_and(|(by, _, _)| by != side),
                "no shift proposal from the other party",
            ),
        }
    }

    fn violation(&self, speaker: &Participant, kind: MoveKind, rule: impl Into<String>) -> DialogueError {
        DialogueError::Violation(RuleViolation {
            turn: self.moves,
            speaker: speaker.clone(),
            kind,
            rule: rule.into(),
        })
    }

    /// Applies `mv`, returning the successor state.
    pub fn apply_move(&self, mv: &Move) -> Result<DialogueState, DialogueError> {
        if self.closed {
            return Err(DialogueError::Closed);
        }
        let kind = mv.kind();
        let fail = |rule: String| self.violation(&mv.speaker, kind, rule);
        let side = self
            .side_of(&mv.speaker)
            .ok_or_else(|| fail(format!("`{}` is not a participant", mv.speaker)))?;
        if side != self.turn {
            return Err(fail(format!(
                "it is {}'s turn",
                self.participant(self.turn)
            )));
        }
        self.availability(side, kind).map_err(&fail)?;

        let mut next = self.clone();
        let turn = self.moves;
        let mut next_turn = side.other();
        let mut do_shift = false;
        let mut do_pop = false;
        {
            let me = side.index();
            let other = side.other().index();
            match &mv.act {
                Act::Assert(text) => {
                    let text = nonempty(text).ok_or_else(|| fail("empty statement".into()))?;
                    next.current_mut().local[me].insert(text);
                }
                Act::Argue(inst) => {
                    next.graph
                        .add_argument(inst.clone())
                        .map_err(|e| fail(e.to_string()))?;
                    next.owners.insert(inst.id.clone(), side);
                    let frame = next.current_mut();
                    for s in inst.statements() {
                        frame.local[me].insert(normalize(&s.text));
                    }
                }
                Act::PoseCq { arg, cq } => {
                    let owner = self
                        .owner(arg)
                        .ok_or_else(|| fail(format!("unknown argument `{arg}`")))?;
                    if owner == side {
                        return Err(fail("cannot question one's own argument".into()));
                    }
                    next.graph = self.graph.pose_cq(arg, *cq).map_err(|e| fail(e.to_string()))?;
                    next_turn = owner;
                }
                Act::AnswerCq { arg, cq, answer } => {
                    if self.owner(arg) != Some(side) {
                        return Err(fail(format!("`{arg}` is not the speaker's argument")));
                    }
                    next.graph = self
                        .graph
                        .answer_cq(arg, *cq, answer)
                        .map_err(|e| fail(e.to_string()))?;
                    next.current_mut().local[me].insert(normalize(answer));
                }
                Act::Concede(text) => {
                    let text = nonempty(text).ok_or_else(|| fail("empty statement".into()))?;
                    let frame = self.current();
                    if !frame.commits(side.other(), &text) {
                        return Err(fail(format!(
                            "`{text}` is not in the other party's commitments"
                        )));
                    }
                    if frame.commits(side, &text) {
                        return Err(fail(format!("`{text}` is already committed")));
                    }
                    next.current_mut().local[me].insert(text);
                }
                Act::Retract(text) => {
                    let text = normalize(text);
                    let frame = next.current_mut();
                    if !frame.local[me].remove(&text) {
                        let rule = if frame.background[me].contains(&text) {
                            format!("`{text}` belongs to the enclosing dialogue and is read-only here")
                        } else {
                            format!("`{text}` is not committed")
                        };
                        return Err(fail(rule));
                    }
                }
                Act::Offer { terms, cost } => {
                    let terms = nonempty(terms).ok_or_else(|| fail("empty offer".into()))?;
                    next.current_mut().offers.push(Offer {
                        by: side,
                        terms,
                        cost: *cost,
                        accepted: false,
                    });
                }
                Act::Accept => {
                    let frame = next.current_mut();
                    let i = frame.pending_offer(side.other()).expect("checked by availability");
                    frame.offers[i].accepted = true;
                    let terms = frame.offers[i].terms.clone();
                    frame.local[me].insert(terms.clone());
                    frame.local[other].insert(terms);
                }
                Act::ProposeShift { mode, target } => {
                    match mode {
                        ShiftMode::Pop => {
                            return Err(fail("pop is not a proposable shift; close the embedded dialogue".into()))
                        }
                        ShiftMode::Embed if self.depth() >= MAX_DEPTH => {
                            return Err(fail(format!("embedding depth is capped at {MAX_DEPTH}")))
                        }
                        _ => {}
                    }
                    next.current_mut().pending_shift = Some((side, *mode, *target));
                }
                Act::AcceptShift => do_shift = true,
                Act::Close { conclusion } => {
                    let frame = next.current_mut();
                    if let Some(c) = conclusion {
                        let c = normalize(c);
                        let held = [Side::Proponent, Side::Respondent]
                            .map(|s| frame.commits(s, &c));
                        let ok = if frame.kind == DialogueTypeId::Deliberation {
                            held[0] || held[1]
                        } else {
                            held[0] && held[1]
                        };
                        if !ok {
                            let need = if frame.kind == DialogueTypeId::Deliberation {
                                "one party"
                            } else {
                                "both parties"
                            };
                            return Err(fail(format!("`{c}` must be committed by {need} to close")));
                        }
                        frame.conclusion = Some(c);
                    }
                    frame.closed = true;
                    do_pop = true;
                }
            }
        }

        let frame = next.current_mut();
        if !matches!(kind, MoveKind::ProposeShift | MoveKind::AcceptShift) {
            frame.pending_shift = None;
        }
        frame.history.push(mv.clone());
        if frame.kind == DialogueTypeId::Inquiry {
            next.retract_defeated(side);
        }
        next.moves += 1;
        next.turn = next_turn;

        if do_shift {
            next = next.shift_agreed(turn)?;
        }
        if do_pop {
            if next.depth() >= 2 {
                next = next.pop_embedding()?;
            } else {
                next.closed = true;
            }
        }
        next.check_coherent()?;
        Ok(next)
    }

    /// Inquiry keeps only established results: the claims of the mover's
    /// arguments that are now OUT leave their local store.
    fn retract_defeated(&mut self, side: Side) {
        let labels = self.graph.grounded_labelling();
        let defeated: Vec<String> = self
            .graph
            .arguments()
            .filter(|a| self.owners.get(&a.id) == Some(&side))
            .filter(|a| labels.argument(&a.id) == Some(Label::Out))
            .map(|a| normalize(a.claim()))
            .collect();
        let frame = self.current_mut();
        for claim in defeated {
            frame.local[side.index()].remove(&claim);
        }
    }

    /// Performs the shift agreed by the last two moves of the current
    /// frame: a proposal and its acceptance by the other party.
    pub fn shift(&self) -> Result<DialogueState, DialogueError> {
        self.shift_agreed(self.moves.checked_sub(1).ok_or(DialogueError::ShiftNotAgreed)?)
    }

    fn shift_agreed(&self, turn: usize) -> Result<DialogueState, DialogueError> {
        let frame = self.current();
        let h = &frame.history;
        let (mode, target) = match h.len().checked_sub(2).map(|i| (&h[i], &h[i + 1])) {
            Some((
                Move {
                    speaker: a,
                    act: Act::ProposeShift { mode, target },
                },
                Move {
                    speaker: b,
                    act: Act::AcceptShift,
                },
            )) if a != b => (*mode, *target),
            _ => return Err(DialogueError::ShiftNotAgreed),
        };
        let mut next = self.clone();
        let from = frame.kind;
        match mode {
            ShiftMode::Replace => {
                let t = dialogue_type(target);
                let f = next.current_mut();
                f.kind = target;
                f.situation = t.situation;
                f.goal = t.goal;
                f.pending_shift = None;
            }
            ShiftMode::Embed => {
                if next.depth() >= MAX_DEPTH {
                    return Err(DialogueError::DepthExceeded(MAX_DEPTH));
                }
                next.current_mut().pending_shift = None;
                let background = [Side::Proponent, Side::Respondent].map(|s| frame.effective(s));
                next.stack.push(Frame::open(target, background));
            }
            ShiftMode::Pop => return Err(DialogueError::ShiftNotAgreed),
        }
        next.shift_log.push(ShiftEntry::new(turn, from, target, mode));
        Ok(next)
    }

    /// Leaves a closed embedded dialogue. Statements both parties hold
    /// locally in it pass to both parties in the parent.
    pub fn pop_embedding(&self) -> Result<DialogueState, DialogueError> {
        if self.depth() < 2 {
            return Err(DialogueError::PopRoot);
        }
        if !self.current().closed {
            return Err(DialogueError::FrameOpen);
        }
        let mut next = self.clone();
        let child = next.stack.pop().expect("depth checked");
        let mutual: Vec<String> = child.local[0]
            .intersection(&child.local[1])
            .cloned()
            .collect();
        let parent = next.current_mut();
        for s in mutual {
            parent.local[0].insert(s.clone());
            parent.local[1].insert(s);
        }
        let to = parent.kind;
        next.shift_log.push(ShiftEntry::new(
            self.moves.saturating_sub(1),
            child.kind,
            to,
            ShiftMode::Pop,
        ));
        Ok(next)
    }
}

fn nonempty(text: &str) -> Option<String> {
    let t = normalize(text.trim());
    (!t.is_empty()).then_some(t)
}
