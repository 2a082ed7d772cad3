//! Dialogue scripts.
//!
//! ```text
//! dialogue inquiry
//! situation open-problem
//! goal stable-resolution
//! participants P1 P2
//! P1 assert "the conjecture is open"
//! P1 propose-shift embed persuasion
//! P2 accept-shift
//! close
//! ```

use std::fmt::Write as _;

use super::graph::{parse_instance, write_instance};
use super::lex::{lines, quote, tokenize, Cursor, Token};
use super::Diagnostic;
use crate::dialogue::{
    dialogue_type, new_dialogue, Act, Cost, DialogueError, DialogueState, DialogueTypeId,
    InitialSituation, MainGoal, MoveKind, Participant, ScriptLine, ShiftMode, Side,
};
use crate::library::SchemeRegistry;
use crate::scheme::ArgId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptHeader {
    pub kind: DialogueTypeId,
    pub situation: InitialSituation,
    pub goal: MainGoal,
    pub participants: [Participant; 2],
    /// Who moves first; the proponent when absent.
    pub opener: Option<Participant>,
}

impl ScriptHeader {
    pub fn initial_state(&self) -> Result<DialogueState, DialogueError> {
        let state = new_dialogue(
            self.kind,
            self.situation,
            self.goal,
            self.participants.clone(),
        )?;
        Ok(match &self.opener {
            Some(p) if *p == self.participants[1] => state.with_opener(Side::Respondent),
            _ => state,
        })
    }

    pub fn write(&self, out: &mut String) {
        let _ = writeln!(out, "dialogue {}", self.kind);
        let _ = writeln!(out, "situation {}", self.situation);
        let _ = writeln!(out, "goal {}", self.goal);
        let _ = writeln!(
            out,
            "participants {} {}",
            self.participants[0], self.participants[1]
        );
        if let Some(o) = &self.opener {
            let _ = writeln!(out, "opener {o}");
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScriptDocument {
    pub header: Option<ScriptHeader>,
    pub lines: Vec<ScriptLine>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Default)]
pub(crate) struct HeaderBuilder {
    kind: Option<DialogueTypeId>,
    situation: Option<InitialSituation>,
    goal: Option<MainGoal>,
    participants: Option<[Participant; 2]>,
    opener: Option<Participant>,
    first: Option<(usize, usize)>,
}

pub(crate) const HEADER_KEYS: [&str; 5] = ["dialogue", "situation", "goal", "participants", "opener"];

impl HeaderBuilder {
    /// Consumes one header line. `c` is positioned after the key.
    pub(crate) fn line(&mut self, key: &Token, c: &mut Cursor<'_>) -> Result<(), Diagnostic> {
        self.first.get_or_insert((key.line, key.column));
        let k = key.word().unwrap_or_default();
        let dup = || key.diag(format!("`{k}` given twice"));
        match k {
            "dialogue" => {
                let (_, t) = c.parse_word::<DialogueTypeId>("dialogue type")?;
                if self.kind.replace(t).is_some() {
                    return Err(dup());
                }
            }
            "situation" => {
                let (_, s) = c.parse_word::<InitialSituation>("initial situation")?;
                if self.situation.replace(s).is_some() {
                    return Err(dup());
                }
            }
            "goal" => {
                let (_, g) = c.parse_word::<MainGoal>("main goal")?;
                if self.goal.replace(g).is_some() {
                    return Err(dup());
                }
            }
            "participants" => {
                let mut ps = Vec::new();
                for _ in 0..2 {
                    let t = c.expect_word("participant id")?;
                    ps.push(
                        Participant::new(t.word().unwrap_or_default())
                            .map_err(|e| t.diag(e.to_string()))?,
                    );
                }
                if ps[0] == ps[1] {
                    return Err(key.diag("participants must be distinct"));
                }
                let pair = [ps[0].clone(), ps[1].clone()];
                if self.participants.replace(pair).is_some() {
                    return Err(dup());
                }
            }
            "opener" => {
                let t = c.expect_word("participant id")?;
                let p = Participant::new(t.word().unwrap_or_default())
                    .map_err(|e| t.diag(e.to_string()))?;
                if self.opener.replace(p).is_some() {
                    return Err(dup());
                }
            }
            _ => unreachable!("caller checks the key"),
        }
        c.expect_end()
    }

    pub(crate) fn participants(&self) -> Option<&[Participant; 2]> {
        self.participants.as_ref()
    }

    /// Completes the header. Situation and goal default to the type's cell.
    pub(crate) fn finish(self) -> Result<Option<ScriptHeader>, Diagnostic> {
        let Some((line, column)) = self.first else {
            return Ok(None);
        };
        let at = |m: &str| Diagnostic::new(line, column, m);
        let kind = self.kind.ok_or_else(|| at("header has no `dialogue` line"))?;
        let participants = self
            .participants
            .ok_or_else(|| at("header has no `participants` line"))?;
        if let Some(o) = &self.opener {
            if !participants.contains(o) {
                return Err(at(&format!("opener `{o}` is not a participant")));
            }
        }
        let t = dialogue_type(kind);
        Ok(Some(ScriptHeader {
            kind,
            situation: self.situation.unwrap_or(t.situation),
            goal: self.goal.unwrap_or(t.goal),
            participants,
            opener: self.opener,
        }))
    }
}

/// Parses the move part of a line: `<kind> <payload...>`.
pub(crate) fn parse_act(c: &mut Cursor<'_>, registry: &SchemeRegistry) -> Result<Act, Diagnostic> {
    let (kt, kind) = c.parse_word::<MoveKind>("move kind")?;
    let text = |c: &mut Cursor<'_>, what: &str| -> Result<String, Diagnostic> {
        Ok(c.expect_string(what)?.1.to_string())
    };
    let cq_ref = |c: &mut Cursor<'_>| -> Result<(ArgId, usize), Diagnostic> {
        let a = c.expect_word("argument id")?;
        let (_, n) = c.parse_word::<usize>("question number")?;
        Ok((ArgId::new(a.word().unwrap_or_default()), n))
    };
    let act = match kind {
        MoveKind::Assert => Act::Assert(text(c, "statement")?),
        MoveKind::Concede => Act::Concede(text(c, "statement")?),
        MoveKind::Retract => Act::Retract(text(c, "statement")?),
        MoveKind::Argue => return parse_instance(c, registry).map(Act::Argue),
        MoveKind::PoseCq => {
            let (arg, cq) = cq_ref(c)?;
            Act::PoseCq { arg, cq }
        }
        MoveKind::AnswerCq => {
            let (arg, cq) = cq_ref(c)?;
            Act::AnswerCq {
                arg,
                cq,
                answer: text(c, "answer text")?,
            }
        }
        MoveKind::Offer => {
            let terms = text(c, "offer terms")?;
            let cost = match c.peek() {
                Some(t) if t.word() == Some("cost") => {
                    c.next();
                    let (t, v) = c.parse_word::<f64>("cost")?;
                    Some(Cost::new(v).ok_or_else(|| {
                        t.diag(format!("cost must be finite and non-negative, got {v}"))
                    })?)
                }
                _ => None,
            };
            Act::Offer { terms, cost }
        }
        MoveKind::Accept => Act::Accept,
        MoveKind::ProposeShift => {
            let (mt, mode) = c.parse_word::<ShiftMode>("shift mode")?;
            if mode == ShiftMode::Pop {
                return Err(mt.diag("only replace and embed shifts can be proposed"));
            }
            let (_, target) = c.parse_word::<DialogueTypeId>("dialogue type")?;
            Act::ProposeShift { mode, target }
        }
        MoveKind::AcceptShift => Act::AcceptShift,
        MoveKind::Close => Act::Close {
            conclusion: match c.peek() {
                Some(_) => Some(text(c, "conclusion")?),
                None => None,
            },
        },
    };
    c.expect_end().map_err(|d| {
        Diagnostic::new(d.line, d.column, format!("{} after {} move", d.message, kt.word().unwrap_or_default()))
    })?;
    Ok(act)
}

pub fn write_act(act: &Act) -> String {
    let kind = act.kind();
    let payload = match act {
        Act::Assert(s) | Act::Concede(s) | Act::Retract(s) => quote(s),
        Act::Argue(inst) => write_instance(inst),
        Act::PoseCq { arg, cq } => format!("{arg} {cq}"),
        Act::AnswerCq { arg, cq, answer } => format!("{arg} {cq} {}", quote(answer)),
        Act::Offer { terms, cost } => match cost {
            Some(c) => format!("{} cost {c}", quote(terms)),
            None => quote(terms),
        },
        Act::ProposeShift { mode, target } => format!("{mode} {target}"),
        Act::Accept | Act::AcceptShift => String::new(),
        Act::Close { conclusion } => conclusion.as_deref().map(quote).unwrap_or_default(),
    };
    if payload.is_empty() {
        kind.to_string()
    } else {
        format!("{kind} {payload}")
    }
}

pub(crate) fn write_line(line: &ScriptLine) -> String {
    match &line.speaker {
        Some(p) => format!("{p} {}", write_act(&line.act)),
        None => write_act(&line.act),
    }
}

/// Reads an optional speaker then an act.
pub(crate) fn parse_move_line(
    c: &mut Cursor<'_>,
    participants: Option<&[Participant; 2]>,
    registry: &SchemeRegistry,
) -> Result<ScriptLine, Diagnostic> {
    let first = c.peek().ok_or_else(|| Diagnostic::new(1, 1, "empty move"))?;
    let w = first.word().unwrap_or_default();
    let named = participants.is_some_and(|ps| ps.iter().any(|p| p.as_str() == w));
    let speaker = if w.parse::<MoveKind>().is_ok() && !(named && c.rest().len() > 1) {
        None
    } else {
        c.next();
        let parts = participants.ok_or_else(|| first.diag("move before the `participants` line"))?;
        let p = parts
            .iter()
            .find(|p| p.as_str() == w)
            .ok_or_else(|| {
                first.diag(format!(
                    "`{w}` is not a declared participant ({} or {})",
                    parts[0], parts[1]
                ))
            })?;
        Some(p.clone())
    };
    let act = parse_act(c, registry)?;
    Ok(ScriptLine { speaker, act })
}

pub fn parse_script(text: &str, registry: &SchemeRegistry) -> ScriptDocument {
    let (tokens, mut diagnostics) = tokenize(text);
    let mut header = HeaderBuilder::default();
    let mut moves = Vec::new();
    let mut in_moves = false;
    for line in lines(tokens) {
        let mut c = Cursor::new(&line);
        let key = &line[0];
        let r = match key.word() {
            Some(k) if HEADER_KEYS.contains(&k) => {
                if in_moves {
                    Err(key.diag("header lines must precede moves"))
                } else {
                    c.next();
                    header.line(key, &mut c)
                }
            }
            _ => {
                in_moves = true;
                parse_move_line(&mut c, header.participants(), registry).map(|l| moves.push(l))
            }
        };
        if let Err(d) = r {
            diagnostics.push(d);
        }
    }
    let header = match header.finish() {
        Ok(h) => h,
        Err(d) => {
            diagnostics.push(d);
            None
        }
    };
    if header.is_none() && !moves.is_empty() && diagnostics.is_empty() {
        diagnostics.push(Diagnostic::new(1, 1, "script has moves but no header"));
    }
    diagnostics.sort_by_key(|d| (d.line, d.column));
    ScriptDocument {
        header,
        lines: moves,
        diagnostics,
    }
}

pub fn serialize_script(doc: &ScriptDocument) -> String {
    let mut out = String::new();
    if let Some(h) = &doc.header {
        h.write(&mut out);
    }
    for l in &doc.lines {
        out.push_str(&write_line(l));
        out.push('\n');
    }
    out
}
