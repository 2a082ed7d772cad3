//! Transcript rendering and reading.

use std::fmt::Write as _;

use super::lex::{lines, quote, tokenize, Cursor};
use super::script::{parse_move_line, write_act, HeaderBuilder, ScriptHeader, HEADER_KEYS};
use super::Diagnostic;
use crate::dialogue::{
    replay, shift_report, Act, DialogueState, DialogueTypeId, Move, ShiftEntry, ShiftMode, Side,
    Status, Transcript,
};
use crate::library::SchemeRegistry;

fn header_of(state: &DialogueState) -> ScriptHeader {
    let root = &state.frames()[0];
    ScriptHeader {
        kind: root.kind,
        situation: root.situation,
        goal: root.goal,
        participants: state.participants().clone(),
        opener: (state.turn() == Side::Respondent).then(|| state.participant(Side::Respondent).clone()),
    }
}

fn write_shift(out: &mut String, e: &ShiftEntry) {
    let _ = write!(out, "  shift {} {} {} {}", e.turn, e.mode, e.from, e.to);
    if e.degraded {
        out.push_str(" degraded");
    }
    out.push('\n');
}

/// Renders a transcript. The output is a function of the transcript
/// alone, so equal transcripts render to equal bytes.
pub fn render_transcript(t: &Transcript) -> String {
    let mut out = String::from("transcript\n");
    header_of(&t.initial).write(&mut out);
    let who = |s: Side| t.initial.participant(s).clone();
    for r in &t.turns {
        let _ = writeln!(out, "turn {} {} {}", r.index, r.mv.speaker, write_act(&r.mv.act));
        if let Act::Argue(inst) = &r.mv.act {
            for p in &inst.premises {
                let _ = writeln!(out, "  | {}: {}", p.role, p.text);
            }
            let ind = inst
                .scheme()
                .indicator
                .as_deref()
                .map(|i| format!("{i}, "))
                .unwrap_or_default();
            let _ = writeln!(out, "  | {}: {ind}{}", inst.conclusion.role, inst.conclusion.text);
        }
        for (side, s) in &r.added {
            let _ = writeln!(out, "  + {} {}", who(*side), quote(s));
        }
        for (side, s) in &r.removed {
            let _ = writeln!(out, "  - {} {}", who(*side), quote(s));
        }
        for e in &r.shifts {
            let _ = writeln!(out, "  ~ {} {} -> {}", e.mode, e.from, e.to);
        }
    }
    if let Some(m) = &t.attempted {
        let _ = writeln!(out, "rejected {} {}", m.speaker, write_act(&m.act));
    }
    match &t.status {
        Status::Violation(e) => {
            let _ = writeln!(out, "status violation {}", quote(&e.to_string()));
        }
        s => {
            let _ = writeln!(out, "status {}", s.as_str());
        }
    }
    out.push_str("shift-report\n");
    for e in shift_report(t) {
        write_shift(&mut out, &e);
    }
    out.push_str("labels\n");
    for o in &t.outcomes {
        let _ = writeln!(out, "  {} {} {}", o.arg, o.label, o.qualifier);
    }
    out.push_str("stores\n");
    for side in [Side::Proponent, Side::Respondent] {
        for s in t.final_state.commitments(side) {
            let _ = writeln!(out, "  {} {}", who(side), quote(&s));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TranscriptDocument {
    pub header: Option<ScriptHeader>,
    /// Played moves followed by the rejected one, if any.
    pub moves: Vec<Move>,
    pub shifts: Vec<ShiftEntry>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(PartialEq)]
enum Section {
    Moves,
    Shifts,
    Labels,
    Stores,
}

/// Reads the header, the moves and the recorded shift report. Per-turn
/// annotations, labels and stores are derived data and are skipped.
pub fn parse_transcript(text: &str, registry: &SchemeRegistry) -> TranscriptDocument {
    let (tokens, mut diagnostics) = tokenize(text);
    let mut header = HeaderBuilder::default();
    let mut moves = Vec::new();
    let mut shifts = Vec::new();
    let mut section = Section::Moves;
    let mut rejected = false;
    for line in lines(tokens) {
        let mut c = Cursor::new(&line);
        let key = &line[0];
        let word = key.word().unwrap_or_default();
        let r: Result<(), Diagnostic> = (|| {
            match word {
                "transcript" => {
                    c.next();
                    c.expect_end()
                }
                "shift-report" => {
                    section = Section::Shifts;
                    Ok(())
                }
                "labels" => {
                    section = Section::Labels;
                    Ok(())
                }
                "stores" => {
                    section = Section::Stores;
                    Ok(())
                }
                "status" => Ok(()),
                _ if section == Section::Labels || section == Section::Stores => Ok(()),
                "shift" if section == Section::Shifts => {
                    c.next();
                    let (_, turn) = c.parse_word::<usize>("turn index")?;
                    let (_, mode) = c.parse_word::<ShiftMode>("shift mode")?;
                    let (_, from) = c.parse_word::<DialogueTypeId>("dialogue type")?;
                    let (_, to) = c.parse_word::<DialogueTypeId>("dialogue type")?;
                    let degraded = match c.next() {
                        None => false,
                        Some(t) if t.word() == Some("degraded") => true,
                        Some(t) => return Err(t.diag(format!("unexpected {}", t.describe()))),
                    };
                    c.expect_end()?;
                    shifts.push(ShiftEntry {
                        turn,
                        from,
                        to,
                        mode,
                        degraded,
                    });
                    Ok(())
                }
                "|" | "+" | "-" | "~" if section == Section::Moves => Ok(()),
                k if HEADER_KEYS.contains(&k) && section == Section::Moves => {
                    if !moves.is_empty() {
                        return Err(key.diag("header lines must precede moves"));
                    }
                    c.next();
                    header.line(key, &mut c)
                }
                "turn" | "rejected" if section == Section::Moves => {
                    if rejected {
                        return Err(key.diag("nothing may follow the rejected move"));
                    }
                    c.next();
                    if word == "turn" {
                        let (t, n) = c.parse_word::<usize>("turn index")?;
                        if n != moves.len() {
                            return Err(t.diag(format!("expected turn {}, found {n}", moves.len())));
                        }
                    } else {
                        rejected = true;
                    }
                    let l = parse_move_line(&mut c, header.participants(), registry)?;
                    let speaker = l
                        .speaker
                        .ok_or_else(|| key.diag("recorded moves name their speaker"))?;
                    moves.push(Move::new(speaker, l.act));
                    Ok(())
                }
                _ => Err(key.diag(format!("unexpected {}", key.describe()))),
            }
        })();
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
    if header.is_none() && diagnostics.is_empty() {
        diagnostics.push(Diagnostic::new(1, 1, "transcript has no header"));
    }
    diagnostics.sort_by_key(|d| (d.line, d.column));
    TranscriptDocument {
        header,
        moves,
        shifts,
        diagnostics,
    }
}

/// Replays a parsed transcript and checks its recorded shift report.
pub fn verify_transcript(doc: &TranscriptDocument) -> Result<Transcript, String> {
    let header = doc.header.as_ref().ok_or("transcript has no header")?;
    let initial = header.initial_state().map_err(|e| e.to_string())?;
    let t = replay(&initial, &doc.moves).map_err(|e| e.to_string())?;
    let replayed = shift_report(&t);
    if replayed != doc.shifts {
        return Err(format!(
            "recorded shift report has {} entries but replay yields {}",
            doc.shifts.len(),
            replayed.len()
        ));
    }
    Ok(t)
}
