//! Dialogue types, commitment stores, dialectical shifts and simulation.

mod simulate;
mod state;
mod types;

pub use simulate::{
    replay, run_simulation, shift_report, ArgumentOutcome, CompliantProver, ExhaustiveSceptic,
    Policy, ScriptLine, ScriptPolicy, Status, Transcript, TurnRecord,
};
pub use state::{
    new_dialogue, Act, Cost, DialogueError, DialogueState, Frame, Move, Offer, Participant,
    RuleViolation, ShiftEntry, MAX_DEPTH,
};
pub use types::{
    dialogue_type, dialogue_types, types_for, DialogueType, DialogueTypeId, InitialSituation,
    MainGoal, MoveKind, ShiftMode, Side,
};
