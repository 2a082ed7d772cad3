//! Attack graphs built from critical-question events, and their
//! acceptability labels.

mod graph;
mod labelling;

pub use graph::{
    ArgumentEvaluation, ArgumentGraph, AttackEdge, AttackKind, AttackPoint, CqEvent, CqStatus,
    EvalError, Labelling, NodeId,
};
pub use labelling::{Framework, Label, BRUTE_FORCE_CAP};
