//! Textual formats: scheme definitions, argument graphs, dialogue scripts
//! and transcripts. Every parser is total and reports problems as
//! located diagnostics.

mod graph;
mod lex;
mod scheme_dsl;
mod script;
mod transcript;

use std::fmt;

pub use graph::{evaluation_report, export_graph, export_graph_machine, parse_graph, GraphDocument};
pub use scheme_dsl::{parse_scheme_dsl, serialize_scheme, serialize_schemes, SchemeDocument};
pub use script::{parse_script, serialize_script, write_act, ScriptDocument, ScriptHeader};
pub use transcript::{parse_transcript, render_transcript, verify_transcript, TranscriptDocument};

/// A problem found while reading input, with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}
