//! Argumentation schemes, critical-question evaluation and rule-checked
//! dialogues for mathematical argumentation.
//!
//! - [`scheme`]: sentential forms, substitutions, instances and validation.
//! - [`library`]: the built-in schemes, the registry and localization.
//! - [`evaluation`]: attack graphs from critical questions, grounded labels
//!   and effective qualifiers.
//! - [`dialogue`]: dialogue types, commitment stores, shifts and
//!   simulation.
//! - [`formats`]: the scheme language, graph files, scripts and
//!   transcripts.

pub mod dialogue;
pub mod evaluation;
pub mod formats;
pub mod library;
pub mod scheme;
