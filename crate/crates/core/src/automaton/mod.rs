//! The automaton model, runs over strings and streams, DOT export and the
//! serialized document form.

mod determinism;
mod document;
mod dot;
mod run;
mod sra;

pub use determinism::{is_deterministic, DeterminismSample};
pub(crate) use document::library_from_declarations;
pub use document::{SraDocument, TransitionDoc, SRA_FORMAT, SRA_VERSION};
pub use dot::to_dot;
pub use run::{
    max_live_configurations, run_accepts, run_accepts_shared, run_accepts_with_cap, successors, successors_shared,
    Configuration, DeterministicRun, StepCounters, StreamEngine, DEFAULT_CONFIGURATION_CAP,
};
pub use sra::{Flags, Label, Sra, SraBuilder, StateId, Stats, Transition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("more than {0} live configurations")]
    ConfigurationCapExceeded(usize),
    #[error("determinism cannot be verified syntactically; supply a sample universe")]
    UnverifiableDeterminism,
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("the streaming engine needs an ε-free automaton")]
    HasEpsilon,
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("malformed automaton document: {0}")]
    Format(String),
}
