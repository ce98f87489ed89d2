//! Symbolization of event streams through a deterministic automaton,
//! prediction suffix trees over the resulting symbols, and waiting-time
//! forecasts.

mod pst;
mod symbols;
mod waiting;

pub use pst::{learn_pst, log_loss, Pst, PstDocument, PstNode, PstParams, PST_FORMAT, PST_VERSION};
pub use symbols::{symbolize, ClassicalAutomaton, Symbol, SymbolMap};
pub use waiting::{
    forecast_classification, forecast_regression, waiting_time, Classification, Forecast, WaitingTimeDistribution,
    WaitingTimeModel,
};

use crate::automaton::AutomatonError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ForecastError {
    #[error("need at least {needed} symbols, got {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("no transition fires on event {index}; complete the automaton first")]
    NoTransition { index: usize },
    #[error("automaton is not marked deterministic")]
    NotDeterministic,
    #[error("automaton is not marked complete")]
    NotComplete,
    #[error("label `{0}` has no symbol")]
    UnknownLabel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid prediction suffix tree: {0}")]
    InvalidPst(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}
