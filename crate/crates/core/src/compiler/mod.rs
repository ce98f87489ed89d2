//! Constructions between expressions and automata.

mod closure;
mod complement;
mod determinize;
mod epsilon;
mod pipeline;
mod single;
mod thompson;
mod to_srem;
mod unroll;

pub use closure::{concat_of, fresh_register, intersect, intersect_traced, star_of, union_of, ProductTrace, Renaming};
pub use complement::{complement_expr, complete, complete_and_complement};
pub use determinize::{determinize, determinize_expr, determinize_streaming, MAX_FAMILY, MAX_STATES};
pub use epsilon::{eliminate_epsilon, epsilon_closure};
pub use pipeline::{compile_streaming, compile_windowed, stages, Stage};
pub use single::{block_of, partition_after_write, to_single_register, RegisterPartition};
pub use thompson::compile;
pub use to_srem::{sra_to_srem, Gsra};
pub use unroll::{unroll, UnrollMaps};

use crate::automaton::AutomatonError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("windowed expressions go through the windowed pipeline")]
    WindowedInput,
    #[error("expression has no window; unbounded expressions are not closed under determinization or complement")]
    NotWindowed,
    #[error("determinization needs an unrolled (acyclic, ε-free) automaton")]
    NotUnrolled,
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("register {0} occurs in both operands")]
    RegisterCollision(String),
    #[error("construction too large: {0}")]
    TooLarge(String),
    #[error("unknown stage `{0}`")]
    UnknownStage(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}
