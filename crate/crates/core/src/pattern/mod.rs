//! Expression syntax, the textual pattern language and the derivation
//! oracle.

mod ast;
mod derive;
mod lexer;
mod parser;

pub use ast::{Pattern, Srem};
pub use derive::{accepts, accepts_shared, derive, derive_shared, DerivationResult};
pub use parser::{is_register_name, parse_condition, parse_declarations, parse_expr, parse_pattern};

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PatternError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown predicate `{name}` at {line}:{column}")]
    UnknownPredicate { name: String, line: usize, column: usize },
    #[error("register `{0}` is read but never written")]
    UnknownRegister(String),
    #[error("at {line}:{column}: {source}")]
    Predicate {
        line: usize,
        column: usize,
        #[source]
        source: AlgebraError,
    },
}
