//! Events, predicates, conditions, valuations and minterms.

mod condition;
mod event;
mod minterm;
mod predicate;

pub use condition::{Arg, Atom, Condition, Register, Registers, Valuation};
pub use event::{quote, Event, Value};
pub use minterm::{entails, minterm_conditions, minterms, syntactically_exclusive, Minterm};
pub use predicate::{CmpOp, Operand, PredExpr, Predicate, PredicateLibrary};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("register {0} is read before anything was written to it")]
    UnboundRegister(Register),
    #[error("predicate {predicate} expects {expected} arguments, got {found}")]
    ArityMismatch { predicate: String, expected: usize, found: usize },
    #[error("invalid predicate {name}: {reason}")]
    InvalidPredicate { name: String, reason: String },
    #[error("predicate {0} is declared twice")]
    DuplicatePredicate(String),
    #[error("condition is not a minterm over the queried condition")]
    NotAMinterm,
}
