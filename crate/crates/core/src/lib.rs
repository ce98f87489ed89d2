//! Symbolic register automata for complex event recognition and forecasting.
//!
//! Patterns are regular expressions whose atoms are conditions over the
//! current event and the contents of registers. They compile to register
//! automata that run over event streams; windowed patterns can also be
//! determinized and used to learn a prediction suffix tree that forecasts
//! when the next match will happen.

pub mod algebra;
pub mod automaton;
pub mod compiler;
pub mod forecast;
pub mod pattern;
pub mod shell;
