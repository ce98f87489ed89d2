use crate::algebra::Condition;
use crate::automaton::{Sra, SraBuilder, Stats, Transition};
use crate::pattern::Srem;

use super::closure::{concat_of, Renaming};
use super::complement::complete_and_complement;
use super::determinize::determinize;
use super::epsilon::eliminate_epsilon;
use super::single::to_single_register;
use super::thompson::compile;
use super::unroll::{unroll, UnrollMaps};
use super::CompileError;

/// compile, eliminate ε, normalize to one register per write, unroll to
/// the window length.
pub fn compile_windowed(e: &Srem) -> Result<(Sra, UnrollMaps), CompileError> {
    let Srem::Window(body, w) = e else {
        return Err(CompileError::NotWindowed);
    };
    let a = to_single_register(&eliminate_epsilon(&compile(body)?));
    Ok(unroll(&a, *w))
}

/// `TRUE*` as an automaton: one final state with a `TRUE` self-loop.
fn any_prefix() -> Sra {
    let mut b = SraBuilder::new();
    let q = b.add_state();
    b.add_transition(Transition::cond(q, q, Condition::True));
    b.set_final(q);
    b.build(q).expect("single-state automaton")
}

/// ε-free automaton for `TRUE* ; e`, the input of the stream engine. A
/// window stays on the match body.
pub fn compile_streaming(e: &Srem) -> Result<Sra, CompileError> {
    match e {
        Srem::Window(..) => {
            let (u, _) = compile_windowed(e)?;
            Ok(eliminate_epsilon(&concat_of(&any_prefix(), &u, Renaming::Auto)?))
        }
        _ => Ok(eliminate_epsilon(&compile(&e.to_streaming())?)),
    }
}

/// Named intermediate result, for inspecting where a pipeline grows.
#[derive(Debug, Clone)]
pub struct Stage {
    pub name: &'static str,
    pub automaton: Sra,
}

impl Stage {
    pub fn stats(&self) -> Stats {
        self.automaton.stats()
    }
}

/// Every stage of the compilation pipeline up to and including `last`
/// (one of `sra`, `nsra-unrolled`, `dsra`, `complement`).
pub fn stages(e: &Srem, last: &str) -> Result<Vec<Stage>, CompileError> {
    let order = ["sra", "nsra-unrolled", "dsra", "complement"];
    let upto = order.iter().position(|s| *s == last).ok_or_else(|| CompileError::UnknownStage(last.to_string()))?;
    let body = match e {
        Srem::Window(b, _) => b.as_ref(),
        other => other,
    };
    let mut out = Vec::new();
    let sra = compile(body)?;
    out.push(Stage { name: "sra", automaton: sra.clone() });
    if upto == 0 {
        return Ok(out);
    }
    let Srem::Window(_, w) = e else {
        return Err(CompileError::NotWindowed);
    };
    let free = eliminate_epsilon(&sra);
    out.push(Stage { name: "epsilon-free", automaton: free.clone() });
    let single = to_single_register(&free);
    out.push(Stage { name: "single-register", automaton: single.clone() });
    let (u, _) = unroll(&single, *w);
    out.push(Stage { name: "nsra-unrolled", automaton: u.clone() });
    if upto == 1 {
        return Ok(out);
    }
    let d = determinize(&u)?;
    out.push(Stage { name: "dsra", automaton: d.clone() });
    if upto == 2 {
        return Ok(out);
    }
    out.push(Stage { name: "complement", automaton: complete_and_complement(&d)? });
    Ok(out)
}
