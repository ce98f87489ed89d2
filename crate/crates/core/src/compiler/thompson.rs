use crate::algebra::Register;
use crate::automaton::{Sra, SraBuilder, StateId, Transition};
use crate::pattern::Srem;

use super::CompileError;

/// Thompson-style construction. Every fragment has one entry and one exit
/// state; the register set of the result is every register mentioned in
/// `e`.
pub fn compile(e: &Srem) -> Result<Sra, CompileError> {
    let mut b = SraBuilder::new();
    for r in e.registers() {
        b.add_register(r);
    }
    let (start, fin) = fragment(e, &mut b)?;
    b.set_final(fin);
    Ok(b.build(start)?)
}

fn fragment(e: &Srem, b: &mut SraBuilder) -> Result<(StateId, StateId), CompileError> {
    Ok(match e {
        Srem::Window(..) => return Err(CompileError::WindowedInput),
        Srem::Empty => {
            let s = b.add_state();
            let f = b.add_state();
            (s, f)
        }
        Srem::Epsilon => {
            let s = b.add_state();
            let f = b.add_state();
            b.epsilon(s, f);
            (s, f)
        }
        Srem::Cond(c) => {
            let s = b.add_state();
            let f = b.add_state();
            b.add_transition(Transition::cond(s, f, c.clone()));
            (s, f)
        }
        Srem::CondWrite(c, r) => {
            let s = b.add_state();
            let f = b.add_state();
            b.add_transition(Transition::write(s, f, c.clone(), [Register::clone(r)]));
            (s, f)
        }
        Srem::Concat(x, y) => {
            let (s1, f1) = fragment(x, b)?;
            let (s2, f2) = fragment(y, b)?;
            b.epsilon(f1, s2);
            (s1, f2)
        }
        Srem::Or(x, y) => {
            let s = b.add_state();
            let (s1, f1) = fragment(x, b)?;
            let (s2, f2) = fragment(y, b)?;
            let f = b.add_state();
            b.epsilon(s, s1);
            b.epsilon(s, s2);
            b.epsilon(f1, f);
            b.epsilon(f2, f);
            (s, f)
        }
        Srem::Star(x) => {
            let s = b.add_state();
            let (s1, f1) = fragment(x, b)?;
            let f = b.add_state();
            b.epsilon(s, s1);
            b.epsilon(s, f);
            b.epsilon(f1, f);
            b.epsilon(f1, s1);
            (s, f)
        }
    })
}
