use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::Condition;
use crate::automaton::{is_deterministic, Flags, Sra, StateId, Transition};
use crate::pattern::Srem;

use super::determinize::determinize_expr;
use super::CompileError;

fn require_deterministic(a: &Sra) -> Result<(), CompileError> {
    if a.flags().deterministic || matches!(is_deterministic(a, None), Ok(true)) {
        Ok(())
    } else {
        Err(CompileError::NotDeterministic)
    }
}

/// Splits a guard into its conjunct leaves with their polarity.
fn literals(c: &Condition, out: &mut Vec<(Condition, bool)>) {
    match c {
        Condition::True => {}
        Condition::And(a, b) => {
            literals(a, out);
            literals(b, out);
        }
        Condition::Not(inner) => out.push((inner.as_ref().clone(), false)),
        other => out.push((other.clone(), true)),
    }
}

/// Whether the guards are recognisably all the minterms of one family, in
/// which case they already cover every (event, valuation).
fn is_full_family(guards: &[&Condition]) -> bool {
    let mut base: BTreeSet<Condition> = BTreeSet::new();
    let mut vectors: BTreeSet<BTreeMap<Condition, bool>> = BTreeSet::new();
    let mut split = Vec::new();
    for g in guards {
        let mut lits = Vec::new();
        literals(g, &mut lits);
        base.extend(lits.iter().map(|(c, _)| c.clone()));
        split.push(lits);
    }
    if base.len() >= 31 {
        return false;
    }
    for lits in split {
        let v: BTreeMap<Condition, bool> = lits.iter().cloned().collect();
        if v.len() != lits.len() || v.len() != base.len() {
            return false;
        }
        vectors.insert(v);
    }
    vectors.len() == 1usize << base.len()
}

/// Adds a dead state that every missing move leads to. Each state gets a
/// transition guarded by the conjunction of its negated guards, unless its
/// guards already form a full minterm family or include `TRUE`.
pub fn complete(a: &Sra) -> Result<Sra, CompileError> {
    require_deterministic(a)?;
    if a.flags().complete {
        return Ok(a.clone());
    }
    let dead = a.num_states();
    let mut transitions: Vec<Transition> = a.transitions().to_vec();
    for q in a.states() {
        let guards: Vec<&Condition> = a.outgoing(q).filter_map(|t| t.label.condition()).collect();
        if guards.contains(&&Condition::True) || (!guards.is_empty() && is_full_family(&guards)) {
            continue;
        }
        let mut seen = BTreeSet::new();
        let parts: Vec<Condition> =
            guards.into_iter().filter(|g| seen.insert((*g).clone())).map(|g| Condition::not(g.clone())).collect();
        transitions.push(Transition::cond(q, dead, Condition::conjunction(parts)));
    }
    transitions.push(Transition::cond(dead, dead, Condition::True));
    let mut out = Sra::new(
        a.num_states() + 1,
        a.start(),
        a.finals().iter().copied(),
        a.registers().iter().cloned(),
        transitions,
    )?;
    out.set_flags_unchecked(Flags { unrolled: false, deterministic: true, complete: true, window: None });
    Ok(out)
}

/// Completes the automaton, then swaps final and non-final states (the dead
/// state included).
pub fn complete_and_complement(a: &Sra) -> Result<Sra, CompileError> {
    let c = complete(a)?;
    let finals: Vec<StateId> = c.states().filter(|q| !c.is_final(*q)).collect();
    let mut out = Sra::new(c.num_states(), c.start(), finals, c.registers().iter().cloned(), c.transitions().to_vec())?;
    out.set_flags_unchecked(Flags { unrolled: false, deterministic: true, complete: true, window: None });
    Ok(out)
}

/// Complement of a windowed expression.
pub fn complement_expr(e: &Srem) -> Result<Sra, CompileError> {
    complete_and_complement(&determinize_expr(e)?)
}
