use std::collections::{BTreeSet, HashMap, HashSet};

use crate::automaton::{Flags, Label, Sra, StateId, Transition};

/// States reachable from `seed` through ε-transitions, `seed` included.
pub fn epsilon_closure(a: &Sra, seed: StateId) -> BTreeSet<StateId> {
    let mut out = BTreeSet::from([seed]);
    let mut stack = vec![seed];
    while let Some(q) = stack.pop() {
        for t in a.outgoing(q) {
            if t.label.is_epsilon() && out.insert(t.target) {
                stack.push(t.target);
            }
        }
    }
    out
}

/// Forward closure construction: each new state is the ε-closure of an
/// original state reached by a condition move.
pub fn eliminate_epsilon(a: &Sra) -> Sra {
    if !a.has_epsilon() {
        return a.clone();
    }
    let mut ids: HashMap<BTreeSet<StateId>, StateId> = HashMap::new();
    let mut closures: Vec<BTreeSet<StateId>> = Vec::new();
    let mut closure_cache: HashMap<StateId, BTreeSet<StateId>> = HashMap::new();
    let mut intern = |set: BTreeSet<StateId>, closures: &mut Vec<BTreeSet<StateId>>| -> (StateId, bool) {
        if let Some(id) = ids.get(&set) {
            return (*id, false);
        }
        let id = closures.len();
        ids.insert(set.clone(), id);
        closures.push(set);
        (id, true)
    };
    let start = epsilon_closure(a, a.start());
    intern(start, &mut closures);
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < closures.len() {
        let members = closures[next].clone();
        let mut seen: HashSet<Transition> = HashSet::new();
        for &q in &members {
            for t in a.outgoing(q) {
                if let Label::Cond(c) = &t.label {
                    let target_set =
                        closure_cache.entry(t.target).or_insert_with(|| epsilon_closure(a, t.target)).clone();
                    let (target, _) = intern(target_set, &mut closures);
                    let nt =
                        Transition { source: next, target, label: Label::Cond(c.clone()), writes: t.writes.clone() };
                    if seen.insert(nt.clone()) {
                        transitions.push(nt);
                    }
                }
            }
        }
        next += 1;
    }
    let finals: Vec<StateId> =
        closures.iter().enumerate().filter(|(_, set)| set.iter().any(|q| a.is_final(*q))).map(|(i, _)| i).collect();
    let mut out = Sra::new(closures.len(), 0, finals, a.registers().iter().cloned(), transitions)
        .expect("closure construction keeps endpoints and registers valid");
    out.set_flags_unchecked(Flags { window: a.flags().window, ..Flags::default() });
    out
}
