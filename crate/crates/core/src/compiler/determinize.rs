use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::{minterms, Condition, Register};
use crate::automaton::{Flags, Sra, StateId, Transition};
use crate::pattern::Srem;

use super::pipeline::compile_windowed;
use super::CompileError;

/// Largest condition family a single state may contribute to the minterm
/// construction.
pub const MAX_FAMILY: usize = 16;
/// Largest number of states a determinization may build.
pub const MAX_STATES: usize = 200_000;

/// One candidate move gathered at a powerset state.
struct Move {
    cond: usize,
    slot: usize,
    target: StateId,
    writes: BTreeSet<Register>,
}

/// Interned condition family of one state.
#[derive(Default)]
struct Family {
    conds: Vec<Condition>,
    index: HashMap<Condition, usize>,
}

impl Family {
    fn add(&mut self, c: Condition) -> usize {
        if let Some(i) = self.index.get(&c) {
            return *i;
        }
        self.index.insert(c.clone(), self.conds.len());
        self.conds.push(c);
        self.conds.len() - 1
    }
}

/// For every minterm of the family: its guard, the targets per slot of the
/// moves it entails and the union of their writes.
/// A minterm, the target set of every slot and the registers written.
type Split = (Condition, Vec<BTreeSet<StateId>>, BTreeSet<Register>);

fn split(family: &Family, moves: &[Move], slots: usize) -> Result<Vec<Split>, CompileError> {
    if family.conds.len() > MAX_FAMILY {
        return Err(CompileError::TooLarge(format!(
            "a state has {} distinct outgoing conditions (limit {MAX_FAMILY})",
            family.conds.len()
        )));
    }
    let mut out = Vec::new();
    for mt in minterms(&family.conds) {
        let mut targets = vec![BTreeSet::new(); slots];
        let mut writes = BTreeSet::new();
        for m in moves {
            if mt.entails(&family.conds[m.cond]).expect("family member") {
                targets[m.slot].insert(m.target);
                writes.extend(m.writes.iter().cloned());
            }
        }
        out.push((mt.to_condition(), targets, writes));
    }
    Ok(out)
}

/// Subset construction over an unrolled automaton. Only reachable subsets
/// are built; a minterm that entails no transition produces no transition,
/// so the result may be incomplete (see `complete`).
pub fn determinize(a: &Sra) -> Result<Sra, CompileError> {
    if !a.is_unrolled() && !(a.is_acyclic() && !a.has_epsilon()) {
        return Err(CompileError::NotUnrolled);
    }
    if a.has_epsilon() {
        return Err(CompileError::NotUnrolled);
    }
    let mut ids: HashMap<BTreeSet<StateId>, StateId> = HashMap::new();
    let mut sets: Vec<BTreeSet<StateId>> = Vec::new();
    let intern =
        |s: BTreeSet<StateId>, ids: &mut HashMap<BTreeSet<StateId>, StateId>, sets: &mut Vec<BTreeSet<StateId>>| {
            *ids.entry(s.clone()).or_insert_with(|| {
                sets.push(s);
                sets.len() - 1
            })
        };
    intern(BTreeSet::from([a.start()]), &mut ids, &mut sets);
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < sets.len() {
        let mut family = Family::default();
        let mut moves = Vec::new();
        for &q in &sets[next] {
            for t in a.outgoing(q) {
                let c = t.label.condition().expect("ε-free").clone();
                moves.push(Move { cond: family.add(c), slot: 0, target: t.target, writes: t.writes.clone() });
            }
        }
        for (guard, mut targets, writes) in split(&family, &moves, 1)? {
            let targets = targets.pop().expect("one slot");
            if targets.is_empty() {
                continue;
            }
            let target = intern(targets, &mut ids, &mut sets);
            transitions.push(Transition::write(next, target, guard, writes));
        }
        if sets.len() > MAX_STATES {
            return Err(CompileError::TooLarge(format!("more than {MAX_STATES} subset states")));
        }
        next += 1;
    }
    let finals: Vec<StateId> = (0..sets.len()).filter(|i| sets[*i].iter().any(|q| a.is_final(*q))).collect();
    let mut out = Sra::new(sets.len(), 0, finals, a.registers().iter().cloned(), transitions)?;
    out.set_flags_unchecked(Flags { unrolled: true, deterministic: true, complete: false, window: a.flags().window });
    Ok(out)
}

/// Determinization of a windowed expression.
pub fn determinize_expr(e: &Srem) -> Result<Sra, CompileError> {
    let (u, _) = compile_windowed(e)?;
    determinize(&u)
}

/// Deterministic automaton that reports, after every event of an unbounded
/// stream, whether some suffix of length at most `w` is accepted by the
/// unrolled automaton `u` (window `w`).
///
/// Runs started at different positions are kept apart in `w + 1` slots; a
/// run started at position `m` lives in slot `m mod (w + 1)` and uses that
/// slot's private copy of the registers. A run never outlives its window, so
/// a slot is free again when it is reused. States are (phase, per-slot
/// subset) pairs; the result is complete and deterministic.
pub fn determinize_streaming(u: &Sra) -> Result<Sra, CompileError> {
    if !u.is_unrolled() {
        return Err(CompileError::NotUnrolled);
    }
    let w = u.window_bound().ok_or(CompileError::NotWindowed)?;
    let slots = w + 1;
    let mut taken: BTreeSet<Register> = BTreeSet::new();
    let mut slot_regs: Vec<BTreeMap<Register, Register>> = vec![BTreeMap::new(); slots];
    for (j, map) in slot_regs.iter_mut().enumerate() {
        for r in u.registers() {
            let mut name = format!("{}_s{j}", r.name());
            while taken.contains(&Register::new(&name)) {
                name.push('x');
            }
            let copy = Register::new(&name);
            taken.insert(copy.clone());
            map.insert(r.clone(), copy);
        }
    }

    type Key = (usize, Vec<BTreeSet<StateId>>);
    let mut ids: HashMap<Key, StateId> = HashMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let intern = |k: Key, ids: &mut HashMap<Key, StateId>, keys: &mut Vec<Key>| {
        *ids.entry(k.clone()).or_insert_with(|| {
            keys.push(k);
            keys.len() - 1
        })
    };
    let mut first = vec![BTreeSet::new(); slots];
    first[0].insert(u.start());
    intern((0, first), &mut ids, &mut keys);
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < keys.len() {
        let (phase, current) = keys[next].clone();
        let mut family = Family::default();
        let mut moves = Vec::new();
        for (j, set) in current.iter().enumerate() {
            for &q in set {
                for t in u.outgoing(q) {
                    let c = t.label.condition().expect("ε-free").map_registers(&mut |r| slot_regs[j][r].clone());
                    let writes = t.writes.iter().map(|r| slot_regs[j][r].clone()).collect();
                    moves.push(Move { cond: family.add(c), slot: j, target: t.target, writes });
                }
            }
        }
        let phase2 = (phase + 1) % slots;
        for (guard, mut targets, writes) in split(&family, &moves, slots)? {
            debug_assert!(targets[phase2].is_empty(), "runs end within their window");
            targets[phase2] = BTreeSet::from([u.start()]);
            let target = intern((phase2, targets), &mut ids, &mut keys);
            transitions.push(Transition::write(next, target, guard, writes));
        }
        if keys.len() > MAX_STATES {
            return Err(CompileError::TooLarge(format!("more than {MAX_STATES} streaming states")));
        }
        next += 1;
    }
    let finals: Vec<StateId> =
        (0..keys.len()).filter(|i| keys[*i].1.iter().flatten().any(|q| u.is_final(*q))).collect();
    let mut out = Sra::new(keys.len(), 0, finals, taken, transitions)?;
    out.set_flags_unchecked(Flags { unrolled: false, deterministic: true, complete: true, window: Some(w) });
    Ok(out)
}
