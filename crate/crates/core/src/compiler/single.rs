use std::collections::{BTreeSet, HashMap};

use crate::algebra::Register;
use crate::automaton::{Flags, Label, Sra, StateId, Transition};

/// Ordered blocks of original registers; block `j` is stored in the `j`-th
/// output register and holds the originals whose contents it represents.
pub type RegisterPartition = Vec<BTreeSet<Register>>;

/// Index of the block holding `r`.
pub fn block_of(p: &RegisterPartition, r: &Register) -> Option<usize> {
    p.iter().position(|b| b.contains(r))
}

/// The block a write of `writes` goes to (the first one inside `writes`;
/// an empty block always qualifies) and the partition after the write: that
/// block absorbs `writes`, every other block loses them.
pub fn partition_after_write(p: &RegisterPartition, writes: &BTreeSet<Register>) -> Option<(usize, RegisterPartition)> {
    let j = p.iter().position(|b| b.is_subset(writes))?;
    let mut next = p.clone();
    for (i, block) in next.iter_mut().enumerate() {
        if i == j {
            block.extend(writes.iter().cloned());
        } else {
            block.retain(|r| !writes.contains(r));
        }
    }
    Some((j, next))
}

/// Rewrites a multi-register automaton so that every transition writes at
/// most one register. States become (original state, partition) pairs and
/// only reachable pairs are built. Single-register input is returned as is.
pub fn to_single_register(a: &Sra) -> Sra {
    if a.is_single_register() {
        return a.clone();
    }
    let regs: Vec<Register> = a.registers().iter().cloned().collect();
    let k = regs.len();
    let mut start_partition: RegisterPartition = vec![BTreeSet::new(); k];
    start_partition[0] = a.registers().clone();

    let mut ids: HashMap<(StateId, RegisterPartition), StateId> = HashMap::new();
    let mut states: Vec<(StateId, RegisterPartition)> = Vec::new();
    let mut intern = |key: (StateId, RegisterPartition), states: &mut Vec<(StateId, RegisterPartition)>| {
        if let Some(id) = ids.get(&key) {
            return *id;
        }
        let id = states.len();
        ids.insert(key.clone(), id);
        states.push(key);
        id
    };
    intern((a.start(), start_partition), &mut states);
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (q, p) = states[next].clone();
        let rename =
            |r: &Register| -> Register { regs[block_of(&p, r).expect("partition covers every register")].clone() };
        for t in a.outgoing(q) {
            match &t.label {
                Label::Epsilon => {
                    let target = intern((t.target, p.clone()), &mut states);
                    transitions.push(Transition::epsilon(next, target));
                }
                Label::Cond(c) => {
                    let cond = c.map_registers(&mut |r| rename(r));
                    if t.writes.is_empty() {
                        let target = intern((t.target, p.clone()), &mut states);
                        transitions.push(Transition::cond(next, target, cond));
                    } else {
                        let (j, p2) =
                            partition_after_write(&p, &t.writes).expect("some block is empty or inside the write set");
                        let target = intern((t.target, p2), &mut states);
                        transitions.push(Transition::write(next, target, cond, [regs[j].clone()]));
                    }
                }
            }
        }
        next += 1;
    }
    let finals: Vec<StateId> = states.iter().enumerate().filter(|(_, (q, _))| a.is_final(*q)).map(|(i, _)| i).collect();
    let mut out = Sra::new(states.len(), 0, finals, regs, transitions)
        .expect("partition construction keeps endpoints and registers valid");
    out.set_flags_unchecked(Flags { window: a.flags().window, ..Flags::default() });
    out
}
