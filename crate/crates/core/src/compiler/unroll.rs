use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::algebra::Register;
use crate::automaton::{Flags, Sra, StateId, Transition};

use super::epsilon::eliminate_epsilon;
use super::single::to_single_register;

/// Provenance of the unrolled automaton's states and registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnrollMaps {
    pub copy_of_q: Vec<StateId>,
    pub copy_of_r: BTreeMap<Register, Register>,
}

/// Fewest condition moves from each state to a final state, ignoring
/// guards.
fn distance_to_final(a: &Sra) -> Vec<Option<usize>> {
    let mut incoming: Vec<Vec<StateId>> = vec![Vec::new(); a.num_states()];
    for t in a.transitions() {
        incoming[t.target].push(t.source);
    }
    let mut dist = vec![None; a.num_states()];
    let mut queue = VecDeque::new();
    for &f in a.finals() {
        dist[f] = Some(0);
        queue.push_back(f);
    }
    while let Some(q) = queue.pop_front() {
        let d = dist[q].expect("queued states have a distance");
        for &p in &incoming[q] {
            if dist[p].is_none() {
                dist[p] = Some(d + 1);
                queue.push_back(p);
            }
        }
    }
    dist
}

struct Node {
    orig: StateId,
    depth: usize,
    // Latest copy of each original register along the path from the root.
    last: Arc<BTreeMap<Register, Register>>,
}

/// Unfolds the automaton into a tree of paths of length at most `w`. Every
/// write mints a fresh register; reads are rebound to the latest copy on the
/// path. A read of a register with no copy yet on the path goes to a
/// placeholder register that is never written, so the guard cannot hold.
/// Branches that cannot reach a final state within the remaining budget are
/// not built.
pub fn unroll(a: &Sra, w: usize) -> (Sra, UnrollMaps) {
    let a = to_single_register(&eliminate_epsilon(a));
    let dist = distance_to_final(&a);
    let within = |q: StateId, budget: usize| dist[q].is_some_and(|d| d <= budget);

    let mut nodes = vec![Node { orig: a.start(), depth: 0, last: Arc::new(BTreeMap::new()) }];
    let mut transitions = Vec::new();
    let mut copy_of_r: BTreeMap<Register, Register> = BTreeMap::new();
    let mut counters: BTreeMap<Register, usize> = BTreeMap::new();
    let mut read_placeholders: BTreeSet<Register> = BTreeSet::new();
    let placeholder = |r: &Register| Register::new(&format!("{}_0", r.name()));

    if within(a.start(), w) {
        let mut i = 0;
        while i < nodes.len() {
            let (orig, depth, last) = (nodes[i].orig, nodes[i].depth, nodes[i].last.clone());
            if depth < w {
                for t in a.outgoing(orig) {
                    if !within(t.target, w - depth - 1) {
                        continue;
                    }
                    let cond = t.label.condition().expect("ε-free after elimination").map_registers(
                        &mut |r| match last.get(r) {
                            Some(copy) => copy.clone(),
                            None => {
                                let p = placeholder(r);
                                read_placeholders.insert(p.clone());
                                copy_of_r.insert(p.clone(), r.clone());
                                p
                            }
                        },
                    );
                    let mut child_last = last.clone();
                    let mut writes = BTreeSet::new();
                    for r in &t.writes {
                        let n = counters.entry(r.clone()).or_insert(0);
                        *n += 1;
                        let copy = Register::new(&format!("{}_{}", r.name(), n));
                        copy_of_r.insert(copy.clone(), r.clone());
                        Arc::make_mut(&mut child_last).insert(r.clone(), copy.clone());
                        writes.insert(copy);
                    }
                    let child = nodes.len();
                    nodes.push(Node { orig: t.target, depth: depth + 1, last: child_last });
                    transitions.push(Transition::write(i, child, cond, writes));
                }
            }
            i += 1;
        }
    }
    let finals: Vec<StateId> = (0..nodes.len()).filter(|n| a.is_final(nodes[*n].orig)).collect();
    let registers: BTreeSet<Register> = copy_of_r.keys().cloned().collect();
    let mut out = Sra::new(nodes.len(), 0, finals, registers, transitions).expect("tree construction is valid");
    out.set_flags_unchecked(Flags { unrolled: true, window: Some(w), ..Flags::default() });
    let maps = UnrollMaps { copy_of_q: nodes.iter().map(|n| n.orig).collect(), copy_of_r };
    debug_assert!(out.is_acyclic());
    (out, maps)
}
