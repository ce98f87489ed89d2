use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Condition, Predicate, Register};

use super::AutomatonError;

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Epsilon,
    Cond(Condition),
}

impl Label {
    pub fn condition(&self) -> Option<&Condition> {
        match self {
            Label::Epsilon => None,
            Label::Cond(c) => Some(c),
        }
    }

    pub fn is_epsilon(&self) -> bool {
        matches!(self, Label::Epsilon)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Epsilon => f.write_str("ε"),
            Label::Cond(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: StateId,
    pub target: StateId,
    pub label: Label,
    pub writes: BTreeSet<Register>,
}

impl Transition {
    pub fn epsilon(source: StateId, target: StateId) -> Self {
        Transition { source, target, label: Label::Epsilon, writes: BTreeSet::new() }
    }

    pub fn cond(source: StateId, target: StateId, c: Condition) -> Self {
        Transition { source, target, label: Label::Cond(c), writes: BTreeSet::new() }
    }

    pub fn write(source: StateId, target: StateId, c: Condition, writes: impl IntoIterator<Item = Register>) -> Self {
        Transition { source, target, label: Label::Cond(c), writes: writes.into_iter().collect() }
    }
}

/// Properties a construction guarantees about its output. They are claims
/// carried along with the automaton; `unrolled` is checked on construction,
/// determinism can be verified with [`super::is_deterministic`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Flags {
    pub unrolled: bool,
    pub deterministic: bool,
    pub complete: bool,
    pub window: Option<usize>,
}

/// A symbolic register automaton. States are `0..num_states`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sra {
    num_states: usize,
    start: StateId,
    finals: BTreeSet<StateId>,
    registers: BTreeSet<Register>,
    transitions: Vec<Transition>,
    flags: Flags,
    outgoing: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Stats {
    pub states: usize,
    pub transitions: usize,
    pub registers: usize,
    pub finals: usize,
}

impl Sra {
    pub fn new(
        num_states: usize,
        start: StateId,
        finals: impl IntoIterator<Item = StateId>,
        registers: impl IntoIterator<Item = Register>,
        transitions: Vec<Transition>,
    ) -> Result<Self, AutomatonError> {
        let finals: BTreeSet<StateId> = finals.into_iter().collect();
        let registers: BTreeSet<Register> = registers.into_iter().collect();
        if start >= num_states {
            return Err(AutomatonError::Invalid(format!("start state {start} out of range")));
        }
        if let Some(f) = finals.iter().find(|f| **f >= num_states) {
            return Err(AutomatonError::Invalid(format!("final state {f} out of range")));
        }
        let mut outgoing = vec![Vec::new(); num_states];
        for (i, t) in transitions.iter().enumerate() {
            if t.source >= num_states || t.target >= num_states {
                return Err(AutomatonError::Invalid(format!(
                    "transition {}->{} has an endpoint out of range",
                    t.source, t.target
                )));
            }
            if t.label.is_epsilon() && !t.writes.is_empty() {
                return Err(AutomatonError::Invalid("an ε-transition cannot write registers".into()));
            }
            let mut used = t.writes.clone();
            if let Some(c) = t.label.condition() {
                c.collect_registers(&mut used);
            }
            if let Some(r) = used.iter().find(|r| !registers.contains(*r)) {
                return Err(AutomatonError::Invalid(format!("register {r} is not declared")));
            }
            outgoing[t.source].push(i);
        }
        Ok(Sra { num_states, start, finals, registers, transitions, flags: Flags::default(), outgoing })
    }

    /// Sets the property flags; an `unrolled` claim is checked for
    /// acyclicity.
    pub fn with_flags(mut self, flags: Flags) -> Result<Self, AutomatonError> {
        if flags.unrolled && !self.is_acyclic() {
            return Err(AutomatonError::Invalid("automaton marked unrolled has a cycle".into()));
        }
        if flags.deterministic && self.has_epsilon() {
            return Err(AutomatonError::Invalid("automaton marked deterministic has ε-transitions".into()));
        }
        self.flags = flags;
        Ok(self)
    }

    pub(crate) fn set_flags_unchecked(&mut self, flags: Flags) {
        self.flags = flags;
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.num_states
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(&q)
    }

    pub fn registers(&self) -> &BTreeSet<Register> {
        &self.registers
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, q: StateId) -> impl Iterator<Item = &Transition> {
        self.outgoing[q].iter().map(move |i| &self.transitions[*i])
    }

    pub fn outgoing_indices(&self, q: StateId) -> &[usize] {
        &self.outgoing[q]
    }

    pub fn has_epsilon(&self) -> bool {
        self.transitions.iter().any(|t| t.label.is_epsilon())
    }

    /// Every transition writes at most one register.
    pub fn is_single_register(&self) -> bool {
        self.transitions.iter().all(|t| t.writes.len() <= 1)
    }

    pub fn is_unrolled(&self) -> bool {
        self.flags.unrolled
    }

    pub fn window_bound(&self) -> Option<usize> {
        self.flags.window
    }

    pub fn stats(&self) -> Stats {
        Stats {
            states: self.num_states,
            transitions: self.transitions.len(),
            registers: self.registers.len(),
            finals: self.finals.len(),
        }
    }

    /// Whether the transition graph has no cycle (self-loops included).
    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    pub fn topological_order(&self) -> Option<Vec<StateId>> {
        let mut indegree = vec![0usize; self.num_states];
        for t in &self.transitions {
            indegree[t.target] += 1;
        }
        let mut ready: Vec<StateId> = (0..self.num_states).filter(|q| indegree[*q] == 0).collect();
        let mut order = Vec::with_capacity(self.num_states);
        while let Some(q) = ready.pop() {
            order.push(q);
            for t in self.outgoing(q) {
                indegree[t.target] -= 1;
                if indegree[t.target] == 0 {
                    ready.push(t.target);
                }
            }
        }
        (order.len() == self.num_states).then_some(order)
    }

    /// Predicates referenced by any transition label.
    pub fn predicates(&self) -> BTreeMap<String, Arc<Predicate>> {
        let mut out = BTreeMap::new();
        for t in &self.transitions {
            if let Some(c) = t.label.condition() {
                c.collect_predicates(&mut out);
            }
        }
        out
    }

    /// States reachable from the start.
    pub fn reachable(&self) -> BTreeSet<StateId> {
        let mut seen = BTreeSet::from([self.start]);
        let mut stack = vec![self.start];
        while let Some(q) = stack.pop() {
            for t in self.outgoing(q) {
                if seen.insert(t.target) {
                    stack.push(t.target);
                }
            }
        }
        seen
    }
}

/// Incremental construction helper.
#[derive(Debug, Default, Clone)]
pub struct SraBuilder {
    num_states: usize,
    finals: BTreeSet<StateId>,
    registers: BTreeSet<Register>,
    transitions: Vec<Transition>,
}

impl SraBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self) -> StateId {
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn set_final(&mut self, q: StateId) {
        self.finals.insert(q);
    }

    pub fn add_register(&mut self, r: Register) {
        self.registers.insert(r);
    }

    pub fn add_transition(&mut self, t: Transition) {
        self.transitions.push(t);
    }

    pub fn epsilon(&mut self, source: StateId, target: StateId) {
        self.transitions.push(Transition::epsilon(source, target));
    }

    pub fn build(self, start: StateId) -> Result<Sra, AutomatonError> {
        Sra::new(self.num_states, start, self.finals, self.registers, self.transitions)
    }
}
