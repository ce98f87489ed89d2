use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::{Event, Register, Registers, Valuation};

use super::sra::{Label, Sra, StateId};
use super::AutomatonError;

pub const DEFAULT_CONFIGURATION_CAP: usize = 100_000;

/// `[index, state, valuation]`; `index` is the 1-based position of the next
/// element to consume.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub index: usize,
    pub state: StateId,
    pub valuation: Valuation,
}

impl Configuration {
    pub fn initial(a: &Sra) -> Self {
        Configuration { index: 1, state: a.start(), valuation: Valuation::empty() }
    }
}

/// One-transition successors of `c`. With `next` absent only ε-moves are
/// taken; with `next` present only condition moves are taken.
pub fn successors(a: &Sra, c: &Configuration, next: Option<&Event>) -> Vec<Configuration> {
    let next = next.map(|e| Arc::new(e.clone()));
    successors_shared(a, c, next.as_ref())
}

pub fn successors_shared(a: &Sra, c: &Configuration, next: Option<&Arc<Event>>) -> Vec<Configuration> {
    let mut out = Vec::new();
    for t in a.outgoing(c.state) {
        match (&t.label, next) {
            (Label::Epsilon, None) => {
                out.push(Configuration { index: c.index, state: t.target, valuation: c.valuation.clone() })
            }
            (Label::Cond(cond), Some(e)) if cond.satisfied(e, &c.valuation) => {
                let valuation =
                    if t.writes.is_empty() { c.valuation.clone() } else { c.valuation.with_all(&t.writes, e) };
                out.push(Configuration { index: c.index + 1, state: t.target, valuation });
            }
            _ => {}
        }
    }
    out
}

type Live = HashSet<(StateId, Valuation)>;

fn close_epsilon(a: &Sra, live: &mut Live) {
    let mut stack: Vec<(StateId, Valuation)> = live.iter().cloned().collect();
    while let Some((q, v)) = stack.pop() {
        for t in a.outgoing(q) {
            if t.label.is_epsilon() {
                let item = (t.target, v.clone());
                if !live.contains(&item) {
                    live.insert(item.clone());
                    stack.push(item);
                }
            }
        }
    }
}

fn advance(a: &Sra, live: &Live, e: &Arc<Event>, cap: usize) -> Result<Live, AutomatonError> {
    let mut next = Live::new();
    for (q, v) in live {
        for t in a.outgoing(*q) {
            if let Label::Cond(c) = &t.label {
                if c.satisfied(e, v) {
                    let v2 = if t.writes.is_empty() { v.clone() } else { v.with_all(&t.writes, e) };
                    next.insert((t.target, v2));
                    if next.len() > cap {
                        return Err(AutomatonError::ConfigurationCapExceeded(cap));
                    }
                }
            }
        }
    }
    Ok(next)
}

/// Whether some run from `[1, start, empty]` consumes the whole string and
/// ends in a final state.
pub fn run_accepts(a: &Sra, s: &[Event]) -> Result<bool, AutomatonError> {
    run_accepts_with_cap(a, s, DEFAULT_CONFIGURATION_CAP)
}

pub fn run_accepts_with_cap(a: &Sra, s: &[Event], cap: usize) -> Result<bool, AutomatonError> {
    let shared: Vec<Arc<Event>> = s.iter().cloned().map(Arc::new).collect();
    run_accepts_shared(a, &shared, cap)
}

pub fn run_accepts_shared(a: &Sra, s: &[Arc<Event>], cap: usize) -> Result<bool, AutomatonError> {
    let mut live = Live::from([(a.start(), Valuation::empty())]);
    close_epsilon(a, &mut live);
    for e in s {
        live = advance(a, &live, e, cap)?;
        close_epsilon(a, &mut live);
        if live.len() > cap {
            return Err(AutomatonError::ConfigurationCapExceeded(cap));
        }
        if live.is_empty() {
            return Ok(false);
        }
    }
    Ok(live.iter().any(|(q, _)| a.is_final(*q)))
}

/// Largest live-set size seen while reading the string (after ε-closure).
pub fn max_live_configurations(a: &Sra, s: &[Event]) -> Result<usize, AutomatonError> {
    let mut live = Live::from([(a.start(), Valuation::empty())]);
    close_epsilon(a, &mut live);
    let mut max = live.len();
    for e in s {
        live = advance(a, &live, &Arc::new(e.clone()), DEFAULT_CONFIGURATION_CAP)?;
        close_epsilon(a, &mut live);
        max = max.max(live.len());
    }
    Ok(max)
}

/// Recognition over an unbounded stream with a streaming (`TRUE* ; e`),
/// ε-free automaton.
#[derive(Debug, Clone)]
pub struct StreamEngine {
    automaton: Arc<Sra>,
    live: Live,
    consumed: usize,
    cap: usize,
    report_empty_match: bool,
}

impl StreamEngine {
    pub fn new(automaton: Arc<Sra>) -> Result<Self, AutomatonError> {
        if automaton.has_epsilon() {
            return Err(AutomatonError::HasEpsilon);
        }
        let live = Live::from([(automaton.start(), Valuation::empty())]);
        Ok(StreamEngine { automaton, live, consumed: 0, cap: DEFAULT_CONFIGURATION_CAP, report_empty_match: false })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_report_empty_match(mut self, on: bool) -> Self {
        self.report_empty_match = on;
        self
    }

    /// Match at index 0 (before any event), reported only when enabled.
    pub fn empty_match(&self) -> bool {
        self.report_empty_match && self.consumed == 0 && self.automaton.is_final(self.automaton.start())
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn live_configurations(&self) -> usize {
        self.live.len()
    }

    pub fn automaton(&self) -> &Sra {
        &self.automaton
    }

    /// Consumes one event; returns whether a match ends here.
    pub fn step(&mut self, t: Event) -> Result<bool, AutomatonError> {
        self.step_shared(&Arc::new(t))
    }

    pub fn step_shared(&mut self, t: &Arc<Event>) -> Result<bool, AutomatonError> {
        self.live = advance(&self.automaton, &self.live, t, self.cap)?;
        self.consumed += 1;
        Ok(self.live.iter().any(|(q, _)| self.automaton.is_final(*q)))
    }
}

/// Per-step and cumulative evaluation counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepCounters {
    pub guard_evaluations: usize,
    pub register_reads: usize,
}

struct RegisterCache {
    slots: Vec<(Register, Option<Arc<Event>>)>,
}

impl Registers for RegisterCache {
    fn read(&self, r: &Register) -> Option<&Event> {
        self.slots.iter().find(|(x, _)| x == r).and_then(|(_, e)| e.as_deref())
    }
}

/// The single run of a deterministic automaton. Each step reads every
/// register referenced at the current state once and evaluates each outgoing
/// guard once.
#[derive(Debug, Clone)]
pub struct DeterministicRun {
    automaton: Arc<Sra>,
    state: StateId,
    valuation: Valuation,
    state_registers: Arc<Vec<Vec<Register>>>,
    last: StepCounters,
    total: StepCounters,
}

impl DeterministicRun {
    pub fn new(automaton: Arc<Sra>) -> Result<Self, AutomatonError> {
        if automaton.has_epsilon() {
            return Err(AutomatonError::NotDeterministic);
        }
        let state_registers = automaton
            .states()
            .map(|q| {
                let mut regs = std::collections::BTreeSet::new();
                for t in automaton.outgoing(q) {
                    if let Some(c) = t.label.condition() {
                        c.collect_registers(&mut regs);
                    }
                }
                regs.into_iter().collect()
            })
            .collect();
        let state = automaton.start();
        Ok(DeterministicRun {
            automaton,
            state,
            valuation: Valuation::empty(),
            state_registers: Arc::new(state_registers),
            last: StepCounters::default(),
            total: StepCounters::default(),
        })
    }

    pub fn state(&self) -> StateId {
        self.state
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn automaton(&self) -> &Sra {
        &self.automaton
    }

    pub fn last_step(&self) -> StepCounters {
        self.last
    }

    pub fn totals(&self) -> StepCounters {
        self.total
    }

    pub fn is_accepting(&self) -> bool {
        self.automaton.is_final(self.state)
    }

    /// Consumes one event. Returns the index of the transition taken, or
    /// `None` when no guard fires (the run dies and stays where it was).
    pub fn step(&mut self, t: &Arc<Event>) -> Result<Option<usize>, AutomatonError> {
        let a = &self.automaton;
        let regs = &self.state_registers[self.state];
        let cache =
            RegisterCache { slots: regs.iter().map(|r| (r.clone(), self.valuation.get_shared(r).cloned())).collect() };
        let mut counters = StepCounters { guard_evaluations: 0, register_reads: regs.len() };
        let mut fired: Option<usize> = None;
        for &i in a.outgoing_indices(self.state) {
            let tr = &a.transitions()[i];
            let Label::Cond(c) = &tr.label else { continue };
            counters.guard_evaluations += 1;
            if c.satisfied(t, &cache) {
                if let Some(j) = fired {
                    let other = &a.transitions()[j];
                    if other.target != tr.target || other.writes != tr.writes {
                        return Err(AutomatonError::NotDeterministic);
                    }
                } else {
                    fired = Some(i);
                }
            }
        }
        self.last = counters;
        self.total.guard_evaluations += counters.guard_evaluations;
        self.total.register_reads += counters.register_reads;
        if let Some(i) = fired {
            let tr = &a.transitions()[i];
            if !tr.writes.is_empty() {
                self.valuation = self.valuation.with_all(&tr.writes, t);
            }
            self.state = tr.target;
        }
        Ok(fired)
    }

    pub fn reset(&mut self) {
        self.state = self.automaton.start();
        self.valuation = Valuation::empty();
    }
}
