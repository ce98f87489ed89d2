use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Condition, Event};
use crate::automaton::{DeterministicRun, Sra, StateId};

use super::ForecastError;

pub type Symbol = u32;

/// Bijection between the distinct transition labels of a deterministic
/// automaton and the symbols `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolMap {
    labels: Vec<Condition>,
    index: BTreeMap<Condition, Symbol>,
}

impl SymbolMap {
    /// Symbols in order of first appearance over states, then transitions.
    pub fn from_sra(d: &Sra) -> Self {
        let mut labels = Vec::new();
        let mut index = BTreeMap::new();
        for q in d.states() {
            for t in d.outgoing(q) {
                if let Some(c) = t.label.condition() {
                    if !index.contains_key(c) {
                        index.insert(c.clone(), labels.len() as Symbol);
                        labels.push(c.clone());
                    }
                }
            }
        }
        SymbolMap { labels, index }
    }

    pub fn from_labels(labels: Vec<Condition>) -> Result<Self, ForecastError> {
        let mut index = BTreeMap::new();
        for (i, c) in labels.iter().enumerate() {
            if index.insert(c.clone(), i as Symbol).is_some() {
                return Err(ForecastError::InvalidArgument(format!("label `{c}` listed twice")));
            }
        }
        Ok(SymbolMap { labels, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Condition] {
        &self.labels
    }

    pub fn symbol(&self, label: &Condition) -> Option<Symbol> {
        self.index.get(label).copied()
    }

    pub fn label(&self, s: Symbol) -> Option<&Condition> {
        self.labels.get(s as usize)
    }
}

/// A deterministic automaton with its guards replaced by symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalAutomaton {
    pub start: StateId,
    pub finals: Vec<bool>,
    pub delta: Vec<BTreeMap<Symbol, StateId>>,
}

impl ClassicalAutomaton {
    pub fn relabel(d: &Sra, map: &SymbolMap) -> Result<Self, ForecastError> {
        let mut delta = vec![BTreeMap::new(); d.num_states()];
        for t in d.transitions() {
            let c = t.label.condition().ok_or(ForecastError::NotDeterministic)?;
            let s = map.symbol(c).ok_or_else(|| ForecastError::UnknownLabel(c.to_string()))?;
            delta[t.source].entry(s).or_insert(t.target);
        }
        Ok(ClassicalAutomaton { start: d.start(), finals: d.states().map(|q| d.is_final(q)).collect(), delta })
    }

    pub fn next(&self, q: StateId, s: Symbol) -> Option<StateId> {
        self.delta.get(q)?.get(&s).copied()
    }

    /// States visited on `symbols`, starting state included.
    pub fn trace(&self, symbols: &[Symbol]) -> Option<Vec<StateId>> {
        let mut q = self.start;
        let mut out = vec![q];
        for &s in symbols {
            q = self.next(q, s)?;
            out.push(q);
        }
        Some(out)
    }
}

/// The symbol of the transition taken on each event by the single run of `d`.
pub fn symbolize(d: &Arc<Sra>, map: &SymbolMap, events: &[Event]) -> Result<Vec<Symbol>, ForecastError> {
    let mut run = DeterministicRun::new(d.clone())?;
    let mut out = Vec::with_capacity(events.len());
    for (i, e) in events.iter().enumerate() {
        let e = Arc::new(e.clone());
        let t = run.step(&e)?.ok_or(ForecastError::NoTransition { index: i + 1 })?;
        let c = d.transitions()[t].label.condition().expect("deterministic run takes guarded moves");
        out.push(map.symbol(c).ok_or_else(|| ForecastError::UnknownLabel(c.to_string()))?);
    }
    Ok(out)
}
