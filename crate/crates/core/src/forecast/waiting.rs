use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::automaton::{Sra, StateId};

use super::pst::Pst;
use super::symbols::{ClassicalAutomaton, Symbol, SymbolMap};
use super::ForecastError;

/// Probability that the automaton first reaches a final state exactly `n`
/// steps after `origin`, for `n = 1..=masses.len()`; `residual` is the
/// probability of not having done so within the horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaitingTimeDistribution {
    pub state: StateId,
    pub context: Vec<Symbol>,
    pub masses: Vec<f64>,
    pub residual: f64,
}

impl WaitingTimeDistribution {
    pub fn horizon(&self) -> usize {
        self.masses.len()
    }

    /// `P(W = n)`, 1-based.
    pub fn mass(&self, n: usize) -> f64 {
        n.checked_sub(1).and_then(|i| self.masses.get(i)).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Forecast {
    Regression { step: usize },
    Classification { window: usize, threshold: f64, outcome: Classification },
}

/// Most probable step; the earliest one on ties.
pub fn forecast_regression(wd: &WaitingTimeDistribution) -> Result<usize, ForecastError> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in wd.masses.iter().enumerate() {
        if best.is_none_or(|(_, b)| *p > b) {
            best = Some((i + 1, *p));
        }
    }
    best.map(|(n, _)| n).ok_or_else(|| ForecastError::InvalidArgument("empty distribution".into()))
}

/// Positive when the first `w` masses sum to at least `threshold`.
pub fn forecast_classification(
    wd: &WaitingTimeDistribution,
    w: usize,
    threshold: f64,
) -> Result<Classification, ForecastError> {
    if w == 0 || w > wd.horizon() {
        return Err(ForecastError::InvalidArgument(format!("window {w} outside 1..={}", wd.horizon())));
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(ForecastError::InvalidArgument(format!("threshold {threshold} outside [0, 1]")));
    }
    let sum: f64 = wd.masses[..w].iter().sum();
    Ok(if sum >= threshold { Classification::Positive } else { Classification::Negative })
}

/// A relabeled automaton paired with a tree, ready to expand waiting-time
/// distributions from any (state, history) pair.
///
/// The expansion tracks, instead of the whole history, its longest suffix
/// that is a prefix of some node context. That suffix determines both the
/// current prediction and the next one after any symbol, so the expansion
/// is exact while the number of distinct keys stays bounded by the tree.
#[derive(Debug, Clone)]
pub struct WaitingTimeModel {
    automaton: ClassicalAutomaton,
    pst: Pst,
    prefixes: BTreeSet<Vec<Symbol>>,
}

impl WaitingTimeModel {
    pub fn new(d: &Sra, map: &SymbolMap, pst: &Pst) -> Result<Self, ForecastError> {
        let flags = d.flags();
        if !flags.deterministic {
            return Err(ForecastError::NotDeterministic);
        }
        if !flags.complete {
            return Err(ForecastError::NotComplete);
        }
        if map.len() > pst.alphabet_size() {
            return Err(ForecastError::InvalidArgument(format!(
                "{} symbols but the tree predicts {}",
                map.len(),
                pst.alphabet_size()
            )));
        }
        let automaton = ClassicalAutomaton::relabel(d, map)?;
        let mut prefixes = BTreeSet::new();
        for ctx in pst.nodes().keys() {
            for l in 0..=ctx.len() {
                prefixes.insert(ctx[..l].to_vec());
            }
        }
        Ok(WaitingTimeModel { automaton, pst: pst.clone(), prefixes })
    }

    pub fn automaton(&self) -> &ClassicalAutomaton {
        &self.automaton
    }

    pub fn pst(&self) -> &Pst {
        &self.pst
    }

    fn key(&self, history: &[Symbol]) -> Vec<Symbol> {
        let top = history.len().min(self.pst.max_order());
        (0..=top)
            .rev()
            .map(|l| &history[history.len() - l..])
            .find(|s| self.prefixes.contains(*s))
            .unwrap_or(&[])
            .to_vec()
    }

    /// Distribution over the symbols that have a move at `q`, proportional
    /// to the tree's prediction; uniform over them if the tree gives them no
    /// mass at all.
    fn moves(&self, q: StateId, key: &[Symbol]) -> Vec<(Symbol, StateId, f64)> {
        let dist = self.pst.predict(key);
        let out = &self.automaton.delta[q];
        let z: f64 = out.keys().map(|s| dist[*s as usize]).sum();
        out.iter()
            .map(|(s, t)| {
                let p = if z > 0.0 { dist[*s as usize] / z } else { 1.0 / out.len() as f64 };
                (*s, *t, p)
            })
            .collect()
    }

    pub fn distribution(
        &self,
        state: StateId,
        history: &[Symbol],
        horizon: usize,
    ) -> Result<WaitingTimeDistribution, ForecastError> {
        if state >= self.automaton.delta.len() {
            return Err(ForecastError::InvalidArgument(format!("no state {state}")));
        }
        if horizon == 0 {
            return Err(ForecastError::InvalidArgument("horizon must be at least 1".into()));
        }
        let mut live: BTreeMap<(StateId, Vec<Symbol>), f64> = BTreeMap::from([((state, self.key(history)), 1.0)]);
        let mut masses = Vec::with_capacity(horizon);
        for _ in 0..horizon {
            let mut hit = 0.0;
            let mut next: BTreeMap<(StateId, Vec<Symbol>), f64> = BTreeMap::new();
            for ((q, key), p) in &live {
                for (s, t, pi) in self.moves(*q, key) {
                    let mass = p * pi;
                    if self.automaton.finals[t] {
                        hit += mass;
                    } else {
                        let mut longer = key.clone();
                        longer.push(s);
                        *next.entry((t, self.key(&longer))).or_insert(0.0) += mass;
                    }
                }
            }
            masses.push(hit);
            live = next;
        }
        let residual = live.values().sum();
        Ok(WaitingTimeDistribution { state, context: history.to_vec(), masses, residual })
    }
}

/// Waiting-time distribution of `d` from `state` with symbol history
/// `context`, under the predictions of `pst`.
pub fn waiting_time(
    d: &Sra,
    map: &SymbolMap,
    pst: &Pst,
    state: StateId,
    context: &[Symbol],
    horizon: usize,
) -> Result<WaitingTimeDistribution, ForecastError> {
    WaitingTimeModel::new(d, map, pst)?.distribution(state, context, horizon)
}
