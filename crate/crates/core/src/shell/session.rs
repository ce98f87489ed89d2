use std::sync::Arc;

use serde::Serialize;

use crate::algebra::Event;
use crate::automaton::{DeterministicRun, Sra, StreamEngine};
use crate::compiler::{compile_streaming, compile_windowed, determinize_streaming};
use crate::forecast::{
    forecast_classification, forecast_regression, learn_pst, symbolize, Classification, ForecastError, PstParams,
    Symbol, SymbolMap, WaitingTimeModel,
};
use crate::pattern::Srem;

use super::{LearnedArtifact, ShellError};

/// `e` with its window replaced by `window` when one is given.
pub fn windowed(e: &Srem, window: Option<usize>) -> Srem {
    match (window, e) {
        (None, _) => e.clone(),
        (Some(w), Srem::Window(body, _)) => Srem::window((**body).clone(), w),
        (Some(w), _) => Srem::window(e.clone(), w),
    }
}

/// Reports the 1-based indices at which some suffix of the stream so far
/// matches the pattern.
#[derive(Debug, Clone)]
pub struct Recognizer {
    engine: StreamEngine,
}

impl Recognizer {
    pub fn new(e: &Srem, cap: usize) -> Result<Self, ShellError> {
        let a = compile_streaming(e)?;
        Ok(Recognizer { engine: StreamEngine::new(Arc::new(a))?.with_cap(cap) })
    }

    pub fn automaton(&self) -> &Sra {
        self.engine.automaton()
    }

    pub fn step(&mut self, t: Event) -> Result<Option<usize>, ShellError> {
        let hit = self.engine.step(t)?;
        Ok(hit.then_some(self.engine.consumed()))
    }
}

pub fn recognize(e: &Srem, events: impl IntoIterator<Item = Event>, cap: usize) -> Result<Vec<usize>, ShellError> {
    let mut r = Recognizer::new(e, cap)?;
    let mut out = Vec::new();
    for t in events {
        out.extend(r.step(t)?);
    }
    Ok(out)
}

/// Determinizes the windowed pattern for streaming, symbolizes the training
/// stream through it and learns a tree over the symbols.
pub fn learn(e: &Srem, training: &[Event], params: &PstParams) -> Result<LearnedArtifact, ShellError> {
    params.validate()?;
    if e.window_bound().is_none() {
        return Err(crate::compiler::CompileError::NotWindowed.into());
    }
    let (u, _) = compile_windowed(e)?;
    let d = Arc::new(determinize_streaming(&u)?);
    let symbols = SymbolMap::from_sra(&d);
    let trace = symbolize(&d, &symbols, training)?;
    let pst = learn_pst(&trace, symbols.len().max(1), params)?;
    let automaton = Arc::try_unwrap(d).unwrap_or_else(|d| (*d).clone());
    Ok(LearnedArtifact { automaton, symbols, pst, params: *params })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastRecord {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<f64>>,
    pub regression: usize,
    pub classification: Classification,
}

/// Follows a live stream with a learned artifact and emits a forecast after
/// every event.
#[derive(Debug, Clone)]
pub struct ForecastSession {
    run: DeterministicRun,
    model: WaitingTimeModel,
    symbols: SymbolMap,
    history: Vec<Symbol>,
    horizon: usize,
    window: usize,
    threshold: f64,
    with_dist: bool,
    index: usize,
}

impl ForecastSession {
    pub fn new(
        artifact: &LearnedArtifact,
        horizon: usize,
        window: usize,
        threshold: f64,
        with_dist: bool,
    ) -> Result<Self, ShellError> {
        if horizon == 0 || window == 0 || window > horizon {
            return Err(
                ForecastError::InvalidArgument(format!("need 1 <= window ({window}) <= horizon ({horizon})")).into()
            );
        }
        if !(0.0..=1.0).contains(&threshold) {
            return Err(ForecastError::InvalidArgument(format!("threshold {threshold} outside [0, 1]")).into());
        }
        let model = WaitingTimeModel::new(&artifact.automaton, &artifact.symbols, &artifact.pst)?;
        Ok(ForecastSession {
            run: DeterministicRun::new(Arc::new(artifact.automaton.clone()))?,
            model,
            symbols: artifact.symbols.clone(),
            history: Vec::new(),
            horizon,
            window,
            threshold,
            with_dist,
            index: 0,
        })
    }

    pub fn state(&self) -> usize {
        self.run.state()
    }

    pub fn history(&self) -> &[Symbol] {
        &self.history
    }

    pub fn step(&mut self, t: Event) -> Result<ForecastRecord, ShellError> {
        self.index += 1;
        let t = Arc::new(t);
        let i = self.run.step(&t)?.ok_or(ForecastError::NoTransition { index: self.index })?;
        let label = self.run.automaton().transitions()[i].label.condition().expect("guarded move");
        let s = self.symbols.symbol(label).ok_or_else(|| ForecastError::UnknownLabel(label.to_string()))?;
        self.history.push(s);
        let keep = self.model.pst().max_order();
        if self.history.len() > keep {
            self.history.drain(..self.history.len() - keep);
        }
        let wd = self.model.distribution(self.run.state(), &self.history, self.horizon)?;
        Ok(ForecastRecord {
            index: self.index,
            regression: forecast_regression(&wd)?,
            classification: forecast_classification(&wd, self.window, self.threshold)?,
            dist: self.with_dist.then_some(wd.masses),
        })
    }
}
