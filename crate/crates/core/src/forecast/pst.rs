use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{ForecastError, Symbol};

pub const PST_FORMAT: &str = "pst";
pub const PST_VERSION: u32 = 1;

const SUM_TOLERANCE: f64 = 1e-9;
const MAX_ORDER: usize = 64;

/// Learning parameters. `max_order` bounds context length, `p_min` is the
/// minimum empirical frequency of a candidate context, `r` the ratio a
/// candidate's prediction must differ from its parent's by, `gamma` the
/// smoothing weight and `alpha` the slack on the minimum prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PstParams {
    pub max_order: usize,
    pub p_min: f64,
    pub r: f64,
    pub gamma: f64,
    pub alpha: f64,
}

impl Default for PstParams {
    fn default() -> Self {
        PstParams { max_order: 5, p_min: 0.001, r: 1.05, gamma: 0.01, alpha: 0.0 }
    }
}

impl PstParams {
    pub fn validate(&self) -> Result<(), ForecastError> {
        let bad = |m: String| Err(ForecastError::InvalidArgument(m));
        if self.max_order > MAX_ORDER {
            return bad(format!("max order {} exceeds {MAX_ORDER}", self.max_order));
        }
        if !(0.0..=1.0).contains(&self.p_min) {
            return bad(format!("p_min {} outside [0, 1]", self.p_min));
        }
        if !self.r.is_finite() || self.r < 1.0 {
            return bad(format!("ratio {} must be a finite number >= 1", self.r));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return bad(format!("gamma {} outside [0, 1)", self.gamma));
        }
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return bad(format!("alpha {} must be finite and >= 0", self.alpha));
        }
        Ok(())
    }
}

/// Prediction suffix tree. Contexts are stored oldest symbol first; the
/// root is the empty context.
#[derive(Debug, Clone, PartialEq)]
pub struct Pst {
    alphabet_size: usize,
    max_order: usize,
    nodes: BTreeMap<Vec<Symbol>, Vec<f64>>,
}

impl Pst {
    /// Tree from explicit node distributions, checked for suffix closure and
    /// normalization.
    pub fn from_nodes(
        alphabet_size: usize,
        max_order: usize,
        nodes: BTreeMap<Vec<Symbol>, Vec<f64>>,
    ) -> Result<Self, ForecastError> {
        let bad = |m: String| Err(ForecastError::InvalidPst(m));
        if alphabet_size == 0 {
            return bad("empty alphabet".into());
        }
        if !nodes.contains_key(&Vec::new()) {
            return bad("missing root".into());
        }
        for (ctx, dist) in &nodes {
            if ctx.len() > max_order {
                return bad(format!("context {ctx:?} longer than order {max_order}"));
            }
            if let Some(s) = ctx.iter().find(|s| **s as usize >= alphabet_size) {
                return bad(format!("symbol {s} outside alphabet of size {alphabet_size}"));
            }
            if !ctx.is_empty() && !nodes.contains_key(&ctx[1..]) {
                return bad(format!("context {ctx:?} has no parent"));
            }
            if dist.len() != alphabet_size {
                return bad(format!("context {ctx:?} has {} probabilities", dist.len()));
            }
            if dist.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                return bad(format!("context {ctx:?} has a negative or non-finite probability"));
            }
            let sum: f64 = dist.iter().sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return bad(format!("context {ctx:?} sums to {sum}"));
            }
        }
        Ok(Pst { alphabet_size, max_order, nodes })
    }

    pub fn root_only(alphabet_size: usize, dist: Vec<f64>) -> Result<Self, ForecastError> {
        Pst::from_nodes(alphabet_size, 0, BTreeMap::from([(Vec::new(), dist)]))
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn nodes(&self) -> &BTreeMap<Vec<Symbol>, Vec<f64>> {
        &self.nodes
    }

    pub fn contains(&self, ctx: &[Symbol]) -> bool {
        self.nodes.contains_key(ctx)
    }

    /// Longest suffix of `recent` that is a node.
    pub fn deepest_context<'a>(&self, recent: &'a [Symbol]) -> &'a [Symbol] {
        let mut best = &recent[recent.len()..];
        for l in 1..=self.max_order.min(recent.len()) {
            let ctx = &recent[recent.len() - l..];
            if self.nodes.contains_key(ctx) {
                best = ctx;
            } else {
                break;
            }
        }
        best
    }

    /// Next-symbol distribution at the deepest context matching `recent`.
    pub fn predict(&self, recent: &[Symbol]) -> &[f64] {
        &self.nodes[self.deepest_context(recent)]
    }

    pub fn to_document(&self) -> PstDocument {
        PstDocument {
            format: PST_FORMAT.to_string(),
            version: PST_VERSION,
            alphabet_size: self.alphabet_size,
            max_order: self.max_order,
            nodes: self.nodes.iter().map(|(c, d)| PstNode { context: c.clone(), probabilities: d.clone() }).collect(),
        }
    }

    pub fn from_document(doc: &PstDocument) -> Result<Self, ForecastError> {
        if doc.format != PST_FORMAT || doc.version != PST_VERSION {
            return Err(ForecastError::Format(format!(
                "expected format {PST_FORMAT} version {PST_VERSION}, found {} version {}",
                doc.format, doc.version
            )));
        }
        let mut nodes = BTreeMap::new();
        for n in &doc.nodes {
            if nodes.insert(n.context.clone(), n.probabilities.clone()).is_some() {
                return Err(ForecastError::InvalidPst(format!("context {:?} listed twice", n.context)));
            }
        }
        Pst::from_nodes(doc.alphabet_size, doc.max_order, nodes)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ForecastError> {
        let doc: PstDocument = serde_json::from_str(text).map_err(|e| ForecastError::Format(e.to_string()))?;
        Pst::from_document(&doc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PstNode {
    pub context: Vec<Symbol>,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PstDocument {
    pub format: String,
    pub version: u32,
    pub alphabet_size: usize,
    pub max_order: usize,
    pub nodes: Vec<PstNode>,
}

/// Occurrence counts of every context up to a given length, each with the
/// counts of the symbol that followed it.
struct Counts {
    alphabet_size: usize,
    next: HashMap<Vec<Symbol>, Vec<u64>>,
    /// Positions at which a context of each length can occur.
    slots: Vec<u64>,
}

impl Counts {
    fn new(symbols: &[Symbol], alphabet_size: usize, m: usize) -> Self {
        let mut next: HashMap<Vec<Symbol>, Vec<u64>> = HashMap::new();
        for i in 0..symbols.len() {
            for l in 0..=m.min(i) {
                let row = next.entry(symbols[i - l..i].to_vec()).or_insert_with(|| vec![0; alphabet_size]);
                row[symbols[i] as usize] += 1;
            }
        }
        let slots = (0..=m).map(|l| symbols.len().saturating_sub(l) as u64).collect();
        Counts { alphabet_size, next, slots }
    }

    fn total(&self, ctx: &[Symbol]) -> u64 {
        self.next.get(ctx).map_or(0, |row| row.iter().sum())
    }

    fn frequency(&self, ctx: &[Symbol]) -> f64 {
        match self.slots[ctx.len()] {
            0 => 0.0,
            n => self.total(ctx) as f64 / n as f64,
        }
    }

    fn conditional(&self, ctx: &[Symbol]) -> Vec<f64> {
        let n = self.total(ctx);
        match self.next.get(ctx) {
            Some(row) if n > 0 => row.iter().map(|c| *c as f64 / n as f64).collect(),
            _ => vec![1.0 / self.alphabet_size as f64; self.alphabet_size],
        }
    }
}

/// Learns a prediction suffix tree from a symbol string.
///
/// Candidates start as the single symbols that occur often enough. A
/// candidate becomes a node, together with its suffixes, when some symbol
/// is predicted with enough probability and that probability differs from
/// the candidate's parent by the ratio `r`. Frequent candidates shorter
/// than `max_order` are extended one symbol into the past. Every node's
/// distribution is then mixed with the uniform one by `gamma`.
pub fn learn_pst(symbols: &[Symbol], alphabet_size: usize, params: &PstParams) -> Result<Pst, ForecastError> {
    params.validate()?;
    let m = params.max_order;
    if symbols.len() < m + 1 {
        return Err(ForecastError::InsufficientData { needed: m + 1, found: symbols.len() });
    }
    if alphabet_size == 0 {
        return Err(ForecastError::InvalidArgument("alphabet size must be positive".into()));
    }
    if let Some(s) = symbols.iter().find(|s| **s as usize >= alphabet_size) {
        return Err(ForecastError::InvalidArgument(format!("symbol {s} outside alphabet of size {alphabet_size}")));
    }
    let counts = Counts::new(symbols, alphabet_size, m);
    let mut kept: BTreeMap<Vec<Symbol>, ()> = BTreeMap::from([(Vec::new(), ())]);
    let mut candidates: Vec<Vec<Symbol>> = if m == 0 {
        Vec::new()
    } else {
        (0..alphabet_size as Symbol)
            .map(|s| vec![s])
            .filter(|c| counts.frequency(c) >= params.p_min && counts.total(c) > 0)
            .collect()
    };
    let floor = (1.0 + params.alpha) * params.gamma;
    while let Some(ctx) = candidates.pop() {
        let here = counts.conditional(&ctx);
        let parent = counts.conditional(&ctx[1..]);
        let differs = here.iter().zip(&parent).any(|(p, q)| {
            if *p < floor || *p == 0.0 {
                return false;
            }
            if *q == 0.0 {
                return true;
            }
            let ratio = p / q;
            ratio >= params.r || ratio <= 1.0 / params.r
        });
        if differs {
            for k in 0..ctx.len() {
                kept.insert(ctx[k..].to_vec(), ());
            }
        }
        if ctx.len() < m {
            for s in 0..alphabet_size as Symbol {
                let mut longer = Vec::with_capacity(ctx.len() + 1);
                longer.push(s);
                longer.extend_from_slice(&ctx);
                if counts.total(&longer) > 0 && counts.frequency(&longer) >= params.p_min {
                    candidates.push(longer);
                }
            }
        }
    }
    let uniform = params.gamma / alphabet_size as f64;
    let nodes = kept
        .into_keys()
        .map(|ctx| {
            let dist = counts.conditional(&ctx).into_iter().map(|p| (1.0 - params.gamma) * p + uniform).collect();
            (ctx, dist)
        })
        .collect();
    Pst::from_nodes(alphabet_size, m, nodes)
}

/// Mean negative base-2 log-probability the tree assigns to each symbol
/// given the symbols before it.
pub fn log_loss(t: &Pst, symbols: &[Symbol]) -> Result<f64, ForecastError> {
    if symbols.is_empty() {
        return Err(ForecastError::InsufficientData { needed: 1, found: 0 });
    }
    let mut sum = 0.0;
    for i in 0..symbols.len() {
        let dist = t.predict(&symbols[..i]);
        let p = dist
            .get(symbols[i] as usize)
            .copied()
            .ok_or_else(|| ForecastError::InvalidArgument(format!("symbol {} outside alphabet", symbols[i])))?;
        sum -= p.log2();
    }
    Ok(sum / symbols.len() as f64)
}
