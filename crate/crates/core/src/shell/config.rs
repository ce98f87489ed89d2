use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::automaton::DEFAULT_CONFIGURATION_CAP;
use crate::forecast::PstParams;

use super::ShellError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Jsonl,
    Text,
}

/// Settings shared by the pipelines. Any field may be given in a JSON
/// config file; command-line flags override it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pattern: Option<PathBuf>,
    pub window: Option<usize>,
    pub pst: PstParams,
    pub horizon: usize,
    pub classification_window: usize,
    pub threshold: f64,
    pub configuration_cap: usize,
    pub output: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            pattern: None,
            window: None,
            pst: PstParams::default(),
            horizon: 32,
            classification_window: 1,
            threshold: 0.5,
            configuration_cap: DEFAULT_CONFIGURATION_CAP,
            output: OutputFormat::Jsonl,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ShellError> {
        let c: RunConfig = serde_json::from_str(text).map_err(|e| ShellError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ShellError> {
        let bad = |m: String| Err(ShellError::Config(m));
        if self.window == Some(0) {
            return bad("window must be at least 1".into());
        }
        if self.horizon == 0 {
            return bad("horizon must be at least 1".into());
        }
        if self.classification_window == 0 || self.classification_window > self.horizon {
            return bad(format!("classification window must lie in 1..={}", self.horizon));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return bad(format!("threshold {} outside [0, 1]", self.threshold));
        }
        if self.configuration_cap == 0 {
            return bad("configuration cap must be positive".into());
        }
        self.pst.validate()?;
        Ok(())
    }
}
