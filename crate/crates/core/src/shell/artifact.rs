use serde::{Deserialize, Serialize};

use crate::automaton::{library_from_declarations, Sra, SraDocument};
use crate::forecast::{Pst, PstDocument, PstParams, SymbolMap};
use crate::pattern::parse_condition;

use super::ShellError;

pub const ARTIFACT_FORMAT: &str = "sra-forecaster";
pub const ARTIFACT_VERSION: u32 = 1;

/// What `learn` produces and `forecast` consumes: a complete deterministic
/// automaton, the symbol of each of its labels, and a tree over those
/// symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnedArtifact {
    pub automaton: Sra,
    pub symbols: SymbolMap,
    pub pst: Pst,
    pub params: PstParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArtifactDocument {
    pub format: String,
    pub version: u32,
    pub automaton: SraDocument,
    /// Label of symbol `i` at position `i`, in pattern syntax.
    pub symbols: Vec<String>,
    pub pst: PstDocument,
    pub params: PstParams,
}

impl LearnedArtifact {
    pub fn to_document(&self) -> ArtifactDocument {
        ArtifactDocument {
            format: ARTIFACT_FORMAT.into(),
            version: ARTIFACT_VERSION,
            automaton: self.automaton.to_document(),
            symbols: self.symbols.labels().iter().map(|c| c.to_string()).collect(),
            pst: self.pst.to_document(),
            params: self.params,
        }
    }

    pub fn from_document(doc: &ArtifactDocument) -> Result<Self, ShellError> {
        if doc.format != ARTIFACT_FORMAT || doc.version != ARTIFACT_VERSION {
            return Err(ShellError::Format(format!(
                "expected format {ARTIFACT_FORMAT} version {ARTIFACT_VERSION}, found {} version {}",
                doc.format, doc.version
            )));
        }
        let automaton = Sra::from_document(&doc.automaton)?;
        let library = library_from_declarations(&doc.automaton.predicates)?;
        let labels = doc.symbols.iter().map(|s| parse_condition(s, &library)).collect::<Result<Vec<_>, _>>()?;
        let symbols = SymbolMap::from_labels(labels)?;
        let pst = Pst::from_document(&doc.pst)?;
        if symbols.len() > pst.alphabet_size() {
            return Err(ShellError::Format(format!(
                "{} symbols but the tree predicts {}",
                symbols.len(),
                pst.alphabet_size()
            )));
        }
        doc.params.validate()?;
        Ok(LearnedArtifact { automaton, symbols, pst, params: doc.params })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ShellError> {
        let doc: ArtifactDocument = serde_json::from_str(text).map_err(|e| ShellError::Format(e.to_string()))?;
        LearnedArtifact::from_document(&doc)
    }
}
