use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::{PredicateLibrary, Register};
use crate::pattern::{is_register_name, parse_condition, parse_declarations};

use super::sra::{Flags, Label, Sra, Transition};
use super::AutomatonError;

pub const SRA_FORMAT: &str = "sra";
pub const SRA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub source: usize,
    pub target: usize,
    /// Condition in pattern syntax; absent for an ε-transition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub writes: Vec<String>,
}

/// Versioned, self-contained text form of an automaton: predicate
/// declarations, registers, states and transitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SraDocument {
    pub format: String,
    pub version: u32,
    pub predicates: Vec<String>,
    pub registers: Vec<String>,
    pub states: usize,
    pub start: usize,
    pub finals: Vec<usize>,
    pub transitions: Vec<TransitionDoc>,
    #[serde(default)]
    pub unrolled: bool,
    #[serde(default)]
    pub deterministic: bool,
    #[serde(default)]
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
}

impl Sra {
    pub fn to_document(&self) -> SraDocument {
        let flags = self.flags();
        SraDocument {
            format: SRA_FORMAT.to_string(),
            version: SRA_VERSION,
            predicates: self.predicates().values().map(|p| p.to_string()).collect(),
            registers: self.registers().iter().map(|r| r.name().to_string()).collect(),
            states: self.num_states(),
            start: self.start(),
            finals: self.finals().iter().copied().collect(),
            transitions: self
                .transitions()
                .iter()
                .map(|t| TransitionDoc {
                    source: t.source,
                    target: t.target,
                    guard: t.label.condition().map(|c| c.to_string()),
                    writes: t.writes.iter().map(|r| r.name().to_string()).collect(),
                })
                .collect(),
            unrolled: flags.unrolled,
            deterministic: flags.deterministic,
            complete: flags.complete,
            window: flags.window,
        }
    }

    pub fn from_document(doc: &SraDocument) -> Result<Sra, AutomatonError> {
        if doc.format != SRA_FORMAT {
            return Err(AutomatonError::Format(format!("expected format `{SRA_FORMAT}`, found `{}`", doc.format)));
        }
        if doc.version != SRA_VERSION {
            return Err(AutomatonError::Format(format!("unsupported version {}", doc.version)));
        }
        let library = library_from_declarations(&doc.predicates)?;
        let mut registers = BTreeSet::new();
        for name in &doc.registers {
            if !is_register_name(name) {
                return Err(AutomatonError::Format(format!("`{name}` is not a valid register name")));
            }
            registers.insert(Register::new(name));
        }
        let mut transitions = Vec::with_capacity(doc.transitions.len());
        for t in &doc.transitions {
            let label = match &t.guard {
                None => Label::Epsilon,
                Some(text) => {
                    Label::Cond(parse_condition(text, &library).map_err(|e| AutomatonError::Format(e.to_string()))?)
                }
            };
            let mut writes = BTreeSet::new();
            for w in &t.writes {
                if !is_register_name(w) {
                    return Err(AutomatonError::Format(format!("`{w}` is not a valid register name")));
                }
                writes.insert(Register::new(w));
            }
            transitions.push(Transition { source: t.source, target: t.target, label, writes });
        }
        if doc.states == 0 {
            return Err(AutomatonError::Format("an automaton needs at least one state".into()));
        }
        let sra = Sra::new(doc.states, doc.start, doc.finals.iter().copied(), registers, transitions)?;
        sra.with_flags(Flags {
            unrolled: doc.unrolled,
            deterministic: doc.deterministic,
            complete: doc.complete,
            window: doc.window,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Sra, AutomatonError> {
        let doc: SraDocument = serde_json::from_str(text).map_err(|e| AutomatonError::Format(e.to_string()))?;
        Sra::from_document(&doc)
    }
}

pub(crate) fn library_from_declarations(decls: &[String]) -> Result<PredicateLibrary, AutomatonError> {
    let mut library = PredicateLibrary::new();
    for d in decls {
        let one = parse_declarations(d).map_err(|e| AutomatonError::Format(e.to_string()))?;
        if one.len() != 1 {
            return Err(AutomatonError::Format(format!("expected one declaration in `{d}`")));
        }
        for p in one.iter() {
            library.merge(p.clone()).map_err(|e| AutomatonError::Format(e.to_string()))?;
        }
    }
    Ok(library)
}
