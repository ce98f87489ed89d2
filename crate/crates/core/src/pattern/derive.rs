use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{Event, Valuation};

use super::ast::Srem;

/// The valuations `v'` such that the expression consumes exactly the given
/// string starting from valuation `v`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DerivationResult {
    pub valuations: BTreeSet<Valuation>,
}

impl DerivationResult {
    pub fn is_empty(&self) -> bool {
        self.valuations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.valuations.len()
    }
}

/// Brute-force derivation by structural recursion over all splits of the
/// string. Unbound register reads make a condition unsatisfied.
pub fn derive(e: &Srem, s: &[Event], v: &Valuation) -> DerivationResult {
    let s: Vec<Arc<Event>> = s.iter().cloned().map(Arc::new).collect();
    DerivationResult { valuations: derive_shared(e, &s, v) }
}

pub fn derive_shared(e: &Srem, s: &[Arc<Event>], v: &Valuation) -> BTreeSet<Valuation> {
    let mut out = BTreeSet::new();
    derive_into(e, s, v, &mut out);
    out
}

fn derive_into(e: &Srem, s: &[Arc<Event>], v: &Valuation, out: &mut BTreeSet<Valuation>) {
    match e {
        Srem::Empty => {}
        Srem::Epsilon => {
            if s.is_empty() {
                out.insert(v.clone());
            }
        }
        Srem::Cond(c) => {
            if s.len() == 1 && c.satisfied(&s[0], v) {
                out.insert(v.clone());
            }
        }
        Srem::CondWrite(c, r) => {
            if s.len() == 1 && c.satisfied(&s[0], v) {
                out.insert(v.with(r, s[0].clone()));
            }
        }
        Srem::Concat(a, b) => {
            for k in 0..=s.len() {
                for mid in derive_shared(a, &s[..k], v) {
                    derive_into(b, &s[k..], &mid, out);
                }
            }
        }
        Srem::Or(a, b) => {
            derive_into(a, s, v, out);
            derive_into(b, s, v, out);
        }
        Srem::Star(a) => {
            if s.is_empty() {
                out.insert(v.clone());
                return;
            }
            // Each iteration consumes at least one element.
            for k in 1..=s.len() {
                for mid in derive_shared(a, &s[..k], v) {
                    derive_into(e, &s[k..], &mid, out);
                }
            }
        }
        Srem::Window(a, w) => {
            if s.len() <= *w {
                derive_into(a, s, v, out);
            }
        }
    }
}

/// Membership: some derivation from the all-empty valuation exists.
pub fn accepts(e: &Srem, s: &[Event]) -> bool {
    !derive(e, s, &Valuation::empty()).is_empty()
}

/// Membership on shared events.
pub fn accepts_shared(e: &Srem, s: &[Arc<Event>]) -> bool {
    !derive_shared(e, s, &Valuation::empty()).is_empty()
}
