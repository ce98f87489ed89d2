use crate::algebra::{syntactically_exclusive, Event, Valuation};

use super::sra::{Label, Sra};
use super::AutomatonError;

/// Events and valuations over which guards are compared when syntax alone
/// cannot show exclusivity.
#[derive(Debug, Clone, Default)]
pub struct DeterminismSample {
    pub events: Vec<Event>,
    pub valuations: Vec<Valuation>,
}

/// No ε-transitions, and at every state no two outgoing transitions with
/// different effects (target or writes) can fire together.
///
/// A pair is first checked syntactically (one guard contains the negation of
/// a conjunct of the other, as minterms of one family do); otherwise both
/// guards are evaluated over the sample.
pub fn is_deterministic(a: &Sra, sample: Option<&DeterminismSample>) -> Result<bool, AutomatonError> {
    if a.has_epsilon() {
        return Ok(false);
    }
    for q in a.states() {
        let out: Vec<_> = a.outgoing(q).collect();
        for (i, t1) in out.iter().enumerate() {
            for t2 in &out[i + 1..] {
                if t1.target == t2.target && t1.writes == t2.writes {
                    continue;
                }
                let (Label::Cond(c1), Label::Cond(c2)) = (&t1.label, &t2.label) else {
                    unreachable!("ε-transitions ruled out above");
                };
                if syntactically_exclusive(c1, c2) {
                    continue;
                }
                let Some(sample) = sample else {
                    return Err(AutomatonError::UnverifiableDeterminism);
                };
                let empty = [Valuation::empty()];
                let vals: &[Valuation] = if sample.valuations.is_empty() { &empty } else { &sample.valuations };
                for e in &sample.events {
                    for v in vals {
                        if c1.satisfied(e, v) && c2.satisfied(e, v) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}
