use std::collections::HashSet;

use super::condition::Condition;
use super::AlgebraError;

/// A conjunction in which each condition of a family appears once, either
/// positively or negated. Conditions equal to `True` are dropped from the
/// family when the minterm is built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Minterm {
    literals: Vec<(Condition, bool)>,
}

impl Minterm {
    pub fn literals(&self) -> &[(Condition, bool)] {
        &self.literals
    }

    /// Whether `cond` is a positive conjunct. `True` is entailed by every
    /// minterm; a condition outside the family is an error.
    pub fn entails(&self, cond: &Condition) -> Result<bool, AlgebraError> {
        if *cond == Condition::True {
            return Ok(true);
        }
        self.literals.iter().find(|(c, _)| c == cond).map(|(_, positive)| *positive).ok_or(AlgebraError::NotAMinterm)
    }

    pub fn to_condition(&self) -> Condition {
        Condition::conjunction(self.literals.iter().map(
            |(c, positive)| {
                if *positive {
                    c.clone()
                } else {
                    Condition::not(c.clone())
                }
            },
        ))
    }
}

/// All sign combinations of `conds`, with the first condition varying
/// fastest: `(a, b)` gives `a&b, !a&b, a&!b, !a&!b`.
///
/// `True` conjuncts are dropped and combinations negating `True` are
/// removed. Duplicate conditions are kept, so the caller decides whether a
/// family should be deduplicated first.
pub fn minterms(conds: &[Condition]) -> Vec<Minterm> {
    let n = conds.len();
    assert!(n < 31, "minterm family too large ({n} conditions)");
    let mut out = Vec::new();
    'outer: for mask in 0u32..(1u32 << n) {
        let mut literals = Vec::with_capacity(n);
        for (i, c) in conds.iter().enumerate() {
            let positive = mask & (1 << i) == 0;
            if *c == Condition::True {
                if !positive {
                    continue 'outer;
                }
                continue;
            }
            literals.push((c.clone(), positive));
        }
        out.push(Minterm { literals });
    }
    out
}

/// Minterms as plain conditions.
pub fn minterm_conditions(conds: &[Condition]) -> Vec<Condition> {
    minterms(conds).iter().map(Minterm::to_condition).collect()
}

/// Every node reachable from `c` through conjunctions only, `c` included.
fn conjunct_nodes<'a>(c: &'a Condition, out: &mut HashSet<&'a Condition>) {
    out.insert(c);
    if let Condition::And(a, b) = c {
        conjunct_nodes(a, out);
        conjunct_nodes(b, out);
    }
}

/// Entailment on a minterm given as a condition: `cond` must appear as a
/// conjunct, positively (true) or negated (false).
pub fn entails(minterm: &Condition, cond: &Condition) -> Result<bool, AlgebraError> {
    if *cond == Condition::True {
        return Ok(true);
    }
    let mut nodes = HashSet::new();
    conjunct_nodes(minterm, &mut nodes);
    if nodes.contains(cond) {
        return Ok(true);
    }
    if nodes.contains(&Condition::not(cond.clone())) {
        return Ok(false);
    }
    Err(AlgebraError::NotAMinterm)
}

fn implied(c: &Condition, nodes: &HashSet<&Condition>) -> bool {
    match c {
        Condition::True => true,
        Condition::And(a, b) if !nodes.contains(c) => implied(a, nodes) && implied(b, nodes),
        _ => nodes.contains(c),
    }
}

/// Syntactic mutual exclusion: one side has a conjunct `!c` while the other
/// side implies `c` through its conjuncts. Sound but incomplete.
pub fn syntactically_exclusive(a: &Condition, b: &Condition) -> bool {
    let (mut na, mut nb) = (HashSet::new(), HashSet::new());
    conjunct_nodes(a, &mut na);
    conjunct_nodes(b, &mut nb);
    let refutes = |x: &HashSet<&Condition>, y: &HashSet<&Condition>| {
        x.iter().any(|n| match n {
            Condition::Not(inner) => implied(inner, y),
            _ => false,
        })
    };
    refutes(&na, &nb) || refutes(&nb, &na)
}
