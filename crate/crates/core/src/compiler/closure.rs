use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::{Condition, Register};
use crate::automaton::{Label, Sra, SraBuilder, StateId, Transition};

use super::epsilon::eliminate_epsilon;
use super::CompileError;

/// What binary operations do when operands share register names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Renaming {
    /// Rename the second operand's registers apart.
    #[default]
    Auto,
    /// Fail with `RegisterCollision`.
    Forbid,
}

/// `base_1`, `base_2`, ... : the first name not in `taken`.
pub fn fresh_register(base: &Register, taken: &BTreeSet<Register>) -> Register {
    (1..)
        .map(|i| Register::new(&format!("{}_{}", base.name(), i)))
        .find(|r| !taken.contains(r))
        .expect("unbounded supply of names")
}

/// The second operand with registers renamed apart from the first.
fn apart(a: &Sra, b: &Sra, renaming: Renaming) -> Result<Sra, CompileError> {
    let clash: Vec<&Register> = b.registers().intersection(a.registers()).collect();
    if clash.is_empty() {
        return Ok(b.clone());
    }
    if renaming == Renaming::Forbid {
        return Err(CompileError::RegisterCollision(clash[0].name().to_string()));
    }
    let mut taken: BTreeSet<Register> = a.registers().union(b.registers()).cloned().collect();
    let mut map: BTreeMap<Register, Register> = BTreeMap::new();
    for r in clash {
        let fresh = fresh_register(r, &taken);
        taken.insert(fresh.clone());
        map.insert(r.clone(), fresh);
    }
    let rename = |r: &Register| map.get(r).cloned().unwrap_or_else(|| r.clone());
    let transitions = b
        .transitions()
        .iter()
        .map(|t| Transition {
            source: t.source,
            target: t.target,
            label: match &t.label {
                Label::Epsilon => Label::Epsilon,
                Label::Cond(c) => Label::Cond(c.map_registers(&mut |r| rename(r))),
            },
            writes: t.writes.iter().map(rename).collect(),
        })
        .collect();
    Ok(Sra::new(b.num_states(), b.start(), b.finals().iter().copied(), b.registers().iter().map(rename), transitions)?)
}

/// Copies `a` into the builder; returns the state offset.
fn embed(b: &mut SraBuilder, a: &Sra) -> StateId {
    let offset = b.num_states();
    for _ in a.states() {
        b.add_state();
    }
    for r in a.registers() {
        b.add_register(r.clone());
    }
    for t in a.transitions() {
        b.add_transition(Transition {
            source: t.source + offset,
            target: t.target + offset,
            label: t.label.clone(),
            writes: t.writes.clone(),
        });
    }
    offset
}

pub fn union_of(a: &Sra, b: &Sra, renaming: Renaming) -> Result<Sra, CompileError> {
    let b2 = apart(a, b, renaming)?;
    let mut out = SraBuilder::new();
    let s = out.add_state();
    let oa = embed(&mut out, a);
    let ob = embed(&mut out, &b2);
    let f = out.add_state();
    out.epsilon(s, a.start() + oa);
    out.epsilon(s, b2.start() + ob);
    for q in a.finals() {
        out.epsilon(q + oa, f);
    }
    for q in b2.finals() {
        out.epsilon(q + ob, f);
    }
    out.set_final(f);
    Ok(out.build(s)?)
}

pub fn concat_of(a: &Sra, b: &Sra, renaming: Renaming) -> Result<Sra, CompileError> {
    let b2 = apart(a, b, renaming)?;
    let mut out = SraBuilder::new();
    let oa = embed(&mut out, a);
    let ob = embed(&mut out, &b2);
    for q in a.finals() {
        out.epsilon(q + oa, b2.start() + ob);
    }
    for q in b2.finals() {
        out.set_final(q + ob);
    }
    Ok(out.build(a.start() + oa)?)
}

pub fn star_of(a: &Sra) -> Sra {
    let mut out = SraBuilder::new();
    let s = out.add_state();
    let oa = embed(&mut out, a);
    let f = out.add_state();
    out.epsilon(s, a.start() + oa);
    out.epsilon(s, f);
    for q in a.finals() {
        out.epsilon(q + oa, f);
        out.epsilon(q + oa, a.start() + oa);
    }
    out.set_final(f);
    out.build(s).expect("gluing keeps the automaton valid")
}

/// Product construction over reachable pairs. Both operands are made ε-free
/// first; a product transition's guard is the conjunction of the factors'
/// guards and it writes the union of their write sets.
pub fn intersect(a: &Sra, b: &Sra, renaming: Renaming) -> Result<Sra, CompileError> {
    Ok(intersect_traced(a, b, renaming)?.product)
}

/// A product automaton with the factor transitions behind each of its
/// transitions.
#[derive(Debug, Clone)]
pub struct ProductTrace {
    pub product: Sra,
    /// The ε-free first operand.
    pub left: Sra,
    /// The ε-free second operand, registers renamed apart.
    pub right: Sra,
    /// For product transition `i`, the indices of its factor transitions in
    /// `left` and `right`.
    pub origins: Vec<(usize, usize)>,
}

pub fn intersect_traced(a: &Sra, b: &Sra, renaming: Renaming) -> Result<ProductTrace, CompileError> {
    let a = eliminate_epsilon(a);
    let b = eliminate_epsilon(&apart(&a, b, renaming)?);
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut intern = |p: (StateId, StateId), pairs: &mut Vec<(StateId, StateId)>| {
        *ids.entry(p).or_insert_with(|| {
            pairs.push(p);
            pairs.len() - 1
        })
    };
    intern((a.start(), b.start()), &mut pairs);
    let mut transitions = Vec::new();
    let mut origins = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (q1, q2) = pairs[next];
        for &i1 in a.outgoing_indices(q1) {
            let t1 = &a.transitions()[i1];
            for &i2 in b.outgoing_indices(q2) {
                let t2 = &b.transitions()[i2];
                let (Some(c1), Some(c2)) = (t1.label.condition(), t2.label.condition()) else {
                    continue;
                };
                let guard = match (c1, c2) {
                    (Condition::True, c) | (c, Condition::True) => c.clone(),
                    _ => Condition::and(c1.clone(), c2.clone()),
                };
                let target = intern((t1.target, t2.target), &mut pairs);
                let writes = t1.writes.union(&t2.writes).cloned().collect();
                transitions.push(Transition { source: next, target, label: Label::Cond(guard), writes });
                origins.push((i1, i2));
            }
        }
        next += 1;
    }
    let finals: Vec<StateId> =
        pairs.iter().enumerate().filter(|(_, (q1, q2))| a.is_final(*q1) && b.is_final(*q2)).map(|(i, _)| i).collect();
    let registers: BTreeSet<Register> = a.registers().union(b.registers()).cloned().collect();
    let product = Sra::new(pairs.len(), 0, finals, registers, transitions)?;
    Ok(ProductTrace { product, left: a, right: b, origins })
}
