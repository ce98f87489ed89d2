use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::event::Event;
use super::predicate::Predicate;
use super::AlgebraError;

/// A register variable, identified by its name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Register(Arc<str>);

impl Register {
    pub fn new(name: &str) -> Self {
        Register(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Argument of an atom: the current event `~` or a register.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arg {
    Current,
    Reg(Register),
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Current => f.write_str("~"),
            Arg::Reg(r) => write!(f, "{r}"),
        }
    }
}

/// A predicate applied to arguments. Atoms compare by predicate name and
/// arguments.
#[derive(Debug, Clone)]
pub struct Atom {
    predicate: Arc<Predicate>,
    args: Vec<Arg>,
}

impl Atom {
    pub fn predicate(&self) -> &Arc<Predicate> {
        &self.predicate
    }

    pub fn args(&self) -> &[Arg] {
        &self.args
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.predicate.name() == other.predicate.name() && self.args == other.args
    }
}

impl Eq for Atom {}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.predicate.name().hash(state);
        self.args.hash(state);
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.predicate.name().cmp(other.predicate.name()).then_with(|| self.args.cmp(&other.args))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    True,
    Atom(Atom),
    Not(Box<Condition>),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
}

/// Read access to register contents.
pub trait Registers {
    fn read(&self, r: &Register) -> Option<&Event>;
}

/// Partial assignment of events to registers; a missing entry is an empty
/// register.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    contents: BTreeMap<Register, Arc<Event>>,
}

impl Valuation {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn get(&self, r: &Register) -> Option<&Event> {
        self.contents.get(r).map(|e| e.as_ref())
    }

    pub fn get_shared(&self, r: &Register) -> Option<&Arc<Event>> {
        self.contents.get(r)
    }

    /// `v[r <- e]` as a fresh valuation.
    pub fn with(&self, r: &Register, e: Arc<Event>) -> Valuation {
        let mut contents = self.contents.clone();
        contents.insert(r.clone(), e);
        Valuation { contents }
    }

    /// `v[W <- e]` as a fresh valuation.
    pub fn with_all<'a>(&self, regs: impl IntoIterator<Item = &'a Register>, e: &Arc<Event>) -> Valuation {
        let mut contents = self.contents.clone();
        for r in regs {
            contents.insert(r.clone(), e.clone());
        }
        Valuation { contents }
    }

    pub fn len(&self) -> usize {
        self.contents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contents.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Register, &Event)> {
        self.contents.iter().map(|(r, e)| (r, e.as_ref()))
    }
}

impl Registers for Valuation {
    fn read(&self, r: &Register) -> Option<&Event> {
        self.get(r)
    }
}

impl FromIterator<(Register, Event)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (Register, Event)>>(iter: T) -> Self {
        Valuation { contents: iter.into_iter().map(|(r, e)| (r, Arc::new(e))).collect() }
    }
}

impl Condition {
    pub fn atom(predicate: &Arc<Predicate>, args: Vec<Arg>) -> Result<Self, AlgebraError> {
        if args.len() != predicate.arity() {
            return Err(AlgebraError::ArityMismatch {
                predicate: predicate.name().to_string(),
                expected: predicate.arity(),
                found: args.len(),
            });
        }
        Ok(Condition::Atom(Atom { predicate: predicate.clone(), args }))
    }

    /// Unary atom over the current event.
    pub fn on_current(predicate: &Arc<Predicate>) -> Result<Self, AlgebraError> {
        Condition::atom(predicate, vec![Arg::Current])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Condition) -> Self {
        Condition::Not(Box::new(c))
    }

    pub fn and(a: Condition, b: Condition) -> Self {
        Condition::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Condition, b: Condition) -> Self {
        Condition::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; the empty conjunction is `True`.
    pub fn conjunction(parts: impl IntoIterator<Item = Condition>) -> Self {
        let mut it = parts.into_iter();
        match it.next() {
            None => Condition::True,
            Some(first) => it.fold(first, Condition::and),
        }
    }

    /// The registers read by the condition (its register selection).
    pub fn registers(&self) -> BTreeSet<Register> {
        let mut out = BTreeSet::new();
        self.collect_registers(&mut out);
        out
    }

    pub fn collect_registers(&self, out: &mut BTreeSet<Register>) {
        match self {
            Condition::True => {}
            Condition::Atom(a) => {
                for arg in &a.args {
                    if let Arg::Reg(r) = arg {
                        out.insert(r.clone());
                    }
                }
            }
            Condition::Not(c) => c.collect_registers(out),
            Condition::And(a, b) | Condition::Or(a, b) => {
                a.collect_registers(out);
                b.collect_registers(out);
            }
        }
    }

    pub fn collect_predicates(&self, out: &mut BTreeMap<String, Arc<Predicate>>) {
        match self {
            Condition::True => {}
            Condition::Atom(a) => {
                out.entry(a.predicate.name().to_string()).or_insert_with(|| a.predicate.clone());
            }
            Condition::Not(c) => c.collect_predicates(out),
            Condition::And(a, b) | Condition::Or(a, b) => {
                a.collect_predicates(out);
                b.collect_predicates(out);
            }
        }
    }

    /// Rewrites every register argument through `f`.
    pub fn map_registers(&self, f: &mut impl FnMut(&Register) -> Register) -> Condition {
        match self {
            Condition::True => Condition::True,
            Condition::Atom(a) => Condition::Atom(Atom {
                predicate: a.predicate.clone(),
                args: a
                    .args
                    .iter()
                    .map(|arg| match arg {
                        Arg::Current => Arg::Current,
                        Arg::Reg(r) => Arg::Reg(f(r)),
                    })
                    .collect(),
            }),
            Condition::Not(c) => Condition::not(c.map_registers(f)),
            Condition::And(a, b) => Condition::and(a.map_registers(f), b.map_registers(f)),
            Condition::Or(a, b) => Condition::or(a.map_registers(f), b.map_registers(f)),
        }
    }

    /// Strict evaluation: reading an empty register is an error.
    pub fn evaluate(&self, current: &Event, v: &impl Registers) -> Result<bool, AlgebraError> {
        Ok(match self {
            Condition::True => true,
            Condition::Atom(a) => {
                let mut args = Vec::with_capacity(a.args.len());
                for arg in &a.args {
                    match arg {
                        Arg::Current => args.push(current),
                        Arg::Reg(r) => match v.read(r) {
                            Some(e) => args.push(e),
                            None => return Err(AlgebraError::UnboundRegister(r.clone())),
                        },
                    }
                }
                a.predicate.eval(&args)
            }
            Condition::Not(c) => !c.evaluate(current, v)?,
            Condition::And(a, b) => a.evaluate(current, v)? && b.evaluate(current, v)?,
            Condition::Or(a, b) => a.evaluate(current, v)? || b.evaluate(current, v)?,
        })
    }

    /// Satisfaction as used by runs and derivations: an atom that reads an
    /// empty register is not satisfied (so its negation is).
    pub fn satisfied(&self, current: &Event, v: &impl Registers) -> bool {
        match self {
            Condition::True => true,
            Condition::Atom(a) => {
                let mut args = Vec::with_capacity(a.args.len());
                for arg in &a.args {
                    match arg {
                        Arg::Current => args.push(current),
                        Arg::Reg(r) => match v.read(r) {
                            Some(e) => args.push(e),
                            None => return false,
                        },
                    }
                }
                a.predicate.eval(&args)
            }
            Condition::Not(c) => !c.satisfied(current, v),
            Condition::And(a, b) => a.satisfied(current, v) && b.satisfied(current, v),
            Condition::Or(a, b) => a.satisfied(current, v) || b.satisfied(current, v),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Condition::Or(..) => 0,
            Condition::And(..) => 1,
            Condition::Not(_) => 2,
            Condition::True | Condition::Atom(_) => 3,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Condition {
    /// Pattern-language syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::True => f.write_str("TRUE"),
            Condition::Atom(a) => {
                write!(f, "{}(", a.predicate.name())?;
                for (i, arg) in a.args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                f.write_str(")")
            }
            Condition::Not(c) => {
                f.write_str("!")?;
                c.write_child(f, 2)
            }
            Condition::And(a, b) => {
                a.write_child(f, 1)?;
                f.write_str(" & ")?;
                b.write_child(f, 2)
            }
            Condition::Or(a, b) => {
                a.write_child(f, 0)?;
                f.write_str(" | ")?;
                b.write_child(f, 1)
            }
        }
    }
}
