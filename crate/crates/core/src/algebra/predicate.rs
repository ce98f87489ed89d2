use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::event::{Event, Value};
use super::AlgebraError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    fn holds(self, ord: Ordering) -> bool {
        match self {
            CmpOp::Eq => ord == Ordering::Equal,
            CmpOp::Ne => ord != Ordering::Equal,
            CmpOp::Lt => ord == Ordering::Less,
            CmpOp::Le => ord != Ordering::Greater,
            CmpOp::Gt => ord == Ordering::Greater,
            CmpOp::Ge => ord != Ordering::Less,
        }
    }
}

/// One side of a comparison: an attribute of a predicate parameter, or a
/// literal constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    Attr { param: usize, attr: String },
    Lit(Value),
}

/// Body of a declared predicate: a Boolean combination of attribute
/// comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PredExpr {
    Cmp(Operand, CmpOp, Operand),
    Not(Box<PredExpr>),
    And(Box<PredExpr>, Box<PredExpr>),
    Or(Box<PredExpr>, Box<PredExpr>),
}

impl PredExpr {
    pub fn cmp(lhs: Operand, op: CmpOp, rhs: Operand) -> Self {
        PredExpr::Cmp(lhs, op, rhs)
    }

    pub fn attr(param: usize, attr: &str) -> Operand {
        Operand::Attr { param, attr: attr.to_string() }
    }

    pub fn lit(v: impl Into<Value>) -> Operand {
        Operand::Lit(v.into())
    }

    pub fn and(a: PredExpr, b: PredExpr) -> Self {
        PredExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PredExpr, b: PredExpr) -> Self {
        PredExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn negate(a: PredExpr) -> Self {
        PredExpr::Not(Box::new(a))
    }

    // A comparison involving a missing attribute or incomparable kinds is
    // false, whatever the operator.
    fn eval(&self, args: &[&Event]) -> bool {
        match self {
            PredExpr::Cmp(l, op, r) => {
                let resolve = |o: &Operand| -> Option<Value> {
                    match o {
                        Operand::Attr { param, attr } => args.get(*param)?.get(attr).cloned(),
                        Operand::Lit(v) => Some(v.clone()),
                    }
                };
                match (resolve(l), resolve(r)) {
                    (Some(a), Some(b)) => a.compare(&b).is_some_and(|ord| op.holds(ord)),
                    _ => false,
                }
            }
            PredExpr::Not(a) => !a.eval(args),
            PredExpr::And(a, b) => a.eval(args) && b.eval(args),
            PredExpr::Or(a, b) => a.eval(args) || b.eval(args),
        }
    }

    fn max_param(&self) -> Option<usize> {
        match self {
            PredExpr::Cmp(l, _, r) => {
                let p = |o: &Operand| match o {
                    Operand::Attr { param, .. } => Some(*param),
                    Operand::Lit(_) => None,
                };
                p(l).max(p(r))
            }
            PredExpr::Not(a) => a.max_param(),
            PredExpr::And(a, b) | PredExpr::Or(a, b) => a.max_param().max(b.max_param()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            PredExpr::Or(..) => 0,
            PredExpr::And(..) => 1,
            PredExpr::Not(_) => 2,
            PredExpr::Cmp(..) => 3,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, params: &[String]) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, c: &PredExpr, min: u8| -> fmt::Result {
            if c.precedence() < min {
                write!(f, "(")?;
                c.write(f, params)?;
                write!(f, ")")
            } else {
                c.write(f, params)
            }
        };
        match self {
            PredExpr::Cmp(l, op, r) => {
                let side = |f: &mut fmt::Formatter<'_>, o: &Operand| match o {
                    Operand::Attr { param, attr } => write!(f, "{}.{}", params[*param], attr),
                    Operand::Lit(v) => write!(f, "{v}"),
                };
                side(f, l)?;
                write!(f, " {} ", op.symbol())?;
                side(f, r)
            }
            PredExpr::Not(a) => {
                write!(f, "!")?;
                child(f, a, 2)
            }
            PredExpr::And(a, b) => {
                child(f, a, 1)?;
                write!(f, " & ")?;
                child(f, b, 2)
            }
            PredExpr::Or(a, b) => {
                child(f, a, 0)?;
                write!(f, " | ")?;
                child(f, b, 1)
            }
        }
    }
}

/// A named relation of fixed arity with a declarative body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    name: String,
    params: Vec<String>,
    body: PredExpr,
}

impl Predicate {
    pub fn new(name: &str, params: &[&str], body: PredExpr) -> Result<Self, AlgebraError> {
        let params: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        Self::from_parts(name.to_string(), params, body)
    }

    pub fn from_parts(name: String, params: Vec<String>, body: PredExpr) -> Result<Self, AlgebraError> {
        if name.is_empty() || params.is_empty() {
            return Err(AlgebraError::InvalidPredicate {
                name,
                reason: "a predicate needs a name and at least one parameter".into(),
            });
        }
        for (i, p) in params.iter().enumerate() {
            if params[..i].contains(p) {
                return Err(AlgebraError::InvalidPredicate { name, reason: format!("duplicate parameter `{p}`") });
            }
        }
        if body.max_param().is_some_and(|m| m >= params.len()) {
            return Err(AlgebraError::InvalidPredicate {
                name,
                reason: "body refers to an undeclared parameter".into(),
            });
        }
        Ok(Predicate { name, params, body })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn body(&self) -> &PredExpr {
        &self.body
    }

    pub fn eval(&self, args: &[&Event]) -> bool {
        debug_assert_eq!(args.len(), self.arity());
        self.body.eval(args)
    }
}

impl fmt::Display for Predicate {
    /// Declaration syntax: `pred Name(x, y): x.id = y.id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pred {}({}): ", self.name, self.params.join(", "))?;
        self.body.write(f, &self.params)
    }
}

/// Named predicates available to a pattern.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PredicateLibrary {
    preds: BTreeMap<String, Arc<Predicate>>,
}

impl PredicateLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: Predicate) -> Result<Arc<Predicate>, AlgebraError> {
        if self.preds.contains_key(p.name()) {
            return Err(AlgebraError::DuplicatePredicate(p.name().to_string()));
        }
        let p = Arc::new(p);
        self.preds.insert(p.name().to_string(), p.clone());
        Ok(p)
    }

    /// Inserts a predicate, accepting an identical redeclaration.
    pub fn merge(&mut self, p: Arc<Predicate>) -> Result<(), AlgebraError> {
        match self.preds.get(p.name()) {
            Some(existing) if **existing != *p => Err(AlgebraError::DuplicatePredicate(p.name().to_string())),
            Some(_) => Ok(()),
            None => {
                self.preds.insert(p.name().to_string(), p);
                Ok(())
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&Arc<Predicate>> {
        self.preds.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<Predicate>> {
        self.preds.values()
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }
}
