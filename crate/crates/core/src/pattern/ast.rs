use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Condition, Predicate, PredicateLibrary, Register};

/// Abstract syntax of a symbolic regular expression with memory.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Srem {
    Empty,
    Epsilon,
    Cond(Condition),
    CondWrite(Condition, Register),
    Concat(Box<Srem>, Box<Srem>),
    Or(Box<Srem>, Box<Srem>),
    Star(Box<Srem>),
    Window(Box<Srem>, usize),
}

impl Srem {
    pub fn cond(c: Condition) -> Self {
        Srem::Cond(c)
    }

    pub fn write(c: Condition, r: Register) -> Self {
        Srem::CondWrite(c, r)
    }

    pub fn concat(a: Srem, b: Srem) -> Self {
        Srem::Concat(Box::new(a), Box::new(b))
    }

    pub fn or(a: Srem, b: Srem) -> Self {
        Srem::Or(Box::new(a), Box::new(b))
    }

    pub fn star(a: Srem) -> Self {
        Srem::Star(Box::new(a))
    }

    pub fn window(a: Srem, w: usize) -> Self {
        Srem::Window(Box::new(a), w)
    }

    /// Left-nested concatenation of the parts; empty input gives epsilon.
    pub fn seq(parts: impl IntoIterator<Item = Srem>) -> Self {
        let mut it = parts.into_iter();
        match it.next() {
            None => Srem::Epsilon,
            Some(first) => it.fold(first, Srem::concat),
        }
    }

    /// All registers written or read anywhere in the expression.
    pub fn registers(&self) -> BTreeSet<Register> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| match e {
            Srem::Cond(c) => c.collect_registers(&mut out),
            Srem::CondWrite(c, r) => {
                c.collect_registers(&mut out);
                out.insert(r.clone());
            }
            _ => {}
        });
        out
    }

    pub fn written_registers(&self) -> BTreeSet<Register> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Srem::CondWrite(_, r) = e {
                out.insert(r.clone());
            }
        });
        out
    }

    pub fn read_registers(&self) -> BTreeSet<Register> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| match e {
            Srem::Cond(c) | Srem::CondWrite(c, _) => c.collect_registers(&mut out),
            _ => {}
        });
        out
    }

    pub fn predicates(&self) -> BTreeMap<String, Arc<Predicate>> {
        let mut out = BTreeMap::new();
        self.visit(&mut |e| match e {
            Srem::Cond(c) | Srem::CondWrite(c, _) => c.collect_predicates(&mut out),
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Srem)) {
        f(self);
        match self {
            Srem::Concat(a, b) | Srem::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Srem::Star(a) | Srem::Window(a, _) => a.visit(f),
            _ => {}
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn depth(&self) -> usize {
        match self {
            Srem::Concat(a, b) | Srem::Or(a, b) => 1 + a.depth().max(b.depth()),
            Srem::Star(a) | Srem::Window(a, _) => 1 + a.depth(),
            _ => 1,
        }
    }

    /// Window bound when the expression is windowed at the top.
    pub fn window_bound(&self) -> Option<usize> {
        match self {
            Srem::Window(_, w) => Some(*w),
            _ => None,
        }
    }

    /// Checks that a window, if any, is outermost and positive.
    pub fn check_windows(&self) -> Result<(), String> {
        let inner = match self {
            Srem::Window(body, w) => {
                if *w == 0 {
                    return Err("window length must be at least 1".into());
                }
                body.as_ref()
            }
            other => other,
        };
        let mut nested = false;
        inner.visit(&mut |e| nested |= matches!(e, Srem::Window(..)));
        if nested {
            Err("a window may only enclose the whole pattern".into())
        } else {
            Ok(())
        }
    }

    /// `TRUE* ; e`: detects, at every index, whether some suffix matches `e`.
    /// For a windowed `e` the window stays on the match body.
    pub fn to_streaming(&self) -> Srem {
        Srem::concat(Srem::star(Srem::Cond(Condition::True)), self.clone())
    }

    fn precedence(&self) -> u8 {
        match self {
            Srem::Window(..) => 0,
            Srem::Or(..) => 1,
            Srem::Concat(..) => 2,
            Srem::Star(_) => 3,
            Srem::CondWrite(..) => 3,
            Srem::Empty | Srem::Epsilon | Srem::Cond(_) => 4,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    // Operand of a postfix operator: compound conditions and writes get
    // parentheses for readability.
    fn write_postfix_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Srem::Cond(Condition::True) | Srem::Cond(Condition::Atom(_)) | Srem::Empty | Srem::Epsilon => {
                write!(f, "{self}")
            }
            Srem::Star(_) => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for Srem {
    /// Pattern-language syntax; parsing the output gives back the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Srem::Empty => f.write_str("NONE"),
            Srem::Epsilon => f.write_str("EPS"),
            Srem::Cond(c) => write!(f, "{c}"),
            Srem::CondWrite(c, r) => {
                match c {
                    Condition::True | Condition::Atom(_) => write!(f, "{c}")?,
                    _ => write!(f, "({c})")?,
                }
                write!(f, " -> {r}")
            }
            Srem::Concat(a, b) => {
                a.write_seq_operand(f, false)?;
                f.write_str(" ; ")?;
                b.write_seq_operand(f, true)
            }
            Srem::Or(a, b) => {
                a.write_alt_operand(f, false)?;
                f.write_str(" + ")?;
                b.write_alt_operand(f, true)
            }
            Srem::Star(a) => {
                a.write_postfix_operand(f)?;
                f.write_str("*")
            }
            Srem::Window(a, w) => {
                a.write_child(f, 1)?;
                write!(f, " within {w}")
            }
        }
    }
}

impl Srem {
    fn write_seq_operand(&self, f: &mut fmt::Formatter<'_>, right: bool) -> fmt::Result {
        match self {
            Srem::CondWrite(..) => write!(f, "({self})"),
            Srem::Concat(..) if right => write!(f, "({self})"),
            _ => self.write_child(f, 2),
        }
    }

    fn write_alt_operand(&self, f: &mut fmt::Formatter<'_>, right: bool) -> fmt::Result {
        match self {
            Srem::CondWrite(..) => write!(f, "({self})"),
            Srem::Or(..) if right => write!(f, "({self})"),
            _ => self.write_child(f, 1),
        }
    }
}

/// A parsed pattern file: declared predicates plus one expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub library: PredicateLibrary,
    pub expr: Srem,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.library.iter() {
            writeln!(f, "{p}")?;
        }
        writeln!(f, "{}", self.expr)
    }
}
