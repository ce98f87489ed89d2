use std::collections::BTreeMap;

use crate::automaton::{Label, Sra};
use crate::pattern::Srem;

use super::epsilon::eliminate_epsilon;
use super::single::to_single_register;

fn cat(a: Srem, b: Srem) -> Srem {
    match (a, b) {
        (Srem::Empty, _) | (_, Srem::Empty) => Srem::Empty,
        (Srem::Epsilon, x) | (x, Srem::Epsilon) => x,
        (x, y) => Srem::concat(x, y),
    }
}

fn alt(a: Srem, b: Srem) -> Srem {
    match (a, b) {
        (Srem::Empty, x) | (x, Srem::Empty) => x,
        (x, y) if x == y => x,
        (x, y) => Srem::or(x, y),
    }
}

fn star(a: Srem) -> Srem {
    match a {
        Srem::Empty | Srem::Epsilon => Srem::Epsilon,
        s @ Srem::Star(_) => s,
        x => Srem::star(x),
    }
}

/// A generalised automaton whose edges carry whole expressions; absent
/// edges stand for the empty expression.
#[derive(Debug, Clone, Default)]
pub struct Gsra {
    pub edges: BTreeMap<(usize, usize), Srem>,
    pub start: usize,
    pub finish: usize,
    pub inner: Vec<usize>,
}

impl Gsra {
    /// Lifts an ε-free single-register automaton: a fresh start and a
    /// fresh final state are joined to the old ones by ε edges and parallel
    /// transitions are merged by disjunction.
    pub fn from_sra(a: &Sra) -> Gsra {
        let n = a.num_states();
        let (start, finish) = (n, n + 1);
        let mut g = Gsra { edges: BTreeMap::new(), start, finish, inner: a.states().collect() };
        g.add(start, a.start(), Srem::Epsilon);
        for &f in a.finals() {
            g.add(f, finish, Srem::Epsilon);
        }
        for t in a.transitions() {
            let e = match &t.label {
                Label::Epsilon => Srem::Epsilon,
                Label::Cond(c) => match t.writes.len() {
                    0 => Srem::Cond(c.clone()),
                    1 => Srem::CondWrite(c.clone(), t.writes.iter().next().expect("one write").clone()),
                    _ => panic!("multi-register write; normalize to a single register first"),
                },
            };
            g.add(t.source, t.target, e);
        }
        g
    }

    fn add(&mut self, from: usize, to: usize, e: Srem) {
        let merged = match self.edges.remove(&(from, to)) {
            Some(old) => alt(old, e),
            None => e,
        };
        if merged != Srem::Empty {
            self.edges.insert((from, to), merged);
        }
    }

    fn incident(&self, q: usize) -> usize {
        self.edges.keys().filter(|(a, b)| *a == q || *b == q).count()
    }

    /// Removes one inner state, rerouting every path through it as
    /// `in ; loop* ; out + direct`.
    fn eliminate(&mut self, k: usize) {
        let loop_ = self.edges.remove(&(k, k)).map(star).unwrap_or(Srem::Epsilon);
        let ins: Vec<(usize, Srem)> =
            self.edges.iter().filter(|((_, b), _)| *b == k).map(|((a, _), e)| (*a, e.clone())).collect();
        let outs: Vec<(usize, Srem)> =
            self.edges.iter().filter(|((a, _), _)| *a == k).map(|((_, b), e)| (*b, e.clone())).collect();
        self.edges.retain(|(a, b), _| *a != k && *b != k);
        for (i, e_in) in &ins {
            for (j, e_out) in &outs {
                let through = cat(cat(e_in.clone(), loop_.clone()), e_out.clone());
                self.add(*i, *j, through);
            }
        }
        self.inner.retain(|q| *q != k);
    }

    /// Eliminates inner states, fewest incident edges first (ties to the
    /// lowest id), and returns the remaining start-to-final expression.
    pub fn reduce(mut self) -> Srem {
        while let Some(&k) = self.inner.iter().min_by_key(|q| (self.incident(**q), **q)) {
            self.eliminate(k);
        }
        self.edges.remove(&(self.start, self.finish)).unwrap_or(Srem::Empty)
    }
}

/// Back-translation by state elimination. The input is made ε-free and
/// single-register first.
pub fn sra_to_srem(a: &Sra) -> Srem {
    let a = to_single_register(&eliminate_epsilon(a));
    Gsra::from_sra(&a).reduce()
}
