//! Shared fixtures for the integration tests: a small event universe, a
//! predicate library over it, a seeded expression generator and string
//! enumeration.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sra_core::algebra::{Arg, CmpOp, Condition, Event, PredExpr, Predicate, PredicateLibrary, Register};
use sra_core::pattern::{parse_pattern, Pattern, Srem};

pub const SAMPLE_STREAM: [(&str, i64, i64); 6] =
    [("T", 1, 22), ("T", 1, 24), ("T", 2, 32), ("H", 1, 70), ("H", 1, 68), ("T", 2, 33)];

pub fn sample_stream() -> Vec<Event> {
    SAMPLE_STREAM.iter().map(|(k, i, v)| Event::typed(k, *i, *v)).collect()
}

pub const TYPE_ID_PREDICATES: &str = r#"
pred TypeIsT(x): x.type = "T"
pred TypeIsH(x): x.type = "H"
pred EqualId(x, y): x.id = y.id
"#;

pub fn type_id_pattern(body: &str) -> Pattern {
    parse_pattern(&format!("{TYPE_ID_PREDICATES}\n{body}")).expect("pattern parses")
}

pub const PAIR: &str = "(TypeIsT(~) -> r1) ; TRUE* ; (TypeIsH(~) & EqualId(~, r1))";
pub const SPACED_PAIR: &str = "TRUE* ; (TypeIsT(~) -> r1) ; TRUE* ; (TypeIsH(~) & EqualId(~, r1))";

/// Four events that separate every predicate of [`Kit`].
pub fn universe() -> Vec<Event> {
    vec![Event::typed("T", 1, 22), Event::typed("T", 2, 70), Event::typed("H", 1, 70), Event::typed("H", 2, 24)]
}

pub struct Kit {
    pub library: PredicateLibrary,
    pub unary: Vec<Arc<Predicate>>,
    pub binary: Vec<Arc<Predicate>>,
    pub registers: Vec<Register>,
}

impl Kit {
    pub fn new() -> Kit {
        use PredExpr as P;
        let mut library = PredicateLibrary::new();
        let mut unary = Vec::new();
        let mut binary = Vec::new();
        let add = |lib: &mut PredicateLibrary, p: Predicate| lib.insert(p).unwrap();
        unary.push(add(
            &mut library,
            Predicate::new("IsT", &["x"], P::cmp(P::attr(0, "type"), CmpOp::Eq, P::lit("T"))).unwrap(),
        ));
        unary.push(add(
            &mut library,
            Predicate::new("Big", &["x"], P::cmp(P::attr(0, "value"), CmpOp::Gt, P::lit(50))).unwrap(),
        ));
        unary.push(add(
            &mut library,
            Predicate::new("Id1", &["x"], P::cmp(P::attr(0, "id"), CmpOp::Eq, P::lit(1))).unwrap(),
        ));
        binary.push(add(
            &mut library,
            Predicate::new("SameId", &["x", "y"], P::cmp(P::attr(0, "id"), CmpOp::Eq, P::attr(1, "id"))).unwrap(),
        ));
        binary.push(add(
            &mut library,
            Predicate::new("Less", &["x", "y"], P::cmp(P::attr(0, "value"), CmpOp::Lt, P::attr(1, "value"))).unwrap(),
        ));
        binary.push(add(
            &mut library,
            Predicate::new("SameType", &["x", "y"], P::cmp(P::attr(0, "type"), CmpOp::Eq, P::attr(1, "type"))).unwrap(),
        ));
        Kit { library, unary, binary, registers: vec![Register::new("r1"), Register::new("r2")] }
    }

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn atom(&self, rng: &mut impl Rng) -> Condition {
        if rng.gen_bool(0.55) {
            let p = &self.unary[rng.gen_range(0..self.unary.len())];
            Condition::on_current(p).unwrap()
        } else {
            let p = &self.binary[rng.gen_range(0..self.binary.len())];
            let r = self.registers[rng.gen_range(0..self.registers.len())].clone();
            let args =
                if rng.gen_bool(0.7) { vec![Arg::Current, Arg::Reg(r)] } else { vec![Arg::Reg(r), Arg::Current] };
            Condition::atom(p, args).unwrap()
        }
    }

    pub fn condition(&self, rng: &mut impl Rng) -> Condition {
        match rng.gen_range(0..10) {
            0 => Condition::True,
            1 => Condition::not(self.atom(rng)),
            2 => Condition::and(self.atom(rng), self.atom(rng)),
            3 => Condition::or(self.atom(rng), Condition::not(self.atom(rng))),
            _ => self.atom(rng),
        }
    }

    fn leaf(&self, rng: &mut impl Rng) -> Srem {
        match rng.gen_range(0..20) {
            0 => Srem::Epsilon,
            1 => Srem::Empty,
            2..=9 => {
                let r = self.registers[rng.gen_range(0..self.registers.len())].clone();
                Srem::write(self.condition(rng), r)
            }
            _ => Srem::cond(self.condition(rng)),
        }
    }

    /// Random expression of depth at most `depth`, never windowed.
    pub fn expr(&self, rng: &mut impl Rng, depth: usize) -> Srem {
        if depth <= 1 || rng.gen_bool(0.25) {
            return self.leaf(rng);
        }
        match rng.gen_range(0..5) {
            0 | 1 => Srem::concat(self.expr(rng, depth - 1), self.expr(rng, depth - 1)),
            2 | 3 => Srem::or(self.expr(rng, depth - 1), self.expr(rng, depth - 1)),
            _ => Srem::star(self.expr(rng, depth - 1)),
        }
    }
}

/// Every string of length at most `n` over `universe`, shortest first.
pub fn strings(universe: &[Event], n: usize) -> Vec<Vec<Event>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Event>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &layer {
            for e in universe {
                let mut t = s.clone();
                t.push(e.clone());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn shared(s: &[Event]) -> Vec<Arc<Event>> {
    s.iter().cloned().map(Arc::new).collect()
}

/// Renders a string of universe events for failure messages.
pub fn show(s: &[Event]) -> String {
    let parts: Vec<String> = s
        .iter()
        .map(|e| {
            let g = |k: &str| e.get(k).map(|v| v.to_string()).unwrap_or_default();
            format!("({},{},{})", g("type"), g("id"), g("value"))
        })
        .collect();
    format!("<{}>", parts.join(" "))
}

/// The two-symbol streaming automaton for `a ; b` (states 0, 1, 2; 2 final)
/// over events carrying a `sym` attribute, with `a` as symbol 0 and `b` as
/// symbol 1.
pub fn ab_automaton() -> (sra_core::automaton::Sra, sra_core::forecast::SymbolMap) {
    use sra_core::automaton::{Flags, SraBuilder, Transition};
    let lib = sra_core::pattern::parse_declarations("pred IsA(x): x.sym = \"a\"").unwrap();
    let a = Condition::on_current(lib.get("IsA").unwrap()).unwrap();
    let b = Condition::not(a.clone());
    let mut builder = SraBuilder::new();
    let q: Vec<usize> = (0..3).map(|_| builder.add_state()).collect();
    builder.set_final(q[2]);
    for (src, on_a, on_b) in [(0, 1, 0), (1, 1, 2), (2, 1, 0)] {
        builder.add_transition(Transition::cond(src, on_a, a.clone()));
        builder.add_transition(Transition::cond(src, on_b, b.clone()));
    }
    let sra = builder
        .build(q[0])
        .unwrap()
        .with_flags(Flags { unrolled: false, deterministic: true, complete: true, window: None })
        .unwrap();
    let map = sra_core::forecast::SymbolMap::from_labels(vec![a, b]).unwrap();
    (sra, map)
}

pub fn sym_event(s: &str) -> Event {
    Event::new().with("sym", s)
}

/// Order-2 tree: root, a, b, aa, ba. The `aa` and `b` rows carry the
/// reference values; the others only have to be valid.
pub fn order_two_tree() -> sra_core::forecast::Pst {
    use std::collections::BTreeMap;
    let nodes = BTreeMap::from([
        (vec![], vec![0.6, 0.4]),
        (vec![0], vec![0.7, 0.3]),
        (vec![1], vec![0.5, 0.5]),
        (vec![0, 0], vec![0.75, 0.25]),
        (vec![1, 0], vec![0.6, 0.4]),
    ]);
    sra_core::forecast::Pst::from_nodes(2, 2, nodes).unwrap()
}
