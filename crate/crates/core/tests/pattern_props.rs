mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use common::*;
use sra_core::algebra::{Condition, Event, Register, Valuation};
use sra_core::pattern::*;

#[test]
fn parses_the_pair_pattern() {
    let p = type_id_pattern(PAIR);
    let lib = &p.library;
    let t = Condition::on_current(lib.get("TypeIsT").unwrap()).unwrap();
    let h = Condition::on_current(lib.get("TypeIsH").unwrap()).unwrap();
    let eq = Condition::atom(
        lib.get("EqualId").unwrap(),
        vec![sra_core::algebra::Arg::Current, sra_core::algebra::Arg::Reg(Register::new("r1"))],
    )
    .unwrap();
    let want = Srem::concat(
        Srem::concat(Srem::write(t, Register::new("r1")), Srem::star(Srem::cond(Condition::True))),
        Srem::cond(Condition::and(h, eq)),
    );
    assert_eq!(p.expr, want);
}

#[test]
fn parses_terminals_and_windows() {
    assert_eq!(parse_pattern("EPS").unwrap().expr, Srem::Epsilon);
    assert_eq!(parse_pattern("NONE").unwrap().expr, Srem::Empty);
    let p = parse_pattern("pred A(x): x.type = \"A\"\npred B(x): x.type = \"B\"\n(A(~) + B(~)) within 3").unwrap();
    let a = Condition::on_current(p.library.get("A").unwrap()).unwrap();
    let b = Condition::on_current(p.library.get("B").unwrap()).unwrap();
    assert_eq!(p.expr, Srem::window(Srem::or(Srem::cond(a), Srem::cond(b)), 3));
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_pattern("EPS ;\n  ; EPS") {
        Err(PatternError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_pattern("(EPS"), Err(PatternError::Syntax { .. })));
    assert!(matches!(parse_pattern("EPS within 0"), Err(PatternError::Syntax { .. })));
    assert!(matches!(parse_pattern("EPS ; (EPS within 2)"), Err(PatternError::Syntax { .. })));
}

#[test]
fn unknown_names_are_rejected() {
    match parse_pattern("EPS ; Nope(~)") {
        Err(PatternError::UnknownPredicate { name, line, column }) => {
            assert_eq!((name.as_str(), line, column), ("Nope", 1, 7))
        }
        other => panic!("{other:?}"),
    }
    let src = format!("{TYPE_ID_PREDICATES}\nTypeIsH(~) & EqualId(~, r1)");
    assert_eq!(parse_pattern(&src), Err(PatternError::UnknownRegister("r1".into())));
    let kit = Kit::new();
    assert!(parse_expr("SameId(~, r2)", &kit.library).is_ok());
}

#[test]
fn unparse_then_parse_is_identity() {
    let kit = Kit::new();
    for seed in 0..400 {
        let mut rng = Kit::rng(seed);
        let e = kit.expr(&mut rng, 5);
        let text = e.to_string();
        assert_eq!(parse_expr(&text, &kit.library).unwrap(), e, "{text}");
        let w = Srem::window(e, 1 + (seed as usize % 4));
        assert_eq!(parse_expr(&w.to_string(), &kit.library).unwrap(), w);
    }
}

#[test]
fn pattern_files_round_trip() {
    let p = type_id_pattern(PAIR);
    assert_eq!(parse_pattern(&p.to_string()).unwrap(), p);
}

#[test]
fn derivation_examples() {
    let s = sample_stream();
    let v0 = Valuation::empty();
    assert_eq!(derive(&Srem::Epsilon, &[], &v0).valuations, BTreeSet::from([v0.clone()]));
    let pair = type_id_pattern(PAIR).expr;
    let d = derive(&pair, &s[..4], &v0);
    assert!(d.valuations.iter().any(|v| v.get(&Register::new("r1")) == Some(&s[0])));
    assert!(derive(&pair, &s[..3], &v0).is_empty());
    assert!(accepts(&pair, &s[..5]));
    assert!(!accepts(&Srem::window(pair.clone(), 3), &s[..4]));
    assert!(accepts(&Srem::window(pair, 4), &s[..4]));
    for n in 0..=s.len() {
        assert!(!accepts(&Srem::Empty, &s[..n]));
    }
}

#[test]
fn register_sets() {
    let r1 = BTreeSet::from([Register::new("r1")]);
    assert_eq!(type_id_pattern(PAIR).expr.registers(), r1);
    assert!(Srem::Epsilon.registers().is_empty());
    let repeated = type_id_pattern("(TypeIsT(~) -> r1) ; (TypeIsH(~) & EqualId(~, r1))*").expr;
    assert_eq!(repeated.registers(), r1);
    let kit = Kit::new();
    for seed in 0..200 {
        let mut rng = Kit::rng(seed);
        let (a, b) = (kit.expr(&mut rng, 3), kit.expr(&mut rng, 3));
        let union: BTreeSet<Register> = a.registers().union(&b.registers()).cloned().collect();
        assert_eq!(Srem::concat(a.clone(), b.clone()).registers(), union);
        assert_eq!(Srem::or(a.clone(), b).registers(), union);
        assert_eq!(Srem::star(a.clone()).registers(), a.registers());
    }
}

#[test]
fn streaming_wrapper() {
    let kit = Kit::new();
    let phi = Condition::on_current(&kit.unary[0]).unwrap();
    let star_top = Srem::star(Srem::cond(Condition::True));
    assert_eq!(Srem::cond(phi.clone()).to_streaming(), Srem::concat(star_top.clone(), Srem::cond(phi.clone())));
    let w = Srem::window(Srem::cond(phi), 2);
    assert_eq!(w.to_streaming(), Srem::concat(star_top, w));
    let s = sample_stream();
    let pair = type_id_pattern(PAIR).expr.to_streaming();
    assert!(accepts(&pair, &s[..4]) && accepts(&pair, &s[..5]));
    for n in 0..=3 {
        assert!(!accepts(&Srem::Empty.to_streaming(), &s[..n]));
    }
}

/// Tabulates the derivation relation over (sub-expression, substring,
/// valuation) cells, filled on demand; independent of the recursive oracle.
struct Table<'a> {
    nodes: Vec<Srem>,
    children: Vec<Vec<usize>>,
    s: &'a [Event],
    memo: BTreeMap<(usize, usize, usize, Valuation), BTreeSet<Valuation>>,
}

impl<'a> Table<'a> {
    fn new(e: &Srem, s: &'a [Event]) -> Table<'a> {
        let mut t = Table { nodes: Vec::new(), children: Vec::new(), s, memo: BTreeMap::new() };
        t.add(e);
        t
    }

    fn add(&mut self, e: &Srem) -> usize {
        let kids: Vec<usize> = match e {
            Srem::Concat(a, b) | Srem::Or(a, b) => vec![self.add(a), self.add(b)],
            Srem::Star(a) | Srem::Window(a, _) => vec![self.add(a)],
            _ => vec![],
        };
        self.nodes.push(e.clone());
        self.children.push(kids);
        self.nodes.len() - 1
    }

    fn accepts(&mut self) -> bool {
        let root = self.nodes.len() - 1;
        !self.cell(root, 0, self.s.len(), &Valuation::empty()).is_empty()
    }

    /// End valuations for sub-expression `id` on `s[i..j]` from `v`.
    fn cell(&mut self, id: usize, i: usize, j: usize, v: &Valuation) -> BTreeSet<Valuation> {
        let key = (id, i, j, v.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let s = self.s;
        let kids = self.children[id].clone();
        let mut out = BTreeSet::new();
        match self.nodes[id].clone() {
            Srem::Empty => {}
            Srem::Epsilon => {
                if i == j {
                    out.insert(v.clone());
                }
            }
            Srem::Cond(c) => {
                if j == i + 1 && c.satisfied(&s[i], v) {
                    out.insert(v.clone());
                }
            }
            Srem::CondWrite(c, r) => {
                if j == i + 1 && c.satisfied(&s[i], v) {
                    out.insert(v.with(&r, Arc::new(s[i].clone())));
                }
            }
            Srem::Concat(..) => {
                for k in i..=j {
                    for mid in self.cell(kids[0], i, k, v) {
                        out.extend(self.cell(kids[1], k, j, &mid));
                    }
                }
            }
            Srem::Or(..) => {
                out.extend(self.cell(kids[0], i, j, v));
                out.extend(self.cell(kids[1], i, j, v));
            }
            Srem::Star(..) => {
                if i == j {
                    out.insert(v.clone());
                }
                // A non-empty first iteration, then the star on a strictly
                // shorter substring.
                for k in i + 1..=j {
                    for mid in self.cell(kids[0], i, k, v) {
                        out.extend(self.cell(id, k, j, &mid));
                    }
                }
            }
            Srem::Window(_, w) => {
                if j - i <= w {
                    out.extend(self.cell(kids[0], i, j, v));
                }
            }
        }
        self.memo.insert(key, out.clone());
        out
    }
}

#[test]
fn derivation_agrees_with_tabulation() {
    let kit = Kit::new();
    let u = universe();
    let all = strings(&u, 5);
    let mut positive = 0;
    for seed in 0..60 {
        let mut rng = Kit::rng(seed);
        let e = kit.expr(&mut rng, 4);
        let e = if seed % 5 == 0 { Srem::window(e, 2) } else { e };
        for s in &all {
            let got = accepts(&e, s);
            assert_eq!(got, Table::new(&e, s).accepts(), "{e} on {}", show(s));
            positive += got as usize;
        }
    }
    assert!(positive > 0);
}

#[test]
fn streaming_matches_some_suffix() {
    let kit = Kit::new();
    let u = universe();
    let all = strings(&u, 4);
    for seed in 0..80 {
        let mut rng = Kit::rng(1000 + seed);
        let e = kit.expr(&mut rng, 4);
        let e = if seed % 4 == 0 { Srem::window(e, 2) } else { e };
        let es = e.to_streaming();
        for s in &all {
            let any = (0..=s.len()).any(|m| accepts(&e, &s[m..]));
            assert_eq!(accepts(&es, s), any, "{e} on {}", show(s));
        }
    }
}
