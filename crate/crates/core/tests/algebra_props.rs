mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use sra_core::algebra::*;

fn type_id_library() -> PredicateLibrary {
    sra_core::pattern::parse_declarations(TYPE_ID_PREDICATES).unwrap()
}

fn equal_id() -> Condition {
    let lib = type_id_library();
    Condition::atom(lib.get("EqualId").unwrap(), vec![Arg::Current, Arg::Reg(Register::new("r1"))]).unwrap()
}

fn holding(e: Event) -> Valuation {
    Valuation::empty().with(&Register::new("r1"), Arc::new(e))
}

#[test]
fn type_id_condition_examples() {
    let v = holding(Event::typed("T", 1, 22));
    assert!(Condition::True.evaluate(&Event::typed("H", 9, 0), &Valuation::empty()).unwrap());
    assert!(equal_id().evaluate(&Event::typed("H", 1, 70), &v).unwrap());
    assert!(!equal_id().evaluate(&Event::typed("T", 2, 32), &v).unwrap());
}

#[test]
fn reading_an_empty_register() {
    let c = equal_id();
    let e = Event::typed("H", 1, 70);
    assert_eq!(c.evaluate(&e, &Valuation::empty()), Err(AlgebraError::UnboundRegister(Register::new("r1"))));
    assert!(!c.satisfied(&e, &Valuation::empty()));
    assert!(Condition::not(c).satisfied(&e, &Valuation::empty()));
}

#[test]
fn register_selection() {
    let c = Condition::and(equal_id(), Condition::True);
    assert_eq!(c.registers(), [Register::new("r1")].into_iter().collect());
    assert!(Condition::True.registers().is_empty());
}

#[test]
fn arity_is_checked() {
    let lib = type_id_library();
    let err = Condition::atom(lib.get("EqualId").unwrap(), vec![Arg::Current]).unwrap_err();
    assert!(matches!(err, AlgebraError::ArityMismatch { expected: 2, found: 1, .. }));
}

#[test]
fn events_compare_by_all_attributes() {
    assert_eq!(Event::typed("T", 1, 22), Event::typed("T", 1, 22));
    assert_ne!(Event::typed("T", 1, 22), Event::typed("T", 1, 22).with("extra", 1));
    assert_ne!(Event::new().with("v", 1), Event::new().with("v", 1.0));
    assert_eq!(Value::Int(1).compare(&Value::Real(1.5)), Some(std::cmp::Ordering::Less));
    assert_eq!(Value::Int(1).compare(&Value::Text("1".into())), None);
}

#[test]
fn mixed_kinds_fail_every_comparison() {
    use PredExpr as P;
    for op in [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge] {
        let p = Predicate::new("P", &["x"], P::cmp(P::attr(0, "value"), op, P::lit("a"))).unwrap();
        assert!(!p.eval(&[&Event::typed("T", 1, 22)]), "{op:?}");
        assert!(!p.eval(&[&Event::new()]), "missing attribute, {op:?}");
    }
}

#[test]
fn valuation_substitution_touches_only_written_registers() {
    let (r1, r2) = (Register::new("r1"), Register::new("r2"));
    let a = Arc::new(Event::typed("T", 1, 22));
    let b = Arc::new(Event::typed("H", 2, 3));
    let v = Valuation::empty().with(&r1, a.clone());
    let w = v.with_all(std::slice::from_ref(&r2), &b);
    assert_eq!(v.get(&r2), None);
    assert_eq!(w.get(&r1), Some(a.as_ref()));
    assert_eq!(w.get(&r2), Some(b.as_ref()));
}

fn phi(name: &str) -> Condition {
    use PredExpr as P;
    let p = Arc::new(Predicate::new(name, &["x"], P::cmp(P::attr(0, "type"), CmpOp::Eq, P::lit(name))).unwrap());
    Condition::on_current(&p).unwrap()
}

#[test]
fn minterm_order_and_simplification() {
    let (p1, p2) = (phi("A"), phi("B"));
    let n = |c: &Condition| Condition::not(c.clone());
    let got = minterm_conditions(&[p1.clone(), p2.clone()]);
    let want = vec![
        Condition::and(p1.clone(), p2.clone()),
        Condition::and(n(&p1), p2.clone()),
        Condition::and(p1.clone(), n(&p2)),
        Condition::and(n(&p1), n(&p2)),
    ];
    assert_eq!(got, want);
    assert_eq!(minterm_conditions(&[]), vec![Condition::True]);
    assert_eq!(minterm_conditions(&[Condition::True, p1.clone()]), vec![p1.clone(), n(&p1)]);
}

#[test]
fn minterm_entailment() {
    let (p1, p2) = (phi("A"), phi("B"));
    let m = Condition::and(p1.clone(), Condition::not(p2.clone()));
    assert_eq!(entails(&m, &p1), Ok(true));
    assert_eq!(entails(&m, &p2), Ok(false));
    let m2 = Condition::and(Condition::not(p1.clone()), Condition::not(p2.clone()));
    assert_eq!(entails(&m2, &p1), Ok(false));
    assert_eq!(entails(&m, &phi("C")), Err(AlgebraError::NotAMinterm));
}

#[test]
fn simplified_family_agrees_with_truth_table() {
    let kit = Kit::new();
    let p = phi("T");
    let family = minterm_conditions(&[Condition::True, p.clone()]);
    for e in universe() {
        let truth = p.satisfied(&e, &Valuation::empty());
        assert_eq!(family[0].satisfied(&e, &Valuation::empty()), truth);
        assert_eq!(family[1].satisfied(&e, &Valuation::empty()), !truth);
    }
    let _ = kit;
}

/// Truth value of a condition from the predicates' own evaluators.
fn oracle(c: &Condition, e: &Event, v: &Valuation) -> bool {
    match c {
        Condition::True => true,
        Condition::Atom(a) => {
            let args: Option<Vec<&Event>> = a
                .args()
                .iter()
                .map(|x| match x {
                    Arg::Current => Some(e),
                    Arg::Reg(r) => v.get(r),
                })
                .collect();
            args.is_some_and(|args| a.predicate().eval(&args))
        }
        Condition::Not(x) => !oracle(x, e, v),
        Condition::And(x, y) => oracle(x, e, v) && oracle(y, e, v),
        Condition::Or(x, y) => oracle(x, e, v) || oracle(y, e, v),
    }
}

fn grid_valuations() -> Vec<Valuation> {
    let mut out = vec![Valuation::empty()];
    for r in ["r1", "r2"] {
        let mut next = Vec::new();
        for v in &out {
            next.push(v.clone());
            for e in universe() {
                next.push(v.with(&Register::new(r), Arc::new(e)));
            }
        }
        out = next;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boolean_structure_matches_truth_table(seed in any::<u64>()) {
        let kit = Kit::new();
        let mut rng = Kit::rng(seed);
        let a = kit.condition(&mut rng);
        let b = kit.condition(&mut rng);
        for e in universe() {
            for v in grid_valuations() {
                let (x, y) = (a.satisfied(&e, &v), b.satisfied(&e, &v));
                prop_assert_eq!(x, oracle(&a, &e, &v));
                prop_assert_eq!(Condition::and(a.clone(), b.clone()).satisfied(&e, &v), x && y);
                prop_assert_eq!(Condition::or(a.clone(), b.clone()).satisfied(&e, &v), x || y);
                prop_assert_eq!(Condition::not(a.clone()).satisfied(&e, &v), !x);
            }
        }
    }

    #[test]
    fn minterms_partition_the_grid(seed in any::<u64>(), n in 0usize..=5) {
        let kit = Kit::new();
        let mut rng = Kit::rng(seed);
        let conds: Vec<Condition> = (0..n).map(|_| kit.condition(&mut rng)).collect();
        let family = minterm_conditions(&conds);
        prop_assert!(family.len() <= 1 << n);
        if !conds.contains(&Condition::True) {
            prop_assert_eq!(family.len(), 1 << n);
        }
        for e in universe() {
            for v in grid_valuations() {
                prop_assert_eq!(family.iter().filter(|m| m.satisfied(&e, &v)).count(), 1);
            }
        }
    }
}
