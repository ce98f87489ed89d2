mod common;

use std::collections::BTreeSet;

use common::*;
use sra_core::algebra::{Condition, Event, Register};
use sra_core::automaton::{run_accepts, Label, Sra, SraBuilder, Transition};
use sra_core::compiler::*;
use sra_core::pattern::{accepts, Srem};

fn regs(names: &[&str]) -> BTreeSet<Register> {
    names.iter().map(|n| Register::new(n)).collect()
}

fn unary(kit: &Kit, i: usize) -> Condition {
    Condition::on_current(&kit.unary[i]).unwrap()
}

#[test]
fn base_fragments() {
    let kit = Kit::new();
    let a = compile(&Srem::cond(unary(&kit, 0))).unwrap();
    assert_eq!((a.num_states(), a.transitions().len()), (2, 1));
    assert_eq!(a.transitions()[0].label, Label::Cond(unary(&kit, 0)));
    assert!(a.transitions()[0].writes.is_empty());
    let e = compile(&Srem::Epsilon).unwrap();
    assert_eq!((e.num_states(), e.transitions().len()), (2, 1));
    assert!(e.transitions()[0].label.is_epsilon());
    assert!(matches!(compile(&Srem::window(Srem::Epsilon, 2)), Err(CompileError::WindowedInput)));
}

#[test]
fn epsilon_only_collapses_to_one_state() {
    let a = eliminate_epsilon(&compile(&Srem::Epsilon).unwrap());
    assert_eq!(a.num_states(), 1);
    assert!(a.transitions().is_empty());
    assert!(a.is_final(a.start()));
}

#[test]
fn pair_pattern_compiles_faithfully() {
    let pair = type_id_pattern(PAIR).expr;
    let s = sample_stream();
    for a in [compile(&pair).unwrap(), eliminate_epsilon(&compile(&pair).unwrap())] {
        assert_eq!(run_accepts(&a, &s[..4]), Ok(true));
        assert_eq!(run_accepts(&a, &s[..3]), Ok(false));
    }
}

#[test]
fn partition_bookkeeping() {
    let p = vec![regs(&["r1", "r3"]), regs(&["r2"]), regs(&["r4"]), regs(&[])];
    let (j, next) = partition_after_write(&p, &regs(&["r1", "r2", "r3"])).unwrap();
    assert_eq!(j, 0);
    assert_eq!(next, vec![regs(&["r1", "r2", "r3"]), regs(&[]), regs(&["r4"]), regs(&[])]);
    let (j, next) = partition_after_write(&p, &regs(&["r1", "r3"])).unwrap();
    assert_eq!((j, next), (0, p.clone()));
    let (j, next) = partition_after_write(&p, &regs(&["r4", "r2"])).unwrap();
    assert_eq!(j, 1);
    assert_eq!(next, vec![regs(&["r1", "r3"]), regs(&["r2", "r4"]), regs(&[]), regs(&[])]);
    assert_eq!(block_of(&p, &Register::new("r4")), Some(2));
    assert_eq!(block_of(&p, &Register::new("r9")), None);
}

#[test]
fn single_register_is_idempotent() {
    let kit = Kit::new();
    for seed in 0..100 {
        let mut rng = Kit::rng(300 + seed);
        let once = to_single_register(&eliminate_epsilon(&compile(&kit.expr(&mut rng, 4)).unwrap()));
        assert!(once.is_single_register());
        assert_eq!(to_single_register(&once), once);
    }
}

#[test]
fn intersection_of_two_filters() {
    let kit = Kit::new();
    let a = compile(&Srem::cond(unary(&kit, 0))).unwrap();
    let b = compile(&Srem::cond(unary(&kit, 2))).unwrap();
    let both = intersect(&a, &b, Renaming::Auto).unwrap();
    let got: Vec<bool> = sample_stream().iter().map(|t| run_accepts(&both, std::slice::from_ref(t)).unwrap()).collect();
    assert_eq!(got, vec![true, true, false, false, false, false]);
}

#[test]
fn union_and_star_edge_cases() {
    let kit = Kit::new();
    let a = compile(&Srem::cond(unary(&kit, 0))).unwrap();
    let none = compile(&Srem::Empty).unwrap();
    let u = union_of(&a, &none, Renaming::Auto).unwrap();
    for s in strings(&universe(), 2) {
        assert_eq!(run_accepts(&u, &s).unwrap(), run_accepts(&a, &s).unwrap());
    }
    assert_eq!(run_accepts(&star_of(&a), &[]), Ok(true));
    assert_eq!(run_accepts(&star_of(&none), &[]), Ok(true));
}

#[test]
fn colliding_registers_can_be_forbidden() {
    let w = Srem::write(Condition::True, Register::new("r1"));
    let a = compile(&w).unwrap();
    assert_eq!(concat_of(&a, &a, Renaming::Forbid).err(), Some(CompileError::RegisterCollision("r1".into())));
    let c = concat_of(&a, &a, Renaming::Auto).unwrap();
    assert_eq!(c.registers(), &regs(&["r1", "r1_1"]));
    assert_eq!(fresh_register(&Register::new("r1"), &regs(&["r1", "r1_1"])), Register::new("r1_2"));
}

#[test]
fn unrolled_states_follow_original_transitions() {
    let kit = Kit::new();
    for seed in 0..80 {
        let mut rng = Kit::rng(900 + seed);
        let w = 1 + seed as usize % 4;
        let body = kit.expr(&mut rng, 4);
        let (u, maps) = compile_windowed(&Srem::window(body.clone(), w)).unwrap();
        let orig = to_single_register(&eliminate_epsilon(&compile(&body).unwrap()));
        for t in u.transitions() {
            let (s, d) = (maps.copy_of_q[t.source], maps.copy_of_q[t.target]);
            assert!(orig.outgoing(s).any(|o| o.target == d), "{s}->{d} has no original");
        }
        assert!(u.is_acyclic());
        assert_eq!(maps.copy_of_q.len(), u.num_states());
        // Longest path in condition moves is at most w.
        let order = u.topological_order().unwrap();
        let mut longest = vec![0usize; u.num_states()];
        for q in order {
            for t in u.outgoing(q) {
                longest[t.target] = longest[t.target].max(longest[q] + 1);
            }
        }
        assert!(longest.iter().all(|&l| l <= w), "w={w}");
        for (copy, original) in &maps.copy_of_r {
            assert!(u.registers().contains(copy) && orig.registers().contains(original));
        }
    }
}

#[test]
fn short_windows_match_nothing() {
    let (u, _) = compile_windowed(&Srem::window(type_id_pattern(SPACED_PAIR).expr, 1)).unwrap();
    for s in strings(&sample_stream()[..4], 3) {
        assert_eq!(run_accepts(&u, &s), Ok(false));
    }
    assert!(matches!(compile_windowed(&Srem::Epsilon), Err(CompileError::NotWindowed)));
}

#[test]
fn complement_examples() {
    let spaced = Srem::window(type_id_pattern(SPACED_PAIR).expr, 3);
    let c = complement_expr(&spaced).unwrap();
    assert_eq!(run_accepts(&c, &[Event::typed("H", 1, 70)]), Ok(true));
    let s = sample_stream();
    assert_eq!(run_accepts(&c, &s[2..4]), Ok(true));
    assert_eq!(run_accepts(&c, &[s[0].clone(), s[3].clone()]), Ok(false));
    let cc = complete_and_complement(&c).unwrap();
    let three = [Event::typed("T", 1, 22), Event::typed("H", 1, 70), Event::typed("H", 2, 24)];
    for s in strings(&three, 4) {
        let inside = accepts(&spaced, &s);
        assert_ne!(run_accepts(&c, &s).unwrap(), inside, "{}", show(&s));
        assert_eq!(run_accepts(&cc, &s).unwrap(), inside, "{}", show(&s));
    }
    let nd = compile(&Srem::Epsilon).unwrap();
    assert_eq!(complete_and_complement(&nd).err(), Some(CompileError::NotDeterministic));
}

#[test]
fn back_translation_shapes() {
    let kit = Kit::new();
    let (a, b, c) = (unary(&kit, 0), unary(&kit, 1), unary(&kit, 2));
    let mut builder = SraBuilder::new();
    let q: Vec<usize> = (0..3).map(|_| builder.add_state()).collect();
    builder.set_final(q[2]);
    builder.add_transition(Transition::cond(q[0], q[1], a.clone()));
    builder.add_transition(Transition::cond(q[1], q[1], b.clone()));
    builder.add_transition(Transition::cond(q[1], q[2], c.clone()));
    let e = sra_to_srem(&builder.build(q[0]).unwrap());
    let mut has_loop = false;
    e.visit(&mut |x| has_loop |= *x == Srem::star(Srem::cond(b.clone())));
    assert!(has_loop, "{e}");
    let want = Srem::seq([Srem::cond(a), Srem::star(Srem::cond(b)), Srem::cond(c)]);
    for s in strings(&universe(), 4) {
        assert_eq!(accepts(&e, &s), accepts(&want, &s));
    }

    let mut builder = SraBuilder::new();
    builder.add_state();
    builder.add_state();
    builder.set_final(1);
    assert_eq!(sra_to_srem(&builder.build(0).unwrap()), Srem::Empty);
}

#[test]
fn stage_listing() {
    let spaced = Srem::window(type_id_pattern(SPACED_PAIR).expr, 3);
    let names: Vec<&str> = stages(&spaced, "complement").unwrap().iter().map(|s| s.name).collect();
    assert_eq!(names, ["sra", "epsilon-free", "single-register", "nsra-unrolled", "dsra", "complement"]);
    assert_eq!(stages(&spaced, "sra").unwrap().len(), 1);
    assert!(matches!(stages(&spaced, "bogus"), Err(CompileError::UnknownStage(_))));
    let pair = type_id_pattern(PAIR).expr;
    assert!(matches!(stages(&pair, "dsra"), Err(CompileError::NotWindowed)));
    let _: Vec<Sra> = stages(&pair, "sra").unwrap().into_iter().map(|s| s.automaton).collect();
}
