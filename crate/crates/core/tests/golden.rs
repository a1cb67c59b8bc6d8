//! The main condition of `skip; x1 := 2` for `at(1) = 2`, against a golden
//! rendering and against the hand-derived formula.

use rlv_core::ast::ContractEnv;
use rlv_core::formula::{Formula, StateTerm, StateVar, Term};
use rlv_core::parser::{parse_assertion, parse_command};
use rlv_core::vcgen::{tc, tc_opt};

const GOLDEN: &str = include_str!("golden/tc_skip_then_assign.txt");

fn generated() -> Formula {
    let c = parse_command("skip; x1 := 2").unwrap();
    let post = parse_assertion("at(1) = 2", 1).unwrap();
    tc(&c, &StateVar::new("s0"), &ContractEnv::new(), &post).unwrap()
}

/// Orders the sides of every state equality, which is symmetric.
fn orient(f: &Formula) -> Formula {
    match f {
        Formula::StateEq(a, b) if a.to_string() > b.to_string() => Formula::StateEq(b.clone(), a.clone()),
        Formula::Not(a) => Formula::not(orient(a)),
        Formula::And(a, b) => Formula::and(orient(a), orient(b)),
        Formula::Or(a, b) => Formula::or(orient(a), orient(b)),
        Formula::Implies(a, b) => Formula::implies(orient(a), orient(b)),
        Formula::Quant(q, v, body) => Formula::Quant(*q, v.clone(), Box::new(orient(body))),
        other => other.clone(),
    }
}

#[test]
fn rendering_matches_golden_file() {
    assert_eq!(generated().to_string(), GOLDEN.trim_end());
}

#[test]
fn equals_hand_derived_formula_up_to_renaming() {
    // ∀σ′1. σ = σ′1 ⇒ (∀σ′2. σ′2 = σ′1[1/2] ⇒ σ′2(1) = 2)
    let (sigma, s1, s2) = (StateVar::new("σ"), StateVar::new("σ′1"), StateVar::new("σ′2"));
    let inner = Formula::forall_state(
        &s2,
        Formula::implies(
            Formula::state_eq(&s2, StateTerm::from(&s1).write(Term::lit(1), Term::lit(2))),
            Formula::eq(Term::read((&s2).into(), Term::lit(1)), Term::lit(2)),
        ),
    );
    let hand = Formula::forall_state(&s1, Formula::implies(Formula::state_eq(&sigma, &s1), inner));
    let hand = hand.map_state_names(&|n| if n == "σ" { "s0".into() } else { n.to_string() });
    assert_eq!(
        orient(&hand.alpha_normalize()),
        orient(&generated().alpha_normalize())
    );
}

#[test]
fn optimized_form_differs_but_reads_the_same_state() {
    let c = parse_command("skip; x1 := 2").unwrap();
    let post = parse_assertion("at(1) = 2", 1).unwrap();
    let f = tc_opt(&c, &StateVar::new("s0"), &ContractEnv::new(), &post).unwrap();
    let text = f.to_string();
    assert!(text.ends_with("(1) = 2"), "{text}");
    assert!(text.contains("[1/2]"), "{text}");
}
