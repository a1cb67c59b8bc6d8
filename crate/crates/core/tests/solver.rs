//! End-to-end solver runs; these need `z3` (or `RLV_SOLVER`) on the path.

use std::time::Duration;

use rlv_core::ast::{ContractEnv, ProcEnv};
use rlv_core::formula::{Formula, StateVar};
use rlv_core::interp::exec;
use rlv_core::mem::MemState;
use rlv_core::parser::{parse_assertion, parse_command};
use rlv_core::smt::{closed_vc, solve, SolverConfig, UnknownReason, Verdict};
use rlv_core::vcgen::{hoare_vcs, tc, VcMode};

fn cfg() -> SolverConfig {
    SolverConfig::from_env()
}

fn hoare(pre: &str, c: &str, post: &str) -> Vec<rlv_core::vcgen::Vc> {
    hoare_vcs(
        "g",
        &parse_assertion(pre, 1).unwrap(),
        &parse_command(c).unwrap(),
        &parse_assertion(post, 1).unwrap(),
        &ContractEnv::new(),
        &ProcEnv::new(),
        VcMode::Naive,
    )
    .unwrap()
}

#[test]
fn trivial_vc_is_valid() {
    let vc = closed_vc("t", &[StateVar::new("s0")], Formula::True);
    assert_eq!(solve(&vc, &cfg()), Verdict::Valid);
}

#[test]
fn skip_then_assign_is_valid() {
    let c = parse_command("skip; x1 := 2").unwrap();
    let s0 = StateVar::new("s0");
    let f = tc(&c, &s0, &ContractEnv::new(), &parse_assertion("at(1) = 2", 1).unwrap()).unwrap();
    assert_eq!(solve(&closed_vc("ex", &[s0], f), &cfg()), Verdict::Valid);
}

#[test]
fn falsified_triple_yields_a_model() {
    let vcs = hoare("true", "x1 := 1", "at(1) = 2");
    let main = vcs.iter().find(|v| v.name == "g.tc.0").unwrap();
    match solve(main, &cfg()) {
        Verdict::Invalid(model) => {
            // Every state falsifies the triple; only the initial one is bound.
            assert_eq!(model.states.keys().collect::<Vec<_>>(), ["s0"]);
        }
        other => panic!("expected a countermodel, got {other:?}"),
    }
}

#[test]
fn countermodel_respects_precondition() {
    let vcs = hoare("at(2) = 7 && at(7) = 3", "x1 := *x2", "at(1) = 4");
    let main = vcs.iter().find(|v| v.name == "g.tc.0").unwrap();
    let Verdict::Invalid(model) = solve(main, &cfg()) else {
        panic!("expected a countermodel");
    };
    let s0 = model.state(&StateVar::new("s0"));
    assert_eq!(s0.get_u64(2), 7u32.into());
    assert_eq!(s0.get_u64(7), 3u32.into());
    let out = exec(&parse_command("x1 := *x2").unwrap(), &s0, &ProcEnv::new(), 10).unwrap();
    let expected: MemState = s0.update(1u32.into(), 3u32.into());
    assert_eq!(out.final_state(), Some(&expected));
}

#[test]
fn hard_nonlinear_vc_times_out() {
    // No positive cubes sum to a cube, which is far beyond nonlinear
    // arithmetic decision procedures.
    let vcs = hoare(
        "at(1) > 0 && at(2) > 0",
        "skip",
        "at(1) * at(1) * at(1) + at(2) * at(2) * at(2) != at(3) * at(3) * at(3)",
    );
    let main = vcs.iter().find(|v| v.name == "g.tc.0").unwrap();
    let cfg = cfg().with_timeout(Duration::from_secs(1));
    let start = std::time::Instant::now();
    let verdict = solve(main, &cfg);
    assert!(start.elapsed() < Duration::from_secs(5));
    assert_eq!(verdict, Verdict::Unknown(UnknownReason::Timeout));
}

#[test]
fn missing_solver_is_reported() {
    let cfg = SolverConfig {
        path: "/nonexistent/solver".into(),
        ..SolverConfig::default()
    };
    let vc = closed_vc("t", &[StateVar::new("s0")], Formula::True);
    assert!(matches!(solve(&vc, &cfg), Verdict::Unknown(UnknownReason::Spawn(_))));
}

#[test]
fn emission_is_deterministic() {
    let a = hoare("at(1) != at(2)", "x3 := *x1; *x1 := *x2; *x2 := x3", "true");
    let b = hoare("at(1) != at(2)", "x3 := *x1; *x1 := *x2; *x2 := x3", "true");
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(rlv_core::smt::emit_smt(x).unwrap(), rlv_core::smt::emit_smt(y).unwrap());
    }
}
