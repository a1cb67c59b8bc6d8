//! Big-step execution with a fuel bound, assertion evaluation on concrete
//! states, and the k-level call inliner.
//!
//! Fuel bounds the height of the derivation tree: every rule application
//! consumes one unit on the path from the root to the leaf it sits on, so a
//! loop that runs `n` times needs fuel of at least `n + 1`. Execution walks
//! the derivation with an explicit work stack, never recursing on the host
//! stack.

use std::borrow::Cow;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ast::{ArithExpr, ArithOp, BoolExpr, CmpOp, Command, LogicOp, ProcEnv};
use crate::formula::{Assertion, Formula, Quantifier, Sort, StateTerm, Term};
use crate::mem::{monus, MemState, Nat};

/// Quantifier range used by [`eval_assertion`] when none is given.
pub const DEFAULT_QUANT_BOUND: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Final(MemState),
    OutOfFuel,
}

impl Outcome {
    pub fn final_state(&self) -> Option<&MemState> {
        match self {
            Outcome::Final(s) => Some(s),
            Outcome::OutOfFuel => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("call to unknown procedure `{0}`")]
    UnknownProcedure(String),
}

pub fn eval_aexp(a: &ArithExpr, s: &MemState) -> Nat {
    match a {
        ArithExpr::Const(n) => n.clone(),
        ArithExpr::Loc(i) => s.get(&i.to_nat()),
        ArithExpr::Deref(i) => s.get(&s.get(&i.to_nat())),
        ArithExpr::AddrOf(i) => i.to_nat(),
        ArithExpr::BinOp(op, l, r) => arith(*op, &eval_aexp(l, s), &eval_aexp(r, s)),
    }
}

fn arith(op: ArithOp, l: &Nat, r: &Nat) -> Nat {
    match op {
        ArithOp::Add => l + r,
        ArithOp::Mul => l * r,
        ArithOp::Sub => monus(l, r),
    }
}

fn compare(op: CmpOp, l: &Nat, r: &Nat) -> bool {
    match op {
        CmpOp::Le => l <= r,
        CmpOp::Eq => l == r,
    }
}

pub fn eval_bexp(b: &BoolExpr, s: &MemState) -> bool {
    match b {
        BoolExpr::True => true,
        BoolExpr::False => false,
        BoolExpr::Cmp(op, l, r) => compare(*op, &eval_aexp(l, s), &eval_aexp(r, s)),
        BoolExpr::Logic(LogicOp::And, l, r) => eval_bexp(l, s) && eval_bexp(r, s),
        BoolExpr::Logic(LogicOp::Or, l, r) => eval_bexp(l, s) || eval_bexp(r, s),
        BoolExpr::Not(inner) => !eval_bexp(inner, s),
    }
}

/// Runs `c` from `init`. Assertions and loop invariants are ignored.
pub fn exec(
    c: &Command,
    init: &MemState,
    procs: &ProcEnv,
    fuel: u64,
) -> Result<Outcome, InterpError> {
    let mut state = init.clone();
    let mut work: Vec<(&Command, u64)> = vec![(c, fuel)];
    while let Some((cmd, fuel)) = work.pop() {
        if fuel == 0 {
            return Ok(Outcome::OutOfFuel);
        }
        let rest = fuel - 1;
        match cmd {
            Command::Skip | Command::Assert(_) => {}
            Command::Assign(i, a) => {
                let v = eval_aexp(a, &state);
                state.set(i.to_nat(), v);
            }
            Command::IndirectAssign(i, a) => {
                let v = eval_aexp(a, &state);
                let target = state.get(&i.to_nat());
                state.set(target, v);
            }
            Command::Seq(first, second) => {
                work.push((second, rest));
                work.push((first, rest));
            }
            Command::If(b, then, otherwise) => {
                let branch = if eval_bexp(b, &state) { then } else { otherwise };
                work.push((branch, rest));
            }
            Command::While(b, _, body) => {
                if eval_bexp(b, &state) {
                    work.push((cmd, rest));
                    work.push((body, rest));
                }
            }
            Command::Call(y) => {
                let body = procs
                    .get(y)
                    .ok_or_else(|| InterpError::UnknownProcedure(y.clone()))?;
                work.push((body, rest));
            }
        }
    }
    Ok(Outcome::Final(state))
}

/// Replaces each call by the callee's body, `k` levels deep; calls below
/// that depth become the divergent loop. The result contains no calls.
pub fn inline_k(c: &Command, k: usize, procs: &ProcEnv) -> Result<Command, InterpError> {
    Ok(match c {
        Command::Call(y) => {
            let body = procs
                .get(y)
                .ok_or_else(|| InterpError::UnknownProcedure(y.clone()))?;
            if k == 0 {
                Command::diverge()
            } else {
                inline_k(body, k - 1, procs)?
            }
        }
        Command::Seq(a, b) => Command::seq(inline_k(a, k, procs)?, inline_k(b, k, procs)?),
        Command::If(b, t, e) => {
            Command::if_then_else(b.clone(), inline_k(t, k, procs)?, inline_k(e, k, procs)?)
        }
        Command::While(b, inv, body) => {
            Command::while_loop(b.clone(), inv.clone(), inline_k(body, k, procs)?)
        }
        other => other.clone(),
    })
}

/// Result of evaluating an assertion. Quantified assertions are checked
/// only over a bounded range and are tagged `Approx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    Exact(bool),
    Approx(bool),
}

impl Truth {
    pub fn holds(self) -> bool {
        match self {
            Truth::Exact(b) | Truth::Approx(b) => b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("assertion of arity {expected} evaluated on {found} state(s)")]
    Arity { expected: usize, found: usize },
    #[error("state parameter ${0} is out of range")]
    Param(usize),
    #[error("free variable `{0}`")]
    FreeVariable(String),
    #[error("quantification over states cannot be evaluated")]
    StateQuantifier,
}

/// Evaluates `p` on concrete states; natural quantifiers range over
/// `0..=bound`.
pub fn eval_assertion(p: &Assertion, states: &[MemState], bound: u64) -> Result<Truth, EvalError> {
    if states.len() != p.arity {
        return Err(EvalError::Arity {
            expected: p.arity,
            found: states.len(),
        });
    }
    let mut ev = Evaluator {
        states,
        env: Vec::new(),
        bound: Nat::from(bound),
    };
    let value = ev.formula(&p.body)?;
    Ok(if p.is_quantifier_free() {
        Truth::Exact(value)
    } else {
        Truth::Approx(value)
    })
}

struct Evaluator<'a> {
    states: &'a [MemState],
    env: Vec<(String, Nat)>,
    bound: Nat,
}

impl Evaluator<'_> {
    fn formula(&mut self, f: &Formula) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Cmp(op, l, r) => compare(*op, &self.term(l)?, &self.term(r)?),
            Formula::StateEq(l, r) => self.state(l)? == self.state(r)?,
            Formula::Not(a) => !self.formula(a)?,
            Formula::And(a, b) => self.formula(a)? && self.formula(b)?,
            Formula::Or(a, b) => self.formula(a)? || self.formula(b)?,
            Formula::Implies(a, b) => !self.formula(a)? || self.formula(b)?,
            Formula::Quant(q, binder, body) => {
                if binder.sort == Sort::State {
                    return Err(EvalError::StateQuantifier);
                }
                let want = *q == Quantifier::Exists;
                let mut v = Nat::zero();
                let mut found = false;
                while v <= self.bound {
                    self.env.push((binder.name.clone(), v.clone()));
                    let r = self.formula(body);
                    self.env.pop();
                    if r? == want {
                        found = true;
                        break;
                    }
                    v += Nat::one();
                }
                // ∃: true iff a witness was found; ∀: true iff no counterexample.
                found == want
            }
        })
    }

    fn term(&self, t: &Term) -> Result<Nat, EvalError> {
        Ok(match t {
            Term::Lit(n) => n.clone(),
            Term::Var(v) => self
                .env
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|(_, n)| n.clone())
                .ok_or_else(|| EvalError::FreeVariable(v.clone()))?,
            Term::Read(s, a) => {
                let addr = self.term(a)?;
                self.state(s)?.get(&addr)
            }
            Term::Bin(op, l, r) => arith(*op, &self.term(l)?, &self.term(r)?),
        })
    }

    fn state(&self, s: &StateTerm) -> Result<Cow<'_, MemState>, EvalError> {
        Ok(match s {
            StateTerm::Param(k) => Cow::Borrowed(
                k.checked_sub(1)
                    .and_then(|i| self.states.get(i))
                    .ok_or(EvalError::Param(*k))?,
            ),
            StateTerm::Var(v) => return Err(EvalError::FreeVariable(v.0.clone())),
            StateTerm::Write(base, a, v) => {
                let mut st = self.state(base)?.into_owned();
                st.set(self.term(a)?, self.term(v)?);
                Cow::Owned(st)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Addr;
    use crate::parser::{parse_assertion, parse_command, parse_module};

    fn state(pairs: &[(u64, u64)]) -> MemState {
        pairs.iter().copied().collect()
    }

    fn run(src: &str, init: &MemState, fuel: u64) -> Outcome {
        exec(&parse_command(src).unwrap(), init, &ProcEnv::new(), fuel).unwrap()
    }

    #[test]
    fn arithmetic_evaluation() {
        let s = state(&[(1, 10), (10, 7), (2, 2), (3, 5)]);
        assert_eq!(eval_aexp(&ArithExpr::constant(5), &s), Nat::from(5u32));
        assert_eq!(eval_aexp(&ArithExpr::Deref(Addr(1)), &s), Nat::from(7u32));
        let sub = ArithExpr::bin(ArithOp::Sub, ArithExpr::Loc(Addr(2)), ArithExpr::Loc(Addr(3)));
        assert_eq!(eval_aexp(&sub, &s), Nat::zero());
        assert_eq!(eval_aexp(&ArithExpr::AddrOf(Addr(7)), &s), Nat::from(7u32));
    }

    #[test]
    fn boolean_evaluation() {
        let s = state(&[(1, 3), (2, 3)]);
        assert!(eval_bexp(&BoolExpr::True, &s));
        let le = BoolExpr::cmp(CmpOp::Le, ArithExpr::Loc(Addr(1)), ArithExpr::Loc(Addr(2)));
        assert!(eval_bexp(&le, &s));
        let ne = BoolExpr::negate(BoolExpr::cmp(
            CmpOp::Eq,
            ArithExpr::Loc(Addr(1)),
            ArithExpr::constant(0),
        ));
        assert!(!eval_bexp(&ne, &MemState::new()));
    }

    #[test]
    fn swap_through_temporary() {
        let init = state(&[(1, 10), (2, 20), (10, 5), (20, 7)]);
        let out = run("x3 := *x1; *x1 := *x2; *x2 := x3", &init, 100);
        assert_eq!(
            out,
            Outcome::Final(state(&[(1, 10), (2, 20), (3, 5), (10, 7), (20, 5)]))
        );
    }

    #[test]
    fn swap_by_arithmetic() {
        let init = state(&[(1, 10), (2, 20), (10, 5), (20, 7)]);
        let out = run("*x1 := *x1 + *x2; *x2 := *x1 - *x2; *x1 := *x1 - *x2", &init, 100);
        assert_eq!(out, Outcome::Final(state(&[(1, 10), (2, 20), (10, 7), (20, 5)])));
    }

    #[test]
    fn divergent_loop_runs_out_of_fuel() {
        assert_eq!(run("while (true) inv (true) { skip }", &MemState::new(), 50), Outcome::OutOfFuel);
    }

    #[test]
    fn fuel_is_derivation_height() {
        // Leaves need one unit; a sequence adds one level above them.
        assert_eq!(run("skip", &MemState::new(), 0), Outcome::OutOfFuel);
        assert_eq!(run("skip", &MemState::new(), 1), Outcome::Final(MemState::new()));
        assert_eq!(run("skip; skip", &MemState::new(), 1), Outcome::OutOfFuel);
        assert_eq!(run("skip; skip", &MemState::new(), 2), Outcome::Final(MemState::new()));
        // Three iterations: three nested loop unfoldings plus the exit.
        let count = "while (x1 < 3) inv (true) { x1 := x1 + 1 }";
        assert_eq!(run(count, &MemState::new(), 3), Outcome::OutOfFuel);
        assert_eq!(run(count, &MemState::new(), 4), Outcome::Final(state(&[(1, 3)])));
    }

    #[test]
    fn assert_behaves_as_skip() {
        let s = state(&[(4, 4)]);
        assert_eq!(run("assert(false)", &s, 1), Outcome::Final(s.clone()));
    }

    #[test]
    fn deep_loops_do_not_overflow_the_stack() {
        let out = run("while (x1 < 200000) inv (true) { x1 := x1 + 1 }", &MemState::new(), 1_000_000);
        assert_eq!(out, Outcome::Final(state(&[(1, 200000)])));
    }

    const MULT: &str = r#"
        proc y1
          pre (at(2) = at(3) * (at(4) - at(1)) && 0 <= at(1) && at(1) <= at(4))
          post (at(2) = at(3) * at(4))
        { if (x1 > 0) { x2 := x2 + x3; x1 := x1 - 1; call y1 } else { skip } }
        command c_rec { x1 := x4; x2 := 0; call y1 }
    "#;

    #[test]
    fn recursive_multiplication() {
        let m = parse_module(MULT).unwrap();
        let out = exec(&m.commands["c_rec"], &state(&[(3, 3), (4, 2)]), &m.procs, 1000).unwrap();
        assert_eq!(out.final_state().unwrap().get_u64(2), Nat::from(6u32));
    }

    #[test]
    fn unknown_procedure_is_an_error() {
        let c = Command::Call("nope".into());
        assert_eq!(
            exec(&c, &MemState::new(), &ProcEnv::new(), 10),
            Err(InterpError::UnknownProcedure("nope".into()))
        );
    }

    #[test]
    fn inliner_cases() {
        let m = parse_module(MULT).unwrap();
        assert_eq!(
            inline_k(&Command::Call("y1".into()), 0, &m.procs).unwrap(),
            Command::diverge()
        );
        assert_eq!(inline_k(&Command::Skip, 3, &m.procs).unwrap(), Command::Skip);
        let inlined = inline_k(&m.commands["c_rec"], 5, &m.procs).unwrap();
        assert!(inlined.called_procs().is_empty());
        let init = state(&[(3, 3), (4, 2)]);
        let direct = exec(&m.commands["c_rec"], &init, &m.procs, 1000).unwrap();
        let via_inline = exec(&inlined, &init, &ProcEnv::new(), 1000).unwrap();
        assert_eq!(direct, via_inline);
    }

    #[test]
    fn assertion_evaluation() {
        let p = parse_assertion("at(3) = 2", 1).unwrap();
        assert_eq!(eval_assertion(&p, &[state(&[(3, 2)])], 64), Ok(Truth::Exact(true)));

        let fig7 = parse_assertion(
            "at(1, at(1, 1)) = at(2, at(2, 1)) && at(1, at(1, 2)) = at(2, at(2, 2)) \
             && at(1, 1) != at(1, 2) && at(2, 1) != at(2, 2) \
             && at(1, 1) > 3 && at(1, 2) > 3 && at(2, 1) > 2 && at(2, 2) > 2",
            2,
        )
        .unwrap();
        let s1 = state(&[(1, 10), (2, 20), (10, 5), (20, 7)]);
        let s2 = state(&[(1, 8), (2, 9), (8, 5), (9, 7)]);
        assert_eq!(eval_assertion(&fig7, &[s1, s2], 64), Ok(Truth::Exact(true)));

        let q = parse_assertion("forall v. 0 <= v", 0).unwrap();
        assert_eq!(eval_assertion(&q, &[], 10), Ok(Truth::Approx(true)));
        let e = parse_assertion("exists v. v = 11", 0).unwrap();
        assert_eq!(eval_assertion(&e, &[], 10), Ok(Truth::Approx(false)));
        assert_eq!(eval_assertion(&e, &[], 11), Ok(Truth::Approx(true)));
    }

    #[test]
    fn assertion_arity_is_checked() {
        let p = Assertion::truth(2);
        assert_eq!(
            eval_assertion(&p, &[MemState::new()], 1),
            Err(EvalError::Arity { expected: 2, found: 1 })
        );
    }
}
