//! SMT-LIB 2 serialization of verification conditions.
//!
//! Naturals become `Int`s constrained to be nonnegative where they are
//! bound; states become `(Array Int Int)` whose every cell is nonnegative.
//! The leading universal quantifiers of a VC are turned into declared
//! constants and the remaining body is asserted negated, so `unsat` means
//! the VC is valid and a model of a `sat` answer is a counterexample.

use std::fmt::Write;

use thiserror::Error;

use crate::ast::{ArithOp, CmpOp};
use crate::formula::{Binder, Formula, Quantifier, Sort, StateTerm, Term};
use crate::vcgen::Vc;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("{0} is not bound in the verification condition")]
    Unscoped(String),
}

pub const PRELUDE: &str = "(set-option :produce-models true)\n\
(set-logic ALL)\n\
(define-fun monus ((a Int) (b Int)) Int (ite (<= b a) (- a b) 0))\n";

/// SMT symbol for a state variable.
pub fn state_symbol(name: &str) -> String {
    format!("st_{}", name.replace('\'', "!"))
}

/// SMT symbol for a natural variable.
pub fn nat_symbol(name: &str) -> String {
    format!("n_{}", name.replace('\'', "!"))
}

/// The script checking `vc`, ending with `(check-sat)`.
pub fn emit_smt(vc: &Vc) -> Result<String, EmitError> {
    emit_formula(&vc.name, &vc.formula)
}

/// The script checking validity of the closed formula `f`.
pub fn emit_formula(name: &str, f: &Formula) -> Result<String, EmitError> {
    let mut out = String::from(PRELUDE);
    let _ = writeln!(out, "; {name}");
    let mut scope: Vec<Binder> = Vec::new();
    let mut body = f;
    while let Formula::Quant(Quantifier::Forall, binder, inner) = body {
        match binder.sort {
            Sort::State => {
                let sym = state_symbol(&binder.name);
                let _ = writeln!(out, "(declare-const {sym} (Array Int Int))");
                let _ = writeln!(out, "(assert {})", nonneg_array(&sym));
            }
            Sort::Nat => {
                let sym = nat_symbol(&binder.name);
                let _ = writeln!(out, "(declare-const {sym} Int)");
                let _ = writeln!(out, "(assert (>= {sym} 0))");
            }
        }
        scope.push(binder.clone());
        body = inner;
    }
    let mut e = Emitter { scope, out: String::new() };
    e.formula(body)?;
    let _ = writeln!(out, "(assert (not {}))", e.out);
    out.push_str("(check-sat)\n");
    Ok(out)
}

fn nonneg_array(sym: &str) -> String {
    format!("(forall ((i Int)) (>= (select {sym} i) 0))")
}

struct Emitter {
    scope: Vec<Binder>,
    out: String,
}

impl Emitter {
    fn bound(&self, name: &str, sort: Sort) -> bool {
        self.scope.iter().any(|b| b.name == name && b.sort == sort)
    }

    fn formula(&mut self, f: &Formula) -> Result<(), EmitError> {
        match f {
            Formula::True => self.out.push_str("true"),
            Formula::False => self.out.push_str("false"),
            Formula::Cmp(op, a, b) => {
                self.out.push_str(match op {
                    CmpOp::Le => "(<= ",
                    CmpOp::Eq => "(= ",
                });
                self.term(a)?;
                self.out.push(' ');
                self.term(b)?;
                self.out.push(')');
            }
            Formula::StateEq(a, b) => {
                self.out.push_str("(= ");
                self.state(a)?;
                self.out.push(' ');
                self.state(b)?;
                self.out.push(')');
            }
            Formula::Not(a) => {
                self.out.push_str("(not ");
                self.formula(a)?;
                self.out.push(')');
            }
            Formula::And(a, b) => self.binary("and", a, b)?,
            Formula::Or(a, b) => self.binary("or", a, b)?,
            Formula::Implies(a, b) => self.binary("=>", a, b)?,
            Formula::Quant(q, binder, body) => {
                let (sym, sort, guard) = match binder.sort {
                    Sort::State => {
                        let sym = state_symbol(&binder.name);
                        let guard = nonneg_array(&sym);
                        (sym, "(Array Int Int)", guard)
                    }
                    Sort::Nat => {
                        let sym = nat_symbol(&binder.name);
                        let guard = format!("(>= {sym} 0)");
                        (sym, "Int", guard)
                    }
                };
                let (kw, conn) = match q {
                    Quantifier::Forall => ("forall", "=>"),
                    Quantifier::Exists => ("exists", "and"),
                };
                let _ = write!(self.out, "({kw} (({sym} {sort})) ({conn} {guard} ");
                self.scope.push(binder.clone());
                let r = self.formula(body);
                self.scope.pop();
                r?;
                self.out.push_str("))");
            }
        }
        Ok(())
    }

    fn binary(&mut self, op: &str, a: &Formula, b: &Formula) -> Result<(), EmitError> {
        let _ = write!(self.out, "({op} ");
        self.formula(a)?;
        self.out.push(' ');
        self.formula(b)?;
        self.out.push(')');
        Ok(())
    }

    fn term(&mut self, t: &Term) -> Result<(), EmitError> {
        match t {
            Term::Lit(n) => {
                let _ = write!(self.out, "{n}");
            }
            Term::Var(v) => {
                if !self.bound(v, Sort::Nat) {
                    return Err(EmitError::Unscoped(format!("variable {v}")));
                }
                self.out.push_str(&nat_symbol(v));
            }
            Term::Read(s, a) => {
                self.out.push_str("(select ");
                self.state(s)?;
                self.out.push(' ');
                self.term(a)?;
                self.out.push(')');
            }
            Term::Bin(op, a, b) => {
                self.out.push_str(match op {
                    ArithOp::Add => "(+ ",
                    ArithOp::Mul => "(* ",
                    ArithOp::Sub => "(monus ",
                });
                self.term(a)?;
                self.out.push(' ');
                self.term(b)?;
                self.out.push(')');
            }
        }
        Ok(())
    }

    fn state(&mut self, s: &StateTerm) -> Result<(), EmitError> {
        match s {
            StateTerm::Param(k) => return Err(EmitError::Unscoped(format!("state parameter ${k}"))),
            StateTerm::Var(v) => {
                if !self.bound(v.name(), Sort::State) {
                    return Err(EmitError::Unscoped(format!("state variable {v}")));
                }
                self.out.push_str(&state_symbol(v.name()));
            }
            StateTerm::Write(base, a, v) => {
                self.out.push_str("(store ");
                self.state(base)?;
                self.out.push(' ');
                self.term(a)?;
                self.out.push(' ');
                self.term(v)?;
                self.out.push(')');
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::ContractEnv;
    use crate::formula::StateVar;
    use crate::parser::{parse_assertion, parse_command};
    use crate::vcgen::tc;

    #[test]
    fn trivial_vc() {
        let f = Formula::forall_state(&StateVar::new("s0"), Formula::True);
        let script = emit_formula("t", &f).unwrap();
        assert_eq!(
            script,
            format!(
                "{PRELUDE}; t\n(declare-const st_s0 (Array Int Int))\n\
                 (assert (forall ((i Int)) (>= (select st_s0 i) 0)))\n\
                 (assert (not true))\n(check-sat)\n"
            )
        );
    }

    #[test]
    fn nested_states_get_guards() {
        let c = parse_command("skip; x1 := 2").unwrap();
        let s0 = StateVar::new("s0");
        let body = tc(&c, &s0, &ContractEnv::new(), &parse_assertion("at(1) = 2", 1).unwrap()).unwrap();
        let script = emit_formula("ex", &Formula::forall_state(&s0, body)).unwrap();
        // The leading ∀s1 is hoisted too; ∀s2 sits under an implication.
        assert!(script.contains("(declare-const st_s1 (Array Int Int))"), "{script}");
        assert!(script.contains(
            "(assert (not (=> (= st_s1 st_s0) (forall ((st_s2 (Array Int Int))) \
             (=> (forall ((i Int)) (>= (select st_s2 i) 0))"
        ), "{script}");
        assert!(script.contains("(= st_s2 (store st_s1 1 2))"));
    }

    #[test]
    fn natural_binders_are_guarded() {
        let a = parse_assertion("forall v. exists w. v - w = 0", 0).unwrap();
        let script = emit_formula("q", &a.body).unwrap();
        assert!(script.contains("(declare-const n_v Int)\n(assert (>= n_v 0))"));
        assert!(script.contains("(exists ((n_w Int)) (and (>= n_w 0) (= (monus n_v n_w) 0)))"));
    }

    #[test]
    fn unscoped_variables_are_rejected() {
        let f = Formula::eq(Term::read(StateTerm::var("s9"), Term::lit(1)), Term::lit(0));
        assert_eq!(
            emit_formula("u", &f),
            Err(EmitError::Unscoped("state variable s9".into()))
        );
    }
}
