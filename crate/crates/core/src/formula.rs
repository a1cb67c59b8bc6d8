//! First-order formulas over two sorts: naturals and memory states.
//!
//! Program assertions and verification conditions share this language. An
//! [`Assertion`] of arity `n` is a formula whose state parameters
//! `$1 .. $n` stand for the states it is applied to; applying it substitutes
//! state terms for those parameters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ast::{ArithExpr, ArithOp, BoolExpr, CmpOp, LogicOp};
use crate::mem::Nat;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateVar(pub String);

impl StateVar {
    pub fn new(name: impl Into<String>) -> Self {
        StateVar(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Natural-sorted terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Lit(Nat),
    Var(String),
    /// `s(a)`
    Read(Box<StateTerm>, Box<Term>),
    /// `Sub` is truncated subtraction.
    Bin(ArithOp, Box<Term>, Box<Term>),
}

/// State-sorted terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StateTerm {
    /// The k-th (1-based) state an assertion is applied to.
    Param(usize),
    Var(StateVar),
    /// `s[a/v]`: `s` with address `a` bound to `v`.
    Write(Box<StateTerm>, Box<Term>, Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Nat,
    State,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binder {
    pub name: String,
    pub sort: Sort,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Cmp(CmpOp, Term, Term),
    StateEq(StateTerm, StateTerm),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant(Quantifier, Binder, Box<Formula>),
}

impl Term {
    pub fn lit(n: u64) -> Self {
        Term::Lit(Nat::from(n))
    }

    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn read(state: StateTerm, addr: Term) -> Self {
        Term::Read(Box::new(state), Box::new(addr))
    }

    pub fn bin(op: ArithOp, lhs: Term, rhs: Term) -> Self {
        Term::Bin(op, Box::new(lhs), Box::new(rhs))
    }

    /// Value of program expression `a` evaluated in state `s`.
    pub fn from_arith(a: &ArithExpr, s: &StateTerm) -> Term {
        match a {
            ArithExpr::Const(n) => Term::Lit(n.clone()),
            ArithExpr::Loc(i) => Term::read(s.clone(), Term::Lit(i.to_nat())),
            ArithExpr::Deref(i) => Term::read(
                s.clone(),
                Term::read(s.clone(), Term::Lit(i.to_nat())),
            ),
            ArithExpr::AddrOf(i) => Term::Lit(i.to_nat()),
            ArithExpr::BinOp(op, l, r) => {
                Term::bin(*op, Term::from_arith(l, s), Term::from_arith(r, s))
            }
        }
    }
}

impl StateTerm {
    pub fn var(name: impl Into<String>) -> Self {
        StateTerm::Var(StateVar::new(name))
    }

    pub fn write(self, addr: Term, value: Term) -> Self {
        StateTerm::Write(Box::new(self), Box::new(addr), Box::new(value))
    }
}

impl From<StateVar> for StateTerm {
    fn from(v: StateVar) -> Self {
        StateTerm::Var(v)
    }
}

impl From<&StateVar> for StateTerm {
    fn from(v: &StateVar) -> Self {
        StateTerm::Var(v.clone())
    }
}

impl Formula {
    pub fn cmp(op: CmpOp, lhs: Term, rhs: Term) -> Self {
        Formula::Cmp(op, lhs, rhs)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Cmp(CmpOp::Eq, lhs, rhs)
    }

    pub fn le(lhs: Term, rhs: Term) -> Self {
        Formula::Cmp(CmpOp::Le, lhs, rhs)
    }

    pub fn state_eq(lhs: impl Into<StateTerm>, rhs: impl Into<StateTerm>) -> Self {
        Formula::StateEq(lhs.into(), rhs.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn forall_state(v: &StateVar, body: Formula) -> Self {
        Formula::Quant(
            Quantifier::Forall,
            Binder {
                name: v.0.clone(),
                sort: Sort::State,
            },
            Box::new(body),
        )
    }

    /// `∀ v_1 ... v_k. body`, outermost binder first.
    pub fn forall_states(vars: &[StateVar], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall_state(v, acc))
    }

    pub fn forall_nat(name: impl Into<String>, body: Formula) -> Self {
        Formula::Quant(
            Quantifier::Forall,
            Binder {
                name: name.into(),
                sort: Sort::Nat,
            },
            Box::new(body),
        )
    }

    pub fn exists_nat(name: impl Into<String>, body: Formula) -> Self {
        Formula::Quant(
            Quantifier::Exists,
            Binder {
                name: name.into(),
                sort: Sort::Nat,
            },
            Box::new(body),
        )
    }

    /// Right-nested conjunction; `True` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Formula::True;
        };
        while let Some(p) = parts.pop() {
            acc = Formula::and(p, acc);
        }
        acc
    }

    /// Truth of program condition `b` in state `s`.
    pub fn from_bool(b: &BoolExpr, s: &StateTerm) -> Formula {
        match b {
            BoolExpr::True => Formula::True,
            BoolExpr::False => Formula::False,
            BoolExpr::Cmp(op, l, r) => {
                Formula::cmp(*op, Term::from_arith(l, s), Term::from_arith(r, s))
            }
            BoolExpr::Logic(LogicOp::And, l, r) => {
                Formula::and(Formula::from_bool(l, s), Formula::from_bool(r, s))
            }
            BoolExpr::Logic(LogicOp::Or, l, r) => {
                Formula::or(Formula::from_bool(l, s), Formula::from_bool(r, s))
            }
            BoolExpr::Not(inner) => Formula::not(Formula::from_bool(inner, s)),
        }
    }

    /// Top-level conjuncts, flattening nested `∧` nodes left to right.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Quant(..) => false,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            _ => true,
        }
    }

    /// Total number of formula, term and state-term nodes.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Cmp(_, a, b) => 1 + a.node_count() + b.node_count(),
            Formula::StateEq(a, b) => 1 + a.node_count() + b.node_count(),
            Formula::Not(a) => 1 + a.node_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.node_count() + b.node_count()
            }
            Formula::Quant(_, _, body) => 1 + body.node_count(),
        }
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        self.collect_free(&mut Vec::new(), &mut fv);
        fv
    }

    fn collect_free(&self, bound: &mut Vec<Binder>, fv: &mut FreeVars) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Cmp(_, a, b) => {
                a.collect_free(bound, fv);
                b.collect_free(bound, fv);
            }
            Formula::StateEq(a, b) => {
                a.collect_free(bound, fv);
                b.collect_free(bound, fv);
            }
            Formula::Not(a) => a.collect_free(bound, fv),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, fv);
                b.collect_free(bound, fv);
            }
            Formula::Quant(_, binder, body) => {
                bound.push(binder.clone());
                body.collect_free(bound, fv);
                bound.pop();
            }
        }
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn substitute(&self, subst: &Substitution) -> Formula {
        if subst.is_empty() {
            return self.clone();
        }
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Cmp(op, a, b) => Formula::Cmp(*op, a.substitute(subst), b.substitute(subst)),
            Formula::StateEq(a, b) => Formula::StateEq(a.substitute(subst), b.substitute(subst)),
            Formula::Not(a) => Formula::not(a.substitute(subst)),
            Formula::And(a, b) => Formula::and(a.substitute(subst), b.substitute(subst)),
            Formula::Or(a, b) => Formula::or(a.substitute(subst), b.substitute(subst)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(subst), b.substitute(subst)),
            Formula::Quant(q, binder, body) => {
                let inner = subst.without(binder);
                let captured = match binder.sort {
                    Sort::Nat => inner.range_nat_vars.contains(&binder.name),
                    Sort::State => inner.range_state_vars.contains(&binder.name),
                };
                if !captured {
                    return Formula::Quant(*q, binder.clone(), Box::new(body.substitute(&inner)));
                }
                let mut avoid: BTreeSet<String> = BTreeSet::new();
                let fv = body.free_vars();
                avoid.extend(fv.nats.iter().cloned());
                avoid.extend(fv.states.iter().map(|s| s.0.clone()));
                avoid.extend(inner.range_nat_vars.iter().cloned());
                avoid.extend(inner.range_state_vars.iter().cloned());
                let mut fresh = format!("{}'", binder.name);
                while avoid.contains(&fresh) {
                    fresh.push('\'');
                }
                let rename = match binder.sort {
                    Sort::Nat => Substitution::default().nat(&binder.name, Term::Var(fresh.clone())),
                    Sort::State => {
                        Substitution::default().state(&binder.name, StateTerm::var(fresh.clone()))
                    }
                };
                let renamed = body.substitute(&rename);
                Formula::Quant(
                    *q,
                    Binder {
                        name: fresh,
                        sort: binder.sort,
                    },
                    Box::new(renamed.substitute(&inner)),
                )
            }
        }
    }

    /// Renames every bound variable to `%k`, numbering binders in preorder.
    /// Alpha-equivalent formulas normalize to identical trees.
    pub fn alpha_normalize(&self) -> Formula {
        let mut counter = 0usize;
        self.alpha_go(&mut counter)
    }

    fn alpha_go(&self, counter: &mut usize) -> Formula {
        match self {
            Formula::Quant(q, binder, body) => {
                let fresh = format!("%{}", *counter);
                *counter += 1;
                let rename = match binder.sort {
                    Sort::Nat => Substitution::default().nat(&binder.name, Term::Var(fresh.clone())),
                    Sort::State => {
                        Substitution::default().state(&binder.name, StateTerm::var(fresh.clone()))
                    }
                };
                let body = body.substitute(&rename).alpha_go(counter);
                Formula::Quant(
                    *q,
                    Binder {
                        name: fresh,
                        sort: binder.sort,
                    },
                    Box::new(body),
                )
            }
            Formula::Not(a) => Formula::not(a.alpha_go(counter)),
            Formula::And(a, b) => {
                let a = a.alpha_go(counter);
                Formula::and(a, b.alpha_go(counter))
            }
            Formula::Or(a, b) => {
                let a = a.alpha_go(counter);
                Formula::or(a, b.alpha_go(counter))
            }
            Formula::Implies(a, b) => {
                let a = a.alpha_go(counter);
                Formula::implies(a, b.alpha_go(counter))
            }
            other => other.clone(),
        }
    }

    /// Renames state variables everywhere, bound or free, through `f`.
    /// Purely structural: the caller keeps the map injective.
    pub fn map_state_names(&self, f: &dyn Fn(&str) -> String) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Cmp(op, a, b) => Formula::Cmp(*op, a.map_state_names(f), b.map_state_names(f)),
            Formula::StateEq(a, b) => Formula::StateEq(a.map_state_names(f), b.map_state_names(f)),
            Formula::Not(a) => Formula::not(a.map_state_names(f)),
            Formula::And(a, b) => Formula::and(a.map_state_names(f), b.map_state_names(f)),
            Formula::Or(a, b) => Formula::or(a.map_state_names(f), b.map_state_names(f)),
            Formula::Implies(a, b) => {
                Formula::implies(a.map_state_names(f), b.map_state_names(f))
            }
            Formula::Quant(q, binder, body) => {
                let name = match binder.sort {
                    Sort::State => f(&binder.name),
                    Sort::Nat => binder.name.clone(),
                };
                Formula::Quant(
                    *q,
                    Binder {
                        name,
                        sort: binder.sort,
                    },
                    Box::new(body.map_state_names(f)),
                )
            }
        }
    }
}

impl Term {
    pub fn node_count(&self) -> usize {
        match self {
            Term::Lit(_) | Term::Var(_) => 1,
            Term::Read(s, a) => 1 + s.node_count() + a.node_count(),
            Term::Bin(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    fn collect_free(&self, bound: &mut Vec<Binder>, fv: &mut FreeVars) {
        match self {
            Term::Lit(_) => {}
            Term::Var(v) => {
                if !is_bound(bound, v, Sort::Nat) {
                    fv.nats.insert(v.clone());
                }
            }
            Term::Read(s, a) => {
                s.collect_free(bound, fv);
                a.collect_free(bound, fv);
            }
            Term::Bin(_, a, b) => {
                a.collect_free(bound, fv);
                b.collect_free(bound, fv);
            }
        }
    }

    pub fn substitute(&self, subst: &Substitution) -> Term {
        match self {
            Term::Lit(_) => self.clone(),
            Term::Var(v) => subst.nats.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Read(s, a) => Term::read(s.substitute(subst), a.substitute(subst)),
            Term::Bin(op, a, b) => Term::bin(*op, a.substitute(subst), b.substitute(subst)),
        }
    }

    fn map_state_names(&self, f: &dyn Fn(&str) -> String) -> Term {
        match self {
            Term::Lit(_) | Term::Var(_) => self.clone(),
            Term::Read(s, a) => Term::read(s.map_state_names(f), a.map_state_names(f)),
            Term::Bin(op, a, b) => Term::bin(*op, a.map_state_names(f), b.map_state_names(f)),
        }
    }
}

impl StateTerm {
    pub fn node_count(&self) -> usize {
        match self {
            StateTerm::Param(_) | StateTerm::Var(_) => 1,
            StateTerm::Write(s, a, v) => 1 + s.node_count() + a.node_count() + v.node_count(),
        }
    }

    fn collect_free(&self, bound: &mut Vec<Binder>, fv: &mut FreeVars) {
        match self {
            StateTerm::Param(k) => {
                fv.params.insert(*k);
            }
            StateTerm::Var(v) => {
                if !is_bound(bound, &v.0, Sort::State) {
                    fv.states.insert(v.clone());
                }
            }
            StateTerm::Write(s, a, v) => {
                s.collect_free(bound, fv);
                a.collect_free(bound, fv);
                v.collect_free(bound, fv);
            }
        }
    }

    pub fn substitute(&self, subst: &Substitution) -> StateTerm {
        match self {
            StateTerm::Param(k) => subst.params.get(k).cloned().unwrap_or_else(|| self.clone()),
            StateTerm::Var(v) => subst.states.get(&v.0).cloned().unwrap_or_else(|| self.clone()),
            StateTerm::Write(s, a, v) => StateTerm::Write(
                Box::new(s.substitute(subst)),
                Box::new(a.substitute(subst)),
                Box::new(v.substitute(subst)),
            ),
        }
    }

    fn map_state_names(&self, f: &dyn Fn(&str) -> String) -> StateTerm {
        match self {
            StateTerm::Param(_) => self.clone(),
            StateTerm::Var(v) => StateTerm::Var(StateVar(f(&v.0))),
            StateTerm::Write(s, a, v) => StateTerm::Write(
                Box::new(s.map_state_names(f)),
                Box::new(a.map_state_names(f)),
                Box::new(v.map_state_names(f)),
            ),
        }
    }
}

fn is_bound(bound: &[Binder], name: &str, sort: Sort) -> bool {
    bound.iter().any(|b| b.sort == sort && b.name == name)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub nats: BTreeSet<String>,
    pub states: BTreeSet<StateVar>,
    pub params: BTreeSet<usize>,
}

/// Simultaneous replacement of state parameters, state variables and
/// natural variables.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    params: BTreeMap<usize, StateTerm>,
    states: BTreeMap<String, StateTerm>,
    nats: BTreeMap<String, Term>,
    // Variables occurring free in the replacement terms.
    range_state_vars: BTreeSet<String>,
    range_nat_vars: BTreeSet<String>,
}

impl Substitution {
    pub fn param(mut self, k: usize, term: StateTerm) -> Self {
        self.note_range_state(&term);
        self.params.insert(k, term);
        self
    }

    pub fn state(mut self, name: &str, term: StateTerm) -> Self {
        self.note_range_state(&term);
        self.states.insert(name.to_string(), term);
        self
    }

    pub fn nat(mut self, name: &str, term: Term) -> Self {
        let mut fv = FreeVars::default();
        term.collect_free(&mut Vec::new(), &mut fv);
        self.absorb(fv);
        self.nats.insert(name.to_string(), term);
        self
    }

    fn note_range_state(&mut self, term: &StateTerm) {
        let mut fv = FreeVars::default();
        term.collect_free(&mut Vec::new(), &mut fv);
        self.absorb(fv);
    }

    fn absorb(&mut self, fv: FreeVars) {
        self.range_nat_vars.extend(fv.nats);
        self.range_state_vars.extend(fv.states.into_iter().map(|s| s.0));
    }

    fn is_empty(&self) -> bool {
        self.params.is_empty() && self.states.is_empty() && self.nats.is_empty()
    }

    // The range sets are left as they are: after shadowing they
    // over-approximate, which only costs an unneeded rename.
    fn without(&self, binder: &Binder) -> Substitution {
        let mut out = self.clone();
        match binder.sort {
            Sort::Nat => {
                out.nats.remove(&binder.name);
            }
            Sort::State => {
                out.states.remove(&binder.name);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("assertion of arity {expected} applied to {found} state(s)")]
pub struct ArityMismatch {
    pub expected: usize,
    pub found: usize,
}

/// A formula over `arity` distinguished state parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assertion {
    pub arity: usize,
    pub body: Formula,
}

impl Assertion {
    pub fn new(arity: usize, body: Formula) -> Self {
        Assertion { arity, body }
    }

    pub fn truth(arity: usize) -> Self {
        Assertion::new(arity, Formula::True)
    }

    /// Substitutes `args[k-1]` for parameter `k`.
    pub fn apply(&self, args: &[StateTerm]) -> Result<Formula, ArityMismatch> {
        if args.len() != self.arity {
            return Err(ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        let subst = args
            .iter()
            .enumerate()
            .fold(Substitution::default(), |s, (i, t)| s.param(i + 1, t.clone()));
        Ok(self.body.substitute(&subst))
    }

    /// Fixes the last parameter to `arg`, leaving an assertion over the
    /// remaining `arity - 1` parameters.
    pub fn apply_last(&self, arg: StateTerm) -> Result<Assertion, ArityMismatch> {
        if self.arity == 0 {
            return Err(ArityMismatch {
                expected: 0,
                found: 1,
            });
        }
        let subst = Substitution::default().param(self.arity, arg);
        Ok(Assertion::new(self.arity - 1, self.body.substitute(&subst)))
    }

    /// Reorders parameters: parameter `k` of the result is parameter
    /// `perm[k-1]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Assertion {
        assert_eq!(perm.len(), self.arity, "permutation length");
        let mut subst = Substitution::default();
        for (new_idx, old) in perm.iter().enumerate() {
            subst = subst.param(*old, StateTerm::Param(new_idx + 1));
        }
        Assertion::new(self.arity, self.body.substitute(&subst))
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.body.is_quantifier_free()
    }
}

/// What an out-of-scope reference points at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScopeItem {
    StateParam(usize),
    StateVar(String),
    NatVar(String),
}

impl fmt::Display for ScopeItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScopeItem::StateParam(k) => write!(f, "s{k}"),
            ScopeItem::StateVar(v) => write!(f, "state variable {v}"),
            ScopeItem::NatVar(v) => write!(f, "variable {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{item} is not in scope (node {node})")]
pub struct ScopeError {
    pub item: ScopeItem,
    /// Preorder index of the offending node within the assertion body.
    pub node: usize,
}

/// Checks that every state read names a parameter in `1..=arity` and that
/// no variable occurs free.
pub fn assertion_check(p: &Assertion) -> Result<(), ScopeError> {
    let mut checker = ScopeChecker {
        arity: p.arity,
        bound: Vec::new(),
        node: 0,
    };
    checker.formula(&p.body)
}

struct ScopeChecker {
    arity: usize,
    bound: Vec<Binder>,
    node: usize,
}

impl ScopeChecker {
    fn tick(&mut self) -> usize {
        let n = self.node;
        self.node += 1;
        n
    }

    fn formula(&mut self, f: &Formula) -> Result<(), ScopeError> {
        self.tick();
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Cmp(_, a, b) => {
                self.term(a)?;
                self.term(b)
            }
            Formula::StateEq(a, b) => {
                self.state(a)?;
                self.state(b)
            }
            Formula::Not(a) => self.formula(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.formula(a)?;
                self.formula(b)
            }
            Formula::Quant(_, binder, body) => {
                self.bound.push(binder.clone());
                let r = self.formula(body);
                self.bound.pop();
                r
            }
        }
    }

    fn term(&mut self, t: &Term) -> Result<(), ScopeError> {
        let node = self.tick();
        match t {
            Term::Lit(_) => Ok(()),
            Term::Var(v) => {
                if is_bound(&self.bound, v, Sort::Nat) {
                    Ok(())
                } else {
                    Err(ScopeError {
                        item: ScopeItem::NatVar(v.clone()),
                        node,
                    })
                }
            }
            Term::Read(s, a) => {
                self.state(s)?;
                self.term(a)
            }
            Term::Bin(_, a, b) => {
                self.term(a)?;
                self.term(b)
            }
        }
    }

    fn state(&mut self, s: &StateTerm) -> Result<(), ScopeError> {
        let node = self.tick();
        match s {
            StateTerm::Param(k) => {
                if (1..=self.arity).contains(k) {
                    Ok(())
                } else {
                    Err(ScopeError {
                        item: ScopeItem::StateParam(*k),
                        node,
                    })
                }
            }
            StateTerm::Var(v) => {
                if is_bound(&self.bound, &v.0, Sort::State) {
                    Ok(())
                } else {
                    Err(ScopeError {
                        item: ScopeItem::StateVar(v.0.clone()),
                        node,
                    })
                }
            }
            StateTerm::Write(s, a, v) => {
                self.state(s)?;
                self.term(a)?;
                self.term(v)
            }
        }
    }
}

// Pretty printing in mathematical notation. Precedence, loosest first:
// quantifier, ⇒ (right-assoc), ∨, ∧, ¬, atoms.

const PREC_QUANT: u8 = 0;
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NOT: u8 = 4;
const PREC_ATOM: u8 = 5;

fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::Quant(..) => PREC_QUANT,
        Formula::Implies(..) => PREC_IMPLIES,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        Formula::Not(..) => PREC_NOT,
        _ => PREC_ATOM,
    }
}

fn write_formula(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = formula_prec(f);
    let paren = prec < min;
    if paren {
        out.write_str("(")?;
    }
    match f {
        Formula::True => out.write_str("True")?,
        Formula::False => out.write_str("False")?,
        Formula::Cmp(op, a, b) => {
            write_term(a, 0, out)?;
            out.write_str(match op {
                CmpOp::Le => " ≤ ",
                CmpOp::Eq => " = ",
            })?;
            write_term(b, 0, out)?;
        }
        Formula::StateEq(a, b) => write!(out, "{a} = {b}")?,
        Formula::Not(a) => {
            out.write_str("¬")?;
            write_formula(a, PREC_NOT, out)?;
        }
        Formula::And(a, b) => {
            // ∧ and ∨ are associative; nesting is not shown.
            write_formula(a, PREC_AND, out)?;
            out.write_str(" ∧ ")?;
            write_formula(b, PREC_AND, out)?;
        }
        Formula::Or(a, b) => {
            write_formula(a, PREC_OR, out)?;
            out.write_str(" ∨ ")?;
            write_formula(b, PREC_OR, out)?;
        }
        Formula::Implies(a, b) => {
            write_formula(a, PREC_IMPLIES + 1, out)?;
            out.write_str(" ⇒ ")?;
            write_formula(b, PREC_IMPLIES, out)?;
        }
        Formula::Quant(q, binder, body) => {
            out.write_str(match q {
                Quantifier::Forall => "∀",
                Quantifier::Exists => "∃",
            })?;
            write!(out, "{}. ", binder.name)?;
            write_formula(body, PREC_QUANT, out)?;
        }
    }
    if paren {
        out.write_str(")")?;
    }
    Ok(())
}

fn write_term(t: &Term, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Lit(n) => write!(out, "{n}"),
        Term::Var(v) => out.write_str(v),
        Term::Read(s, a) => {
            write!(out, "{s}(")?;
            write_term(a, 0, out)?;
            out.write_str(")")
        }
        Term::Bin(op, a, b) => {
            let prec = match op {
                ArithOp::Add | ArithOp::Sub => 1,
                ArithOp::Mul => 2,
            };
            let paren = prec < min;
            if paren {
                out.write_str("(")?;
            }
            write_term(a, prec, out)?;
            match op {
                ArithOp::Mul => out.write_str(" × ")?,
                other => write!(out, " {} ", other.symbol())?,
            }
            write_term(b, prec + 1, out)?;
            if paren {
                out.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, PREC_QUANT, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, f)
    }
}

impl fmt::Display for StateTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateTerm::Param(k) => write!(f, "${k}"),
            StateTerm::Var(v) => write!(f, "{v}"),
            StateTerm::Write(s, a, v) => {
                write!(f, "{s}[")?;
                write_term(a, 0, f)?;
                f.write_str("/")?;
                write_term(v, 0, f)?;
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("λ")?;
        for k in 1..=self.arity {
            write!(f, "${k}")?;
            if k < self.arity {
                f.write_str(",")?;
            }
        }
        write!(f, ". {}", self.body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read_param(k: usize, addr: u64) -> Term {
        Term::read(StateTerm::Param(k), Term::lit(addr))
    }

    #[test]
    fn check_accepts_binary_reads() {
        let p = Assertion::new(
            2,
            Formula::eq(read_param(1, 3), read_param(2, 3)),
        );
        assert_eq!(assertion_check(&p), Ok(()));
    }

    #[test]
    fn check_rejects_out_of_range_parameter() {
        let p = Assertion::new(1, Formula::eq(read_param(2, 1), Term::lit(0)));
        let err = assertion_check(&p).unwrap_err();
        assert_eq!(err.item, ScopeItem::StateParam(2));
        assert_eq!(err.item.to_string(), "s2");
    }

    #[test]
    fn check_accepts_bound_nat_variable() {
        let p = Assertion::new(0, Formula::forall_nat("v", Formula::le(Term::var("v"), Term::var("v"))));
        assert_eq!(assertion_check(&p), Ok(()));
    }

    #[test]
    fn check_rejects_free_nat_variable() {
        let p = Assertion::new(0, Formula::le(Term::var("v"), Term::lit(1)));
        assert_eq!(
            assertion_check(&p).unwrap_err().item,
            ScopeItem::NatVar("v".into())
        );
    }

    #[test]
    fn apply_replaces_parameters() {
        let p = Assertion::new(1, Formula::eq(read_param(1, 3), Term::lit(2)));
        let f = p.apply(&[StateTerm::var("s0")]).unwrap();
        assert_eq!(
            f,
            Formula::eq(Term::read(StateTerm::var("s0"), Term::lit(3)), Term::lit(2))
        );
        assert_eq!(f.to_string(), "s0(3) = 2");
    }

    #[test]
    fn apply_arity_zero() {
        let body = Formula::forall_nat("v", Formula::le(Term::lit(0), Term::var("v")));
        let p = Assertion::new(0, body.clone());
        assert_eq!(p.apply(&[]).unwrap(), body);
    }

    #[test]
    fn apply_arity_mismatch() {
        let p = Assertion::truth(2);
        assert_eq!(
            p.apply(&[StateTerm::var("s")]),
            Err(ArityMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn substitution_avoids_capture() {
        // ∀s0. $1 = s0, applied to the free state s0
        let p = Assertion::new(
            1,
            Formula::forall_state(
                &StateVar::new("s0"),
                Formula::state_eq(StateTerm::Param(1), StateTerm::var("s0")),
            ),
        );
        let f = p.apply(&[StateTerm::var("s0")]).unwrap();
        match &f {
            Formula::Quant(_, binder, body) => {
                assert_ne!(binder.name, "s0");
                assert_eq!(
                    **body,
                    Formula::state_eq(StateTerm::var("s0"), StateTerm::var(binder.name.clone()))
                );
            }
            other => panic!("unexpected {other}"),
        }
        assert!(f.free_vars().states.contains(&StateVar::new("s0")));
    }

    #[test]
    fn substitution_respects_shadowing() {
        let f = Formula::forall_nat("v", Formula::eq(Term::var("v"), Term::lit(1)));
        let g = f.substitute(&Substitution::default().nat("v", Term::lit(7)));
        assert_eq!(f, g);
    }

    #[test]
    fn apply_distributes_over_conjunction() {
        let a = Formula::eq(read_param(1, 1), Term::lit(2));
        let b = Formula::le(read_param(1, 2), read_param(1, 1));
        let arg = [StateTerm::var("t")];
        let whole = Assertion::new(1, Formula::and(a.clone(), b.clone())).apply(&arg).unwrap();
        let parts = Formula::and(
            Assertion::new(1, a).apply(&arg).unwrap(),
            Assertion::new(1, b).apply(&arg).unwrap(),
        );
        assert_eq!(whole, parts);
    }

    #[test]
    fn apply_last_partially_applies() {
        let q = Assertion::new(2, Formula::eq(read_param(1, 1), read_param(2, 1)));
        let q1 = q.apply_last(StateTerm::var("b")).unwrap();
        assert_eq!(q1.arity, 1);
        assert_eq!(
            q1.apply(&[StateTerm::var("a")]).unwrap(),
            q.apply(&[StateTerm::var("a"), StateTerm::var("b")]).unwrap()
        );
    }

    #[test]
    fn permute_swaps_arguments() {
        let q = Assertion::new(2, Formula::le(read_param(1, 1), read_param(2, 2)));
        let swapped = q.permute(&[2, 1]);
        assert_eq!(
            swapped.apply(&[StateTerm::var("b"), StateTerm::var("a")]).unwrap(),
            q.apply(&[StateTerm::var("a"), StateTerm::var("b")]).unwrap()
        );
    }

    #[test]
    fn alpha_normalize_identifies_renamings() {
        let mk = |n: &str| {
            Formula::forall_state(
                &StateVar::new(n),
                Formula::state_eq(StateTerm::var(n), StateTerm::var("free")),
            )
        };
        assert_ne!(mk("a"), mk("b"));
        assert_eq!(mk("a").alpha_normalize(), mk("b").alpha_normalize());
    }

    #[test]
    fn display_parenthesizes_nested_quantifiers() {
        let s = StateVar::new("s");
        let s1 = StateVar::new("s1");
        let inner = Formula::forall_state(
            &s1,
            Formula::implies(
                Formula::state_eq(&s1, StateTerm::from(&s).write(Term::lit(1), Term::lit(2))),
                Formula::eq(Term::read((&s1).into(), Term::lit(1)), Term::lit(2)),
            ),
        );
        let f = Formula::implies(Formula::True, inner);
        assert_eq!(f.to_string(), "True ⇒ (∀s1. s1 = s[1/2] ⇒ s1(1) = 2)");
    }

    #[test]
    fn display_terms_with_precedence() {
        let t = Term::bin(
            ArithOp::Mul,
            Term::var("a"),
            Term::bin(ArithOp::Sub, Term::var("b"), Term::var("c")),
        );
        assert_eq!(t.to_string(), "a × (b - c)");
        let t = Term::bin(
            ArithOp::Sub,
            Term::var("a"),
            Term::bin(ArithOp::Sub, Term::var("b"), Term::var("c")),
        );
        assert_eq!(t.to_string(), "a - (b - c)");
    }
}
