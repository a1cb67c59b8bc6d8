//! Verification condition generation for Hoare triples.
//!
//! [`tc`] builds the main condition (the state after a command satisfies a
//! continuation), [`ta`] the auxiliary conditions (assertions, callee
//! preconditions, loop invariants) and [`tf`] the conditions that every
//! procedure body respects its contract. [`hoare_vcs`] assembles the three
//! into a list of closed formulas, one per top-level conjunct.
//!
//! Continuations are closures that receive the post-state variable, so
//! fresh names are drawn in program order from one counter per goal. The
//! public entry points take the continuation as an arity-1 [`Assertion`].

use std::fmt;

use thiserror::Error;

use crate::ast::{Command, ContractEnv, ProcEnv, ProcName};
use crate::formula::{ArityMismatch, Assertion, Formula, StateTerm, StateVar, Term};
use crate::parser::{Pos, SourceModule};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum VcError {
    #[error("no contract for procedure `{0}`")]
    UnknownProcedure(ProcName),
    #[error("procedure `{0}` has a contract but no body")]
    MissingBody(ProcName),
    #[error(transparent)]
    Arity(#[from] ArityMismatch),
    #[error("{commands} command(s) but {states} state variable(s)")]
    LengthMismatch { commands: usize, states: usize },
    #[error("no goal named `{0}`")]
    UnknownGoal(String),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
}

pub type Result<T> = std::result::Result<T, VcError>;

/// Which generator produces main conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum VcMode {
    /// The case analysis of `tc` as is; formulas may grow exponentially
    /// with the number of conditionals.
    #[default]
    Naive,
    /// [`tc_opt`]: linear-size formulas via transition relations.
    Opt,
}

type Cont<'k, 'a> = &'k dyn Fn(&mut VcGen<'a>, &StateVar) -> Result<Formula>;

/// Generation context: contracts, mode and the fresh-name counter.
pub struct VcGen<'a> {
    contracts: &'a ContractEnv,
    mode: VcMode,
    counter: usize,
}

impl<'a> VcGen<'a> {
    pub fn new(contracts: &'a ContractEnv, mode: VcMode) -> Self {
        VcGen {
            contracts,
            mode,
            counter: 0,
        }
    }

    /// A state variable `s<k>` not handed out before.
    pub fn fresh(&mut self) -> StateVar {
        let v = StateVar::new(format!("s{}", self.counter));
        self.counter += 1;
        v
    }

    /// Makes sure later fresh names differ from `v`.
    pub fn reserve(&mut self, v: &StateVar) {
        if let Some(n) = v.name().strip_prefix('s').and_then(|d| d.parse::<usize>().ok()) {
            self.counter = self.counter.max(n + 1);
        }
    }

    fn contract(&self, y: &str) -> Result<(&'a Assertion, &'a Assertion)> {
        let c = self
            .contracts
            .get(y)
            .ok_or_else(|| VcError::UnknownProcedure(y.to_string()))?;
        Ok((&c.pre, &c.post))
    }

    /// Main condition of `c` from `s` with continuation `f`.
    pub fn tc(&mut self, c: &Command, s: &StateVar, f: &Assertion) -> Result<Formula> {
        self.tc_k(c, s, &|_, t| Ok(f.apply(&[t.into()])?))
    }

    /// Linear-size main condition, equivalent to [`VcGen::tc`].
    pub fn tc_opt(&mut self, c: &Command, s: &StateVar, f: &Assertion) -> Result<Formula> {
        self.tc_opt_k(c, s, &|_, t| Ok(f.apply(&[t.into()])?))
    }

    pub(crate) fn tc_k(&mut self, c: &Command, s: &StateVar, k: Cont<'_, 'a>) -> Result<Formula> {
        match self.mode {
            VcMode::Naive => self.tc_naive(c, s, k),
            VcMode::Opt => self.tc_opt_k(c, s, k),
        }
    }

    fn tc_naive(&mut self, c: &Command, s: &StateVar, k: Cont<'_, 'a>) -> Result<Formula> {
        let st = StateTerm::from(s);
        match c {
            Command::Skip | Command::Assign(..) | Command::IndirectAssign(..) | Command::Assert(_) => {
                let t = self.fresh();
                let link = step(c, &st, &t)?;
                let rest = k(self, &t)?;
                Ok(Formula::forall_state(&t, Formula::implies(link, rest)))
            }
            Command::Seq(c0, c1) => self.tc_naive(c0, s, &|g, m| g.tc_naive(c1, m, k)),
            Command::If(b, c0, c1) => {
                let cond = Formula::from_bool(b, &st);
                let then = self.tc_naive(c0, s, k)?;
                let otherwise = self.tc_naive(c1, s, k)?;
                Ok(Formula::and(
                    Formula::implies(cond.clone(), then),
                    Formula::implies(Formula::not(cond), otherwise),
                ))
            }
            Command::Call(y) => {
                let (pre, post) = self.contract(y)?;
                let t = self.fresh();
                let rest = k(self, &t)?;
                Ok(Formula::implies(
                    pre.apply(&[st])?,
                    Formula::forall_state(&t, Formula::implies(post.apply(&[(&t).into()])?, rest)),
                ))
            }
            Command::While(b, inv, _) => {
                let t = self.fresh();
                let tt = StateTerm::from(&t);
                let exit = Formula::and(inv.apply(&[tt.clone()])?, Formula::not(Formula::from_bool(b, &tt)));
                let rest = k(self, &t)?;
                Ok(Formula::implies(
                    inv.apply(&[st])?,
                    Formula::forall_state(&t, Formula::implies(exit, rest)),
                ))
            }
        }
    }

    fn tc_opt_k(&mut self, c: &Command, s: &StateVar, k: Cont<'_, 'a>) -> Result<Formula> {
        let t = self.fresh();
        let mut binders = vec![t.clone()];
        let r = self.rel(c, s, &t, &mut binders)?;
        let rest = k(self, &t)?;
        Ok(Formula::forall_states(&binders, Formula::implies(r, rest)))
    }

    /// Transition formula relating the pre-state `s` and post-state `t` of
    /// `c`. Intermediate states are pushed onto `binders`; they occur only
    /// here, so quantifying them universally around `rel ⇒ …` is the same as
    /// existentially inside `rel`.
    fn rel(
        &mut self,
        c: &Command,
        s: &StateVar,
        t: &StateVar,
        binders: &mut Vec<StateVar>,
    ) -> Result<Formula> {
        let st = StateTerm::from(s);
        let tt = StateTerm::from(t);
        match c {
            Command::Skip | Command::Assign(..) | Command::IndirectAssign(..) | Command::Assert(_) => {
                step(c, &st, t)
            }
            Command::Seq(c0, c1) => {
                let m = self.fresh();
                binders.push(m.clone());
                let first = self.rel(c0, s, &m, binders)?;
                let second = self.rel(c1, &m, t, binders)?;
                Ok(Formula::and(first, second))
            }
            Command::If(b, c0, c1) => {
                let cond = Formula::from_bool(b, &st);
                let then = self.rel(c0, s, t, binders)?;
                let otherwise = self.rel(c1, s, t, binders)?;
                Ok(Formula::or(
                    Formula::and(cond.clone(), then),
                    Formula::and(Formula::not(cond), otherwise),
                ))
            }
            Command::Call(y) => {
                let (pre, post) = self.contract(y)?;
                Ok(Formula::and(pre.apply(&[st])?, post.apply(&[tt])?))
            }
            Command::While(b, inv, _) => Ok(Formula::conj([
                inv.apply(&[st])?,
                inv.apply(&[tt.clone()])?,
                Formula::not(Formula::from_bool(b, &tt)),
            ])),
        }
    }

    /// Auxiliary conditions of `c` from `s`.
    pub fn ta(&mut self, c: &Command, s: &StateVar) -> Result<Formula> {
        let st = StateTerm::from(s);
        match c {
            Command::Skip | Command::Assign(..) | Command::IndirectAssign(..) => Ok(Formula::True),
            Command::Assert(p) => Ok(p.apply(&[st])?),
            Command::Seq(c0, c1) => {
                let first = self.ta(c0, s)?;
                let second = self.tc_k(c0, s, &|g, m| g.ta(c1, m))?;
                Ok(Formula::and(first, second))
            }
            Command::If(b, c0, c1) => {
                let cond = Formula::from_bool(b, &st);
                let then = self.ta(c0, s)?;
                let otherwise = self.ta(c1, s)?;
                Ok(Formula::and(
                    Formula::implies(cond.clone(), then),
                    Formula::implies(Formula::not(cond), otherwise),
                ))
            }
            Command::Call(y) => Ok(self.contract(y)?.0.apply(&[st])?),
            Command::While(b, inv, body) => {
                let entry = |t: &StateVar| -> Result<Formula> {
                    let tt = StateTerm::from(t);
                    Ok(Formula::and(inv.apply(&[tt.clone()])?, Formula::from_bool(b, &tt)))
                };
                let t1 = self.fresh();
                let body_aux = self.ta(body, &t1)?;
                let inner = Formula::forall_state(&t1, Formula::implies(entry(&t1)?, body_aux));
                let t2 = self.fresh();
                let preserve = self.tc_k(body, &t2, &|_, u| Ok(inv.apply(&[u.into()])?))?;
                let keep = Formula::forall_state(&t2, Formula::implies(entry(&t2)?, preserve));
                Ok(Formula::conj([inv.apply(&[st])?, inner, keep]))
            }
        }
    }

    /// `∀σ. pre(σ) ⇒ ta(body, σ) ∧ tc(body, σ, post)` for one procedure.
    fn proc_condition(&mut self, body: &Command, y: &str) -> Result<(StateVar, Formula, Formula)> {
        let (pre, post) = self.contract(y)?;
        let s = self.fresh();
        let pre_s = pre.apply(&[(&s).into()])?;
        let aux = self.ta(body, &s)?;
        let main = self.tc(body, &s, post)?;
        Ok((s, pre_s, Formula::and(aux, main)))
    }
}

/// Constraint linking `s` to the post-state `t` of an atomic command.
fn step(c: &Command, s: &StateTerm, t: &StateVar) -> Result<Formula> {
    let tt = StateTerm::from(t);
    Ok(match c {
        Command::Skip => Formula::state_eq(tt, s.clone()),
        Command::Assign(i, a) => Formula::state_eq(
            tt,
            s.clone().write(Term::Lit(i.to_nat()), Term::from_arith(a, s)),
        ),
        Command::IndirectAssign(i, a) => Formula::state_eq(
            tt,
            s.clone().write(
                Term::read(s.clone(), Term::Lit(i.to_nat())),
                Term::from_arith(a, s),
            ),
        ),
        Command::Assert(p) => Formula::and(Formula::state_eq(tt, s.clone()), p.apply(&[s.clone()])?),
        _ => unreachable!("not an atomic command"),
    })
}

/// Main condition of `c` from state `s` for continuation `f`; fresh names
/// avoid `s`.
pub fn tc(c: &Command, s: &StateVar, contracts: &ContractEnv, f: &Assertion) -> Result<Formula> {
    let mut g = VcGen::new(contracts, VcMode::Naive);
    g.reserve(s);
    g.tc(c, s, f)
}

/// Linear-size counterpart of [`tc`].
pub fn tc_opt(c: &Command, s: &StateVar, contracts: &ContractEnv, f: &Assertion) -> Result<Formula> {
    let mut g = VcGen::new(contracts, VcMode::Opt);
    g.reserve(s);
    g.tc_opt(c, s, f)
}

/// Auxiliary condition of `c` from state `s`.
pub fn ta(c: &Command, s: &StateVar, contracts: &ContractEnv) -> Result<Formula> {
    let mut g = VcGen::new(contracts, VcMode::Naive);
    g.reserve(s);
    g.ta(c, s)
}

fn check_keys(contracts: &ContractEnv, procs: &ProcEnv) -> Result<()> {
    if let Some(y) = procs.keys().find(|y| !contracts.contains_key(*y)) {
        return Err(VcError::UnknownProcedure(y.clone()));
    }
    if let Some(y) = contracts.keys().find(|y| !procs.contains_key(*y)) {
        return Err(VcError::MissingBody(y.clone()));
    }
    Ok(())
}

/// Conjunction over all procedures of `∀σ. pre(σ) ⇒ ta(body) ∧ tc(body, post)`.
pub fn tf(contracts: &ContractEnv, procs: &ProcEnv) -> Result<Formula> {
    check_keys(contracts, procs)?;
    let mut g = VcGen::new(contracts, VcMode::Naive);
    let mut parts = Vec::new();
    for (y, body) in procs {
        let (s, pre, body) = g.proc_condition(body, y)?;
        parts.push(Formula::forall_state(&s, Formula::implies(pre, body)));
    }
    Ok(Formula::conj(parts))
}

/// The hypothesis of the soundness theorem a VC discharges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// Procedure bodies respect their contracts.
    Tf,
    /// Auxiliary conditions of a Hoare goal.
    Ta,
    /// Main condition of a Hoare goal.
    Tc,
    /// Auxiliary conditions of a relational goal.
    Tar,
    /// Main condition of a relational goal.
    Tr,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::Tf => "tf",
            Hypothesis::Ta => "ta",
            Hypothesis::Tc => "tc",
            Hypothesis::Tar => "tar",
            Hypothesis::Tr => "tr",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Origin {
    pub goal: String,
    pub hypothesis: Hypothesis,
    /// The procedure whose contract a `Tf` condition checks.
    pub procedure: Option<ProcName>,
    pub pos: Option<Pos>,
}

/// A closed verification condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vc {
    /// `goal.hypothesis.k`, unique within a goal.
    pub name: String,
    pub formula: Formula,
    pub origin: Origin,
}

impl Vc {
    /// State variables bound by the leading universal quantifiers.
    pub fn top_level_states(&self) -> Vec<StateVar> {
        let mut out = Vec::new();
        let mut f = &self.formula;
        while let Formula::Quant(crate::formula::Quantifier::Forall, b, body) = f {
            if b.sort == crate::formula::Sort::State {
                out.push(StateVar::new(b.name.clone()));
            }
            f = body;
        }
        out
    }
}

/// Collects VCs for one goal, numbering them per hypothesis.
pub(crate) struct VcSink {
    goal: String,
    pub(crate) vcs: Vec<Vc>,
}

impl VcSink {
    pub(crate) fn new(goal: &str) -> Self {
        VcSink {
            goal: goal.to_string(),
            vcs: Vec::new(),
        }
    }

    /// Adds `∀states. pre ⇒ X` for each top-level conjunct `X` of `body`.
    pub(crate) fn split(
        &mut self,
        hypothesis: Hypothesis,
        procedure: Option<&str>,
        states: &[StateVar],
        pre: &Formula,
        body: &Formula,
    ) {
        for part in body.conjuncts() {
            let k = self
                .vcs
                .iter()
                .filter(|v| v.origin.hypothesis == hypothesis)
                .count();
            self.vcs.push(Vc {
                name: format!("{}.{}.{}", self.goal, hypothesis, k),
                formula: Formula::forall_states(states, Formula::implies(pre.clone(), part.clone())),
                origin: Origin {
                    goal: self.goal.clone(),
                    hypothesis,
                    procedure: procedure.map(str::to_string),
                    pos: None,
                },
            });
        }
    }

    pub(crate) fn add_tf(
        &mut self,
        contracts: &ContractEnv,
        procs: &ProcEnv,
        mode: VcMode,
    ) -> Result<()> {
        check_keys(contracts, procs)?;
        let mut g = VcGen::new(contracts, mode);
        for (y, body) in procs {
            let (s, pre, body) = g.proc_condition(body, y)?;
            self.split(Hypothesis::Tf, Some(y), &[s], &pre, &body);
        }
        Ok(())
    }
}

/// VCs for `{pre} c {post}`: contract conditions for every procedure, then
/// `∀σ. pre(σ) ⇒ ta(c, σ)` and `∀σ. pre(σ) ⇒ tc(c, σ, post)`, each split at
/// top-level conjunctions.
pub fn hoare_vcs(
    goal: &str,
    pre: &Assertion,
    c: &Command,
    post: &Assertion,
    contracts: &ContractEnv,
    procs: &ProcEnv,
    mode: VcMode,
) -> Result<Vec<Vc>> {
    let mut sink = VcSink::new(goal);
    sink.add_tf(contracts, procs, mode)?;

    let mut g = VcGen::new(contracts, mode);
    let s = g.fresh();
    let pre_s = pre.apply(&[(&s).into()])?;
    let aux = g.ta(c, &s)?;
    sink.split(Hypothesis::Ta, None, std::slice::from_ref(&s), &pre_s, &aux);

    let mut g = VcGen::new(contracts, mode);
    let s = g.fresh();
    let pre_s = pre.apply(&[(&s).into()])?;
    let main = g.tc(c, &s, post)?;
    sink.split(Hypothesis::Tc, None, &[s], &pre_s, &main);
    Ok(sink.vcs)
}

/// [`hoare_vcs`] for a named goal of a parsed module, with source positions.
pub fn module_hoare_vcs(m: &SourceModule, goal: &str, mode: VcMode) -> Result<Vec<Vc>> {
    let g = m
        .hoare_goal(goal)
        .ok_or_else(|| VcError::UnknownGoal(goal.to_string()))?;
    let c = m
        .commands
        .get(&g.command)
        .ok_or_else(|| VcError::UnknownCommand(g.command.clone()))?;
    let mut vcs = hoare_vcs(goal, &g.pre, c, &g.post, &m.contracts, &m.procs, mode)?;
    attach_positions(m, goal, &mut vcs);
    Ok(vcs)
}

pub(crate) fn attach_positions(m: &SourceModule, goal: &str, vcs: &mut [Vc]) {
    for vc in vcs {
        vc.origin.pos = match &vc.origin.procedure {
            Some(y) => m.proc_pos(y),
            None => m.goal_pos(goal),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_assertion, parse_command, parse_module};

    fn s0() -> StateVar {
        StateVar::new("s0")
    }

    fn assertion(src: &str) -> Assertion {
        parse_assertion(src, 1).unwrap()
    }

    #[test]
    fn skip_then_assign() {
        let c = parse_command("skip; x1 := 2").unwrap();
        let f = tc(&c, &s0(), &ContractEnv::new(), &assertion("at(1) = 2")).unwrap();
        assert_eq!(f.to_string(), "∀s1. s1 = s0 ⇒ (∀s2. s2 = s1[1/2] ⇒ s2(1) = 2)");
    }

    #[test]
    fn skip_case() {
        let f = tc(&Command::Skip, &s0(), &ContractEnv::new(), &assertion("at(1) = 0")).unwrap();
        assert_eq!(f.to_string(), "∀s1. s1 = s0 ⇒ s1(1) = 0");
    }

    #[test]
    fn indirect_assignment_writes_through_pointer() {
        let c = parse_command("*x1 := x2").unwrap();
        let f = tc(&c, &s0(), &ContractEnv::new(), &Assertion::truth(1)).unwrap();
        assert_eq!(f.to_string(), "∀s1. s1 = s0[s0(1)/s0(2)] ⇒ True");
    }

    #[test]
    fn assert_case() {
        let c = parse_command("assert(at(3) = 2)").unwrap();
        let f = tc(&c, &s0(), &ContractEnv::new(), &Assertion::truth(1)).unwrap();
        assert_eq!(f.to_string(), "∀s1. s1 = s0 ∧ s0(3) = 2 ⇒ True");
        assert_eq!(ta(&c, &s0(), &ContractEnv::new()).unwrap().to_string(), "s0(3) = 2");
    }

    const MULT: &str = r#"
        proc y1
          pre (at(2) = at(3) * (at(4) - at(1)) && 0 <= at(1) && at(1) <= at(4))
          post (at(2) = at(3) * at(4))
        { if (x1 > 0) { x2 := x2 + x3; x1 := x1 - 1; call y1 } else { skip } }
        command c_rec { x1 := x4; x2 := 0; call y1 }
        hoare mult_ok pre (true) cmd c_rec post (at(2) = at(4) * at(3))
    "#;

    #[test]
    fn call_case() {
        let m = parse_module(MULT).unwrap();
        let f = tc(&Command::Call("y1".into()), &s0(), &m.contracts, &assertion("at(2) = 0")).unwrap();
        assert_eq!(
            f.to_string(),
            "s0(2) = s0(3) × (s0(4) - s0(1)) ∧ 0 ≤ s0(1) ∧ s0(1) ≤ s0(4) ⇒ \
             (∀s1. s1(2) = s1(3) × s1(4) ⇒ s1(2) = 0)"
        );
        assert_eq!(
            ta(&Command::Call("y1".into()), &s0(), &m.contracts).unwrap(),
            m.contracts["y1"].pre.apply(&[(&s0()).into()]).unwrap()
        );
    }

    #[test]
    fn unknown_procedure_is_an_error() {
        let err = tc(&Command::Call("y9".into()), &s0(), &ContractEnv::new(), &Assertion::truth(1));
        assert_eq!(err, Err(VcError::UnknownProcedure("y9".into())));
    }

    #[test]
    fn while_cases() {
        let c = parse_command("while (x1 <= 0) inv (at(5) = 1) { skip }").unwrap();
        let main = tc(&c, &s0(), &ContractEnv::new(), &Assertion::truth(1)).unwrap();
        assert_eq!(main.to_string(), "s0(5) = 1 ⇒ (∀s1. s1(5) = 1 ∧ ¬s1(1) ≤ 0 ⇒ True)");
        let aux = ta(&c, &s0(), &ContractEnv::new()).unwrap();
        assert_eq!(
            aux.to_string(),
            "s0(5) = 1 ∧ (∀s1. s1(5) = 1 ∧ s1(1) ≤ 0 ⇒ True) ∧ \
             (∀s2. s2(5) = 1 ∧ s2(1) ≤ 0 ⇒ (∀s3. s3 = s2 ⇒ s3(5) = 1))"
        );
    }

    #[test]
    fn skip_has_no_auxiliary_condition() {
        assert_eq!(ta(&Command::Skip, &s0(), &ContractEnv::new()).unwrap(), Formula::True);
    }

    #[test]
    fn tf_of_empty_environments_is_true() {
        assert_eq!(tf(&ContractEnv::new(), &ProcEnv::new()).unwrap(), Formula::True);
    }

    #[test]
    fn tf_rejects_mismatched_keys() {
        let m = parse_module(MULT).unwrap();
        assert_eq!(
            tf(&m.contracts, &ProcEnv::new()),
            Err(VcError::MissingBody("y1".into()))
        );
        assert_eq!(
            tf(&ContractEnv::new(), &m.procs),
            Err(VcError::UnknownProcedure("y1".into()))
        );
        assert_eq!(tf(&m.contracts, &m.procs).unwrap().conjuncts().len(), 1);
    }

    #[test]
    fn hoare_vcs_are_split_and_named() {
        let m = parse_module(MULT).unwrap();
        let vcs = module_hoare_vcs(&m, "mult_ok", VcMode::Naive).unwrap();
        let names: Vec<&str> = vcs.iter().map(|v| v.name.as_str()).collect();
        assert!(names.contains(&"mult_ok.tf.0"));
        assert!(names.contains(&"mult_ok.ta.0"));
        assert!(names.contains(&"mult_ok.tc.0"));
        for vc in &vcs {
            let fv = vc.formula.free_vars();
            assert!(fv.states.is_empty() && fv.nats.is_empty() && fv.params.is_empty(), "{}", vc.name);
            assert!(vc.origin.pos.is_some());
        }
        let tf_vcs: Vec<_> = vcs.iter().filter(|v| v.origin.hypothesis == Hypothesis::Tf).collect();
        assert!(tf_vcs.iter().all(|v| v.origin.procedure.as_deref() == Some("y1")));
    }

    #[test]
    fn generation_is_deterministic() {
        let m = parse_module(MULT).unwrap();
        let a = module_hoare_vcs(&m, "mult_ok", VcMode::Naive).unwrap();
        let b = module_hoare_vcs(&m, "mult_ok", VcMode::Naive).unwrap();
        assert_eq!(a, b);
    }

    fn ladder(n: usize) -> Command {
        Command::seq_all((0..n).map(|_| {
            parse_command("if (x1 <= 5) { x2 := x2 + 1 } else { x3 := x3 + 1 }").unwrap()
        }))
    }

    #[test]
    fn optimized_generator_is_linear_on_ladders() {
        let c = ladder(12);
        let f = assertion("at(2) + at(3) = 12");
        let naive = tc(&c, &s0(), &ContractEnv::new(), &f).unwrap();
        let opt = tc_opt(&c, &s0(), &ContractEnv::new(), &f).unwrap();
        assert!(naive.node_count() >= 1 << 12, "{}", naive.node_count());
        assert!(opt.node_count() <= 1200, "{}", opt.node_count());
    }

    #[test]
    fn optimized_skip_matches_shape() {
        let f = tc_opt(&Command::Skip, &s0(), &ContractEnv::new(), &assertion("at(1) = 0")).unwrap();
        assert_eq!(f.to_string(), "∀s1. s1 = s0 ⇒ s1(1) = 0");
    }
}
