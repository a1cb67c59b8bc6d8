//! Verification conditions for relational goals over `n` commands.
//!
//! [`tr`] folds the main condition over the commands, peeling the last
//! command first so that its continuation verifies the remaining ones and
//! finally the relational postcondition. [`tar`] conjoins the auxiliary
//! conditions of each command. Each command runs on its own state, so no
//! separation hypotheses between the programs are ever needed.

use crate::ast::{Command, ContractEnv, ProcEnv};
use crate::formula::{Assertion, Formula, StateTerm, StateVar};
use crate::parser::SourceModule;
use crate::vcgen::{attach_positions, Hypothesis, Result, Vc, VcError, VcGen, VcMode, VcSink};

/// Relational correctness of `commands` for `pre` and `post`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalGoal {
    pub name: String,
    pub commands: Vec<Command>,
    pub pre: Assertion,
    pub post: Assertion,
}

impl RelationalGoal {
    /// Resolves a named relational goal of a parsed module.
    pub fn from_module(m: &SourceModule, name: &str) -> Result<Self> {
        let g = m
            .rel_goal(name)
            .ok_or_else(|| VcError::UnknownGoal(name.to_string()))?;
        let commands = g
            .commands
            .iter()
            .map(|c| {
                m.commands
                    .get(c)
                    .cloned()
                    .ok_or_else(|| VcError::UnknownCommand(c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RelationalGoal {
            name: g.name.clone(),
            commands,
            pre: g.pre.clone(),
            post: g.post.clone(),
        })
    }

    /// The same goal with commands reordered: position `k` of the result
    /// holds command `perm[k]` of `self`, and the assertions are permuted to
    /// match.
    pub fn permuted(&self, perm: &[usize]) -> RelationalGoal {
        let one_based: Vec<usize> = perm.iter().map(|i| i + 1).collect();
        RelationalGoal {
            name: self.name.clone(),
            commands: perm.iter().map(|&i| self.commands[i].clone()).collect(),
            pre: self.pre.permute(&one_based),
            post: self.post.permute(&one_based),
        }
    }
}

fn check_lengths(cs: &[Command], ss: &[StateVar]) -> Result<()> {
    if cs.len() != ss.len() {
        return Err(VcError::LengthMismatch {
            commands: cs.len(),
            states: ss.len(),
        });
    }
    Ok(())
}

impl VcGen<'_> {
    /// Relational main condition of `cs` from states `ss` for `post`.
    pub fn tr(&mut self, cs: &[Command], ss: &[StateVar], post: &Assertion) -> Result<Formula> {
        check_lengths(cs, ss)?;
        if post.arity != cs.len() {
            return Err(VcError::Arity(crate::formula::ArityMismatch {
                expected: post.arity,
                found: cs.len(),
            }));
        }
        self.tr_go(cs, ss, post)
    }

    fn tr_go(&mut self, cs: &[Command], ss: &[StateVar], post: &Assertion) -> Result<Formula> {
        let Some((last, prefix)) = cs.split_last() else {
            return Ok(post.apply(&[])?);
        };
        let (s_last, s_prefix) = ss.split_last().expect("lengths checked");
        self.tc_k(last, s_last, &|g, t| {
            let rest = post.apply_last(StateTerm::from(t))?;
            g.tr_go(prefix, s_prefix, &rest)
        })
    }

    /// Conjunction of the auxiliary conditions of each command on its state.
    pub fn tar(&mut self, cs: &[Command], ss: &[StateVar]) -> Result<Formula> {
        check_lengths(cs, ss)?;
        let parts = cs
            .iter()
            .zip(ss)
            .map(|(c, s)| self.ta(c, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Formula::conj(parts))
    }
}

fn reserving<'a>(contracts: &'a ContractEnv, ss: &[StateVar]) -> VcGen<'a> {
    let mut g = VcGen::new(contracts, VcMode::Naive);
    for s in ss {
        g.reserve(s);
    }
    g
}

/// Relational main condition; fresh names avoid `ss`.
pub fn tr(cs: &[Command], ss: &[StateVar], contracts: &ContractEnv, post: &Assertion) -> Result<Formula> {
    reserving(contracts, ss).tr(cs, ss, post)
}

/// Relational auxiliary condition; fresh names avoid `ss`.
pub fn tar(cs: &[Command], ss: &[StateVar], contracts: &ContractEnv) -> Result<Formula> {
    reserving(contracts, ss).tar(cs, ss)
}

/// VCs for a relational goal: contract conditions for every procedure,
/// then `∀σ⃗. pre(σ⃗) ⇒ tar(c⃗, σ⃗)` and `∀σ⃗. pre(σ⃗) ⇒ tr(c⃗, σ⃗, post)`,
/// each split at top-level conjunctions.
pub fn relational_vcs(
    goal: &RelationalGoal,
    contracts: &ContractEnv,
    procs: &ProcEnv,
    mode: VcMode,
) -> Result<Vec<Vc>> {
    let n = goal.commands.len();
    for a in [&goal.pre, &goal.post] {
        if a.arity != n {
            return Err(VcError::Arity(crate::formula::ArityMismatch {
                expected: a.arity,
                found: n,
            }));
        }
    }
    let mut sink = VcSink::new(&goal.name);
    sink.add_tf(contracts, procs, mode)?;

    let initial = |g: &mut VcGen<'_>| -> Result<(Vec<StateVar>, Formula)> {
        let ss: Vec<StateVar> = (0..n).map(|_| g.fresh()).collect();
        let args: Vec<StateTerm> = ss.iter().map(StateTerm::from).collect();
        let pre = goal.pre.apply(&args)?;
        Ok((ss, pre))
    };

    let mut g = VcGen::new(contracts, mode);
    let (ss, pre) = initial(&mut g)?;
    let aux = g.tar(&goal.commands, &ss)?;
    sink.split(Hypothesis::Tar, None, &ss, &pre, &aux);

    let mut g = VcGen::new(contracts, mode);
    let (ss, pre) = initial(&mut g)?;
    let main = g.tr(&goal.commands, &ss, &goal.post)?;
    sink.split(Hypothesis::Tr, None, &ss, &pre, &main);
    Ok(sink.vcs)
}

/// [`relational_vcs`] for a named goal of a parsed module, with positions.
pub fn module_relational_vcs(m: &SourceModule, name: &str, mode: VcMode) -> Result<Vec<Vc>> {
    let goal = RelationalGoal::from_module(m, name)?;
    let mut vcs = relational_vcs(&goal, &m.contracts, &m.procs, mode)?;
    attach_positions(m, name, &mut vcs);
    Ok(vcs)
}
