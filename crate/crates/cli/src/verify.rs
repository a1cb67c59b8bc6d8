//! Discharging a goal's VCs and confirming countermodels by execution.

use std::time::Instant;

use anyhow::{bail, Result};
use rayon::prelude::*;
use rlv_core::ast::ProcEnv;
use rlv_core::interp::{eval_assertion, exec, Outcome, Truth, DEFAULT_QUANT_BOUND};
use rlv_core::mem::MemState;
use rlv_core::relcheck::RelationalGoal;
use rlv_core::smt::{solve, Model, SolverConfig, UnknownReason, Verdict};
use rlv_core::vcgen::{Hypothesis, Vc};

use crate::report::{Row, Status};

/// Solves every VC, at most `jobs` at a time, keeping the input order.
pub fn discharge(vcs: &[Vc], cfg: &SolverConfig, jobs: usize) -> Result<Vec<(Verdict, u128)>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let results: Vec<(Verdict, u128)> = pool.install(|| {
        vcs.par_iter()
            .map(|vc| {
                let start = Instant::now();
                let v = solve(vc, cfg);
                (v, start.elapsed().as_millis())
            })
            .collect()
    });
    for (v, _) in &results {
        if let Verdict::Unknown(UnknownReason::Spawn(msg)) = v {
            bail!("cannot run solver: {msg}");
        }
    }
    Ok(results)
}

/// Initial and final states of a confirmed violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub initial: Vec<MemState>,
    pub finals: Vec<MemState>,
}

/// Runs the goal's commands on the initial states named by a countermodel
/// of a main-condition VC. Only a run where the precondition holds, every
/// command terminates and the postcondition fails is a counterexample.
pub fn confirm(goal: &RelationalGoal, procs: &ProcEnv, vc: &Vc, model: &Model, fuel: u64) -> Option<Counterexample> {
    if !matches!(vc.origin.hypothesis, Hypothesis::Tc | Hypothesis::Tr) {
        return None;
    }
    let names = vc.top_level_states();
    if names.len() != goal.commands.len() {
        return None;
    }
    let initial: Vec<MemState> = names.iter().map(|s| model.state(s)).collect();
    if eval_assertion(&goal.pre, &initial, DEFAULT_QUANT_BOUND).ok()? != Truth::Exact(true) {
        return None;
    }
    let mut finals = Vec::with_capacity(initial.len());
    for (c, s) in goal.commands.iter().zip(&initial) {
        match exec(c, s, procs, fuel).ok()? {
            Outcome::Final(t) => finals.push(t),
            Outcome::OutOfFuel => return None,
        }
    }
    match eval_assertion(&goal.post, &finals, DEFAULT_QUANT_BOUND).ok()? {
        Truth::Exact(false) => Some(Counterexample { initial, finals }),
        _ => None,
    }
}

/// Report rows and overall status for solved VCs of `goal`.
pub fn summarize(
    goal: &RelationalGoal,
    procs: &ProcEnv,
    vcs: &[Vc],
    results: &[(Verdict, u128)],
    fuel: u64,
) -> (Vec<Row>, Status) {
    let rows = vcs
        .iter()
        .zip(results)
        .map(|(vc, (v, ms))| Row::new(vc, v, *ms))
        .collect();
    if results.iter().all(|(v, _)| v.is_valid()) {
        return (rows, Status::Proved);
    }
    let refutation = vcs.iter().zip(results).find_map(|(vc, (v, _))| match v {
        Verdict::Invalid(model) => confirm(goal, procs, vc, model, fuel),
        _ => None,
    });
    let status = match refutation {
        Some(cex) => Status::Refuted {
            initial: cex.initial,
            finals: cex.finals,
        },
        None => Status::NotProved,
    };
    (rows, status)
}
