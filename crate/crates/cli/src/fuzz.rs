//! Differential soundness testing: generated goals are checked both by the
//! solver and by the sampling oracles, and any goal whose VCs are all valid
//! but which the oracle refutes is reported as unsound.

use anyhow::{bail, Result};
use rayon::prelude::*;
use rlv_core::parser::SourceModule;
use rlv_core::relcheck::{relational_vcs, RelationalGoal};
use rlv_core::smt::{solve, SolverConfig, UnknownReason, Verdict};
use rlv_core::testkit::{rel_oracle, OracleVerdict, SampleConfig};
use rlv_core::vcgen::{hoare_vcs, VcMode};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct GoalOutcome {
    pub goal: String,
    pub commands: usize,
    pub vcs: usize,
    pub proved: bool,
    pub unknown: usize,
    pub oracle_violation: bool,
    pub oracle_checked: usize,
}

impl GoalOutcome {
    pub fn unsound(&self) -> bool {
        self.proved && self.oracle_violation
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub goals: usize,
    pub proved: usize,
    pub oracle_violations: usize,
    pub solver_unknowns: usize,
    pub unsound: Vec<String>,
    pub outcomes: Vec<GoalOutcome>,
}

impl FuzzSummary {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "seed {}: {} goals, {} proved, {} refuted by the oracle, {} unknown VCs, {} unsound\n",
            self.seed,
            self.goals,
            self.proved,
            self.oracle_violations,
            self.solver_unknowns,
            self.unsound.len()
        );
        for g in &self.unsound {
            s.push_str(&format!("  unsound: {g}\n"));
        }
        s
    }
}

fn check_goal(
    m: &SourceModule,
    goal: RelationalGoal,
    hoare: bool,
    mode: VcMode,
    solver: &SolverConfig,
    samples: &SampleConfig,
) -> Result<GoalOutcome> {
    let vcs = if hoare {
        hoare_vcs(
            &goal.name,
            &goal.pre,
            &goal.commands[0],
            &goal.post,
            &m.contracts,
            &m.procs,
            mode,
        )?
    } else {
        relational_vcs(&goal, &m.contracts, &m.procs, mode)?
    };
    let mut proved = true;
    let mut unknown = 0;
    for vc in &vcs {
        match solve(vc, solver) {
            Verdict::Valid => {}
            Verdict::Invalid(_) => proved = false,
            Verdict::Unknown(UnknownReason::Spawn(msg)) => bail!("cannot run solver: {msg}"),
            Verdict::Unknown(_) => {
                proved = false;
                unknown += 1;
            }
        }
    }
    let oracle = rel_oracle(&goal, &m.procs, samples)?;
    let (oracle_violation, oracle_checked) = match oracle {
        OracleVerdict::Consistent { checked } => (false, checked),
        OracleVerdict::Violation { .. } => (true, 0),
    };
    Ok(GoalOutcome {
        goal: goal.name,
        commands: goal.commands.len(),
        vcs: vcs.len(),
        proved,
        unknown,
        oracle_violation,
        oracle_checked,
    })
}

/// Checks every goal of a generated corpus.
pub fn run_corpus(
    m: &SourceModule,
    seed: u64,
    mode: VcMode,
    solver: &SolverConfig,
    samples: &SampleConfig,
    jobs: usize,
) -> Result<FuzzSummary> {
    let mut goals: Vec<(RelationalGoal, bool)> = Vec::new();
    for g in &m.hoare_goals {
        goals.push((
            RelationalGoal {
                name: g.name.clone(),
                commands: vec![m.commands[&g.command].clone()],
                pre: g.pre.clone(),
                post: g.post.clone(),
            },
            true,
        ));
    }
    for g in &m.rel_goals {
        goals.push((RelationalGoal::from_module(m, &g.name)?, false));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let outcomes = pool.install(|| {
        goals
            .into_par_iter()
            .enumerate()
            .map(|(k, (goal, hoare))| {
                let samples = SampleConfig {
                    seed: samples.seed.wrapping_add(k as u64),
                    ..samples.clone()
                };
                check_goal(m, goal, hoare, mode, solver, &samples)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(FuzzSummary {
        seed,
        goals: outcomes.len(),
        proved: outcomes.iter().filter(|o| o.proved).count(),
        oracle_violations: outcomes.iter().filter(|o| o.oracle_violation).count(),
        solver_unknowns: outcomes.iter().map(|o| o.unknown).sum(),
        unsound: outcomes.iter().filter(|o| o.unsound()).map(|o| o.goal.clone()).collect(),
        outcomes,
    })
}
