//! Seeded random programs, states and assertions, and the semantic oracles
//! that check Hoare triples and relational properties by execution.
//!
//! The oracles sample initial states, run the interpreter and evaluate the
//! postcondition on the final states. They can only refute a goal, never
//! prove it, which makes them the reference against which the VC
//! generators are tested: a goal whose VCs are all valid must never be
//! refuted.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ast::{
    Addr, ArithExpr, ArithOp, BoolExpr, CmpOp, Command, Contract, ContractEnv, LogicOp, ProcEnv,
};
use crate::formula::{Assertion, Formula, StateTerm, Term};
use crate::interp::{eval_assertion, exec, EvalError, InterpError, Outcome};
use crate::mem::{MemState, Nat};
use crate::parser::{HoareGoal, RelGoal, SourceModule};
use crate::relcheck::RelationalGoal;

/// Names of the procedures generated commands may call.
pub const PROC_NAMES: [&str; 2] = ["p1", "p2"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Upper bound on the number of atomic commands.
    pub max_commands: usize,
    /// Locations and literal addresses range over `1..=max_addr`.
    pub max_addr: u64,
    pub max_literal: u64,
    pub allow_loops: bool,
    pub allow_calls: bool,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_commands: 6,
            max_addr: 6,
            max_literal: 8,
            allow_loops: false,
            allow_calls: false,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// A deterministic stream of random syntax for one [`GenConfig`].
pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Self {
        assert!(cfg.max_addr >= 1, "max_addr must be at least 1");
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Generator { cfg, rng }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    fn addr(&mut self) -> u64 {
        self.rng.gen_range(1..=self.cfg.max_addr)
    }

    fn literal(&mut self) -> u64 {
        self.rng.gen_range(0..=self.cfg.max_literal)
    }

    pub fn arith(&mut self, depth: u32) -> ArithExpr {
        let leaf = depth == 0 || self.rng.gen_bool(0.6);
        if leaf {
            return match self.rng.gen_range(0..4) {
                0 => ArithExpr::constant(self.literal()),
                1 => ArithExpr::Loc(Addr(self.addr())),
                2 => ArithExpr::Deref(Addr(self.addr())),
                _ => {
                    if self.rng.gen_bool(0.3) {
                        ArithExpr::AddrOf(Addr(self.addr()))
                    } else {
                        ArithExpr::Loc(Addr(self.addr()))
                    }
                }
            };
        }
        let op = *[ArithOp::Add, ArithOp::Sub, ArithOp::Mul]
            .choose(&mut self.rng)
            .expect("nonempty");
        ArithExpr::bin(op, self.arith(depth - 1), self.arith(depth - 1))
    }

    pub fn boolean(&mut self, depth: u32) -> BoolExpr {
        let leaf = depth == 0 || self.rng.gen_bool(0.6);
        if leaf {
            return match self.rng.gen_range(0..10) {
                0 => BoolExpr::True,
                1 => BoolExpr::False,
                n => {
                    let op = if n % 2 == 0 { CmpOp::Le } else { CmpOp::Eq };
                    BoolExpr::cmp(op, self.arith(1), self.arith(1))
                }
            };
        }
        match self.rng.gen_range(0..3) {
            0 => BoolExpr::negate(self.boolean(depth - 1)),
            1 => BoolExpr::logic(LogicOp::And, self.boolean(depth - 1), self.boolean(depth - 1)),
            _ => BoolExpr::logic(LogicOp::Or, self.boolean(depth - 1), self.boolean(depth - 1)),
        }
    }

    /// A command with between one and `max_commands` atomic commands, or
    /// `skip` when `max_commands` is zero.
    pub fn command(&mut self) -> Command {
        if self.cfg.max_commands == 0 {
            return Command::Skip;
        }
        let budget = self.rng.gen_range(1..=self.cfg.max_commands);
        self.command_of(budget, 2)
    }

    fn command_of(&mut self, budget: usize, nesting: u32) -> Command {
        if budget <= 1 || nesting == 0 {
            return self.atomic();
        }
        let roll = self.rng.gen_range(0..10);
        if roll < 2 {
            let then_budget = self.rng.gen_range(1..budget);
            let b = self.boolean(1);
            let then = self.command_of(then_budget, nesting - 1);
            let otherwise = self.command_of(budget - then_budget, nesting - 1);
            Command::if_then_else(b, then, otherwise)
        } else if roll < 3 && self.cfg.allow_loops {
            let b = self.boolean(1);
            let body = self.command_of(budget - 1, nesting - 1);
            Command::while_loop(b, Assertion::truth(1), body)
        } else {
            let first_budget = self.rng.gen_range(1..budget);
            let first = self.command_of(first_budget, nesting);
            let second = self.command_of(budget - first_budget, nesting);
            Command::seq(first, second)
        }
    }

    fn atomic(&mut self) -> Command {
        let roll = self.rng.gen_range(0..20);
        match roll {
            0 => Command::Skip,
            1 => Command::Assert(self.assertion(1)),
            2 | 3 if self.cfg.allow_calls => {
                Command::Call(PROC_NAMES.choose(&mut self.rng).expect("nonempty").to_string())
            }
            4..=8 => Command::IndirectAssign(Addr(self.addr()), self.arith(1)),
            _ => Command::Assign(Addr(self.addr()), self.arith(1)),
        }
    }

    /// A memory state whose footprint lies in `0..=max_addr` with values
    /// in `0..=max(max_addr, max_literal)`; small values double as
    /// addresses, so aliasing is common.
    pub fn state(&mut self) -> MemState {
        let top = self.cfg.max_addr.max(self.cfg.max_literal);
        let mut s = MemState::new();
        for a in 0..=self.cfg.max_addr {
            let v = if self.rng.gen_bool(0.6) {
                self.rng.gen_range(0..=self.cfg.max_addr)
            } else {
                self.rng.gen_range(0..=top)
            };
            s.set(Nat::from(a), Nat::from(v));
        }
        s
    }

    /// A tuple of `n` states; later states are often perturbed copies of
    /// the first, as relational preconditions usually relate them.
    pub fn states(&mut self, n: usize) -> Vec<MemState> {
        let mut out: Vec<MemState> = Vec::with_capacity(n);
        for k in 0..n {
            if k > 0 && self.rng.gen_bool(0.5) {
                let mut s = out[0].clone();
                for _ in 0..self.rng.gen_range(0..=2) {
                    let a = self.rng.gen_range(0..=self.cfg.max_addr);
                    let v = self.literal();
                    s.set(Nat::from(a), Nat::from(v));
                }
                out.push(s);
            } else {
                let s = self.state();
                out.push(s);
            }
        }
        out
    }

    fn read(&mut self, arity: usize) -> Term {
        let k = self.rng.gen_range(1..=arity);
        let addr = if self.rng.gen_bool(0.3) {
            let inner = self.rng.gen_range(1..=arity);
            Term::read(StateTerm::Param(inner), Term::lit(self.addr()))
        } else {
            Term::lit(self.addr())
        };
        Term::read(StateTerm::Param(k), addr)
    }

    fn term(&mut self, arity: usize, depth: u32) -> Term {
        if depth == 0 || self.rng.gen_bool(0.7) {
            return if arity > 0 && self.rng.gen_bool(0.75) {
                self.read(arity)
            } else {
                Term::lit(self.literal())
            };
        }
        let op = *[ArithOp::Add, ArithOp::Sub, ArithOp::Mul]
            .choose(&mut self.rng)
            .expect("nonempty");
        Term::bin(op, self.term(arity, depth - 1), self.term(arity, depth - 1))
    }

    fn formula(&mut self, arity: usize, depth: u32) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.5) {
            return match self.rng.gen_range(0..12) {
                0 => Formula::True,
                1 => Formula::False,
                n => {
                    let op = if n % 2 == 0 { CmpOp::Le } else { CmpOp::Eq };
                    Formula::cmp(op, self.term(arity, 1), self.term(arity, 1))
                }
            };
        }
        match self.rng.gen_range(0..4) {
            0 => Formula::not(self.formula(arity, depth - 1)),
            1 => Formula::and(self.formula(arity, depth - 1), self.formula(arity, depth - 1)),
            2 => Formula::or(self.formula(arity, depth - 1), self.formula(arity, depth - 1)),
            _ => Formula::implies(self.formula(arity, depth - 1), self.formula(arity, depth - 1)),
        }
    }

    /// A quantifier-free assertion over `arity` states.
    pub fn assertion(&mut self, arity: usize) -> Assertion {
        Assertion::new(arity, self.formula(arity, 2))
    }

    /// Loop-free, call-free bodies for [`PROC_NAMES`] with trivial
    /// contracts.
    pub fn procedures(&mut self) -> (ProcEnv, ContractEnv) {
        let mut procs = ProcEnv::new();
        let mut contracts = ContractEnv::new();
        let budget = self.cfg.max_commands.clamp(1, 3);
        for name in PROC_NAMES {
            let size = self.rng.gen_range(1..=budget);
            let body = self.command_of(size, 1);
            let body = strip_calls(body);
            procs.insert(name.to_string(), body);
            contracts.insert(
                name.to_string(),
                Contract {
                    pre: Assertion::truth(1),
                    post: Assertion::truth(1),
                },
            );
        }
        (procs, contracts)
    }

    /// Pre- and postconditions for `commands`. Either both are random, or
    /// the precondition pins a few cells of each initial state and the
    /// postcondition states the final cells that came out the same in
    /// every trial run from states meeting the pins. The latter are often
    /// valid, which random goals rarely are.
    pub fn conditions(
        &mut self,
        commands: &[Command],
        procs: &ProcEnv,
        fuel: u64,
    ) -> (Assertion, Assertion) {
        const TRIALS: usize = 16;
        let n = commands.len();
        if n == 0 || self.rng.gen_bool(0.4) {
            return self.random_conditions(n);
        }
        let mut addrs: Vec<u64> = (1..=self.cfg.max_addr).collect();
        let mut pins: Vec<Vec<(u64, Nat)>> = Vec::with_capacity(n);
        let sample = self.states(n);
        for s in &sample {
            addrs.shuffle(&mut self.rng);
            let m = self.rng.gen_range(1..=3.min(addrs.len()));
            pins.push(addrs[..m].iter().map(|&a| (a, s.get_u64(a))).collect());
        }
        // constant[k][a - 1]: the final value of cell `a` of state `k` if
        // it was the same in every terminating trial.
        let width = self.cfg.max_addr as usize;
        let mut constant: Vec<Vec<Option<Nat>>> = Vec::new();
        for _ in 0..TRIALS {
            let mut init = self.states(n);
            for (s, pin) in init.iter_mut().zip(&pins) {
                for (a, v) in pin {
                    s.set(Nat::from(*a), v.clone());
                }
            }
            let finals: Option<Vec<MemState>> = commands
                .iter()
                .zip(&init)
                .map(|(c, s)| match exec(c, s, procs, fuel) {
                    Ok(Outcome::Final(t)) => Some(t),
                    _ => None,
                })
                .collect();
            let Some(finals) = finals else { continue };
            let row = |t: &MemState| (1..=width as u64).map(|a| Some(t.get_u64(a))).collect::<Vec<_>>();
            if constant.is_empty() {
                constant = finals.iter().map(row).collect();
            } else {
                for (known, t) in constant.iter_mut().zip(&finals) {
                    for (cell, now) in known.iter_mut().zip(row(t)) {
                        if *cell != now {
                            *cell = None;
                        }
                    }
                }
            }
        }
        if constant.is_empty() {
            return self.random_conditions(n);
        }
        let pre = Assertion::new(n, Formula::conj(pins.iter().enumerate().flat_map(|(k, pin)| {
            pin.iter().map(move |(a, v)| cell_is(k, *a, v.clone()))
        })));
        let mut facts: Vec<(usize, u64, Nat)> = Vec::new();
        for (k, known) in constant.into_iter().enumerate() {
            for (i, v) in known.into_iter().enumerate() {
                if let Some(v) = v {
                    facts.push((k, i as u64 + 1, v));
                }
            }
        }
        if !facts.is_empty() && self.rng.gen_bool(0.25) {
            let i = self.rng.gen_range(0..facts.len());
            facts[i].2 += 1u32;
        }
        let post = Assertion::new(n, Formula::conj(facts.into_iter().map(|(k, a, v)| cell_is(k, a, v))));
        (pre, post)
    }

    fn random_conditions(&mut self, n: usize) -> (Assertion, Assertion) {
        let pre = self.assertion(n);
        let post = if self.rng.gen_bool(0.2) {
            Assertion::truth(n)
        } else {
            self.assertion(n)
        };
        (pre, post)
    }

    /// A Hoare goal over a command drawn from this generator.
    pub fn hoare_goal(&mut self, procs: &ProcEnv, fuel: u64) -> (Assertion, Command, Assertion) {
        let c = self.command();
        let (pre, post) = self.conditions(std::slice::from_ref(&c), procs, fuel);
        (pre, c, post)
    }

    /// A relational goal over `n` commands.
    pub fn relational_goal(&mut self, name: &str, n: usize, procs: &ProcEnv, fuel: u64) -> RelationalGoal {
        let commands: Vec<Command> = (0..n).map(|_| self.command()).collect();
        let (pre, post) = self.conditions(&commands, procs, fuel);
        RelationalGoal {
            name: name.to_string(),
            commands,
            pre,
            post,
        }
    }
}

/// `at(k + 1, a) = v`.
fn cell_is(k: usize, a: u64, v: Nat) -> Formula {
    Formula::eq(Term::read(StateTerm::Param(k + 1), Term::lit(a)), Term::Lit(v))
}

fn strip_calls(c: Command) -> Command {
    match c {
        Command::Call(_) => Command::Skip,
        Command::Seq(a, b) => Command::seq(strip_calls(*a), strip_calls(*b)),
        Command::If(b, t, e) => Command::if_then_else(b, strip_calls(*t), strip_calls(*e)),
        Command::While(b, inv, body) => Command::while_loop(b, inv, strip_calls(*body)),
        other => other,
    }
}

/// The command drawn first from the stream for `cfg`.
pub fn gen_command(cfg: &GenConfig) -> Command {
    Generator::new(cfg.clone()).command()
}

/// The state drawn first from the stream for `cfg`.
pub fn gen_state(cfg: &GenConfig) -> MemState {
    Generator::new(cfg.clone()).state()
}

/// The assertion drawn first from the stream for `cfg`.
pub fn gen_assertion(cfg: &GenConfig, arity: usize) -> Assertion {
    Generator::new(cfg.clone()).assertion(arity)
}

/// Builds a module with `hoare` Hoare goals named `h<k>` and `relational`
/// relational goals named `r<k>` over 1, 2 or 3 commands. Procedures are
/// included when `cfg.allow_calls` is set. The result depends only on
/// `cfg`.
pub fn gen_corpus(cfg: &GenConfig, hoare: usize, relational: usize, fuel: u64) -> SourceModule {
    let mut g = Generator::new(cfg.clone());
    let mut m = SourceModule::default();
    if cfg.allow_calls {
        let (procs, contracts) = g.procedures();
        m.procs = procs;
        m.contracts = contracts;
    }
    for k in 0..hoare {
        let (pre, c, post) = g.hoare_goal(&m.procs, fuel);
        let cname = format!("hc{k}");
        m.commands.insert(cname.clone(), c);
        m.hoare_goals.push(HoareGoal {
            name: format!("h{k}"),
            pre,
            command: cname,
            post,
        });
    }
    for k in 0..relational {
        let n = 1 + k % 3;
        let goal = g.relational_goal(&format!("r{k}"), n, &m.procs, fuel);
        let mut names = Vec::new();
        for (i, c) in goal.commands.into_iter().enumerate() {
            let cname = format!("rc{k}_{}", i + 1);
            m.commands.insert(cname.clone(), c);
            names.push(cname);
        }
        m.rel_goals.push(RelGoal {
            name: goal.name,
            commands: names,
            pre: goal.pre,
            post: goal.post,
        });
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub samples: usize,
    pub fuel: u64,
    pub seed: u64,
    pub max_addr: u64,
    pub max_literal: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            samples: 500,
            fuel: 10_000,
            seed: 0,
            max_addr: 8,
            max_literal: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// No sample refuted the goal; `checked` samples satisfied the
    /// precondition and terminated.
    Consistent { checked: usize },
    /// Initial states satisfying the precondition whose terminating runs
    /// end in states violating the postcondition.
    Violation {
        initial: Vec<MemState>,
        finals: Vec<MemState>,
    },
}

impl OracleVerdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, OracleVerdict::Violation { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("oracles need quantifier-free assertions")]
    Quantified,
}

/// Top-level conjuncts `at(k, a) = v` of `pre` with literal `a` and `v`,
/// as `(k - 1, a, v)`. Samples are made to satisfy them up front, since a
/// random state almost never does; every sample is still checked against
/// the whole precondition.
fn literal_pins(pre: &Assertion) -> Vec<(usize, Nat, Nat)> {
    pre.body
        .conjuncts()
        .into_iter()
        .filter_map(|c| match c {
            Formula::Cmp(CmpOp::Eq, Term::Read(s, a), Term::Lit(v))
            | Formula::Cmp(CmpOp::Eq, Term::Lit(v), Term::Read(s, a)) => match (s.as_ref(), a.as_ref()) {
                (StateTerm::Param(k), Term::Lit(a)) if *k >= 1 && *k <= pre.arity => {
                    Some((k - 1, a.clone(), v.clone()))
                }
                _ => None,
            },
            _ => None,
        })
        .collect()
}

/// Checks `{pre} c {post}` on sampled states.
pub fn hoare_oracle(
    pre: &Assertion,
    c: &Command,
    post: &Assertion,
    procs: &ProcEnv,
    cfg: &SampleConfig,
) -> Result<OracleVerdict, OracleError> {
    let goal = RelationalGoal {
        name: String::new(),
        commands: vec![c.clone()],
        pre: pre.clone(),
        post: post.clone(),
    };
    rel_oracle(&goal, procs, cfg)
}

/// Checks a relational goal on sampled tuples of states.
pub fn rel_oracle(
    goal: &RelationalGoal,
    procs: &ProcEnv,
    cfg: &SampleConfig,
) -> Result<OracleVerdict, OracleError> {
    if !goal.pre.is_quantifier_free() || !goal.post.is_quantifier_free() {
        return Err(OracleError::Quantified);
    }
    let mut g = Generator::new(GenConfig {
        max_addr: cfg.max_addr.max(1),
        max_literal: cfg.max_literal,
        seed: cfg.seed,
        ..GenConfig::default()
    });
    let n = goal.commands.len();
    let pins = literal_pins(&goal.pre);
    let mut checked = 0;
    // With no commands there is a single tuple to check.
    let samples = if n == 0 { 1 } else { cfg.samples };
    'sample: for _ in 0..samples {
        let mut initial = g.states(n);
        for (k, a, v) in &pins {
            initial[*k].set(a.clone(), v.clone());
        }
        if !eval_assertion(&goal.pre, &initial, 0)?.holds() {
            continue;
        }
        let mut finals = Vec::with_capacity(n);
        for (c, s) in goal.commands.iter().zip(&initial) {
            match exec(c, s, procs, cfg.fuel)? {
                Outcome::Final(t) => finals.push(t),
                Outcome::OutOfFuel => continue 'sample,
            }
        }
        checked += 1;
        if !eval_assertion(&goal.post, &finals, 0)?.holds() {
            return Ok(OracleVerdict::Violation { initial, finals });
        }
    }
    Ok(OracleVerdict::Consistent { checked })
}
