//! Discharging verification conditions with an external SMT-LIB 2 solver.
//!
//! Each VC gets its own solver process. The script from [`emit_smt`] is
//! written to the solver's standard input; only after it answers `sat` is
//! `(get-model)` sent, so solvers that reject `get-model` after `unsat` see
//! a clean session.

mod emit;
mod model;
mod sexp;

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::process::{Command as Process, Stdio};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

pub use emit::{emit_formula, emit_smt, nat_symbol, state_symbol, EmitError, PRELUDE};
pub use model::{parse_model, parse_model_at, Model, ModelError};
pub use sexp::{parse_all, Sexp, SexpError};

use crate::formula::{Formula, StateTerm, StateVar, Term};
use crate::mem::Nat;
use crate::vcgen::Vc;

/// Environment variable naming the solver executable.
pub const SOLVER_ENV: &str = "RLV_SOLVER";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub path: String,
    pub args: Vec<String>,
    pub timeout: Duration,
    /// Replaces `ALL` in `(set-logic ALL)`.
    pub logic: Option<String>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            path: "z3".into(),
            args: vec!["-in".into()],
            timeout: Duration::from_secs(10),
            logic: None,
        }
    }
}

impl SolverConfig {
    /// Default configuration with the executable taken from `RLV_SOLVER`
    /// when set.
    pub fn from_env() -> Self {
        let mut cfg = SolverConfig::default();
        if let Ok(path) = std::env::var(SOLVER_ENV) {
            if !path.is_empty() {
                cfg.path = path;
            }
        }
        cfg
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    Timeout,
    /// The solver answered `unknown`.
    SolverUnknown,
    /// The solver could not be started.
    Spawn(String),
    /// Unexpected solver output, or a countermodel that could not be read.
    ParseFailure { message: String, output: String },
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::Timeout => f.write_str("timeout"),
            UnknownReason::SolverUnknown => f.write_str("solver says unknown"),
            UnknownReason::Spawn(msg) => write!(f, "cannot run solver: {msg}"),
            UnknownReason::ParseFailure { message, .. } => write!(f, "parse failure: {message}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// Counterexample values of the VC's top-level state variables.
    Invalid(Model),
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::Invalid(_) => "invalid",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

/// Checks `vc` with the configured solver.
pub fn solve(vc: &Vc, cfg: &SolverConfig) -> Verdict {
    let script = match emit_smt(vc) {
        Ok(s) => s,
        Err(e) => {
            return Verdict::Unknown(UnknownReason::ParseFailure {
                message: e.to_string(),
                output: String::new(),
            })
        }
    };
    let script = match &cfg.logic {
        Some(logic) => script.replacen("(set-logic ALL)", &format!("(set-logic {logic})"), 1),
        None => script,
    };
    let states = vc.top_level_states();
    let addresses = literal_addresses(&vc.formula);
    match run_solver(&script, cfg) {
        Err(reason) => Verdict::Unknown(reason),
        Ok(Answer::Unsat) => Verdict::Valid,
        Ok(Answer::Unknown) => Verdict::Unknown(UnknownReason::SolverUnknown),
        Ok(Answer::Sat(model_text)) => match parse_model_at(&model_text, &states, &addresses) {
            Ok(model) => Verdict::Invalid(model),
            Err(e) => Verdict::Unknown(UnknownReason::ParseFailure {
                message: e.to_string(),
                output: model_text,
            }),
        },
    }
}

enum Answer {
    Sat(String),
    Unsat,
    Unknown,
}

fn run_solver(script: &str, cfg: &SolverConfig) -> Result<Answer, UnknownReason> {
    let deadline = Instant::now() + cfg.timeout;
    let mut child = Process::new(&cfg.path)
        .args(&cfg.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| UnknownReason::Spawn(format!("{}: {e}", cfg.path)))?;
    let mut stdin = child.stdin.take().expect("piped");
    let stdout = child.stdout.take().expect("piped");
    let mut stderr = child.stderr.take().expect("piped");

    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        for line in BufReader::new(stdout).lines() {
            match line {
                Ok(l) => {
                    if tx.send(l).is_err() {
                        break;
                    }
                }
                Err(_) => break,
            }
        }
    });
    let err_reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });

    let finish = |mut child: std::process::Child, reason: Option<UnknownReason>| {
        if reason.is_some() {
            let _ = child.kill();
        }
        let _ = child.wait();
        reason
    };

    if let Err(e) = stdin.write_all(script.as_bytes()).and_then(|_| stdin.flush()) {
        let reason = UnknownReason::Spawn(format!("writing to solver: {e}"));
        return Err(finish(child, Some(reason)).expect("reason"));
    }

    let mut transcript = String::new();
    let answer = loop {
        let now = Instant::now();
        if now >= deadline {
            return Err(finish(child, Some(UnknownReason::Timeout)).expect("reason"));
        }
        match rx.recv_timeout(deadline - now) {
            Ok(line) => {
                let line = line.trim().to_string();
                transcript.push_str(&line);
                transcript.push('\n');
                match line.as_str() {
                    "sat" => break Answer::Sat(String::new()),
                    "unsat" => break Answer::Unsat,
                    "unknown" => break Answer::Unknown,
                    "" => {}
                    _ => {
                        // Any other output before the answer is an error
                        // report; the answer that follows cannot be trusted.
                        let reason = UnknownReason::ParseFailure {
                            message: "unexpected solver output".into(),
                            output: line,
                        };
                        return Err(finish(child, Some(reason)).expect("reason"));
                    }
                }
            }
            Err(mpsc::RecvTimeoutError::Timeout) => {
                return Err(finish(child, Some(UnknownReason::Timeout)).expect("reason"));
            }
            Err(mpsc::RecvTimeoutError::Disconnected) => {
                let _ = child.wait();
                let err = err_reader.join().unwrap_or_default();
                return Err(UnknownReason::ParseFailure {
                    message: "solver exited without an answer".into(),
                    output: format!("{transcript}{err}"),
                });
            }
        }
    };

    let answer = match answer {
        Answer::Sat(_) => {
            let _ = stdin.write_all(b"(get-model)\n(exit)\n");
            drop(stdin);
            let mut model = String::new();
            loop {
                let now = Instant::now();
                if now >= deadline {
                    return Err(finish(child, Some(UnknownReason::Timeout)).expect("reason"));
                }
                match rx.recv_timeout(deadline - now) {
                    Ok(line) => {
                        model.push_str(&line);
                        model.push('\n');
                    }
                    Err(mpsc::RecvTimeoutError::Timeout) => {
                        return Err(finish(child, Some(UnknownReason::Timeout)).expect("reason"));
                    }
                    Err(mpsc::RecvTimeoutError::Disconnected) => break,
                }
            }
            Answer::Sat(model)
        }
        other => {
            let _ = stdin.write_all(b"(exit)\n");
            drop(stdin);
            other
        }
    };
    finish(child, None);
    Ok(answer)
}

/// Literal addresses read or written anywhere in `f`.
pub fn literal_addresses(f: &Formula) -> BTreeSet<Nat> {
    fn term(t: &Term, out: &mut BTreeSet<Nat>) {
        match t {
            Term::Lit(_) | Term::Var(_) => {}
            Term::Read(s, a) => {
                if let Term::Lit(n) = a.as_ref() {
                    out.insert(n.clone());
                }
                state(s, out);
                term(a, out);
            }
            Term::Bin(_, a, b) => {
                term(a, out);
                term(b, out);
            }
        }
    }
    fn state(s: &StateTerm, out: &mut BTreeSet<Nat>) {
        if let StateTerm::Write(base, a, v) = s {
            if let Term::Lit(n) = a.as_ref() {
                out.insert(n.clone());
            }
            state(base, out);
            term(a, out);
            term(v, out);
        }
    }
    fn formula(f: &Formula, out: &mut BTreeSet<Nat>) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Cmp(_, a, b) => {
                term(a, out);
                term(b, out);
            }
            Formula::StateEq(a, b) => {
                state(a, out);
                state(b, out);
            }
            Formula::Not(a) | Formula::Quant(_, _, a) => formula(a, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                formula(a, out);
                formula(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    formula(f, &mut out);
    out
}

/// The VC `∀ states. f`, named `name`, for checking ad hoc formulas.
pub fn closed_vc(name: &str, states: &[StateVar], f: Formula) -> Vc {
    Vc {
        name: name.to_string(),
        formula: Formula::forall_states(states, f),
        origin: crate::vcgen::Origin {
            goal: name.to_string(),
            hypothesis: crate::vcgen::Hypothesis::Tc,
            procedure: None,
            pos: None,
        },
    }
}
