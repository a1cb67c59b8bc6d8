//! `rlv`: checks Hoare goals and relational goals of `.rl` files with an
//! SMT solver, runs commands, emits SMT-LIB scripts and fuzzes the VC
//! generators against the interpreter.
//!
//! Exit codes: 0 when every goal is proved (or a run terminates), 1 when a
//! goal is not proved or refuted (or a run is out of fuel), 2 for usage
//! errors, parse errors and a missing solver.

mod fuzz;
mod report;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rlv_core::interp::{exec, Outcome};
use rlv_core::mem::{MemState, Nat};
use rlv_core::parser::{parse_module, pretty_print, SourceModule};
use rlv_core::relcheck::{module_relational_vcs, RelationalGoal};
use rlv_core::smt::{emit_smt, SolverConfig};
use rlv_core::testkit::{gen_corpus, GenConfig, SampleConfig};
use rlv_core::vcgen::{module_hoare_vcs, Vc, VcMode};

use report::RunReport;

#[derive(Parser)]
#[command(name = "rlv", version, about = "Deductive verifier for Hoare triples and relational properties")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Prove a Hoare goal.
    Check {
        file: PathBuf,
        goal: String,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Prove a relational goal.
    Rcheck {
        file: PathBuf,
        relation: String,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Execute a named command and print the final state.
    Run {
        file: PathBuf,
        command: String,
        /// Initial memory as `addr=value,...`; unlisted cells are 0.
        #[arg(long, default_value = "")]
        mem: String,
        #[arg(long, default_value_t = 10_000)]
        fuel: u64,
    },
    /// Write one SMT-LIB 2 script per VC of a Hoare or relational goal.
    EmitSmt {
        file: PathBuf,
        goal: String,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Naive)]
        vcgen: Mode,
    },
    /// Check generated goals with both the solver and the sampling oracles.
    Fuzz(FuzzOpts),
}

#[derive(Args, Clone)]
struct SolveOpts {
    /// Solver executable; defaults to $RLV_SOLVER, then `z3`.
    #[arg(long)]
    solver: Option<String>,
    /// Per-VC timeout in seconds.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    timeout: u64,
    #[arg(long, value_enum, default_value_t = Mode::Naive)]
    vcgen: Mode,
    /// Fuel for executing countermodels.
    #[arg(long, default_value_t = 10_000)]
    fuel: u64,
    /// Number of VCs solved in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    json: bool,
}

impl SolveOpts {
    fn solver(&self) -> SolverConfig {
        let mut cfg = SolverConfig::from_env().with_timeout(Duration::from_secs(self.timeout));
        if let Some(path) = &self.solver {
            cfg.path = path.clone();
        }
        cfg
    }
}

#[derive(Args, Clone)]
struct FuzzOpts {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of Hoare goals.
    #[arg(long, default_value_t = 100)]
    hoare: usize,
    /// Number of relational goals, over 1, 2 and 3 commands in turn.
    #[arg(long, default_value_t = 30)]
    relational: usize,
    /// States sampled per goal by the oracle.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 6)]
    max_commands: usize,
    #[arg(long)]
    loops: bool,
    #[arg(long)]
    calls: bool,
    /// Also write the generated goals as a `.rl` file.
    #[arg(long)]
    corpus_out: Option<PathBuf>,
    /// Only generate the corpus; do not check it.
    #[arg(long)]
    generate_only: bool,
    #[command(flatten)]
    opts: SolveOpts,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Naive,
    Opt,
}

impl Mode {
    fn vc_mode(self) -> VcMode {
        match self {
            Mode::Naive => VcMode::Naive,
            Mode::Opt => VcMode::Opt,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Mode::Naive => "naive",
            Mode::Opt => "opt",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Cmd::Check { file, goal, opts } => check(&file, &goal, &opts, false),
        Cmd::Rcheck { file, relation, opts } => check(&file, &relation, &opts, true),
        Cmd::Run {
            file,
            command,
            mem,
            fuel,
        } => run_command(&file, &command, &mem, fuel),
        Cmd::EmitSmt {
            file,
            goal,
            out_dir,
            vcgen,
        } => emit(&file, &goal, &out_dir, vcgen),
        Cmd::Fuzz(opts) => fuzz_cmd(&opts),
    }
}

fn load(file: &Path) -> Result<SourceModule> {
    let text = fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    parse_module(&text).map_err(|diags| {
        let name = file.display().to_string();
        anyhow!(diags.iter().map(|d| d.render(&name)).collect::<Vec<_>>().join("\n"))
    })
}

fn goal_of(m: &SourceModule, name: &str, relational: bool) -> Result<RelationalGoal> {
    if relational {
        return Ok(RelationalGoal::from_module(m, name)?);
    }
    let g = m
        .hoare_goal(name)
        .ok_or_else(|| anyhow!("no Hoare goal named `{name}`"))?;
    let c = m
        .commands
        .get(&g.command)
        .ok_or_else(|| anyhow!("no command named `{}`", g.command))?;
    Ok(RelationalGoal {
        name: g.name.clone(),
        commands: vec![c.clone()],
        pre: g.pre.clone(),
        post: g.post.clone(),
    })
}

fn vcs_of(m: &SourceModule, name: &str, relational: bool, mode: VcMode) -> Result<Vec<Vc>> {
    Ok(if relational {
        module_relational_vcs(m, name, mode)?
    } else {
        module_hoare_vcs(m, name, mode)?
    })
}

fn check(file: &Path, name: &str, opts: &SolveOpts, relational: bool) -> Result<u8> {
    let m = load(file)?;
    let goal = goal_of(&m, name, relational)?;
    let vcs = vcs_of(&m, name, relational, opts.vcgen.vc_mode())?;
    let results = verify::discharge(&vcs, &opts.solver(), opts.jobs)?;
    let (rows, status) = verify::summarize(&goal, &m.procs, &vcs, &results, opts.fuel);
    let report = RunReport {
        file: file.display().to_string(),
        goal: name.to_string(),
        vcgen: opts.vcgen.name().to_string(),
        rows,
        status,
    };
    if opts.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.to_table());
    }
    Ok(report.status.exit_code())
}

fn parse_mem(spec: &str) -> Result<MemState> {
    let mut s = MemState::new();
    for item in spec.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (a, v) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("bad memory cell `{item}`; expected addr=value"))?;
        let a: Nat = a.trim().parse().map_err(|_| anyhow!("bad address `{a}`"))?;
        let v: Nat = v.trim().parse().map_err(|_| anyhow!("bad value `{v}`"))?;
        s.set(a, v);
    }
    Ok(s)
}

fn run_command(file: &Path, name: &str, mem: &str, fuel: u64) -> Result<u8> {
    let m = load(file)?;
    let c = m
        .commands
        .get(name)
        .ok_or_else(|| anyhow!("no command named `{name}`"))?;
    let init = parse_mem(mem)?;
    match exec(c, &init, &m.procs, fuel)? {
        Outcome::Final(s) => {
            println!("{s}");
            Ok(0)
        }
        Outcome::OutOfFuel => {
            println!("out of fuel");
            Ok(1)
        }
    }
}

fn emit(file: &Path, name: &str, out_dir: &Path, mode: Mode) -> Result<u8> {
    let m = load(file)?;
    let relational = if m.hoare_goal(name).is_some() {
        false
    } else if m.rel_goal(name).is_some() {
        true
    } else {
        bail!("no goal named `{name}`");
    };
    let vcs = vcs_of(&m, name, relational, mode.vc_mode())?;
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    for vc in &vcs {
        let path = out_dir.join(format!("{}.smt2", vc.name));
        fs::write(&path, emit_smt(vc)?).with_context(|| format!("cannot write {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(0)
}

fn fuzz_cmd(f: &FuzzOpts) -> Result<u8> {
    let gen = GenConfig {
        max_commands: f.max_commands,
        allow_loops: f.loops,
        allow_calls: f.calls,
        ..GenConfig::default().with_seed(f.seed)
    };
    let corpus = gen_corpus(&gen, f.hoare, f.relational, f.opts.fuel);
    if let Some(path) = &f.corpus_out {
        fs::write(path, pretty_print(&corpus)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if f.generate_only {
        return Ok(0);
    }
    let samples = SampleConfig {
        samples: f.samples,
        fuel: f.opts.fuel,
        seed: f.seed,
        max_addr: gen.max_addr + 2,
        max_literal: gen.max_literal,
    };
    let summary = fuzz::run_corpus(
        &corpus,
        f.seed,
        f.opts.vcgen.vc_mode(),
        &f.opts.solver(),
        &samples,
        f.opts.jobs,
    )?;
    if f.opts.json {
        println!("{}", serde_json::to_string_pretty(&summary)?);
    } else {
        print!("{}", summary.to_text());
    }
    Ok(if summary.unsound.is_empty() { 0 } else { 1 })
}
