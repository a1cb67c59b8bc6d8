//! Abstract syntax of the language: arithmetic and Boolean expressions over
//! numbered locations, and commands with annotations and procedure calls.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::formula::Assertion;
use crate::mem::Nat;

/// Address of location `x_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Addr(pub u64);

impl Addr {
    pub fn to_nat(self) -> Nat {
        Nat::from(self.0)
    }
}

impl fmt::Display for Addr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Mul,
    /// Truncated subtraction.
    Sub,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Mul => "*",
            ArithOp::Sub => "-",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogicOp {
    And,
    Or,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArithExpr {
    Const(Nat),
    Loc(Addr),
    Deref(Addr),
    AddrOf(Addr),
    BinOp(ArithOp, Box<ArithExpr>, Box<ArithExpr>),
}

impl ArithExpr {
    pub fn constant(n: u64) -> Self {
        ArithExpr::Const(Nat::from(n))
    }

    pub fn bin(op: ArithOp, lhs: ArithExpr, rhs: ArithExpr) -> Self {
        ArithExpr::BinOp(op, Box::new(lhs), Box::new(rhs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    True,
    False,
    Cmp(CmpOp, ArithExpr, ArithExpr),
    Logic(LogicOp, Box<BoolExpr>, Box<BoolExpr>),
    Not(Box<BoolExpr>),
}

impl BoolExpr {
    pub fn cmp(op: CmpOp, lhs: ArithExpr, rhs: ArithExpr) -> Self {
        BoolExpr::Cmp(op, lhs, rhs)
    }

    pub fn logic(op: LogicOp, lhs: BoolExpr, rhs: BoolExpr) -> Self {
        BoolExpr::Logic(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn negate(b: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(b))
    }
}

pub type ProcName = String;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Skip,
    Assign(Addr, ArithExpr),
    /// `*x_i := a`: writes to the address stored in `x_i`.
    IndirectAssign(Addr, ArithExpr),
    Seq(Box<Command>, Box<Command>),
    Assert(Assertion),
    If(BoolExpr, Box<Command>, Box<Command>),
    While(BoolExpr, Assertion, Box<Command>),
    Call(ProcName),
}

impl Command {
    pub fn seq(first: Command, second: Command) -> Self {
        Command::Seq(Box::new(first), Box::new(second))
    }

    /// Right-nested sequence of `cmds`; `skip` when empty.
    pub fn seq_all(cmds: impl IntoIterator<Item = Command>) -> Self {
        let mut cmds: Vec<Command> = cmds.into_iter().collect();
        let Some(mut acc) = cmds.pop() else {
            return Command::Skip;
        };
        while let Some(c) = cmds.pop() {
            acc = Command::seq(c, acc);
        }
        acc
    }

    pub fn if_then_else(cond: BoolExpr, then: Command, otherwise: Command) -> Self {
        Command::If(cond, Box::new(then), Box::new(otherwise))
    }

    pub fn while_loop(cond: BoolExpr, inv: Assertion, body: Command) -> Self {
        Command::While(cond, inv, Box::new(body))
    }

    /// The divergent loop `while (true) inv (true) { skip }`.
    pub fn diverge() -> Self {
        Command::while_loop(BoolExpr::True, Assertion::truth(1), Command::Skip)
    }

    /// Number of command nodes.
    pub fn size(&self) -> usize {
        match self {
            Command::Seq(a, b) | Command::If(_, a, b) => 1 + a.size() + b.size(),
            Command::While(_, _, body) => 1 + body.size(),
            _ => 1,
        }
    }

    /// Names of all procedures called directly from this command.
    pub fn called_procs(&self) -> BTreeSet<ProcName> {
        let mut out = BTreeSet::new();
        self.collect_calls(&mut out);
        out
    }

    fn collect_calls(&self, out: &mut BTreeSet<ProcName>) {
        match self {
            Command::Call(y) => {
                out.insert(y.clone());
            }
            Command::Seq(a, b) | Command::If(_, a, b) => {
                a.collect_calls(out);
                b.collect_calls(out);
            }
            Command::While(_, _, body) => body.collect_calls(out),
            _ => {}
        }
    }

    pub fn has_loops(&self) -> bool {
        match self {
            Command::While(..) => true,
            Command::Seq(a, b) | Command::If(_, a, b) => a.has_loops() || b.has_loops(),
            _ => false,
        }
    }
}

/// Procedure bodies by name.
pub type ProcEnv = BTreeMap<ProcName, Command>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contract {
    pub pre: Assertion,
    pub post: Assertion,
}

/// Procedure contracts by name.
pub type ContractEnv = BTreeMap<ProcName, Contract>;
