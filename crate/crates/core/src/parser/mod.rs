//! The `.rl` source format.
//!
//! One file holds procedure definitions with contracts, named commands,
//! Hoare goals and relational goals:
//!
//! ```text
//! proc y1 pre (at(1) <= at(4)) post (at(2) = at(3) * at(4)) {
//!   if (x1 > 0) { x2 := x2 + x3; x1 := x1 - 1; call y1 } else { skip }
//! }
//! command c { x1 := x4; x2 := 0; call y1 }
//! hoare ok pre (true) cmd c post (at(2) = at(4) * at(3))
//! relation r on (c, c) pre (at(1, 4) = at(2, 4)) post (at(1, 2) = at(2, 2))
//! ```
//!
//! Program locations are `xN`; `*xN` dereferences and `&xN` takes the
//! address. In assertions, `at(e)` reads the single state of a unary
//! assertion and `at(k, e)` reads the k-th state of a relational one.
//! `<`, `>`, `>=` and `!=` are desugared into `<=`, `=` and `!`; `-` is
//! truncated subtraction.

mod lexer;
mod printer;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ast::{
    Addr, ArithExpr, ArithOp, BoolExpr, CmpOp, Command, Contract, ContractEnv, LogicOp, ProcEnv,
};
use crate::formula::{assertion_check, Assertion, Formula, StateTerm, Term};

use lexer::{tokenize, Tok, Token};

pub use printer::{pretty_print, print_assertion, print_command};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            pos,
            message: message.into(),
        }
    }

    /// `file:line:col: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{}: {}", self.pos, self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoareGoal {
    pub name: String,
    pub pre: Assertion,
    pub command: String,
    pub post: Assertion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelGoal {
    pub name: String,
    pub commands: Vec<String>,
    pub pre: Assertion,
    pub post: Assertion,
}

/// A parsed and resolved `.rl` file.
#[derive(Clone, Debug, Default)]
pub struct SourceModule {
    pub procs: ProcEnv,
    pub contracts: ContractEnv,
    pub commands: BTreeMap<String, Command>,
    pub hoare_goals: Vec<HoareGoal>,
    pub rel_goals: Vec<RelGoal>,
    /// Declaration positions keyed `proc:NAME`, `command:NAME` or
    /// `goal:NAME`; not part of structural equality.
    pub positions: BTreeMap<String, Pos>,
}

impl PartialEq for SourceModule {
    fn eq(&self, other: &Self) -> bool {
        self.procs == other.procs
            && self.contracts == other.contracts
            && self.commands == other.commands
            && self.hoare_goals == other.hoare_goals
            && self.rel_goals == other.rel_goals
    }
}

impl Eq for SourceModule {}

impl SourceModule {
    pub fn hoare_goal(&self, name: &str) -> Option<&HoareGoal> {
        self.hoare_goals.iter().find(|g| g.name == name)
    }

    pub fn rel_goal(&self, name: &str) -> Option<&RelGoal> {
        self.rel_goals.iter().find(|g| g.name == name)
    }

    pub fn goal_pos(&self, name: &str) -> Option<Pos> {
        self.positions.get(&format!("goal:{name}")).copied()
    }

    pub fn proc_pos(&self, name: &str) -> Option<Pos> {
        self.positions.get(&format!("proc:{name}")).copied()
    }
}

pub fn parse_module(text: &str) -> Result<SourceModule, Vec<Diagnostic>> {
    let tokens = tokenize(text).map_err(|d| vec![d])?;
    let mut parser = Parser { tokens, at: 0 };
    let decls = parser.module().map_err(|d| vec![d])?;
    resolve(decls)
}

/// Parses a single command, e.g. for tests and tooling. Calls are not
/// resolved.
pub fn parse_command(text: &str) -> Result<Command, Diagnostic> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, at: 0 };
    let c = parser.sequence(&[Tok::Eof])?;
    parser.expect(Tok::Eof)?;
    Ok(c)
}

/// Parses an assertion of the given arity.
pub fn parse_assertion(text: &str, arity: usize) -> Result<Assertion, Diagnostic> {
    let tokens = tokenize(text)?;
    let start = tokens[0].pos;
    let mut parser = Parser { tokens, at: 0 };
    let body = parser.formula(arity)?;
    parser.expect(Tok::Eof)?;
    let a = Assertion::new(arity, body);
    assertion_check(&a).map_err(|e| Diagnostic::new(start, e.to_string()))?;
    Ok(a)
}

enum Decl {
    Proc {
        name: String,
        pos: Pos,
        pre: Assertion,
        post: Assertion,
        body: Command,
    },
    Command {
        name: String,
        pos: Pos,
        body: Command,
    },
    Hoare {
        goal: HoareGoal,
        pos: Pos,
        cmd_pos: Pos,
    },
    Relation {
        goal: RelGoal,
        pos: Pos,
        cmd_pos: Vec<Pos>,
    },
}

fn resolve(decls: Vec<Decl>) -> Result<SourceModule, Vec<Diagnostic>> {
    let mut m = SourceModule::default();
    let mut diags = Vec::new();
    let mut goal_names = BTreeSet::new();
    let mut call_sites: Vec<(String, Command, Pos)> = Vec::new();
    let mut refs: Vec<(String, Pos)> = Vec::new();

    for d in decls {
        match d {
            Decl::Proc {
                name,
                pos,
                pre,
                post,
                body,
            } => {
                if m.procs.contains_key(&name) {
                    diags.push(Diagnostic::new(pos, format!("duplicate procedure `{name}`")));
                    continue;
                }
                call_sites.push((name.clone(), body.clone(), pos));
                m.positions.insert(format!("proc:{name}"), pos);
                m.procs.insert(name.clone(), body);
                m.contracts.insert(name, Contract { pre, post });
            }
            Decl::Command { name, pos, body } => {
                if m.commands.contains_key(&name) {
                    diags.push(Diagnostic::new(pos, format!("duplicate command `{name}`")));
                    continue;
                }
                call_sites.push((name.clone(), body.clone(), pos));
                m.positions.insert(format!("command:{name}"), pos);
                m.commands.insert(name, body);
            }
            Decl::Hoare { goal, pos, cmd_pos } => {
                if !goal_names.insert(goal.name.clone()) {
                    diags.push(Diagnostic::new(pos, format!("duplicate goal `{}`", goal.name)));
                    continue;
                }
                refs.push((goal.command.clone(), cmd_pos));
                m.positions.insert(format!("goal:{}", goal.name), pos);
                m.hoare_goals.push(goal);
            }
            Decl::Relation { goal, pos, cmd_pos } => {
                if !goal_names.insert(goal.name.clone()) {
                    diags.push(Diagnostic::new(pos, format!("duplicate goal `{}`", goal.name)));
                    continue;
                }
                refs.extend(goal.commands.iter().cloned().zip(cmd_pos));
                m.positions.insert(format!("goal:{}", goal.name), pos);
                m.rel_goals.push(goal);
            }
        }
    }

    for (owner, body, pos) in &call_sites {
        for callee in body.called_procs() {
            if !m.procs.contains_key(&callee) {
                diags.push(Diagnostic::new(
                    *pos,
                    format!("unknown procedure `{callee}` called in `{owner}`"),
                ));
            }
        }
    }
    for (name, pos) in refs {
        if !m.commands.contains_key(&name) {
            diags.push(Diagnostic::new(pos, format!("unknown command `{name}`")));
        }
    }

    if diags.is_empty() {
        Ok(m)
    } else {
        diags.sort_by_key(|d| d.pos);
        Err(diags)
    }
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.at].tok.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(Diagnostic::new(
            self.pos(),
            format!("expected {expected}, found {}", self.peek()),
        ))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(&tok.to_string())
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_keyword(kw) {
            self.advance();
            Ok(())
        } else {
            self.error(&format!("`{kw}`"))
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) => {
                self.advance();
                Ok(s)
            }
            _ => self.error("a name"),
        }
    }

    fn module(&mut self) -> PResult<Vec<Decl>> {
        let mut decls = Vec::new();
        while *self.peek() != Tok::Eof {
            decls.push(self.decl()?);
        }
        Ok(decls)
    }

    fn decl(&mut self) -> PResult<Decl> {
        let pos = self.pos();
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.error("a declaration"),
        };
        match kw.as_str() {
            "proc" => {
                self.advance();
                let name = self.name()?;
                self.keyword("pre")?;
                let pre = self.paren_assertion(1)?;
                self.keyword("post")?;
                let post = self.paren_assertion(1)?;
                let body = self.block()?;
                Ok(Decl::Proc {
                    name,
                    pos,
                    pre,
                    post,
                    body,
                })
            }
            "command" => {
                self.advance();
                let name = self.name()?;
                let body = self.block()?;
                Ok(Decl::Command { name, pos, body })
            }
            "hoare" => {
                self.advance();
                let name = self.name()?;
                self.keyword("pre")?;
                let pre = self.paren_assertion(1)?;
                self.keyword("cmd")?;
                let cmd_pos = self.pos();
                let command = self.name()?;
                self.keyword("post")?;
                let post = self.paren_assertion(1)?;
                Ok(Decl::Hoare {
                    goal: HoareGoal {
                        name,
                        pre,
                        command,
                        post,
                    },
                    pos,
                    cmd_pos,
                })
            }
            "relation" => {
                self.advance();
                let name = self.name()?;
                self.keyword("on")?;
                self.expect(Tok::LParen)?;
                let mut commands = Vec::new();
                let mut cmd_pos = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        cmd_pos.push(self.pos());
                        commands.push(self.name()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen)?;
                let arity = commands.len();
                self.keyword("pre")?;
                let pre = self.paren_assertion(arity)?;
                self.keyword("post")?;
                let post = self.paren_assertion(arity)?;
                Ok(Decl::Relation {
                    goal: RelGoal {
                        name,
                        commands,
                        pre,
                        post,
                    },
                    pos,
                    cmd_pos,
                })
            }
            _ => self.error("`proc`, `command`, `hoare` or `relation`"),
        }
    }

    fn paren_assertion(&mut self, arity: usize) -> PResult<Assertion> {
        self.expect(Tok::LParen)?;
        let start = self.pos();
        let body = self.formula(arity)?;
        self.expect(Tok::RParen)?;
        let a = Assertion::new(arity, body);
        assertion_check(&a).map_err(|e| Diagnostic::new(start, e.to_string()))?;
        Ok(a)
    }

    // Commands.

    fn block(&mut self) -> PResult<Command> {
        self.expect(Tok::LBrace)?;
        let c = self.sequence(&[Tok::RBrace])?;
        self.expect(Tok::RBrace)?;
        Ok(c)
    }

    fn sequence(&mut self, terminators: &[Tok]) -> PResult<Command> {
        let mut cmds = Vec::new();
        while !terminators.contains(self.peek()) {
            cmds.push(self.statement()?);
            if !self.eat(&Tok::Semi) {
                break;
            }
        }
        Ok(Command::seq_all(cmds))
    }

    fn statement(&mut self) -> PResult<Command> {
        match self.peek().clone() {
            Tok::LBrace => self.block(),
            Tok::Star => {
                self.advance();
                let addr = self.location()?;
                self.expect(Tok::Assign)?;
                Ok(Command::IndirectAssign(addr, self.aexp()?))
            }
            Tok::Ident(word) => match word.as_str() {
                "skip" => {
                    self.advance();
                    Ok(Command::Skip)
                }
                "assert" => {
                    self.advance();
                    Ok(Command::Assert(self.paren_assertion(1)?))
                }
                "if" => {
                    self.advance();
                    self.expect(Tok::LParen)?;
                    let cond = self.bexp()?;
                    self.expect(Tok::RParen)?;
                    let then = self.block()?;
                    let otherwise = if self.is_keyword("else") {
                        self.advance();
                        self.block()?
                    } else {
                        Command::Skip
                    };
                    Ok(Command::if_then_else(cond, then, otherwise))
                }
                "while" => {
                    self.advance();
                    self.expect(Tok::LParen)?;
                    let cond = self.bexp()?;
                    self.expect(Tok::RParen)?;
                    self.keyword("inv")?;
                    let inv = self.paren_assertion(1)?;
                    let body = self.block()?;
                    Ok(Command::while_loop(cond, inv, body))
                }
                "call" => {
                    self.advance();
                    Ok(Command::Call(self.name()?))
                }
                _ if location_index(&word).is_some() => {
                    let addr = self.location()?;
                    self.expect(Tok::Assign)?;
                    Ok(Command::Assign(addr, self.aexp()?))
                }
                _ => self.error("a command"),
            },
            _ => self.error("a command"),
        }
    }

    fn location(&mut self) -> PResult<Addr> {
        if let Tok::Ident(w) = self.peek() {
            if let Some(i) = location_index(w) {
                self.advance();
                return Ok(Addr(i));
            }
        }
        self.error("a location `xN`")
    }

    // Program expressions.

    fn aexp(&mut self) -> PResult<ArithExpr> {
        let mut lhs = self.aterm()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            lhs = ArithExpr::bin(op, lhs, self.aterm()?);
        }
    }

    fn aterm(&mut self) -> PResult<ArithExpr> {
        let mut lhs = self.afactor()?;
        while *self.peek() == Tok::Star {
            self.advance();
            lhs = ArithExpr::bin(ArithOp::Mul, lhs, self.afactor()?);
        }
        Ok(lhs)
    }

    fn afactor(&mut self) -> PResult<ArithExpr> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.advance();
                Ok(ArithExpr::Const(n))
            }
            Tok::Star => {
                self.advance();
                Ok(ArithExpr::Deref(self.location()?))
            }
            Tok::Amp => {
                self.advance();
                Ok(ArithExpr::AddrOf(self.location()?))
            }
            Tok::LParen => {
                self.advance();
                let e = self.aexp()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(_) => Ok(ArithExpr::Loc(self.location()?)),
            _ => self.error("an arithmetic expression"),
        }
    }

    fn bexp(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.band()?;
        while self.eat(&Tok::OrOr) {
            lhs = BoolExpr::logic(LogicOp::Or, lhs, self.band()?);
        }
        Ok(lhs)
    }

    fn band(&mut self) -> PResult<BoolExpr> {
        let mut lhs = self.bnot()?;
        while self.eat(&Tok::AndAnd) {
            lhs = BoolExpr::logic(LogicOp::And, lhs, self.bnot()?);
        }
        Ok(lhs)
    }

    fn bnot(&mut self) -> PResult<BoolExpr> {
        if self.eat(&Tok::Bang) {
            return Ok(BoolExpr::negate(self.bnot()?));
        }
        self.batom()
    }

    fn batom(&mut self) -> PResult<BoolExpr> {
        if self.is_keyword("true") {
            self.advance();
            return Ok(BoolExpr::True);
        }
        if self.is_keyword("false") {
            self.advance();
            return Ok(BoolExpr::False);
        }
        if *self.peek() == Tok::LParen {
            // Either a parenthesized condition or a parenthesized operand
            // of a comparison; try the former first.
            let save = self.at;
            self.advance();
            if let Ok(b) = self.bexp() {
                if self.eat(&Tok::RParen) && !starts_comparison_tail(self.peek()) {
                    return Ok(b);
                }
            }
            self.at = save;
        }
        let lhs = self.aexp()?;
        let op = self.comparison_op()?;
        let rhs = self.aexp()?;
        Ok(desugar_cmp(op, lhs, rhs, BoolExpr::cmp, BoolExpr::negate))
    }

    fn comparison_op(&mut self) -> PResult<Tok> {
        match self.peek() {
            Tok::Le | Tok::Lt | Tok::Ge | Tok::Gt | Tok::Eq | Tok::Ne => Ok(self.advance()),
            _ => self.error("a comparison operator"),
        }
    }

    // Assertions.

    fn formula(&mut self, arity: usize) -> PResult<Formula> {
        if self.is_keyword("forall") || self.is_keyword("exists") {
            let universal = self.is_keyword("forall");
            self.advance();
            let mut names = vec![self.name()?];
            while self.eat(&Tok::Comma) {
                names.push(self.name()?);
            }
            self.expect(Tok::Dot)?;
            let body = self.formula(arity)?;
            return Ok(names.into_iter().rev().fold(body, |acc, n| {
                if universal {
                    Formula::forall_nat(n, acc)
                } else {
                    Formula::exists_nat(n, acc)
                }
            }));
        }
        let lhs = self.fdisj(arity)?;
        if self.eat(&Tok::Implies) {
            let rhs = self.formula(arity)?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn fdisj(&mut self, arity: usize) -> PResult<Formula> {
        let mut lhs = self.fconj(arity)?;
        while self.eat(&Tok::OrOr) {
            lhs = Formula::or(lhs, self.fconj(arity)?);
        }
        Ok(lhs)
    }

    fn fconj(&mut self, arity: usize) -> PResult<Formula> {
        let mut lhs = self.fnot(arity)?;
        while self.eat(&Tok::AndAnd) {
            lhs = Formula::and(lhs, self.fnot(arity)?);
        }
        Ok(lhs)
    }

    fn fnot(&mut self, arity: usize) -> PResult<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(Formula::not(self.fnot(arity)?));
        }
        self.fatom(arity)
    }

    fn fatom(&mut self, arity: usize) -> PResult<Formula> {
        if self.is_keyword("true") {
            self.advance();
            return Ok(Formula::True);
        }
        if self.is_keyword("false") {
            self.advance();
            return Ok(Formula::False);
        }
        if *self.peek() == Tok::LParen {
            let save = self.at;
            self.advance();
            if let Ok(f) = self.formula(arity) {
                if self.eat(&Tok::RParen) && !starts_comparison_tail(self.peek()) {
                    return Ok(f);
                }
            }
            self.at = save;
        }
        let lhs = self.tsum(arity)?;
        let op = self.comparison_op()?;
        let rhs = self.tsum(arity)?;
        Ok(desugar_cmp(op, lhs, rhs, Formula::cmp, Formula::not))
    }

    fn tsum(&mut self, arity: usize) -> PResult<Term> {
        let mut lhs = self.tprod(arity)?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            lhs = Term::bin(op, lhs, self.tprod(arity)?);
        }
    }

    fn tprod(&mut self, arity: usize) -> PResult<Term> {
        let mut lhs = self.tfactor(arity)?;
        while self.eat(&Tok::Star) {
            lhs = Term::bin(ArithOp::Mul, lhs, self.tfactor(arity)?);
        }
        Ok(lhs)
    }

    fn tfactor(&mut self, arity: usize) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.advance();
                Ok(Term::Lit(n))
            }
            Tok::LParen => {
                self.advance();
                let t = self.tsum(arity)?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(w) if w == "at" => {
                let pos = self.pos();
                self.advance();
                self.expect(Tok::LParen)?;
                let first = self.tsum(arity)?;
                let (k, addr) = if self.eat(&Tok::Comma) {
                    let k = match &first {
                        Term::Lit(n) => usize::try_from(n.clone()).ok(),
                        _ => None,
                    };
                    let Some(k) = k else {
                        return Err(Diagnostic::new(
                            pos,
                            "state index of `at(k, e)` must be a number",
                        ));
                    };
                    (k, self.tsum(arity)?)
                } else {
                    if arity != 1 {
                        return Err(Diagnostic::new(
                            pos,
                            format!(
                                "`at(e)` needs a state index in an assertion over {arity} states; write `at(k, e)`"
                            ),
                        ));
                    }
                    (1, first)
                };
                self.expect(Tok::RParen)?;
                if k == 0 || k > arity {
                    return Err(Diagnostic::new(
                        pos,
                        format!("state index {k} out of range for an assertion over {arity} state(s)"),
                    ));
                }
                Ok(Term::read(StateTerm::Param(k), addr))
            }
            Tok::Ident(w) if !is_reserved(&w) => {
                self.advance();
                Ok(Term::Var(w))
            }
            _ => self.error("a term"),
        }
    }
}

fn starts_comparison_tail(tok: &Tok) -> bool {
    matches!(
        tok,
        Tok::Le | Tok::Lt | Tok::Ge | Tok::Gt | Tok::Eq | Tok::Ne | Tok::Plus | Tok::Minus | Tok::Star
    )
}

/// Rewrites `<`, `>`, `>=`, `!=` into the core `<=`, `=` and negation.
fn desugar_cmp<E, B>(
    op: Tok,
    lhs: E,
    rhs: E,
    cmp: impl Fn(CmpOp, E, E) -> B,
    not: impl Fn(B) -> B,
) -> B {
    match op {
        Tok::Le => cmp(CmpOp::Le, lhs, rhs),
        Tok::Eq => cmp(CmpOp::Eq, lhs, rhs),
        Tok::Lt => not(cmp(CmpOp::Le, rhs, lhs)),
        Tok::Gt => not(cmp(CmpOp::Le, lhs, rhs)),
        Tok::Ge => cmp(CmpOp::Le, rhs, lhs),
        Tok::Ne => not(cmp(CmpOp::Eq, lhs, rhs)),
        _ => unreachable!("not a comparison"),
    }
}

fn location_index(word: &str) -> Option<u64> {
    let digits = word.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

const RESERVED: &[&str] = &[
    "proc", "command", "hoare", "relation", "pre", "post", "cmd", "on", "skip", "assert", "if",
    "else", "while", "inv", "call", "true", "false", "forall", "exists", "at",
];

fn is_reserved(word: &str) -> bool {
    RESERVED.contains(&word)
}
