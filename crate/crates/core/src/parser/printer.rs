//! Renders modules back into `.rl` text that parses to the same tree.

use std::fmt::Write;

use crate::ast::{ArithExpr, ArithOp, BoolExpr, CmpOp, Command, LogicOp};
use crate::formula::{Assertion, Formula, Quantifier, StateTerm, Term};

use super::SourceModule;

pub fn pretty_print(m: &SourceModule) -> String {
    let mut out = String::new();
    for (name, body) in &m.procs {
        let contract = &m.contracts[name];
        let _ = writeln!(out, "proc {name}");
        let _ = writeln!(out, "  pre ({})", print_assertion(&contract.pre));
        let _ = writeln!(out, "  post ({})", print_assertion(&contract.post));
        out.push_str("{\n");
        write_seq(body, 1, &mut out);
        out.push_str("}\n\n");
    }
    for (name, body) in &m.commands {
        let _ = writeln!(out, "command {name} {{");
        write_seq(body, 1, &mut out);
        out.push_str("}\n\n");
    }
    for g in &m.hoare_goals {
        let _ = writeln!(out, "hoare {}", g.name);
        let _ = writeln!(out, "  pre ({})", print_assertion(&g.pre));
        let _ = writeln!(out, "  cmd {}", g.command);
        let _ = writeln!(out, "  post ({})\n", print_assertion(&g.post));
    }
    for g in &m.rel_goals {
        let _ = writeln!(out, "relation {} on ({})", g.name, g.commands.join(", "));
        let _ = writeln!(out, "  pre ({})", print_assertion(&g.pre));
        let _ = writeln!(out, "  post ({})\n", print_assertion(&g.post));
    }
    out
}

/// A command as a statement sequence at indentation level 0.
pub fn print_command(c: &Command) -> String {
    let mut out = String::new();
    write_seq(c, 0, &mut out);
    out
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_seq(c: &Command, level: usize, out: &mut String) {
    let mut items = Vec::new();
    let mut cur = c;
    while let Command::Seq(first, rest) = cur {
        items.push(first.as_ref());
        cur = rest;
    }
    items.push(cur);
    let last = items.len() - 1;
    for (i, item) in items.into_iter().enumerate() {
        indent(level, out);
        write_stmt(item, level, out);
        if i < last {
            out.push(';');
        }
        out.push('\n');
    }
}

fn write_block(c: &Command, level: usize, out: &mut String) {
    out.push_str("{\n");
    write_seq(c, level + 1, out);
    indent(level, out);
    out.push('}');
}

fn write_stmt(c: &Command, level: usize, out: &mut String) {
    match c {
        Command::Skip => out.push_str("skip"),
        Command::Assign(a, e) => {
            let _ = write!(out, "{a} := {}", print_aexp(e));
        }
        Command::IndirectAssign(a, e) => {
            let _ = write!(out, "*{a} := {}", print_aexp(e));
        }
        Command::Seq(..) => write_block(c, level, out),
        Command::Assert(p) => {
            let _ = write!(out, "assert({})", print_assertion(p));
        }
        Command::If(b, then, otherwise) => {
            let _ = write!(out, "if ({}) ", print_bexp(b));
            write_block(then, level, out);
            out.push_str(" else ");
            write_block(otherwise, level, out);
        }
        Command::While(b, inv, body) => {
            let _ = write!(out, "while ({}) inv ({}) ", print_bexp(b), print_assertion(inv));
            write_block(body, level, out);
        }
        Command::Call(y) => {
            let _ = write!(out, "call {y}");
        }
    }
}

fn arith_prec(op: ArithOp) -> u8 {
    match op {
        ArithOp::Add | ArithOp::Sub => 1,
        ArithOp::Mul => 2,
    }
}

pub(crate) fn print_aexp(e: &ArithExpr) -> String {
    let mut out = String::new();
    write_aexp(e, 0, &mut out);
    out
}

fn write_aexp(e: &ArithExpr, min: u8, out: &mut String) {
    match e {
        ArithExpr::Const(n) => {
            let _ = write!(out, "{n}");
        }
        ArithExpr::Loc(a) => {
            let _ = write!(out, "{a}");
        }
        ArithExpr::Deref(a) => {
            let _ = write!(out, "*{a}");
        }
        ArithExpr::AddrOf(a) => {
            let _ = write!(out, "&{a}");
        }
        ArithExpr::BinOp(op, l, r) => {
            let prec = arith_prec(*op);
            if prec < min {
                out.push('(');
            }
            write_aexp(l, prec, out);
            let _ = write!(out, " {} ", op.symbol());
            write_aexp(r, prec + 1, out);
            if prec < min {
                out.push(')');
            }
        }
    }
}

fn bool_prec(b: &BoolExpr) -> u8 {
    match b {
        BoolExpr::Logic(LogicOp::Or, ..) => 1,
        BoolExpr::Logic(LogicOp::And, ..) => 2,
        _ => 3,
    }
}

pub(crate) fn print_bexp(b: &BoolExpr) -> String {
    let mut out = String::new();
    write_bexp(b, 0, &mut out);
    out
}

fn write_bexp(b: &BoolExpr, min: u8, out: &mut String) {
    let prec = bool_prec(b);
    let paren = prec < min;
    if paren {
        out.push('(');
    }
    match b {
        BoolExpr::True => out.push_str("true"),
        BoolExpr::False => out.push_str("false"),
        BoolExpr::Cmp(op, l, r) => {
            write_aexp(l, 0, out);
            out.push_str(cmp_symbol(*op));
            write_aexp(r, 0, out);
        }
        BoolExpr::Logic(op, l, r) => {
            write_bexp(l, prec, out);
            out.push_str(match op {
                LogicOp::And => " && ",
                LogicOp::Or => " || ",
            });
            write_bexp(r, prec + 1, out);
        }
        BoolExpr::Not(inner) => {
            out.push('!');
            match **inner {
                BoolExpr::Not(_) | BoolExpr::True | BoolExpr::False => write_bexp(inner, 3, out),
                _ => {
                    out.push('(');
                    write_bexp(inner, 0, out);
                    out.push(')');
                }
            }
        }
    }
    if paren {
        out.push(')');
    }
}

fn cmp_symbol(op: CmpOp) -> &'static str {
    match op {
        CmpOp::Le => " <= ",
        CmpOp::Eq => " = ",
    }
}

/// Assertion body in source syntax.
pub fn print_assertion(a: &Assertion) -> String {
    let mut out = String::new();
    write_formula(&a.body, a.arity, 0, &mut out);
    out
}

fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::Quant(..) => 0,
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(..) => 4,
        _ => 5,
    }
}

fn write_formula(f: &Formula, arity: usize, min: u8, out: &mut String) {
    let prec = formula_prec(f);
    let paren = prec < min;
    if paren {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Cmp(op, l, r) => {
            write_term(l, arity, 0, out);
            out.push_str(cmp_symbol(*op));
            write_term(r, arity, 0, out);
        }
        Formula::StateEq(l, r) => {
            // Not expressible in source syntax; assertions read from files
            // never contain state equalities.
            let _ = write!(out, "/* {l} = {r} */ false");
        }
        Formula::Not(inner) => {
            out.push('!');
            match **inner {
                Formula::Not(_) | Formula::True | Formula::False => {
                    write_formula(inner, arity, 4, out)
                }
                _ => {
                    out.push('(');
                    write_formula(inner, arity, 0, out);
                    out.push(')');
                }
            }
        }
        Formula::And(l, r) => {
            write_formula(l, arity, 3, out);
            out.push_str(" && ");
            write_formula(r, arity, 4, out);
        }
        Formula::Or(l, r) => {
            write_formula(l, arity, 2, out);
            out.push_str(" || ");
            write_formula(r, arity, 3, out);
        }
        Formula::Implies(l, r) => {
            write_formula(l, arity, 2, out);
            out.push_str(" ==> ");
            write_formula(r, arity, 0, out);
        }
        Formula::Quant(q, binder, body) => {
            out.push_str(match q {
                Quantifier::Forall => "forall ",
                Quantifier::Exists => "exists ",
            });
            let _ = write!(out, "{}. ", binder.name);
            write_formula(body, arity, 0, out);
        }
    }
    if paren {
        out.push(')');
    }
}

fn write_term(t: &Term, arity: usize, min: u8, out: &mut String) {
    match t {
        Term::Lit(n) => {
            let _ = write!(out, "{n}");
        }
        Term::Var(v) => out.push_str(v),
        Term::Read(s, addr) => {
            match **s {
                StateTerm::Param(k) if arity == 1 && k == 1 => out.push_str("at("),
                StateTerm::Param(k) => {
                    let _ = write!(out, "at({k}, ");
                }
                ref other => {
                    let _ = write!(out, "/* {other} */ at(");
                }
            }
            write_term(addr, arity, 0, out);
            out.push(')');
        }
        Term::Bin(op, l, r) => {
            let prec = arith_prec(*op);
            if prec < min {
                out.push('(');
            }
            write_term(l, arity, prec, out);
            let _ = write!(out, " {} ", op.symbol());
            write_term(r, arity, prec + 1, out);
            if prec < min {
                out.push(')');
            }
        }
    }
}
