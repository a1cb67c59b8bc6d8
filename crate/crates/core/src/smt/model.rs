//! Reading countermodels back into memory states.
//!
//! Solvers print array values in several shapes: constant arrays under
//! store chains, `as-array` references to auxiliary functions, or lambdas
//! with `let` and `ite` bodies. Rather than pattern-match each shape, the
//! model's definitions are evaluated by a small interpreter and each state
//! is read at a finite set of addresses: every numeral in the model, every
//! caller-supplied address, and, transitively, every value found at one of
//! those addresses (values double as addresses through dereference).

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::formula::StateVar;
use crate::mem::{MemState, Nat};

use super::emit::state_symbol;
use super::sexp::{parse_all, Sexp, SexpError};

/// Upper bound on the number of addresses read per model.
const MAX_ADDRESSES: usize = 4096;
const MAX_DEPTH: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Syntax(#[from] SexpError),
    #[error("negative value {value} at address {addr} of {state}; the nonnegativity axiom was not respected")]
    Negative { state: String, addr: Nat, value: BigInt },
    #[error("cannot evaluate model term `{0}`")]
    Eval(String),
}

/// Counterexample states, keyed by state variable name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub states: BTreeMap<String, MemState>,
}

impl Model {
    pub fn state(&self, v: &StateVar) -> MemState {
        self.states.get(v.name()).cloned().unwrap_or_default()
    }
}

/// Extracts the given states from the output of `(get-model)`.
pub fn parse_model(output: &str, states: &[StateVar]) -> Result<Model, ModelError> {
    parse_model_at(output, states, &BTreeSet::new())
}

/// As [`parse_model`], additionally reading every state at `addresses`.
pub fn parse_model_at(
    output: &str,
    states: &[StateVar],
    addresses: &BTreeSet<Nat>,
) -> Result<Model, ModelError> {
    let items = parse_all(output)?;
    let mut defs = BTreeMap::new();
    let mut numerals = BTreeSet::new();
    for item in &items {
        collect_defs(item, &mut defs);
        collect_numerals(item, &mut numerals);
    }
    let eval = Evaluator { defs };

    let mut arrays = Vec::new();
    for v in states {
        let sym = state_symbol(v.name());
        let value = match eval.defs.get(sym.as_str()) {
            Some(def) if def.params.is_empty() => eval.eval(def.body, &Env::default(), 0)?,
            // A state the solver left unconstrained: any value will do.
            _ => Value::Array(Rc::new(Array::Const(BigInt::zero()))),
        };
        let Value::Array(arr) = value else {
            return Err(ModelError::Eval(format!("{sym} is not an array")));
        };
        arrays.push((v.name().to_string(), arr));
    }

    let mut pending: Vec<Nat> = numerals.into_iter().chain(addresses.iter().cloned()).collect();
    let mut seen: BTreeSet<Nat> = pending.iter().cloned().collect();
    let mut model = Model::default();
    for (name, _) in &arrays {
        model.states.insert(name.clone(), MemState::new());
    }
    while let Some(addr) = pending.pop() {
        let idx = BigInt::from(addr.clone());
        for (name, arr) in &arrays {
            let value = eval.select(arr, &idx, 0)?;
            if value.is_negative() {
                return Err(ModelError::Negative {
                    state: name.clone(),
                    addr: addr.clone(),
                    value,
                });
            }
            let value = value.magnitude().clone();
            if value.is_zero() {
                continue;
            }
            if seen.len() < MAX_ADDRESSES && seen.insert(value.clone()) {
                pending.push(value.clone());
            }
            model
                .states
                .get_mut(name)
                .expect("inserted above")
                .set(addr.clone(), value);
        }
    }
    Ok(model)
}

struct Def<'a> {
    params: Vec<String>,
    body: &'a Sexp,
}

fn collect_defs<'a>(e: &'a Sexp, defs: &mut BTreeMap<&'a str, Def<'a>>) {
    let Some(items) = e.list() else { return };
    if e.head() == Some("define-fun") && items.len() == 5 {
        if let Some(name) = items[1].atom() {
            let params = items[2]
                .list()
                .unwrap_or_default()
                .iter()
                .filter_map(|p| p.list()?.first()?.atom().map(str::to_string))
                .collect();
            defs.insert(name, Def { params, body: &items[4] });
        }
        return;
    }
    for item in items {
        collect_defs(item, defs);
    }
}

fn collect_numerals(e: &Sexp, out: &mut BTreeSet<Nat>) {
    match e {
        Sexp::Atom(a) => {
            if let Ok(n) = a.parse::<Nat>() {
                out.insert(n);
            }
        }
        Sexp::List(items) => items.iter().for_each(|i| collect_numerals(i, out)),
    }
}

#[derive(Clone, Debug)]
enum Value {
    Int(BigInt),
    Bool(bool),
    Array(Rc<Array>),
}

#[derive(Debug)]
enum Array {
    Const(BigInt),
    Store(Rc<Array>, BigInt, BigInt),
    Lambda { param: String, body: Sexp, env: Env },
    Func(String),
}

/// Persistent variable bindings.
#[derive(Clone, Debug, Default)]
struct Env(Option<Rc<(String, Value, Env)>>);

impl Env {
    fn bind(&self, name: String, v: Value) -> Env {
        Env(Some(Rc::new((name, v, self.clone()))))
    }

    fn lookup(&self, name: &str) -> Option<&Value> {
        let mut cur = self;
        while let Some(node) = &cur.0 {
            if node.0 == name {
                return Some(&node.1);
            }
            cur = &node.2;
        }
        None
    }
}

struct Evaluator<'a> {
    defs: BTreeMap<&'a str, Def<'a>>,
}

fn fail<T>(e: &Sexp) -> Result<T, ModelError> {
    Err(ModelError::Eval(e.to_string()))
}

impl Evaluator<'_> {
    fn int(&self, e: &Sexp, env: &Env, depth: usize) -> Result<BigInt, ModelError> {
        match self.eval(e, env, depth)? {
            Value::Int(n) => Ok(n),
            _ => fail(e),
        }
    }

    fn boolean(&self, e: &Sexp, env: &Env, depth: usize) -> Result<bool, ModelError> {
        match self.eval(e, env, depth)? {
            Value::Bool(b) => Ok(b),
            _ => fail(e),
        }
    }

    fn array(&self, e: &Sexp, env: &Env, depth: usize) -> Result<Rc<Array>, ModelError> {
        match self.eval(e, env, depth)? {
            Value::Array(a) => Ok(a),
            _ => fail(e),
        }
    }

    fn apply(&self, name: &str, args: Vec<Value>, depth: usize) -> Result<Value, ModelError> {
        let Some(def) = self.defs.get(name) else {
            return Err(ModelError::Eval(format!("unknown function {name}")));
        };
        if def.params.len() != args.len() {
            return Err(ModelError::Eval(format!("arity of {name}")));
        }
        let env = def
            .params
            .iter()
            .cloned()
            .zip(args)
            .fold(Env::default(), |env, (p, v)| env.bind(p, v));
        self.eval(def.body, &env, depth + 1)
    }

    fn select(&self, arr: &Rc<Array>, idx: &BigInt, depth: usize) -> Result<BigInt, ModelError> {
        let mut cur = arr;
        loop {
            match cur.as_ref() {
                Array::Const(v) => return Ok(v.clone()),
                Array::Store(base, i, v) => {
                    if i == idx {
                        return Ok(v.clone());
                    }
                    cur = base;
                }
                Array::Lambda { param, body, env } => {
                    let env = env.bind(param.clone(), Value::Int(idx.clone()));
                    return self.int(body, &env, depth + 1);
                }
                Array::Func(f) => {
                    return match self.apply(f, vec![Value::Int(idx.clone())], depth)? {
                        Value::Int(n) => Ok(n),
                        _ => Err(ModelError::Eval(format!("{f} is not integer-valued"))),
                    };
                }
            }
        }
    }

    fn eval(&self, e: &Sexp, env: &Env, depth: usize) -> Result<Value, ModelError> {
        if depth > MAX_DEPTH {
            return Err(ModelError::Eval("model term nested too deeply".into()));
        }
        let depth = depth + 1;
        let items = match e {
            Sexp::Atom(a) => {
                return match a.as_str() {
                    "true" => Ok(Value::Bool(true)),
                    "false" => Ok(Value::Bool(false)),
                    _ => {
                        if let Ok(n) = a.parse::<BigInt>() {
                            Ok(Value::Int(n))
                        } else if let Some(v) = env.lookup(a) {
                            Ok(v.clone())
                        } else if self.defs.get(a.as_str()).is_some_and(|d| d.params.is_empty()) {
                            self.apply(a, Vec::new(), depth)
                        } else {
                            fail(e)
                        }
                    }
                };
            }
            Sexp::List(items) => items,
        };
        let Some(first) = items.first() else { return fail(e) };
        let args = &items[1..];

        // `((as const (Array Int Int)) v)`
        if first.head() == Some("as") {
            let [v] = args else { return fail(e) };
            return Ok(Value::Array(Rc::new(Array::Const(self.int(v, env, depth)?))));
        }
        let Some(head) = first.atom() else { return fail(e) };
        let ints = |me: &Self| -> Result<Vec<BigInt>, ModelError> {
            args.iter().map(|a| me.int(a, env, depth)).collect()
        };
        let value = match head {
            "_" => match args {
                [Sexp::Atom(kw), Sexp::Atom(f)] if kw == "as-array" => {
                    Value::Array(Rc::new(Array::Func(f.clone())))
                }
                _ => return fail(e),
            },
            "lambda" => {
                let [params, body] = args else { return fail(e) };
                let param = params
                    .list()
                    .and_then(|ps| match ps {
                        [p] => p.list()?.first()?.atom(),
                        _ => None,
                    })
                    .ok_or_else(|| ModelError::Eval(e.to_string()))?;
                Value::Array(Rc::new(Array::Lambda {
                    param: param.to_string(),
                    body: body.clone(),
                    env: env.clone(),
                }))
            }
            "let" => {
                let [bindings, body] = args else { return fail(e) };
                let mut inner = env.clone();
                for b in bindings.list().unwrap_or_default() {
                    let Some([Sexp::Atom(name), value]) = b.list() else { return fail(e) };
                    inner = inner.bind(name.clone(), self.eval(value, env, depth)?);
                }
                self.eval(body, &inner, depth)?
            }
            "ite" => {
                let [c, a, b] = args else { return fail(e) };
                if self.boolean(c, env, depth)? {
                    self.eval(a, env, depth)?
                } else {
                    self.eval(b, env, depth)?
                }
            }
            "store" => {
                let [a, i, v] = args else { return fail(e) };
                Value::Array(Rc::new(Array::Store(
                    self.array(a, env, depth)?,
                    self.int(i, env, depth)?,
                    self.int(v, env, depth)?,
                )))
            }
            "select" => {
                let [a, i] = args else { return fail(e) };
                let arr = self.array(a, env, depth)?;
                Value::Int(self.select(&arr, &self.int(i, env, depth)?, depth)?)
            }
            "=" => {
                let [a, b] = args else { return fail(e) };
                match (self.eval(a, env, depth)?, self.eval(b, env, depth)?) {
                    (Value::Int(x), Value::Int(y)) => Value::Bool(x == y),
                    (Value::Bool(x), Value::Bool(y)) => Value::Bool(x == y),
                    _ => return fail(e),
                }
            }
            "<=" | ">=" | "<" | ">" => {
                let v = ints(self)?;
                let [x, y] = v.as_slice() else { return fail(e) };
                Value::Bool(match head {
                    "<=" => x <= y,
                    ">=" => x >= y,
                    "<" => x < y,
                    _ => x > y,
                })
            }
            "+" => Value::Int(ints(self)?.into_iter().sum()),
            "*" => Value::Int(ints(self)?.into_iter().product()),
            "-" => {
                let v = ints(self)?;
                match v.as_slice() {
                    [x] => Value::Int(-x),
                    [x, rest @ ..] => Value::Int(rest.iter().fold(x.clone(), |acc, r| acc - r)),
                    [] => return fail(e),
                }
            }
            "monus" => {
                let v = ints(self)?;
                let [x, y] = v.as_slice() else { return fail(e) };
                Value::Int(if y <= x { x - y } else { BigInt::zero() })
            }
            "and" | "or" => {
                let mut acc = head == "and";
                for a in args {
                    let b = self.boolean(a, env, depth)?;
                    acc = if head == "and" { acc && b } else { acc || b };
                }
                Value::Bool(acc)
            }
            "not" => {
                let [a] = args else { return fail(e) };
                Value::Bool(!self.boolean(a, env, depth)?)
            }
            "=>" => {
                let [a, b] = args else { return fail(e) };
                Value::Bool(!self.boolean(a, env, depth)? || self.boolean(b, env, depth)?)
            }
            name => {
                let values = args
                    .iter()
                    .map(|a| self.eval(a, env, depth))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply(name, values, depth)?
            }
        };
        Ok(value)
    }
}
