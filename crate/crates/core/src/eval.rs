//! Fuel-bounded call-by-value interpreter for core terms.
//!
//! Fuel counts function unfoldings: every call of a defined function (or of
//! a function binding) consumes one unit. Builtins are free. `IF` is the only
//! special form.

use std::collections::HashMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::builtins;
use crate::syntax::{SExpr, Symbol, Term};
use crate::world::{FunctionRef, World};

pub type Env = HashMap<Symbol, SExpr>;

/// Where a call to a (usually abstract) function is redirected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FnBinding {
    Name(Symbol),
    /// Free variables of `body` other than `params` are looked up in the
    /// top-level environment of the evaluation.
    Lambda { params: Vec<Symbol>, body: Term },
}

pub type FnBindings = HashMap<Symbol, FnBinding>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("cannot evaluate the abstract function {0}")]
    AbstractFunction(Symbol),
    #[error("unbound variable {0}")]
    UnboundVariable(Symbol),
    #[error("{name} expects {expected} argument(s) but was given {given}")]
    Arity {
        name: Symbol,
        expected: usize,
        given: usize,
    },
    #[error("unknown function {0}")]
    UnknownFunction(Symbol),
}

pub fn eval(world: &World, term: &Term, env: &Env, fuel: u64) -> Result<SExpr, EvalError> {
    eval_with_bindings(world, term, env, &FnBindings::new(), fuel)
}

/// Evaluates `term` with calls to the functions in `bindings` redirected.
pub fn eval_with_bindings(
    world: &World,
    term: &Term,
    env: &Env,
    bindings: &FnBindings,
    fuel: u64,
) -> Result<SExpr, EvalError> {
    let outer: Vec<(Symbol, SExpr)> = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    let mut ev = Evaluator {
        world,
        bindings,
        outer: &outer,
        fuel,
    };
    let frame = Frame {
        vars: outer.clone(),
        see_outer: false,
    };
    ev.eval(term, &frame)
}

/// Applies the function `f` to already-evaluated arguments.
pub fn call(
    world: &World,
    f: &Symbol,
    args: Vec<SExpr>,
    bindings: &FnBindings,
    fuel: u64,
) -> Result<SExpr, EvalError> {
    let outer = Vec::new();
    let mut ev = Evaluator {
        world,
        bindings,
        outer: &outer,
        fuel,
    };
    ev.apply(f, args)
}

struct Frame {
    vars: Vec<(Symbol, SExpr)>,
    see_outer: bool,
}

struct Evaluator<'a> {
    world: &'a World,
    bindings: &'a FnBindings,
    outer: &'a [(Symbol, SExpr)],
    fuel: u64,
}

impl Evaluator<'_> {
    fn lookup(&self, v: &Symbol, frame: &Frame) -> Result<SExpr, EvalError> {
        let found = frame.vars.iter().rev().find(|(k, _)| k == v);
        let found = match found {
            None if frame.see_outer => self.outer.iter().find(|(k, _)| k == v),
            other => other,
        };
        found
            .map(|(_, val)| val.clone())
            .ok_or_else(|| EvalError::UnboundVariable(v.clone()))
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        if self.fuel == 0 {
            return Err(EvalError::FuelExhausted);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn eval(&mut self, term: &Term, frame: &Frame) -> Result<SExpr, EvalError> {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.eval_inner(term, frame))
    }

    fn eval_args(&mut self, args: &[Term], frame: &Frame) -> Result<Vec<SExpr>, EvalError> {
        args.iter().map(|a| self.eval(a, frame)).collect()
    }

    fn eval_inner(&mut self, term: &Term, frame: &Frame) -> Result<SExpr, EvalError> {
        match term {
            Term::Var(v) => self.lookup(v, frame),
            Term::Quote(v) => Ok(v.clone()),
            Term::App(f, args) if f.name() == "IF" && args.len() == 3 => {
                if self.eval(&args[0], frame)?.is_nil() {
                    self.eval(&args[2], frame)
                } else {
                    self.eval(&args[1], frame)
                }
            }
            Term::App(f, args) => {
                let vals = self.eval_args(args, frame)?;
                self.apply(f, vals)
            }
            Term::LambdaApp { params, body, args } => {
                let vals = self.eval_args(args, frame)?;
                let inner = Frame {
                    vars: params.iter().cloned().zip(vals).collect(),
                    see_outer: false,
                };
                self.eval(body, &inner)
            }
        }
    }

    fn check_arity(name: &Symbol, expected: usize, given: usize) -> Result<(), EvalError> {
        if expected == given {
            Ok(())
        } else {
            Err(EvalError::Arity {
                name: name.clone(),
                expected,
                given,
            })
        }
    }

    fn apply(&mut self, f: &Symbol, args: Vec<SExpr>) -> Result<SExpr, EvalError> {
        if let Some(binding) = self.bindings.get(f) {
            self.tick()?;
            return match binding {
                FnBinding::Name(g) => self.apply(g, args),
                FnBinding::Lambda { params, body } => {
                    Self::check_arity(f, params.len(), args.len())?;
                    let frame = Frame {
                        vars: params.iter().cloned().zip(args).collect(),
                        see_outer: true,
                    };
                    self.eval(body, &frame)
                }
            };
        }
        if let Some(expected) = builtins::arity(f) {
            Self::check_arity(f, expected, args.len())?;
            return Ok(apply_builtin(f.name(), &args));
        }
        match self.world.function(f) {
            Some(FunctionRef::Defined(def)) => {
                Self::check_arity(f, def.formals.len(), args.len())?;
                self.tick()?;
                let frame = Frame {
                    vars: def.formals.iter().cloned().zip(args).collect(),
                    see_outer: false,
                };
                self.eval(&def.body, &frame)
            }
            Some(FunctionRef::Abstract { .. }) => Err(EvalError::AbstractFunction(f.clone())),
            None => Err(EvalError::UnknownFunction(f.clone())),
        }
    }
}

fn as_integer(v: &SExpr) -> BigInt {
    match v {
        SExpr::Integer(i) => i.clone(),
        _ => BigInt::from(0),
    }
}

/// Builtins other than `IF`. Arity has already been checked.
fn apply_builtin(name: &str, args: &[SExpr]) -> SExpr {
    match name {
        "CONS" => SExpr::cons(args[0].clone(), args[1].clone()),
        "CAR" => args[0].car(),
        "CDR" => args[0].cdr(),
        "CONSP" => SExpr::bool(!args[0].is_atom()),
        "ATOM" | "ENDP" => SExpr::bool(args[0].is_atom()),
        "NULL" | "NOT" => SExpr::bool(args[0].is_nil()),
        "EQUAL" => SExpr::bool(args[0] == args[1]),
        "IMPLIES" => SExpr::bool(args[0].is_nil() || !args[1].is_nil()),
        "INTEGERP" => SExpr::bool(matches!(args[0], SExpr::Integer(_))),
        // Non-integers count as 0.
        "+" => SExpr::Integer(as_integer(&args[0]) + as_integer(&args[1])),
        "MEMBER-EQUAL" => {
            let mut cur = args[1].clone();
            while let SExpr::Pair(h, t) = &cur {
                if **h == args[0] {
                    return cur;
                }
                let next = (**t).clone();
                cur = next;
            }
            SExpr::nil()
        }
        other => unreachable!("{other} is not a builtin"),
    }
}
