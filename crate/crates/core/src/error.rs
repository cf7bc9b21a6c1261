use thiserror::Error;

use crate::check::{Binding, Verdict};
use crate::eval::EvalError;
use crate::syntax::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// A lambda target whose params are not exactly the formals of the function
/// it replaces.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "Error in COPYFUN: The lambda construct {lambda} takes as input {params}, which should \
     be an exact match of the original arguments of the original function: {expected}"
)]
pub struct CopyFunError {
    pub lambda: String,
    pub params: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown function {0}")]
    UnknownFunction(Symbol),
    #[error("{name} expects {expected} argument(s) but was given {given}")]
    Arity {
        name: Symbol,
        expected: usize,
        given: usize,
    },
    #[error("malformed lambda: {0}")]
    MalformedLambda(String),
    #[error("malformed form: {0}")]
    Malformed(String),
    #[error("the name {0} is already in use")]
    DuplicateName(Symbol),
    #[error("{0} is reserved and cannot be defined")]
    ReservedName(Symbol),
    #[error("unknown name {0}")]
    UnknownName(Symbol),
    #[error("{name} is not a {expected}")]
    WrongKind { name: Symbol, expected: &'static str },
    #[error("the body of {function} mentions the unbound variable {var}")]
    UnboundVariable { function: Symbol, var: Symbol },
    #[error("theorem {name} failed its check: {verdict}")]
    TheoremCheck { name: Symbol, verdict: Verdict },
    #[error("specification {spec}: {message}")]
    Spec { spec: Symbol, message: String },
    #[error(transparent)]
    CopyFun(#[from] CopyFunError),
    #[error("bad substitution: {0}")]
    Substitution(String),
    #[error("{0}")]
    UnmappedDependency(String),
    #[error(
        "copying {function}: extra variable {var} from a lambda target clashes with an existing formal"
    )]
    ExtraFormalClash { function: Symbol, var: Symbol },
    #[error("nested argument addition is not supported: {0}")]
    NestedLambda(String),
    #[error("{}", obligation_message(.obligation, .attempted, .counterexample))]
    Obligation {
        obligation: String,
        attempted: String,
        counterexample: Option<Binding>,
    },
    #[error("copied theorem {name} failed the paranoid re-check: {verdict}")]
    Paranoid { name: Symbol, verdict: Verdict },
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("bad universe: {0}")]
    Universe(String),
    #[error("{0}")]
    Io(String),
}

fn obligation_message(
    obligation: &str,
    attempted: &str,
    counterexample: &Option<Binding>,
) -> String {
    let mut msg =
        format!("could not discharge the instance obligation {obligation} (attempted {attempted})");
    if let Some(b) = counterexample {
        msg.push_str(&format!("; counterexample {}", crate::check::show_binding(b)));
    }
    msg
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
