//! Macro-free core terms.

use std::collections::HashSet;
use std::fmt;

use super::sexpr::{SExpr, Symbol};

/// A translated term. Function and variable names live in separate
/// namespaces: the head of an application is always a function name.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Symbol),
    Quote(SExpr),
    App(Symbol, Vec<Term>),
    /// `((LAMBDA params body) args...)`. Lambda bodies are closed over
    /// their params.
    LambdaApp {
        params: Vec<Symbol>,
        body: Box<Term>,
        args: Vec<Term>,
    },
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Symbol::new(name))
    }

    pub fn app(f: &str, args: Vec<Term>) -> Self {
        Term::App(Symbol::new(f), args)
    }

    pub fn nil() -> Self {
        Term::Quote(SExpr::nil())
    }

    /// The raw core form, e.g. `(IF A B 'NIL)`.
    pub fn to_sexpr(&self) -> SExpr {
        match self {
            Term::Var(v) => SExpr::Symbol(v.clone()),
            Term::Quote(v) => SExpr::list([SExpr::sym("QUOTE"), v.clone()]),
            Term::App(f, args) => SExpr::cons(
                SExpr::Symbol(f.clone()),
                SExpr::list(args.iter().map(Term::to_sexpr).collect::<Vec<_>>()),
            ),
            Term::LambdaApp { params, body, args } => {
                let lambda = SExpr::list([
                    SExpr::sym("LAMBDA"),
                    SExpr::list(params.iter().cloned().map(SExpr::Symbol).collect::<Vec<_>>()),
                    body.to_sexpr(),
                ]);
                SExpr::cons(
                    lambda,
                    SExpr::list(args.iter().map(Term::to_sexpr).collect::<Vec<_>>()),
                )
            }
        }
    }

    /// Free variables in first-occurrence order. Lambda bodies are closed, so
    /// only their arguments contribute.
    pub fn free_vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.collect_free_vars(&mut out, &mut seen);
        out
    }

    fn collect_free_vars(&self, out: &mut Vec<Symbol>, seen: &mut HashSet<Symbol>) {
        match self {
            Term::Var(v) => {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
            Term::Quote(_) => {}
            Term::App(_, args) | Term::LambdaApp { args, .. } => {
                for a in args {
                    a.collect_free_vars(out, seen);
                }
            }
        }
    }

    /// Visits every function-head symbol, including those inside lambda
    /// bodies, in left-to-right order.
    pub fn for_each_fn(&self, f: &mut impl FnMut(&Symbol)) {
        match self {
            Term::Var(_) | Term::Quote(_) => {}
            Term::App(head, args) => {
                f(head);
                for a in args {
                    a.for_each_fn(f);
                }
            }
            Term::LambdaApp { body, args, .. } => {
                body.for_each_fn(f);
                for a in args {
                    a.for_each_fn(f);
                }
            }
        }
    }

    /// Visits every variable occurrence (including lambda params and
    /// variables inside lambda bodies).
    pub fn for_each_var(&self, f: &mut impl FnMut(&Symbol)) {
        match self {
            Term::Var(v) => f(v),
            Term::Quote(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
            Term::LambdaApp { params, body, args } => {
                params.iter().for_each(&mut *f);
                body.for_each_var(f);
                args.iter().for_each(|a| a.for_each_var(f));
            }
        }
    }

    /// Distinct called functions in first-occurrence order.
    pub fn called_fns(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.for_each_fn(&mut |s| {
            if seen.insert(s.clone()) {
                out.push(s.clone());
            }
        });
        out
    }

    pub fn calls(&self, name: &Symbol) -> bool {
        let mut found = false;
        self.for_each_fn(&mut |s| found |= s == name);
        found
    }

    /// Replaces free variables. Lambda bodies are closed and left alone.
    pub fn substitute_vars(&self, bind: &dyn Fn(&Symbol) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => bind(v).unwrap_or_else(|| self.clone()),
            Term::Quote(_) => self.clone(),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.substitute_vars(bind)).collect(),
            ),
            Term::LambdaApp { params, body, args } => Term::LambdaApp {
                params: params.clone(),
                body: body.clone(),
                args: args.iter().map(|a| a.substitute_vars(bind)).collect(),
            },
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexpr())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexpr())
    }
}
