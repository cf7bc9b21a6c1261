//! Translation of surface forms into core terms, and back for display.

use std::collections::HashSet;

use super::sexpr::{SExpr, Symbol};
use super::term::Term;
use crate::builtins;
use crate::error::Error;

/// Anything that can report the arity of a function name.
pub trait Arities {
    fn arity(&self, f: &Symbol) -> Option<usize>;
}

/// Translates surface forms against a function scope.
pub struct Translator<'a> {
    base: &'a dyn Arities,
    extra: Vec<(Symbol, usize)>,
    permissive: bool,
}

impl<'a> Translator<'a> {
    pub fn new(base: &'a dyn Arities) -> Self {
        Translator {
            base,
            extra: Vec::new(),
            permissive: false,
        }
    }

    /// Makes a not-yet-admitted function visible (e.g. a function's own name
    /// while translating its body).
    pub fn with_function(mut self, name: Symbol, arity: usize) -> Self {
        self.extra.push((name, arity));
        self
    }

    /// Accepts unknown function heads of any arity.
    pub fn permissive(mut self) -> Self {
        self.permissive = true;
        self
    }

    fn arity(&self, f: &Symbol) -> Option<usize> {
        self.extra
            .iter()
            .rev()
            .find(|(n, _)| n == f)
            .map(|&(_, a)| a)
            .or_else(|| builtins::arity(f))
            .or_else(|| self.base.arity(f))
    }

    pub fn translate(&self, form: &SExpr) -> Result<Term, Error> {
        match form {
            SExpr::Integer(_) => Ok(Term::Quote(form.clone())),
            SExpr::Symbol(s) if s.is_nil() || s.is_t() || s.is_keyword() => {
                Ok(Term::Quote(form.clone()))
            }
            SExpr::Symbol(s) => Ok(Term::Var(s.clone())),
            SExpr::Pair(head, tail) => {
                let args = tail.to_vec().ok_or_else(|| {
                    Error::Malformed(format!("improper argument list in {form}"))
                })?;
                match &**head {
                    SExpr::Symbol(f) => self.translate_call(f, &args, form),
                    SExpr::Pair(..) if head.car() == SExpr::sym("LAMBDA") => {
                        self.translate_lambda(head, &args)
                    }
                    _ => Err(Error::Malformed(format!("illegal function position in {form}"))),
                }
            }
        }
    }

    fn translate_all(&self, forms: &[SExpr]) -> Result<Vec<Term>, Error> {
        forms.iter().map(|f| self.translate(f)).collect()
    }

    fn translate_call(&self, f: &Symbol, args: &[SExpr], form: &SExpr) -> Result<Term, Error> {
        match f.name() {
            "QUOTE" => match args {
                [v] => Ok(Term::Quote(v.clone())),
                _ => Err(Error::Malformed(format!("QUOTE takes one argument: {form}"))),
            },
            "LAMBDA" => Err(Error::MalformedLambda(format!(
                "a lambda must be applied to arguments: {form}"
            ))),
            "AND" => self.expand_and(args),
            "OR" => self.expand_or(args),
            "LIST" => self.expand_list(args),
            "COND" => self.expand_cond(args),
            _ => {
                let expected = match self.arity(f) {
                    Some(a) => Some(a),
                    None if self.permissive => None,
                    None => return Err(Error::UnknownFunction(f.clone())),
                };
                if let Some(expected) = expected {
                    if expected != args.len() {
                        return Err(Error::Arity {
                            name: f.clone(),
                            expected,
                            given: args.len(),
                        });
                    }
                }
                Ok(Term::App(f.clone(), self.translate_all(args)?))
            }
        }
    }

    fn translate_lambda(&self, lambda: &SExpr, args: &[SExpr]) -> Result<Term, Error> {
        let parts = lambda
            .to_vec()
            .filter(|p| p.len() == 3)
            .ok_or_else(|| Error::MalformedLambda(format!("expected (LAMBDA params body): {lambda}")))?;
        let params = parse_formals(&parts[1])
            .map_err(|m| Error::MalformedLambda(format!("{m} in {lambda}")))?;
        let body = self.translate(&parts[2])?;
        if let Some(free) = body.free_vars().into_iter().find(|v| !params.contains(v)) {
            return Err(Error::MalformedLambda(format!(
                "free variable {free} in the body of {lambda}"
            )));
        }
        if params.len() != args.len() {
            return Err(Error::MalformedLambda(format!(
                "{lambda} takes {} argument(s) but was given {}",
                params.len(),
                args.len()
            )));
        }
        Ok(Term::LambdaApp {
            params,
            body: Box::new(body),
            args: self.translate_all(args)?,
        })
    }

    fn expand_and(&self, args: &[SExpr]) -> Result<Term, Error> {
        match args {
            [] => Ok(Term::Quote(SExpr::t())),
            [a] => self.translate(a),
            [a, rest @ ..] => Ok(Term::App(
                Symbol::new("IF"),
                vec![self.translate(a)?, self.expand_and(rest)?, Term::nil()],
            )),
        }
    }

    fn expand_or(&self, args: &[SExpr]) -> Result<Term, Error> {
        match args {
            [] => Ok(Term::nil()),
            [a] => self.translate(a),
            [a, rest @ ..] => {
                let a = self.translate(a)?;
                Ok(Term::App(
                    Symbol::new("IF"),
                    vec![a.clone(), a, self.expand_or(rest)?],
                ))
            }
        }
    }

    fn expand_list(&self, args: &[SExpr]) -> Result<Term, Error> {
        match args {
            [] => Ok(Term::nil()),
            [a, rest @ ..] => Ok(Term::App(
                Symbol::new("CONS"),
                vec![self.translate(a)?, self.expand_list(rest)?],
            )),
        }
    }

    fn expand_cond(&self, clauses: &[SExpr]) -> Result<Term, Error> {
        let Some((clause, rest)) = clauses.split_first() else {
            return Ok(Term::nil());
        };
        let parts = clause
            .to_vec()
            .filter(|p| matches!(p.len(), 1 | 2))
            .ok_or_else(|| Error::Malformed(format!("bad COND clause {clause}")))?;
        if parts[0] == SExpr::t() && parts.len() == 2 {
            return self.translate(&parts[1]);
        }
        let test = self.translate(&parts[0])?;
        let otherwise = self.expand_cond(rest)?;
        let then = match parts.get(1) {
            Some(body) => self.translate(body)?,
            None => test.clone(),
        };
        Ok(Term::App(Symbol::new("IF"), vec![test, then, otherwise]))
    }
}

/// Parses a formals list: distinct, non-constant symbols.
pub fn parse_formals(form: &SExpr) -> Result<Vec<Symbol>, String> {
    let items = form
        .to_vec()
        .ok_or_else(|| format!("formals {form} are not a proper list"))?;
    let mut seen = HashSet::new();
    items
        .iter()
        .map(|item| match item {
            SExpr::Symbol(s) if !(s.is_nil() || s.is_t() || s.is_keyword()) => {
                if seen.insert(s.clone()) {
                    Ok(s.clone())
                } else {
                    Err(format!("duplicate formal {s}"))
                }
            }
            other => Err(format!("illegal formal {other}")),
        })
        .collect()
}

fn self_evaluating(v: &SExpr) -> bool {
    match v {
        SExpr::Integer(_) => true,
        SExpr::Symbol(s) => s.is_nil() || s.is_t() || s.is_keyword(),
        SExpr::Pair(..) => false,
    }
}

fn splice_into(out: &mut Vec<SExpr>, macro_name: &str, form: SExpr) {
    if form.car() == SExpr::sym(macro_name) {
        if let Some(items) = form.cdr().to_vec() {
            out.extend(items);
            return;
        }
    }
    out.push(form);
}

/// Display form: re-sugars `AND`/`OR` and drops quotes on self-evaluating
/// constants.
pub fn untranslate(term: &Term) -> SExpr {
    match term {
        Term::Var(v) => SExpr::Symbol(v.clone()),
        Term::Quote(v) if self_evaluating(v) => v.clone(),
        Term::Quote(v) => SExpr::list([SExpr::sym("QUOTE"), v.clone()]),
        Term::App(f, args) if f.name() == "IF" && args.len() == 3 => {
            let (test, then, otherwise) = (&args[0], &args[1], &args[2]);
            if *otherwise == Term::nil() {
                let mut items = vec![SExpr::sym("AND"), untranslate(test)];
                splice_into(&mut items, "AND", untranslate(then));
                SExpr::list(items)
            } else if test == then {
                let mut items = vec![SExpr::sym("OR"), untranslate(test)];
                splice_into(&mut items, "OR", untranslate(otherwise));
                SExpr::list(items)
            } else {
                SExpr::list([
                    SExpr::sym("IF"),
                    untranslate(test),
                    untranslate(then),
                    untranslate(otherwise),
                ])
            }
        }
        Term::App(f, args) => SExpr::cons(
            SExpr::Symbol(f.clone()),
            SExpr::list(args.iter().map(untranslate).collect::<Vec<_>>()),
        ),
        Term::LambdaApp { params, body, args } => SExpr::cons(
            SExpr::list([
                SExpr::sym("LAMBDA"),
                SExpr::list(params.iter().cloned().map(SExpr::Symbol).collect::<Vec<_>>()),
                untranslate(body),
            ]),
            SExpr::list(args.iter().map(untranslate).collect::<Vec<_>>()),
        ),
    }
}

/// Rewrites `(IF (ATOM x) a b)` and `(IF (ENDP x) a b)` to
/// `(IF (CONSP x) b a)`, and `(IF (NOT x) a b)` to `(IF x b a)`: the
/// normalized shape in which stored definitions are displayed.
pub fn normalize_tests(term: &Term) -> Term {
    match term {
        Term::Var(_) | Term::Quote(_) => term.clone(),
        Term::App(f, args) if f.name() == "IF" && args.len() == 3 => {
            let then = normalize_tests(&args[1]);
            let otherwise = normalize_tests(&args[2]);
            match &args[0] {
                Term::App(g, inner) if matches!(g.name(), "ATOM" | "ENDP") => Term::App(
                    f.clone(),
                    vec![
                        Term::App(Symbol::new("CONSP"), vec![normalize_tests(&inner[0])]),
                        otherwise,
                        then,
                    ],
                ),
                Term::App(g, inner) if g.name() == "NOT" => {
                    normalize_tests(&Term::App(
                        f.clone(),
                        vec![inner[0].clone(), args[2].clone(), args[1].clone()],
                    ))
                }
                test => Term::App(f.clone(), vec![normalize_tests(test), then, otherwise]),
            }
        }
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(normalize_tests).collect()),
        Term::LambdaApp { params, body, args } => Term::LambdaApp {
            params: params.clone(),
            body: Box::new(normalize_tests(body)),
            args: args.iter().map(normalize_tests).collect(),
        },
    }
}

/// Does `term` contain a builtin macro head? Translation output never does.
pub fn mentions_macro(term: &Term) -> bool {
    let mut found = false;
    term.for_each_fn(&mut |f| found |= builtins::is_macro(f));
    found
}
