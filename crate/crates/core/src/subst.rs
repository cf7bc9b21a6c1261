//! Functional substitution: renaming function heads, and copying
//! definitions under substitutions whose targets may be lambdas that add
//! arguments.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::builtins;
use crate::error::{CopyFunError, Error, Result};
use crate::syntax::{untranslate, SExpr, Symbol, Term};
use crate::world::{DefUn, FunctionRef, World};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubstTarget {
    Name(Symbol),
    /// `(LAMBDA params body)`. Free variables of `body` other than `params`
    /// become extra arguments of every copied caller.
    Lambda { params: Vec<Symbol>, body: Term },
    /// Do not copy (theorems only).
    Skip,
}

impl SubstTarget {
    pub fn lambda_sexpr(params: &[Symbol], body: &Term) -> SExpr {
        SExpr::list([
            SExpr::sym("LAMBDA"),
            SExpr::list(params.iter().cloned().map(SExpr::Symbol).collect::<Vec<_>>()),
            untranslate(body),
        ])
    }
}

/// An ordered map from old names to targets. Old names are distinct.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FnSubst {
    entries: Vec<(Symbol, SubstTarget)>,
}

impl FnSubst {
    pub fn new() -> Self {
        FnSubst::default()
    }

    /// All-`Name` substitution from pairs.
    pub fn from_names<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<Symbol>,
        B: Into<Symbol>,
    {
        let mut s = FnSubst::new();
        for (a, b) in pairs {
            s.insert(a.into(), SubstTarget::Name(b.into()))?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, old: Symbol, target: SubstTarget) -> Result<()> {
        if self.get(&old).is_some() {
            return Err(Error::Substitution(format!("{old} is mapped twice")));
        }
        if let SubstTarget::Lambda { params, .. } = &target {
            let distinct: HashSet<_> = params.iter().collect();
            if distinct.len() != params.len() {
                return Err(Error::MalformedLambda(format!(
                    "duplicate parameters in the target of {old}"
                )));
            }
        }
        self.entries.push((old, target));
        Ok(())
    }

    pub fn get(&self, old: &Symbol) -> Option<&SubstTarget> {
        self.entries.iter().find(|(k, _)| k == old).map(|(_, t)| t)
    }

    pub fn contains(&self, old: &Symbol) -> bool {
        self.get(old).is_some()
    }

    /// The target name when the entry is a `Name`.
    pub fn name_of(&self, old: &Symbol) -> Option<&Symbol> {
        match self.get(old) {
            Some(SubstTarget::Name(n)) => Some(n),
            _ => None,
        }
    }

    pub fn entries(&self) -> &[(Symbol, SubstTarget)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The entries whose old name satisfies `keep`, in order.
    pub fn restrict(&self, keep: impl Fn(&Symbol) -> bool) -> FnSubst {
        FnSubst {
            entries: self.entries.iter().filter(|(k, _)| keep(k)).cloned().collect(),
        }
    }
}

impl fmt::Display for FnSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexpr())
    }
}

/// Simultaneous renaming of function heads, inside lambda bodies too.
/// Variables are never touched. Only `Name` entries apply.
pub fn replacefns(subst: &FnSubst, terms: &[Term]) -> Vec<Term> {
    terms.iter().map(|t| replace_term(subst, t)).collect()
}

pub fn replace_term(subst: &FnSubst, term: &Term) -> Term {
    match term {
        Term::Var(_) | Term::Quote(_) => term.clone(),
        Term::App(f, args) => Term::App(
            subst.name_of(f).unwrap_or(f).clone(),
            args.iter().map(|a| replace_term(subst, a)).collect(),
        ),
        Term::LambdaApp { params, body, args } => Term::LambdaApp {
            params: params.clone(),
            body: Box::new(replace_term(subst, body)),
            args: args.iter().map(|a| replace_term(subst, a)).collect(),
        },
    }
}

fn show_symbols(items: &[Symbol]) -> String {
    SExpr::list(items.iter().cloned().map(SExpr::Symbol).collect::<Vec<_>>()).show()
}

/// A lambda target must take exactly the formals of what it replaces.
pub fn validate_lambda(
    old_formals: &[Symbol],
    params: &[Symbol],
    body: &Term,
) -> std::result::Result<(), CopyFunError> {
    if params == old_formals {
        Ok(())
    } else {
        Err(CopyFunError {
            lambda: SubstTarget::lambda_sexpr(params, body).show(),
            params: show_symbols(params),
            expected: show_symbols(old_formals),
        })
    }
}

fn formals_of<'w>(world: &'w World, f: &Symbol) -> Option<&'w [Symbol]> {
    match world.function(f)? {
        FunctionRef::Defined(d) => Some(&d.formals),
        FunctionRef::Abstract { signature, .. } => Some(&signature.formals),
    }
}

/// Applies a substitution to definitions and formulas, threading extra
/// arguments introduced by lambda targets.
pub(crate) struct Rewriter<'a> {
    world: &'a World,
    subst: &'a FnSubst,
    extras: HashMap<Symbol, Vec<Symbol>>,
}

impl<'a> Rewriter<'a> {
    /// Prepares extra-formal lists for `fns` and everything they call.
    pub(crate) fn new(world: &'a World, subst: &'a FnSubst, fns: &[Symbol]) -> Result<Self> {
        let mut r = Rewriter {
            world,
            subst,
            extras: HashMap::new(),
        };
        for f in fns {
            r.compute_extras(f)?;
        }
        Ok(r)
    }

    fn compute_extras(&mut self, f: &Symbol) -> Result<Vec<Symbol>> {
        if let Some(e) = self.extras.get(f) {
            return Ok(e.clone());
        }
        let Some(def) = self.world.defun(f) else {
            return Ok(Vec::new());
        };
        let mut out: Vec<Symbol> = Vec::new();
        for g in def.body.called_fns() {
            if &g == f {
                continue;
            }
            let more = match self.subst.get(&g) {
                Some(SubstTarget::Lambda { params, body }) if self.world.is_abstract(&g) => body
                    .free_vars()
                    .into_iter()
                    .filter(|v| !params.contains(v))
                    .collect(),
                Some(SubstTarget::Lambda { .. } | SubstTarget::Name(_))
                    if self.world.defun(&g).is_some() =>
                {
                    self.compute_extras(&g)?
                }
                _ => Vec::new(),
            };
            for v in more {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        if let Some(v) = out.iter().find(|v| def.formals.contains(v)) {
            return Err(Error::ExtraFormalClash {
                function: f.clone(),
                var: v.clone(),
            });
        }
        self.extras.insert(f.clone(), out.clone());
        Ok(out)
    }

    pub(crate) fn extras(&self, f: &Symbol) -> &[Symbol] {
        self.extras.get(f).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The name a derived function is copied to. A lambda target must be
    /// exactly `(LAMBDA formals (NEW formals... extras...))`.
    pub(crate) fn target_name(&self, old: &DefUn) -> Result<Symbol> {
        match self.subst.get(&old.name) {
            Some(SubstTarget::Name(n)) => Ok(n.clone()),
            Some(SubstTarget::Lambda { params, body }) => {
                validate_lambda(&old.formals, params, body)?;
                let expected: Vec<Term> = old
                    .formals
                    .iter()
                    .chain(self.extras(&old.name))
                    .cloned()
                    .map(Term::Var)
                    .collect();
                match body {
                    Term::App(new, args) if *args == expected => Ok(new.clone()),
                    _ => Err(Error::Substitution(format!(
                        "the lambda target {} of {} must call the new function on {}",
                        SubstTarget::lambda_sexpr(params, body).show(),
                        old.name,
                        SExpr::list(expected.iter().map(untranslate).collect::<Vec<_>>()).show()
                    ))),
                }
            }
            Some(SubstTarget::Skip) => Err(Error::Substitution(format!(
                "function {} cannot be skipped",
                old.name
            ))),
            None => Err(Error::Substitution(format!("{} is not mapped", old.name))),
        }
    }

    pub(crate) fn copy_function(&self, old: &DefUn, new_name: &Symbol) -> Result<DefUn> {
        let extras = self.extras(&old.name);
        let this = SelfCall {
            old: &old.name,
            new: new_name,
            extras,
        };
        let body = self.rewrite(&old.body, Some(&this), false)?;
        Ok(DefUn {
            name: new_name.clone(),
            formals: old.formals.iter().chain(extras).cloned().collect(),
            body,
            doc: old.doc.clone(),
        })
    }

    pub(crate) fn term(&self, term: &Term) -> Result<Term> {
        self.rewrite(term, None, false)
    }

    fn rewrite(&self, term: &Term, this: Option<&SelfCall<'_>>, in_lambda: bool) -> Result<Term> {
        match term {
            Term::Var(_) | Term::Quote(_) => Ok(term.clone()),
            Term::App(f, args) => {
                let args = args
                    .iter()
                    .map(|a| self.rewrite(a, this, in_lambda))
                    .collect::<Result<Vec<_>>>()?;
                self.call(f, args, this, in_lambda)
            }
            Term::LambdaApp { params, body, args } => Ok(Term::LambdaApp {
                params: params.clone(),
                body: Box::new(self.rewrite(body, this, true)?),
                args: args
                    .iter()
                    .map(|a| self.rewrite(a, this, in_lambda))
                    .collect::<Result<_>>()?,
            }),
        }
    }

    fn with_extras(head: Symbol, mut args: Vec<Term>, extras: &[Symbol], in_lambda: bool) -> Result<Term> {
        if in_lambda && !extras.is_empty() {
            return Err(Error::NestedLambda(format!(
                "a call of {head} inside a lambda body needs the extra arguments {}",
                show_symbols(extras)
            )));
        }
        args.extend(extras.iter().cloned().map(Term::Var));
        Ok(Term::App(head, args))
    }

    fn call(&self, f: &Symbol, args: Vec<Term>, this: Option<&SelfCall<'_>>, in_lambda: bool) -> Result<Term> {
        if let Some(s) = this.filter(|s| s.old == f) {
            return Self::with_extras(s.new.clone(), args, s.extras, in_lambda);
        }
        match self.subst.get(f) {
            Some(SubstTarget::Name(g)) => Self::with_extras(g.clone(), args, self.extras(f), in_lambda),
            Some(SubstTarget::Lambda { params, body }) => {
                let formals = formals_of(self.world, f).ok_or_else(|| Error::UnknownFunction(f.clone()))?;
                validate_lambda(formals, params, body)?;
                let extras: Vec<Symbol> =
                    body.free_vars().into_iter().filter(|v| !params.contains(v)).collect();
                if in_lambda && !extras.is_empty() {
                    return Err(Error::NestedLambda(format!(
                        "the lambda target of {f} is used inside a lambda body"
                    )));
                }
                let body = self.lambda_body(f, body)?;
                let bound: HashMap<&Symbol, &Term> = params.iter().zip(&args).collect();
                Ok(body.substitute_vars(&|v| bound.get(v).map(|t| (*t).clone())))
            }
            Some(SubstTarget::Skip) => Err(Error::Substitution(format!(
                "function {f} cannot be skipped"
            ))),
            None => {
                self.check_unmapped(f)?;
                Ok(Term::App(f.clone(), args))
            }
        }
    }

    /// Renames the heads of a lambda target's body. Only plain renamings
    /// may occur there.
    fn lambda_body(&self, owner: &Symbol, body: &Term) -> Result<Term> {
        let mut bad = None;
        body.for_each_fn(&mut |g| {
            if bad.is_some() {
                return;
            }
            match self.subst.get(g) {
                Some(SubstTarget::Name(_)) if self.extras(g).is_empty() => {}
                Some(_) => bad = Some(g.clone()),
                None => {}
            }
        });
        if let Some(g) = bad {
            return Err(Error::NestedLambda(format!(
                "the lambda target of {owner} calls {g}, which is itself replaced by a lambda or needs extra arguments"
            )));
        }
        Ok(replace_term(self.subst, body))
    }

    /// An unmapped callee is kept only when it cannot reach anything the
    /// substitution replaces.
    fn check_unmapped(&self, f: &Symbol) -> Result<()> {
        if builtins::is_builtin(f) {
            return Ok(());
        }
        let mut seen = HashSet::new();
        let mut stack = vec![f.clone()];
        while let Some(g) = stack.pop() {
            if !seen.insert(g.clone()) || builtins::is_builtin(&g) {
                continue;
            }
            if self.subst.contains(&g) {
                return Err(Error::UnmappedDependency(format!(
                    "{f} is not mapped by the substitution but depends on {g}, which is"
                )));
            }
            match self.world.function(&g) {
                Some(FunctionRef::Defined(d)) => stack.extend(d.body.called_fns()),
                Some(FunctionRef::Abstract { .. }) => {
                    return Err(Error::UnmappedDependency(format!(
                        "{f} depends on the abstract function {g}, which the substitution does not map"
                    )))
                }
                None => return Err(Error::UnknownFunction(g)),
            }
        }
        Ok(())
    }
}

struct SelfCall<'a> {
    old: &'a Symbol,
    new: &'a Symbol,
    extras: &'a [Symbol],
}

/// Extra trailing formals the copy of `f` receives under `subst`.
pub fn extra_formals(world: &World, subst: &FnSubst, f: &Symbol) -> Result<Vec<Symbol>> {
    let r = Rewriter::new(world, subst, std::slice::from_ref(f))?;
    Ok(r.extras(f).to_vec())
}

/// Copies `old` under `subst` as `new_name`. Recursive calls go to the new
/// name and pass extra arguments through unchanged.
pub fn copy_function(world: &World, old: &DefUn, subst: &FnSubst, new_name: &Symbol) -> Result<DefUn> {
    let r = Rewriter::new(world, subst, std::slice::from_ref(&old.name))?;
    r.copy_function(old, new_name)
}

/// Applies `subst` to a formula, expanding lambda targets.
pub fn instantiate_term(world: &World, subst: &FnSubst, term: &Term) -> Result<Term> {
    let fns: Vec<Symbol> = term.called_fns();
    Rewriter::new(world, subst, &fns)?.term(term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::read_one;
    use crate::testutil::world_from;

    fn t(text: &str) -> Term {
        crate::world::World::empty()
            .translator()
            .permissive()
            .translate(&read_one(text).unwrap())
            .unwrap()
    }

    fn lambda(params: &[&str], body: &str) -> SubstTarget {
        SubstTarget::Lambda {
            params: params.iter().map(|p| Symbol::new(p)).collect(),
            body: t(body),
        }
    }

    #[test]
    fn swap_example() {
        let s = FnSubst::from_names([("foo", "bar"), ("bar", "foo")]).unwrap();
        let out = replacefns(&s, &[t("(+ ((lambda (foo j) (foo foo j)) x y) (bar x y))")]);
        let shown = SExpr::list(out.iter().map(Term::to_sexpr).collect::<Vec<_>>()).show();
        assert_eq!(shown, "((+ ((LAMBDA (FOO J) (BAR FOO J)) X Y) (FOO X Y)))");
    }

    #[test]
    fn duplicate_entries_rejected() {
        let mut s = FnSubst::from_names([("a", "b")]).unwrap();
        assert!(s.insert(Symbol::new("a"), SubstTarget::Skip).is_err());
    }

    #[test]
    fn copyfun_message() {
        let err = validate_lambda(&[Symbol::new("lst")], &[Symbol::new("xs")], &t("(subset-equal xs y)"))
            .unwrap_err();
        assert_eq!(
            err.to_string(),
            "Error in COPYFUN: The lambda construct (LAMBDA (XS) (SUBSET-EQUAL XS Y)) takes as input (XS), \
             which should be an exact match of the original arguments of the original function: (LST)"
        );
        assert!(validate_lambda(&[Symbol::new("x")], &[Symbol::new("x")], &t("(member-equal x y)")).is_ok());
    }

    #[test]
    fn copy_foldr_with_names() {
        let w = world_from("");
        let s = FnSubst::from_names([("binary-function", "cons"), ("foldr", "cons-foldr")]).unwrap();
        let foldr = w.defun(&Symbol::new("foldr")).unwrap();
        let copy = copy_function(&w, foldr, &s, &Symbol::new("cons-foldr")).unwrap();
        assert_eq!(copy.formals, vec![Symbol::new("x"), Symbol::new("xs")]);
        assert_eq!(
            copy.body.to_string(),
            "(IF (ATOM XS) X (CONS (CAR XS) (CONS-FOLDR X (CDR XS))))"
        );
    }

    const PREDICATES: &str = "
        (defspec list-predicate ((predicate (x) t))
          (local (defun predicate (x) x)))
        (defun predicate-listp (lst)
          (if (atom lst) (null lst)
            (and (predicate (car lst)) (predicate-listp (cdr lst)))))";

    #[test]
    fn lambda_target_adds_trailing_formal() {
        let w = world_from(PREDICATES);
        let mut s = FnSubst::new();
        s.insert(Symbol::new("predicate"), lambda(&["x"], "(member-equal x y)")).unwrap();
        s.insert(Symbol::new("predicate-listp"), lambda(&["lst"], "(subset-equal lst y)")).unwrap();
        let old = w.defun(&Symbol::new("predicate-listp")).unwrap();
        let r = Rewriter::new(&w, &s, std::slice::from_ref(&old.name)).unwrap();
        let name = r.target_name(old).unwrap();
        assert_eq!(name, Symbol::new("subset-equal"));
        let copy = r.copy_function(old, &name).unwrap();
        assert_eq!(copy.formals, vec![Symbol::new("lst"), Symbol::new("y")]);
        assert_eq!(
            copy.body.to_string(),
            "(IF (ATOM LST) (NULL LST) (IF (MEMBER-EQUAL (CAR LST) Y) (SUBSET-EQUAL (CDR LST) Y) 'NIL))"
        );
    }

    #[test]
    fn extra_variable_clash_is_an_error() {
        let w = world_from(PREDICATES);
        let mut s = FnSubst::new();
        s.insert(Symbol::new("predicate"), lambda(&["x"], "(member-equal x lst)")).unwrap();
        assert_eq!(
            extra_formals(&w, &s, &Symbol::new("predicate-listp")).unwrap_err(),
            Error::ExtraFormalClash {
                function: Symbol::new("predicate-listp"),
                var: Symbol::new("lst")
            }
        );
    }

    #[test]
    fn nested_lambda_targets_are_rejected() {
        let w = world_from(PREDICATES);
        let mut s = FnSubst::new();
        s.insert(Symbol::new("predicate"), lambda(&["x"], "(member-equal x y)")).unwrap();
        s.insert(Symbol::new("predicate-listp"), SubstTarget::Name(Symbol::new("all-in"))).unwrap();
        let term = t("(predicate-listp ((lambda (z) (predicate z)) v))");
        // The lambda target of PREDICATE would need Y inside a closed body.
        assert!(matches!(instantiate_term(&w, &s, &term), Err(Error::NestedLambda(_))));
    }

    #[test]
    fn unmapped_dependency() {
        let w = world_from(
            "(defun twice (x y) (binary-function x (binary-function x y)))
             (defun user (x) (twice x x))",
        );
        let s = FnSubst::from_names([("binary-function", "cons")]).unwrap();
        let user = w.defun(&Symbol::new("user")).unwrap();
        assert!(matches!(
            copy_function(&w, user, &s, &Symbol::new("c-user")),
            Err(Error::UnmappedDependency(_))
        ));
    }

    #[test]
    fn unrelated_helpers_are_kept() {
        let w = world_from(
            "(defun helper (x) (car x))
             (defun user (x y) (binary-function (helper x) y))",
        );
        let s = FnSubst::from_names([("binary-function", "cons"), ("user", "c-user")]).unwrap();
        let user = w.defun(&Symbol::new("user")).unwrap();
        let copy = copy_function(&w, user, &s, &Symbol::new("c-user")).unwrap();
        assert_eq!(copy.body.to_string(), "(CONS (HELPER X) Y)");
    }
}
