//! The ordered logical world: admitted events plus the indices the
//! instantiation machinery queries.
//!
//! Worlds are persistent values. [`World::admit`] returns a new world and
//! leaves its receiver untouched. Every index is derivable from the event
//! list; [`World::indices_consistent`] checks that.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::builtins;
use crate::check::{self, Universe, Verdict};
use crate::error::{Error, Result};
use crate::eval::{FnBinding, FnBindings};
use crate::instantiate::Justification;
use crate::subst::{FnSubst, SubstTarget};
use crate::syntax::{Arities, SExpr, Symbol, Term, Translator};

#[derive(Clone, Debug, PartialEq)]
pub struct DefUn {
    pub name: Symbol,
    pub formals: Vec<Symbol>,
    pub body: Term,
    pub doc: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Rewrite,
    TypePrescription,
    ForwardChaining,
}

impl RuleKind {
    pub fn keyword(self) -> &'static str {
        match self {
            RuleKind::Rewrite => ":REWRITE",
            RuleKind::TypePrescription => ":TYPE-PRESCRIPTION",
            RuleKind::ForwardChaining => ":FORWARD-CHAINING",
        }
    }

    pub fn from_keyword(s: &Symbol) -> Option<Self> {
        match s.name() {
            ":REWRITE" => Some(RuleKind::Rewrite),
            ":TYPE-PRESCRIPTION" => Some(RuleKind::TypePrescription),
            ":FORWARD-CHAINING" => Some(RuleKind::ForwardChaining),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AttrValue {
    Term(Term),
    Terms(Vec<Term>),
}

/// A rule class with its attribute terms (`:TYPED-TERM`, `:TRIGGER-TERMS`,
/// `:COROLLARY`).
#[derive(Clone, Debug, PartialEq)]
pub struct RuleClass {
    pub kind: RuleKind,
    pub attributes: Vec<(Symbol, AttrValue)>,
}

impl RuleClass {
    pub fn rewrite() -> Self {
        RuleClass {
            kind: RuleKind::Rewrite,
            attributes: Vec::new(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.attributes.iter().flat_map(|(_, v)| match v {
            AttrValue::Term(t) => std::slice::from_ref(t).iter(),
            AttrValue::Terms(ts) => ts.iter(),
        })
    }

    pub fn try_map_terms(&self, f: &mut impl FnMut(&Term) -> Result<Term>) -> Result<RuleClass> {
        let attributes = self
            .attributes
            .iter()
            .map(|(k, v)| {
                let v = match v {
                    AttrValue::Term(t) => AttrValue::Term(f(t)?),
                    AttrValue::Terms(ts) => {
                        AttrValue::Terms(ts.iter().map(&mut *f).collect::<Result<_>>()?)
                    }
                };
                Ok((k.clone(), v))
            })
            .collect::<Result<_>>()?;
        Ok(RuleClass {
            kind: self.kind,
            attributes,
        })
    }

    pub fn to_sexpr(&self) -> SExpr {
        let mut items = vec![SExpr::sym(self.kind.keyword())];
        for (k, v) in &self.attributes {
            items.push(SExpr::Symbol(k.clone()));
            items.push(match v {
                AttrValue::Term(t) => t.to_sexpr(),
                AttrValue::Terms(ts) => SExpr::list(ts.iter().map(Term::to_sexpr).collect::<Vec<_>>()),
            });
        }
        SExpr::list(items)
    }
}

/// Where a theorem came from.
#[derive(Clone, Debug, PartialEq)]
pub enum TheoremOrigin {
    /// Entered by the user; checked at admission.
    User,
    /// Exported by a specification (including `is-a` expansions).
    Constraint { spec: Symbol },
    /// Copied by an instantiation; justified rather than re-checked.
    Copied(Justification),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefThm {
    pub name: Symbol,
    pub formula: Term,
    pub classes: Vec<RuleClass>,
    pub origin: TheoremOrigin,
}

impl DefThm {
    pub fn user(name: Symbol, formula: Term) -> Self {
        DefThm {
            name,
            formula,
            classes: vec![RuleClass::rewrite()],
            origin: TheoremOrigin::User,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.formula).chain(self.classes.iter().flat_map(RuleClass::terms))
    }

    pub fn mentions_fn(&self, f: &Symbol) -> bool {
        self.terms().any(|t| t.calls(f))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefConst {
    pub name: Symbol,
    pub value: SExpr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Signature {
    pub function: Symbol,
    pub formals: Vec<Symbol>,
    pub output: Symbol,
}

/// A named specification. The witnesses and local theorems are kept for
/// admission-time checking only; no public accessor exposes them.
#[derive(Clone, PartialEq)]
pub struct DefSpec {
    pub name: Symbol,
    pub signatures: Vec<Signature>,
    pub(crate) witnesses: Vec<DefUn>,
    pub(crate) local_theorems: Vec<DefThm>,
    pub exported: Vec<DefThm>,
}

impl DefSpec {
    pub fn new(
        name: Symbol,
        signatures: Vec<Signature>,
        witnesses: Vec<DefUn>,
        local_theorems: Vec<DefThm>,
        exported: Vec<DefThm>,
    ) -> Self {
        DefSpec {
            name,
            signatures,
            witnesses,
            local_theorems,
            exported,
        }
    }

    pub fn functions(&self) -> Vec<Symbol> {
        self.signatures.iter().map(|s| s.function.clone()).collect()
    }

    pub fn signature(&self, f: &Symbol) -> Option<&Signature> {
        self.signatures.iter().find(|s| &s.function == f)
    }
}

impl fmt::Debug for DefSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DefSpec")
            .field("name", &self.name)
            .field("signatures", &self.signatures)
            .field("exported", &self.exported)
            .finish_non_exhaustive()
    }
}

/// Record of a discharged instantiation.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceRecord {
    pub spec: Symbol,
    pub name: Symbol,
    pub subst: FnSubst,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    DefUn(DefUn),
    DefThm(DefThm),
    DefConst(DefConst),
    DefSpec(DefSpec),
    Instance(InstanceRecord),
}

impl Event {
    pub fn name(&self) -> &Symbol {
        match self {
            Event::DefUn(d) => &d.name,
            Event::DefThm(t) => &t.name,
            Event::DefConst(c) => &c.name,
            Event::DefSpec(s) => &s.name,
            Event::Instance(i) => &i.name,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    Function,
    /// Signature function number `n` of the specification at this ordinal.
    Abstract(usize),
    Theorem,
    Constant,
    Spec,
    Instance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub ordinal: usize,
    pub kind: EntryKind,
}

pub enum FunctionRef<'a> {
    Defined(&'a DefUn),
    Abstract {
        spec: &'a Symbol,
        signature: &'a Signature,
    },
}

impl FunctionRef<'_> {
    pub fn arity(&self) -> usize {
        match self {
            FunctionRef::Defined(d) => d.formals.len(),
            FunctionRef::Abstract { signature, .. } => signature.formals.len(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
struct Index {
    names: HashMap<Symbol, Entry>,
    /// Symbol -> ordinals of theorems whose terms mention it.
    mentions: HashMap<Symbol, Vec<usize>>,
}

impl Index {
    fn add(&mut self, ordinal: usize, event: &Event) {
        let mut put = |name: &Symbol, kind| {
            self.names.insert(name.clone(), Entry { ordinal, kind });
        };
        match event {
            Event::DefUn(d) => put(&d.name, EntryKind::Function),
            Event::DefConst(c) => put(&c.name, EntryKind::Constant),
            Event::Instance(i) => put(&i.name, EntryKind::Instance),
            Event::DefSpec(s) => {
                put(&s.name, EntryKind::Spec);
                for (n, sig) in s.signatures.iter().enumerate() {
                    put(&sig.function, EntryKind::Abstract(n));
                }
            }
            Event::DefThm(t) => {
                put(&t.name, EntryKind::Theorem);
                let mut seen = HashSet::new();
                for term in t.terms() {
                    let mut note = |s: &Symbol| {
                        if seen.insert(s.clone()) {
                            self.mentions.entry(s.clone()).or_default().push(ordinal);
                        }
                    };
                    term.for_each_fn(&mut note);
                    term.for_each_var(&mut note);
                }
            }
        }
    }
}

/// How theorem checks run during admission.
#[derive(Clone, Debug, Default)]
pub struct AdmitConfig {
    pub universe: Universe,
    /// Admit user theorems and specification exports without checking.
    pub assume: bool,
}

#[derive(Clone, Default)]
pub struct World {
    events: Vec<Arc<Event>>,
    index: Index,
}

impl fmt::Debug for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "World({} events)", self.events.len())
    }
}

impl Arities for World {
    fn arity(&self, f: &Symbol) -> Option<usize> {
        self.function(f).map(|r| r.arity())
    }
}

impl World {
    pub fn empty() -> Self {
        World::default()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.events.iter().map(|e| &**e)
    }

    pub fn event(&self, ordinal: usize) -> Option<&Event> {
        self.events.get(ordinal).map(|e| &**e)
    }

    pub fn entry(&self, name: &Symbol) -> Option<Entry> {
        self.index.names.get(name).copied()
    }

    pub fn contains(&self, name: &Symbol) -> bool {
        self.index.names.contains_key(name)
    }

    /// Admission ordinal of a named event.
    pub fn decode_logical_name(&self, name: &Symbol) -> Result<usize> {
        self.entry(name)
            .map(|e| e.ordinal)
            .ok_or_else(|| Error::UnknownName(name.clone()))
    }

    pub fn function(&self, name: &Symbol) -> Option<FunctionRef<'_>> {
        let entry = self.entry(name)?;
        match (entry.kind, self.event(entry.ordinal)?) {
            (EntryKind::Function, Event::DefUn(d)) => Some(FunctionRef::Defined(d)),
            (EntryKind::Abstract(n), Event::DefSpec(s)) => Some(FunctionRef::Abstract {
                spec: &s.name,
                signature: &s.signatures[n],
            }),
            _ => None,
        }
    }

    pub fn defun(&self, name: &Symbol) -> Option<&DefUn> {
        match self.function(name)? {
            FunctionRef::Defined(d) => Some(d),
            FunctionRef::Abstract { .. } => None,
        }
    }

    pub fn is_abstract(&self, name: &Symbol) -> bool {
        matches!(self.function(name), Some(FunctionRef::Abstract { .. }))
    }

    /// The formals and macro-free body of a defined function.
    pub fn def_body(&self, name: &Symbol) -> Result<(&[Symbol], &Term)> {
        match self.function(name) {
            Some(FunctionRef::Defined(d)) => Ok((&d.formals, &d.body)),
            Some(FunctionRef::Abstract { .. }) => Err(Error::WrongKind {
                name: name.clone(),
                expected: "defined function",
            }),
            None if self.contains(name) => Err(Error::WrongKind {
                name: name.clone(),
                expected: "function",
            }),
            None => Err(Error::UnknownName(name.clone())),
        }
    }

    pub fn theorem(&self, name: &Symbol) -> Option<&DefThm> {
        let entry = self.entry(name)?;
        match self.event(entry.ordinal)? {
            Event::DefThm(t) if entry.kind == EntryKind::Theorem => Some(t),
            _ => None,
        }
    }

    /// The stored formula and rule classes of a theorem.
    pub fn theorem_of(&self, name: &Symbol) -> Result<(&Term, &[RuleClass])> {
        match self.theorem(name) {
            Some(t) => Ok((&t.formula, &t.classes)),
            None if self.contains(name) => Err(Error::WrongKind {
                name: name.clone(),
                expected: "theorem",
            }),
            None => Err(Error::UnknownName(name.clone())),
        }
    }

    pub fn spec(&self, name: &Symbol) -> Option<&DefSpec> {
        let entry = self.entry(name)?;
        match self.event(entry.ordinal)? {
            Event::DefSpec(s) if entry.kind == EntryKind::Spec => Some(s),
            _ => None,
        }
    }

    pub fn constant(&self, name: &Symbol) -> Option<&SExpr> {
        let entry = self.entry(name)?;
        match self.event(entry.ordinal)? {
            Event::DefConst(c) => Some(&c.value),
            _ => None,
        }
    }

    pub fn instance(&self, name: &Symbol) -> Option<&InstanceRecord> {
        let entry = self.entry(name)?;
        match self.event(entry.ordinal)? {
            Event::Instance(i) => Some(i),
            _ => None,
        }
    }

    /// Defined functions with their ordinals, in world order.
    pub fn defuns(&self) -> impl Iterator<Item = (usize, &DefUn)> {
        self.events().enumerate().filter_map(|(i, e)| match e {
            Event::DefUn(d) => Some((i, d)),
            _ => None,
        })
    }

    /// Theorems with their ordinals, in world order.
    pub fn theorems(&self) -> impl Iterator<Item = (usize, &DefThm)> {
        self.events().enumerate().filter_map(|(i, e)| match e {
            Event::DefThm(t) => Some((i, t)),
            _ => None,
        })
    }

    /// Theorems whose formula or class attributes mention `sym`, in world
    /// order.
    pub fn symbol_lemmas(&self, sym: &Symbol) -> Vec<Symbol> {
        self.index
            .mentions
            .get(sym)
            .into_iter()
            .flatten()
            .map(|&o| self.events[o].name().clone())
            .collect()
    }

    pub fn translator(&self) -> Translator<'_> {
        Translator::new(self)
    }

    pub fn translate(&self, form: &SExpr) -> Result<Term> {
        self.translator().translate(form)
    }

    /// True when evaluating `term` can never reach an abstract function.
    pub fn is_executable(&self, term: &Term) -> bool {
        let mut seen = HashSet::new();
        let mut stack = term.called_fns();
        while let Some(f) = stack.pop() {
            if !seen.insert(f.clone()) || builtins::is_builtin(&f) {
                continue;
            }
            match self.function(&f) {
                Some(FunctionRef::Defined(d)) => stack.extend(d.body.called_fns()),
                _ => return false,
            }
        }
        true
    }

    /// Bindings from every abstract function to its hidden witness, used to
    /// check theorems about abstract functions.
    pub(crate) fn witness_bindings(&self) -> FnBindings {
        let mut out = FnBindings::new();
        for e in self.events() {
            if let Event::DefSpec(s) = e {
                add_witnesses(&mut out, s);
            }
        }
        out
    }

    /// True when the incremental indices equal indices rebuilt from scratch.
    pub fn indices_consistent(&self) -> bool {
        let mut rebuilt = Index::default();
        for (i, e) in self.events().enumerate() {
            rebuilt.add(i, e);
        }
        rebuilt == self.index
    }

    fn push(&mut self, event: Event) {
        let ordinal = self.events.len();
        self.index.add(ordinal, &event);
        self.events.push(Arc::new(event));
    }

    pub fn admit(&self, event: Event) -> Result<World> {
        self.admit_with(event, &AdmitConfig::default())
    }

    /// Admits one event, returning the extended world.
    pub fn admit_with(&self, event: Event, config: &AdmitConfig) -> Result<World> {
        let mut next = self.clone();
        match event {
            Event::DefUn(d) => {
                self.check_defun(&d, &[])?;
                next.push(Event::DefUn(d));
            }
            Event::DefThm(t) => {
                self.check_theorem(&t, &[], config, &self.witness_bindings())?;
                next.push(Event::DefThm(t));
            }
            Event::DefConst(c) => {
                self.check_fresh(&c.name)?;
                let n = c.name.name();
                if n.len() < 3 || !n.starts_with('*') || !n.ends_with('*') {
                    return Err(Error::Malformed(format!(
                        "constant name {n} must be wrapped in asterisks"
                    )));
                }
                next.push(Event::DefConst(c));
            }
            Event::Instance(i) => {
                self.check_fresh(&i.name)?;
                if self.spec(&i.spec).is_none() {
                    return Err(Error::WrongKind {
                        name: i.spec.clone(),
                        expected: "specification",
                    });
                }
                next.push(Event::Instance(i));
            }
            Event::DefSpec(s) => {
                self.check_defspec(&s, config)?;
                let exported: Vec<DefThm> = s
                    .exported
                    .iter()
                    .map(|t| DefThm {
                        origin: TheoremOrigin::Constraint { spec: s.name.clone() },
                        ..t.clone()
                    })
                    .collect();
                next.push(Event::DefSpec(DefSpec {
                    exported: exported.clone(),
                    ..s
                }));
                for t in exported {
                    next.push(Event::DefThm(t));
                }
            }
        }
        Ok(next)
    }

    fn check_fresh(&self, name: &Symbol) -> Result<()> {
        if builtins::is_reserved(name) {
            Err(Error::ReservedName(name.clone()))
        } else if self.contains(name) {
            Err(Error::DuplicateName(name.clone()))
        } else {
            Ok(())
        }
    }

    fn scope_arity(&self, f: &Symbol, scope: &[(Symbol, usize)]) -> Option<usize> {
        scope
            .iter()
            .find(|(n, _)| n == f)
            .map(|&(_, a)| a)
            .or_else(|| builtins::arity(f))
            .or_else(|| self.arity(f))
    }

    /// Checks that `term` is macro-free, calls only known functions (from the
    /// world, builtins, or `scope`) with the right arity, and that its
    /// lambdas are well formed.
    pub fn validate_term(&self, term: &Term, scope: &[(Symbol, usize)]) -> Result<()> {
        match term {
            Term::Var(v) => {
                if v.is_nil() || v.is_t() || v.is_keyword() {
                    return Err(Error::Malformed(format!("{v} cannot be a variable")));
                }
                Ok(())
            }
            Term::Quote(_) => Ok(()),
            Term::App(f, args) => {
                let expected = self
                    .scope_arity(f, scope)
                    .ok_or_else(|| Error::UnknownFunction(f.clone()))?;
                if expected != args.len() {
                    return Err(Error::Arity {
                        name: f.clone(),
                        expected,
                        given: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.validate_term(a, scope))
            }
            Term::LambdaApp { params, body, args } => {
                let distinct: HashSet<_> = params.iter().collect();
                if distinct.len() != params.len() || params.len() != args.len() {
                    return Err(Error::MalformedLambda(term.to_string()));
                }
                if body.free_vars().iter().any(|v| !params.contains(v)) {
                    return Err(Error::MalformedLambda(format!(
                        "lambda body is not closed in {term}"
                    )));
                }
                self.validate_term(body, scope)?;
                args.iter().try_for_each(|a| self.validate_term(a, scope))
            }
        }
    }

    fn check_formals(formals: &[Symbol]) -> Result<()> {
        let mut seen = HashSet::new();
        for f in formals {
            if f.is_nil() || f.is_t() || f.is_keyword() || !seen.insert(f) {
                return Err(Error::Malformed(format!("illegal or duplicate formal {f}")));
            }
        }
        Ok(())
    }

    fn check_defun(&self, d: &DefUn, scope: &[(Symbol, usize)]) -> Result<()> {
        self.check_fresh(&d.name)?;
        Self::check_formals(&d.formals)?;
        let mut inner = scope.to_vec();
        inner.push((d.name.clone(), d.formals.len()));
        self.validate_term(&d.body, &inner)?;
        if let Some(v) = d.body.free_vars().into_iter().find(|v| !d.formals.contains(v)) {
            return Err(Error::UnboundVariable {
                function: d.name.clone(),
                var: v,
            });
        }
        Ok(())
    }

    fn check_theorem(
        &self,
        t: &DefThm,
        scope: &[(Symbol, usize)],
        config: &AdmitConfig,
        witnesses: &FnBindings,
    ) -> Result<()> {
        self.check_fresh(&t.name)?;
        for term in t.terms() {
            self.validate_term(term, scope)?;
        }
        match &t.origin {
            TheoremOrigin::Copied(j) => {
                let before = |n: &Symbol| self.contains(n);
                if !before(&j.origin) || !before(&j.obligation) {
                    return Err(Error::Malformed(format!(
                        "justification of {} refers to events not in the world",
                        t.name
                    )));
                }
                Ok(())
            }
            _ if config.assume => Ok(()),
            _ => match check::check_formula_with(self, &t.formula, &config.universe, witnesses) {
                Verdict::Pass => Ok(()),
                verdict => Err(Error::TheoremCheck {
                    name: t.name.clone(),
                    verdict,
                }),
            },
        }
    }

    fn check_defspec(&self, s: &DefSpec, config: &AdmitConfig) -> Result<()> {
        let spec_err = |message: String| Error::Spec {
            spec: s.name.clone(),
            message,
        };
        self.check_fresh(&s.name)?;
        let mut names = HashSet::from([s.name.clone()]);
        let mut scope = Vec::new();
        for sig in &s.signatures {
            self.check_fresh(&sig.function)?;
            Self::check_formals(&sig.formals)?;
            if !names.insert(sig.function.clone()) {
                return Err(Error::DuplicateName(sig.function.clone()));
            }
            scope.push((sig.function.clone(), sig.formals.len()));
        }
        for sig in &s.signatures {
            let witness = s
                .witnesses
                .iter()
                .find(|w| w.name == sig.function)
                .ok_or_else(|| spec_err(format!("no local witness for {}", sig.function)))?;
            if witness.formals.len() != sig.formals.len() {
                return Err(spec_err(format!(
                    "witness for {} takes {} argument(s) but the signature declares {}",
                    sig.function,
                    witness.formals.len(),
                    sig.formals.len()
                )));
            }
        }
        let mut witness_names = HashSet::new();
        for w in &s.witnesses {
            if s.signature(&w.name).is_none() {
                return Err(spec_err(format!(
                    "local definition {} is not a signature function",
                    w.name
                )));
            }
            if !witness_names.insert(&w.name) {
                return Err(spec_err(format!("two local definitions of {}", w.name)));
            }
            Self::check_formals(&w.formals)?;
            self.validate_term(&w.body, &scope)?;
            if let Some(v) = w.body.free_vars().into_iter().find(|v| !w.formals.contains(v)) {
                return Err(Error::UnboundVariable {
                    function: w.name.clone(),
                    var: v,
                });
            }
        }
        let mut bindings = self.witness_bindings();
        add_witnesses(&mut bindings, s);
        for t in s.local_theorems.iter().chain(&s.exported) {
            if !names.insert(t.name.clone()) {
                return Err(Error::DuplicateName(t.name.clone()));
            }
            self.check_theorem(
                &DefThm {
                    origin: TheoremOrigin::User,
                    ..t.clone()
                },
                &scope,
                config,
                &bindings,
            )?;
        }
        Ok(())
    }

    /// A debugging dump, one landmark per event. Witness bodies never appear.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.events().enumerate() {
            let body = match e {
                Event::DefUn(d) => SExpr::list([
                    SExpr::sym("DEFUN"),
                    SExpr::Symbol(d.name.clone()),
                    symbols(&d.formals),
                    d.body.to_sexpr(),
                ]),
                Event::DefThm(t) => SExpr::list([
                    SExpr::sym("DEFTHM"),
                    SExpr::Symbol(t.name.clone()),
                    t.formula.to_sexpr(),
                    SExpr::list(t.classes.iter().map(RuleClass::to_sexpr).collect::<Vec<_>>()),
                ]),
                Event::DefConst(c) => SExpr::list([
                    SExpr::sym("DEFCONST"),
                    SExpr::Symbol(c.name.clone()),
                    SExpr::list([SExpr::sym("QUOTE"), c.value.clone()]),
                ]),
                Event::DefSpec(s) => SExpr::list([
                    SExpr::sym("DEFSPEC"),
                    SExpr::Symbol(s.name.clone()),
                    SExpr::list(
                        s.signatures
                            .iter()
                            .map(|sig| {
                                SExpr::list([
                                    SExpr::Symbol(sig.function.clone()),
                                    symbols(&sig.formals),
                                    SExpr::Symbol(sig.output.clone()),
                                ])
                            })
                            .collect::<Vec<_>>(),
                    ),
                ]),
                Event::Instance(r) => SExpr::list([
                    SExpr::sym("DEFINSTANCE"),
                    SExpr::Symbol(r.spec.clone()),
                    SExpr::Symbol(r.name.clone()),
                    SExpr::sym(":FUNCTIONAL-SUBSTITUTION"),
                    r.subst.to_sexpr(),
                ]),
            };
            let line = SExpr::list([SExpr::sym("EVENT-LANDMARK"), SExpr::sym("GLOBAL-VALUE"), SExpr::int(i as i64), body]);
            out.push_str(&line.show());
            out.push('\n');
        }
        out
    }
}

fn symbols(items: &[Symbol]) -> SExpr {
    SExpr::list(items.iter().cloned().map(SExpr::Symbol).collect::<Vec<_>>())
}

fn add_witnesses(out: &mut FnBindings, spec: &DefSpec) {
    for w in &spec.witnesses {
        out.insert(
            w.name.clone(),
            FnBinding::Lambda {
                params: w.formals.clone(),
                body: w.body.clone(),
            },
        );
    }
}

impl FnSubst {
    /// Rename-list form: `((OLD NEW) (OLD (LAMBDA ...)) (OLD))`.
    pub fn to_sexpr(&self) -> SExpr {
        SExpr::list(
            self.entries()
                .iter()
                .map(|(old, target)| {
                    let old = SExpr::Symbol(old.clone());
                    match target {
                        SubstTarget::Name(n) => SExpr::list([old, SExpr::Symbol(n.clone())]),
                        SubstTarget::Lambda { params, body } => SExpr::list([
                            old,
                            SExpr::list([SExpr::sym("LAMBDA"), symbols(params), body.to_sexpr()]),
                        ]),
                        SubstTarget::Skip => SExpr::list([old]),
                    }
                })
                .collect::<Vec<_>>(),
        )
    }
}
