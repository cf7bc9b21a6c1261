//! Bounded-exhaustive checking of universally quantified formulas, and
//! discharge of instance obligations.
//!
//! A formula passes when it evaluates to a non-`NIL` value under every
//! assignment of universe values to its free variables. That is evidence,
//! not proof.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::eval::{self, Env, EvalError, FnBindings};
use crate::parallel;
use crate::syntax::{untranslate, SExpr, Symbol, Term};
use crate::world::World;

/// Variable assignment, ordered by variable name.
pub type Binding = Vec<(Symbol, SExpr)>;

pub fn show_binding(b: &Binding) -> String {
    b.iter()
        .map(|(k, v)| format!("{k} = {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub const DEFAULT_FUEL: u64 = 10_000;

/// The finite test domain and per-evaluation fuel.
#[derive(Clone, Debug, PartialEq)]
pub struct Universe {
    values: Vec<SExpr>,
    fuel: u64,
}

impl Universe {
    pub fn new(values: Vec<SExpr>, fuel: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Universe("the universe must not be empty".into()));
        }
        if fuel == 0 {
            return Err(Error::Universe("fuel must be positive".into()));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = values.iter().find(|v| !seen.insert(*v)) {
            return Err(Error::Universe(format!("duplicate value {dup}")));
        }
        Ok(Universe { values, fuel })
    }

    /// Integers `lo..=hi`.
    pub fn integers(lo: i64, hi: i64, fuel: u64) -> Result<Self> {
        Universe::new((lo..=hi).map(SExpr::int).collect(), fuel)
    }

    pub fn values(&self) -> &[SExpr] {
        &self.values
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    pub fn with_fuel(mut self, fuel: u64) -> Result<Self> {
        if fuel == 0 {
            return Err(Error::Universe("fuel must be positive".into()));
        }
        self.fuel = fuel;
        Ok(self)
    }
}

impl Default for Universe {
    /// `NIL T A B 0 1 2 -1 (A) (A B) (0 1) (A . B)` with fuel 10000.
    fn default() -> Self {
        let values = crate::syntax::read("nil t a b 0 1 2 -1 (a) (a b) (0 1) (a . b)")
            .expect("default universe parses");
        Universe::new(values, DEFAULT_FUEL).expect("default universe is valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    FuelExhausted,
    AbstractFunction(Symbol),
    Evaluation(String),
    TooManyAssignments,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::FuelExhausted => f.write_str("fuel exhausted"),
            UnknownReason::AbstractFunction(s) => write!(f, "abstract function {s}"),
            UnknownReason::Evaluation(m) => f.write_str(m),
            UnknownReason::TooManyAssignments => f.write_str("too many assignments to enumerate"),
        }
    }
}

impl From<EvalError> for UnknownReason {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::FuelExhausted => UnknownReason::FuelExhausted,
            EvalError::AbstractFunction(s) => UnknownReason::AbstractFunction(s),
            other => UnknownReason::Evaluation(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Binding),
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail(b) if b.is_empty() => f.write_str("false"),
            Verdict::Fail(b) => write!(f, "counterexample {}", show_binding(b)),
            Verdict::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

struct Enumeration<'a> {
    vars: Vec<Symbol>,
    universe: &'a Universe,
    total: usize,
}

impl<'a> Enumeration<'a> {
    fn new(formula: &Term, universe: &'a Universe) -> Option<Self> {
        let mut vars = formula.free_vars();
        vars.sort();
        let n = universe.values.len();
        let total = n.checked_pow(u32::try_from(vars.len()).ok()?)?;
        Some(Enumeration {
            vars,
            universe,
            total,
        })
    }

    /// Assignment number `i`; the first variable varies slowest.
    fn assignment(&self, mut i: usize) -> Binding {
        let n = self.universe.values.len();
        let mut out = vec![(Symbol::nil(), SExpr::nil()); self.vars.len()];
        for (slot, var) in out.iter_mut().zip(&self.vars).rev() {
            *slot = (var.clone(), self.universe.values[i % n].clone());
            i /= n;
        }
        out
    }

    fn outcome(&self, world: &World, formula: &Term, bindings: &FnBindings, i: usize) -> Option<Verdict> {
        let binding = self.assignment(i);
        let env: Env = binding.iter().cloned().collect();
        match eval::eval_with_bindings(world, formula, &env, bindings, self.universe.fuel) {
            Ok(v) if v.is_nil() => Some(Verdict::Fail(binding)),
            Ok(_) => None,
            Err(e) => Some(Verdict::Unknown(e.into())),
        }
    }
}

/// Checks `formula` over every assignment from `universe`.
pub fn check_formula(world: &World, formula: &Term, universe: &Universe) -> Verdict {
    check_formula_with(world, formula, universe, &FnBindings::new())
}

/// As [`check_formula`], with calls redirected through `bindings`. The
/// verdict is that of the enumeration-order-first non-passing assignment.
pub fn check_formula_with(
    world: &World,
    formula: &Term,
    universe: &Universe,
    bindings: &FnBindings,
) -> Verdict {
    let Some(en) = Enumeration::new(formula, universe) else {
        return Verdict::Unknown(UnknownReason::TooManyAssignments);
    };
    parallel::find_map_first(en.total, |i| en.outcome(world, formula, bindings, i))
        .unwrap_or(Verdict::Pass)
}

/// Single-threaded reference enumeration.
pub fn check_formula_sequential(
    world: &World,
    formula: &Term,
    universe: &Universe,
    bindings: &FnBindings,
) -> Verdict {
    let Some(en) = Enumeration::new(formula, universe) else {
        return Verdict::Unknown(UnknownReason::TooManyAssignments);
    };
    (0..en.total)
        .find_map(|i| en.outcome(world, formula, bindings, i))
        .unwrap_or(Verdict::Pass)
}

/// Equality up to a consistent one-to-one renaming of free variables.
pub fn alpha_equivalent(a: &Term, b: &Term) -> bool {
    fn go(
        a: &Term,
        b: &Term,
        fwd: &mut HashMap<Symbol, Symbol>,
        back: &mut HashMap<Symbol, Symbol>,
    ) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let f = fwd.entry(x.clone()).or_insert_with(|| y.clone()).clone();
                let g = back.entry(y.clone()).or_insert_with(|| x.clone()).clone();
                &f == y && &g == x
            }
            (Term::Quote(x), Term::Quote(y)) => x == y,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| go(x, y, fwd, back))
            }
            (
                Term::LambdaApp { params: p, body: bx, args: xs },
                Term::LambdaApp { params: q, body: by, args: ys },
            ) => {
                // Closed bodies: compare under the positional param pairing.
                let mut inner_fwd: HashMap<_, _> = p.iter().cloned().zip(q.iter().cloned()).collect();
                let mut inner_back: HashMap<_, _> = q.iter().cloned().zip(p.iter().cloned()).collect();
                p.len() == q.len()
                    && xs.len() == ys.len()
                    && go(bx, by, &mut inner_fwd, &mut inner_back)
                    && xs.iter().zip(ys).all(|(x, y)| go(x, y, fwd, back))
            }
            _ => false,
        }
    }
    go(a, b, &mut HashMap::new(), &mut HashMap::new())
}

/// How an obligation was discharged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DischargeMethod {
    /// Matched an admitted theorem up to variable renaming.
    ByTheorem(Symbol),
    /// All functions executable and the bounded check passed.
    ByCheck,
}

impl fmt::Display for DischargeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DischargeMethod::ByTheorem(t) => write!(f, "BY-THEOREM {t}"),
            DischargeMethod::ByCheck => f.write_str("BY-CHECK"),
        }
    }
}

/// Discharges each obligation by the first applicable method.
pub fn discharge(world: &World, obligations: &[Term], universe: &Universe) -> Result<Vec<DischargeMethod>> {
    obligations
        .iter()
        .map(|ob| {
            if let Some((_, t)) = world.theorems().find(|(_, t)| alpha_equivalent(&t.formula, ob)) {
                return Ok(DischargeMethod::ByTheorem(t.name.clone()));
            }
            let shown = untranslate(ob).show();
            if !world.is_executable(ob) {
                return Err(Error::Obligation {
                    obligation: shown,
                    attempted: "BY-THEOREM (no matching theorem); BY-CHECK impossible: \
                                the obligation mentions abstract functions"
                        .into(),
                    counterexample: None,
                });
            }
            match check_formula(world, ob, universe) {
                Verdict::Pass => Ok(DischargeMethod::ByCheck),
                Verdict::Fail(b) => Err(Error::Obligation {
                    obligation: shown,
                    attempted: "BY-THEOREM (no matching theorem), BY-CHECK (failed)".into(),
                    counterexample: Some(b),
                }),
                Verdict::Unknown(r) => Err(Error::Obligation {
                    obligation: shown,
                    attempted: format!("BY-THEOREM (no matching theorem), BY-CHECK ({r})"),
                    counterexample: None,
                }),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::read_one;

    fn term(world: &World, text: &str) -> Term {
        world.translator().permissive().translate(&read_one(text).unwrap()).unwrap()
    }

    #[test]
    fn reflexivity_passes() {
        let w = World::empty();
        assert_eq!(check_formula(&w, &term(&w, "(equal x x)"), &Universe::default()), Verdict::Pass);
    }

    #[test]
    fn commutativity_of_cons_fails_at_first_distinct_pair() {
        let w = World::empty();
        let u = Universe::default();
        let v = check_formula(&w, &term(&w, "(equal (cons x y) (cons y x))"), &u);
        let expected = vec![
            (Symbol::new("x"), u.values()[0].clone()),
            (Symbol::new("y"), u.values()[1].clone()),
        ];
        assert_eq!(v, Verdict::Fail(expected));
    }

    #[test]
    fn closure_of_plus_over_integers() {
        let w = World::empty();
        let f = term(&w, "(implies (and (integerp x) (integerp y)) (integerp (+ x y)))");
        assert_eq!(check_formula(&w, &f, &Universe::default()), Verdict::Pass);
    }

    #[test]
    fn evaluation_errors_are_unknown() {
        let w = World::empty();
        let v = check_formula(&w, &term(&w, "(foo x)"), &Universe::default());
        assert!(matches!(v, Verdict::Unknown(UnknownReason::Evaluation(_))));
    }

    #[test]
    fn closed_formula_has_one_assignment() {
        let w = World::empty();
        assert_eq!(check_formula(&w, &term(&w, "(equal 1 2)"), &Universe::default()), Verdict::Fail(vec![]));
    }

    #[test]
    fn universe_validation() {
        assert!(Universe::new(vec![], 1).is_err());
        assert!(Universe::new(vec![SExpr::nil(), SExpr::nil()], 1).is_err());
        assert!(Universe::new(vec![SExpr::nil()], 0).is_err());
        assert_eq!(Universe::default().values().len(), 12);
    }

    #[test]
    fn too_many_variables() {
        let w = World::empty();
        let vars: Vec<String> = (0..40).map(|i| format!("v{i}")).collect();
        let f = term(&w, &format!("(equal (list {}) nil)", vars.join(" ")));
        assert_eq!(
            check_formula(&w, &f, &Universe::default()),
            Verdict::Unknown(UnknownReason::TooManyAssignments)
        );
    }

    #[test]
    fn alpha_equivalence() {
        let w = World::empty();
        let a = term(&w, "(implies (f x) (g x y))");
        let b = term(&w, "(implies (f u) (g u v))");
        let c = term(&w, "(implies (f u) (g u u))");
        assert!(alpha_equivalent(&a, &b));
        assert!(alpha_equivalent(&b, &a));
        assert!(!alpha_equivalent(&a, &c));
        assert!(!alpha_equivalent(&c, &a));
    }

    #[test]
    fn empty_obligation_list() {
        assert_eq!(discharge(&World::empty(), &[], &Universe::default()).unwrap(), vec![]);
    }
}
