//! `instance-of-defspec`: build the substitution, discharge the instance
//! obligations, then copy derived functions and theorems.

use std::collections::HashSet;

use crate::analyze;
use crate::builtins;
use crate::check::{self, DischargeMethod, Universe, Verdict};
use crate::error::{Error, Result};
use crate::parallel;
use crate::spec;
use crate::subst::{validate_lambda, FnSubst, Rewriter, SubstTarget};
use crate::syntax::{Symbol, Term};
use crate::world::{AdmitConfig, DefThm, Event, InstanceRecord, TheoremOrigin, World};

/// Why a copied theorem holds: it is the functional instance of `origin`
/// under `subst`, licensed by the instance record `obligation`.
#[derive(Clone, Debug, PartialEq)]
pub struct Justification {
    pub origin: Symbol,
    pub subst: FnSubst,
    pub obligation: Symbol,
}

/// Completes `rename` into a substitution over the spec functions, the
/// functions derived from them and the theorems about either.
pub fn build_substitution(world: &World, spec_name: &Symbol, prefix: &Symbol, rename: &FnSubst) -> Result<FnSubst> {
    let spec = world.spec(spec_name).ok_or_else(|| Error::WrongKind {
        name: spec_name.clone(),
        expected: "specification",
    })?;
    let roots = spec.functions();
    let upto = world.len();
    let funs = analyze::derived_funs(world, &roots, upto);
    let mut all_fns = roots.clone();
    all_fns.extend(funs.iter().cloned());
    let thms = analyze::derived_thms(world, &all_fns, upto);

    let known: HashSet<&Symbol> = all_fns.iter().chain(&thms).collect();
    if let Some((old, _)) = rename.entries().iter().find(|(old, _)| !known.contains(old)) {
        return Err(Error::Substitution(format!(
            "{old} is neither a function of {spec_name}, a function derived from it, nor a theorem about them"
        )));
    }

    let mut out = FnSubst::new();
    let mut fresh: HashSet<Symbol> = HashSet::new();
    let mut claim = |name: &Symbol| -> Result<()> {
        if builtins::is_reserved(name) {
            return Err(Error::ReservedName(name.clone()));
        }
        if world.contains(name) || !fresh.insert(name.clone()) {
            return Err(Error::DuplicateName(name.clone()));
        }
        Ok(())
    };

    for sig in &spec.signatures {
        let f = &sig.function;
        let target = match rename.get(f) {
            Some(SubstTarget::Skip) => {
                return Err(Error::Substitution(format!("function {f} cannot be skipped")))
            }
            Some(SubstTarget::Lambda { params, body }) => {
                validate_lambda(&sig.formals, params, body)?;
                SubstTarget::Lambda {
                    params: params.clone(),
                    body: body.clone(),
                }
            }
            Some(SubstTarget::Name(n)) => SubstTarget::Name(n.clone()),
            None => SubstTarget::Name(f.prefixed(prefix)),
        };
        if let SubstTarget::Name(n) = &target {
            let arity = builtins::arity(n)
                .or_else(|| world.function(n).map(|r| r.arity()))
                .ok_or_else(|| {
                    Error::Substitution(format!("{f} maps to {n}, which is not defined"))
                })?;
            if arity != sig.formals.len() {
                return Err(Error::Arity {
                    name: n.clone(),
                    expected: sig.formals.len(),
                    given: arity,
                });
            }
        }
        out.insert(f.clone(), target)?;
    }
    for f in &funs {
        let target = match rename.get(f) {
            Some(SubstTarget::Skip) => {
                return Err(Error::Substitution(format!("function {f} cannot be skipped")))
            }
            Some(t @ SubstTarget::Lambda { body, .. }) => {
                if let Term::App(n, _) = body {
                    claim(n)?;
                }
                t.clone()
            }
            Some(SubstTarget::Name(n)) => {
                claim(n)?;
                SubstTarget::Name(n.clone())
            }
            None => {
                let n = f.prefixed(prefix);
                claim(&n)?;
                SubstTarget::Name(n)
            }
        };
        out.insert(f.clone(), target)?;
    }
    for t in &thms {
        let target = match rename.get(t) {
            Some(SubstTarget::Lambda { .. }) => {
                return Err(Error::Substitution(format!("theorem {t} cannot map to a lambda")))
            }
            Some(SubstTarget::Skip) => SubstTarget::Skip,
            Some(SubstTarget::Name(n)) => {
                claim(n)?;
                SubstTarget::Name(n.clone())
            }
            None => {
                let n = t.prefixed(prefix);
                claim(&n)?;
                SubstTarget::Name(n)
            }
        };
        out.insert(t.clone(), target)?;
    }
    Ok(out)
}

/// The constraints of `spec` under `subst`: what the instance must satisfy.
pub fn definstance_obligations(world: &World, spec_name: &Symbol, subst: &FnSubst) -> Result<Vec<Term>> {
    let roots = world
        .spec(spec_name)
        .ok_or_else(|| Error::WrongKind {
            name: spec_name.clone(),
            expected: "specification",
        })?
        .functions();
    let on_spec = subst.restrict(|f| roots.contains(f));
    let rewriter = Rewriter::new(world, &on_spec, &[])?;
    spec::constraints_of(world, spec_name)?
        .iter()
        .map(|c| rewriter.term(c))
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct InstanceOptions {
    pub universe: Universe,
    /// Re-check every copied theorem whose functions are all executable.
    pub paranoid: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceReport {
    pub instance: Symbol,
    pub obligations: Vec<(Term, DischargeMethod)>,
    /// (original, copy) in world order.
    pub functions: Vec<(Symbol, Symbol)>,
    pub theorems: Vec<(Symbol, Symbol)>,
    pub skipped: Vec<Symbol>,
    /// Verdicts of the paranoid re-check, for copies that were executable.
    pub rechecked: Vec<(Symbol, Verdict)>,
}

pub fn instance_of_defspec(world: &World, spec: &Symbol, prefix: &Symbol, rename: &FnSubst) -> Result<World> {
    instance_of_defspec_with(world, spec, prefix, rename, &InstanceOptions::default()).map(|(w, _)| w)
}

pub fn instance_of_defspec_with(
    world: &World,
    spec_name: &Symbol,
    prefix: &Symbol,
    rename: &FnSubst,
    options: &InstanceOptions,
) -> Result<(World, InstanceReport)> {
    let subst = build_substitution(world, spec_name, prefix, rename)?;
    let roots = world.spec(spec_name).map(|s| s.functions()).unwrap_or_default();

    // 1. The instance obligation.
    let obligations = definstance_obligations(world, spec_name, &subst)?;
    let methods = check::discharge(world, &obligations, &options.universe)?;
    let instance = spec_name.prefixed(prefix);
    let config = AdmitConfig {
        universe: options.universe.clone(),
        assume: false,
    };
    let mut next = world.admit_with(
        Event::Instance(InstanceRecord {
            spec: spec_name.clone(),
            name: instance.clone(),
            subst: subst.restrict(|f| roots.contains(f)),
        }),
        &config,
    )?;

    // 2. Derived functions, in world order.
    let funs: Vec<Symbol> = analyze::derived_funs(world, &roots, world.len());
    let rewriter = Rewriter::new(world, &subst, &funs)?;
    let copies = parallel::map(&funs, |f| {
        let old = world.defun(f).expect("derived functions are defined");
        let name = rewriter.target_name(old)?;
        rewriter.copy_function(old, &name)
    });
    let mut functions = Vec::new();
    for (old, copy) in funs.iter().zip(copies) {
        let copy = copy?;
        functions.push((old.clone(), copy.name.clone()));
        next = next.admit_with(Event::DefUn(copy), &config)?;
    }

    // 3. Derived theorems, in world order, unless skipped.
    let mut skipped = Vec::new();
    let mut wanted = Vec::new();
    for (old, target) in subst.entries() {
        match (target, world.theorem(old)) {
            (SubstTarget::Skip, Some(_)) => skipped.push(old.clone()),
            (SubstTarget::Name(n), Some(t)) => wanted.push((t, n.clone())),
            _ => {}
        }
    }
    let copies = parallel::map(&wanted, |(t, name)| -> Result<DefThm> {
        Ok(DefThm {
            name: name.clone(),
            formula: rewriter.term(&t.formula)?,
            classes: t
                .classes
                .iter()
                .map(|c| c.try_map_terms(&mut |x| rewriter.term(x)))
                .collect::<Result<_>>()?,
            origin: TheoremOrigin::Copied(Justification {
                origin: t.name.clone(),
                subst: subst.clone(),
                obligation: instance.clone(),
            }),
        })
    });
    let mut theorems = Vec::new();
    let mut admitted = Vec::new();
    for ((old, _), copy) in wanted.iter().zip(copies) {
        let copy = copy?;
        theorems.push((old.name.clone(), copy.name.clone()));
        admitted.push(copy.formula.clone());
        next = next.admit_with(Event::DefThm(copy), &config)?;
    }

    let mut rechecked = Vec::new();
    if options.paranoid {
        let executable: Vec<(Symbol, Term)> = theorems
            .iter()
            .zip(&admitted)
            .filter(|(_, f)| next.is_executable(f))
            .map(|((_, n), f)| (n.clone(), f.clone()))
            .collect();
        for (name, formula) in executable {
            let verdict = check::check_formula(&next, &formula, &options.universe);
            if let Verdict::Fail(_) = verdict {
                return Err(Error::Paranoid { name, verdict });
            }
            rechecked.push((name, verdict));
        }
    }

    let report = InstanceReport {
        instance,
        obligations: obligations.into_iter().zip(methods).collect(),
        functions,
        theorems,
        skipped,
        rechecked,
    };
    Ok((next, report))
}
