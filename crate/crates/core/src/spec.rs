//! Specifications: signatures with hidden witnesses and exported
//! constraints, plus `is-a` inclusion of another specification's
//! constraints.

use crate::error::{Error, Result};
use crate::subst::{replace_term, FnSubst, SubstTarget};
use crate::surface::{self, head, items, symbol};
use crate::syntax::{parse_formals, SExpr, Symbol};
use crate::world::{AdmitConfig, DefSpec, DefThm, DefUn, Event, Signature, TheoremOrigin, World};

/// One body item of a specification, after `is-a` expansion.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecItem {
    /// `(LOCAL (DEFUN ...))`: hidden after admission.
    Witness(DefUn),
    /// `(LOCAL (DEFTHM ...))`: checked, then hidden.
    LocalTheorem(DefThm),
    /// A visible constraint.
    Export(DefThm),
}

/// Admits a specification built from its parts.
pub fn admit_defspec(
    world: &World,
    name: Symbol,
    signatures: Vec<Signature>,
    body: Vec<SpecItem>,
    config: &AdmitConfig,
) -> Result<World> {
    let mut witnesses = Vec::new();
    let mut local = Vec::new();
    let mut exported = Vec::new();
    for item in body {
        match item {
            SpecItem::Witness(d) => witnesses.push(d),
            SpecItem::LocalTheorem(t) => local.push(t),
            SpecItem::Export(t) => exported.push(t),
        }
    }
    world.admit_with(
        Event::DefSpec(DefSpec::new(name, signatures, witnesses, local, exported)),
        config,
    )
}

fn spec_of<'w>(world: &'w World, spec: &Symbol) -> Result<&'w DefSpec> {
    world.spec(spec).ok_or_else(|| {
        if world.contains(spec) {
            Error::WrongKind {
                name: spec.clone(),
                expected: "specification",
            }
        } else {
            Error::UnknownName(spec.clone())
        }
    })
}

/// Names of the exported theorems of `spec`, in declaration order.
pub fn constraint_names(world: &World, spec: &Symbol) -> Result<Vec<Symbol>> {
    Ok(spec_of(world, spec)?.exported.iter().map(|t| t.name.clone()).collect())
}

/// Exported formulas of `spec`, in declaration order.
pub fn constraints_of(world: &World, spec: &Symbol) -> Result<Vec<crate::syntax::Term>> {
    Ok(spec_of(world, spec)?.exported.iter().map(|t| t.formula.clone()).collect())
}

/// Completes `rename` over the functions of `spec`: explicit `Name`
/// entries win, others get `PREFIX-NAME`. Entries for other names are
/// ignored.
fn is_a_mapping(
    world: &World,
    spec: &DefSpec,
    prefix: &Symbol,
    rename: &FnSubst,
    scope: &[Signature],
) -> Result<FnSubst> {
    let mut out = FnSubst::new();
    for sig in &spec.signatures {
        let target = match rename.get(&sig.function) {
            Some(SubstTarget::Name(n)) => n.clone(),
            Some(_) => {
                return Err(Error::Substitution(format!(
                    "is-a accepts only plain renamings; {} has a lambda or skip entry",
                    sig.function
                )))
            }
            None => sig.function.prefixed(prefix),
        };
        let arity = scope
            .iter()
            .find(|s| s.function == target)
            .map(|s| s.formals.len())
            .or_else(|| crate::builtins::arity(&target))
            .or_else(|| world.function(&target).map(|f| f.arity()));
        match arity {
            Some(a) if a == sig.formals.len() => {}
            Some(a) => {
                return Err(Error::Arity {
                    name: target,
                    expected: sig.formals.len(),
                    given: a,
                })
            }
            None => {
                return Err(Error::Substitution(format!(
                    "{} maps to {target}, which is neither a signature function nor defined",
                    sig.function
                )))
            }
        }
        out.insert(sig.function.clone(), SubstTarget::Name(target))?;
    }
    Ok(out)
}

/// The theorems an `is-a` form stands for: each constraint of `spec`,
/// renamed, as `BASE-0`, `BASE-1`, ...
pub fn is_a_expand(
    world: &World,
    spec: &Symbol,
    prefix: &Symbol,
    base: &Symbol,
    rename: &FnSubst,
    scope: &[Signature],
) -> Result<Vec<DefThm>> {
    let included = spec_of(world, spec)?;
    let mapping = is_a_mapping(world, included, prefix, rename, scope)?;
    included
        .exported
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let name = base.indexed(i);
            if world.contains(&name) {
                return Err(Error::DuplicateName(name));
            }
            Ok(DefThm {
                name,
                formula: replace_term(&mapping, &t.formula),
                classes: t
                    .classes
                    .iter()
                    .map(|c| c.try_map_terms(&mut |x| Ok(replace_term(&mapping, x))))
                    .collect::<Result<_>>()?,
                origin: TheoremOrigin::User,
            })
        })
        .collect()
}

fn parse_signature(form: &SExpr) -> Result<Signature> {
    let parts = items(form)?;
    if parts.len() != 3 {
        return Err(Error::Malformed(format!("expected (name formals output): {form}")));
    }
    Ok(Signature {
        function: symbol(&parts[0], "function name")?,
        formals: parse_formals(&parts[1]).map_err(Error::Malformed)?,
        output: parts[2]
            .as_symbol()
            .cloned()
            .ok_or_else(|| Error::Malformed(format!("bad signature output {}", parts[2])))?,
    })
}

/// Parses `(DEFSPEC name (signatures...) items...)`, expanding `is-a`.
pub fn parse_defspec(world: &World, form: &SExpr) -> Result<(Symbol, Vec<Signature>, Vec<SpecItem>)> {
    let parts = items(form)?;
    if parts.len() < 3 {
        return Err(Error::Malformed(format!("expected (DEFSPEC name signatures ...): {form}")));
    }
    let name = symbol(&parts[1], "specification name")?;
    let signatures = items(&parts[2])?
        .iter()
        .map(parse_signature)
        .collect::<Result<Vec<_>>>()?;
    let scope: Vec<(Symbol, usize)> = signatures
        .iter()
        .map(|s| (s.function.clone(), s.formals.len()))
        .collect();
    let spec_err = |message: String| Error::Spec {
        spec: name.clone(),
        message,
    };
    let mut body = Vec::new();
    for item in &parts[3..] {
        match head(item) {
            Some("LOCAL") => {
                let inner = items(item)?;
                if inner.len() != 2 {
                    return Err(Error::Malformed(format!("expected (LOCAL event): {item}")));
                }
                match head(&inner[1]) {
                    Some("DEFUN") => body.push(SpecItem::Witness(surface::parse_defun(world, &inner[1], &scope)?)),
                    Some("DEFTHM") => {
                        body.push(SpecItem::LocalTheorem(surface::parse_defthm(world, &inner[1], &scope)?))
                    }
                    _ => return Err(spec_err(format!("unsupported local event {}", inner[1]))),
                }
            }
            Some("DEFTHM") => body.push(SpecItem::Export(surface::parse_defthm(world, item, &scope)?)),
            Some("IS-A") => {
                let args = items(item)?;
                if args.len() != 4 && args.len() != 5 {
                    return Err(Error::Malformed(format!(
                        "expected (IS-A spec prefix base [rename]): {item}"
                    )));
                }
                let rename = surface::rename_list(world, args.get(4))?;
                let rename = surface::parse_rename(world, &rename)?;
                let thms = is_a_expand(
                    world,
                    &symbol(&args[1], "specification name")?,
                    &symbol(&args[2], "prefix")?,
                    &symbol(&args[3], "theorem base name")?,
                    &rename,
                    &signatures,
                )?;
                body.extend(thms.into_iter().map(SpecItem::Export));
            }
            Some("DEFUN") => {
                return Err(spec_err(
                    "definitions inside a specification must be local witnesses".into(),
                ))
            }
            _ => return Err(spec_err(format!("unsupported specification item {item}"))),
        }
    }
    Ok((name, signatures, body))
}
