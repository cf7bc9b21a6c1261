//! Surface event syntax: `defun`, `defthm`, `defconst`, rename lists.

use crate::error::{Error, Result};
use crate::subst::{FnSubst, SubstTarget};
use crate::syntax::{parse_formals, SExpr, Symbol, Translator};
use crate::world::{AttrValue, DefConst, DefThm, DefUn, RuleClass, RuleKind, TheoremOrigin, World};

fn malformed(what: &str, form: &SExpr) -> Error {
    Error::Malformed(format!("{what}: {form}"))
}

/// The elements of a proper list form.
pub fn items(form: &SExpr) -> Result<Vec<SExpr>> {
    form.to_vec().ok_or_else(|| malformed("not a proper list", form))
}

pub fn head(form: &SExpr) -> Option<&str> {
    match form {
        SExpr::Pair(h, _) => h.as_symbol().map(Symbol::name),
        _ => None,
    }
}

pub fn symbol(form: &SExpr, what: &str) -> Result<Symbol> {
    match form.as_symbol() {
        Some(s) if !s.is_nil() && !s.is_t() && !s.is_keyword() => Ok(s.clone()),
        _ => Err(malformed(&format!("expected a {what}"), form)),
    }
}

fn translator<'w>(world: &'w World, scope: &[(Symbol, usize)]) -> Translator<'w> {
    scope
        .iter()
        .fold(world.translator(), |t, (f, a)| t.with_function(f.clone(), *a))
}

/// `(DEFUN name formals body)`. `scope` lists functions visible in addition
/// to the world's (e.g. signatures inside a specification).
pub fn parse_defun(world: &World, form: &SExpr, scope: &[(Symbol, usize)]) -> Result<DefUn> {
    let parts = items(form)?;
    if parts.len() != 4 {
        return Err(malformed("expected (DEFUN name formals body)", form));
    }
    let name = symbol(&parts[1], "function name")?;
    let formals = parse_formals(&parts[2]).map_err(Error::Malformed)?;
    let body = translator(world, scope)
        .with_function(name.clone(), formals.len())
        .translate(&parts[3])?;
    Ok(DefUn {
        name,
        formals,
        body,
        doc: None,
    })
}

/// `(DEFTHM name formula [:RULE-CLASSES classes])`.
pub fn parse_defthm(world: &World, form: &SExpr, scope: &[(Symbol, usize)]) -> Result<DefThm> {
    let parts = items(form)?;
    if parts.len() != 3 && parts.len() != 5 {
        return Err(malformed("expected (DEFTHM name formula [:RULE-CLASSES classes])", form));
    }
    let name = symbol(&parts[1], "theorem name")?;
    let tr = translator(world, scope);
    let formula = tr.translate(&parts[2])?;
    let classes = if parts.len() == 5 {
        if parts[3].as_symbol().map(Symbol::name) != Some(":RULE-CLASSES") {
            return Err(malformed("expected :RULE-CLASSES", &parts[3]));
        }
        parse_rule_classes(&tr, &parts[4])?
    } else {
        vec![RuleClass::rewrite()]
    };
    Ok(DefThm {
        name,
        formula,
        classes,
        origin: TheoremOrigin::User,
    })
}

fn parse_rule_classes(tr: &Translator<'_>, form: &SExpr) -> Result<Vec<RuleClass>> {
    // A lone keyword or a single (:KIND ...) stands for a one-element list.
    if form.as_symbol().is_some_and(Symbol::is_keyword)
        || form.car().as_symbol().is_some_and(Symbol::is_keyword)
    {
        return Ok(vec![parse_rule_class(tr, form)?]);
    }
    items(form)?.iter().map(|c| parse_rule_class(tr, c)).collect()
}

fn parse_rule_class(tr: &Translator<'_>, form: &SExpr) -> Result<RuleClass> {
    let parts = match form {
        SExpr::Symbol(_) => vec![form.clone()],
        _ => items(form)?,
    };
    let kind = parts[0]
        .as_symbol()
        .and_then(RuleKind::from_keyword)
        .ok_or_else(|| malformed("unknown rule class", form))?;
    let rest = &parts[1..];
    if rest.len() % 2 != 0 {
        return Err(malformed("rule class attributes come in pairs", form));
    }
    let attributes = rest
        .chunks(2)
        .map(|kv| {
            let key = kv[0]
                .as_symbol()
                .filter(|s| s.is_keyword())
                .cloned()
                .ok_or_else(|| malformed("attribute names are keywords", &kv[0]))?;
            let value = if key.name() == ":TRIGGER-TERMS" {
                AttrValue::Terms(items(&kv[1])?.iter().map(|t| tr.translate(t)).collect::<Result<_>>()?)
            } else {
                AttrValue::Term(tr.translate(&kv[1])?)
            };
            Ok((key, value))
        })
        .collect::<Result<_>>()?;
    Ok(RuleClass { kind, attributes })
}

/// The datum of a quoted or self-evaluating constant form.
pub fn constant_value(form: &SExpr) -> Option<SExpr> {
    match form {
        SExpr::Integer(_) => Some(form.clone()),
        SExpr::Symbol(s) if s.is_nil() || s.is_t() || s.is_keyword() => Some(form.clone()),
        SExpr::Pair(..) if head(form) == Some("QUOTE") => {
            let parts = form.to_vec()?;
            (parts.len() == 2).then(|| parts[1].clone())
        }
        _ => None,
    }
}

/// `(DEFCONST *name* value)` with a quoted or self-evaluating value.
pub fn parse_defconst(form: &SExpr) -> Result<DefConst> {
    let parts = items(form)?;
    if parts.len() != 3 {
        return Err(malformed("expected (DEFCONST name value)", form));
    }
    let name = symbol(&parts[1], "constant name")?;
    let value = constant_value(&parts[2]).ok_or_else(|| malformed("constant values must be quoted", &parts[2]))?;
    Ok(DefConst { name, value })
}

/// Resolves a rename argument: a quoted list, a constant name, or `NIL`.
pub fn rename_list(world: &World, form: Option<&SExpr>) -> Result<SExpr> {
    let Some(form) = form else {
        return Ok(SExpr::nil());
    };
    if let Some(v) = constant_value(form) {
        return Ok(v);
    }
    match form.as_symbol() {
        Some(s) => world
            .constant(s)
            .cloned()
            .ok_or_else(|| Error::UnknownName(s.clone())),
        None => Err(malformed("a rename list must be quoted or a constant", form)),
    }
}

/// Parses rename-list items `(OLD NEW)`, `(OLD (LAMBDA params body))` and
/// `(OLD)`. Lambda bodies may call functions that do not exist yet.
pub fn parse_rename(world: &World, list: &SExpr) -> Result<FnSubst> {
    let mut subst = FnSubst::new();
    for item in items(list)? {
        let parts = items(&item)?;
        let old = parts
            .first()
            .ok_or_else(|| malformed("empty rename entry", &item))
            .and_then(|o| symbol(o, "name"))?;
        let target = match parts.len() {
            1 => SubstTarget::Skip,
            2 => match &parts[1] {
                SExpr::Symbol(_) => SubstTarget::Name(symbol(&parts[1], "name")?),
                lambda if head(lambda) == Some("LAMBDA") => {
                    let l = items(lambda)?;
                    if l.len() != 3 {
                        return Err(Error::MalformedLambda(lambda.show()));
                    }
                    let params = parse_formals(&l[1]).map_err(Error::MalformedLambda)?;
                    let body = world.translator().permissive().translate(&l[2])?;
                    SubstTarget::Lambda { params, body }
                }
                other => return Err(malformed("bad rename target", other)),
            },
            _ => return Err(malformed("bad rename entry", &item)),
        };
        subst.insert(old, target)?;
    }
    Ok(subst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::read_one;

    #[test]
    fn rule_classes() {
        let w = World::empty();
        let form = read_one(
            "(defthm t1 (equal (car (cons x y)) x)
               :rule-classes ((:rewrite) (:forward-chaining :trigger-terms ((cons x y)))))",
        )
        .unwrap();
        let t = parse_defthm(&w, &form, &[]).unwrap();
        assert_eq!(t.classes.len(), 2);
        assert_eq!(
            t.classes[1].to_sexpr().show(),
            "(:FORWARD-CHAINING :TRIGGER-TERMS ((CONS X Y)))"
        );
        let bare = read_one("(defthm t2 (equal x x) :rule-classes :type-prescription)").unwrap();
        assert_eq!(parse_defthm(&w, &bare, &[]).unwrap().classes[0].kind, RuleKind::TypePrescription);
        let none = read_one("(defthm t3 (equal x x) :rule-classes nil)").unwrap();
        assert!(parse_defthm(&w, &none, &[]).unwrap().classes.is_empty());
    }

    #[test]
    fn rename_entries() {
        let w = World::empty();
        let list = read_one("((a b) (c (lambda (x) (member-equal x y))) (d))").unwrap();
        let s = parse_rename(&w, &list).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.get(&Symbol::new("d")), Some(&SubstTarget::Skip));
        assert_eq!(s.to_sexpr().show(), "((A B) (C (LAMBDA (X) (MEMBER-EQUAL X Y))) (D))");
    }

    #[test]
    fn defconst_needs_quote() {
        assert!(parse_defconst(&read_one("(defconst *x* '(a))").unwrap()).is_ok());
        assert!(parse_defconst(&read_one("(defconst *x* (a))").unwrap()).is_err());
    }
}
