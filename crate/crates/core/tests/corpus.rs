use std::collections::{BTreeSet, HashMap, HashSet};

use specforge::analyze::{call_edges, derived_funs, derived_thms, spec_dependents};
use specforge::check::{discharge, DischargeMethod, Universe};
use specforge::instantiate::{build_substitution, definstance_obligations};
use specforge::session::eval_str;
use specforge::subst::instantiate_term;
use specforge::syntax::{read, Symbol};
use specforge::world::{Event, TheoremOrigin};
use specforge::{Session, World};

const CLOSED_MONOID: &str = include_str!("../corpus/closedMonoid.gsl");
const MEMBERS: &str = include_str!("../corpus/members.gsl");

fn loaded(src: &str) -> World {
    let mut s = Session::default();
    s.load_str(src).unwrap();
    s.world().clone()
}

fn full_world() -> World {
    let mut s = Session::default();
    s.load_str(CLOSED_MONOID).unwrap();
    s.load_str(MEMBERS).unwrap();
    s.world().clone()
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s)
}

fn callees(world: &World, f: &Symbol) -> Vec<Symbol> {
    world.defun(f).map(|d| d.body.called_fns()).unwrap_or_default()
}

/// Naive oracle: a non-root defun is derived when some call path from it
/// reaches a root.
fn reaches_root(world: &World, f: &Symbol, roots: &HashSet<Symbol>) -> bool {
    let mut seen = HashSet::new();
    let mut stack: Vec<Symbol> = callees(world, f).into_iter().filter(|g| g != f).collect();
    while let Some(g) = stack.pop() {
        if roots.contains(&g) {
            return true;
        }
        if seen.insert(g.clone()) {
            stack.extend(callees(world, &g));
        }
    }
    false
}

#[test]
fn derived_funs_match_reachability_oracle() {
    let w = full_world();
    let specs: Vec<Symbol> = w
        .events()
        .filter_map(|e| match e {
            Event::DefSpec(s) => Some(s.name.clone()),
            _ => None,
        })
        .collect();
    assert!(specs.len() >= 5);
    for spec in specs {
        let roots = w.spec(&spec).unwrap().functions();
        let root_set: HashSet<Symbol> = roots.iter().cloned().collect();
        let expected: Vec<Symbol> = w
            .defuns()
            .map(|(_, d)| d.name.clone())
            .filter(|f| !root_set.contains(f) && reaches_root(&w, f, &root_set))
            .collect();
        assert_eq!(derived_funs(&w, &roots, w.len()), expected, "spec {spec}");
    }
}

#[test]
fn derived_thms_match_scan_oracle() {
    let w = full_world();
    let fns = vec![sym("binary-function"), sym("foldr"), sym("c-domainp")];
    let expected: Vec<Symbol> = w
        .theorems()
        .filter(|(_, t)| {
            t.terms()
                .any(|term| term.called_fns().iter().any(|f| fns.contains(f)))
        })
        .map(|(_, t)| t.name.clone())
        .collect();
    assert_eq!(derived_thms(&w, &fns, w.len()), expected);
    assert!(!expected.is_empty());
}

#[test]
fn symbol_lemmas_match_scan_oracle() {
    let w = full_world();
    let mut symbols: BTreeSet<Symbol> = BTreeSet::new();
    for (_, t) in w.theorems() {
        for term in t.terms() {
            term.for_each_fn(&mut |f| {
                symbols.insert(f.clone());
            });
            term.for_each_var(&mut |v| {
                symbols.insert(v.clone());
            });
        }
    }
    symbols.insert(sym("no-such-symbol"));
    for s in &symbols {
        let expected: Vec<Symbol> = w
            .theorems()
            .filter(|(_, t)| {
                let mut hit = false;
                for term in t.terms() {
                    term.for_each_fn(&mut |f| hit |= f == s);
                    term.for_each_var(&mut |v| hit |= v == s);
                }
                hit
            })
            .map(|(_, t)| t.name.clone())
            .collect();
        assert_eq!(w.symbol_lemmas(s), expected, "symbol {s}");
    }
}

#[test]
fn dot_edges_match_body_walk() {
    let w = full_world();
    let roots = w.spec(&sym("binary")).unwrap().functions();
    let mut nodes = roots.clone();
    nodes.extend(derived_funs(&w, &roots, w.len()));
    let set: HashSet<&Symbol> = nodes.iter().collect();
    let mut expected = BTreeSet::new();
    for n in &nodes {
        if let Some(d) = w.defun(n) {
            d.body.for_each_fn(&mut |g| {
                if set.contains(g) {
                    expected.insert((n.clone(), g.clone()));
                }
            });
        }
    }
    let got: BTreeSet<_> = call_edges(&w, &nodes).into_iter().collect();
    assert_eq!(got, expected);
}

#[test]
fn copied_theorems_are_rewrites_of_their_origin() {
    let w = full_world();
    let mut copied = 0;
    for (_, t) in w.theorems() {
        if let TheoremOrigin::Copied(j) = &t.origin {
            let origin = w.theorem(&j.origin).unwrap();
            assert_eq!(instantiate_term(&w, &j.subst, &origin.formula).unwrap(), t.formula, "{}", t.name);
            assert!(w.instance(&j.obligation).is_some());
            copied += 1;
        }
    }
    assert!(copied > 10);
}

#[test]
fn each_instance_copies_functions_before_theorems() {
    let w = full_world();
    let events: Vec<&Event> = w.events().collect();
    let mut instances = 0;
    for (i, e) in events.iter().enumerate() {
        let Event::Instance(rec) = e else { continue };
        instances += 1;
        let copied: Vec<usize> = events
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e, Event::DefThm(t) if matches!(&t.origin, TheoremOrigin::Copied(j) if j.obligation == rec.name)))
            .map(|(o, _)| o)
            .collect();
        let Some(&first) = copied.first() else { continue };
        assert!(events[i + 1..first].iter().all(|e| matches!(e, Event::DefUn(_))), "{}", rec.name);
        assert_eq!(copied, (first..first + copied.len()).collect::<Vec<_>>(), "{}", rec.name);
    }
    assert_eq!(instances, 6);
}

#[test]
fn witnesses_stay_hidden() {
    let w = full_world();
    let dump = w.dump();
    for name in ["binary-function", "c-binary-function", "mon-id", "predicate"] {
        let f = sym(name);
        assert!(w.is_abstract(&f), "{name}");
        assert!(w.def_body(&f).is_err());
        assert!(eval_str(&w, &format!("({name} {})", "'a ".repeat(w.function(&f).unwrap().arity()))).is_err());
    }
    assert!(!dump.contains("(DEFUN BINARY-FUNCTION"));
    assert!(w.indices_consistent());
}

#[test]
fn batch_and_repl_build_the_same_world() {
    let batch = full_world();
    let mut s = Session::default();
    for src in [CLOSED_MONOID, MEMBERS] {
        for form in read(src).unwrap() {
            let out = s.repl_command(&form.show());
            assert!(!out.contains("Error"), "{out}");
        }
    }
    assert_eq!(s.world().dump(), batch.dump());
}

#[test]
fn monoid_integer_instance_discharges_on_a_wider_universe() {
    let cut = CLOSED_MONOID.find("(instance-of-defspec monoid int").unwrap();
    let w = loaded(&CLOSED_MONOID[..cut]);
    let rename = specforge::session::parse_rename_str(
        &w,
        "((mon-domainp integerp) (mon-binop +) (mon-id zero-fn))",
    )
    .unwrap();
    let subst = build_substitution(&w, &sym("monoid"), &sym("int"), &rename).unwrap();
    let obligations = definstance_obligations(&w, &sym("monoid"), &subst).unwrap();
    let u = Universe::integers(-2, 3, 10_000).unwrap();
    let methods = discharge(&w, &obligations, &u).unwrap();
    assert!(methods.iter().all(|m| *m == DischargeMethod::ByCheck));
}

#[test]
fn spec_dependents_of_list_predicate() {
    let w = full_world();
    let (funs, thms) = spec_dependents(&w, &sym("list-predicate")).unwrap();
    assert_eq!(funs, vec![sym("predicate-listp")]);
    assert_eq!(thms, vec![sym("predicate-listp-cdr")]);
}

#[test]
fn members_copy_agrees_with_subset_semantics() {
    let w = full_world();
    let cases: HashMap<&str, &str> = HashMap::from([
        ("(subset-equal '(a a) '(a b))", "T"),
        ("(subset-equal '(a c) '(a b))", "NIL"),
        ("(subset-equal 'nil '(a b))", "T"),
        ("(subset-equal '(a . b) '(a b))", "NIL"),
    ]);
    for (expr, want) in cases {
        assert_eq!(eval_str(&w, expr).unwrap(), want, "{expr}");
    }
}

#[test]
fn terms_round_trip_through_the_world_translator() {
    let w = full_world();
    for (_, d) in w.defuns() {
        let back = w
            .translator()
            .permissive()
            .translate(&specforge::syntax::untranslate(&d.body))
            .unwrap();
        assert_eq!(back, d.body, "{}", d.name);
    }
}
