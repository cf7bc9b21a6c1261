//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the verdict lines are always visible.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specforge::check::DEFAULT_FUEL;
use specforge::eval::{eval, eval_with_bindings, Env, FnBinding, FnBindings};
use specforge::session::eval_str;
use specforge::syntax::{SExpr, Symbol, Term};
use specforge::{Session, SessionConfig, World};

const CLOSED_MONOID: &str = include_str!("../corpus/closedMonoid.gsl");
const MEMBERS: &str = include_str!("../corpus/members.gsl");
const COPYFUN_ERROR: &str = include_str!("../corpus/copyfun_error.gsl");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn corpus_session() -> Session {
    let mut s = Session::default();
    s.load_str(CLOSED_MONOID).expect("corpus loads");
    s
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn corpus_replay() -> Outcome {
    let start = Instant::now();
    let mut s = Session::default();
    let lines = s.load_str(CLOSED_MONOID).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    for name in ["cons-foldr", "closed-binop", "semigroup", "monoid", "int-monoid", "mon-semigroup"] {
        ensure(s.world().contains(&Symbol::new(name)), format!("{name} missing"))?;
    }
    Ok(format!("{} report lines in {elapsed:.2?}", lines.len()))
}

fn transcript_exactness() -> Outcome {
    let s = corpus_session();
    let cases = [
        ("(cons-foldr 'a '(b c))", "(B C . A)"),
        ("(cons-foldr1 '(a b c))", "(A B . C)"),
        ("(cons-foldl 'a '(b c))", "((A . B) . C)"),
    ];
    for (expr, want) in cases {
        let got = eval_str(s.world(), expr).map_err(|e| e.to_string())?;
        ensure(got == want, format!("{expr} printed {got}, expected {want}"))?;
    }
    Ok("3 transcripts byte-identical".into())
}

fn pf_output() -> Outcome {
    let mut s = corpus_session();
    let want = "(EQUAL (C-FOLDR X XS)
       (IF (CONSP XS)
           (C-BINARY-FUNCTION (CAR XS)
                              (C-FOLDR X (CDR XS)))
           X))";
    let got = s.repl_command(":pf c-foldr");
    ensure(squash(&got) == squash(want), format!("got {got}"))?;
    let want = "(IMPLIES (AND (SG-LIST-DOMAINP XS) (CONSP XS))
         (SG-C-DOMAINP (SG-C-FOLDR1 XS)))";
    let got = s.repl_command(":pf (:rewrite sg-foldr1-closed)");
    ensure(squash(&got) == squash(want), format!("got {got}"))?;
    Ok("C-FOLDR and SG-FOLDR1-CLOSED match".into())
}

fn is_a_expansion() -> Outcome {
    let s = corpus_session();
    let name = Symbol::new("semigroup-is-a-closed-binop-0");
    let spec = s.world().spec(&Symbol::new("semigroup")).ok_or("no SEMIGROUP")?;
    let thm = spec.exported.iter().find(|t| t.name == name).ok_or("no is-a theorem")?;
    let want = "(IMPLIES (IF (SG-C-DOMAINP X)
                      (SG-C-DOMAINP Y)
                      'NIL)
                  (SG-C-DOMAINP (SG-C-BINARY-FUNCTION X Y)))";
    let got = thm.formula.to_sexpr().show();
    ensure(squash(&got) == squash(want), format!("got {got}"))?;
    Ok(got)
}

fn replacefns_golden() -> Outcome {
    let mut s = Session::default();
    let got = s.repl_command(":replacefns ((foo bar) (bar foo)) ((+ ((lambda (foo j) (foo foo j)) x y) (bar x y)))");
    let want = "((+ ((LAMBDA (FOO J) (BAR FOO J)) X Y) (FOO X Y)))";
    ensure(got == want, format!("got {got}"))?;
    Ok(got)
}

fn copyfun_validation() -> Outcome {
    let mut s = Session::default();
    let err = s.load_str(COPYFUN_ERROR).err().ok_or("load succeeded")?.to_string();
    ensure(err.contains("COPYFUN") && err.contains("(XS)") && err.contains("(LST)"), format!("got {err}"))?;
    ensure(!s.world().contains(&Symbol::new("members-list-predicate")), "instance record leaked")?;
    Ok(err)
}

/// All lists of length at most `max_len` over `atoms`.
fn lists(atoms: &[&str], max_len: usize) -> Vec<SExpr> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|l: &Vec<SExpr>| {
                atoms.iter().map(move |a| {
                    let mut l = l.clone();
                    l.push(SExpr::sym(a));
                    l
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out.into_iter().map(SExpr::list).collect()
}

fn subset_oracle(xs: &SExpr, ys: &SExpr) -> bool {
    let ys: Vec<SExpr> = ys.to_vec().unwrap();
    xs.to_vec().unwrap().iter().all(|x| ys.contains(x))
}

fn members_world() -> World {
    let mut s = Session::default();
    s.load_str(MEMBERS).expect("members corpus loads");
    s.world().clone()
}

fn subset_equal_agrees(world: &World, universe: &[SExpr]) -> Result<usize, String> {
    let term = Term::app("SUBSET-EQUAL", vec![Term::var("XS"), Term::var("YS")]);
    let mut pairs = 0;
    for xs in universe {
        for ys in universe {
            let env: Env = [(Symbol::new("XS"), xs.clone()), (Symbol::new("YS"), ys.clone())].into();
            let got = eval(world, &term, &env, DEFAULT_FUEL).map_err(|e| e.to_string())?;
            ensure(!got.is_nil() == subset_oracle(xs, ys), format!("{xs} {ys} gave {got}"))?;
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn adding_arguments() -> Outcome {
    let w = members_world();
    let start = Instant::now();
    let small = lists(&["A", "B", "C"], 3);
    ensure(small.len() == 40, format!("{} lists", small.len()))?;
    let mut pairs = subset_equal_agrees(&w, &small)?;
    // A 216-list family as well: all length-3 lists over six atoms.
    let wide: Vec<SExpr> = lists(&["A", "B", "C", "D", "E", "F"], 3)
        .into_iter()
        .filter(|l| l.to_vec().unwrap().len() == 3)
        .collect();
    ensure(wide.len() == 216, format!("{} lists", wide.len()))?;
    pairs += subset_equal_agrees(&w, &wide)?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!("{pairs} pairs agree in {elapsed:.2?}"))
}

fn random_value(rng: &mut ChaCha8Rng, depth: u32) -> SExpr {
    const ATOMS: [&str; 5] = ["A", "B", "C", "NIL", "T"];
    match rng.gen_range(0..if depth == 0 { 2 } else { 4 }) {
        0 => SExpr::sym(ATOMS[rng.gen_range(0..ATOMS.len())]),
        1 => SExpr::int(rng.gen_range(-3..4)),
        2 => SExpr::cons(random_value(rng, depth - 1), random_value(rng, depth - 1)),
        _ => random_list(rng, depth - 1),
    }
}

fn random_list(rng: &mut ChaCha8Rng, depth: u32) -> SExpr {
    let n = rng.gen_range(0..6);
    let items: Vec<SExpr> = (0..n).map(|_| random_value(rng, depth)).collect();
    if rng.gen_bool(0.15) {
        SExpr::list_with_tail(items, random_value(rng, 0))
    } else {
        SExpr::list(items)
    }
}

fn call(f: &str, args: &[&str]) -> Term {
    Term::app(f, args.iter().map(|a| Term::var(a)).collect())
}

fn commutation() -> Outcome {
    let cons_world = corpus_session().world().clone();
    let members = members_world();
    let cons_bind: FnBindings = [(Symbol::new("BINARY-FUNCTION"), FnBinding::Name(Symbol::new("CONS")))].into();
    let member_bind: FnBindings = [(
        Symbol::new("PREDICATE"),
        FnBinding::Lambda {
            params: vec![Symbol::new("X")],
            body: call("MEMBER-EQUAL", &["X", "Y"]),
        },
    )]
    .into();
    let cases: [(&World, Term, Term, &FnBindings); 4] = [
        (&cons_world, call("CONS-FOLDR", &["X", "XS"]), call("FOLDR", &["X", "XS"]), &cons_bind),
        (&cons_world, call("CONS-FOLDR1", &["XS"]), call("FOLDR1", &["XS"]), &cons_bind),
        (&cons_world, call("CONS-FOLDL", &["X", "XS"]), call("FOLDL", &["X", "XS"]), &cons_bind),
        (&members, call("SUBSET-EQUAL", &["XS", "Y"]), call("PREDICATE-LISTP", &["XS"]), &member_bind),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut compared = 0;
    for _ in 0..1000 {
        let env: Env = [
            (Symbol::new("X"), random_value(&mut rng, 2)),
            (Symbol::new("XS"), random_list(&mut rng, 2)),
            (Symbol::new("Y"), random_list(&mut rng, 1)),
        ]
        .into();
        for (world, copy, original, bindings) in &cases {
            let a = eval(world, copy, &env, DEFAULT_FUEL);
            let b = eval_with_bindings(world, original, &env, bindings, DEFAULT_FUEL);
            ensure(a == b, format!("{copy} vs {original} at {env:?}: {a:?} / {b:?}"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} evaluations, zero discrepancies"))
}

fn paranoid_mode() -> Outcome {
    let mut s = Session::new(SessionConfig {
        paranoid: true,
        ..SessionConfig::default()
    });
    let mut lines = s.load_str(CLOSED_MONOID).map_err(|e| e.to_string())?;
    lines.extend(s.load_str(MEMBERS).map_err(|e| e.to_string())?);
    let rechecks: Vec<&String> = lines.iter().filter(|l| l.trim_start().starts_with("recheck")).collect();
    let passed = rechecks.iter().filter(|l| l.ends_with(" pass")).count();
    let failed = rechecks.iter().filter(|l| l.contains("counterexample") || l.ends_with(" false")).count();
    ensure(!rechecks.is_empty(), "nothing was re-checked")?;
    ensure(failed == 0, format!("{failed} failures"))?;
    Ok(format!("{} re-checked, {passed} pass, 0 fail", rechecks.len()))
}

fn copied_theorems(world: &World, prefix: &str) -> HashSet<String> {
    world
        .theorems()
        .map(|(_, t)| t.name.name().to_string())
        .filter(|n| n.starts_with(prefix))
        .collect()
}

fn skip_feature() -> Outcome {
    let full = corpus_session();
    let skipped_src = CLOSED_MONOID.replace("(mon-id zero-fn)))", "(mon-id zero-fn) (monoid-id-left)))");
    ensure(skipped_src != CLOSED_MONOID, "rename list not found in corpus")?;
    let mut s = Session::default();
    let lines = s.load_str(&skipped_src).map_err(|e| e.to_string())?;
    ensure(lines.iter().any(|l| l.trim() == "skipped MONOID-ID-LEFT"), "no skip reported")?;
    let with = copied_theorems(full.world(), "INT-");
    let without = copied_theorems(s.world(), "INT-");
    let mut expected = with.clone();
    ensure(expected.remove("INT-MONOID-ID-LEFT"), "INT-MONOID-ID-LEFT was never copied")?;
    ensure(without == expected, format!("{without:?} vs {expected:?}"))?;
    Ok(format!("{} of {} copies present", without.len(), with.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("corpus replay", corpus_replay),
        ("transcript exactness", transcript_exactness),
        (":pf output", pf_output),
        ("is-a expansion", is_a_expansion),
        ("replacefns golden", replacefns_golden),
        ("COPYFUN validation", copyfun_validation),
        ("adding-arguments semantics", adding_arguments),
        ("instantiation/evaluation commutation", commutation),
        ("paranoid mode", paranoid_mode),
        ("skip feature", skip_feature),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {}", i + 1, squash(&detail)),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {}", i + 1, squash(&why));
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
