//! What an instantiation has to copy: functions built (transitively) on a
//! set of roots, and the theorems mentioning any of them.

use std::collections::HashSet;
use std::fmt::Write;

use crate::syntax::Symbol;
use crate::world::{Event, World};

/// Non-root defined functions at ordinal `<= upto` that call a root or an
/// already discovered function, directly or transitively. World order.
pub fn derived_funs(world: &World, roots: &[Symbol], upto: usize) -> Vec<Symbol> {
    let mut known: HashSet<&Symbol> = roots.iter().collect();
    let mut found: Vec<(usize, Symbol)> = Vec::new();
    // Repeat until the list stops growing.
    loop {
        let before = found.len();
        for (ordinal, def) in world.defuns().take_while(|(o, _)| *o <= upto) {
            if known.contains(&def.name) {
                continue;
            }
            let mut hit = false;
            def.body.for_each_fn(&mut |f| hit |= f != &def.name && known.contains(f));
            if hit {
                known.insert(&def.name);
                found.push((ordinal, def.name.clone()));
            }
        }
        if found.len() == before {
            break;
        }
    }
    found.sort_by_key(|(o, _)| *o);
    found.into_iter().map(|(_, n)| n).collect()
}

/// Theorems at ordinal `<= upto` whose formula or rule-class terms call
/// any of `fns`. One pass, world order.
pub fn derived_thms(world: &World, fns: &[Symbol], upto: usize) -> Vec<Symbol> {
    let fns: HashSet<&Symbol> = fns.iter().collect();
    world
        .theorems()
        .take_while(|(o, _)| *o <= upto)
        .filter(|(_, t)| {
            let mut hit = false;
            for term in t.terms() {
                term.for_each_fn(&mut |f| hit |= fns.contains(f));
            }
            hit
        })
        .map(|(_, t)| t.name.clone())
        .collect()
}

/// `nodes` in world order (names without an event keep their given order
/// at the end).
fn world_order(world: &World, nodes: &[Symbol]) -> Vec<Symbol> {
    let mut keyed: Vec<(usize, usize, Symbol)> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let o = world.entry(n).map_or(usize::MAX, |e| e.ordinal);
            (o, i, n.clone())
        })
        .collect();
    keyed.sort();
    keyed.dedup_by(|a, b| a.2 == b.2);
    keyed.into_iter().map(|(_, _, n)| n).collect()
}

/// Caller-to-callee edges among `nodes`, callers in world order and
/// callees in first-call order. Self-calls are included.
pub fn call_edges(world: &World, nodes: &[Symbol]) -> Vec<(Symbol, Symbol)> {
    let set: HashSet<&Symbol> = nodes.iter().collect();
    let mut out = Vec::new();
    for caller in world_order(world, nodes) {
        if let Some(def) = world.defun(&caller) {
            for callee in def.body.called_fns() {
                if set.contains(&callee) {
                    out.push((caller.clone(), callee));
                }
            }
        }
    }
    out
}

fn quoted(s: &Symbol) -> String {
    format!("\"{}\"", s.name().replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT digraph of the call graph restricted to `roots` and their derived
/// functions.
pub fn dep_graph_dot(world: &World, roots: &[Symbol]) -> String {
    let mut nodes = roots.to_vec();
    nodes.extend(derived_funs(world, roots, world.len()));
    let nodes = world_order(world, &nodes);
    let mut out = String::from("digraph deps {\n");
    for n in &nodes {
        let shape = if world.is_abstract(n) { "box" } else { "ellipse" };
        let _ = writeln!(out, "  {} [shape={shape}];", quoted(n));
    }
    for (a, b) in call_edges(world, &nodes) {
        let _ = writeln!(out, "  {} -> {};", quoted(&a), quoted(&b));
    }
    out.push_str("}\n");
    out
}

/// The derived functions and theorems of a specification, as of now.
pub fn spec_dependents(world: &World, spec: &Symbol) -> Option<(Vec<Symbol>, Vec<Symbol>)> {
    let roots = match world.event(world.entry(spec)?.ordinal)? {
        Event::DefSpec(s) => s.functions(),
        _ => return None,
    };
    let upto = world.len();
    let funs = derived_funs(world, &roots, upto);
    let mut all = roots;
    all.extend(funs.iter().cloned());
    let thms = derived_thms(world, &all, upto);
    Some((funs, thms))
}
