//! A small width-bounded pretty printer for display forms.

use super::sexpr::SExpr;

pub const DEFAULT_WIDTH: usize = 56;

/// Prints `value` flat when it fits, otherwise breaking a call so that
/// the arguments line up under the first one.
pub fn pretty(value: &SExpr, width: usize) -> String {
    let mut out = String::new();
    layout(value, 0, width, &mut out);
    out
}

fn layout(value: &SExpr, indent: usize, width: usize, out: &mut String) {
    let flat = value.show();
    let (items, tail) = value.elements();
    let is_quote = value.car() == SExpr::sym("QUOTE");
    if indent + flat.len() <= width || items.len() < 2 || !tail.is_nil() || is_quote {
        out.push_str(&flat);
        return;
    }
    out.push('(');
    let (col, rest) = if items[0].is_atom() {
        let head = items[0].show();
        out.push_str(&head);
        out.push(' ');
        (indent + head.len() + 2, &items[1..])
    } else {
        (indent + 1, &items[..])
    };
    for (i, item) in rest.iter().enumerate() {
        if i > 0 {
            out.push('\n');
            out.push_str(&" ".repeat(col));
        }
        layout(item, col, width, out);
    }
    out.push(')');
}
