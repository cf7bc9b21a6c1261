//! The fixed builtin function and macro sets.

use crate::syntax::Symbol;

/// Builtin functions and their arities. `IF` is the only special form.
pub const FUNCTIONS: &[(&str, usize)] = &[
    ("IF", 3),
    ("CONS", 2),
    ("CAR", 1),
    ("CDR", 1),
    ("CONSP", 1),
    ("ATOM", 1),
    ("ENDP", 1),
    ("NULL", 1),
    ("EQUAL", 2),
    ("NOT", 1),
    ("IMPLIES", 2),
    ("INTEGERP", 1),
    ("+", 2),
    ("MEMBER-EQUAL", 2),
];

/// Macros expanded away by translation.
pub const MACROS: &[&str] = &["AND", "OR", "COND", "LIST"];

pub fn arity(name: &Symbol) -> Option<usize> {
    FUNCTIONS
        .iter()
        .find(|(n, _)| *n == name.name())
        .map(|&(_, a)| a)
}

pub fn is_builtin(name: &Symbol) -> bool {
    arity(name).is_some()
}

pub fn is_macro(name: &Symbol) -> bool {
    MACROS.contains(&name.name())
}

/// Names no event may define.
pub fn is_reserved(name: &Symbol) -> bool {
    is_builtin(name)
        || is_macro(name)
        || matches!(name.name(), "QUOTE" | "LAMBDA" | "T" | "NIL")
        || name.is_keyword()
}
