//! Reading, printing and translating the surface language.

mod pretty;
mod reader;
mod sexpr;
mod term;
mod translate;

pub use pretty::{pretty, DEFAULT_WIDTH};
pub use reader::{read, read_one, read_with_positions, Position};
pub use sexpr::{SExpr, Symbol};
pub use term::Term;
pub use translate::{mentions_macro, normalize_tests, parse_formals, untranslate, Arities, Translator};

/// Canonical printed form of a datum.
pub fn show(value: &SExpr) -> String {
    value.show()
}
