//! Abstract specifications with hidden witnesses over a small first-order
//! language, and their instantiation: every function and theorem built on
//! a specification is copied under a functional substitution.

pub mod analyze;
pub mod builtins;
pub mod check;
pub mod error;
pub mod eval;
pub mod instantiate;
mod parallel;
pub mod session;
pub mod spec;
pub mod subst;
pub mod surface;
pub mod syntax;
pub mod world;

pub use check::{Universe, Verdict};
pub use error::{CopyFunError, Error, ParseError, Result};
pub use session::{Session, SessionConfig};
pub use subst::{FnSubst, SubstTarget};
pub use syntax::{SExpr, Symbol, Term};
pub use world::World;
