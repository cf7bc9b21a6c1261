//! Symbolic data: symbols, integers and dotted pairs.

use std::fmt;
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;

/// An upper-case symbol name. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

static NIL: LazyLock<Symbol> = LazyLock::new(|| Symbol(Arc::from("NIL")));
static T: LazyLock<Symbol> = LazyLock::new(|| Symbol(Arc::from("T")));

impl Symbol {
    /// Creates a symbol, normalizing the name to upper case.
    pub fn new(name: &str) -> Self {
        match name.to_uppercase().as_str() {
            "NIL" => NIL.clone(),
            "T" => T.clone(),
            upper => Symbol(Arc::from(upper)),
        }
    }

    pub fn nil() -> Self {
        NIL.clone()
    }

    pub fn t() -> Self {
        T.clone()
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_nil(&self) -> bool {
        &*self.0 == "NIL"
    }

    pub fn is_t(&self) -> bool {
        &*self.0 == "T"
    }

    pub fn is_keyword(&self) -> bool {
        self.0.starts_with(':')
    }

    /// `PREFIX-NAME`, the default name an instantiation gives to a copy.
    pub fn prefixed(&self, prefix: &Symbol) -> Symbol {
        Symbol(Arc::from(format!("{}-{}", prefix.0, self.0)))
    }

    /// `NAME-N`, used for theorems generated by `is-a`.
    pub fn indexed(&self, n: usize) -> Symbol {
        Symbol(Arc::from(format!("{}-{}", self.0, n)))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(name: &str) -> Self {
        Symbol::new(name)
    }
}

/// A symbolic datum. `NIL` is both the empty list and false.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SExpr {
    Symbol(Symbol),
    Integer(BigInt),
    Pair(Arc<SExpr>, Arc<SExpr>),
}

impl SExpr {
    pub fn nil() -> Self {
        SExpr::Symbol(Symbol::nil())
    }

    pub fn t() -> Self {
        SExpr::Symbol(Symbol::t())
    }

    pub fn bool(b: bool) -> Self {
        if b {
            SExpr::t()
        } else {
            SExpr::nil()
        }
    }

    pub fn sym(name: &str) -> Self {
        SExpr::Symbol(Symbol::new(name))
    }

    pub fn int(value: i64) -> Self {
        SExpr::Integer(BigInt::from(value))
    }

    pub fn cons(head: SExpr, tail: SExpr) -> Self {
        SExpr::Pair(Arc::new(head), Arc::new(tail))
    }

    /// Builds a proper list.
    pub fn list<I>(items: I) -> Self
    where
        I: IntoIterator<Item = SExpr>,
        I::IntoIter: DoubleEndedIterator,
    {
        Self::list_with_tail(items, SExpr::nil())
    }

    pub fn list_with_tail<I>(items: I, tail: SExpr) -> Self
    where
        I: IntoIterator<Item = SExpr>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| SExpr::cons(item, acc))
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, SExpr::Symbol(s) if s.is_nil())
    }

    pub fn is_atom(&self) -> bool {
        !matches!(self, SExpr::Pair(..))
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self {
            SExpr::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn car(&self) -> SExpr {
        match self {
            SExpr::Pair(h, _) => (**h).clone(),
            _ => SExpr::nil(),
        }
    }

    pub fn cdr(&self) -> SExpr {
        match self {
            SExpr::Pair(_, t) => (**t).clone(),
            _ => SExpr::nil(),
        }
    }

    /// Splits a list into its elements and final tail (`NIL` for proper lists).
    pub fn elements(&self) -> (Vec<&SExpr>, &SExpr) {
        let mut items = Vec::new();
        let mut cur = self;
        while let SExpr::Pair(h, t) = cur {
            items.push(&**h);
            cur = t;
        }
        (items, cur)
    }

    /// The elements of a proper list, or `None` for atoms other than `NIL` and
    /// dotted lists.
    pub fn to_vec(&self) -> Option<Vec<SExpr>> {
        let (items, tail) = self.elements();
        tail.is_nil()
            .then(|| items.into_iter().cloned().collect())
    }

    /// Canonical printed form.
    pub fn show(&self) -> String {
        self.to_string()
    }
}

fn write_sexpr(f: &mut fmt::Formatter<'_>, v: &SExpr) -> fmt::Result {
    match v {
        SExpr::Symbol(s) => f.write_str(s.name()),
        SExpr::Integer(i) => write!(f, "{i}"),
        SExpr::Pair(head, tail) => {
            if let (SExpr::Symbol(q), SExpr::Pair(quoted, rest)) = (&**head, &**tail) {
                if q.name() == "QUOTE" && rest.is_nil() {
                    f.write_str("'")?;
                    return write_sexpr(f, quoted);
                }
            }
            f.write_str("(")?;
            write_sexpr(f, head)?;
            let mut cur = &**tail;
            loop {
                match cur {
                    SExpr::Pair(h, t) => {
                        f.write_str(" ")?;
                        write_sexpr(f, h)?;
                        cur = t;
                    }
                    atom if atom.is_nil() => break,
                    atom => {
                        f.write_str(" . ")?;
                        write_sexpr(f, atom)?;
                        break;
                    }
                }
            }
            f.write_str(")")
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sexpr(f, self)
    }
}

impl fmt::Debug for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sexpr(f, self)
    }
}

impl From<Symbol> for SExpr {
    fn from(s: Symbol) -> Self {
        SExpr::Symbol(s)
    }
}
