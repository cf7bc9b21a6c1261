//! A session threads one world through a sequence of surface forms, from
//! a file or typed at the REPL.

use std::fmt;
use std::path::Path;

use crate::analyze;
use crate::check::{self, Universe};
use crate::error::{Error, Result};
use crate::eval::{self, Env};
use crate::instantiate::{self, InstanceOptions, InstanceReport};
use crate::spec;
use crate::subst::{self, FnSubst};
use crate::surface::{self, head, items, symbol};
use crate::syntax::{self, normalize_tests, pretty, read, read_one, untranslate, Position, SExpr, Symbol, DEFAULT_WIDTH};
use crate::world::{AdmitConfig, Event, World};

pub const PROMPT: &str = "specforge !>";

/// The bundled base book: the `binary` specification and the folds.
pub const PRELUDE: &str = include_str!("../corpus/prelude.gsl");

#[derive(Clone, Debug, Default)]
pub struct SessionConfig {
    pub universe: Universe,
    /// Admit theorems without checking them.
    pub assume: bool,
    /// Re-check copied theorems where executable.
    pub paranoid: bool,
}

/// A load failure, with the position of the failing form when known.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadError {
    pub position: Option<Position>,
    pub error: Error,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some(p) if !self.error.is_parse() => write!(f, "{}:{}: {}", p.line, p.column, self.error),
            _ => write!(f, "{}", self.error),
        }
    }
}

impl std::error::Error for LoadError {}

/// The world with the prelude admitted.
pub fn base_world() -> World {
    let mut s = Session {
        world: World::empty(),
        config: SessionConfig::default(),
    };
    s.load_str(PRELUDE).expect("the prelude loads");
    s.world
}

#[derive(Clone, Debug)]
pub struct Session {
    world: World,
    config: SessionConfig,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(SessionConfig::default())
    }
}

impl Session {
    pub fn new(config: SessionConfig) -> Self {
        Session {
            world: base_world(),
            config,
        }
    }

    pub fn with_world(world: World, config: SessionConfig) -> Self {
        Session { world, config }
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    fn admit_config(&self) -> AdmitConfig {
        AdmitConfig {
            universe: self.config.universe.clone(),
            assume: self.config.assume,
        }
    }

    fn admit(&mut self, event: Event) -> Result<()> {
        self.world = self.world.admit_with(event, &self.admit_config())?;
        Ok(())
    }

    pub fn load(&mut self, path: &Path) -> std::result::Result<Vec<String>, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|e| LoadError {
            position: None,
            error: Error::Io(format!("{}: {e}", path.display())),
        })?;
        self.load_str(&text)
    }

    /// Processes every form in order. The first failure aborts; forms
    /// before it stay admitted.
    pub fn load_str(&mut self, text: &str) -> std::result::Result<Vec<String>, LoadError> {
        let forms = syntax::read_with_positions(text).map_err(|e| LoadError {
            position: Some(Position {
                line: e.line,
                column: e.column,
            }),
            error: Error::Parse(e),
        })?;
        let mut report = Vec::new();
        for (form, position) in forms {
            let lines = self.process(&form).map_err(|error| LoadError {
                position: Some(position),
                error,
            })?;
            report.extend(lines);
        }
        Ok(report)
    }

    /// Processes one event, directive, or expression, returning report
    /// lines.
    pub fn process(&mut self, form: &SExpr) -> Result<Vec<String>> {
        match head(form) {
            Some("DEFUN") => {
                let d = surface::parse_defun(&self.world, form, &[])?;
                let line = format!("DEFUN {}", d.name);
                self.admit(Event::DefUn(d))?;
                Ok(vec![line])
            }
            Some("DEFTHM") => {
                let t = surface::parse_defthm(&self.world, form, &[])?;
                let line = format!("DEFTHM {}", t.name);
                self.admit(Event::DefThm(t))?;
                Ok(vec![line])
            }
            Some("DEFCONST") => {
                let c = surface::parse_defconst(form)?;
                let line = format!("DEFCONST {}", c.name);
                self.admit(Event::DefConst(c))?;
                Ok(vec![line])
            }
            Some("DEFSPEC") => {
                let (name, signatures, body) = spec::parse_defspec(&self.world, form)?;
                let world = spec::admit_defspec(&self.world, name.clone(), signatures, body, &self.admit_config())?;
                self.world = world;
                let n = spec::constraint_names(&self.world, &name)?.len();
                Ok(vec![format!("DEFSPEC {name} ({n} constraint(s))")])
            }
            Some("INSTANCE-OF-DEFSPEC") => {
                let parts = items(form)?;
                if parts.len() != 3 && parts.len() != 4 {
                    return Err(Error::Malformed(format!(
                        "expected (INSTANCE-OF-DEFSPEC spec prefix [rename]): {form}"
                    )));
                }
                let spec = symbol(&parts[1], "specification name")?;
                let prefix = symbol(&parts[2], "prefix")?;
                let list = surface::rename_list(&self.world, parts.get(3))?;
                let rename = surface::parse_rename(&self.world, &list)?;
                let options = InstanceOptions {
                    universe: self.config.universe.clone(),
                    paranoid: self.config.paranoid,
                };
                let (world, report) =
                    instantiate::instance_of_defspec_with(&self.world, &spec, &prefix, &rename, &options)?;
                self.world = world;
                Ok(instance_lines(&report))
            }
            Some("SET-UNIVERSE") => {
                let parts = items(form)?;
                let values = match parts.as_slice() {
                    [_, v] => items(v)?,
                    _ => return Err(Error::Malformed(format!("expected (SET-UNIVERSE (values...)): {form}"))),
                };
                self.config.universe = Universe::new(values, self.config.universe.fuel())?;
                Ok(vec![format!("UNIVERSE {} value(s)", self.config.universe.values().len())])
            }
            Some("IS-A") => Err(Error::Malformed("is-a may only appear inside a defspec".into())),
            Some("LOCAL") => Err(Error::Malformed("local may only appear inside a defspec".into())),
            _ => Ok(vec![self.evaluate(form)?.show()]),
        }
    }

    pub fn evaluate(&self, form: &SExpr) -> Result<SExpr> {
        let term = self.world.translate(form)?;
        Ok(eval::eval(&self.world, &term, &Env::new(), self.config.universe.fuel())?)
    }

    /// One REPL input: a colon command, or events and expressions. Errors
    /// are reported in the output; the session carries on.
    pub fn repl_command(&mut self, input: &str) -> String {
        let trimmed = input.trim();
        if trimmed.starts_with(':') {
            return self.colon_command(trimmed).unwrap_or_else(|e| format!("Error: {e}"));
        }
        let forms = match read(trimmed) {
            Ok(f) => f,
            Err(e) => return format!("Error: {e}"),
        };
        let mut out = Vec::new();
        for form in forms {
            match self.process(&form) {
                Ok(lines) => out.extend(lines),
                Err(e) => {
                    out.push(format!("Error: {e}"));
                    break;
                }
            }
        }
        out.join("\n")
    }

    fn colon_command(&mut self, input: &str) -> Result<String> {
        let (cmd, rest) = input.split_once(char::is_whitespace).unwrap_or((input, ""));
        let rest = rest.trim();
        match cmd.to_ascii_lowercase().as_str() {
            ":pf" => self.pf(&read_one(rest)?),
            ":trans" => Ok(self.world.translate(&read_one(rest)?)?.to_sexpr().show()),
            ":replacefns" => {
                let args = read(rest)?;
                let [pairs, terms] = args.as_slice() else {
                    return Err(Error::Malformed(":replacefns takes PAIRS and TERMS".into()));
                };
                let subst = surface::parse_rename(&self.world, pairs)?;
                if subst.entries().iter().any(|(_, t)| !matches!(t, subst::SubstTarget::Name(_))) {
                    return Err(Error::Substitution(":replacefns takes name pairs only".into()));
                }
                let terms = items(terms)?
                    .iter()
                    .map(|t| self.world.translator().permissive().translate(t))
                    .collect::<Result<Vec<_>>>()?;
                let out = subst::replacefns(&subst, &terms);
                Ok(SExpr::list(out.iter().map(|t| t.to_sexpr()).collect::<Vec<_>>()).show())
            }
            ":symbol-lemmas" => {
                let sym = symbol(&read_one(rest)?, "symbol")?;
                Ok(symbol_list(&self.world.symbol_lemmas(&sym)))
            }
            ":deps" => {
                let spec = symbol(&read_one(rest)?, "specification name")?;
                let (funs, thms) = analyze::spec_dependents(&self.world, &spec).ok_or_else(|| Error::WrongKind {
                    name: spec.clone(),
                    expected: "specification",
                })?;
                Ok(format!("functions: {}\ntheorems: {}", symbol_list(&funs), symbol_list(&thms)))
            }
            ":dot" => {
                let (spec, file) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::Malformed(":dot takes SPEC FILE".into()))?;
                let dot = self.dot(&Symbol::new(spec))?;
                let file = file.trim();
                std::fs::write(file, dot).map_err(|e| Error::Io(format!("{file}: {e}")))?;
                Ok(format!("wrote {file}"))
            }
            ":dump" => Ok(self.world.dump().trim_end().to_string()),
            other => Err(Error::Malformed(format!("unknown command {other}"))),
        }
    }

    /// The DOT dependency graph of a specification's functions.
    pub fn dot(&self, spec: &Symbol) -> Result<String> {
        let roots = self
            .world
            .spec(spec)
            .ok_or_else(|| Error::WrongKind {
                name: spec.clone(),
                expected: "specification",
            })?
            .functions();
        Ok(analyze::dep_graph_dot(&self.world, &roots))
    }

    /// `:pf NAME` or `:pf (:REWRITE NAME)`: a theorem's formula, or a
    /// function's defining equation.
    pub fn pf(&self, arg: &SExpr) -> Result<String> {
        let name = match arg.to_vec().as_deref() {
            Some([kind, name]) if kind.as_symbol().is_some_and(Symbol::is_keyword) => symbol(name, "name")?,
            _ => symbol(arg, "name")?,
        };
        let shown = if let Some(t) = self.world.theorem(&name) {
            untranslate(&t.formula)
        } else {
            let (formals, body) = self.world.def_body(&name)?;
            let call = SExpr::cons(
                SExpr::Symbol(name.clone()),
                SExpr::list(formals.iter().cloned().map(SExpr::Symbol).collect::<Vec<_>>()),
            );
            SExpr::list([SExpr::sym("EQUAL"), call, untranslate(&normalize_tests(body))])
        };
        Ok(pretty(&shown, DEFAULT_WIDTH))
    }
}

fn symbol_list(items: &[Symbol]) -> String {
    SExpr::list(items.iter().cloned().map(SExpr::Symbol).collect::<Vec<_>>()).show()
}

fn instance_lines(r: &InstanceReport) -> Vec<String> {
    let mut out = vec![format!("INSTANCE {}", r.instance)];
    for (ob, method) in &r.obligations {
        out.push(format!("  obligation {} {method}", untranslate(ob).show()));
    }
    for (old, new) in &r.functions {
        out.push(format!("  DEFUN {new} from {old}"));
    }
    for (old, new) in &r.theorems {
        out.push(format!("  DEFTHM {new} from {old}"));
    }
    for s in &r.skipped {
        out.push(format!("  skipped {s}"));
    }
    for (name, verdict) in &r.rechecked {
        out.push(format!("  recheck {name} {verdict}"));
    }
    out
}

/// Evaluates a closed expression in `world` with default fuel.
pub fn eval_str(world: &World, text: &str) -> Result<String> {
    let term = world.translate(&read_one(text)?)?;
    Ok(eval::eval(world, &term, &Env::new(), check::DEFAULT_FUEL)?.show())
}

/// Rename-list parse helper exposed for tools.
pub fn parse_rename_str(world: &World, text: &str) -> Result<FnSubst> {
    surface::parse_rename(world, &read_one(text)?)
}
