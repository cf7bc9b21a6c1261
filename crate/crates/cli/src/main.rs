use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use specforge::session::{LoadError, PROMPT};
use specforge::{Session, SessionConfig, Symbol, Universe};

#[derive(Parser)]
#[command(name = "specforge", version, about = "Abstract specifications and their instantiation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a .gsl file on top of the prelude and report each event.
    Load {
        file: PathBuf,
        /// Re-check copied theorems whose functions are executable.
        #[arg(long)]
        paranoid: bool,
        /// Admit theorems without checking them.
        #[arg(long)]
        assume: bool,
        /// Evaluation fuel per checked assignment.
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Interactive session, after loading the given files.
    Repl { files: Vec<PathBuf> },
    /// Print the functions and theorems derived from SPEC, writing the call
    /// graph as DOT.
    Deps {
        file: PathBuf,
        spec: String,
        #[arg(long)]
        dot: PathBuf,
    },
}

fn exit_code(e: &LoadError) -> ExitCode {
    if e.error.is_parse() {
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    }
}

fn load_into(session: &mut Session, file: &Path, quiet: bool) -> Result<(), ExitCode> {
    match session.load(file) {
        Ok(lines) => {
            if !quiet {
                lines.iter().for_each(|l| println!("{l}"));
            }
            Ok(())
        }
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            Err(exit_code(&e))
        }
    }
}

fn paren_depth(text: &str) -> i64 {
    text.lines()
        .map(|l| l.split(';').next().unwrap_or(""))
        .flat_map(str::chars)
        .map(|c| match c {
            '(' => 1,
            ')' => -1,
            _ => 0,
        })
        .sum()
}

fn repl(mut session: Session) -> ExitCode {
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        print!("{PROMPT} ");
        let _ = io::stdout().flush();
        let mut input = String::new();
        loop {
            match lines.next() {
                Some(Ok(line)) => {
                    input.push_str(&line);
                    input.push('\n');
                }
                _ => {
                    if !input.trim().is_empty() {
                        println!("{}", session.repl_command(&input));
                    }
                    return ExitCode::SUCCESS;
                }
            }
            if input.trim_start().starts_with(':') || paren_depth(&input) <= 0 {
                break;
            }
        }
        let trimmed = input.trim();
        if trimmed.is_empty() {
            continue;
        }
        if matches!(trimmed, ":q" | ":quit" | ":exit") {
            return ExitCode::SUCCESS;
        }
        println!("{}", session.repl_command(trimmed));
    }
}

fn run(cli: Cli) -> Result<(), ExitCode> {
    match cli.command {
        Command::Load {
            file,
            paranoid,
            assume,
            fuel,
        } => {
            let mut universe = Universe::default();
            if let Some(f) = fuel {
                universe = universe.with_fuel(f).map_err(|e| {
                    eprintln!("{e}");
                    ExitCode::from(2)
                })?;
            }
            let mut session = Session::new(SessionConfig {
                universe,
                assume,
                paranoid,
            });
            load_into(&mut session, &file, false)?;
            println!("loaded {} with 0 errors", file.display());
            Ok(())
        }
        Command::Repl { files } => {
            let mut session = Session::default();
            for f in &files {
                load_into(&mut session, f, true)?;
            }
            match repl(session) {
                c if c == ExitCode::SUCCESS => Ok(()),
                c => Err(c),
            }
        }
        Command::Deps { file, spec, dot } => {
            let mut session = Session::default();
            load_into(&mut session, &file, true)?;
            let spec = Symbol::new(&spec);
            let fail = |e: specforge::Error| {
                eprintln!("{e}");
                ExitCode::from(1)
            };
            let (funs, thms) = specforge::analyze::spec_dependents(session.world(), &spec).ok_or_else(|| {
                fail(specforge::Error::WrongKind {
                    name: spec.clone(),
                    expected: "specification",
                })
            })?;
            let show = |xs: &[Symbol]| xs.iter().map(Symbol::to_string).collect::<Vec<_>>().join(" ");
            println!("functions: ({})", show(&funs));
            println!("theorems: ({})", show(&thms));
            let graph = session.dot(&spec).map_err(fail)?;
            std::fs::write(&dot, graph).map_err(|e| {
                eprintln!("{}: {e}", dot.display());
                ExitCode::from(1)
            })?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
