//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::equivalence::{canonical_greedy, canonical_greedy_by_swapping, equiv};
use crate::error::Error;
use crate::evolution::render_evolution;
use crate::logicality::flatten;
use crate::proofterm::{classify, parse_proofterm, pretty_print, to_reduction, Class, ProofTerm};
use crate::system::{parse_system, RewriteSystem};
use crate::toposort::{ts, ts_stages};
use crate::tragr::{eval, parse_tragr, serialize_tragr, to_dot};

#[derive(Parser)]
#[command(
    name = "tragr",
    version,
    about = "Proof terms, trace graphs and greedy reductions for string rewrite systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// Rewrite system file
    #[arg(short, long, value_name = "FILE")]
    system: PathBuf,
    /// Proof term file, or `-` for standard input
    #[arg(short, long, value_name = "FILE")]
    term: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Tragr,
    Swap,
}

#[derive(Subcommand)]
enum Command {
    /// Check a proof term and report its source and target
    Validate(Input),
    /// Sequentialise a proof term into single steps
    Flatten(Input),
    /// Print the canonical greedy multistep reduction
    Greedy {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "tragr")]
        via: Route,
    },
    /// Print the trace graph of a proof term
    Tragr {
        #[command(flatten)]
        input: Input,
        /// Graphviz output
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// JSON output (the default)
        #[arg(long)]
        json: bool,
        /// Write to FILE instead of standard output
        #[arg(short, value_name = "FILE")]
        o: Option<PathBuf>,
    },
    /// Read a trace graph back into its greedy multistep reduction
    Readback {
        #[arg(short, long, value_name = "FILE")]
        system: PathBuf,
        /// Trace graph document
        #[arg(short = 'g', long, value_name = "FILE")]
        tragr: PathBuf,
        /// Dump the graph left at every stage into DIR
        #[arg(long, value_name = "DIR")]
        stages: Option<PathBuf>,
    },
    /// Decide permutation equivalence of two proof terms
    Equiv {
        #[command(flatten)]
        input: Input,
        /// Second proof term file, or `-`
        #[arg(short = 'u', long, value_name = "FILE")]
        term2: PathBuf,
    },
    /// Draw the layers of a reduction as a text grid
    Evolution(Input),
}

enum Failure {
    Input(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| io_failure(path, e))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| io_failure(path, e))
    }
}

fn load(input: &Input) -> Result<(RewriteSystem, ProofTerm), Failure> {
    let system = parse_system(&read_text(&input.system)?)?;
    let term = parse_proofterm(&read_text(&input.term)?, &system)?;
    Ok((system, term))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Io(e.to_string()))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate(input) => {
            let (_, p) = load(&input)?;
            emit(
                out,
                &format!("OK\nsource: {}\ntarget: {}\n", p.source(), p.target()),
            )?;
        }
        Command::Flatten(input) => {
            let (_, p) = load(&input)?;
            emit(out, &format!("{}\n", pretty_print(&flatten(&p).to_term())))?;
        }
        Command::Greedy { input, via } => {
            let (_, p) = load(&input)?;
            let r = match via {
                Route::Tragr => canonical_greedy(&p),
                Route::Swap => canonical_greedy_by_swapping(&p),
            };
            emit(out, &format!("{r}\n"))?;
        }
        Command::Tragr {
            input,
            dot,
            json: _,
            o,
        } => {
            let (_, p) = load(&input)?;
            let g = eval(&p);
            let mut text = if dot { to_dot(&g) } else { serialize_tragr(&g) };
            if !text.ends_with('\n') {
                text.push('\n');
            }
            match o {
                Some(path) => fs::write(&path, text).map_err(|e| io_failure(&path, e))?,
                None => emit(out, &text)?,
            }
        }
        Command::Readback {
            system,
            tragr,
            stages,
        } => {
            let system = parse_system(&read_text(&system)?)?;
            let g = parse_tragr(&read_text(&tragr)?, &system)?;
            if let Some(dir) = stages {
                fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
                for (i, stage) in ts_stages(&g)?.iter().enumerate() {
                    let path = dir.join(format!("stage-{}.json", i + 1));
                    fs::write(&path, serialize_tragr(stage) + "\n")
                        .map_err(|e| io_failure(&path, e))?;
                }
            }
            emit(out, &format!("{}\n", ts(&g)?))?;
        }
        Command::Equiv { input, term2 } => {
            let (system, p) = load(&input)?;
            let q = parse_proofterm(&read_text(&term2)?, &system)?;
            let same = equiv(&p, &q);
            emit(
                out,
                if same {
                    "equivalent\n"
                } else {
                    "not equivalent\n"
                },
            )?;
            return Ok(if same { 0 } else { 1 });
        }
        Command::Evolution(input) => {
            let (_, p) = load(&input)?;
            let r = match classify(&p) {
                Class::General => flatten(&p),
                _ => to_reduction(&p)?,
            };
            emit(out, &render_evolution(&r))?;
        }
    }
    Ok(0)
}

/// Runs the tool on `args` (program name first). Returns the exit status:
/// 0 on success, 1 for non-equivalent terms, 2 on bad input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            2
        }
        Err(Failure::Io(message)) => {
            let _ = writeln!(err, "error[Io]: {message}");
            2
        }
    }
}
