use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use enricat::base::Mode;
use enricat::commands::{self, Output, Refs, DEFAULT_STAGE_BOUND, INPUT_ERROR, PREDICATES};
use enricat::io::{parse_instance, to_canonical_string, Instance};
use enricat::suites::SUITES;
use enricat::Error;

// A closed pipe (`enricat suites | head`) is not an error worth a panic.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "enricat",
    version,
    about = "Enriched categories over finite bases: free push-outs and DK analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Names {
    /// Category entry of the instance.
    #[arg(long)]
    category: Option<String>,
    /// Functor entry of the instance.
    #[arg(long)]
    functor: Option<String>,
    /// Map entry of the instance.
    #[arg(long)]
    map: Option<String>,
    /// Value entry of the instance.
    #[arg(long)]
    value: Option<String>,
    /// Graph entry of the instance.
    #[arg(long)]
    graph: Option<String>,
    /// Source object of the attached arrows.
    #[arg(long)]
    a: Option<String>,
    /// Target object of the attached arrows.
    #[arg(long)]
    b: Option<String>,
    /// The map f: U → V being attached.
    #[arg(long)]
    f: Option<String>,
    /// The attaching map ḡ: U → H(a, b).
    #[arg(long)]
    gbar: Option<String>,
    /// A built-in monoidal functor: identity, linearize-<p>, h0-set.
    #[arg(long)]
    base_change: Option<String>,
}

impl From<Names> for Refs {
    fn from(n: Names) -> Refs {
        Refs {
            category: n.category,
            functor: n.functor,
            map: n.map,
            value: n.value,
            graph: n.graph,
            a: n.a,
            b: n.b,
            f: n.f,
            gbar: n.gbar,
            base_change: n.base_change,
        }
    }
}

#[derive(Args)]
struct Bound {
    #[arg(long, env = "ENRICAT_STAGE_BOUND", default_value_t = DEFAULT_STAGE_BOUND)]
    stage_bound: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Validate every category and functor of an instance file.
    Validate { file: PathBuf },
    /// π₀ of a category, or of every value when the file has no categories.
    Pi0 {
        file: PathBuf,
        #[command(flatten)]
        names: Names,
    },
    /// The free category on a graph.
    Free {
        file: PathBuf,
        #[command(flatten)]
        names: Names,
        #[arg(long, default_value_t = 4)]
        word_bound: usize,
        /// Drop path terms outside the degree window instead of failing.
        #[arg(long)]
        truncate: bool,
    },
    /// Push-out of a category along a free functor.
    Pushout {
        file: PathBuf,
        #[command(flatten)]
        names: Names,
        #[command(flatten)]
        bound: Bound,
    },
    /// Decide a predicate on an instance.
    Check {
        /// Predicate id; `enricat predicates` lists them.
        predicate: String,
        file: PathBuf,
        #[command(flatten)]
        names: Names,
        #[command(flatten)]
        bound: Bound,
    },
    /// The stage-by-stage trace of a push-out along a free functor.
    TraceExport {
        file: PathBuf,
        #[command(flatten)]
        names: Names,
        #[command(flatten)]
        bound: Bound,
    },
    /// Run a seeded property suite.
    Proptest {
        suite: String,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print only the aggregate counts and failing instances.
        #[arg(long)]
        summary: bool,
        /// Rerun the single instance with this instance seed, as reported by a failure.
        #[arg(long, conflicts_with_all = ["count", "seed"])]
        replay: Option<u64>,
    },
    /// Run every acceptance criterion at its stated count and time limit.
    Acceptance,
    /// List the predicates of `check`.
    Predicates,
    /// List the property suites.
    Suites,
}

fn load(path: &PathBuf) -> Result<Instance, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

fn emit(out: Output) -> i32 {
    out!("{}", to_canonical_string(&out.json));
    out.outcome.exit_code()
}

fn run(cli: Cli) -> Result<i32, Error> {
    Ok(match cli.command {
        Command::Validate { file } => emit(commands::validate(&load(&file)?)),
        Command::Pi0 { file, names } => emit(commands::pi0(&load(&file)?, &names.into())?),
        Command::Free {
            file,
            names,
            word_bound,
            truncate,
        } => {
            let mode = if truncate {
                Mode::Truncate
            } else {
                Mode::Strict
            };
            emit(commands::free(
                &load(&file)?,
                &names.into(),
                word_bound,
                mode,
            )?)
        }
        Command::Pushout { file, names, bound } => emit(commands::pushout(
            &load(&file)?,
            &names.into(),
            bound.stage_bound,
        )?),
        Command::Check {
            predicate,
            file,
            names,
            bound,
        } => emit(commands::check(
            &predicate,
            &load(&file)?,
            &names.into(),
            bound.stage_bound,
        )?),
        Command::TraceExport { file, names, bound } => emit(commands::trace_export(
            &load(&file)?,
            &names.into(),
            bound.stage_bound,
        )?),
        Command::Proptest {
            suite,
            count,
            seed,
            summary,
            replay,
        } => {
            let s = enricat::suites::find_suite(&suite)?;
            if let Some(seed) = replay {
                return Ok(emit(commands::replay(s, seed)));
            }
            let (mut run, outcome) =
                commands::proptest(&suite, count.unwrap_or(s.default_count), seed)?;
            if summary {
                run.instances.retain(|r| r.failed());
            }
            out!(
                "{}",
                to_canonical_string(&serde_json::to_value(&run).expect("reports serialize"))
            );
            outcome.exit_code()
        }
        Command::Acceptance => {
            let mut code = 0;
            for c in &enricat::acceptance::CRITERIA {
                let (out, took) = c.run();
                if !out.ok {
                    code = 1;
                }
                outln!("{}", c.line(&out, took));
            }
            code
        }
        Command::Predicates => {
            for (id, about) in PREDICATES {
                outln!("{id:36} {about}");
            }
            0
        }
        Command::Suites => {
            for s in SUITES {
                outln!("{:28} {:4} {}", s.id, s.default_count, s.about);
            }
            0
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR as u8)
        }
    }
}
