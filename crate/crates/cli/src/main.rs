//! `symx`: runs the law suites and evaluates s-expressions from the shell.

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use symx_core::analyzer::{is_hereditarily_symmetric, HsOutcome, SymmetricSystem};
use symx_core::forcing::compile;
use symx_core::name::support;
use symx_core::sexpr;
use symx_core::suites::{run_suite, Format, RunConfig, SUITES};
use symx_core::{
    Condition, Engine, Error, Formula, Name, OrderPoint, SupportIdeal, TruncatedPoset,
};

#[derive(Parser)]
#[command(name = "symx", version, about = "Symmetric extension workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a law suite, or `all` of them in order.
    Run {
        suite: String,
        #[command(flatten)]
        size: Size,
        #[arg(long, default_value_t = 1000)]
        cases: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
    },
    /// Evaluate one expression.
    Eval {
        #[command(subcommand)]
        action: EvalAction,
    },
    /// Certify a name as hereditarily symmetric and print its witness tree.
    Analyze {
        /// The name; omitted when `--in` is given.
        name: Option<String>,
        /// Group, e.g. `(full plain)` or `(generated (perm (0 1) (1 0)))`.
        #[arg(long, default_value = "(full plain)")]
        group: String,
        /// Support ideal: `finite-sets`, `bounded-cuts` or `(listed {..} ..)`.
        #[arg(long, default_value = "finite-sets")]
        ideal: String,
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum EvalAction {
    /// Apply an automorphism to a name.
    Apply {
        automorphism: String,
        name: Option<String>,
        #[command(flatten)]
        io: Io,
    },
    /// Least member of the ideal covering a name's coordinates.
    Support {
        name: Option<String>,
        #[arg(long, default_value = "finite-sets")]
        ideal: String,
        #[command(flatten)]
        io: Io,
    },
    /// Compile a name against the truncated poset.
    Compile {
        name: Option<String>,
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        io: Io,
    },
    /// Decide whether a condition forces a formula.
    Force {
        condition: String,
        formula: Option<String>,
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Args, Clone, Copy)]
struct Size {
    /// Coordinates of the truncated poset.
    #[arg(long, default_value_t = 2)]
    index_size: u64,
    /// Cohen slots per coordinate.
    #[arg(long, default_value_t = 2)]
    slots: u32,
    /// Name depth for enumerating suites.
    #[arg(long, default_value_t = 2)]
    depth: usize,
}

#[derive(Args)]
struct Io {
    /// Read one expression per line instead of the last argument.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<String>,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

/// Exit statuses: success, a failed check, bad usage or input.
const FAIL: u8 = 1;
const USAGE: u8 = 2;

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::UnknownSuite(_) => USAGE,
            _ => FAIL,
        };
        let message = match &e {
            Error::Parse { pos, msg } => format!("parse error at byte {pos}: {msg}"),
            other => other.to_string(),
        };
        Failure { code, message }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(FAIL),
        Err(f) => {
            eprintln!("symx: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Run {
            suite,
            size,
            cases,
            seed,
            budget,
            format,
        } => {
            let suites: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut passed = true;
            for s in suites {
                let cfg = RunConfig {
                    suite: s.to_string(),
                    index_size: size.index_size,
                    slots: size.slots,
                    name_depth: size.depth,
                    cases,
                    seed,
                    format: match format {
                        OutFormat::Json => Format::Json,
                        OutFormat::Text => Format::Text,
                    },
                    budget,
                };
                let report = run_suite(&cfg)?;
                match format {
                    OutFormat::Json => println!("{}", report.to_json()),
                    OutFormat::Text => println!("{report}"),
                }
                passed &= report.passed;
            }
            Ok(passed)
        }
        Command::Eval { action } => eval(action),
        Command::Analyze {
            name,
            group,
            ideal,
            size,
            io,
        } => {
            let group = sexpr::parse_group(&group)?;
            let ideal = sexpr::parse_ideal(&ideal)?;
            let names = inputs(name, &io)?
                .iter()
                .map(|s| sexpr::parse_name(s))
                .collect::<Result<Vec<_>, _>>()?;
            let coords = names.iter().flat_map(|n| n.coordinates()).collect();
            let system = SymmetricSystem::new(poset(&size, coords)?, group, ideal);
            let mut all = true;
            for n in &names {
                let outcome = is_hereditarily_symmetric(n, &system)?;
                all &= outcome.is_certified();
                match io.format {
                    OutFormat::Json => {
                        println!("{}", json!({ "input": n.to_string(), "result": outcome }))
                    }
                    OutFormat::Text => println!("{}", describe(&outcome)),
                }
            }
            Ok(all)
        }
    }
}

fn describe(outcome: &HsOutcome) -> String {
    match outcome {
        HsOutcome::Certified(w) => format!("certified, support {}", w.support),
        HsOutcome::Failed(f) => format!("not symmetric at path {:?}: {}", f.path, f.name),
    }
}

/// The positional argument, or the nonblank lines of `--in`.
fn inputs(arg: Option<String>, io: &Io) -> Result<Vec<String>, Failure> {
    match (&io.input, arg) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| Failure {
                code: USAGE,
                message: format!("{path}: {e}"),
            })?;
            Ok(text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect())
        }
        (None, Some(a)) => Ok(vec![a]),
        (Some(_), Some(_)) => Err(Failure {
            code: USAGE,
            message: "give the expression or --in, not both".into(),
        }),
        (None, None) => Err(Failure {
            code: USAGE,
            message: "missing expression (or --in FILE)".into(),
        }),
    }
}

/// The plain truncation on `index_size` naturals, widened to every natural
/// the inputs mention; inputs over another domain use exactly their
/// coordinates.
fn poset(size: &Size, coords: BTreeSet<OrderPoint>) -> Result<TruncatedPoset, Failure> {
    let all_nat = coords.iter().all(|x| matches!(x, OrderPoint::Nat(_)));
    let t = if all_nat {
        let top = coords
            .iter()
            .filter_map(|x| match x {
                OrderPoint::Nat(n) => Some(n + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        TruncatedPoset::plain(size.index_size.max(top), size.slots)?
    } else {
        TruncatedPoset::new(coords.into_iter().collect(), size.slots)?
    };
    Ok(t)
}

fn formula_coords(phi: &Formula, out: &mut BTreeSet<OrderPoint>) {
    match phi {
        Formula::Elem(a, b) | Formula::Eq(a, b) => {
            out.extend(a.coordinates());
            out.extend(b.coordinates());
        }
        Formula::Not(f) => formula_coords(f, out),
        Formula::And(f, g) | Formula::Or(f, g) => {
            formula_coords(f, out);
            formula_coords(g, out);
        }
        Formula::IsFunctionOn(f, xs) => {
            out.extend(f.coordinates());
            out.extend(xs.iter().flat_map(Name::coordinates));
        }
        Formula::ValueIn(f, x, a) => {
            for n in [f, x, a] {
                out.extend(n.coordinates());
            }
        }
    }
}

fn emit(format: OutFormat, input: &str, result: &str) {
    match format {
        OutFormat::Json => println!("{}", json!({ "input": input, "result": result })),
        OutFormat::Text => println!("{result}"),
    }
}

fn eval(action: EvalAction) -> Outcome {
    match action {
        EvalAction::Apply {
            automorphism,
            name,
            io,
        } => {
            let pi = sexpr::parse_automorphism(&automorphism)?;
            for line in inputs(name, &io)? {
                let n = sexpr::parse_name(&line)?;
                emit(io.format, &line, &n.apply(&pi)?.to_string());
            }
        }
        EvalAction::Support { name, ideal, io } => {
            let ideal: SupportIdeal = sexpr::parse_ideal(&ideal)?;
            for line in inputs(name, &io)? {
                let n = sexpr::parse_name(&line)?;
                emit(io.format, &line, &support(&n, &ideal)?.to_string());
            }
        }
        EvalAction::Compile { name, size, io } => {
            let lines = inputs(name, &io)?;
            let names = lines
                .iter()
                .map(|s| sexpr::parse_name(s))
                .collect::<Result<Vec<_>, _>>()?;
            let t = poset(&size, names.iter().flat_map(|n| n.coordinates()).collect())?;
            for (line, n) in lines.iter().zip(&names) {
                emit(io.format, line, &compile(n, &t)?.to_string());
            }
        }
        EvalAction::Force {
            condition,
            formula,
            size,
            io,
        } => {
            let p: Condition = sexpr::parse_condition(&condition)?;
            let lines = inputs(formula, &io)?;
            let formulas = lines
                .iter()
                .map(|s| sexpr::parse_formula(s))
                .collect::<Result<Vec<_>, _>>()?;
            let mut coords: BTreeSet<OrderPoint> = p.supp();
            for phi in &formulas {
                formula_coords(phi, &mut coords);
            }
            let t = poset(&size, coords)?;
            let mut engine = Engine::new(&t);
            for (line, phi) in lines.iter().zip(&formulas) {
                emit(io.format, line, &engine.forces(&p, phi)?.to_string());
            }
        }
    }
    Ok(true)
}
