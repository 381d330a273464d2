use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use leonard_core::instances::{Family, GeneratorConfig};
use leonard_core::io::{load_instance, Instance, InstanceFile};
use leonard_core::report::{self, Outcome, PairSelection, TOOL_NAME, TOOL_VERSION};
use leonard_core::FieldSpec;

#[derive(Parser)]
#[command(name = "leonard", version, about = "Exact checks on Leonard pairs and Q-polynomial orderings")]
struct Cli {
    #[command(flatten)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
#[group(multiple = false)]
struct Format {
    /// JSON report on stdout (default)
    #[arg(long, global = true)]
    json: bool,
    /// Human-readable summary on stdout
    #[arg(long, global = true)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an instance and decide whether it is a Leonard pair
    Verify { path: PathBuf },
    /// The graph on eigenvalue indices: edges, connectivity, tails
    Delta {
        path: PathBuf,
        /// Print the graph in DOT format instead of a report
        #[arg(long)]
        dot: bool,
    },
    /// Decide whether (E_I, E_J) starts a Q-polynomial ordering
    Decide {
        path: PathBuf,
        #[arg(required_unless_present = "all", requires = "j")]
        i: Option<usize>,
        j: Option<usize>,
        /// Decide every ordered pair
        #[arg(long, conflicts_with_all = ["i", "j"])]
        all: bool,
    },
    /// Generation by A and E*_0 and the antiautomorphism suite
    Dagger {
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate an instance file
    Gen {
        /// krawtchouk, affine-krawtchouk, random-gfp, complete-delta
        family: String,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "rational")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verify, delta, decide --all and dagger on every *.json in a directory
    Suite {
        dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn fail(outcome: Outcome, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("leonard: {msg}");
    ExitCode::from(outcome.code() as u8)
}

fn read_instance(path: &Path) -> Result<Instance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    load_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn emit<T: Serialize>(report: &T, text: impl FnOnce(&T) -> String, format: Format) {
    if format.text {
        print!("{}", text(report));
    } else {
        print!("{}", report::to_json(report));
    }
}

fn run(cli: Cli) -> ExitCode {
    let format = cli.format;
    match cli.command {
        Command::Verify { path } => {
            let inst = match read_instance(&path) {
                Ok(i) => i,
                Err(e) => return fail(Outcome::InputError, e),
            };
            let (rep, outcome) = report::verify(&inst, &stem(&path));
            emit(&rep, report::VerifyReport::to_text, format);
            ExitCode::from(outcome.code() as u8)
        }
        Command::Delta { path, dot } => {
            let result =
                read_instance(&path).and_then(|inst| report::delta(&inst, &stem(&path)).map_err(|e| e.to_string()));
            with_report(result, format, |rep, format| {
                if dot {
                    print!("{}", rep.dot);
                } else {
                    emit(rep, report::DeltaReport::to_text, format);
                }
            })
        }
        Command::Decide { path, i, j, all } => {
            let which = match (all, i, j) {
                (true, _, _) => PairSelection::All,
                (false, Some(i), Some(j)) => PairSelection::One(i, j),
                _ => return fail(Outcome::InputError, "give a pair I J or --all"),
            };
            let inst = match read_instance(&path) {
                Ok(i) => i,
                Err(e) => return fail(Outcome::InputError, e),
            };
            match report::decide(&inst, &stem(&path), which) {
                Ok((rep, outcome)) => {
                    emit(&rep, report::DecideReport::to_text, format);
                    ExitCode::from(outcome.code() as u8)
                }
                Err(e) => fail(Outcome::of_error(&e), e),
            }
        }
        Command::Dagger { path, seed } => {
            let inst = match read_instance(&path) {
                Ok(i) => i,
                Err(e) => return fail(Outcome::InputError, e),
            };
            match report::dagger(&inst, &stem(&path), seed) {
                Ok((rep, outcome)) => {
                    emit(&rep, report::DaggerCommandReport::to_text, format);
                    ExitCode::from(outcome.code() as u8)
                }
                Err(e) => fail(Outcome::of_error(&e), e),
            }
        }
        Command::Gen { family, d, field, seed, out } => gen(&family, d, &field, seed, out.as_deref()),
        Command::Suite { dir, seed } => suite(&dir, seed, format),
    }
}

fn with_report<T>(result: Result<(T, Outcome), String>, format: Format, show: impl FnOnce(&T, Format)) -> ExitCode {
    match result {
        Ok((rep, outcome)) => {
            show(&rep, format);
            ExitCode::from(outcome.code() as u8)
        }
        Err(e) => fail(Outcome::InputError, e),
    }
}

fn file_name(family: Family, d: usize, spec: FieldSpec, seed: u64) -> String {
    let field = match spec.modulus() {
        Some(p) => format!("gfp{p}"),
        None => "rational".to_string(),
    };
    match family {
        Family::Krawtchouk => format!("{}_d{d}_{field}", family.name().replace('-', "_")),
        _ => format!("{}_d{d}_{field}_s{seed}", family.name().replace('-', "_")),
    }
}

fn gen(family: &str, d: usize, field: &str, seed: u64, out: Option<&Path>) -> ExitCode {
    let family: Family = match family.parse() {
        Ok(f) => f,
        Err(e) => return fail(Outcome::InputError, e),
    };
    let spec: FieldSpec = match field.parse() {
        Ok(s) => s,
        Err(e) => return fail(Outcome::InputError, e),
    };
    let ctx = match GeneratorConfig::new(family, d, spec, seed).generate() {
        Ok(c) => c,
        Err(e) => return fail(Outcome::of_error(&e), e),
    };
    let random = family != Family::Krawtchouk;
    let file = InstanceFile::from_context(
        &ctx,
        Some(file_name(family, d, spec, seed)),
        Some(family.name().to_string()),
        random.then_some(seed),
    );
    let text = file.to_json();
    match out {
        Some(path) => match fs::write(path, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(Outcome::InputError, format!("{}: {e}", path.display())),
        },
        None => {
            print!("{text}");
            ExitCode::SUCCESS
        }
    }
}

#[derive(Serialize)]
struct SuiteEntry {
    file: String,
    verify: Outcome,
    delta: Option<Outcome>,
    decide: Option<Outcome>,
    dagger: Option<Outcome>,
    q_polynomial_pairs: Vec<[usize; 2]>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SuiteTotals {
    files: usize,
    leonard_pairs: usize,
    with_q_polynomial_pair: usize,
    input_errors: usize,
    integrity_violations: usize,
}

#[derive(Serialize)]
struct SuiteReport {
    tool: report::Tool,
    entries: Vec<SuiteEntry>,
    totals: SuiteTotals,
}

fn run_file(path: &Path, seed: u64) -> SuiteEntry {
    let file = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let inst = match read_instance(path) {
        Ok(i) => i,
        Err(e) => {
            return SuiteEntry {
                file,
                verify: Outcome::InputError,
                delta: None,
                decide: None,
                dagger: None,
                q_polynomial_pairs: Vec::new(),
                error: Some(e),
            }
        }
    };
    let name = stem(path);
    let (_, verify) = report::verify(&inst, &name);
    if let Err(e) = inst.context() {
        // a raw pair that is not a Leonard pair has no dual eigenbasis to work in
        return SuiteEntry {
            file,
            verify,
            delta: None,
            decide: None,
            dagger: None,
            q_polynomial_pairs: Vec::new(),
            error: Some(e.to_string()),
        };
    }
    let mut error = None;
    let mut status = |r: Result<Outcome, leonard_core::Error>| match r {
        Ok(o) => Some(o),
        Err(e) => {
            let o = Outcome::of_error(&e);
            error.get_or_insert_with(|| e.to_string());
            Some(o)
        }
    };
    let delta = status(report::delta(&inst, &name).map(|r| r.1));
    let decided = report::decide(&inst, &name, PairSelection::All);
    let pairs = decided.as_ref().map(|r| r.0.q_polynomial_pairs.clone()).unwrap_or_default();
    let decide = status(decided.map(|r| r.1));
    let dagger = status(report::dagger(&inst, &name, seed).map(|r| r.1));
    SuiteEntry { file, verify, delta, decide, dagger, q_polynomial_pairs: pairs, error }
}

fn suite(dir: &Path, seed: u64, format: Format) -> ExitCode {
    let listing = match fs::read_dir(dir) {
        Ok(l) => l,
        Err(e) => return fail(Outcome::InputError, format!("{}: {e}", dir.display())),
    };
    let mut files: Vec<PathBuf> = listing
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let entries: Vec<SuiteEntry> = files.par_iter().map(|p| run_file(p, seed)).collect();
    let outcomes =
        |e: &SuiteEntry| [Some(e.verify), e.delta, e.decide, e.dagger].into_iter().flatten().collect::<Vec<_>>();
    let totals = SuiteTotals {
        files: entries.len(),
        leonard_pairs: entries.iter().filter(|e| e.verify == Outcome::Pass).count(),
        with_q_polynomial_pair: entries.iter().filter(|e| !e.q_polynomial_pairs.is_empty()).count(),
        input_errors: entries.iter().filter(|e| outcomes(e).contains(&Outcome::InputError)).count(),
        integrity_violations: entries.iter().filter(|e| outcomes(e).contains(&Outcome::IntegrityViolation)).count(),
    };
    // negative verdicts are successful runs; only tool errors change the exit code
    let code = if totals.integrity_violations > 0 {
        Outcome::IntegrityViolation
    } else if totals.input_errors > 0 {
        Outcome::InputError
    } else {
        Outcome::Pass
    };
    let rep = SuiteReport { tool: report::Tool { name: TOOL_NAME, version: TOOL_VERSION }, entries, totals };
    if format.text {
        for e in &rep.entries {
            let pairs =
                if e.q_polynomial_pairs.is_empty() { "-".to_string() } else { format!("{:?}", e.q_polynomial_pairs) };
            println!("{:<40} {:?} {pairs}", e.file, e.verify);
        }
        println!(
            "{} files, {} Leonard pairs, {} input errors, {} integrity violations",
            rep.totals.files, rep.totals.leonard_pairs, rep.totals.input_errors, rep.totals.integrity_violations
        );
    } else {
        print!("{}", report::to_json(&rep));
    }
    ExitCode::from(code.code() as u8)
}

fn main() -> ExitCode {
    run(Cli::parse())
}
