use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use vancyc::driver::selftest::selftest;
use vancyc::driver::{run_with, Extension, Mode, ProblemSpec, Rat, RunOptions};
use vancyc::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Isolated,
    NcMonomial,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExtensionArg {
    Off,
    One,
}

/// Vanishing cycles and monodromy exponents of polynomial functions, in
/// exact arithmetic.
#[derive(Debug, Parser)]
#[command(name = "vancyc", version)]
struct Args {
    /// Problem document (JSON); `-` reads standard input.
    #[arg(long, value_name = "PATH", required_unless_present = "selftest")]
    input: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Fixed truncation order, with no automatic retries.
    #[arg(long, value_name = "N")]
    precision: Option<usize>,
    /// Eigenvalue window `a,b` for the normal-crossing mode, half-open.
    #[arg(long, value_name = "A,B")]
    window: Option<String>,
    #[arg(long, value_enum)]
    extension: Option<ExtensionArg>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Run the built-in checks and the golden corpus.
    #[arg(long)]
    selftest: bool,
    /// Add the wall-clock time to the report.
    #[arg(long)]
    timing: bool,
}

fn fail(kind: &str, reason: &str, code: u8) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": kind, "reason": reason }));
    ExitCode::from(code)
}

fn fail_with(e: &Error) -> ExitCode {
    fail(e.kind().name(), &e.to_string(), e.exit_code() as u8)
}

fn parse_window(text: &str) -> Result<(Rat, Rat), Error> {
    let bad = || Error::InvalidProblem(format!("window must be `a,b`, got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

fn load(args: &Args) -> Result<ProblemSpec, Error> {
    let path = args.input.as_deref().unwrap_or("-");
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?
    };
    let mut spec = ProblemSpec::from_document(&text)?;
    if let Some(m) = args.mode {
        spec.mode = match m {
            ModeArg::Isolated => Mode::Isolated,
            ModeArg::NcMonomial => Mode::NcMonomial,
        };
    }
    if let Some(p) = args.precision {
        spec.precision = Some(p);
    }
    if let Some(w) = &args.window {
        spec.window = Some(parse_window(w)?);
    }
    if let Some(e) = args.extension {
        spec.extension = match e {
            ExtensionArg::Off => Extension::Off,
            ExtensionArg::One => Extension::One,
        };
    }
    Ok(spec)
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("VANCYC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::InvalidProblem(format!("VANCYC_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Internal(e.to_string()))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let reason = e.to_string();
            return fail("usage", reason.lines().next().unwrap_or("bad arguments"), 1);
        }
    };
    if let Err(e) = configure_threads() {
        return fail_with(&e);
    }
    if args.selftest {
        let summary = selftest();
        print!("{}", summary.to_text());
        return if summary.passed() { ExitCode::SUCCESS } else { ExitCode::from(3) };
    }
    let spec = match load(&args) {
        Ok(s) => s,
        Err(e) => return fail_with(&e),
    };
    match run_with(&spec, RunOptions { timing: args.timing }) {
        Ok(report) => {
            match args.format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail_with(&e),
    }
}
