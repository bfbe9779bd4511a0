use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use moufang_core::jordan::QuadraticJordan;
use moufang_core::moufang::{MoufangDescriptor, MoufangSet};
use moufang_core::nearfield::{NearfieldError, NearfieldSpec};
use moufang_core::report::{self, CouplingKind, ReportError, FIELD_CHECKS, NEARFIELD_CHECKS};

/// Verify Moufang sets, Jordan algebras and nearfields over finite fields.
#[derive(Parser)]
#[command(name = "moufang", version)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record per-check wall-clock time (makes reports non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    /// Closure cap for permutation group enumeration.
    #[arg(long, global = true, env = "MOUFANG_CAP")]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Projective line over F_q, built from the Jordan algebra F_q.
    Field {
        #[arg(long)]
        q: u32,
        /// Comma-separated checks, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
    },
    /// Nearfields and their sharply 3-transitive groups.
    Nearfield {
        #[command(subcommand)]
        source: NearfieldSource,
    },
    /// Quadratic Jordan algebra from a text table.
    Jordan {
        #[arg(long)]
        file: PathBuf,
    },
    /// Moufang set from a JSON descriptor `{p, d, e, tau}`.
    Load {
        #[arg(long)]
        file: PathBuf,
    },
    /// The verification matrix over the catalog.
    Suite {
        #[arg(long, value_enum, default_value_t = Profile::Quick)]
        profile: Profile,
        /// Add a deliberately broken instance.
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Subcommand)]
enum NearfieldSource {
    /// Dickson nearfield on F_q.
    Dickson {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, ignore_case = true)]
        coupling: CouplingArg,
        #[arg(long, default_value = "all")]
        checks: String,
    },
    /// Multiplication table (text) or JSON spec with `phi` or `mul`.
    Table {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = "all")]
        checks: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingArg {
    Char,
    Trivial,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Quick,
    Full,
}

/// Exit codes: 0 all checks pass, 1 verification failure, 2 usage or input error.
enum Failure {
    Usage(anyhow::Error),
    Verification(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn classify(e: ReportError) -> Failure {
    match e {
        ReportError::UnsupportedQ(_) | ReportError::UnknownCheck(_) | ReportError::UnknownProfile(_) | ReportError::Field(_) => {
            Failure::Usage(e.into())
        }
        ReportError::Nearfield(NearfieldError::Parse { .. }
            | NearfieldError::BadDicksonPair { .. }
            | NearfieldError::NotASquareOrder { .. }
            | NearfieldError::CouplingShape { .. }) => {
            Failure::Usage(e.into())
        }
        other => Failure::Verification(other.into()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    Ok(std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let timings = cli.timings;
    let (value, passed) = match &cli.command {
        Command::Field { q, checks } => {
            let checks = report::parse_checks(checks, &FIELD_CHECKS).map_err(classify)?;
            let r = report::field_report(*q, &checks, timings).map_err(classify)?;
            (serde_json::to_value(&r).context("serializing")?, r.passed())
        }
        Command::Nearfield { source: NearfieldSource::Dickson { q, coupling, checks } } => {
            let checks = report::parse_checks(checks, &NEARFIELD_CHECKS).map_err(classify)?;
            let kind = match coupling {
                CouplingArg::Char => CouplingKind::Char,
                CouplingArg::Trivial => CouplingKind::Trivial,
            };
            let r = report::dickson_report(*q, kind, &checks, timings).map_err(classify)?;
            (serde_json::to_value(&r).context("serializing")?, r.passed())
        }
        Command::Nearfield { source: NearfieldSource::Table { file, checks } } => {
            let checks = report::parse_checks(checks, &NEARFIELD_CHECKS).map_err(classify)?;
            let spec = NearfieldSpec::parse(&read(file)?).map_err(|e| classify(e.into()))?;
            let (n, sigma) = spec.build().map_err(|e| classify(e.into()))?;
            let instance = json!({ "kind": "nearfield-table", "p": spec.p, "f": spec.f, "source": file.display().to_string() });
            let r = report::nearfield_report(&n, sigma.as_ref(), instance, &checks, timings);
            (serde_json::to_value(&r).context("serializing")?, r.passed())
        }
        Command::Jordan { file } => {
            let j = QuadraticJordan::parse_text(&read(file)?).map_err(|e| Failure::Usage(e.into()))?;
            let r = report::jordan_report(&j, timings);
            (serde_json::to_value(&r).context("serializing")?, r.passed())
        }
        Command::Load { file } => {
            let d: MoufangDescriptor = serde_json::from_str(&read(file)?).context("parsing descriptor")?;
            let m = MoufangSet::from_descriptor(&d).map_err(|e| Failure::Usage(e.into()))?;
            let r = report::moufang_report(&m, serde_json::to_value(&d).context("serializing")?, timings);
            (serde_json::to_value(&r).context("serializing")?, r.passed())
        }
        Command::Suite { profile, inject_fault } => {
            let name = match profile {
                Profile::Quick => "quick",
                Profile::Full => "full",
            };
            let r = report::run_suite(name, *inject_fault, timings).map_err(classify)?;
            (serde_json::to_value(&r).context("serializing")?, r.passed)
        }
    };
    emit(&value, cli.out.as_deref()).map_err(Failure::Verification)?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.cap {
        // the library reads the cap from the environment
        std::env::set_var("MOUFANG_CAP", cap.to_string());
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
