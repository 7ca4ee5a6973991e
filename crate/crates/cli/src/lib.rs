//! `degen`: a command-line workbench that reads instance bundles describing
//! semistable fibres, Frobenius data, regulators and global L-functions over
//! a function field, and checks the dimension theorem and the conjectures
//! A1, A2, B1FF, B2FF and CFF on them with exact arithmetic.

pub mod bundle;
pub mod commands;
pub mod examples;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::bundle::{load_instance, to_json_string, BundleFile};
use crate::commands::{
    cmd_complex, cmd_conjecture, cmd_dim_theorem, cmd_quasi_iso, cmd_validate, CommandError,
    Conjecture,
};
use crate::report::{CheckReport, EXIT_INPUT_ERROR};

#[derive(Parser, Debug)]
#[command(
    name = "degen",
    version,
    about = "Exact checks of regulator and special-value conjectures on degeneration data"
)]
pub struct Cli {
    /// Emit tab-separated rows (check, place, verdict, value).
    #[arg(long, global = true)]
    pub tsv: bool,
    /// Reject unknown keys in instance files.
    #[arg(long, global = true, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check gamma^2 = rho^2 = gamma rho + rho gamma = 0 on every fibre.
    Validate { file: PathBuf },
    /// Compare the Deligne dimension with the pole order of the local factor.
    DimTheorem {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
    },
    /// Run one of A1, A2, B1FF, B2FF, CFF.
    Check { which: Conjecture, file: PathBuf },
    /// Build K, Cone(N) and C(*) and print their dimensions.
    Complex {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, allow_hyphen_values = true)]
        star: i64,
    },
    /// Compare the cohomology of Cone(N) and C(*).
    QuasiIso {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, allow_hyphen_values = true)]
        star: i64,
    },
    /// Write a built-in bundle: ngon [n= q=], smooth-ec [a_v= q=], zeta-fqt [q=].
    Example {
        name: String,
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_INPUT_ERROR,
        }
    }
}

fn read(path: &PathBuf, strict: bool) -> Result<(bundle::Instance, Vec<String>), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    load_instance(&text, strict).map_err(|e| format!("{}: {e}", path.display()))
}

fn render(report: &CheckReport, tsv: bool, warnings: &[String]) -> Outcome {
    let stdout = if tsv {
        report.to_tsv()
    } else {
        report.to_text()
    };
    let stderr = warnings
        .iter()
        .map(|w| format!("warning: ignored unknown field {w}\n"))
        .collect();
    Outcome {
        stdout,
        stderr,
        code: report.exit_code(),
    }
}

/// Runs a parsed command line.
pub fn execute(cli: Cli) -> Outcome {
    let with_file =
        |file: &PathBuf, job: &dyn Fn(&bundle::Instance) -> Result<CheckReport, CommandError>| {
            let (inst, warnings) = match read(file, cli.strict) {
                Ok(x) => x,
                Err(e) => return Outcome::input_error(e),
            };
            match job(&inst) {
                Ok(r) => render(&r, cli.tsv, &warnings),
                Err(e) => Outcome::input_error(e),
            }
        };
    match &cli.command {
        Command::Validate { file } => with_file(file, &|i| Ok(cmd_validate(i))),
        Command::DimTheorem { file, q, a } => with_file(file, &|i| cmd_dim_theorem(i, *q, *a)),
        Command::Check { which, file } => with_file(file, &|i| cmd_conjecture(i, *which)),
        Command::Complex { file, q, star } => with_file(file, &|i| cmd_complex(i, *q, *star)),
        Command::QuasiIso { file, q, star } => with_file(file, &|i| cmd_quasi_iso(i, *q, *star)),
        Command::Example {
            name,
            params,
            output,
        } => {
            let inst = match examples::parse_kv(params)
                .and_then(|kv| examples::build_example(name, &kv))
            {
                Ok(i) => i,
                Err(e) => return Outcome::input_error(e),
            };
            let json = to_json_string(&BundleFile::from_instance(&inst));
            match output {
                None => Outcome {
                    stdout: json,
                    stderr: String::new(),
                    code: 0,
                },
                Some(path) => match std::fs::write(path, json) {
                    Ok(()) => Outcome {
                        stdout: format!("wrote {}\n", path.display()),
                        stderr: String::new(),
                        code: 0,
                    },
                    Err(e) => Outcome::input_error(format!("{}: {e}", path.display())),
                },
            }
        }
    }
}

/// Parses `args` (including the program name) and runs them. Usage errors
/// exit with the input-error code; `--help` and `--version` exit with 0.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_INPUT_ERROR,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            }
        }
    }
}
