use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quasint_cli::{format, run, with_inline_operator, CliError, Command, Selection};
use quasint_core::{catalog, Config};

/// Symbol calculus and integrability checks for differential operators.
#[derive(Parser)]
#[command(name = "quasint", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Standard form `Σ A_α ∂^α` of each operator.
    Normalize(RunArgs),
    /// Full symbols, optionally evaluated at `--x`/`--p`.
    Symbol(RunArgs),
    /// Main and second main parts.
    Mainpart(RunArgs),
    /// Commutators of every pair (or of the central operators of `--set`).
    Commute(RunArgs),
    /// Poisson brackets of main parts and the commutator/bracket bridge.
    Poisson(RunArgs),
    /// Sampled rank of the main-part Jacobian.
    Rank(RunArgs),
    /// Commutation plus quasi-independence of a set.
    CheckIntegrable(RunArgs),
    /// Regular correlation of a witness polynomial.
    CheckCorrelation(RunArgs),
    /// Dependence of `--w` on `--y` through `--witnesses`.
    CheckDependence(RunArgs),
    /// Necessary condition for regular dependence at sampled points.
    CheckNec(RunArgs),
    /// Homogenized operators, or the lift of a set with `--set`.
    Homogenize(RunArgs),
    /// Oracle cross-checks of symbols and compositions.
    Verify(RunArgs),
    /// Lists the built-in systems, or prints one in the file format.
    Catalog { name: Option<String> },
}

#[derive(Args)]
struct RunArgs {
    /// System file; `-` reads standard input.
    file: Option<PathBuf>,
    /// An operator given inline, added as `expr` and selected.
    #[arg(long)]
    expr: Option<String>,
    #[arg(long, value_delimiter = ',')]
    ops: Vec<String>,
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    central: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    w: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    y: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    witnesses: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    x: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    p: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Zero-test tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    rank_tol: Option<f64>,
    #[arg(long)]
    residual_tol: Option<f64>,
    /// Also run the oracle checks on the operators involved.
    #[arg(long)]
    verify: bool,
}

impl RunArgs {
    fn config(&self) -> Config {
        let mut cfg = Config::default();
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.tol {
            cfg.zero_tol = v;
        }
        if let Some(v) = self.rank_tol {
            cfg.rank_tol = v;
        }
        if let Some(v) = self.residual_tol {
            cfg.residual_tol = v;
        }
        cfg
    }

    fn selection(&self) -> Selection {
        let mut ops = self.ops.clone();
        if self.expr.is_some() && ops.is_empty() && self.set.is_none() {
            ops.push(quasint_cli::INLINE_OPERATOR.to_string());
        }
        Selection {
            ops,
            set: self.set.clone(),
            central: self.central,
            w: self.w.clone(),
            y: self.y.clone(),
            witnesses: self.witnesses.clone(),
            x: self.x.clone(),
            p: self.p.clone(),
        }
    }

    fn system(&self) -> Result<catalog::System, CliError> {
        let sys = match &self.file {
            Some(path) => {
                let text = if path.as_os_str() == "-" {
                    std::io::read_to_string(std::io::stdin())
                } else {
                    std::fs::read_to_string(path)
                }
                .map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                Some(format::parse(&text)?)
            }
            None => None,
        };
        match (&self.expr, sys) {
            (Some(text), sys) => with_inline_operator(sys, text),
            (None, Some(sys)) => Ok(sys),
            (None, None) => Err(CliError::Usage("expected a system file or --expr".into())),
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn execute(cmd: Command, args: &RunArgs) -> Result<ExitCode, CliError> {
    let sys = args.system()?;
    let report = run(cmd, &sys, &args.selection(), &args.config(), args.verify)?;
    emit(&format!("{}\n", report.to_json()));
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = match &cli.command {
        Sub::Normalize(a) => (Command::Normalize, a),
        Sub::Symbol(a) => (Command::Symbol, a),
        Sub::Mainpart(a) => (Command::Mainpart, a),
        Sub::Commute(a) => (Command::Commute, a),
        Sub::Poisson(a) => (Command::Poisson, a),
        Sub::Rank(a) => (Command::Rank, a),
        Sub::CheckIntegrable(a) => (Command::CheckIntegrable, a),
        Sub::CheckCorrelation(a) => (Command::CheckCorrelation, a),
        Sub::CheckDependence(a) => (Command::CheckDependence, a),
        Sub::CheckNec(a) => (Command::CheckNec, a),
        Sub::Homogenize(a) => (Command::Homogenize, a),
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Catalog { name: None } => {
            emit(&catalog::NAMES.iter().map(|n| format!("{n}\n")).collect::<String>());
            return ExitCode::SUCCESS;
        }
        Sub::Catalog { name: Some(n) } => {
            return match catalog::by_name(n) {
                Some(sys) => {
                    emit(&format::export(&sys));
                    ExitCode::SUCCESS
                }
                None => {
                    eprintln!("error: unknown system '{n}'");
                    ExitCode::from(2)
                }
            };
        }
    };
    match execute(cmd, args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
