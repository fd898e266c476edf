use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use trm::exactalg::parse_rational;
use trm::report::{self, OutputFormat, RunConfig};
use trm::{Error, Rational};

#[derive(Parser, Debug)]
#[command(
    name = "trm",
    version,
    about = "Trigonometric Rosen-Morse potential: exact spectrum, polynomials and wave functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Centrifugal parameter a > -1/2, as "p/q", an integer, or a decimal.
    #[arg(long, global = true, default_value = "1/4", value_parser = parse_rational_arg, allow_hyphen_values = true)]
    a: Rational,

    /// Coulomb-like parameter b > 0.
    #[arg(long, global = true, default_value = "1", value_parser = parse_rational_arg, allow_hyphen_values = true)]
    b: Rational,

    /// Highest level index.
    #[arg(long = "n-max", global = true, default_value_t = 6)]
    n_max: u32,

    /// Number of interior grid points for tabulated output.
    #[arg(long, global = true, default_value_t = 500)]
    grid: usize,

    /// Quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Output format; tabular commands default to csv, the rest to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Emit K_n R_n instead of R_n.
    #[arg(long, global = true)]
    unnormalized: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Level parameters beta_n, alpha_n, epsilon_n.
    Spectrum,
    /// Potential and its two surrogates on a grid.
    Potential,
    /// Wave functions R_1..R_nmax on a grid.
    Wavefunctions,
    /// Exact Rodrigues polynomials K_n C_n.
    Poly,
    /// Run every verification check.
    Verify,
    /// Complex Jacobi correspondence probe.
    JacobiProbe,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Csv,
    Json,
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<(String, bool), Error> {
    cfg.validate()?;
    let format = match (cli.format, cli.command) {
        (Some(Format::Csv), _) => OutputFormat::Csv,
        (Some(Format::Json), _) => OutputFormat::Json,
        (None, Command::Spectrum | Command::Potential | Command::Wavefunctions) => {
            OutputFormat::Csv
        }
        (None, _) => OutputFormat::Json,
    };
    let csv = format == OutputFormat::Csv;
    let text = match cli.command {
        Command::Spectrum if csv => report::spectrum_csv(cfg)?,
        Command::Spectrum => to_json(&report::spectrum_json(cfg)?),
        Command::Potential => {
            let rows = report::potential_rows(cfg)?;
            if csv {
                report::rows_to_csv(&report::potential_header(), &rows)
            } else {
                let rows: Vec<_> = rows
                    .iter()
                    .map(|r| json!({"z": r[0], "v": r[1], "coulomb": r[2], "linear_ho": r[3]}))
                    .collect();
                to_json(&rows)
            }
        }
        Command::Wavefunctions => {
            let rows = report::wavefunction_rows(cfg)?;
            let header = report::wavefunction_header(cfg.n_max);
            if csv {
                report::rows_to_csv(&header, &rows)
            } else {
                to_json(&json!({"columns": header, "normalized": !cfg.unnormalized, "rows": rows}))
            }
        }
        Command::Poly => {
            let table = report::poly_table(cfg)?;
            if csv {
                report::poly_csv(&table)
            } else {
                to_json(&table)
            }
        }
        Command::Verify => {
            let r = report::verify(cfg)?;
            return Ok((to_json(&r), r.passed));
        }
        Command::JacobiProbe => to_json(&report::jacobi_probe(cfg)?),
    };
    Ok((text, true))
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let cfg = RunConfig {
        a: cli.a.clone(),
        b: cli.b.clone(),
        n_max: cli.n_max,
        grid_points: cli.grid,
        tol: cli.tol,
        unnormalized: cli.unnormalized,
    };
    match run(&cli, &cfg) {
        Ok((text, passed)) => {
            if let Err(e) = emit(&cli, &text) {
                eprintln!("trm: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(err) => {
            let code = report::exit_code(&err);
            let kind = match &err {
                Error::NonConvergence { .. } => "non_convergence",
                Error::Domain(_) | Error::Parse(_) => "validation",
                Error::DegenerateParameters(_) => "degenerate_parameters",
            };
            let mut body = json!({"error": kind, "message": err.to_string()});
            if let Error::NonConvergence {
                best_estimate,
                abs_error_estimate,
                nodes_used,
            } = err
            {
                body["best_estimate"] = json!(best_estimate);
                body["abs_error_estimate"] = json!(abs_error_estimate);
                body["nodes_used"] = json!(nodes_used);
            }
            eprintln!("{}", serde_json::to_string(&body).expect("serializable"));
            ExitCode::from(code as u8)
        }
    }
}
