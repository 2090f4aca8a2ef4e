use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qschrod::cli::{self, CheckRecord, LatticeConfig, RChoice, Report};
use qschrod::lattice::Family;
use qschrod::maps::MapCase;
use qschrod::scalar::Scalar;
use qschrod::tables::AlgCase;

/// Exact verification suites for the deformed Schrodinger algebras and
/// their discrete equations.
#[derive(Parser)]
#[command(name = "qschrod", version, about)]
struct Cli {
    /// Write the JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<std::path::PathBuf>,

    /// Print every check record instead of a summary.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Commutator-table suite (add --casimirs for the Casimir identities).
    Relations {
        /// Algebra case: space, time, classical-space, classical-time,
        /// sl2-deformed, sl2-mapped, or all.
        #[arg(long, default_value = "all")]
        case: String,
        /// Also run the Casimir / symmetry-factor identities.
        #[arg(long)]
        casimirs: bool,
    },
    /// Coproduct homomorphism, coassociativity, group-like and
    /// composed-system checks.
    Hopf {
        #[arg(long, default_value = "all")]
        case: String,
    },
    /// Nonlinear basis-map suites.
    Maps {
        /// Map case: space, time, sl2, or all.
        #[arg(long, default_value = "all")]
        case: String,
    },
    /// Classical r-matrix and Lie bialgebra suites.
    Bialgebra {
        /// Which r-matrix: rs, rt, sl2, sa, or all.
        #[arg(long, default_value = "all")]
        r: String,
        #[command(flatten)]
        params: SaParams,
    },
    /// Numeric lattice validation.
    Lattice {
        /// Equation family: bk (space-discrete), ci (time-discrete),
        /// za (fully discrete), or all.
        #[arg(long, default_value = "all")]
        family: String,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        nt: Option<usize>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Dump the first dispersion solution as grid records to this path.
        #[arg(long, value_name = "PATH")]
        dump: Option<std::path::PathBuf>,
    },
    /// Parse an expression and print its canonical normal form.
    Parse {
        /// Expression text, e.g. "dx*x" or "-t*(1/z)*(1 - Sx[-1]) - m*x*Sx[1]".
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Run every suite with default settings.
    All,
    /// Print the machine-readable table manifest.
    List,
}

/// Rational overrides for the three-parameter r-matrix family.
#[derive(Args)]
struct SaParams {
    /// Value of z1, as "p" or "p/q" (symbolic when omitted).
    #[arg(long, allow_hyphen_values = true)]
    z1: Option<String>,
    /// Value of z2.
    #[arg(long, allow_hyphen_values = true)]
    z2: Option<String>,
    /// Value of lambda.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
}

fn parse_rational(s: &str) -> Result<Scalar, String> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let n: i64 = num.parse().map_err(|_| format!("bad rational `{s}`"))?;
    let d: i64 = den.parse().map_err(|_| format!("bad rational `{s}`"))?;
    if d == 0 {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Scalar::ratio(n, d))
}

fn case_filter(s: &str) -> Result<Vec<AlgCase>, String> {
    if s == "all" {
        return Ok(AlgCase::ALL.to_vec());
    }
    AlgCase::from_label(s)
        .map(|c| vec![c])
        .ok_or_else(|| format!("unknown case `{s}`"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    cli::configure_threads();
    let result = execute(&cli);
    match result {
        Ok(records) => {
            let report = Report::from_checks(records);
            if cli.verbose {
                for c in &report.checks {
                    println!(
                        "[{}] {} - {}{}",
                        match c.status {
                            cli::Status::Pass => "pass",
                            cli::Status::Fail => "FAIL",
                            cli::Status::Error => "ERROR",
                        },
                        c.check_id,
                        c.subject,
                        c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
                    );
                }
            }
            println!(
                "{}: {}/{} checks passed",
                if report.aggregate_pass { "ok" } else { "FAILED" },
                report.passed,
                report.total
            );
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("cannot write report to {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.aggregate_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<Vec<CheckRecord>, String> {
    match &cli.command {
        Command::Relations { case, casimirs } => {
            let cases = case_filter(case)?;
            let mut records = cli::relations_suite(&cases);
            if *casimirs {
                records.extend(cli::casimir_suite());
            }
            Ok(records)
        }
        Command::Hopf { case } => Ok(cli::hopf_suite(&case_filter(case)?)),
        Command::Maps { case } => {
            let cases = if case == "all" {
                MapCase::ALL.to_vec()
            } else {
                vec![MapCase::from_label(case).ok_or_else(|| format!("unknown map `{case}`"))?]
            };
            Ok(cli::maps_suite(&cases))
        }
        Command::Bialgebra { r, params } => {
            let overrides = match (&params.z1, &params.z2, &params.lambda) {
                (None, None, None) => None,
                (z1, z2, lambda) => Some((
                    z1.as_deref().map(parse_rational).transpose()?.unwrap_or_else(|| {
                        Scalar::sym(qschrod::scalar::Symbol::Z1)
                    }),
                    z2.as_deref().map(parse_rational).transpose()?.unwrap_or_else(|| {
                        Scalar::sym(qschrod::scalar::Symbol::Z2)
                    }),
                    lambda.as_deref().map(parse_rational).transpose()?.unwrap_or_else(|| {
                        Scalar::sym(qschrod::scalar::Symbol::Lambda)
                    }),
                )),
            };
            let choices = if r == "all" {
                vec![RChoice::Rs, RChoice::Rt, RChoice::Sl2, RChoice::Sa]
            } else {
                vec![RChoice::from_label(r).ok_or_else(|| format!("unknown r-matrix `{r}`"))?]
            };
            let mut records = Vec::new();
            for choice in choices {
                let p = if choice == RChoice::Sa { overrides.clone() } else { None };
                records.extend(cli::bialg_suite(choice, p));
            }
            Ok(records)
        }
        Command::Lattice { family, nx, nt, sigma, tau, m, tol, dump } => {
            let families = if family == "all" {
                Family::ALL.to_vec()
            } else {
                vec![Family::from_label(family)
                    .ok_or_else(|| format!("unknown family `{family}`"))?]
            };
            let mut records = Vec::new();
            for f in &families {
                let mut cfg = LatticeConfig::defaults(*f);
                if let Some(v) = nx {
                    cfg.nx = *v;
                }
                if let Some(v) = nt {
                    cfg.nt = *v;
                }
                if let Some(v) = sigma {
                    cfg.sigma = *v;
                }
                if let Some(v) = tau {
                    cfg.tau = *v;
                }
                if let Some(v) = m {
                    cfg.m = *v;
                }
                if let Some(v) = tol {
                    cfg.tol = *v;
                }
                if let Some(path) = dump {
                    let text = cli::run::lattice_dump(&cfg).map_err(|e| e.to_string())?;
                    std::fs::write(path, text).map_err(|e| e.to_string())?;
                }
                records.extend(cli::lattice_suite(&cfg));
            }
            Ok(records)
        }
        Command::Parse { expr } => match cli::parse_expr(expr) {
            Ok(e) => {
                println!("{e}");
                Ok(vec![CheckRecord::flag("cli", "parse", format!("parse `{expr}`"), true)])
            }
            Err(e) => Err(e.to_string()),
        },
        Command::All => Ok(cli::run_all()),
        Command::List => {
            use std::io::Write;
            let mut out = String::new();
            for entry in qschrod::tables::manifest() {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\n",
                    entry.kind, entry.case, entry.key, entry.summary
                ));
            }
            // Tolerate a closed pipe (e.g. `qschrod list | head`).
            let _ = std::io::stdout().write_all(out.as_bytes());
            Ok(vec![CheckRecord::flag("tables", "list", "manifest emitted", true)])
        }
    }
}
