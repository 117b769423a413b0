//! The `widthlab` command line.
//!
//! Exit codes: `0` success, `2` when a width exponent is not determined (`NoGap`,
//! `NonPositive`, `NoCaseApplies`), `1` on any error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use widthlab_core::ball::{ball_width_order, BallWidthQuery};
use widthlab_core::intersection::{InterpTarget, TwoBallSpec};
use widthlab_core::lattice::default_grid;
use widthlab_core::oracle::{inclusion_check, pietsch_stesin_check};
use widthlab_core::sobolev::{sobolev_width_exponent, SobolevSpec};
use widthlab_core::{Exponent, ExponentParams};

use crate::config::{load_object, merge};
use crate::report::{status_exit_code, BallReport, CliError, ExponentReport, IntersectReport, SobolevRun};
use crate::run::{lattice_report, rows_csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "widthlab", version, about = "Order estimates for Kolmogorov widths of balls, ball intersections and weighted Sobolev classes")]
pub struct Cli {
    /// Output format.
    #[arg(long, short = 'o', value_enum, default_value_t = Format::Json, global = true)]
    pub output: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Width exponent theta* of the exponent tuple.
    Exponent(ParamFlags),
    /// Order of d_n(B_p^N, l_q^N).
    Ball(BallFlags),
    /// Order of d_n(nu0 B_p0 ∩ nu1 B_p1, l_q^N) and its regime.
    Intersect(TwoBallFlags),
    /// Lattice sums S(n) over a dyadic grid and their log-log slope.
    Lattice(LatticeFlags),
    /// Numerical checks in small dimensions.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Map a weighted Sobolev example onto exponents and compute theta*.
    Sobolev(SobolevFlags),
}

#[derive(Debug, Args)]
pub struct ParamFlags {
    /// JSON file with any of the keys below; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub p0: Option<String>,
    #[arg(long)]
    pub p1: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Lattice scale k* (default 1).
    #[arg(long)]
    pub k: Option<String>,
}

const PARAM_ALIASES: &[(&str, &str)] =
    &[("s", "s_star"), ("gamma", "gamma_star"), ("mu", "mu_star"), ("alpha", "alpha_star"), ("k", "k_star")];

impl ParamFlags {
    fn params(&self) -> Result<ExponentParams, CliError> {
        let p: ExponentParams = merge(
            self.config.as_deref(),
            PARAM_ALIASES,
            &[
                ("p0", &self.p0),
                ("p1", &self.p1),
                ("q", &self.q),
                ("s_star", &self.s),
                ("gamma_star", &self.gamma),
                ("mu_star", &self.mu),
                ("alpha_star", &self.alpha),
                ("k_star", &self.k),
            ],
        )?;
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Args)]
pub struct BallFlags {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long = "N")]
    pub dim: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
}

#[derive(Debug, Args)]
pub struct TwoBallFlags {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub nu0: Option<String>,
    #[arg(long)]
    pub nu1: Option<String>,
    #[arg(long)]
    pub p0: Option<String>,
    #[arg(long)]
    pub p1: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long = "N")]
    pub dim: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
}

impl TwoBallFlags {
    fn spec(&self, default_n: Option<u64>) -> Result<TwoBallSpec, CliError> {
        let n = match (&self.n, default_n) {
            (None, Some(d)) if !has_key(self.config.as_deref(), "n")? => Some(d.to_string()),
            _ => self.n.clone(),
        };
        merge(
            self.config.as_deref(),
            &[],
            &[
                ("nu0", &self.nu0),
                ("nu1", &self.nu1),
                ("p0", &self.p0),
                ("p1", &self.p1),
                ("q", &self.q),
                ("N", &self.dim),
                ("n", &n),
            ],
        )
    }
}

fn has_key(config: Option<&Path>, key: &str) -> Result<bool, CliError> {
    Ok(load_object(config)?.contains_key(key))
}

#[derive(Debug, Args)]
pub struct LatticeFlags {
    #[command(flatten)]
    pub params: ParamFlags,
    /// Comma-separated list of n; defaults to 2^8, ..., 2^18.
    #[arg(long = "n-grid", value_delimiter = ',')]
    pub n_grid: Option<Vec<u64>>,
    /// With `--output csv`, also write the fit summary as JSON here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Exact deviation of B_p (p = 1 or inf) from coordinate and random subspaces.
    PietschStesin(PietschFlags),
    /// Sampled check that the intersection lies in the interpolated ball.
    Inclusion(InclusionFlags),
}

#[derive(Debug, Args)]
pub struct PietschFlags {
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub q: String,
    #[arg(long = "N")]
    pub dim: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Q,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Args)]
pub struct InclusionFlags {
    #[command(flatten)]
    pub spec: TwoBallFlags,
    #[arg(long, value_enum, default_value_t = TargetArg::Q)]
    pub target: TargetArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SobolevFlags {
    /// JSON spec with an "example" key: john_power, log_weight or growing.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub example: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub p0: Option<String>,
    #[arg(long)]
    pub p1: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long = "mu-log", allow_hyphen_values = true)]
    pub mu_log: Option<String>,
    #[arg(long = "alpha-log", allow_hyphen_values = true)]
    pub alpha_log: Option<String>,
    #[arg(long = "nu-log", allow_hyphen_values = true)]
    pub nu_log: Option<String>,
    #[arg(long = "gamma-log")]
    pub gamma_log: Option<String>,
}

/// What a command prints on stdout and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Flattens a JSON object into one CSV header and one row, with dotted keys.
fn flat_csv<T: Serialize>(v: &T) -> Result<String, CliError> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            Value::Null => out.push((prefix.to_string(), String::new())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut cells = Vec::new();
    walk("", &serde_json::to_value(v)?, &mut cells);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(cells.iter().map(|(k, _)| k))?;
    w.write_record(cells.iter().map(|(_, v)| v))?;
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Generic rendering; text falls back to pretty JSON for records without a text form.
fn render<T: Serialize>(fmt: Format, v: &T) -> Result<String, CliError> {
    match fmt {
        Format::Json | Format::Text => json(v),
        Format::Csv => flat_csv(v),
    }
}

fn parse_exponent(raw: &str) -> Result<Exponent, CliError> {
    raw.parse().map_err(CliError::Core)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let fmt = cli.output;
    let ok = |stdout| Ok(Outcome { stdout, code: 0 });
    match &cli.command {
        Command::Exponent(flags) => {
            let report = ExponentReport::build(&flags.params()?)?;
            let stdout = match fmt {
                Format::Text => report.to_text(),
                _ => render(fmt, &report)?,
            };
            Ok(Outcome { stdout, code: status_exit_code(report.status) })
        }
        Command::Ball(flags) => {
            let q: BallWidthQuery = merge(
                flags.config.as_deref(),
                &[],
                &[("p", &flags.p), ("q", &flags.q), ("N", &flags.dim), ("n", &flags.n)],
            )?;
            let report = BallReport::new(q, ball_width_order(&q)?);
            match fmt {
                Format::Text => ok(format!("value: {}\nexact: {}\n", report.value, report.exact)),
                _ => ok(render(fmt, &report)?),
            }
        }
        Command::Intersect(flags) => {
            let report = IntersectReport::build(&flags.spec(None)?)?;
            match fmt {
                Format::Text => ok(format!(
                    "value: {}\nregime: {:?}\ncase: {}\nswapped: {}\n",
                    report.value, report.regime.tag, report.regime.case, report.regime.swapped
                )),
                _ => ok(render(fmt, &report)?),
            }
        }
        Command::Lattice(flags) => {
            let params = flags.params.params()?;
            let grid = flags.n_grid.clone().unwrap_or_else(default_grid);
            let report = lattice_report(&params, &grid)?;
            match fmt {
                Format::Csv => {
                    if let Some(path) = &flags.summary {
                        std::fs::write(path, json(&report.fit)?)
                            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    }
                    ok(rows_csv(&report.rows)?)
                }
                Format::Text => ok(format!(
                    "{}slope: {}\nr_squared: {}\ntheta_star: {}\nrelative_error: {}\n",
                    rows_csv(&report.rows)?,
                    report.fit.slope,
                    report.fit.r_squared,
                    report.fit.theta_star,
                    report.fit.relative_error
                )),
                Format::Json => ok(json(&report)?),
            }
        }
        Command::Oracle(OracleCommand::PietschStesin(f)) => {
            let r = pietsch_stesin_check(parse_exponent(&f.p)?, parse_exponent(&f.q)?, f.dim, f.n, f.trials, f.seed)?;
            Ok(Outcome { stdout: render(fmt, &r)?, code: if r.passed { 0 } else { 1 } })
        }
        Command::Oracle(OracleCommand::Inclusion(f)) => {
            let spec = f.spec.spec(Some(0))?;
            let target = match f.target {
                TargetArg::Q => InterpTarget::Q,
                TargetArg::Two => InterpTarget::Two,
            };
            ok(render(fmt, &inclusion_check(&spec, target, f.samples, f.seed)?)?)
        }
        Command::Sobolev(f) => {
            let spec: SobolevSpec = merge(
                f.config.as_deref(),
                &[("lambda", "lambda_w"), ("theta", "theta_h")],
                &[
                    ("example", &f.example),
                    ("d", &f.d),
                    ("r", &f.r),
                    ("p0", &f.p0),
                    ("p1", &f.p1),
                    ("q", &f.q),
                    ("beta", &f.beta),
                    ("sigma", &f.sigma),
                    ("lambda_w", &f.lambda),
                    ("theta_h", &f.theta),
                    ("mu_log", &f.mu_log),
                    ("alpha_log", &f.alpha_log),
                    ("nu_log", &f.nu_log),
                    ("gamma_log", &f.gamma_log),
                ],
            )?;
            let report = sobolev_width_exponent(&spec)?;
            let exponent = ExponentReport::build(&report.params)?;
            let code = status_exit_code(report.result.status);
            let stdout = match fmt {
                Format::Text => format!(
                    "s_star: {}\ngamma_star: {}\nmu_star: {}\nalpha_star: {}\n{}classic_region: {}\nsame_order_via_single_class: {}\n",
                    report.params.s_star,
                    report.params.gamma_star,
                    report.params.mu_star,
                    report.params.alpha_star,
                    exponent.to_text(),
                    report.classic_region.map_or("-".into(), |b| b.to_string()),
                    report.same_order_via_single_class.map_or("-".into(), |b| b.to_string()),
                ),
                _ => render(fmt, &SobolevRun { spec, report, exponent })?,
            };
            Ok(Outcome { stdout, code })
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn main_with_args<I, T>(args: I) -> (Outcome, Option<String>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (Outcome { stdout: String::new(), code }, Some(e.to_string()));
        }
    };
    match run(&cli) {
        Ok(o) => (o, None),
        Err(e) => {
            let rep = crate::report::ErrorReport::from(&e);
            let msg = serde_json::to_string(&rep).unwrap_or_else(|_| e.to_string());
            (Outcome { stdout: String::new(), code: 1 }, Some(msg))
        }
    }
}
