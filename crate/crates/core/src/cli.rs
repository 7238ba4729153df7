//! Command-line front end. Exit codes: 0 when every requested check
//! passes, 1 when a check fails, 2 on invalid input or usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::certificates::{
    arithmetic_growth, check_resummation, check_rho1, criterion_report, growth_report,
    phi_factorization, predicted_valuation, required_tier, sample_points, valuation_certificate,
    verify_integrality, Check, Tier, GUARD_DIGITS,
};
use crate::constants::{constants_report, constants_table, table1};
use crate::error::{invalid, Error, Result};
use crate::forms::{admissible_index, construction_constants, make_params, partial_fractions, FormTable, FormTableJson};
use crate::kernel::verify_kernel;
use crate::zeta::zeta_p;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "zetacert", version, about = "Exact linear forms in 1 and p-adic zeta values")]
pub struct Cli {
    /// Seed for every randomized choice (sample points, kernel suite).
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Omit timings so that identical inputs give byte-identical output.
    #[arg(long, global = true)]
    pub stable_output: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce the table of c_p values.
    Table1,
    /// CSV of varpi_p, c_p, greatest odd integer, minimal s and the bound check.
    Constants(ConstantsArgs),
    /// p-adic zeta value as base-p digits, least significant first.
    Zeta(ZetaArgs),
    /// Build or verify a partial-fraction table.
    #[command(subcommand)]
    Form(FormCommand),
    /// Certify the p-adic valuation of S_n for n = n(N).
    CertifyValuation(CertifyArgs),
    /// Identity suite for the Bernoulli, Volkenborn and Teichmüller layers.
    VerifyKernel(KernelArgs),
    /// Size measurements of rho_i, d_n and Phi_n.
    Growth(GrowthArgs),
    /// Sign of the criterion exponent lambda(p, s).
    Criterion(CriterionArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// All primes 5 <= p <= PMAX.
    #[arg(long)]
    pub pmax: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub i: i64,
    #[arg(long)]
    pub prec: i64,
}

#[derive(Debug, Subcommand)]
pub enum FormCommand {
    Build(BuildArgs),
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: u64,
    #[arg(long)]
    pub n: u64,
    /// Only require deg R_n <= -2 and p n > (p+s)^2.
    #[arg(long)]
    pub relaxed: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Comma-separated subset of integrality, rho1, resum.
    #[arg(long, value_delimiter = ',', default_value = "integrality,rho1,resum")]
    pub checks: Vec<String>,
    /// Also write the report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: u64,
    #[arg(long = "N")]
    pub big_n: u32,
    /// Working precision; defaults to the predicted valuation plus guard digits.
    #[arg(long)]
    pub prec: Option<i64>,
    #[arg(long, value_enum, default_value = "fast")]
    pub tier: Tier,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub s: u64,
    #[arg(long, value_delimiter = ',', default_value = "121,130,140")]
    pub n: Vec<u64>,
    /// n used for d_n and Phi_n.
    #[arg(long, default_value_t = 10_000)]
    pub arith_n: u64,
}

#[derive(Debug, Args)]
pub struct CriterionArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: u64,
}

/// Parses `args` and runs the command, writing to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return EXIT_INVALID;
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_)
        | Error::Domain(_)
        | Error::Pole(_)
        | Error::Construction(_)
        | Error::Hypothesis(_)
        | Error::NotAdmissible(_) => EXIT_INVALID,
        Error::PrecisionShortfall { .. } | Error::Evaluation { .. } | Error::Internal(_) => EXIT_FAIL,
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    invalid(format!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Internal(format!("write failed: {e}")))
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_err(p, e)),
        None => emit(out, &text),
    }
}

fn verdict(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Table1 => {
            let rows = table1()?;
            emit(out, &format!("{:>4} {:>10} {:>10} {:>5} {:>5}  verdict\n", "p", "c_p", "computed", "odd", "got"))?;
            for r in &rows {
                emit(
                    out,
                    &format!(
                        "{:>4} {:>10} {:>10} {:>5} {:>5}  {}\n",
                        r.p,
                        r.expected_cp,
                        r.computed_cp,
                        r.expected_odd,
                        r.computed_odd,
                        if r.matches { "match" } else { "MISMATCH" }
                    ),
                )?;
            }
            Ok(verdict(rows.iter().all(|r| r.matches)))
        }
        Command::Constants(a) => {
            let reports = match (a.p, a.pmax) {
                (Some(p), _) => vec![constants_report(p)?],
                (None, Some(m)) => constants_table(m)?,
                _ => return Err(invalid("give --p or --pmax")),
            };
            emit(out, "p,varpi,c_p,odd,s_min,bounds_ok\n")?;
            for r in &reports {
                emit(
                    out,
                    &format!(
                        "{},{},{},{},{},{}\n",
                        r.p,
                        r.varpi.to_decimal(30),
                        r.c_p.to_decimal(30),
                        r.greatest_odd_le_cp,
                        r.s_min,
                        r.bounds_ok
                    ),
                )?;
            }
            Ok(verdict(reports.iter().all(|r| r.bounds_ok)))
        }
        Command::Zeta(a) => {
            let z = zeta_p(a.p, a.i, a.prec)?;
            let digits = z.unit_digits();
            let sep = if a.p <= 10 { "" } else { "," };
            let text: Vec<String> = digits.iter().map(u64::to_string).collect();
            match z.valuation() {
                Some(v) => emit(out, &format!("valuation {v}\ndigits {}\n", text.join(sep)))?,
                None => emit(out, &format!("valuation >= {}\ndigits\n", a.prec))?,
            }
            Ok(EXIT_PASS)
        }
        Command::Form(FormCommand::Build(a)) => {
            let params = make_params(a.p, a.s, a.n, a.relaxed)?;
            let table = partial_fractions(&params)?;
            write_json(&table.to_json(!cli.stable_output), a.out.as_deref(), out)?;
            Ok(EXIT_PASS)
        }
        Command::Form(FormCommand::Verify(a)) => form_verify(cli, a, out),
        Command::CertifyValuation(a) => certify(cli, a, out),
        Command::VerifyKernel(a) => {
            let report = verify_kernel(cli.seed)?;
            emit(out, &format!("seed {}\n", cli.seed))?;
            emit(out, &report.render(a.verbose))?;
            Ok(verdict(report.passed()))
        }
        Command::Growth(a) => {
            let rows = growth_report(a.p, a.s, &a.n)?;
            emit(out, "n,log_max_rho_per_n,reference_plus_slack,within_slack,explicit_bound_per_n,explicit_bound_holds\n")?;
            for r in &rows {
                emit(
                    out,
                    &format!(
                        "{},{:.6},{:.6},{},{:.6},{}\n",
                        r.n,
                        r.log_max_rho_per_n,
                        r.reference + crate::certificates::GROWTH_SLACK,
                        r.within_slack,
                        r.explicit_bound_per_n,
                        r.explicit_bound_holds
                    ),
                )?;
            }
            let g = arithmetic_growth(a.p, a.arith_n)?;
            emit(
                out,
                &format!(
                    "log_lcm_per_n {:.6} in [0.9, 1.1]: {}\nlog_phi_per_n {:.6} vs varpi {:.6}: {}\n",
                    g.log_lcm_per_n, g.lcm_in_range, g.log_phi_per_n, g.varpi, g.phi_within_slack
                ),
            )?;
            let ok = rows.iter().all(|r| r.within_slack && r.explicit_bound_holds)
                && g.lcm_in_range
                && g.phi_within_slack;
            Ok(verdict(ok))
        }
        Command::Criterion(a) => {
            let r = criterion_report(a.p, a.s)?;
            write_json(&r, None, out)?;
            Ok(verdict(r.lambda_negative))
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    p: u64,
    s: u64,
    n: u64,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    violations: Vec<crate::certificates::Violation>,
}

fn form_verify(cli: &Cli, a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let text = std::fs::read_to_string(&a.input).map_err(|e| io_err(&a.input, e))?;
    let json: FormTableJson =
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", a.input.display())))?;
    let table = FormTable::from_json(&json)?;
    let mut checks = Vec::new();
    let mut violations = Vec::new();
    for name in &a.checks {
        match name.trim() {
            "integrality" => {
                let phi = phi_factorization(table.params.p, table.params.n)?;
                let rep = verify_integrality(&table, &phi)?;
                checks.extend(rep.checks);
                violations.extend(rep.violations);
            }
            "rho1" => checks.push(check_rho1(&table)),
            "resum" => checks.push(check_resummation(&table, &sample_points(cli.seed, 5))?),
            other => return Err(invalid(format!("unknown check {other:?}; use integrality, rho1, resum"))),
        }
    }
    for c in &checks {
        emit(out, &format!("{:<32} {:<4} {}\n", c.name, if c.pass { "pass" } else { "FAIL" }, c.detail))?;
    }
    let pass = checks.iter().all(|c| c.pass);
    if let Some(path) = &a.out {
        let p = &table.params;
        write_json(&VerifyReport { p: p.p, s: p.s, n: p.n, checks, violations }, Some(path), out)?;
    }
    Ok(verdict(pass))
}

fn certify(cli: &Cli, a: &CertifyArgs, out: &mut dyn Write) -> Result<i32> {
    let index = admissible_index(a.p, a.s, a.big_n)?.ok_or(Error::NotAdmissible(a.big_n))?;
    if required_tier(a.p, index.n) == Tier::Deep && a.tier == Tier::Fast {
        return Err(invalid(format!(
            "(p, s, N) = ({}, {}, {}) gives n = {}; this run needs --tier deep",
            a.p, a.s, a.big_n, index.n
        )));
    }
    let (_, m0) = construction_constants(a.p, a.s)?;
    let predicted = predicted_valuation(a.p, a.s, index.n, m0, a.big_n);
    let prec = a.prec.unwrap_or(predicted + GUARD_DIGITS + 1);
    let mut cert = valuation_certificate(a.p, a.s, a.big_n, prec)?;
    if cli.stable_output {
        cert.timings = None;
    }
    write_json(&cert, a.out.as_deref(), out)?;
    let failing: Vec<&str> = cert.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failing.is_empty() {
        eprintln!("pass: v_p(S_n) = {predicted} for n = {}", cert.n);
    } else {
        eprintln!("FAIL: {}", failing.join(", "));
    }
    Ok(verdict(cert.passed()))
}
