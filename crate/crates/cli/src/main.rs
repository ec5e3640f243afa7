//! Command-line surface for the Hecke polynomial pipeline: polynomial
//! computation, the zero-location certification run, Poincare and mock
//! coefficient values, and q-expansion utilities.
//!
//! Exit codes: 0 success, 2 user error (bad spec or parameters),
//! 3 internal invariant failure, 4 contracted theorem check failed.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use hecke_zeros::arcbounds::{
    c_constant, min_valid_n, p_bound, q_bound, r_bound, theta_grid, ArcEvaluator, BoundReport,
    ThetaRow,
};
use hecke_zeros::heckepoly::{hecke_polynomial_with_precision, HeckePolyError};
use hecke_zeros::modforms::{b_exp, cusp_eigenform, divisor_polynomial, eisenstein, faber};
use hecke_zeros::qseries::{rational_string, rational_to_f64};
use hecke_zeros::roots::{roots_on_arc, RootRecord, RootsSummary};
use hecke_zeros::specialfn::{
    mock_delta_coeff, poincare_cminus, poincare_const, poincare_cplus, Real,
};
use hecke_zeros::{QSeries, RPoly, WeakEigenformSpec};

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hecke-zeros",
    version,
    about = "Hecke polynomials of weak Hecke eigenforms and the zeros on the fundamental arc"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Hecke polynomial P_n for an eigenform spec
    HeckePoly(HeckePolyArgs),
    /// Certify zero location: bounds, sign changes, Sturm roots, discrepancy
    Verify(VerifyArgs),
    /// Maass-Poincare series coefficients c+, c- and the constant term
    Poincare(PoincareArgs),
    /// Faber polynomial J_n
    Faber(FaberArgs),
    /// Eisenstein series q-expansion
    Eisenstein(EisensteinArgs),
    /// Divisor polynomial of a weight-k holomorphic form
    DivisorPoly(DivisorPolyArgs),
    /// Coefficient of the mock Delta function via its Rademacher-type series
    MockDelta(MockDeltaArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct OutputOpts {
    /// Write output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; defaults to json (faber and divisor-poly default to text)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct NSelect {
    /// Operator index n (at least 2)
    #[arg(long, value_parser = clap::value_parser!(i64).range(2..))]
    n: Option<i64>,
    /// Inclusive index range A..B
    #[arg(long = "n-range", value_parser = parse_range, conflicts_with = "n")]
    n_range: Option<(i64, i64)>,
}

#[derive(Args)]
struct HeckePolyArgs {
    /// Path to an eigenform spec JSON file, or the built-in alias R
    #[arg(long)]
    form: String,
    #[command(flatten)]
    select: NSelect,
    /// q-expansion working precision (defaults to the minimum required)
    #[arg(long)]
    precision: Option<i64>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct VerifyArgs {
    /// Path to an eigenform spec JSON file, or the built-in alias R
    #[arg(long)]
    form: String,
    #[command(flatten)]
    select: NSelect,
    /// Number of interior theta grid points
    #[arg(long, default_value_t = 200)]
    grid: usize,
    /// Series precision for arc evaluation
    #[arg(long)]
    precision: Option<i64>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct PoincareArgs {
    /// Weight k (even; k = 2 gives the weight-0 analogue)
    #[arg(long)]
    k: i64,
    /// Principal-part index l >= 1
    #[arg(long, default_value_t = 1)]
    l: i64,
    /// Coefficient index n >= 1
    #[arg(long)]
    n: i64,
    /// Truncation point of the sum over c
    #[arg(long, default_value_t = 10_000)]
    cmax: i64,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct FaberArgs {
    /// Polynomial index n >= 0
    #[arg(long)]
    n: usize,
    /// Series precision carried alongside the reduction
    #[arg(long)]
    precision: Option<i64>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct EisensteinArgs {
    /// Even weight k >= 4
    #[arg(long)]
    k: u32,
    /// Number of q-expansion coefficients
    #[arg(long, default_value_t = 16)]
    precision: i64,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct DivisorPolyArgs {
    /// Weight of the form
    #[arg(long)]
    k: u32,
    /// Path to a q-expansion JSON file; defaults to the built-in cusp
    /// eigenform of weight k
    #[arg(long)]
    series: Option<PathBuf>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct MockDeltaArgs {
    /// Coefficient index n >= 1
    #[arg(long)]
    n: i64,
    /// Truncation point of the sum over c
    #[arg(long, default_value_t = 10_000)]
    cmax: i64,
    #[command(flatten)]
    output: OutputOpts,
}

/// Failure carrying the exit-code contract.
enum Failure {
    /// Bad spec or parameters: exit 2.
    User(anyhow::Error),
    /// Internal invariant broken: exit 3.
    Internal(anyhow::Error),
    /// A contracted theorem check failed: exit 4.
    Contract(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::User(_) => 2,
            Failure::Internal(_) => 3,
            Failure::Contract(_) => 4,
        }
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: i64 = a.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if a < 2 {
        return Err("range must start at 2 or above".into());
    }
    if b < a {
        return Err("range upper bound below lower bound".into());
    }
    Ok((a, b))
}

impl NSelect {
    fn values(&self) -> Result<Vec<i64>, Failure> {
        match (self.n, self.n_range) {
            (Some(n), None) => Ok(vec![n]),
            (None, Some((a, b))) => Ok((a..=b).collect()),
            (None, None) => Err(Failure::User(anyhow!("one of --n or --n-range is required"))),
            (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
        }
    }
}

fn load_form(arg: &str) -> Result<WeakEigenformSpec, Failure> {
    if arg == "R" {
        return Ok(WeakEigenformSpec::builtin_r());
    }
    let text = fs::read_to_string(arg)
        .with_context(|| format!("cannot read spec file {arg}"))
        .map_err(Failure::User)?;
    serde_json::from_str(&text)
        .with_context(|| format!("invalid eigenform spec in {arg}"))
        .map_err(Failure::User)
}

fn classify_hecke(e: HeckePolyError) -> Failure {
    if matches!(e, HeckePolyError::DegreeMismatch { .. }) {
        Failure::Internal(anyhow!(e))
    } else {
        Failure::User(anyhow!(e))
    }
}

fn emit(output: &OutputOpts, content: &str) -> Result<(), Failure> {
    let content = if content.ends_with('\n') {
        content.to_string()
    } else {
        format!("{content}\n")
    };
    match &output.out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::User),
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .context("stdout")
                .map_err(Failure::Internal)
        }
    }
}

fn poly_csv(rows: &[(i64, &RPoly)]) -> String {
    let mut out = String::from("n,index,coefficient\n");
    for (n, poly) in rows {
        for (i, c) in poly.coeffs().iter().enumerate() {
            out.push_str(&format!("{n},{i},{}\n", rational_string(c)));
        }
    }
    out
}

fn cmd_hecke_poly(args: HeckePolyArgs) -> Result<(), Failure> {
    let spec = load_form(&args.form)?;
    let ns = args.select.values()?;
    let results: Vec<_> = ns
        .par_iter()
        .map(|&n| {
            let b = b_exp(spec.k() - 2);
            let floor = spec.m() * n + b + 16;
            let precision = args.precision.unwrap_or(floor).max(floor);
            hecke_polynomial_with_precision(&spec, n, precision)
                .map(|r| (n, r))
                .map_err(classify_hecke)
        })
        .collect::<Result<_, _>>()?;
    let format = args.output.format.unwrap_or(Format::Json);
    let content = match format {
        Format::Json => {
            if let [(_, only)] = results.as_slice() {
                serde_json::to_string_pretty(only).expect("serialize")
            } else {
                let items: Vec<_> = results
                    .iter()
                    .map(|(n, r)| {
                        let mut v = serde_json::to_value(r).expect("serialize");
                        v.as_object_mut().expect("object").insert("n".into(), json!(n));
                        v
                    })
                    .collect();
                serde_json::to_string_pretty(&items).expect("serialize")
            }
        }
        Format::Csv => poly_csv(
            &results.iter().map(|(n, r)| (*n, &r.poly)).collect::<Vec<_>>(),
        ),
        Format::Text => results
            .iter()
            .map(|(n, r)| format!("P_{n} = {}", r.poly))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(&args.output, &content)
}

/// Everything verify reports for a single n.
struct VerifyOutcome {
    n: i64,
    contracted: bool,
    passed: bool,
    max_gap: f64,
    report: BoundReport,
    expected_signs: usize,
    found_signs: usize,
    samples: Vec<hecke_zeros::arcbounds::ArcSample>,
    records: Vec<RootRecord>,
    summary: RootsSummary,
}

fn verify_one(
    spec: &WeakEigenformSpec,
    n: i64,
    grid: usize,
    precision: i64,
    n_min: i64,
) -> Result<VerifyOutcome, Failure> {
    let evaluator =
        ArcEvaluator::new(spec, n, precision).map_err(|e| Failure::Internal(anyhow!(e)))?;
    let mn = spec.m() * n;
    let k = spec.k();
    let mut samples = Vec::with_capacity(grid);
    let mut per_theta = Vec::with_capacity(grid);
    let mut max_gap = 0.0f64;
    for theta in theta_grid(grid) {
        let sample = evaluator.sample(theta).map_err(|e| Failure::Internal(anyhow!(e)))?;
        max_gap = max_gap.max(sample.gap);
        per_theta.push(ThetaRow {
            theta,
            qbound: q_bound(mn, k, theta),
            pbound: p_bound(mn, k, theta),
            rbound: r_bound(spec, n, theta),
            lhs_gap: sample.gap,
        });
        samples.push(sample);
    }
    let signs = evaluator
        .verify_sign_changes()
        .map_err(|e| Failure::Internal(anyhow!(e)))?;
    let (records, summary) =
        roots_on_arc(spec, n, 1e-9).map_err(|e| Failure::Internal(anyhow!(e)))?;
    let contracted = n >= n_min.max(7);
    let passed = max_gap < 2.0
        && signs.found == signs.expected
        && summary.count_in_interval == summary.degree
        && summary.all_simple;
    Ok(VerifyOutcome {
        n,
        contracted,
        passed,
        max_gap,
        report: BoundReport {
            c_f: rational_to_f64(&c_constant(spec)),
            n_min,
            per_theta,
        },
        expected_signs: signs.expected,
        found_signs: signs.found,
        samples,
        records,
        summary,
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let spec = load_form(&args.form)?;
    let ns = args.select.values()?;
    let precision = args.precision.unwrap_or(ArcEvaluator::DEFAULT_PRECISION);
    let n_min = min_valid_n(&spec);
    let outcomes: Vec<VerifyOutcome> = ns
        .par_iter()
        .map(|&n| verify_one(&spec, n, args.grid, precision, n_min))
        .collect::<Result<_, _>>()?;
    let format = args.output.format.unwrap_or(Format::Json);
    let content = match format {
        Format::Json => {
            let items: Vec<_> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "n": o.n,
                        "contracted": o.contracted,
                        "passed": o.passed,
                        "max_gap": o.max_gap,
                        "sign_changes": {"expected": o.expected_signs, "found": o.found_signs},
                        "roots": o.summary,
                        "bound_report": o.report,
                    })
                })
                .collect();
            if let [only] = items.as_slice() {
                serde_json::to_string_pretty(only).expect("serialize")
            } else {
                serde_json::to_string_pretty(&items).expect("serialize")
            }
        }
        Format::Csv => {
            let mut out = String::from("n,theta,j,re_hstar,f,gap\n");
            for o in &outcomes {
                for s in &o.samples {
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        o.n, s.theta, s.j_val, s.re_hstar, s.f_val, s.gap
                    ));
                }
            }
            out.push('\n');
            out.push_str("n,root_index,x_lo,x_hi,x_refined,theta\n");
            for o in &outcomes {
                for r in &o.records {
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        o.n,
                        r.index,
                        rational_to_f64(&r.interval.lo),
                        rational_to_f64(&r.interval.hi),
                        r.refined,
                        r.theta
                    ));
                }
            }
            out
        }
        Format::Text => outcomes
            .iter()
            .map(|o| {
                format!(
                    "n={} contracted={} passed={} max_gap={:.6} roots={}/{} signs={}/{} discrepancy={:.6}",
                    o.n,
                    o.contracted,
                    o.passed,
                    o.max_gap,
                    o.summary.count_in_interval,
                    o.summary.degree,
                    o.found_signs,
                    o.expected_signs,
                    o.summary.discrepancy_theta
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(&args.output, &content)?;
    if let Some(bad) = outcomes.iter().find(|o| o.contracted && !o.passed) {
        return Err(Failure::Contract(format!(
            "contracted checks failed at n = {} (max_gap {:.4}, signs {}/{}, roots {}/{})",
            bad.n, bad.max_gap, bad.found_signs, bad.expected_signs,
            bad.summary.count_in_interval, bad.summary.degree
        )));
    }
    Ok(())
}

fn real_json(r: &Real) -> serde_json::Value {
    json!({"value": r.value, "abs_err": r.abs_err})
}

fn cmd_poincare(args: PoincareArgs) -> Result<(), Failure> {
    let user = |e| Failure::User(anyhow!("{e}"));
    let cplus = poincare_cplus(args.k, args.l, args.n, args.cmax).map_err(user)?;
    let cminus = poincare_cminus(args.k, args.l, args.n, args.cmax).map_err(user)?;
    let constant = poincare_const(args.k, args.l, args.cmax).map_err(user)?;
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&json!({
            "k": args.k,
            "l": args.l,
            "n": args.n,
            "cmax": args.cmax,
            "cplus": real_json(&cplus),
            "cminus": real_json(&cminus),
            "constant": real_json(&constant),
        }))
        .expect("serialize"),
        Format::Csv => format!(
            "kind,value,abs_err\ncplus,{},{}\ncminus,{},{}\nconstant,{},{}\n",
            cplus.value, cplus.abs_err, cminus.value, cminus.abs_err, constant.value,
            constant.abs_err
        ),
        Format::Text => format!(
            "c+({}) = {} +- {}\nc-({}) = {} +- {}\nconstant = {} +- {}",
            args.n, cplus.value, cplus.abs_err, args.n, cminus.value, cminus.abs_err,
            constant.value, constant.abs_err
        ),
    };
    emit(&args.output, &content)
}

fn cmd_faber(args: FaberArgs) -> Result<(), Failure> {
    let precision = args.precision.unwrap_or(2).max(2);
    let (_, poly) = faber(args.n, precision);
    let content = match args.output.format.unwrap_or(Format::Text) {
        Format::Text => format!("{poly}"),
        Format::Json => serde_json::to_string_pretty(&json!({
            "n": args.n,
            "coeffs": poly,
        }))
        .expect("serialize"),
        Format::Csv => poly_csv(&[(args.n as i64, &poly)]),
    };
    emit(&args.output, &content)
}

fn series_csv(series: &QSeries) -> String {
    let mut out = String::from("exponent,coefficient\n");
    for e in series.valuation()..=series.precision() {
        let c = series.coeff(e).expect("in range");
        out.push_str(&format!("{e},{}\n", rational_string(&c)));
    }
    out
}

fn cmd_eisenstein(args: EisensteinArgs) -> Result<(), Failure> {
    if args.precision < 1 {
        return Err(Failure::User(anyhow!("precision must be at least 1")));
    }
    let series = eisenstein(args.k, args.precision).map_err(|e| Failure::User(anyhow!(e)))?;
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&series).expect("serialize"),
        Format::Csv | Format::Text => series_csv(&series),
    };
    emit(&args.output, &content)
}

fn cmd_divisor_poly(args: DivisorPolyArgs) -> Result<(), Failure> {
    let required = 2 * b_exp(args.k) + 1;
    let series = match &args.series {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read series file {}", path.display()))
                .map_err(Failure::User)?;
            let series: QSeries = serde_json::from_str(&text)
                .with_context(|| format!("invalid q-expansion in {}", path.display()))
                .map_err(Failure::User)?;
            if series.precision() < required {
                return Err(Failure::User(anyhow!(
                    "series precision {} is below the required {required} for weight {}",
                    series.precision(),
                    args.k
                )));
            }
            series
        }
        None => cusp_eigenform(args.k, required.max(4)).map_err(|e| Failure::User(anyhow!(e)))?,
    };
    let poly = divisor_polynomial(&series, args.k).map_err(|e| Failure::User(anyhow!(e)))?;
    let content = match args.output.format.unwrap_or(Format::Text) {
        Format::Text => format!("{poly}"),
        Format::Json => serde_json::to_string_pretty(&json!({
            "k": args.k,
            "coeffs": poly,
        }))
        .expect("serialize"),
        Format::Csv => poly_csv(&[(args.k as i64, &poly)]),
    };
    emit(&args.output, &content)
}

fn cmd_mock_delta(args: MockDeltaArgs) -> Result<(), Failure> {
    if args.n < 1 || args.cmax < 1 {
        return Err(Failure::User(anyhow!("n and cmax must be at least 1")));
    }
    let value = mock_delta_coeff(args.n, args.cmax).map_err(|e| Failure::User(anyhow!("{e}")))?;
    let content = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&json!({
            "n": args.n,
            "cmax": args.cmax,
            "value": value.value,
            "abs_err": value.abs_err,
        }))
        .expect("serialize"),
        Format::Csv => format!("n,value,abs_err\n{},{},{}\n", args.n, value.value, value.abs_err),
        Format::Text => format!("a({}) = {} +- {}", args.n, value.value, value.abs_err),
    };
    emit(&args.output, &content)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::HeckePoly(args) => cmd_hecke_poly(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Poincare(args) => cmd_poincare(args),
        Command::Faber(args) => cmd_faber(args),
        Command::Eisenstein(args) => cmd_eisenstein(args),
        Command::DivisorPoly(args) => cmd_divisor_poly(args),
        Command::MockDelta(args) => cmd_mock_delta(args),
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("HECKE_ZEROS_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::User(e) => eprintln!("error: {e:#}"),
                Failure::Internal(e) => eprintln!("internal error: {e:#}"),
                Failure::Contract(msg) => eprintln!("verification failed: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
