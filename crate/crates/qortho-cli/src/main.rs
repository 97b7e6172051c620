//! qortho: compute multiple (q-)Kravchuk orthogonal polynomials exactly and
//! machine-verify the identities they satisfy.
//!
//! Exit codes: 0 success, 1 check failure, 2 invalid input, 3 internal
//! inconsistency (solver and Rodrigues paths disagree).

mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{JobConfig, ResolvedJob};
use output::{emit, Document};
use qortho::analysis::{limit_scan, root_report};
use qortho::operators::MConvention;
use qortho::rodrigues::{rodrigues_classical, rodrigues_q};
use qortho::scalar::{decimal_string, to_f64, Rat};
use qortho::solver::{solve_type2_classical, solve_type2_q};
use qortho::verify::CheckOutcome;
use rayon::prelude::*;
use serde_json::json;

#[derive(Parser)]
#[command(name = "qortho", version, about = "exact multiple q-Kravchuk polynomial toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the monic polynomial and cross-check the Rodrigues path.
    Compute(CommonArgs),
    /// Run identity checks and report exact residuals.
    Verify(VerifyArgs),
    /// Isolate the polynomial's real zeros exactly.
    Zeros(ZerosArgs),
    /// Scan the q->1 limit against the classical family.
    Limit(LimitArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Polynomial family: q | classical
    #[arg(long)]
    family: Option<String>,
    /// Deformation parameter v = q^(1/2), as NUM or NUM/DEN
    #[arg(long)]
    v: Option<String>,
    /// Comma-separated component probabilities, e.g. 1/3,1/2
    #[arg(long)]
    p: Option<String>,
    /// Comma-separated beta parameters (default 1-p)
    #[arg(long)]
    beta: Option<String>,
    /// Lattice size parameter N
    #[arg(long = "N", alias = "big-n")]
    big_n: Option<String>,
    /// Comma-separated multi-index, e.g. 1,1
    #[arg(long)]
    index: Option<String>,
    /// Output format: json | csv
    #[arg(long)]
    format: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
    /// key=value config file; explicit flags win on conflict
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated checks: orthogonality|rodrigues|raising|lowering|diffeq|hypergeometric|recurrence|zeros|all
    #[arg(long)]
    checks: Option<String>,
    /// Difference-equation m-convention: operand-degree|fixed-norm|both
    #[arg(long)]
    convention: Option<String>,
}

#[derive(Args)]
struct ZerosArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Decimal digits for the reported approximations (>= 1)
    #[arg(long)]
    precision: Option<String>,
}

#[derive(Args)]
struct LimitArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Offset delta of the scan sequence v_k = 1 + delta/2^k, as NUM/DEN
    #[arg(long)]
    delta: Option<String>,
    /// Number of scan points
    #[arg(long)]
    steps: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Compute(common) => {
            let job = JobConfig::from_common(&common, &[])?.resolve()?;
            cmd_compute(job)
        }
        Command::Verify(args) => {
            let extra = [
                ("checks", args.checks.clone()),
                ("convention", args.convention.clone()),
            ];
            let job = JobConfig::from_common(&args.common, &extra)?.resolve()?;
            cmd_verify(job)
        }
        Command::Zeros(args) => {
            let extra = [("precision", args.precision.clone())];
            let job = JobConfig::from_common(&args.common, &extra)?.resolve()?;
            cmd_zeros(job)
        }
        Command::Limit(args) => {
            let extra = [
                ("delta", args.delta.clone()),
                ("steps", args.steps.clone()),
            ];
            let job = JobConfig::from_common(&args.common, &extra)?.resolve()?;
            cmd_limit(job)
        }
    }
}

fn coeff_strings(poly: &qortho::RatPoly) -> Vec<String> {
    if poly.is_zero() {
        return vec!["0".into()];
    }
    poly.coeffs().iter().map(|c| c.to_string()).collect()
}

fn cmd_compute(job: ResolvedJob) -> Result<i32, String> {
    let (solved, rod_poly, raw_leading, constant_g, basis) = match &job.family {
        config::Family::Q { params, index } => {
            let solved = solve_type2_q(params, index).map_err(|e| e.to_string())?;
            let rod = rodrigues_q(params, index).map_err(|e| e.to_string())?;
            (solved, rod.poly, rod.raw_leading, rod.constant_g, "X-monomial")
        }
        config::Family::Classical { params, index } => {
            let solved = solve_type2_classical(params, index).map_err(|e| e.to_string())?;
            let rod = rodrigues_classical(params, index).map_err(|e| e.to_string())?;
            (solved, rod.poly, rod.raw_leading, rod.constant_g, "x-monomial")
        }
    };
    let agree = solved == rod_poly;
    let result = json!({
        "degree": solved.degree().map_or(0, |d| d),
        "coefficients": coeff_strings(&solved),
        "basis": basis,
        "paths_agree": agree,
        "rodrigues_raw_leading": raw_leading.to_string(),
        "rodrigues_constant": constant_g.to_string(),
    });
    let mut csv = String::from("power,coefficient\n");
    for (k, c) in coeff_strings(&solved).iter().enumerate() {
        csv.push_str(&format!("{k},{c}\n"));
    }
    let doc = Document::new(&job, "compute", result, vec![]);
    emit(&job, doc, Some(csv))?;
    Ok(if agree { 0 } else { 3 })
}

fn cmd_verify(job: ResolvedJob) -> Result<i32, String> {
    let conventions: Vec<MConvention> = match job.convention.as_str() {
        "operand-degree" => vec![MConvention::OperandDegree],
        "fixed-norm" => vec![MConvention::FixedNorm],
        "both" => vec![MConvention::OperandDegree, MConvention::FixedNorm],
        other => return Err(format!("unknown convention `{other}`")),
    };

    let tasks: Vec<String> = job.checks.clone();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("QORTHO_NUM_WORKERS") {
        let n: usize = raw
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| format!("QORTHO_NUM_WORKERS must be a positive integer, got `{raw}`"))?;
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| e.to_string())?;

    let outcomes: Result<Vec<CheckOutcome>, String> = pool.install(|| {
        tasks
            .par_iter()
            .map(|name| run_check(&job, name, &conventions).map_err(|e| e.to_string()))
            .collect()
    });
    let outcomes = outcomes?;
    let all_passed = outcomes.iter().all(|o| o.passed);
    let adjudicated = outcomes
        .iter()
        .filter(|o| o.name == "diffeq")
        .flat_map(|o| o.notes.iter())
        .find_map(|s| s.strip_prefix("adjudicated convention: ").map(String::from));
    let result = json!({
        "all_passed": all_passed,
        "diffeq_convention": adjudicated,
    });
    let doc = Document::new(&job, "verify", result, outcomes);
    emit(&job, doc, None)?;
    Ok(if all_passed { 0 } else { 1 })
}

fn run_check(
    job: &ResolvedJob,
    name: &str,
    conventions: &[MConvention],
) -> qortho::Result<CheckOutcome> {
    use qortho::verify as v;
    match &job.family {
        config::Family::Q { params, index } => match name {
            "orthogonality" => v::check_orthogonality_q(params, index),
            "rodrigues" => v::check_rodrigues_q(params, index),
            "raising" => v::check_raising(params, index),
            "lowering" => v::check_lowering(params, index),
            "diffeq" => v::check_diffeq_q(params, index, conventions),
            "hypergeometric" => v::check_hypergeometric(params, index),
            "zeros" => v::check_zeros_q(params, index),
            "recurrence" => Ok(CheckOutcome {
                name: "recurrence".into(),
                passed: false,
                residual: "-".into(),
                notes: vec!["the recurrence check applies to the classical family".into()],
            }),
            other => Err(qortho::Error::InvalidParams(format!(
                "unknown check `{other}`"
            ))),
        },
        config::Family::Classical { params, index } => match name {
            "orthogonality" => v::check_classical_orthogonality(params, index),
            "rodrigues" => v::check_classical_rodrigues(params, index),
            "diffeq" => v::check_classical_diffeq(params, index),
            "recurrence" => v::check_recurrence(params, index),
            "zeros" => v::check_classical_zeros(params, index),
            "raising" | "lowering" | "hypergeometric" => Ok(CheckOutcome {
                name: name.into(),
                passed: false,
                residual: "-".into(),
                notes: vec![format!("the {name} check applies to the q family")],
            }),
            other => Err(qortho::Error::InvalidParams(format!(
                "unknown check `{other}`"
            ))),
        },
    }
}

fn cmd_zeros(job: ResolvedJob) -> Result<i32, String> {
    if job.precision < 1 {
        return Err("precision must be >= 1".into());
    }
    let (poly, expected) = match &job.family {
        config::Family::Q { params, index } => (
            solve_type2_q(params, index).map_err(|e| e.to_string())?,
            index.total() as usize,
        ),
        config::Family::Classical { params, index } => (
            solve_type2_classical(params, index).map_err(|e| e.to_string())?,
            index.total() as usize,
        ),
    };
    let report = root_report(&poly, job.precision).map_err(|e| e.to_string())?;
    let count = report.isolating_intervals.len();
    let count_matches = count == expected;
    let result = json!({
        "expected_roots": expected,
        "isolated_roots": count,
        "count_matches": count_matches,
        "count_positive": report.count_positive,
        "intervals": report.isolating_intervals,
        "decimals": report.decimal_approximations,
    });
    let mut csv = String::from("index,lower,upper,decimal\n");
    for (k, ((lo, hi), dec)) in report
        .isolating_intervals
        .iter()
        .zip(&report.decimal_approximations)
        .enumerate()
    {
        csv.push_str(&format!("{k},{lo},{hi},{dec}\n"));
    }
    let doc = Document::new(&job, "zeros", result, vec![]);
    emit(&job, doc, Some(csv))?;
    Ok(if count_matches { 0 } else { 1 })
}

fn cmd_limit(job: ResolvedJob) -> Result<i32, String> {
    let (params, index) = match &job.family {
        config::Family::Classical { params, index } => (params.clone(), index.clone()),
        config::Family::Q { .. } => {
            return Err(
                "limit scans take --family classical (the q side is built per scan point)".into(),
            )
        }
    };
    let scan = limit_scan(&params, &index, &job.delta, job.steps).map_err(|e| e.to_string())?;
    let lo: Rat = qortho::scalar::ratio(17, 10);
    let hi: Rat = qortho::scalar::ratio(23, 10);
    let checked = scan.ratios.len().min(3);
    let tail = &scan.ratios[scan.ratios.len() - checked..];
    let in_band = tail.iter().all(|r| *r >= lo && *r <= hi);
    let decreasing = scan.deviations.windows(2).all(|w| w[0] > w[1]);
    let informational = scan.ratios.is_empty();
    let pass = informational || (in_band && decreasing);
    let table: Vec<serde_json::Value> = scan
        .v_sequence
        .iter()
        .enumerate()
        .map(|(k, v)| {
            json!({
                "v": v.to_string(),
                "deviation": scan.deviations[k].to_string(),
                "deviation_decimal": decimal_string(&scan.deviations[k], 8),
                "ratio": if k == 0 { None } else { Some(to_f64(&scan.ratios[k - 1])) },
            })
        })
        .collect();
    let result = json!({
        "table": table,
        "ratio_band": ["17/10", "23/10"],
        "final_ratios_in_band": in_band,
        "deviations_strictly_decreasing": decreasing,
        "pass": pass,
        "informational": informational,
    });
    let doc = Document::new(&job, "limit", result, vec![]);
    emit(&job, doc, None)?;
    Ok(if pass { 0 } else { 1 })
}
