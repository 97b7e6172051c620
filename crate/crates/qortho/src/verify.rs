//! Machine-verification runners: each check constructs the relevant objects,
//! tests the identity exactly, and reports a structured outcome with exact
//! residual norms (the string "0" means identically zero).

use crate::analysis::{all_roots_simple, cauchy_bound, sturm_count};
use crate::error::{Error, Result};
use crate::operators::{
    classical_diffeq_residual, diffeq_residual_q, hypergeometric_data_r1,
    hypergeometric_residual, lowering_identity_check, lowering_subspace_check,
    raising_verify, recurrence_residual, MConvention,
};
use crate::poly::Poly;
use crate::rodrigues::{rodrigues_classical, rodrigues_q};
use crate::scalar::Scalar;
use crate::solver::{
    orthogonality_residuals, solve_type2_classical, solve_type2_q, MultiIndex,
};
use crate::weights::{ClassicalParams, KravchukParams};
use serde::Serialize;

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Exact residual description; "0" for identically zero.
    pub residual: String,
    /// Human-oriented notes: adjudications, surfaced degeneracies, recorded
    /// constants.
    pub notes: Vec<String>,
}

impl CheckOutcome {
    fn pass(name: &str, notes: Vec<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: true,
            residual: "0".into(),
            notes,
        }
    }

    fn fail(name: &str, residual: String, notes: Vec<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: false,
            residual,
            notes,
        }
    }
}

fn poly_residual_string<S: Scalar>(p: &Poly<S>) -> String {
    if p.is_zero() {
        "0".into()
    } else {
        format!(
            "[{}]",
            p.coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

fn values_residual_string<S: Scalar>(values: &[S]) -> String {
    if values.iter().all(|v| v.is_zero()) {
        "0".into()
    } else {
        format!(
            "[{}]",
            values
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// Orthogonality of the solved polynomial plus the weight-coherence
/// identities (Pearson ratio as exact weight quotient; r=1, β=1-p weight
/// equals the single-measure form).
pub fn check_orthogonality_q<S: Scalar>(
    params: &KravchukParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let name = "orthogonality";
    let violations = params.validate();
    if !violations.is_empty() {
        return Ok(CheckOutcome::fail(
            name,
            "-".into(),
            violations.iter().map(|v| v.to_string()).collect(),
        ));
    }
    let k = match solve_type2_q(params, n) {
        Ok(k) => k,
        Err(Error::NormalityFailure(msg)) => {
            return Ok(CheckOutcome::fail(name, "-".into(), vec![msg]))
        }
        Err(e) => return Err(e),
    };
    let res = orthogonality_residuals(params, n, &k)?;
    let mut notes = vec![];
    if n.total() == 0 {
        notes.push("no orthogonality conditions for the zero multi-index; trivially satisfied".into());
    }
    // Pearson chain: every weight quotient equals the closed-form ratio.
    for i in 0..params.r() {
        for s in 1..=params.big_n() {
            let quotient = params.q_weight(i, s)? / params.q_weight(i, s - 1)?;
            if quotient != params.pearson_ratio(i, s)? {
                return Ok(CheckOutcome::fail(
                    name,
                    format!("pearson mismatch at i={i}, s={s}"),
                    notes,
                ));
            }
        }
    }
    if res.iter().all(|x| x.is_zero()) {
        Ok(CheckOutcome::pass(name, notes))
    } else {
        Ok(CheckOutcome::fail(name, values_residual_string(&res), notes))
    }
}

/// Rodrigues construction equals the solver exactly; raw_leading recorded.
pub fn check_rodrigues_q<S: Scalar>(
    params: &KravchukParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let name = "rodrigues";
    let solved = match solve_type2_q(params, n) {
        Ok(k) => k,
        Err(Error::NormalityFailure(msg)) => {
            return Ok(CheckOutcome::fail(name, "-".into(), vec![msg]))
        }
        Err(e) => return Err(e),
    };
    let result = rodrigues_q(params, n)?;
    let notes = vec![format!("raw_leading = {}", result.raw_leading)];
    if result.poly == solved {
        Ok(CheckOutcome::pass(name, notes))
    } else {
        Ok(CheckOutcome::fail(
            name,
            poly_residual_string(&(&result.poly - &solved)),
            notes,
        ))
    }
}

/// Raising identity for every component, against the corrected target system
/// (β_i → q²β_i, β_j → qβ_j, N+1) with scalar -q^(1/2).
pub fn check_raising<S: Scalar>(
    params: &KravchukParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let name = "raising";
    let mut notes =
        vec!["target system: beta_i -> q^2 beta_i, beta_j -> q beta_j (j != i), N -> N+1".into()];
    for i in 0..params.r() {
        match raising_verify(params, n, i) {
            Ok(check) => {
                if !check.residuals_ok {
                    return Ok(CheckOutcome::fail(
                        name,
                        format!("component {i}: raised polynomial fails target orthogonality"),
                        notes,
                    ));
                }
                match check.solver_match {
                    Some(true) => {}
                    Some(false) => {
                        return Ok(CheckOutcome::fail(
                            name,
                            format!("component {i}: raised polynomial differs from solved target"),
                            notes,
                        ))
                    }
                    None => notes.push(format!(
                        "component {i}: target system non-normal; verified by orthogonality residuals"
                    )),
                }
            }
            Err(Error::NormalityFailure(msg)) => {
                return Ok(CheckOutcome::fail(name, "-".into(), vec![msg]))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(CheckOutcome::pass(name, notes))
}

/// Lowering expansion ΔK = Σ ξ_i K_{n̄-e_i} over the inverse-shifted systems.
pub fn check_lowering<S: Scalar>(
    params: &KravchukParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let name = "lowering";
    if n.total() == 0 {
        return Ok(CheckOutcome::pass(
            name,
            vec!["ΔK is zero for the zero multi-index; trivially satisfied".into()],
        ));
    }
    let mut notes =
        vec!["lowered systems: beta_i -> beta_i/q^2, beta_j -> beta_j/q (j != i), N -> N-1".into()];
    match lowering_identity_check(params, n) {
        Ok(residual) => {
            if residual.is_zero() {
                Ok(CheckOutcome::pass(name, notes))
            } else {
                Ok(CheckOutcome::fail(
                    name,
                    poly_residual_string(&residual),
                    notes,
                ))
            }
        }
        Err(Error::NormalityFailure(msg)) => {
            // A lowered system degenerated; fall back to the coordinate-free
            // subspace membership, which is the expansion's content.
            notes.push(format!("{msg}; falling back to subspace membership"));
            if lowering_subspace_check(params, n)? {
                notes.push("ΔK verified inside the lowered orthogonality subspace".into());
                Ok(CheckOutcome::pass(name, notes))
            } else {
                Ok(CheckOutcome::fail(
                    name,
                    "ΔK escapes the lowered orthogonality subspace".into(),
                    notes,
                ))
            }
        }
        Err(e) => Err(e),
    }
}

/// The (r+1)-order difference-equation residual under the requested
/// m-conventions. The report names the convention that zeroes the residual,
/// when one exists.
pub fn check_diffeq_q<S: Scalar>(
    params: &KravchukParams<S>,
    n: &MultiIndex,
    conventions: &[MConvention],
) -> Result<CheckOutcome> {
    let name = "diffeq";
    let mut notes = Vec::new();
    let mut zero_convention = None;
    let mut residuals = Vec::new();
    for &conv in conventions {
        match diffeq_residual_q(params, n, conv) {
            Ok(res) => {
                let zero = res.poly.is_zero();
                notes.push(format!(
                    "convention {}: residual degree {}",
                    conv.name(),
                    res.poly.degree().map_or(-1, |d| d as i64)
                ));
                if zero && zero_convention.is_none() {
                    zero_convention = Some(conv);
                }
                residuals.push((conv, res.poly));
            }
            Err(Error::NormalityFailure(msg)) => {
                return Ok(CheckOutcome::fail(name, "-".into(), vec![msg]))
            }
            Err(e) => return Err(e),
        }
    }
    match zero_convention {
        Some(conv) => {
            notes.push(format!("adjudicated convention: {}", conv.name()));
            Ok(CheckOutcome::pass(name, notes))
        }
        None => {
            if params.r() == 1 {
                notes.push(
                    "no m-convention yields the zero residual; the r=1 equation holds \
                     with internal parameter m = |n|+1, outside both conventions"
                        .into(),
                );
            } else {
                notes.push(
                    "no m-convention yields the zero residual; the operators carry \
                     (p_j, beta_j/q^2, N-1) verbatim and fail to commute for distinct p"
                        .into(),
                );
            }
            let worst = residuals
                .first()
                .map(|(_, p)| poly_residual_string(p))
                .unwrap_or_else(|| "-".into());
            Ok(CheckOutcome::fail(name, worst, notes))
        }
    }
}

/// r=1 hypergeometric equation with eigenvalue λ_n; also checks eigenvalue
/// separation against λ_{n+1}.
pub fn check_hypergeometric<S: Scalar>(
    params: &KravchukParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let name = "hypergeometric";
    if params.r() != 1 {
        return Ok(CheckOutcome::fail(
            name,
            "-".into(),
            vec!["hypergeometric reduction is defined for r = 1 only".into()],
        ));
    }
    let expected_beta = S::one() - params.p(0).clone();
    if *params.beta(0) != expected_beta {
        return Ok(CheckOutcome::fail(
            name,
            "-".into(),
            vec!["hypergeometric data assumes beta = 1 - p".into()],
        ));
    }
    let ctx = params.ctx();
    let k = solve_type2_q(params, n)?;
    let data = hypergeometric_data_r1(ctx, params.p(0), params.big_n(), n.get(0));
    let res = hypergeometric_residual(ctx, &data, &k);
    let mut notes = vec![format!("lambda_n = {}", data.lambda_n)];
    if !res.values().iter().all(|x| x.is_zero()) {
        return Ok(CheckOutcome::fail(
            name,
            values_residual_string(res.values()),
            notes,
        ));
    }
    if i64::from(n.get(0)) < params.big_n() {
        let wrong = hypergeometric_data_r1(ctx, params.p(0), params.big_n(), n.get(0) + 1);
        let sep = hypergeometric_residual(ctx, &wrong, &k);
        if sep.values().iter().all(|x| x.is_zero()) {
            return Ok(CheckOutcome::fail(
                name,
                "-".into(),
                vec!["wrong eigenvalue also annihilates the polynomial".into()],
            ));
        }
        notes.push("eigenvalue separation verified against lambda_{n+1}".into());
    }
    Ok(CheckOutcome::pass(name, notes))
}

/// Zero location: exactly |n̄| distinct roots in (0, cauchy bound), all simple.
pub fn check_zeros_q<S: Scalar>(
    params: &KravchukParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let name = "zeros";
    let k = match solve_type2_q(params, n) {
        Ok(k) => k,
        Err(Error::NormalityFailure(msg)) => {
            return Ok(CheckOutcome::fail(name, "-".into(), vec![msg]))
        }
        Err(e) => return Err(e),
    };
    check_zeros_poly(&k, n.total() as usize)
}

fn check_zeros_poly<S: Scalar>(k: &Poly<S>, expected: usize) -> Result<CheckOutcome> {
    let name = "zeros";
    if expected == 0 {
        return Ok(CheckOutcome::pass(
            name,
            vec!["constant polynomial; no zeros to locate".into()],
        ));
    }
    if !all_roots_simple(k) {
        return Ok(CheckOutcome::fail(
            name,
            "-".into(),
            vec!["polynomial has a repeated root".into()],
        ));
    }
    if k.eval(&S::zero()).is_zero() {
        return Ok(CheckOutcome::fail(
            name,
            "-".into(),
            vec!["zero lattice endpoint is a root; positivity claim fails".into()],
        ));
    }
    let bound = cauchy_bound(k)?;
    let count = sturm_count(k, &S::zero(), &bound)?;
    if count == expected {
        Ok(CheckOutcome::pass(
            name,
            vec![format!(
                "{count} simple roots in (0, {bound}); none beyond the Cauchy bound"
            )],
        ))
    } else {
        Ok(CheckOutcome::fail(
            name,
            format!("found {count} positive roots, expected {expected}"),
            vec![],
        ))
    }
}

/// Classical-family checks: recurrence in both directions, the classical
/// difference equation, and Rodrigues-solver agreement.
pub fn check_recurrence<S: Scalar>(
    params: &ClassicalParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let name = "recurrence";
    if i64::from(n.total()) + 1 > params.big_n() {
        return Ok(CheckOutcome::fail(
            name,
            "-".into(),
            vec![format!(
                "recurrence needs |n|+1 <= N; got |n| = {}, N = {}",
                n.total(),
                params.big_n()
            )],
        ));
    }
    for k in 0..params.r() {
        let res = recurrence_residual(params, n, k)?;
        if !res.is_zero() {
            return Ok(CheckOutcome::fail(
                name,
                poly_residual_string(&res),
                vec![format!("direction k = {k}")],
            ));
        }
    }
    Ok(CheckOutcome::pass(name, vec![]))
}

pub fn check_classical_diffeq<S: Scalar>(
    params: &ClassicalParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let name = "diffeq";
    let res = classical_diffeq_residual(params, n)?;
    let notes = vec!["level-matched operator superscripts".into()];
    if res.is_zero() {
        Ok(CheckOutcome::pass(name, notes))
    } else {
        Ok(CheckOutcome::fail(name, poly_residual_string(&res), notes))
    }
}

pub fn check_classical_rodrigues<S: Scalar>(
    params: &ClassicalParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let name = "rodrigues";
    let solved = solve_type2_classical(params, n)?;
    let result = rodrigues_classical(params, n)?;
    let notes = vec![format!("raw_leading = {}", result.raw_leading)];
    if result.poly == solved {
        Ok(CheckOutcome::pass(name, notes))
    } else {
        Ok(CheckOutcome::fail(
            name,
            poly_residual_string(&(&result.poly - &solved)),
            notes,
        ))
    }
}

pub fn check_classical_orthogonality<S: Scalar>(
    params: &ClassicalParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let name = "orthogonality";
    let k = solve_type2_classical(params, n)?;
    let res = crate::solver::classical_residuals(params, n, &k)?;
    if res.iter().all(|x| x.is_zero()) {
        Ok(CheckOutcome::pass(name, vec![]))
    } else {
        Ok(CheckOutcome::fail(name, values_residual_string(&res), vec![]))
    }
}

pub fn check_classical_zeros<S: Scalar>(
    params: &ClassicalParams<S>,
    n: &MultiIndex,
) -> Result<CheckOutcome> {
    let k = solve_type2_classical(params, n)?;
    check_zeros_poly(&k, n.total() as usize)
}
