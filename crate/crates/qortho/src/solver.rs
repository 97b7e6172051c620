//! Ground-truth construction of the monic type II multiple orthogonal
//! polynomial by exact solution of the orthogonality linear system.
//!
//! Unknowns are expressed in the q-Stirling basis [s]^(0..|n̄|): the Gram
//! entries then reuse the inner sums with structurally matching test
//! functions and the fraction-free elimination sees smaller intermediates
//! than with raw monomials.

use crate::error::{Error, Result};
use crate::linalg::{bareiss_det, bareiss_solve};
use crate::poly::Poly;
use crate::scalar::{int, Scalar};
use crate::weights::{ClassicalParams, KravchukParams};

/// Multi-index n̄ = (n_1, …, n_r).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        assert!(!entries.is_empty(), "multi-index needs at least one entry");
        MultiIndex(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// |n̄| = n_1 + ⋯ + n_r.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// |n̄|_i = n_1 + ⋯ + n_{i-1} (prefix sum, |n̄|_1 = 0).
    pub fn prefix(&self, i: usize) -> u32 {
        self.0[..i].iter().sum()
    }

    /// n̄ + e_i.
    pub fn raised(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    /// n̄ - e_i when n_i > 0.
    pub fn lowered(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(MultiIndex(v))
    }

    /// Every multi-index of length r with |n̄| ≤ max_total.
    pub fn all_up_to(r: usize, max_total: u32) -> Vec<MultiIndex> {
        fn rec(r: usize, budget: u32, acc: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if r == 0 {
                out.push(MultiIndex(acc.clone()));
                return;
            }
            for head in 0..=budget {
                acc.push(head);
                rec(r - 1, budget - head, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(r, max_total, &mut Vec::new(), &mut out);
        out
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, n) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// Σ_{s=0}^{N} f(x(s)) [s]_q^(k) υ_q^{p_i,β_i,N}(s) △x(s-1/2), exactly.
pub fn inner_sum_q<S: Scalar>(
    params: &KravchukParams<S>,
    i: usize,
    f: &Poly<S>,
    k: u32,
) -> Result<S> {
    let ctx = params.ctx();
    let mut acc = S::zero();
    for s in 0..=params.big_n() {
        let term = f.eval(&ctx.lattice_x(s))
            * ctx.q_stirling_value(s, k)
            * params.q_weight(i, s)?
            * ctx.delta_x_half(s);
        acc = acc + term;
    }
    Ok(acc)
}

fn check_preconditions<S: Scalar>(params: &KravchukParams<S>, n: &MultiIndex) -> Result<()> {
    if n.len() != params.r() {
        return Err(Error::MultiIndex(format!(
            "multi-index has {} entries for {} measures",
            n.len(),
            params.r()
        )));
    }
    if i64::from(n.total()) > params.big_n() {
        return Err(Error::MultiIndex(format!(
            "|n| = {} exceeds N = {} (the measure has only N+1 atoms)",
            n.total(),
            params.big_n()
        )));
    }
    Ok(())
}

fn normality_error<S: Scalar>(params: &KravchukParams<S>, n: &MultiIndex) -> Error {
    let collisions = params.at_collisions();
    let mut msg = format!(
        "singular orthogonality system for n = {n}, N = {}, r = {}",
        params.big_n(),
        params.r()
    );
    if !collisions.is_empty() {
        let (i, j, k) = collisions[0];
        msg.push_str(&format!(
            "; AT condition violated: alpha[{j}] = q^{k} * alpha[{i}] with alpha = p/beta"
        ));
    }
    Error::NormalityFailure(msg)
}

/// Rows of the orthogonality system in the q-Stirling basis, labelled (i, k).
struct OrthoSystem<S> {
    rows: Vec<Vec<S>>,
}

/// Masses υ_i(s)·△x(s-1/2) for s = 0..N, built from υ_i(0) by the exact
/// Pearson ratio chain (one Γ_q evaluation instead of N+1).
fn mass_row<S: Scalar>(params: &KravchukParams<S>, i: usize) -> Result<Vec<S>> {
    let ctx = params.ctx();
    let mut weight = params.q_weight(i, 0)?;
    let mut out = Vec::with_capacity(params.big_n() as usize + 1);
    out.push(weight.clone() * ctx.delta_x_half(0));
    for s in 1..=params.big_n() {
        weight = weight * params.pearson_ratio(i, s)?;
        out.push(weight.clone() * ctx.delta_x_half(s));
    }
    Ok(out)
}

fn build_system_q<S: Scalar>(
    params: &KravchukParams<S>,
    n: &MultiIndex,
) -> Result<OrthoSystem<S>> {
    let d = n.total() as usize;
    let ctx = params.ctx();
    let big_n = params.big_n();
    let xs: Vec<S> = (0..=big_n).map(|s| ctx.lattice_x(s)).collect();
    let basis_vals: Vec<Vec<S>> = (0..=d as u32)
        .map(|m| {
            let b = ctx.q_stirling_poly(m);
            xs.iter().map(|x| b.eval(x)).collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(d);
    for i in 0..params.r() {
        let masses = mass_row(params, i)?;
        // Stirling values grow incrementally: [s]^(k) = [s]^(k-1)·x(s-k+1).
        let mut stir: Vec<S> = vec![S::one(); big_n as usize + 1];
        for k in 0..n.get(i) {
            if k > 0 {
                for (s, v) in stir.iter_mut().enumerate() {
                    *v = v.clone() * ctx.lattice_x(s as i64 - i64::from(k) + 1);
                }
            }
            let row: Vec<S> = basis_vals
                .iter()
                .map(|bvals| {
                    let mut acc = S::zero();
                    for s in 0..=big_n as usize {
                        acc = acc + bvals[s].clone() * stir[s].clone() * masses[s].clone();
                    }
                    acc
                })
                .collect();
            rows.push(row);
        }
    }
    Ok(OrthoSystem { rows })
}

/// The unique monic type II multiple orthogonal polynomial of the q-family.
pub fn solve_type2_q<S: Scalar>(params: &KravchukParams<S>, n: &MultiIndex) -> Result<Poly<S>> {
    check_preconditions(params, n)?;
    let d = n.total() as usize;
    if d == 0 {
        return Ok(Poly::one());
    }
    let system = build_system_q(params, n)?;
    // Monic in X means the [s]^(d) coefficient is q^(d(d-1)/2).
    let cd = params.ctx().q_pow((d as i64) * (d as i64 - 1) / 2);
    let a: Vec<Vec<S>> = system.rows.iter().map(|r| r[..d].to_vec()).collect();
    let b: Vec<S> = system
        .rows
        .iter()
        .map(|r| -(cd.clone() * r[d].clone()))
        .collect();
    let coeffs = bareiss_solve(&a, &b).ok_or_else(|| normality_error(params, n))?;
    let mut out = params.ctx().q_stirling_poly(d as u32).scale(&cd);
    for (m, c) in coeffs.iter().enumerate() {
        out = &out + &params.ctx().q_stirling_poly(m as u32).scale(c);
    }
    Ok(out)
}

/// The |n̄| orthogonality inner sums for K, in row order (i, k).
pub fn orthogonality_residuals<S: Scalar>(
    params: &KravchukParams<S>,
    n: &MultiIndex,
    polynomial: &Poly<S>,
) -> Result<Vec<S>> {
    check_preconditions(params, n)?;
    let ctx = params.ctx();
    let big_n = params.big_n();
    let fvals: Vec<S> = (0..=big_n)
        .map(|s| polynomial.eval(&ctx.lattice_x(s)))
        .collect();
    let mut out = Vec::new();
    for i in 0..params.r() {
        let masses = mass_row(params, i)?;
        let mut stir: Vec<S> = vec![S::one(); big_n as usize + 1];
        for k in 0..n.get(i) {
            if k > 0 {
                for (s, v) in stir.iter_mut().enumerate() {
                    *v = v.clone() * ctx.lattice_x(s as i64 - i64::from(k) + 1);
                }
            }
            let mut acc = S::zero();
            for s in 0..=big_n as usize {
                acc = acc + fvals[s].clone() * stir[s].clone() * masses[s].clone();
            }
            out.push(acc);
        }
    }
    Ok(out)
}

/// Exact nonsingularity test of the square orthogonality submatrix.
pub fn normality_check<S: Scalar>(params: &KravchukParams<S>, n: &MultiIndex) -> Result<bool> {
    check_preconditions(params, n)?;
    let d = n.total() as usize;
    if d == 0 {
        return Ok(true);
    }
    let system = build_system_q(params, n)?;
    let a: Vec<Vec<S>> = system.rows.iter().map(|r| r[..d].to_vec()).collect();
    Ok(!bareiss_det(&a).is_zero())
}

/// Falling factorial (x)_m = x(x-1)⋯(x-m+1), the classical solve basis.
pub fn falling_factorial_poly<S: Scalar>(m: u32) -> Poly<S> {
    let mut acc = Poly::one();
    for j in 0..m as i64 {
        acc = &acc * &Poly::new(vec![int::<S>(-j), S::one()]);
    }
    acc
}

/// Pochhammer test polynomial (-x)_j = ∏_{m=0}^{j-1}(-x + m).
pub fn neg_pochhammer_poly<S: Scalar>(j: u32) -> Poly<S> {
    let mut acc = Poly::one();
    for m in 0..j as i64 {
        acc = &acc * &Poly::new(vec![int::<S>(m), int::<S>(-1)]);
    }
    acc
}

/// Σ_x f(x) (-x)_j υ^{p_i,N}(x), exactly.
pub fn inner_sum_classical<S: Scalar>(
    params: &ClassicalParams<S>,
    i: usize,
    f: &Poly<S>,
    j: u32,
) -> Result<S> {
    let test = &neg_pochhammer_poly::<S>(j) * f;
    let mut acc = S::zero();
    for x in 0..=params.big_n() {
        acc = acc + test.eval(&int::<S>(x)) * params.classical_weight(i, x)?;
    }
    Ok(acc)
}

/// The unique monic type II multiple Kravchuk polynomial (classical family).
pub fn solve_type2_classical<S: Scalar>(
    params: &ClassicalParams<S>,
    n: &MultiIndex,
) -> Result<Poly<S>> {
    if n.len() != params.r() {
        return Err(Error::MultiIndex(format!(
            "multi-index has {} entries for {} measures",
            n.len(),
            params.r()
        )));
    }
    if i64::from(n.total()) > params.big_n() {
        return Err(Error::MultiIndex(format!(
            "|n| = {} exceeds N = {}",
            n.total(),
            params.big_n()
        )));
    }
    let d = n.total() as usize;
    if d == 0 {
        return Ok(Poly::one());
    }
    let basis: Vec<Poly<S>> = (0..=d as u32).map(falling_factorial_poly).collect();
    let mut rows = Vec::with_capacity(d);
    for i in 0..params.r() {
        for j in 0..n.get(i) {
            let row: Result<Vec<S>> = basis
                .iter()
                .map(|b| inner_sum_classical(params, i, b, j))
                .collect();
            rows.push(row?);
        }
    }
    let a: Vec<Vec<S>> = rows.iter().map(|r| r[..d].to_vec()).collect();
    let b: Vec<S> = rows.iter().map(|r| -r[d].clone()).collect();
    let coeffs = bareiss_solve(&a, &b).ok_or_else(|| {
        Error::NormalityFailure(format!(
            "singular classical orthogonality system for n = {n}, N = {}",
            params.big_n()
        ))
    })?;
    let mut out = basis[d].clone();
    for (m, c) in coeffs.iter().enumerate() {
        out = &out + &basis[m].scale(c);
    }
    Ok(out)
}

/// Classical orthogonality residuals, row order (i, j).
pub fn classical_residuals<S: Scalar>(
    params: &ClassicalParams<S>,
    n: &MultiIndex,
    polynomial: &Poly<S>,
) -> Result<Vec<S>> {
    let mut out = Vec::new();
    for i in 0..params.r() {
        for j in 0..n.get(i) {
            out.push(inner_sum_classical(params, i, polynomial, j)?);
        }
    }
    Ok(out)
}
