//! Closed-form construction of the polynomials via Rodrigues-type formulas,
//! independent of the linear solver.
//!
//! The q-family formula is evaluated on the grid and interpolated: the
//! conjugation factors (β/p)^s are not polynomial in X, so the expression is
//! only polynomial after full assembly. The nested ∇^{n_i} are applied
//! innermost-first for i = r down to 1. The conjugation exponents follow the
//! weight-quotient raising chain through the shifted systems (suffix sums of
//! the multi-index enter them); the inner grid is the reciprocal-Γ factor
//! G_{N-|n̄|}, which vanishes off [0, N-|n̄|] and supplies the guard sites.

use crate::error::{Error, Result};
use crate::poly::{GridFunction, Poly};
use crate::qlattice::QContext;
use crate::scalar::{int, powi, Scalar};
use crate::solver::MultiIndex;
use crate::weights::{ClassicalParams, KravchukParams};

/// m-fold composition of ∇ = ▽/▽x(s+1/2) on a grid function. The output
/// starts m sites above the input's first site.
pub fn nabla_pow_grid<S: Scalar>(
    ctx: &QContext<S>,
    f: &GridFunction<S>,
    m: u32,
) -> Result<GridFunction<S>> {
    if i64::from(m) > f.last_site() - f.first_site() {
        return Err(Error::InsufficientGuardSites {
            needed: f.first_site() + i64::from(m),
            first: f.first_site(),
        });
    }
    let mut g = f.clone();
    for _ in 0..m {
        let lo = g.first_site() + 1;
        let hi = g.last_site();
        g = GridFunction::tabulate(lo, hi, |s| {
            (g.get(s).unwrap().clone() - g.get(s - 1).unwrap().clone()) / ctx.delta_x_half(s)
        });
    }
    Ok(g)
}

/// Closed-sum form of ∇^m on the lattice:
/// ∇^m f(s) = q^(m/2 - ms) Σ_{k=0}^m (-1)^k [m over k]_q q^(C(k,2)) f(s-k).
pub fn q_leibniz_expansion<S: Scalar>(
    ctx: &QContext<S>,
    f: &GridFunction<S>,
    m: u32,
) -> Result<GridFunction<S>> {
    let mi = i64::from(m);
    if mi > f.last_site() - f.first_site() {
        return Err(Error::InsufficientGuardSites {
            needed: f.first_site() + mi,
            first: f.first_site(),
        });
    }
    let lo = f.first_site() + mi;
    let hi = f.last_site();
    let mut values = Vec::with_capacity((hi - lo + 1) as usize);
    for s in lo..=hi {
        let mut acc = S::zero();
        for k in 0..=mi {
            let term = ctx.q_binomial_bracket(mi, k)
                * powi(&-S::one(), k)
                * ctx.q_pow(k * (k - 1) / 2)
                * f.get(s - k)?.clone();
            acc = acc + term;
        }
        values.push(ctx.v_pow(mi - 2 * mi * s) * acc);
    }
    Ok(GridFunction::new(lo, values))
}

/// m-fold plain backward difference ▽^m on a grid (classical lattice).
pub fn backward_pow_grid<S: Scalar>(f: &GridFunction<S>, m: u32) -> Result<GridFunction<S>> {
    if i64::from(m) > f.last_site() - f.first_site() {
        return Err(Error::InsufficientGuardSites {
            needed: f.first_site() + i64::from(m),
            first: f.first_site(),
        });
    }
    let mut g = f.clone();
    for _ in 0..m {
        let lo = g.first_site() + 1;
        let hi = g.last_site();
        g = GridFunction::tabulate(lo, hi, |s| {
            g.get(s).unwrap().clone() - g.get(s - 1).unwrap().clone()
        });
    }
    Ok(g)
}

/// Alternating-binomial closed sum ▽^m f(s) = Σ_k (-1)^k C(m,k) f(s-k).
pub fn backward_leibniz<S: Scalar>(f: &GridFunction<S>, m: u32) -> Result<GridFunction<S>> {
    let mi = i64::from(m);
    if mi > f.last_site() - f.first_site() {
        return Err(Error::InsufficientGuardSites {
            needed: f.first_site() + mi,
            first: f.first_site(),
        });
    }
    let lo = f.first_site() + mi;
    let hi = f.last_site();
    let mut values = Vec::with_capacity((hi - lo + 1) as usize);
    for s in lo..=hi {
        let mut acc = S::zero();
        let mut binom = S::one();
        for k in 0..=mi {
            acc = acc + powi(&-S::one(), k) * binom.clone() * f.get(s - k)?.clone();
            binom = binom * int::<S>(mi - k) / int::<S>(k + 1);
        }
        values.push(acc);
    }
    Ok(GridFunction::new(lo, values))
}

/// Result of a Rodrigues construction.
#[derive(Debug, Clone)]
pub struct RodriguesResult<S> {
    /// Monic-normalized polynomial.
    pub poly: Poly<S>,
    /// Leading coefficient produced by the literal formula before
    /// normalization (1 exactly when the printed constant is monic-making).
    pub raw_leading: S,
    /// The literal constant of the printed formula.
    pub constant_g: S,
}

/// The printed Rodrigues constant 𝒢_q^{n̄,p̄,N}: (-1)^|n̄| [N]_q^(|n̄|)
/// q^(-5|n̄|/2) ∏_i p_i^{n_i}/∏_{j=1}^{n_i} q^(-j)[p_i(q^(|n̄|-|n̄|_i-j-1)-1)+1]
/// times the cross factors q^{n_i Σ_{j>i} n_j}.
pub fn rodrigues_constant<S: Scalar>(params: &KravchukParams<S>, n: &MultiIndex) -> Result<S> {
    let ctx = params.ctx();
    let d = i64::from(n.total());
    if d > params.big_n() {
        return Err(Error::MultiIndex(format!(
            "|n| = {d} exceeds N = {}",
            params.big_n()
        )));
    }
    let mut acc = powi(&-S::one(), d) * ctx.q_stirling_value(params.big_n(), n.total())
        * ctx.v_pow(-5 * d);
    for i in 0..params.r() {
        let ni = i64::from(n.get(i));
        let prefix = i64::from(n.prefix(i));
        let mut denom = S::one();
        for j in 1..=ni {
            let bracket =
                params.p(i).clone() * (ctx.q_pow(d - prefix - j - 1) - S::one()) + S::one();
            if bracket.is_zero() {
                return Err(Error::InvalidParams(
                    "rodrigues constant denominator vanishes".into(),
                ));
            }
            denom = denom * ctx.q_pow(-j) * bracket;
        }
        acc = acc * powi(params.p(i), ni) / denom;
    }
    for i in 0..params.r().saturating_sub(1) {
        let suffix: i64 = (i + 1..params.r()).map(|j| i64::from(n.get(j))).sum();
        acc = acc * ctx.q_pow(i64::from(n.get(i)) * suffix);
    }
    Ok(acc)
}

/// G_L(s) = q^C(s,2) [L]_q!/(Γ_q(s+1)Γ_q(L-s+1)) with the reciprocal-Γ
/// convention: zero off [0, L].
fn gamma_ratio_grid<S: Scalar>(ctx: &QContext<S>, l: i64, s: i64) -> Result<S> {
    if s < 0 || s > l {
        return Ok(S::zero());
    }
    Ok(ctx.v_pow(s * (s - 1)) * ctx.q_factorial_sym(l)
        / (ctx.q_gamma_int(s + 1)? * ctx.q_gamma_int(l - s + 1)?))
}

/// Exact Newton interpolation through the points (xs[k], ys[k]).
fn newton_interpolate<S: Scalar>(xs: &[S], ys: &[S]) -> Poly<S> {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (coef[i].clone() - coef[i - 1].clone())
                / (xs[i].clone() - xs[i - j].clone());
        }
    }
    let mut out = Poly::zero();
    for i in (0..n).rev() {
        let lin = Poly::new(vec![-xs[i].clone(), S::one()]);
        out = &(&out * &lin) + &Poly::constant(coef[i].clone());
    }
    out
}

fn interpolate_and_verify<S: Scalar>(
    xs: &[S],
    grid: &[S],
    d: usize,
) -> Result<(Poly<S>, S)> {
    let poly = newton_interpolate(&xs[..=d], &grid[..=d]);
    for (s, value) in grid.iter().enumerate() {
        if poly.eval(&xs[s]) != *value {
            return Err(Error::PolynomialityFailure { site: s as i64 });
        }
    }
    match poly.degree() {
        Some(deg) if deg == d => {}
        other => {
            return Err(Error::DegreeMismatch {
                expected: d as i64,
                got: other.map_or(-1, |x| x as i64),
            })
        }
    }
    let raw = poly.leading().unwrap().clone();
    Ok((poly.monic(), raw))
}

/// Rodrigues-type construction of the q-family polynomial: grid evaluation of
/// the iterated weighted differences, interpolation, polynomiality check, and
/// monic normalization.
pub fn rodrigues_q<S: Scalar>(
    params: &KravchukParams<S>,
    n: &MultiIndex,
) -> Result<RodriguesResult<S>> {
    let ctx = params.ctx();
    let d = i64::from(n.total());
    if d > params.big_n() {
        return Err(Error::MultiIndex(format!(
            "|n| = {d} exceeds N = {}",
            params.big_n()
        )));
    }
    let big_n = params.big_n();
    let constant_g = rodrigues_constant(params, n)?;

    // Innermost factor on the guard-extended grid [-d, N].
    let mut grid = GridFunction::tabulate(-d, big_n, |s| {
        gamma_ratio_grid(ctx, big_n - d, s).expect("gamma ratio on extended grid")
    });
    // Nested blocks, component r down to 1; T = suffix raise count.
    let mut suffix: i64 = 0;
    for i in (0..params.r()).rev() {
        let ni = i64::from(n.get(i));
        let conj_in = params.p(i).clone() * ctx.q_pow(ni + d - suffix) / params.beta(i).clone();
        grid = grid.map_sites(|s, value| powi(&conj_in, s) * value.clone());
        grid = nabla_pow_grid(ctx, &grid, n.get(i))?;
        let conj_out = params.beta(i).clone() * ctx.q_pow(ni - d + suffix) / params.p(i).clone();
        grid = grid.map_sites(|s, value| powi(&conj_out, s) * value.clone());
        suffix += ni;
    }
    // Outermost W_N(s)^{-1} and the printed constant.
    let assembled: Vec<S> = (0..=big_n)
        .map(|s| {
            let w_inv = ctx.q_gamma_int(big_n - s + 1).unwrap()
                * ctx.q_gamma_int(s + 1).unwrap()
                / (ctx.v_pow(s * (s - 1)) * ctx.q_factorial_sym(big_n));
            constant_g.clone() * w_inv * grid.get(s).unwrap().clone()
        })
        .collect();
    let xs: Vec<S> = (0..=big_n).map(|s| ctx.lattice_x(s)).collect();
    let (poly, raw_leading) = interpolate_and_verify(&xs, &assembled, d as usize)?;
    Ok(RodriguesResult {
        poly,
        raw_leading,
        constant_g,
    })
}

/// Classical Rodrigues formula with ordinary backward differences and
/// constant (-N)_{|n̄|} ∏ p_i^{n_i}.
pub fn rodrigues_classical<S: Scalar>(
    params: &ClassicalParams<S>,
    n: &MultiIndex,
) -> Result<RodriguesResult<S>> {
    let d = i64::from(n.total());
    if d > params.big_n() {
        return Err(Error::MultiIndex(format!(
            "|n| = {d} exceeds N = {}",
            params.big_n()
        )));
    }
    let big_n = params.big_n();
    // (-N)_d ∏ p_i^{n_i}
    let mut constant_g = S::one();
    for m in 0..d {
        constant_g = constant_g * int::<S>(-big_n + m);
    }
    for i in 0..params.r() {
        constant_g = constant_g * powi(params.p(i), i64::from(n.get(i)));
    }

    let factorial = |m: i64| -> S {
        let mut acc = S::one();
        for t in 2..=m {
            acc = acc * int::<S>(t);
        }
        acc
    };
    let inner = |x: i64| -> S {
        if x < 0 || x > big_n - d {
            S::zero()
        } else {
            factorial(big_n - d) / (factorial(x) * factorial(big_n - d - x))
        }
    };
    let mut grid = GridFunction::tabulate(-d, big_n, inner);
    for i in (0..params.r()).rev() {
        let odds = params.p(i).clone() / (S::one() - params.p(i).clone());
        grid = grid.map_sites(|x, value| powi(&odds, x) * value.clone());
        grid = backward_pow_grid(&grid, n.get(i))?;
        let inv_odds = (S::one() - params.p(i).clone()) / params.p(i).clone();
        grid = grid.map_sites(|x, value| powi(&inv_odds, x) * value.clone());
    }
    let assembled: Vec<S> = (0..=big_n)
        .map(|x| {
            let w_inv = factorial(x) * factorial(big_n - x) / factorial(big_n);
            constant_g.clone() * w_inv * grid.get(x).unwrap().clone()
        })
        .collect();
    let xs: Vec<S> = (0..=big_n).map(int::<S>).collect();
    let (poly, raw_leading) = interpolate_and_verify(&xs, &assembled, d as usize)?;
    Ok(RodriguesResult {
        poly,
        raw_leading,
        constant_g,
    })
}
