//! Exact real-root counting and isolation via Sturm sequences, and the q→1
//! limit scans connecting the q-family to the classical family.
//!
//! Root claims are settled exactly: the Sturm chain lives in the rational
//! field, counts are integers, and the decimal output is presentation only.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::qlattice::QContext;
use crate::scalar::{decimal_string, int, ratio, Rat, Scalar};
use crate::solver::{solve_type2_classical, solve_type2_q, MultiIndex};
use crate::weights::{ClassicalParams, KravchukParams};
use serde::Serialize;

/// Sturm chain of a square-free representative of f.
fn sturm_chain<S: Scalar>(f: &Poly<S>) -> Vec<Poly<S>> {
    let mut chain = vec![f.clone(), f.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let (_, rem) = chain[n - 2].div_rem(&chain[n - 1]);
        chain.push(&Poly::zero() - &rem);
    }
    chain.pop();
    chain
}

fn sign_changes<S: Scalar>(chain: &[Poly<S>], at: &S) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None; // sign as is_positive
    for p in chain {
        let v = p.eval(at);
        if v.is_zero() {
            continue;
        }
        let pos = v > S::zero();
        if let Some(prev) = last {
            if prev != pos {
                count += 1;
            }
        }
        last = Some(pos);
    }
    count
}

/// Number of distinct real roots of `poly` in (lo, hi]. Requires a nonzero
/// polynomial, lo < hi, and both endpoints off the root set.
pub fn sturm_count<S: Scalar>(poly: &Poly<S>, lo: &S, hi: &S) -> Result<usize> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(Error::InvalidParams("sturm_count needs lo < hi".into()));
    }
    let square_free = square_free(poly);
    if square_free.eval(lo).is_zero() || square_free.eval(hi).is_zero() {
        return Err(Error::EndpointIsRoot);
    }
    let chain = sturm_chain(&square_free);
    Ok(sign_changes(&chain, lo) - sign_changes(&chain, hi))
}

/// Square-free part f / gcd(f, f').
pub fn square_free<S: Scalar>(f: &Poly<S>) -> Poly<S> {
    let g = f.gcd(&f.derivative());
    match g.degree() {
        None | Some(0) => f.clone(),
        _ => f.div_exact(&g).expect("gcd divides"),
    }
}

/// All roots simple ⟺ gcd(f, f') is a nonzero constant.
pub fn all_roots_simple<S: Scalar>(f: &Poly<S>) -> bool {
    matches!(f.gcd(&f.derivative()).degree(), Some(0))
}

/// Cauchy-type root bound 1 + max |coeff| / |leading|.
pub fn cauchy_bound<S: Scalar>(f: &Poly<S>) -> Result<S> {
    let lead = f.leading().ok_or(Error::ZeroPolynomial)?.clone();
    let mut biggest = S::zero();
    if let Some(d) = f.degree() {
        for k in 0..d {
            let a = f.coeff(k).abs();
            if a > biggest {
                biggest = a;
            }
        }
    }
    Ok(S::one() + biggest / lead.abs())
}

/// Exact root report: count of positive roots, isolating intervals, and
/// decimal renderings of the interval midpoints.
#[derive(Debug, Clone, Serialize)]
pub struct RootReport {
    pub count_positive: usize,
    pub isolating_intervals: Vec<(String, String)>,
    pub decimal_approximations: Vec<String>,
}

/// Isolate all real roots of a square-free representative of `poly` into
/// disjoint rational intervals of width < 10^(-precision) (exact roots get
/// degenerate point intervals), sorted increasingly.
pub fn isolate_roots<S: Scalar>(poly: &Poly<S>, precision: u32) -> Result<Vec<(S, S)>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut f = square_free(poly);
    let width_cap = {
        let mut w = S::one();
        for _ in 0..precision {
            w = w / int::<S>(10);
        }
        w
    };
    let mut points: Vec<S> = Vec::new();
    // Deflate exact rational roots found during bisection.
    let mut intervals: Vec<(S, S)> = Vec::new();
    loop {
        if f.degree().is_none_or(|d| d == 0) {
            break;
        }
        if f.degree() == Some(1) {
            // Exact rational root of the linear leftover.
            points.push(-(f.coeff(0) / f.coeff(1)));
            f = Poly::one();
            break;
        }
        let bound = cauchy_bound(&f)?;
        let lo = -bound.clone();
        if f.eval(&lo).is_zero() {
            return Err(Error::EndpointIsRoot);
        }
        let chain = sturm_chain(&f);
        let total = sign_changes(&chain, &lo) - sign_changes(&chain, &bound);
        if f.eval(&bound).is_zero() {
            return Err(Error::EndpointIsRoot);
        }
        let mut stack = vec![(lo, bound, total)];
        let mut deflated = false;
        while let Some((a, b, count)) = stack.pop() {
            if count == 0 {
                continue;
            }
            let width = b.clone() - a.clone();
            if count == 1 && width < width_cap {
                intervals.push((a, b));
                continue;
            }
            let mid = (a.clone() + b.clone()) / int::<S>(2);
            if f.eval(&mid).is_zero() {
                points.push(mid.clone());
                f = f
                    .div_exact(&Poly::new(vec![-mid, S::one()]))
                    .expect("exact rational root divides");
                deflated = true;
                break;
            }
            let left = sign_changes(&chain, &a) - sign_changes(&chain, &mid);
            stack.push((a, mid.clone(), left));
            stack.push((mid, b, count - left));
        }
        if !deflated {
            break;
        }
        intervals.clear(); // recompute against the deflated polynomial
    }
    let mut out: Vec<(S, S)> = points.into_iter().map(|p| (p.clone(), p)).collect();
    out.extend(intervals);
    // Shrink open intervals until they exclude every reported exact root.
    let chain = sturm_chain(&f);
    let mut changed = true;
    while changed {
        changed = false;
        let snapshot = out.clone();
        for item in out.iter_mut() {
            if item.0 == item.1 {
                continue;
            }
            for other in &snapshot {
                if other.0 == other.1 && item.0 < other.0 && other.0 <= item.1 {
                    // Bisect away from the point root.
                    let mid = (item.0.clone() + item.1.clone()) / int::<S>(2);
                    let left = sign_changes(&chain, &item.0) - sign_changes(&chain, &mid);
                    if left == 1 {
                        item.1 = mid;
                    } else {
                        item.0 = mid;
                    }
                    changed = true;
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("total order on scalars"));
    Ok(out)
}

/// Assemble the presentation-level report for an exact rational polynomial.
pub fn root_report(poly: &Poly<Rat>, precision: u32) -> Result<RootReport> {
    let intervals = isolate_roots(poly, precision)?;
    let zero: Rat = ratio(0, 1);
    let two: Rat = ratio(2, 1);
    let count_positive = intervals.iter().filter(|(lo, _)| *lo >= zero).count();
    let decimal_approximations = intervals
        .iter()
        .map(|(lo, hi)| decimal_string(&((lo.clone() + hi.clone()) / two.clone()), precision as usize))
        .collect();
    Ok(RootReport {
        count_positive,
        isolating_intervals: intervals
            .into_iter()
            .map(|(lo, hi)| (lo.to_string(), hi.to_string()))
            .collect(),
        decimal_approximations,
    })
}

/// One q→1 scan: v_k = 1 + δ·2^(-k) for k = 1..steps, exact deviations
/// max_s |K_q(x(s)) - K_classical(s)| and successive deviation ratios.
#[derive(Debug, Clone)]
pub struct LimitScan<S> {
    pub v_sequence: Vec<S>,
    pub deviations: Vec<S>,
    pub ratios: Vec<S>,
}

/// Compare the q-family solution against the classical one along a geometric
/// v-sequence shrinking to 1. β_i = 1 - p_i at every scan point.
pub fn limit_scan<S: Scalar>(
    cparams: &ClassicalParams<S>,
    n: &MultiIndex,
    delta: &S,
    steps: u32,
) -> Result<LimitScan<S>> {
    if *delta <= S::zero() {
        return Err(Error::InvalidParams("delta must be positive".into()));
    }
    if i64::from(n.total()) > cparams.big_n() {
        return Err(Error::MultiIndex(format!(
            "|n| = {} exceeds N = {}",
            n.total(),
            cparams.big_n()
        )));
    }
    let classical = solve_type2_classical(cparams, n)?;
    let mut v_sequence = Vec::with_capacity(steps as usize);
    let mut deviations = Vec::with_capacity(steps as usize);
    let mut halving = S::one() / (S::one() + S::one());
    for _ in 1..=steps {
        let v = S::one() + delta.clone() * halving.clone();
        halving = halving / (S::one() + S::one());
        let ctx = QContext::new(v.clone())?;
        let params = KravchukParams::with_default_beta(
            ctx.clone(),
            cparams.p_vec().to_vec(),
            cparams.big_n(),
        )?;
        let kq = solve_type2_q(&params, n)?;
        let mut worst = S::zero();
        for s in 0..=cparams.big_n() {
            let dev = (kq.eval(&ctx.lattice_x(s)) - classical.eval(&int::<S>(s))).abs();
            if dev > worst {
                worst = dev;
            }
        }
        v_sequence.push(v);
        deviations.push(worst);
    }
    let ratios = deviations
        .windows(2)
        .map(|w| w[0].clone() / w[1].clone())
        .collect();
    Ok(LimitScan {
        v_sequence,
        deviations,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rat};
    use num::Signed;

    fn p(coeffs: &[i64]) -> Poly<Rat> {
        Poly::new(coeffs.iter().map(|&c| ratio(c, 1)).collect())
    }

    #[test]
    fn sturm_count_basics() {
        // X - 3 on (0, 10)
        assert_eq!(
            sturm_count(&p(&[-3, 1]), &ratio(0, 1), &ratio(10, 1)).unwrap(),
            1
        );
        // constant has no roots anywhere
        assert_eq!(
            sturm_count(&p(&[1]), &ratio(-100, 1), &ratio(100, 1)).unwrap(),
            0
        );
        // (X-1)(X-2)(X-3)
        let f = p(&[-6, 11, -6, 1]);
        assert_eq!(sturm_count(&f, &ratio(0, 1), &ratio(10, 1)).unwrap(), 3);
        assert_eq!(
            sturm_count(&f, &ratio(3, 2), &ratio(5, 2)).unwrap(),
            1
        );
        assert!(sturm_count(&f, &ratio(1, 1), &ratio(5, 1)).is_err());
        assert!(sturm_count(&Poly::<Rat>::zero(), &ratio(0, 1), &ratio(1, 1)).is_err());
        assert!(sturm_count(&f, &ratio(5, 1), &ratio(0, 1)).is_err());
    }

    #[test]
    fn sturm_handles_repeated_roots() {
        // (X-1)^2 (X+2): distinct real roots are {1, -2}.
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(
            sturm_count(&f, &ratio(-10, 1), &ratio(10, 1)).unwrap(),
            2
        );
        assert!(!all_roots_simple(&f));
        assert!(all_roots_simple(&p(&[-6, 11, -6, 1])));
    }

    #[test]
    fn cauchy_bound_encloses_roots() {
        let f = p(&[-6, 11, -6, 1]);
        let b = cauchy_bound(&f).unwrap();
        assert_eq!(b, ratio::<Rat>(12, 1));
        assert_eq!(sturm_count(&f, &-b.clone(), &b).unwrap(), 3);
    }

    #[test]
    fn isolate_simple_roots() {
        // X² - x(2)·X at v=2: roots {0, 5}, both exact rationals.
        let f = p(&[0, -5, 1]);
        let report = root_report(&f, 6).unwrap();
        assert_eq!(report.isolating_intervals.len(), 2);
        assert_eq!(report.count_positive, 2);
        assert_eq!(report.isolating_intervals[0].0, "0");
        assert_eq!(report.isolating_intervals[0].1, "0");
        assert_eq!(report.isolating_intervals[1].0, "5");
        assert_eq!(report.decimal_approximations[1], "5.000000");
        // degree-1 monic: single exact root.
        let g = p(&[-7, 2]);
        let report = root_report(&g, 4).unwrap();
        assert_eq!(report.isolating_intervals.len(), 1);
        assert_eq!(report.decimal_approximations[0], "3.5000");
    }

    #[test]
    fn isolate_irrational_roots() {
        // X² - 2: ±√2 with tight rational intervals.
        let f = p(&[-2, 0, 1]);
        let intervals = isolate_roots(&f, 8).unwrap();
        assert_eq!(intervals.len(), 2);
        for (lo, hi) in &intervals {
            assert!(hi.clone() - lo.clone() < ratio::<Rat>(1, 100_000_000));
            assert!(f.eval(lo).clone() * f.eval(hi) < ratio(0, 1));
        }
        assert!(intervals[0].1 < ratio(0, 1));
        assert!(intervals[1].0 > ratio(0, 1));
        // Mixed exact and irrational roots: X(X²-2).
        let g = &p(&[0, 1]) * &f;
        let intervals = isolate_roots(&g, 6).unwrap();
        assert_eq!(intervals.len(), 3);
        for w in intervals.windows(2) {
            assert!(w[0].1 < w[1].0 || (w[0].1 == w[1].0 && w[1].0 == w[1].1));
        }
    }

    #[test]
    fn zeros_of_solved_polynomial() {
        // r=2, n=(1,1): exactly |n̄| = 2 distinct roots in (0, cauchy bound).
        let ctx = QContext::<Rat>::new(ratio(2, 1)).unwrap();
        let params = KravchukParams::new(
            ctx,
            vec![ratio(1, 3), ratio(1, 2)],
            vec![ratio(2, 3), ratio(1, 2)],
            4,
        )
        .unwrap();
        let k = solve_type2_q(&params, &MultiIndex::new(vec![1, 1])).unwrap();
        assert!(all_roots_simple(&k));
        let bound = cauchy_bound(&k).unwrap();
        assert_eq!(
            sturm_count(&k, &ratio(0, 1), &bound).unwrap(),
            2
        );
        let intervals = isolate_roots(&k, 4).unwrap();
        assert_eq!(intervals.len(), 2);
        assert!(intervals.iter().all(|(lo, _)| *lo >= ratio(0, 1)));
    }

    #[test]
    fn limit_scan_first_order_convergence() {
        let cparams =
            ClassicalParams::new(vec![ratio::<Rat>(1, 4), ratio::<Rat>(1, 2)], 6).unwrap();
        let scan = limit_scan(
            &cparams,
            &MultiIndex::new(vec![1, 1]),
            &ratio(1, 8),
            5,
        )
        .unwrap();
        assert_eq!(scan.v_sequence.len(), 5);
        assert_eq!(scan.v_sequence[0], ratio::<Rat>(17, 16));
        assert_eq!(scan.ratios.len(), 4);
        for w in scan.deviations.windows(2) {
            assert!(w[0] > w[1], "deviations must strictly decrease");
        }
        let lo: Rat = ratio(17, 10);
        let hi: Rat = ratio(23, 10);
        for r in &scan.ratios[scan.ratios.len() - 3..] {
            assert!(*r >= lo && *r <= hi, "ratio {r} outside [1.7, 2.3]");
        }
    }

    #[test]
    fn lattice_converges_to_uniform() {
        // x(1) = 1 identically; for s >= 2 the deviation |x(s) - s| halves
        // with each halving of v-1.
        let probe = QContext::<Rat>::new(ratio::<Rat>(1, 1) + ratio::<Rat>(1, 64)).unwrap();
        assert_eq!(probe.lattice_x(1), ratio::<Rat>(1, 1));
        for s in [2i64, 3, 7] {
            let mut devs: Vec<Rat> = Vec::new();
            for k in 1..=7u32 {
                let v: Rat = ratio::<Rat>(1, 1) + ratio::<Rat>(1, 1 << k);
                let ctx = QContext::new(v).unwrap();
                devs.push((ctx.lattice_x(s) - ratio::<Rat>(s, 1)).abs());
            }
            let ratios: Vec<Rat> = devs.windows(2).map(|w| w[0].clone() / w[1].clone()).collect();
            for r in &ratios[ratios.len() - 3..] {
                assert!(*r > ratio::<Rat>(17, 10) && *r < ratio::<Rat>(23, 10), "ratio {r}");
            }
            for w in devs.windows(2) {
                assert!(w[0] > w[1]);
            }
        }
    }

    #[test]
    fn normalized_weights_converge_to_classical() {
        // With beta = 1-p, mass-normalized q-weights approach the binomial
        // weights; the deviation ratio tends to 2 per halving of v-1 (the
        // early steps are pre-asymptotic, so the band is checked on the tail).
        let p: Rat = ratio(1, 3);
        let big_n = 5i64;
        let cparams = ClassicalParams::new(vec![p.clone()], big_n).unwrap();
        let mut worst_devs: Vec<Rat> = Vec::new();
        for k in 1..=8u32 {
            let v: Rat = ratio::<Rat>(1, 1) + ratio::<Rat>(1, 1 << k);
            let ctx = QContext::new(v).unwrap();
            let params =
                KravchukParams::with_default_beta(ctx.clone(), vec![p.clone()], big_n).unwrap();
            let masses: Vec<Rat> = (0..=big_n)
                .map(|s| params.measure_mass(0, s).unwrap())
                .collect();
            let total: Rat = masses.iter().cloned().fold(ratio(0, 1), |a, b| a + b);
            let mut worst: Rat = ratio(0, 1);
            for (s, m) in masses.iter().enumerate() {
                let dev = (m.clone() / total.clone()
                    - cparams.classical_weight(0, s as i64).unwrap())
                .abs();
                if dev > worst {
                    worst = dev;
                }
            }
            worst_devs.push(worst);
        }
        let ratios: Vec<Rat> = worst_devs
            .windows(2)
            .map(|w| w[0].clone() / w[1].clone())
            .collect();
        for r in &ratios[ratios.len() - 3..] {
            assert!(
                *r > ratio::<Rat>(17, 10) && *r < ratio::<Rat>(23, 10),
                "normalized-weight deviation ratio {r}"
            );
        }
        for w in worst_devs.windows(2) {
            assert!(w[0] > w[1], "deviations must decrease monotonically");
        }
    }

    #[test]
    fn limit_scan_degenerate_inputs() {
        let cparams = ClassicalParams::new(vec![ratio::<Rat>(1, 3)], 4).unwrap();
        let scan = limit_scan(&cparams, &MultiIndex::new(vec![1]), &ratio(1, 8), 1).unwrap();
        assert!(scan.ratios.is_empty());
        assert_eq!(scan.deviations.len(), 1);
        assert!(limit_scan(&cparams, &MultiIndex::new(vec![1]), &ratio(-1, 8), 3).is_err());
    }

    #[test]
    fn rodrigues_path_converges_like_solver_path() {
        // At every scan point the monic Rodrigues output equals the solver
        // output, so the Rodrigues-path deviations match the solver-path
        // deviations exactly and inherit the first-order rate.
        let cparams =
            ClassicalParams::new(vec![ratio::<Rat>(1, 4), ratio::<Rat>(1, 2)], 6).unwrap();
        let n = MultiIndex::new(vec![1, 1]);
        let scan = limit_scan(&cparams, &n, &ratio(1, 8), 4).unwrap();
        let classical = crate::rodrigues::rodrigues_classical(&cparams, &n)
            .unwrap()
            .poly;
        for (k, v) in scan.v_sequence.iter().enumerate() {
            let ctx = QContext::new(v.clone()).unwrap();
            let params =
                KravchukParams::with_default_beta(ctx.clone(), cparams.p_vec().to_vec(), 6)
                    .unwrap();
            let kq = crate::rodrigues::rodrigues_q(&params, &n).unwrap().poly;
            let mut worst: Rat = ratio(0, 1);
            for s in 0..=6i64 {
                let dev = (kq.eval(&ctx.lattice_x(s)) - classical.eval(&ratio(s, 1))).abs();
                if dev > worst {
                    worst = dev;
                }
            }
            assert_eq!(worst, scan.deviations[k]);
        }
    }
}
