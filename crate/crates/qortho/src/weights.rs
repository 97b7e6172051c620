//! The vector of discrete orthogonality measures: q-Kravchuk weights
//! υ_q^{p,β,N}(s), the classical Kravchuk weight, Pearson-type ratio
//! identities, and parameter validation.

use crate::error::{Error, Result};
use crate::qlattice::QContext;
use crate::scalar::{int, powi, Scalar};
use std::fmt;

/// Parameters of the q-Kravchuk vector measure.
///
/// β is stored independently of p (not hard-coded as 1-p): the raising
/// operator shifts β components by powers of q, and a dependent
/// representation cannot express the shifted systems.
#[derive(Debug, Clone, PartialEq)]
pub struct KravchukParams<S> {
    ctx: QContext<S>,
    p: Vec<S>,
    beta: Vec<S>,
    big_n: i64,
}

impl<S: Scalar> KravchukParams<S> {
    pub fn new(ctx: QContext<S>, p: Vec<S>, beta: Vec<S>, big_n: i64) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParams("p-vector must be nonempty".into()));
        }
        if p.len() != beta.len() {
            return Err(Error::InvalidParams(format!(
                "p has {} components but beta has {}",
                p.len(),
                beta.len()
            )));
        }
        if big_n < 0 {
            return Err(Error::InvalidParams(format!("N = {big_n} must be >= 0")));
        }
        Ok(KravchukParams { ctx, p, beta, big_n })
    }

    /// Canonical measure with β_i = 1 - p_i.
    pub fn with_default_beta(ctx: QContext<S>, p: Vec<S>, big_n: i64) -> Result<Self> {
        let beta = p.iter().map(|pi| S::one() - pi.clone()).collect();
        KravchukParams::new(ctx, p, beta, big_n)
    }

    pub fn ctx(&self) -> &QContext<S> {
        &self.ctx
    }

    pub fn r(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self, i: usize) -> &S {
        &self.p[i]
    }

    pub fn beta(&self, i: usize) -> &S {
        &self.beta[i]
    }

    pub fn p_vec(&self) -> &[S] {
        &self.p
    }

    pub fn beta_vec(&self) -> &[S] {
        &self.beta
    }

    pub fn big_n(&self) -> i64 {
        self.big_n
    }

    /// The system a raising step in component i lands in: β_i → q²β_i,
    /// β_j → qβ_j for j ≠ i, N → N + 1.
    pub fn raising_target(&self, i: usize) -> Self {
        let q = self.ctx.q().clone();
        let beta = self
            .beta
            .iter()
            .enumerate()
            .map(|(j, b)| {
                if j == i {
                    b.clone() * q.clone() * q.clone()
                } else {
                    b.clone() * q.clone()
                }
            })
            .collect();
        KravchukParams {
            ctx: self.ctx.clone(),
            p: self.p.clone(),
            beta,
            big_n: self.big_n + 1,
        }
    }

    /// The system the i-th lowering term lives in: β_i → β_i/q²,
    /// β_j → β_j/q for j ≠ i, N → N - 1. Inverse of [`Self::raising_target`].
    pub fn lowering_system(&self, i: usize) -> Self {
        let q = self.ctx.q().clone();
        let beta = self
            .beta
            .iter()
            .enumerate()
            .map(|(j, b)| {
                if j == i {
                    b.clone() / (q.clone() * q.clone())
                } else {
                    b.clone() / q.clone()
                }
            })
            .collect();
        KravchukParams {
            ctx: self.ctx.clone(),
            p: self.p.clone(),
            beta,
            big_n: self.big_n - 1,
        }
    }

    pub fn with_big_n(&self, big_n: i64) -> Self {
        KravchukParams {
            ctx: self.ctx.clone(),
            p: self.p.clone(),
            beta: self.beta.clone(),
            big_n,
        }
    }

    /// Exact weight υ_q^{p_i,β_i,N}(s) = q^C(s,2) [N]_q! p_i^s β_i^(N-s) /
    /// (Γ_q(s+1) Γ_q(N-s+1)). Sites outside [0, N] are rejected.
    pub fn q_weight(&self, i: usize, s: i64) -> Result<S> {
        if s < 0 || s > self.big_n {
            return Err(Error::SiteOutOfRange {
                site: s,
                lo: 0,
                hi: self.big_n,
            });
        }
        let c = &self.ctx;
        let numer = c.v_pow(s * (s - 1))
            * c.q_factorial_sym(self.big_n)
            * powi(&self.p[i], s)
            * powi(&self.beta[i], self.big_n - s);
        let denom = c.q_gamma_int(s + 1)? * c.q_gamma_int(self.big_n - s + 1)?;
        Ok(numer / denom)
    }

    /// Pearson-type ratio υ(s)/υ(s-1) = (p_i/(qβ_i))·(x(N+1) - x(s))/x(s),
    /// for 1 ≤ s ≤ N.
    pub fn pearson_ratio(&self, i: usize, s: i64) -> Result<S> {
        if s < 1 || s > self.big_n {
            return Err(Error::SiteOutOfRange {
                site: s,
                lo: 1,
                hi: self.big_n,
            });
        }
        let c = &self.ctx;
        let x_s = c.lattice_x(s);
        Ok(self.p[i].clone() / (c.q().clone() * self.beta[i].clone())
            * (c.lattice_x(self.big_n + 1) - x_s.clone())
            / x_s)
    }

    /// Mass ω_i(s) = υ_q^{p_i,β_i,N}(s) · △x(s-1/2).
    pub fn measure_mass(&self, i: usize, s: i64) -> Result<S> {
        Ok(self.q_weight(i, s)? * self.ctx.delta_x_half(s))
    }

    /// Report-style validation of the AT-system preconditions.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, pi) in self.p.iter().enumerate() {
            if *pi <= S::zero() || *pi >= S::one() {
                out.push(Violation::POutOfRange { index: i });
            }
        }
        for i in 0..self.p.len() {
            for j in i + 1..self.p.len() {
                if self.p[i] == self.p[j] {
                    out.push(Violation::PDuplicate { i, j });
                }
            }
        }
        for (i, b) in self.beta.iter().enumerate() {
            if *b <= S::zero() {
                out.push(Violation::BetaNotPositive { index: i });
            }
        }
        out
    }

    /// Component pairs whose geometric ratios α_i = p_i/β_i satisfy
    /// α_j = q^k α_i for an integer k with |k| ≤ 2N+2. Such collisions make
    /// orthogonality systems of deep multi-indices singular even though all
    /// p_i are distinct.
    pub fn at_collisions(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        let alphas: Vec<S> = (0..self.r())
            .map(|i| self.p[i].clone() / self.beta[i].clone())
            .collect();
        let range = 2 * self.big_n + 2;
        for i in 0..self.r() {
            for j in 0..self.r() {
                if i == j {
                    continue;
                }
                for k in 0..=range {
                    if alphas[j] == alphas[i].clone() * self.ctx.q_pow(k) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }
}

/// Parameters of the classical multiple Kravchuk measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalParams<S> {
    p: Vec<S>,
    big_n: i64,
}

impl<S: Scalar> ClassicalParams<S> {
    pub fn new(p: Vec<S>, big_n: i64) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParams("p-vector must be nonempty".into()));
        }
        if big_n < 0 {
            return Err(Error::InvalidParams(format!("N = {big_n} must be >= 0")));
        }
        Ok(ClassicalParams { p, big_n })
    }

    pub fn r(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self, i: usize) -> &S {
        &self.p[i]
    }

    pub fn p_vec(&self) -> &[S] {
        &self.p
    }

    pub fn big_n(&self) -> i64 {
        self.big_n
    }

    pub fn with_big_n(&self, big_n: i64) -> Self {
        ClassicalParams {
            p: self.p.clone(),
            big_n,
        }
    }

    /// Binomial weight υ^{p_i,N}(x) = C(N,x) p_i^x (1-p_i)^(N-x).
    pub fn classical_weight(&self, i: usize, x: i64) -> Result<S> {
        if x < 0 || x > self.big_n {
            return Err(Error::SiteOutOfRange {
                site: x,
                lo: 0,
                hi: self.big_n,
            });
        }
        let mut binom = S::one();
        for t in 0..x {
            binom = binom * int::<S>(self.big_n - t) / int::<S>(t + 1);
        }
        Ok(binom
            * powi(&self.p[i], x)
            * powi(&(S::one() - self.p[i].clone()), self.big_n - x))
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, pi) in self.p.iter().enumerate() {
            if *pi <= S::zero() || *pi >= S::one() {
                out.push(Violation::POutOfRange { index: i });
            }
        }
        for i in 0..self.p.len() {
            for j in i + 1..self.p.len() {
                if self.p[i] == self.p[j] {
                    out.push(Violation::PDuplicate { i, j });
                }
            }
        }
        out
    }
}

/// A single validation finding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    POutOfRange { index: usize },
    PDuplicate { i: usize, j: usize },
    BetaNotPositive { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::POutOfRange { index } => {
                write!(f, "p[{index}] outside (0, 1)")
            }
            Violation::PDuplicate { i, j } => write!(f, "p[{i}] equals p[{j}]"),
            Violation::BetaNotPositive { index } => {
                write!(f, "beta[{index}] is not positive")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rat};

    fn ctx2() -> QContext<Rat> {
        QContext::new(ratio(2, 1)).unwrap()
    }

    fn params_r1(n: i64) -> KravchukParams<Rat> {
        KravchukParams::new(ctx2(), vec![ratio(1, 3)], vec![ratio(2, 3)], n).unwrap()
    }

    #[test]
    fn weight_values_frozen() {
        let p = params_r1(2);
        assert_eq!(p.q_weight(0, 0).unwrap(), ratio::<Rat>(2, 9));
        assert_eq!(p.q_weight(0, 1).unwrap(), ratio::<Rat>(5, 9));
        assert_eq!(p.q_weight(0, 2).unwrap(), ratio::<Rat>(2, 9));
        assert!(p.q_weight(0, 3).is_err());
        assert!(p.q_weight(0, -1).is_err());
        let trivial = KravchukParams::new(ctx2(), vec![ratio(1, 3)], vec![ratio(2, 3)], 0).unwrap();
        assert_eq!(trivial.q_weight(0, 0).unwrap(), ratio::<Rat>(1, 1));
        assert_eq!(trivial.measure_mass(0, 0).unwrap(), ratio::<Rat>(1, 2));
    }

    #[test]
    fn pearson_ratio_is_exact_weight_quotient() {
        let cases = [
            params_r1(5),
            KravchukParams::new(
                ctx2(),
                vec![ratio(1, 3), ratio(1, 2)],
                vec![ratio(2, 3), ratio(1, 2)],
                4,
            )
            .unwrap(),
            KravchukParams::new(
                QContext::new(ratio(4, 5)).unwrap(),
                vec![ratio(1, 5), ratio(2, 3)],
                vec![ratio(4, 5), ratio(1, 3)],
                6,
            )
            .unwrap(),
        ];
        for params in &cases {
            for i in 0..params.r() {
                for s in 1..=params.big_n() {
                    let quotient =
                        params.q_weight(i, s).unwrap() / params.q_weight(i, s - 1).unwrap();
                    assert_eq!(params.pearson_ratio(i, s).unwrap(), quotient);
                }
            }
        }
    }

    #[test]
    fn weight_positive_on_support() {
        let params = KravchukParams::new(
            ctx2(),
            vec![ratio(1, 3), ratio(1, 2)],
            vec![ratio(2, 3), ratio(1, 2)],
            4,
        )
        .unwrap();
        let mut total = ratio::<Rat>(0, 1);
        for i in 0..2 {
            for s in 0..=4 {
                let w = params.measure_mass(i, s).unwrap();
                assert!(w > ratio::<Rat>(0, 1));
                total += w;
            }
        }
        assert!(total > ratio::<Rat>(0, 1));
    }

    #[test]
    fn q_weight_reproduces_omega_func() {
        // r=1, beta = 1-p: the weight equals the single-measure q-Kravchuk
        // weight (p/(1-p))^s q^(s(s-1)/2) [N]_q! (1-p)^N / (Γ_q(N-s+1)Γ_q(s+1)).
        for (vn, vd) in [(2i64, 1i64), (4, 5)] {
            let ctx = QContext::<Rat>::new(ratio(vn, vd)).unwrap();
            for big_n in 0..=6i64 {
                let p: Rat = ratio(1, 3);
                let params = KravchukParams::with_default_beta(ctx.clone(), vec![p.clone()], big_n)
                    .unwrap();
                for s in 0..=big_n {
                    let omega = powi(&(p.clone() / (ratio::<Rat>(1, 1) - p.clone())), s)
                        * ctx.v_pow(s * (s - 1))
                        * ctx.q_factorial_sym(big_n)
                        * powi(&(ratio::<Rat>(1, 1) - p.clone()), big_n)
                        / (ctx.q_gamma_int(big_n - s + 1).unwrap()
                            * ctx.q_gamma_int(s + 1).unwrap());
                    assert_eq!(params.q_weight(0, s).unwrap(), omega);
                }
            }
        }
    }

    #[test]
    fn classical_weights() {
        let p1 = ClassicalParams::new(vec![ratio::<Rat>(1, 3)], 1).unwrap();
        assert_eq!(p1.classical_weight(0, 0).unwrap(), ratio::<Rat>(2, 3));
        assert_eq!(p1.classical_weight(0, 1).unwrap(), ratio::<Rat>(1, 3));
        let p2 = ClassicalParams::new(vec![ratio::<Rat>(1, 2)], 2).unwrap();
        assert_eq!(p2.classical_weight(0, 0).unwrap(), ratio::<Rat>(1, 4));
        assert_eq!(p2.classical_weight(0, 1).unwrap(), ratio::<Rat>(1, 2));
        assert_eq!(p2.classical_weight(0, 2).unwrap(), ratio::<Rat>(1, 4));
        for big_n in 0..=8i64 {
            let p = ClassicalParams::new(vec![ratio::<Rat>(2, 7)], big_n).unwrap();
            let total: Rat = (0..=big_n)
                .map(|x| p.classical_weight(0, x).unwrap())
                .fold(ratio(0, 1), |a, b| a + b);
            assert_eq!(total, ratio::<Rat>(1, 1));
        }
        assert!(p2.classical_weight(0, 3).is_err());
    }

    #[test]
    fn validation_report() {
        let bad = KravchukParams::new(
            ctx2(),
            vec![ratio(1, 3), ratio(1, 3)],
            vec![ratio(2, 3), ratio(-1, 2)],
            4,
        )
        .unwrap();
        let report = bad.validate();
        assert!(report.contains(&Violation::PDuplicate { i: 0, j: 1 }));
        assert!(report.contains(&Violation::BetaNotPositive { index: 1 }));
        let good = KravchukParams::new(
            ctx2(),
            vec![ratio(1, 3), ratio(1, 2)],
            vec![ratio(2, 3), ratio(1, 2)],
            4,
        )
        .unwrap();
        assert!(good.validate().is_empty());
        assert!(QContext::<Rat>::new(ratio(1, 1)).is_err());
    }

    #[test]
    fn shift_helpers_invert() {
        let params = KravchukParams::new(
            ctx2(),
            vec![ratio(1, 3), ratio(1, 2)],
            vec![ratio(2, 3), ratio(1, 2)],
            4,
        )
        .unwrap();
        let up = params.raising_target(0);
        assert_eq!(up.big_n(), 5);
        assert_eq!(*up.beta(0), ratio::<Rat>(2, 3) * ratio::<Rat>(16, 1));
        assert_eq!(*up.beta(1), ratio::<Rat>(1, 2) * ratio::<Rat>(4, 1));
        assert_eq!(up.lowering_system(0), params);
    }

    #[test]
    fn at_collision_detection() {
        // v = 2 (q = 4): alpha(1/5) = 1/4, alpha(1/2) = 1, ratio q.
        let colliding = KravchukParams::with_default_beta(
            ctx2(),
            vec![ratio(1, 5), ratio(1, 2)],
            6,
        )
        .unwrap();
        let hits = colliding.at_collisions();
        assert!(hits.contains(&(0, 1, 1)));
        let clean =
            KravchukParams::with_default_beta(ctx2(), vec![ratio(1, 3), ratio(1, 2)], 6).unwrap();
        assert!(clean.at_collisions().is_empty());
    }
}
