//! Exact scalar kernel for the non-uniform lattice x(s) = (q^s - 1)/(q - 1).
//!
//! The deformation parameter is stored as v = q^(1/2), so every half-integer
//! power of q appearing in the formulas is an exact integer power of v.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{powi, Scalar};

/// Deformation context: v = q^(1/2) with q = v² cached.
#[derive(Debug, Clone, PartialEq)]
pub struct QContext<S> {
    v: S,
    q: S,
}

impl<S: Scalar> QContext<S> {
    /// Requires v > 0 and v ≠ 1.
    pub fn new(v: S) -> Result<Self> {
        if v <= S::zero() {
            return Err(Error::InvalidContext(format!("v = {v} must be positive")));
        }
        if v == S::one() {
            return Err(Error::InvalidContext("v = 1 makes q = 1 degenerate".into()));
        }
        let q = v.clone() * v.clone();
        Ok(QContext { v, q })
    }

    pub fn v(&self) -> &S {
        &self.v
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    /// v^k, exact for any integer k.
    pub fn v_pow(&self, k: i64) -> S {
        powi(&self.v, k)
    }

    /// q^k = v^(2k).
    pub fn q_pow(&self, k: i64) -> S {
        powi(&self.q, k)
    }

    /// Lattice point x(s) = (q^s - 1)/(q - 1), any integer s.
    pub fn lattice_x(&self, s: i64) -> S {
        (self.q_pow(s) - S::one()) / (self.q.clone() - S::one())
    }

    /// △x(s - 1/2) = ▽x(s + 1/2) = q^(s - 1/2) = v^(2s - 1).
    pub fn delta_x_half(&self, s: i64) -> S {
        self.v_pow(2 * s - 1)
    }

    /// Lattice point at the half-integer site twice_s/2: (v^twice_s - 1)/(q - 1).
    pub fn lattice_x_half(&self, twice_s: i64) -> S {
        (self.v_pow(twice_s) - S::one()) / (self.q.clone() - S::one())
    }

    /// Symmetric q-number [n]_q = (v^n - v^(-n))/(v - v^(-1)).
    pub fn q_number_sym(&self, n: i64) -> S {
        (self.v_pow(n) - self.v_pow(-n)) / (self.v.clone() - self.v_pow(-1))
    }

    /// Γ_q(n) = x(1)·x(2)⋯x(n-1) at positive integers; poles elsewhere.
    pub fn q_gamma_int(&self, n: i64) -> Result<S> {
        if n <= 0 {
            return Err(Error::GammaPole(n));
        }
        let mut acc = S::one();
        for k in 1..n {
            acc = acc * self.lattice_x(k);
        }
        Ok(acc)
    }

    /// [n]_q! = [1]_q·[2]_q⋯[n]_q with symmetric q-numbers.
    pub fn q_factorial_sym(&self, n: i64) -> S {
        assert!(n >= 0, "q-factorial needs a nonnegative argument");
        let mut acc = S::one();
        for k in 1..=n {
            acc = acc * self.q_number_sym(k);
        }
        acc
    }

    /// q-Stirling value [s]_q^(k) = x(s)·x(s-1)⋯x(s-k+1); k = 0 gives 1.
    pub fn q_stirling_value(&self, s: i64, k: u32) -> S {
        let mut acc = S::one();
        for j in 0..k as i64 {
            acc = acc * self.lattice_x(s - j);
        }
        acc
    }

    /// Gaussian binomial bracket; 0 outside 0 ≤ k ≤ m.
    pub fn q_binomial_bracket(&self, m: i64, k: i64) -> S {
        if k < 0 || k > m {
            return S::zero();
        }
        let mut acc = S::one();
        for j in 1..=k {
            acc = acc * (S::one() - self.q_pow(m - k + j)) / (S::one() - self.q_pow(j));
        }
        acc
    }

    /// q-Pochhammer (a; q)_k = ∏_{j=0}^{k-1}(1 - a q^j).
    pub fn q_pochhammer(&self, a: &S, k: u32) -> S {
        let mut acc = S::one();
        for j in 0..k as i64 {
            acc = acc * (S::one() - a.clone() * self.q_pow(j));
        }
        acc
    }

    /// The degree-k polynomial in X = x(s) whose value at every integer s is
    /// [s]_q^(k): ∏_{j=0}^{k-1} q^(-j)(X - x(j)). Leading coefficient
    /// q^(-k(k-1)/2).
    pub fn q_stirling_poly(&self, k: u32) -> Poly<S> {
        let mut acc = Poly::one();
        for j in 0..k as i64 {
            let factor = Poly::new(vec![
                -self.q_pow(-j) * self.lattice_x(j),
                self.q_pow(-j),
            ]);
            acc = &acc * &factor;
        }
        acc
    }
}
