//! Dense univariate polynomials and integer-site grid functions.
//!
//! `Poly` is a coefficient vector in the lattice variable X = x(s), lowest
//! power first, with no trailing zeros (the zero polynomial has an empty
//! vector). All arithmetic is exact in the scalar field.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial X.
    pub fn x() -> Self {
        Poly::new(vec![S::zero(), S::one()])
    }

    /// c · X^k.
    pub fn monomial(c: S, k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of X^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &S) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Monic normalization; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&(S::one() / lc.clone())),
        }
    }

    /// f(aX + b), exact composition with a degree-one polynomial.
    pub fn compose_linear(&self, a: &S, b: &S) -> Self {
        let mut acc = Poly::zero();
        let lin = Poly::new(vec![b.clone(), a.clone()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| crate::scalar::int::<S>(k as i64) * c.clone())
                .collect(),
        )
    }

    /// Euclidean division over the scalar field.
    pub fn div_rem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero(), "division by zero polynomial");
        let dd = den.degree().unwrap();
        let lc = den.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![S::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap().clone() / lc.clone();
            if !c.is_zero() {
                quo[k] = c.clone();
                for (j, dc) in den.coeffs.iter().enumerate() {
                    let idx = k + j;
                    rem[idx] = rem[idx].clone() - c.clone() * dc.clone();
                }
            }
            rem.pop();
            while rem.last().is_some_and(|t| t.is_zero()) {
                rem.pop();
            }
            if rem.len() < dd + 1 {
                break;
            }
        }
        (Poly::new(quo), Poly::new(rem))
    }

    /// Exact division; errors when the remainder is nonzero.
    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(den);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::DivisionRemainder)
        }
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

/// Exact values of a function at consecutive integer lattice sites.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<S> {
    base: i64,
    values: Vec<S>,
}

impl<S: Scalar> GridFunction<S> {
    pub fn new(base: i64, values: Vec<S>) -> Self {
        assert!(!values.is_empty(), "grid function needs at least one site");
        GridFunction { base, values }
    }

    /// Tabulate `f` on sites lo..=hi.
    pub fn tabulate(lo: i64, hi: i64, mut f: impl FnMut(i64) -> S) -> Self {
        assert!(lo <= hi);
        GridFunction::new(lo, (lo..=hi).map(&mut f).collect())
    }

    pub fn first_site(&self) -> i64 {
        self.base
    }

    pub fn last_site(&self) -> i64 {
        self.base + self.values.len() as i64 - 1
    }

    pub fn get(&self, s: i64) -> Result<&S> {
        if s < self.base || s > self.last_site() {
            return Err(Error::SiteOutOfRange {
                site: s,
                lo: self.base,
                hi: self.last_site(),
            });
        }
        Ok(&self.values[(s - self.base) as usize])
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// Pointwise product with `f(s)`.
    pub fn map_sites(&self, mut f: impl FnMut(i64, &S) -> S) -> Self {
        GridFunction::new(
            self.base,
            self.values
                .iter()
                .enumerate()
                .map(|(k, v)| f(self.base + k as i64, v))
                .collect(),
        )
    }

    /// Restrict to lo..=hi.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo < self.base || hi > self.last_site() || lo > hi {
            return Err(Error::SiteOutOfRange {
                site: lo,
                lo: self.base,
                hi: self.last_site(),
            });
        }
        let a = (lo - self.base) as usize;
        let b = (hi - self.base) as usize;
        Ok(GridFunction::new(lo, self.values[a..=b].to_vec()))
    }
}
