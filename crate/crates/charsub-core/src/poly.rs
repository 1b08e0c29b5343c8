//! Integer polynomials with certified eventual behavior.
//!
//! Divergence and monotonicity arguments about integer sequences reduce to
//! "p(n) > 0 for all n >= N" for an explicit N. The Cauchy root bound gives
//! such an N outright: every real root of p lies strictly inside
//! `1 + max |c_i| / |c_d|`, so beyond that the sign of the leading
//! coefficient rules.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    /// Coefficients low to high, no trailing zeros.
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::new(out)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// p(n + k) by binomial expansion.
    pub fn shift(&self, k: &BigInt) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let d = self.coeffs.len();
        let mut out = vec![BigInt::zero(); d];
        // Horner in the shifted variable: p(n+k) built from the top down
        for c in self.coeffs.iter().rev() {
            // multiply accumulated poly by (n + k), then add c
            let mut next = vec![BigInt::zero(); d];
            for i in (0..d - 1).rev() {
                if !out[i].is_zero() {
                    let v = core::mem::take(&mut out[i]);
                    next[i + 1] += &v;
                    next[i] += v * k;
                }
            }
            next[0] += c;
            out = next;
        }
        IntPoly::new(out)
    }

    /// Forward difference p(n+1) - p(n); degree drops by one.
    pub fn forward_difference(&self) -> IntPoly {
        self.shift(&BigInt::one()).add(&self.neg())
    }

    /// N >= 1 such that every real root of p has absolute value < N.
    /// None for the zero polynomial.
    pub fn cauchy_root_bound(&self) -> Option<BigInt> {
        let lead = self.leading()?;
        let max_ratio_ceil = self
            .coeffs
            .iter()
            .take(self.coeffs.len() - 1)
            .map(|c| c.abs().div_ceil(&lead.abs()))
            .max()
            .unwrap_or_else(BigInt::zero);
        Some(max_ratio_ceil + 1 + BigInt::one())
    }

    /// Smallest-effort certificate that p(n) > 0 for all integers n >= N:
    /// returns such an N, or None when the leading coefficient is not
    /// positive (then p is eventually <= 0 instead).
    pub fn eventually_positive_from(&self) -> Option<BigInt> {
        let lead = self.leading()?;
        if !lead.is_positive() {
            return None;
        }
        let n = self.cauchy_root_bound()?;
        debug_assert!(self.eval(&n).is_positive());
        Some(n)
    }

    /// N such that p(n+1) > p(n) for all n >= N.
    pub fn eventually_increasing_from(&self) -> Option<BigInt> {
        self.forward_difference().eventually_positive_from()
    }
}
