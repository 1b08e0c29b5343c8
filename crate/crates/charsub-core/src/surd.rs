//! Quadratic surds `(a + b sqrt(d)) / c` in canonical form: the only
//! built-in certified irrationals with serializable descriptors.
//!
//! Canonical means `c > 0`, `gcd(a, b, c) = 1`, and `d` squarefree with
//! `d >= 2` (a vanished radical part collapses to `b = 0, d = 1`). All
//! comparisons against rationals are exact sign tests on integers, so
//! floors, mod-1 reduction, and enclosures carry proofs rather than
//! rounding guesses.

use crate::dyadic::RatInterval;
use crate::error::{precondition, Error, Result};
use crate::Rat;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSurd {
    a: BigInt,
    b: BigInt,
    d: BigInt,
    c: BigInt,
}

/// Largest square divisor split: returns (s, d') with `d = s^2 * d'`,
/// `d'` squarefree. Trial division; radicands here are desk-scale.
fn split_square(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut square_root = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let p2 = &p * &p;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            square_root *= &p;
        }
        p += 1;
    }
    (square_root, rest)
}

impl QuadSurd {
    /// `(a + b sqrt(d)) / c`, canonicalized. `c` must be nonzero and `d`
    /// nonnegative.
    pub fn new(a: BigInt, b: BigInt, d: BigInt, c: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if d.is_negative() {
            return Err(precondition("negative radicand"));
        }
        let (mut a, mut b, mut c) = (a, b, c);
        let mut d = d;
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let (sq, rest) = split_square(&d);
        b *= sq;
        d = rest;
        if d.is_one() || d.is_zero() {
            // sqrt(1) = 1, sqrt(0) = 0: rational
            if d.is_one() {
                a += &b;
            }
            b = BigInt::zero();
            d = BigInt::one();
        }
        if b.is_zero() {
            d = BigInt::one();
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_zero() && !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(QuadSurd { a, b, d, c })
    }

    pub fn from_rat(r: &Rat) -> Self {
        QuadSurd::new(r.numer().clone(), BigInt::zero(), BigInt::one(), r.denom().clone()).unwrap()
    }

    pub fn sqrt_of(d: u64) -> Result<Self> {
        QuadSurd::new(BigInt::zero(), BigInt::one(), BigInt::from(d), BigInt::one())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| Rat::new(self.a.clone(), self.c.clone()))
    }

    pub fn neg(&self) -> Self {
        QuadSurd::new(-self.a.clone(), -self.b.clone(), self.d.clone(), self.c.clone()).unwrap()
    }

    pub fn add_rat(&self, r: &Rat) -> Self {
        // (a + b sqrt d)/c + p/q = (aq + pc + bq sqrt d) / (cq)
        let (p, q) = (r.numer(), r.denom());
        QuadSurd::new(
            &self.a * q + p * &self.c,
            &self.b * q,
            self.d.clone(),
            &self.c * q,
        )
        .unwrap()
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        let (p, q) = (r.numer(), r.denom());
        QuadSurd::new(&self.a * p, &self.b * p, self.d.clone(), &self.c * q).unwrap()
    }

    /// Sum of two surds sharing a radicand (or with either side rational).
    pub fn add(&self, other: &QuadSurd) -> Result<Self> {
        if self.is_rational() {
            return Ok(other.add_rat(&self.as_rat().unwrap()));
        }
        if other.is_rational() {
            return Ok(self.add_rat(&other.as_rat().unwrap()));
        }
        if self.d != other.d {
            return Err(precondition("distinct radicands have no quadratic-surd sum"));
        }
        QuadSurd::new(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            self.d.clone(),
            &self.c * &other.c,
        )
    }

    /// Exact comparison with a rational. Strict for genuine irrationals.
    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        // (a + b sqrt d)/c  vs  p/q   <=>   b q sqrt(d)  vs  p c - a q
        let (p, q) = (r.numer(), r.denom());
        let lhs_coeff = &self.b * q; // times sqrt(d)
        let rhs = p * &self.c - &self.a * q;
        match (lhs_coeff.sign(), rhs.sign()) {
            (num_bigint::Sign::NoSign, _) => BigInt::zero().cmp(&rhs),
            (num_bigint::Sign::Plus, num_bigint::Sign::Minus | num_bigint::Sign::NoSign) => {
                Ordering::Greater
            }
            (num_bigint::Sign::Minus, num_bigint::Sign::Plus | num_bigint::Sign::NoSign) => {
                Ordering::Less
            }
            (num_bigint::Sign::Plus, num_bigint::Sign::Plus) => {
                (&lhs_coeff * &lhs_coeff * &self.d).cmp(&(&rhs * &rhs))
            }
            (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => {
                (&rhs * &rhs).cmp(&(&lhs_coeff * &lhs_coeff * &self.d))
            }
        }
    }

    pub fn is_zero_value(&self) -> bool {
        self.b.is_zero() && self.a.is_zero()
    }

    /// Exact floor. For irrational values the bracketing integer sqrt is
    /// strict, so no boundary case exists.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rat() {
            return r.floor().to_integer();
        }
        // b sqrt(d) lies strictly between s and s+1 (sign-adjusted), where
        // s = isqrt(b^2 d)
        let b2d = &self.b * &self.b * &self.d;
        let s = b2d.sqrt();
        let t_lo = if self.b.is_positive() { s.clone() } else { -(&s + 1u32) };
        let mut m = (&self.a + t_lo).div_floor(&self.c);
        // v in [m, m+2); settle by exact comparison
        loop {
            let next = Rat::from_integer(&m + 1u32);
            if self.cmp_rat(&next) == Ordering::Less {
                break;
            }
            m += 1u32;
        }
        debug_assert!(self.cmp_rat(&Rat::from_integer(m.clone())) != Ordering::Less);
        m
    }

    /// Fractional part in `[0, 1)`, as a surd over the same radicand.
    pub fn mod1(&self) -> Self {
        let f = self.floor();
        self.add_rat(&Rat::from_integer(-f))
    }

    /// `floor(value * 2^k)`: the canonical grid bracket numerator.
    pub fn scaled_floor(&self, k: u32) -> BigInt {
        QuadSurd::new(
            &self.a << k,
            &self.b << k,
            self.d.clone(),
            self.c.clone(),
        )
        .unwrap()
        .floor()
    }

    /// Certified rational enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> RatInterval {
        if let Some(r) = self.as_rat() {
            return RatInterval::point(r);
        }
        let f = self.scaled_floor(bits);
        let lo = Rat::new(f.clone(), BigInt::one() << bits);
        let hi = Rat::new(f + 1u32, BigInt::one() << bits);
        RatInterval::new(lo, hi)
    }

    /// Serialized descriptor form.
    pub fn descriptor(&self) -> String {
        use alloc::format;
        format!("surd({},{},{},{})", self.a, self.b, self.d, self.c)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
    }
}
