//! Dyadic rationals `m * 2^e` and closed intervals over them.
//!
//! Dyadics are the enclosure endpoints for every certified irrational in the
//! crate: closed under `+ - *`, and rounding a rational outward onto the
//! `2^-k` grid is a floor/ceil of a shifted quotient. Nested grid brackets
//! at increasing `k` are how refinement stays canonical.

use crate::Rat;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant = &self.mant >> tz;
            self.exp += tz as i64;
        }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Rat::from_integer(&self.mant << self.exp as u64)
        } else {
            Rat::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Largest multiple of `2^-k` that is `<= r`.
    pub fn floor_at(r: &Rat, k: u32) -> Self {
        let scaled = r * Rat::from_integer(BigInt::one() << k);
        Dyadic::new(scaled.floor().to_integer(), -(k as i64))
    }

    /// Smallest multiple of `2^-k` that is `>= r`.
    pub fn ceil_at(r: &Rat, k: u32) -> Self {
        let scaled = r * Rat::from_integer(BigInt::one() << k);
        Dyadic::new(scaled.ceil().to_integer(), -(k as i64))
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -self.mant.clone(), exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 {
            write!(f, "{}", &self.mant << self.exp as u64)
        } else {
            write!(f, "{}/2^{}", self.mant, -self.exp)
        }
    }
}

/// Closed interval with dyadic endpoints, `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi);
        DyadicInterval { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        DyadicInterval { lo: d.clone(), hi: d }
    }

    /// Outward rounding of a rational interval onto the `2^-k` grid.
    pub fn outward(lo: &Rat, hi: &Rat, k: u32) -> Self {
        DyadicInterval::new(Dyadic::floor_at(lo, k), Dyadic::ceil_at(hi, k))
    }

    pub fn width(&self) -> Rat {
        self.hi.to_rat() - self.lo.to_rat()
    }

    pub fn contains_rat(&self, r: &Rat) -> bool {
        self.lo.to_rat() <= *r && *r <= self.hi.to_rat()
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn to_rat_interval(&self) -> RatInterval {
        RatInterval { lo: self.lo.to_rat(), hi: self.hi.to_rat() }
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Closed rational interval used for intermediate certified arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(r: Rat) -> Self {
        RatInterval { lo: r.clone(), hi: r }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &RatInterval) -> Self {
        RatInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &RatInterval) -> Self {
        RatInterval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Self {
        RatInterval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_negative() {
            RatInterval { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            RatInterval { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    pub fn mul(&self, o: &RatInterval) -> Self {
        let candidates: Vec<Rat> = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ]
        .into();
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    /// Certified strict comparison against a rational: `Some(Ordering)` when
    /// the whole interval is on one side, `None` when it straddles.
    pub fn cmp_rat(&self, r: &Rat) -> Option<Ordering> {
        if self.hi < *r {
            Some(Ordering::Less)
        } else if self.lo > *r {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && self.lo == *r {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn to_dyadic(&self, k: u32) -> DyadicInterval {
        DyadicInterval::outward(&self.lo, &self.hi, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn dyadic_arithmetic_exact() {
        let a = Dyadic::new(BigInt::from(3), -2); // 3/4
        let b = Dyadic::new(BigInt::from(5), -3); // 5/8
        assert_eq!(a.add(&b).to_rat(), rat(11, 8));
        assert_eq!(a.sub(&b).to_rat(), rat(1, 8));
        assert_eq!(a.mul(&b).to_rat(), rat(15, 32));
        assert!(a > b);
    }

    #[test]
    fn grid_rounding_brackets() {
        let r = rat(1, 3);
        for k in [1u32, 4, 10, 30] {
            let lo = Dyadic::floor_at(&r, k).to_rat();
            let hi = Dyadic::ceil_at(&r, k).to_rat();
            assert!(lo < r && r < hi);
            assert_eq!(&hi - &lo, rat(1, 1 << k.min(62)));
        }
        // exact dyadics round to themselves
        assert_eq!(Dyadic::floor_at(&rat(3, 8), 3), Dyadic::ceil_at(&rat(3, 8), 3));
    }

    #[test]
    fn nested_grid_brackets() {
        let r = rat(1, 7);
        let mut prev = DyadicInterval::outward(&r, &r, 2);
        for k in 3u32..20 {
            let cur = DyadicInterval::outward(&r, &r, k);
            assert!(prev.contains(&cur));
            prev = cur;
        }
    }

    #[test]
    fn interval_ops_outward() {
        let a = RatInterval::new(rat(1, 4), rat(1, 3));
        let b = RatInterval::new(rat(-1, 2), rat(1, 5));
        let s = a.add(&b);
        assert_eq!(s.lo, rat(-1, 4));
        assert_eq!(s.hi, rat(8, 15));
        let m = a.mul(&b);
        assert_eq!(m.lo, rat(-1, 6));
        assert_eq!(m.hi, rat(1, 15));
        assert_eq!(a.cmp_rat(&rat(1, 5)), Some(Ordering::Greater));
        assert_eq!(a.cmp_rat(&rat(7, 24)), None);
    }
}
