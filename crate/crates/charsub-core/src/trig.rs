//! Certified enclosures of pi, sin, and ln in exact rational arithmetic.
//!
//! Every function returns a [`RatInterval`] proven to contain the true
//! value: alternating series are bracketed by consecutive partial sums,
//! positive series carry an explicit tail bound. Inputs are rounded onto a
//! dyadic grid first so the denominators stay powers of two.

use crate::dyadic::{Dyadic, RatInterval};
use crate::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

fn pow2(k: i64) -> Rat {
    if k >= 0 {
        Rat::from_integer(BigInt::one() << k as u64)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-k) as u64)
    }
}

/// arctan(1/x) for integer x >= 2, bracketed by consecutive partial sums of
/// the alternating Gregory series.
fn arctan_recip(x: i64, bits: u32) -> RatInterval {
    let xr = Rat::from_integer(BigInt::from(x));
    let x2 = &xr * &xr;
    let target = pow2(-(bits as i64));
    let mut term = Rat::new(BigInt::one(), BigInt::from(x));
    let mut sum = Rat::zero();
    let mut k = 0u32;
    let bounds: (Rat, Rat);
    loop {
        let signed = if k % 2 == 0 { term.clone() } else { -term.clone() };
        let next_sum = &sum + &signed;
        // next term magnitude
        let t2 = &term / &x2;
        let next_term = &t2 * Rat::new(BigInt::from(2 * k as i64 + 1), BigInt::from(2 * k as i64 + 3));
        if next_term < target {
            let with_next = if (k + 1) % 2 == 0 { &next_sum + &next_term } else { &next_sum - &next_term };
            bounds = if next_sum < with_next { (next_sum, with_next) } else { (with_next, next_sum) };
            break;
        }
        sum = next_sum;
        term = next_term;
        k += 1;
    }
    RatInterval::new(bounds.0, bounds.1)
}

/// Enclosure of pi via Machin's identity `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi_interval(bits: u32) -> RatInterval {
    let a = arctan_recip(5, bits + 6);
    let b = arctan_recip(239, bits + 6);
    let sixteen = Rat::from_integer(BigInt::from(16));
    let four = Rat::from_integer(BigInt::from(4));
    RatInterval::new(&a.lo * &sixteen - &b.hi * &four, &a.hi * &sixteen - &b.lo * &four)
}

/// sin(pi * s) for `0 <= s <= 1/2`, certified. The Taylor series at
/// `x = pi * s <= pi/2` alternates with decreasing terms from the start, so
/// a partial sum plus one further term brackets the value.
pub fn sin_pi_frac(s: &Rat, bits: u32) -> RatInterval {
    assert!(!s.is_negative() && *s <= crate::rat(1, 2), "argument outside [0, 1/2]");
    if s.is_zero() {
        return RatInterval::point(Rat::zero());
    }
    let guard = bits + 8;
    let x = pi_interval(guard).scale(s);
    let x = RatInterval::new(
        Dyadic::floor_at(&x.lo, guard).to_rat(),
        Dyadic::ceil_at(&x.hi, guard).to_rat(),
    );
    let x2 = x.mul(&x);
    let target = pow2(-(guard as i64));
    // term_k = x^{2k+1} / (2k+1)!, evaluated as an interval
    let mut term = x.clone();
    let mut sum = RatInterval::point(Rat::zero());
    let mut k = 0i64;
    loop {
        let signed = if k % 2 == 0 { term.clone() } else { term.neg() };
        sum = sum.add(&signed);
        let denom = Rat::from_integer(BigInt::from((2 * k + 2) * (2 * k + 3)));
        term = term.mul(&x2).scale(&denom.recip());
        // squeeze the interval back onto the grid to stop denominator growth
        term = RatInterval::new(
            Dyadic::floor_at(&term.lo, 2 * guard).to_rat(),
            Dyadic::ceil_at(&term.hi, 2 * guard).to_rat(),
        );
        k += 1;
        if term.hi < target {
            // remainder is bounded by the magnitude of the next term
            sum = RatInterval::new(&sum.lo - &term.hi, &sum.hi + &term.hi);
            break;
        }
    }
    // clamp into the codomain [0, 1]
    let lo = if sum.lo.is_negative() { Rat::zero() } else { sum.lo };
    let hi = if sum.hi > Rat::one() { Rat::one() } else { sum.hi };
    RatInterval::new(lo, hi)
}

/// atanh(t) for `0 <= t < 1` with an explicit geometric tail bound.
/// atanh on integer mantissas: `[lo, hi] / 2^g` encloses t, `0 <= t < 1`.
/// Every operation is a multiply, shift, or small division, with lo rounded
/// down and hi up, so the result mantissas enclose atanh(t) at scale `2^g`.
/// The series is truncated once the term drops below an ulp and the
/// geometric tail `t^{2k+1} / ((2k+1)(1 - t^2))` is added to the upper end.
fn atanh_fix(t_lo: &BigInt, t_hi: &BigInt, g: u32) -> (BigInt, BigInt) {
    debug_assert!(!t_lo.is_negative() && t_hi.bits() <= g as u64);
    let one = BigInt::one() << g;
    let sq_lo: BigInt = (t_lo * t_lo) >> g;
    let sq_hi: BigInt = ((t_hi * t_hi) >> g) + 1;
    let mut pow_lo = t_lo.clone();
    let mut pow_hi = t_hi.clone();
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut k: i64 = 0;
    loop {
        let d = BigInt::from(2 * k + 1);
        sum_lo += num_integer::Integer::div_floor(&pow_lo, &d);
        sum_hi += num_integer::Integer::div_ceil(&pow_hi, &d);
        pow_lo = (&pow_lo * &sq_lo) >> g;
        pow_hi = ((&pow_hi * &sq_hi) >> g) + 1;
        k += 1;
        if pow_hi <= BigInt::one() {
            // remaining terms are below one ulp each; bound their sum
            let gap = &one - &sq_hi;
            if gap.is_positive() {
                let d = BigInt::from(2 * k + 1) * gap;
                sum_hi += num_integer::Integer::div_ceil(&(&pow_hi << g), &d) + 1;
            } else {
                // t too close to 1 for the geometric bound; callers keep
                // t <= 1/3 so this cannot happen
                unreachable!("atanh argument must stay away from 1");
            }
            break;
        }
    }
    (sum_lo, sum_hi)
}

pub fn ln2_interval(bits: u32) -> RatInterval {
    let g = bits + 16;
    // ln 2 = 2 atanh(1/3)
    let t_lo = num_integer::Integer::div_floor(&(BigInt::one() << g), &BigInt::from(3));
    let t_hi = &t_lo + 1;
    let (lo, hi) = atanh_fix(&t_lo, &t_hi, g);
    let scale = Rat::new(BigInt::one(), BigInt::one() << (g - 1));
    RatInterval::new(Rat::from_integer(lo) * &scale, Rat::from_integer(hi) * &scale)
}

/// Certified ln(x) for rational x > 0: reduce to `x = 2^e * y`, `y` in
/// `[1, 2)`, then `ln y = 2 atanh((y-1)/(y+1))`.
pub fn ln_interval(x: &Rat, bits: u32) -> RatInterval {
    assert!(x.is_positive(), "ln of a nonpositive rational");
    let g = bits + 16;
    let mut e: i64 = (x.numer().bits() as i64) - (x.denom().bits() as i64);
    // p/q = x / 2^e in [1, 2), kept as a raw integer pair: shifting one
    // side is enough, no reduction needed
    let (mut p, mut q) = (x.numer().clone(), x.denom().clone());
    if e >= 0 {
        q <<= e as u32;
    } else {
        p <<= (-e) as u32;
    }
    while p >= &q << 1 {
        q <<= 1;
        e += 1;
    }
    while p < q {
        p <<= 1;
        e -= 1;
    }
    // t = (y - 1)/(y + 1) = (p - q)/(p + q) in [0, 1/3), one division each way
    let num = (&p - &q) << g;
    let den = p + q;
    let t_lo = num_integer::Integer::div_floor(&num, &den);
    let t_hi = &t_lo + 1;
    let (mut lo, mut hi) = atanh_fix(&t_lo, &t_hi, g);
    // ln y = 2 atanh(t); fold in e * ln 2 at the same scale
    lo <<= 1;
    hi <<= 1;
    if e != 0 {
        let l2_lo = num_integer::Integer::div_floor(
            &(BigInt::one() << g),
            &BigInt::from(3),
        );
        let (a_lo, a_hi) = atanh_fix(&l2_lo, &(&l2_lo + 1), g);
        let (l2_lo, l2_hi) = (a_lo << 1, (a_hi << 1) + 1);
        let er = BigInt::from(e);
        if e > 0 {
            lo += &er * l2_lo;
            hi += &er * l2_hi;
        } else {
            lo += &er * l2_hi;
            hi += &er * l2_lo;
        }
    }
    let scale = Rat::new(BigInt::one(), BigInt::one() << g);
    RatInterval::new(Rat::from_integer(lo) * &scale, Rat::from_integer(hi) * &scale)
}
