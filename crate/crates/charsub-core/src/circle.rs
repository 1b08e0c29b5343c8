//! Points of the circle T = R/Z with exact arithmetic.
//!
//! A point is either a canonical rational in `[0, 1)` or a certified
//! irrational: a width-halving enclosure refiner plus, when available, a
//! quadratic-surd descriptor that keeps arithmetic symbolic. The metric
//! side is the chord distance `chord(t) = |1 - e^{2 pi i t}| = 2 sin(pi |t|)`
//! with its exact values at the five classical angles and the linear
//! envelope `4 |t| <= chord(t) <= 2 pi |t|` used for summability bounds.

use crate::dyadic::{DyadicInterval, RatInterval};
use crate::error::{precondition, Error, Result};
use crate::surd::QuadSurd;
use crate::trig::{pi_interval, sin_pi_frac};
use crate::{rat, Rat};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::cmp::Ordering;
use core::fmt;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Default enclosure target width `2^-30` for chord evaluation.
pub const DEFAULT_BITS: u32 = 30;

/// Hard ceiling on refinement requests; hitting it means an input refiner
/// does not converge as certified.
const REFINE_CAP: u32 = 1 << 14;

/// Enclosure procedure for one irrational real: must return an interval
/// containing the value with width at most `2^-bits`, nested as `bits`
/// grows along any one call sequence.
pub trait Refiner: Send + Sync {
    fn enclose(&self, bits: u32) -> Result<RatInterval>;
}

impl<F> Refiner for F
where
    F: Fn(u32) -> Result<RatInterval> + Send + Sync,
{
    fn enclose(&self, bits: u32) -> Result<RatInterval> {
        self(bits)
    }
}

#[derive(Clone)]
pub struct IrrationalPoint {
    surd: Option<QuadSurd>,
    refiner: Arc<dyn Refiner>,
}

impl IrrationalPoint {
    /// Whether the point has a serializable symbolic descriptor.
    pub fn descriptor(&self) -> Option<&QuadSurd> {
        self.surd.as_ref()
    }
}

impl fmt::Debug for IrrationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.surd {
            Some(s) => write!(f, "IrrationalPoint({s})"),
            None => write!(f, "IrrationalPoint(<procedural>)"),
        }
    }
}

/// A point of T: canonical rational or certified irrational.
#[derive(Debug, Clone)]
pub enum CirclePoint {
    Rational(Rat),
    Irrational(IrrationalPoint),
}

/// Canonical representative of p/q on the circle. Errors on q = 0.
pub fn canonicalize(p: BigInt, q: BigInt) -> Result<CirclePoint> {
    if q.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let r = Rat::new(p, q);
    Ok(CirclePoint::Rational(reduce_mod1(&r)))
}

pub fn reduce_mod1(r: &Rat) -> Rat {
    r - Rat::from_integer(r.floor().to_integer())
}

impl CirclePoint {
    pub fn zero() -> Self {
        CirclePoint::Rational(Rat::zero())
    }

    pub fn from_rat(r: &Rat) -> Self {
        CirclePoint::Rational(reduce_mod1(r))
    }

    /// Surd-backed irrational point, reduced into `[0, 1)`. A rational
    /// surd collapses to the rational variant.
    pub fn from_surd(s: QuadSurd) -> Self {
        let m = s.mod1();
        if let Some(r) = m.as_rat() {
            return CirclePoint::Rational(r);
        }
        let refiner_surd = m.clone();
        CirclePoint::Irrational(IrrationalPoint {
            surd: Some(m),
            refiner: Arc::new(move |bits: u32| Ok(refiner_surd.enclosure(bits))),
        })
    }

    /// Opaque certified irrational from a refinement procedure. Marked
    /// non-serializable (no descriptor). The value must lie in `[0, 1)`.
    pub fn from_refiner(r: Arc<dyn Refiner>) -> Self {
        CirclePoint::Irrational(IrrationalPoint { surd: None, refiner: r })
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, CirclePoint::Rational(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            CirclePoint::Rational(r) => Some(r),
            CirclePoint::Irrational(_) => None,
        }
    }

    /// The backing surd of a symbolic irrational, `None` for rationals and
    /// procedural points.
    pub fn as_surd(&self) -> Option<&QuadSurd> {
        match self {
            CirclePoint::Irrational(p) => p.surd.as_ref(),
            CirclePoint::Rational(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CirclePoint::Rational(r) if r.is_zero())
    }

    /// Rational enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> Result<RatInterval> {
        match self {
            CirclePoint::Rational(r) => Ok(RatInterval::point(r.clone())),
            CirclePoint::Irrational(p) => {
                let iv = p.refiner.enclose(bits)?;
                if iv.width() > Rat::new(BigInt::one(), BigInt::one() << bits) {
                    return Err(precondition("refiner violated its width contract"));
                }
                Ok(iv)
            }
        }
    }

    /// Canonical dyadic grid bracket: the minimal `2^-bits` cell around the
    /// value. Nested across increasing `bits`.
    pub fn refine(&self, bits: u32) -> Result<DyadicInterval> {
        match self {
            CirclePoint::Rational(r) => Ok(DyadicInterval::outward(r, r, bits)),
            CirclePoint::Irrational(p) => {
                if let Some(s) = &p.surd {
                    let f = s.scaled_floor(bits);
                    let lo = crate::dyadic::Dyadic::new(f.clone(), -(bits as i64));
                    let hi = crate::dyadic::Dyadic::new(f + 1u32, -(bits as i64));
                    return Ok(DyadicInterval::new(lo, hi));
                }
                let mut req = bits + 2;
                loop {
                    let iv = self.enclosure(req)?;
                    let cell_lo = (iv.lo.clone() * Rat::from_integer(BigInt::one() << bits))
                        .floor()
                        .to_integer();
                    let cell_hi = (iv.hi.clone() * Rat::from_integer(BigInt::one() << bits))
                        .floor()
                        .to_integer();
                    if cell_lo == cell_hi {
                        let lo = crate::dyadic::Dyadic::new(cell_lo.clone(), -(bits as i64));
                        let hi = crate::dyadic::Dyadic::new(cell_lo + 1u32, -(bits as i64));
                        return Ok(DyadicInterval::new(lo, hi));
                    }
                    if req >= REFINE_CAP {
                        return Err(Error::BudgetExhausted(String::from(
                            "grid bracket did not separate from a dyadic boundary",
                        )));
                    }
                    req *= 2;
                }
            }
        }
    }

    pub fn serializable(&self) -> bool {
        match self {
            CirclePoint::Rational(_) => true,
            CirclePoint::Irrational(p) => p.surd.is_some(),
        }
    }
}

impl PartialEq for CirclePoint {
    /// Structural equality: exact for rationals and surd descriptors.
    /// Procedural irrationals compare unequal (no decision procedure).
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CirclePoint::Rational(a), CirclePoint::Rational(b)) => a == b,
            (CirclePoint::Irrational(a), CirclePoint::Irrational(b)) => {
                matches!((&a.surd, &b.surd), (Some(x), Some(y)) if x == y)
            }
            _ => false,
        }
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CirclePoint::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            CirclePoint::Irrational(p) => match &p.surd {
                Some(s) => write!(f, "{}", s.descriptor()),
                None => write!(f, "<procedural irrational>"),
            },
        }
    }
}

/// Distance to the nearest integer, in `[0, 1/2]`.
#[derive(Debug, Clone, PartialEq)]
pub enum NormValue {
    Exact(Rat),
    Enclosure(DyadicInterval),
}

impl NormValue {
    pub fn as_interval(&self) -> RatInterval {
        match self {
            NormValue::Exact(r) => RatInterval::point(r.clone()),
            NormValue::Enclosure(iv) => iv.to_rat_interval(),
        }
    }

    /// Certified strict comparison against a rational where decidable.
    pub fn cmp_rat(&self, r: &Rat) -> Option<Ordering> {
        match self {
            NormValue::Exact(v) => Some(v.cmp(r)),
            NormValue::Enclosure(iv) => iv.to_rat_interval().cmp_rat(r),
        }
    }
}

fn norm_of_frac(r: &Rat) -> Rat {
    debug_assert!(!r.is_negative() && *r < Rat::one());
    if *r <= rat(1, 2) {
        r.clone()
    } else {
        Rat::one() - r
    }
}

/// `|x|` = distance from x to 0 along T. Exact for rationals; a width
/// `<= 2^-bits` enclosure for irrationals.
pub fn circle_norm(x: &CirclePoint, bits: u32) -> Result<NormValue> {
    match x {
        CirclePoint::Rational(r) => Ok(NormValue::Exact(norm_of_frac(r))),
        CirclePoint::Irrational(_) => {
            let iv = x.enclosure(bits + 4)?;
            // value in [0,1): fold the enclosure through min(t, 1-t)
            let half = rat(1, 2);
            let (lo, hi) = (&iv.lo, &iv.hi);
            let folded = if *hi <= half {
                RatInterval::new(lo.clone(), hi.clone())
            } else if *lo >= half {
                RatInterval::new(Rat::one() - hi, Rat::one() - lo)
            } else {
                let a = norm_of_frac(&reduce_mod1(lo));
                let b = norm_of_frac(&reduce_mod1(hi));
                RatInterval::new(Rat::zero().max(a.min(b.clone()) - iv.width()), half.clone())
            };
            let folded = RatInterval::new(
                folded.lo.max(Rat::zero()),
                folded.hi.min(half),
            );
            Ok(NormValue::Enclosure(folded.to_dyadic(bits + 2)))
        }
    }
}

/// Character pairing `(u, x) = u * x mod 1` as a circle point.
pub fn pair(u: &BigInt, x: &CirclePoint) -> CirclePoint {
    if u.is_zero() {
        return CirclePoint::zero();
    }
    match x {
        CirclePoint::Rational(r) => CirclePoint::from_rat(&(Rat::from_integer(u.clone()) * r)),
        CirclePoint::Irrational(p) => {
            if let Some(s) = &p.surd {
                return CirclePoint::from_surd(s.scale_rat(&Rat::from_integer(u.clone())));
            }
            let parent = p.refiner.clone();
            let mult = u.clone();
            let refiner = move |bits: u32| -> Result<RatInterval> {
                let extra = mult.bits() as u32 + 2;
                let mut req = bits + extra;
                loop {
                    let iv = parent.enclose(req)?;
                    let scaled = iv.scale(&Rat::from_integer(mult.clone()));
                    let f_lo = scaled.lo.floor().to_integer();
                    let f_hi = scaled.hi.floor().to_integer();
                    if f_lo == f_hi {
                        let f = Rat::from_integer(f_lo);
                        return Ok(RatInterval::new(&scaled.lo - &f, &scaled.hi - &f));
                    }
                    if req >= REFINE_CAP {
                        return Err(Error::BudgetExhausted(String::from(
                            "pairing enclosure straddles an integer",
                        )));
                    }
                    req *= 2;
                }
            };
            CirclePoint::from_refiner(Arc::new(refiner))
        }
    }
}

/// Exact difference x - y on the circle where a symbolic form exists,
/// otherwise a derived refiner.
pub fn sub_mod1(x: &CirclePoint, y: &CirclePoint) -> CirclePoint {
    use CirclePoint::*;
    match (x, y) {
        (Rational(a), Rational(b)) => CirclePoint::from_rat(&(a - b)),
        (Irrational(p), Rational(b)) => match &p.surd {
            Some(s) => CirclePoint::from_surd(s.add_rat(&-b.clone())),
            None => derived_sub(x.clone(), y.clone()),
        },
        (Rational(a), Irrational(q)) => match &q.surd {
            Some(s) => CirclePoint::from_surd(s.neg().add_rat(a)),
            None => derived_sub(x.clone(), y.clone()),
        },
        (Irrational(p), Irrational(q)) => match (&p.surd, &q.surd) {
            (Some(s), Some(t)) if s.radicand() == t.radicand() => {
                CirclePoint::from_surd(s.add(&t.neg()).expect("same radicand"))
            }
            _ => derived_sub(x.clone(), y.clone()),
        },
    }
}

/// Exact sum x + y on the circle; restricted to symbolic (rational or
/// quadratic-surd) operands so the result stays serializable.
pub fn add_mod1(x: &CirclePoint, y: &CirclePoint) -> Result<CirclePoint> {
    use CirclePoint::*;
    match (x, y) {
        (Rational(a), Rational(b)) => Ok(CirclePoint::from_rat(&(a + b))),
        (Rational(a), Irrational(p)) | (Irrational(p), Rational(a)) => {
            let s = p
                .surd
                .as_ref()
                .ok_or_else(|| precondition("exact circle sums need symbolic coordinates"))?;
            Ok(CirclePoint::from_surd(s.add_rat(a)))
        }
        (Irrational(p), Irrational(q)) => match (&p.surd, &q.surd) {
            (Some(s), Some(t)) => Ok(CirclePoint::from_surd(s.add(t)?)),
            _ => Err(precondition("exact circle sums need symbolic coordinates")),
        },
    }
}

/// Whether a symbolic circle value is exactly zero; errors on procedural
/// irrationals, whose enclosures can never certify equality.
pub fn is_zero_symbolic(x: &CirclePoint) -> Result<bool> {
    match x {
        CirclePoint::Rational(r) => Ok(r.is_zero()),
        CirclePoint::Irrational(p) => match &p.surd {
            Some(s) => Ok(s.is_zero_value()),
            None => Err(precondition("exact zero tests need symbolic coordinates")),
        },
    }
}

fn derived_sub(x: CirclePoint, y: CirclePoint) -> CirclePoint {
    let refiner = move |bits: u32| -> Result<RatInterval> {
        let mut req = bits + 3;
        loop {
            let a = x.enclosure(req)?;
            let b = y.enclosure(req)?;
            let d = a.sub(&b);
            let f_lo = d.lo.floor().to_integer();
            let f_hi = d.hi.floor().to_integer();
            if f_lo == f_hi {
                let f = Rat::from_integer(f_lo);
                return Ok(RatInterval::new(&d.lo - &f, &d.hi - &f));
            }
            if req >= REFINE_CAP {
                return Err(Error::BudgetExhausted(String::from(
                    "difference enclosure straddles an integer",
                )));
            }
            req *= 2;
        }
    };
    CirclePoint::from_refiner(Arc::new(refiner))
}

/// `chord(t) = |1 - e^{2 pi i t}|`: exact quadratic surd at the five
/// classical norms, otherwise a certified enclosure.
#[derive(Debug, Clone, PartialEq)]
pub enum ChordValue {
    Exact(QuadSurd),
    Enclosure(DyadicInterval),
}

impl ChordValue {
    pub fn as_interval(&self, bits: u32) -> RatInterval {
        match self {
            ChordValue::Exact(s) => s.enclosure(bits),
            ChordValue::Enclosure(iv) => iv.to_rat_interval(),
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Option<Ordering> {
        match self {
            ChordValue::Exact(s) => Some(s.cmp_rat(r)),
            ChordValue::Enclosure(iv) => iv.to_rat_interval().cmp_rat(r),
        }
    }
}

fn exact_chord_at(norm: &Rat) -> Option<QuadSurd> {
    let mk_rat = |v: i64| QuadSurd::from_rat(&Rat::from_integer(BigInt::from(v)));
    if norm.is_zero() {
        Some(mk_rat(0))
    } else if *norm == rat(1, 6) {
        Some(mk_rat(1))
    } else if *norm == rat(1, 4) {
        Some(QuadSurd::sqrt_of(2).unwrap())
    } else if *norm == rat(1, 3) {
        Some(QuadSurd::sqrt_of(3).unwrap())
    } else if *norm == rat(1, 2) {
        Some(mk_rat(2))
    } else {
        None
    }
}

/// chord of a rational norm value in `[0, 1/2]`.
pub fn chord_of_norm(norm: &Rat, bits: u32) -> ChordValue {
    if let Some(exact) = exact_chord_at(norm) {
        return ChordValue::Exact(exact);
    }
    let s = sin_pi_frac(norm, bits + 2).scale(&Rat::from_integer(BigInt::from(2)));
    ChordValue::Enclosure(s.to_dyadic(bits))
}

/// chord distance from x to 0, to target width `2^-bits`.
pub fn chord_distance(x: &CirclePoint, bits: u32) -> Result<ChordValue> {
    match circle_norm(x, bits.max(DEFAULT_BITS) + 4)? {
        NormValue::Exact(n) => Ok(chord_of_norm(&n, bits)),
        NormValue::Enclosure(iv) => {
            let iv = iv.to_rat_interval();
            // sin is increasing on [0, 1/2]: evaluate at the endpoints
            let lo = sin_pi_frac(&iv.lo, bits + 4);
            let hi = sin_pi_frac(&iv.hi, bits + 4);
            let two = Rat::from_integer(BigInt::from(2));
            let out = RatInterval::new(&lo.lo * &two, &hi.hi * &two);
            Ok(ChordValue::Enclosure(out.to_dyadic(bits)))
        }
    }
}

/// Exact lower bound `chord(t) >= 4 |t|` (chord is concave in the norm,
/// equality at the ends of [0, 1/2]).
pub fn chord_lower_linear(norm: &Rat) -> Rat {
    norm * Rat::from_integer(BigInt::from(4))
}

/// Certified upper bound `chord(t) <= 2 pi |t|`, as an exact rational
/// using a rounded-up pi.
pub fn chord_upper_linear(norm: &Rat, bits: u32) -> Rat {
    norm * pi_interval(bits).hi * Rat::from_integer(BigInt::from(2))
}

/// Render in the input literal syntax.
pub fn point_literal(x: &CirclePoint) -> String {
    match x {
        CirclePoint::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
        CirclePoint::Irrational(p) => match &p.surd {
            Some(s) => s.descriptor(),
            None => String::from("<procedural>"),
        },
    }
}
