//! Metrics, pairings, and witness constructions for the two torus-product
//! sequence groups.
//!
//! The sup metric and the summed chord metric are computed exactly where a
//! quadratic-surd form exists, and as certified rational enclosures
//! otherwise. Divergent sums are never approximated: they come back as a
//! [`DivergenceCertificate`] whose partial-sum lower bound provably crosses
//! the caller's target. The builders at the bottom produce the witness
//! objects that separate the summable subgroup from the full convergent
//! group (diagonal pairing witnesses, escape sequences, unit-interval block
//! partitions), each carrying machine-checked evidence instead of a bare
//! claim.

use crate::circle::{
    chord_distance, chord_of_norm, circle_norm, pair, sub_mod1, ChordValue, CirclePoint, NormValue,
};
use crate::dyadic::RatInterval;
use crate::error::{precondition, Error, Result};
use crate::harmonic::{exact_partial, harmonic_diff};
use crate::poly::IntPoly;
use crate::surd::QuadSurd;
use crate::tinf::{PosGen, PropertyVerdict, TInfElem, TailRule};
use crate::trig::{pi_interval, sin_pi_frac};
use crate::zinf::ZInfElem;
use crate::Rat;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Hard cap on how many ruled-tail coordinates a metric computation will
/// materialize while an explicit finite support overlaps the tail region.
const MATERIALIZE_CAP: u128 = 1 << 16;

/// Spans up to this length get exact rational partial sums; longer ones use
/// certified Euler-Maclaurin enclosures.
const EXACT_SPAN: u128 = 10_000;

fn cap_err(needed: u128) -> Error {
    Error::EnumerationCap {
        cap: MATERIALIZE_CAP as u64,
        needed: needed.try_into().unwrap_or(u64::MAX),
    }
}

/// Partial-sum evidence that a chord series crosses `target`: the terms
/// through `through_index` (in the defining enumeration of the series)
/// already sum to at least `partial_lower >= target`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceCertificate {
    pub target: Rat,
    pub partial_lower: Rat,
    pub through_index: u128,
}

/// Result of a metric computation.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricValue {
    /// Exact value as a quadratic surd (rationals included).
    Exact(QuadSurd),
    /// Certified enclosure of the exact value.
    Enclosure(RatInterval),
    /// The sum provably exceeds the requested target.
    Diverges(DivergenceCertificate),
    /// Not decided within the structural means available.
    Unknown { depth: u64 },
}

impl MetricValue {
    pub fn as_interval(&self, bits: u32) -> Option<RatInterval> {
        match self {
            MetricValue::Exact(s) => Some(s.enclosure(bits)),
            MetricValue::Enclosure(iv) => Some(iv.clone()),
            _ => None,
        }
    }

    /// Certified comparison against a rational, where the value is finite
    /// and the enclosure separates.
    pub fn cmp_rat(&self, r: &Rat) -> Option<Ordering> {
        match self {
            MetricValue::Exact(s) => Some(s.cmp_rat(r)),
            MetricValue::Enclosure(iv) => iv.cmp_rat(r),
            _ => None,
        }
    }

    pub fn is_zero_value(&self) -> bool {
        matches!(self, MetricValue::Exact(s) if s.is_zero_value())
    }
}

fn exact_zero() -> MetricValue {
    MetricValue::Exact(QuadSurd::from_rat(&Rat::zero()))
}

/// Total order on surd values. Distinct canonical surds have distinct real
/// values, so interval refinement separates every genuinely unequal pair.
fn surd_cmp(a: &QuadSurd, b: &QuadSurd) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    if let Some(r) = b.as_rat() {
        return a.cmp_rat(&r);
    }
    if let Some(r) = a.as_rat() {
        return b.cmp_rat(&r).reverse();
    }
    if a.radicand() == b.radicand() {
        let diff = a.add(&b.neg()).expect("same radicand");
        return diff.cmp_rat(&Rat::zero());
    }
    let mut bits = 64;
    while bits <= 512 {
        let ia = a.enclosure(bits);
        let ib = b.enclosure(bits);
        if ia.hi < ib.lo {
            return Ordering::Less;
        }
        if ib.hi < ia.lo {
            return Ordering::Greater;
        }
        bits *= 2;
    }
    // unreachable for canonical forms; equal is the safe answer for a max
    Ordering::Equal
}

/// Max of finitely many certified chord values: exact when every input is,
/// otherwise the hull of the endpoint maxima.
fn chord_sup(chords: &[ChordValue], bits: u32) -> MetricValue {
    if chords.is_empty() {
        return exact_zero();
    }
    let all_exact = chords.iter().all(|c| matches!(c, ChordValue::Exact(_)));
    if all_exact {
        let mut best: Option<QuadSurd> = None;
        for c in chords {
            let ChordValue::Exact(s) = c else { unreachable!() };
            best = Some(match best {
                None => s.clone(),
                Some(b) => {
                    if surd_cmp(s, &b) == Ordering::Greater {
                        s.clone()
                    } else {
                        b
                    }
                }
            });
        }
        return MetricValue::Exact(best.unwrap());
    }
    let mut lo = Rat::zero();
    let mut hi = Rat::zero();
    for c in chords {
        let iv = c.as_interval(bits);
        lo = lo.max(iv.lo);
        hi = hi.max(iv.hi);
    }
    MetricValue::Enclosure(RatInterval::new(lo, hi))
}

/// Sum of finitely many certified chord values: exact surd arithmetic when
/// the radicands agree, otherwise an interval sum with padded precision.
fn chord_sum(chords: &[ChordValue], bits: u32) -> MetricValue {
    if chords.is_empty() {
        return exact_zero();
    }
    let all_exact = chords.iter().all(|c| matches!(c, ChordValue::Exact(_)));
    if all_exact {
        let mut acc = QuadSurd::from_rat(&Rat::zero());
        let mut ok = true;
        for c in chords {
            let ChordValue::Exact(s) = c else { unreachable!() };
            match acc.add(s) {
                Ok(next) => acc = next,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return MetricValue::Exact(acc);
        }
    }
    let pad = (chords.len() as u64 + 1).ilog2() + 2;
    let mut acc = RatInterval::point(Rat::zero());
    for c in chords {
        acc = acc.add(&c.as_interval(bits + pad));
    }
    MetricValue::Enclosure(acc)
}

/// Norm of a rational circle value: distance to the nearest integer.
fn rational_norm(r: &Rat) -> Rat {
    let v = crate::circle::reduce_mod1(r);
    if v <= Rat::new(BigInt::one(), BigInt::from(2)) {
        v
    } else {
        Rat::one() - v
    }
}

/// Pairing of an integer character with a torus-product element:
/// sum of n_k * z_k over the character's support. Exact; requires every
/// met irrational coordinate to carry a surd descriptor, and any two
/// irrational contributions to share a radicand.
pub fn pair_zinf(chi: &ZInfElem, z: &TInfElem) -> Result<CirclePoint> {
    // a finite element zeroes every coordinate off its support, so the sum
    // ranges over that support regardless of how wide the character is
    let entries: Vec<(u128, BigInt)> = match z {
        TInfElem::Finite(map) => map
            .keys()
            .map(|&pos| (pos, chi.coef_at(pos)))
            .filter(|(_, n)| !n.is_zero())
            .collect(),
        TInfElem::Ruled { .. } => chi.entries()?,
    };
    let mut acc_rat = Rat::zero();
    let mut acc_surd: Option<QuadSurd> = None;
    for (pos, n) in entries {
        let v = z.value_at(pos)?;
        match pair(&n, &v) {
            CirclePoint::Rational(r) => acc_rat += r,
            CirclePoint::Irrational(p) => match p.descriptor() {
                Some(s) => {
                    acc_surd = Some(match acc_surd {
                        None => s.clone(),
                        Some(t) => t.add(s).map_err(|_| {
                            precondition("pairing mixes incommensurable irrational coordinates")
                        })?,
                    });
                }
                None => {
                    return Err(precondition(
                        "pairing needs symbolic coordinates, got a procedural irrational",
                    ))
                }
            },
        }
    }
    Ok(match acc_surd {
        None => CirclePoint::from_rat(&acc_rat),
        Some(s) => CirclePoint::from_surd(s.add_rat(&acc_rat)),
    })
}

/// Norm of the first ruled-tail coordinate past `beyond` for a dense tail.
/// The tail norms decrease from there, so this value is the tail's sup.
fn dense_first_norm(scale: u64, from: u128, beyond: u128) -> Rat {
    let mut p = beyond.max(from) + 1;
    if scale == 1 && p == 1 {
        // coordinate 1 carries 1/1 = identity; the tail starts in earnest at 2
        p = 2;
    }
    Rat::new(BigInt::one(), BigInt::from(scale) * BigInt::from(p))
}

/// Norm of the first scheduled sparse-tail coordinate past `beyond`.
fn sparse_first_norm(c: u64, positions: &PosGen, beyond: u128) -> Result<Rat> {
    let mut m: u128 = match positions {
        PosGen::Arithmetic { start, step } => {
            if beyond < *start {
                1
            } else {
                (beyond - start) / step + 2
            }
        }
        PosGen::Listed(ps) => match ps.iter().position(|&p| p > beyond) {
            Some(i) => i as u128 + 1,
            None => {
                return Err(Error::BudgetExhausted(String::from(
                    "sparse schedule is not materialized past the explicit region",
                )))
            }
        },
    };
    if c == 1 && m == 1 {
        // the first scheduled value is 1/1 = identity
        m = 2;
        if let PosGen::Listed(ps) = positions {
            if ps.len() < 2 {
                return Err(Error::BudgetExhausted(String::from(
                    "sparse schedule is not materialized past the explicit region",
                )));
            }
        }
    }
    Ok(Rat::new(BigInt::one(), BigInt::from(c) * BigInt::from(m)))
}

/// Scheduled sparse positions up to and including `fsup`.
fn scheduled_upto(positions: &PosGen, fsup: u128) -> Result<Vec<u128>> {
    match positions {
        PosGen::Arithmetic { start, step } => {
            if fsup < *start {
                return Ok(Vec::new());
            }
            let count = (fsup - start) / step + 1;
            if count > MATERIALIZE_CAP {
                return Err(cap_err(count));
            }
            Ok((0..count).map(|i| start + i * step).collect())
        }
        PosGen::Listed(ps) => Ok(ps.iter().copied().filter(|&p| p <= fsup).collect()),
    }
}

/// Sup metric `d_0(z, w) = sup_n chord(z_n - w_n)` over the group of
/// elements whose coordinates converge to the identity (a precondition;
/// outside it the sup cannot see the divergent tail).
pub fn metric_d0(z: &TInfElem, w: &TInfElem, bits: u32) -> Result<MetricValue> {
    for side in [z, w] {
        if side.tends_to_1() != PropertyVerdict::Holds {
            return Err(precondition(
                "sup metric needs both arguments in the convergent group",
            ));
        }
    }
    if z == w {
        return Ok(exact_zero());
    }

    let mut positions: Vec<u128> = Vec::new();
    let mut tail_norm: Option<Rat> = None;

    match (z.tail_rule(), w.tail_rule()) {
        (None, None) => {
            positions.extend(z.explicit_entries().keys().copied());
            positions.extend(w.explicit_entries().keys().copied());
        }
        (Some(a), Some(b)) => {
            if a != b {
                return Ok(MetricValue::Unknown { depth: 0 });
            }
            // identical rules cancel pointwise past the prefixes
            positions.extend(z.explicit_entries().keys().copied());
            positions.extend(w.explicit_entries().keys().copied());
        }
        _ => {
            let (ruled, finite) = if z.tail_rule().is_some() { (z, w) } else { (w, z) };
            let fsup = finite.explicit_entries().keys().next_back().copied().unwrap_or(0);
            positions.extend(ruled.explicit_entries().keys().copied());
            positions.extend(finite.explicit_entries().keys().copied());
            match ruled.tail_rule().unwrap() {
                TailRule::DenseNorm { scale, from } => {
                    if fsup > *from {
                        let n = fsup - from;
                        if n > MATERIALIZE_CAP {
                            return Err(cap_err(n));
                        }
                        positions.extend((*from + 1)..=fsup);
                    }
                    let covered = positions.iter().copied().max().unwrap_or(0);
                    tail_norm = Some(dense_first_norm(*scale, *from, covered));
                }
                TailRule::SparseHarmonic { c, positions: sched } => {
                    positions.extend(scheduled_upto(sched, fsup)?);
                    let covered = positions.iter().copied().max().unwrap_or(0);
                    tail_norm = Some(sparse_first_norm(*c, sched, covered)?);
                }
                TailRule::ConstantNorm { .. } => {
                    // a nonzero constant tail fails the convergence
                    // precondition; a zero one contributes nothing
                }
            }
        }
    }

    positions.sort_unstable();
    positions.dedup();

    let mut chords: Vec<ChordValue> = Vec::new();
    for p in positions {
        let d = sub_mod1(&z.value_at(p)?, &w.value_at(p)?);
        if d.is_zero() {
            continue;
        }
        chords.push(chord_distance(&d, bits)?);
    }
    if let Some(nu) = tail_norm {
        // the sup over the uncovered tail is attained at its first
        // coordinate, whose norm decreases from there on
        if !nu.is_zero() {
            chords.push(chord_of_norm(&nu, bits));
        }
    }
    Ok(chord_sup(&chords, bits))
}

/// `harmonic_diff` extended to a zero left endpoint (H_0 = 0).
fn hdiff(a: u128, b: u128, bits: u32) -> RatInterval {
    if a == 0 {
        let inner = harmonic_diff(1, b.max(1), bits);
        RatInterval::new(Rat::one() + inner.lo, Rat::one() + inner.hi)
    } else {
        harmonic_diff(a, b, bits)
    }
}

/// Certified b > skip with `H_b - H_skip >= t`, minimal for the working
/// precision, together with the certified lower bound at b.
fn harmonic_threshold_index(skip: u128, t: &Rat, bits: u32) -> Result<(u128, Rat)> {
    if *t <= Rat::zero() {
        return Ok((skip + 1, Rat::zero()));
    }
    let mut hi = skip.max(1) * 2;
    loop {
        let d = hdiff(skip, hi, bits);
        if d.lo >= *t {
            break;
        }
        if hi > u128::MAX / 4 {
            return Err(Error::BudgetExhausted(String::from(
                "harmonic threshold out of index range",
            )));
        }
        hi *= 2;
    }
    let mut lo = skip + 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if hdiff(skip, mid, bits).lo >= *t {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok((hi, hdiff(skip, hi, bits).lo))
}

/// Divergence certificate for the chord series of a ruled tail, ignoring
/// every coordinate at or below `p0` (they only add nonnegative terms).
fn tail_divergence(tail: &TailRule, p0: u128, target: &Rat) -> Result<DivergenceCertificate> {
    let four = Rat::from_integer(BigInt::from(4));
    match tail {
        TailRule::DenseNorm { scale, from } => {
            let mut n0 = p0.max(*from) + 1;
            if *scale == 1 && n0 == 1 {
                n0 = 2;
            }
            // chord(1/(scale n)) >= 4/(scale n); sum >= (4/scale)(H_b - H_{n0-1})
            let t = target * Rat::new(BigInt::from(*scale), BigInt::from(4));
            let (b, lo) = harmonic_threshold_index(n0 - 1, &t, 96)?;
            Ok(DivergenceCertificate {
                target: target.clone(),
                partial_lower: lo * four / Rat::from_integer(BigInt::from(*scale)),
                through_index: b,
            })
        }
        TailRule::SparseHarmonic { c, positions } => {
            let mut m0: u128 = match positions {
                PosGen::Arithmetic { start, step } => {
                    if p0 < *start {
                        1
                    } else {
                        (p0 - start) / step + 2
                    }
                }
                PosGen::Listed(ps) => match ps.iter().position(|&p| p > p0) {
                    Some(i) => i as u128 + 1,
                    None => {
                        return Err(Error::BudgetExhausted(String::from(
                            "sparse schedule is not materialized past the explicit region",
                        )))
                    }
                },
            };
            if *c == 1 {
                m0 = m0.max(2);
            }
            let t = target * Rat::new(BigInt::from(*c), BigInt::from(4));
            let (m_last, lo) = harmonic_threshold_index(m0 - 1, &t, 96)?;
            // m_last is the ordinal of the last scheduled term; the
            // certificate reports coordinate positions
            let through = match positions {
                PosGen::Arithmetic { start, step } => start + (m_last - 1) * step,
                PosGen::Listed(ps) => {
                    let i = usize::try_from(m_last - 1).map_err(|_| Error::Overflow)?;
                    *ps.get(i).ok_or_else(|| {
                        Error::BudgetExhausted(String::from(
                            "sparse schedule is not materialized far enough to certify divergence",
                        ))
                    })?
                }
            };
            Ok(DivergenceCertificate {
                target: target.clone(),
                partial_lower: lo * four / Rat::from_integer(BigInt::from(*c)),
                through_index: through,
            })
        }
        TailRule::ConstantNorm { value, from } => {
            let nu = rational_norm(value);
            if nu.is_zero() {
                return Err(precondition("zero constant tail does not diverge"));
            }
            // each term contributes chord(nu) >= 4 nu
            let per = &four * &nu;
            let count = (target / &per).ceil().to_integer().max(BigInt::one());
            let count_u = count.to_u128().ok_or(Error::Overflow)?;
            Ok(DivergenceCertificate {
                target: target.clone(),
                partial_lower: Rat::from_integer(count) * per,
                through_index: p0.max(*from) + count_u,
            })
        }
    }
}

/// Summed chord metric `d_1(z, w) = sum_n chord(z_n - w_n)`. Exact or
/// enclosed when the difference is summable; a partial-sum certificate
/// crossing `target` when one side has a divergent tail the other cannot
/// cancel; `Unknown` when two structurally different divergent tails meet.
pub fn metric_d1(z: &TInfElem, w: &TInfElem, target: &Rat, bits: u32) -> Result<MetricValue> {
    if *target <= Rat::zero() {
        return Err(precondition("divergence target must be positive"));
    }
    if z == w {
        return Ok(exact_zero());
    }
    let sz = z.l1_summable();
    let sw = w.l1_summable();
    if sz == PropertyVerdict::Undecided || sw == PropertyVerdict::Undecided {
        return Ok(MetricValue::Unknown { depth: 0 });
    }

    let summable_diff_positions = |a: &TInfElem, b: &TInfElem| -> Vec<u128> {
        let mut ps: Vec<u128> = a
            .explicit_entries()
            .keys()
            .chain(b.explicit_entries().keys())
            .copied()
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    };

    match (sz, sw) {
        (PropertyVerdict::Holds, PropertyVerdict::Holds) => {
            // all nonzero coordinates are explicit (summable rules have
            // identically zero tails)
            let mut chords = Vec::new();
            for p in summable_diff_positions(z, w) {
                let d = sub_mod1(&z.value_at(p)?, &w.value_at(p)?);
                if d.is_zero() {
                    continue;
                }
                chords.push(chord_distance(&d, bits)?);
            }
            Ok(chord_sum(&chords, bits))
        }
        (PropertyVerdict::Fails, PropertyVerdict::Fails) => {
            if z.tail_rule() == w.tail_rule() {
                let mut chords = Vec::new();
                for p in summable_diff_positions(z, w) {
                    let d = sub_mod1(&z.value_at(p)?, &w.value_at(p)?);
                    if d.is_zero() {
                        continue;
                    }
                    chords.push(chord_distance(&d, bits)?);
                }
                Ok(chord_sum(&chords, bits))
            } else {
                Ok(MetricValue::Unknown { depth: 0 })
            }
        }
        _ => {
            let (diver, other) = if sz == PropertyVerdict::Fails { (z, w) } else { (w, z) };
            let osup = other.explicit_entries().keys().next_back().copied().unwrap_or(0);
            let psup = diver.explicit_entries().keys().next_back().copied().unwrap_or(0);
            let p0 = osup.max(psup);
            let cert = tail_divergence(diver.tail_rule().unwrap(), p0, target)?;
            Ok(MetricValue::Diverges(cert))
        }
    }
}

/// Closed-form continuation rule for a character family, indexed past the
/// explicit prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaRule {
    /// k-th member is e_k
    UnitDiagonal,
    /// k-th member is k e_k
    ScaledDiagonal,
    /// k-th member is e_1 + e_k
    PinnedFirst,
}

/// A sequence of integer characters given by an explicit prefix plus an
/// optional diagonal continuation rule.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaFamily {
    pub prefix: Vec<ZInfElem>,
    pub rule: Option<OmegaRule>,
}

impl OmegaFamily {
    pub fn ruled(rule: OmegaRule) -> OmegaFamily {
        OmegaFamily { prefix: Vec::new(), rule: Some(rule) }
    }

    /// k-th family member, 1-based.
    pub fn term(&self, k: u64) -> Result<ZInfElem> {
        if k < 1 {
            return Err(precondition("family indices start at 1"));
        }
        let ki = (k - 1) as usize;
        if ki < self.prefix.len() {
            return Ok(self.prefix[ki].clone());
        }
        match self.rule {
            None => Err(precondition("family is not defined beyond its prefix")),
            Some(OmegaRule::UnitDiagonal) => Ok(ZInfElem::e(k as u128)),
            Some(OmegaRule::ScaledDiagonal) => {
                ZInfElem::from_entries([(k as u128, BigInt::from(k))])
            }
            Some(OmegaRule::PinnedFirst) => {
                ZInfElem::from_entries([(1u128, BigInt::one()), (k as u128, BigInt::one())])
            }
        }
    }

    fn prefix_len(&self) -> u64 {
        self.prefix.len() as u64
    }

    fn prefix_max_coef(&self) -> BigInt {
        self.prefix.iter().map(ZInfElem::linf).max().unwrap_or_else(BigInt::zero)
    }

    fn prefix_support_max(&self) -> u128 {
        self.prefix.iter().filter_map(ZInfElem::support_max).max().unwrap_or(0)
    }
}

/// Behaviour of the leading (smallest) support position along the family.
#[derive(Debug, Clone, PartialEq)]
pub enum LeadingSupport {
    /// From index `from` on, the leading position equals `index_value(k)`,
    /// a polynomial that provably increases without bound.
    Divergent { index_value: IntPoly, from: u64 },
    /// From index `from` on, the leading position is pinned at `position`.
    Stuck { position: u128, from: u64 },
    /// No rule; only finitely many members were inspectable.
    Inconclusive { checked: u64 },
}

/// Behaviour of the largest absolute coefficient along the family.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientBound {
    /// Every member's coefficients are bounded by `c` in absolute value.
    Bounded { c: BigInt },
    /// The subsequence at indices `index_poly(j)` has max coefficient
    /// provably exceeding j^2; the first `verified_levels` levels were
    /// also checked numerically.
    Unbounded { index_poly: IntPoly, verified_levels: u64 },
    /// No rule; `max_seen` over the inspected members.
    Inconclusive { max_seen: BigInt, checked: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientAnalysis {
    pub leading: LeadingSupport,
    pub bound: CoefficientBound,
}

/// Structural analysis of a character family: where its leading support
/// goes and whether its coefficients stay bounded. Rule-backed families
/// get certified answers (cross-checked numerically up to `check_depth`);
/// prefix-only families get honest inconclusives.
pub fn coefficient_analysis(fam: &OmegaFamily, check_depth: u64) -> Result<CoefficientAnalysis> {
    let p = fam.prefix_len();
    let prefix_max = fam.prefix_max_coef();
    let Some(rule) = fam.rule else {
        return Ok(CoefficientAnalysis {
            leading: LeadingSupport::Inconclusive { checked: p.min(check_depth) },
            bound: CoefficientBound::Inconclusive { max_seen: prefix_max, checked: p.min(check_depth) },
        });
    };

    let identity = IntPoly::from_i64(&[0, 1]);
    let samples = check_depth.clamp(1, 16);

    match rule {
        OmegaRule::UnitDiagonal | OmegaRule::ScaledDiagonal => {
            // leading support of the k-th ruled member is k itself
            debug_assert!(identity.eventually_increasing_from().is_some());
            for s in 0..samples {
                let k = p + 1 + s;
                let min = fam.term(k)?.support_min();
                if min != Some(k as u128) {
                    return Err(precondition("rule member has unexpected leading support"));
                }
            }
            let leading = LeadingSupport::Divergent { index_value: identity, from: p + 1 };
            let bound = match rule {
                OmegaRule::UnitDiagonal => {
                    CoefficientBound::Bounded { c: prefix_max.max(BigInt::one()) }
                }
                OmegaRule::ScaledDiagonal => {
                    // k_j = (j + p + 1)^2: beyond the prefix, strictly
                    // increasing, with coefficient k_j > j^2
                    let square = IntPoly::from_i64(&[0, 0, 1]);
                    let index_poly = square.shift(&BigInt::from(p + 1));
                    let mut verified = 0;
                    for j in 1..=samples {
                        let kj = index_poly
                            .eval(&BigInt::from(j))
                            .to_u64()
                            .ok_or(Error::Overflow)?;
                        let d = fam.term(kj)?.linf();
                        if d <= BigInt::from(j) * BigInt::from(j) {
                            return Err(precondition(
                                "diagonal coefficient fell below its certified growth",
                            ));
                        }
                        verified = j;
                    }
                    CoefficientBound::Unbounded { index_poly, verified_levels: verified }
                }
                OmegaRule::PinnedFirst => unreachable!(),
            };
            Ok(CoefficientAnalysis { leading, bound })
        }
        OmegaRule::PinnedFirst => Ok(CoefficientAnalysis {
            leading: LeadingSupport::Stuck { position: 1, from: p + 1 },
            bound: CoefficientBound::Bounded { c: prefix_max.max(BigInt::one()) },
        }),
    }
}

/// One level of a diagonal pairing witness.
#[derive(Debug, Clone, PartialEq)]
pub struct UnboundedLevel {
    pub j: u64,
    pub k: u64,
    pub position: u128,
    pub coefficient: BigInt,
    /// norm of the pairing of the k-th family member with the witness
    pub pairing_norm: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnboundedWitnessReport {
    pub witness: TInfElem,
    pub levels: Vec<UnboundedLevel>,
    /// certified upper bound on the chord l1 norm of the full infinite
    /// witness (the materialized finite part is smaller still)
    pub l1_upper: Rat,
}

/// For a family with certified unbounded coefficients, build the summable
/// element pairing to the antipode along the unbounded subsequence: put
/// 1/(2 d) on the position carrying the big coefficient d. Every selected
/// pairing lands exactly on norm 1/2 while the witness itself has finite
/// chord l1 norm (coefficients grow at least quadratically).
pub fn unbounded_pairing_witness(fam: &OmegaFamily, levels: u64) -> Result<UnboundedWitnessReport> {
    if levels < 1 {
        return Err(precondition("need at least one witness level"));
    }
    let analysis = coefficient_analysis(fam, levels.min(16))?;
    let CoefficientBound::Unbounded { index_poly, .. } = analysis.bound else {
        return Err(precondition(
            "coefficient bound is finite or undecided; no diagonal witness exists",
        ));
    };

    let mut entries: Vec<(u128, CirclePoint)> = Vec::new();
    let mut meta: Vec<(u64, u64, u128, BigInt)> = Vec::new();
    let mut last_pos = 0u128;
    for j in 1..=levels {
        let k = index_poly.eval(&BigInt::from(j)).to_u64().ok_or(Error::Overflow)?;
        let om = fam.term(k)?;
        let d = om.linf();
        let pos = om
            .linf_position()
            .ok_or_else(|| precondition("zero family member on the unbounded subsequence"))?;
        if pos <= last_pos {
            return Err(precondition("witness positions must strictly increase"));
        }
        last_pos = pos;
        let v = Rat::new(BigInt::one(), BigInt::from(2) * &d);
        entries.push((pos, CirclePoint::from_rat(&v)));
        meta.push((j, k, pos, d));
    }
    let witness = TInfElem::finite(entries)?;

    let mut out_levels = Vec::new();
    let mut inv_sum = Rat::zero();
    for (j, k, pos, d) in meta {
        let om = fam.term(k)?;
        let paired = pair_zinf(&om, &witness)?;
        let NormValue::Exact(nu) = circle_norm(&paired, 30)? else {
            return Err(precondition("diagonal pairing did not come out rational"));
        };
        if nu != Rat::new(BigInt::one(), BigInt::from(2)) {
            return Err(precondition("diagonal pairing missed the antipode"));
        }
        inv_sum += Rat::new(BigInt::one(), d.clone());
        out_levels.push(UnboundedLevel { j, k, position: pos, coefficient: d, pairing_norm: nu });
    }

    // chord(1/(2d)) <= 2 pi/(2d) = pi/d termwise; beyond the materialized
    // levels d_j > j^2, so the tail is below pi * sum_{j>L} 1/j^2 < pi/L
    let pi_hi = pi_interval(64).hi;
    let l1_upper = &pi_hi * (inv_sum + Rat::new(BigInt::one(), BigInt::from(levels)));

    Ok(UnboundedWitnessReport { witness, levels: out_levels, l1_upper })
}

/// One machine-checked pairing bound along an escape witness.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceCheck {
    pub t: u64,
    pub norm_upper: Rat,
    pub bound: Rat,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EscapeWitnessReport {
    pub witness: TInfElem,
    /// uniform coefficient bound used for the witness values
    pub bound_c: u64,
    /// greedy family cutoffs k_1 < k_2 < ...
    pub cutoffs: Vec<u64>,
    /// leading support positions carrying the witness values
    pub positions: Vec<u128>,
    pub trace: Vec<TraceCheck>,
    /// the witness's own chord series provably crosses the target
    pub divergence: DivergenceCertificate,
}

/// For a bounded-coefficient family whose leading support escapes to
/// infinity, build the non-summable element that still pairs small against
/// every family member: put 1/(m C) on the leading position of the m-th
/// greedily selected member. Selection keeps each member's support clear
/// of all earlier values, so the pairing of the t-th member is supported
/// on at most one witness coordinate and its norm is at most 2/m once t
/// passes the m-th cutoff.
pub fn escape_witness(
    fam: &OmegaFamily,
    m_levels: u64,
    target: &Rat,
) -> Result<EscapeWitnessReport> {
    if m_levels < 1 {
        return Err(precondition("need at least one escape level"));
    }
    let analysis = coefficient_analysis(fam, 16)?;
    let c_big = match analysis.bound {
        CoefficientBound::Bounded { c } => c,
        CoefficientBound::Unbounded { .. } => {
            return Err(precondition(
                "coefficients are unbounded; the escape construction needs a uniform bound",
            ))
        }
        CoefficientBound::Inconclusive { .. } => {
            return Err(precondition("coefficient bound undecided; cannot certify the escape"))
        }
    };
    if !matches!(analysis.leading, LeadingSupport::Divergent { .. }) {
        return Err(precondition("leading support does not escape to infinity"));
    }
    let c = c_big.to_u64().ok_or(Error::Overflow)?;

    let p = fam.prefix_len();
    let psup = fam.prefix_support_max();
    let mut cutoffs: Vec<u64> = Vec::new();
    let mut positions: Vec<u128> = Vec::new();
    let mut k = p + 1;
    for _ in 1..=m_levels {
        let om = fam.term(k)?;
        let pos = om
            .support_min()
            .ok_or_else(|| precondition("zero family member cannot carry a witness value"))?;
        cutoffs.push(k);
        positions.push(pos);
        // every member up to index k lives below b; the next cutoff starts
        // beyond it so its leading support clears all earlier values
        let b = psup.max(k as u128);
        let b_u64: u64 = b.try_into().map_err(|_| Error::Overflow)?;
        k = (k + 1).max(b_u64 + 1);
    }
    let k_last = *cutoffs.last().unwrap();

    // prefer the closed arithmetic schedule when the greedy recursion has
    // provably stabilized on step one
    let arithmetic = fam.rule == Some(OmegaRule::UnitDiagonal)
        && positions.windows(2).all(|w| w[1] == w[0] + 1)
        && positions.last().copied().unwrap_or(0) >= psup;
    let sched = if arithmetic {
        PosGen::Arithmetic { start: positions[0], step: 1 }
    } else {
        PosGen::Listed(positions.clone())
    };
    let coverage = match &sched {
        PosGen::Arithmetic { .. } => u128::MAX,
        PosGen::Listed(ps) => *ps.last().unwrap(),
    };
    let witness = TInfElem::sparse_harmonic(Vec::new(), c, sched.clone())?;

    let mut trace = Vec::new();
    for t in 1..=k_last.min(256) {
        let om = fam.term(t)?;
        if om.support_max().unwrap_or(0) > coverage {
            continue;
        }
        let paired = pair_zinf(&om, &witness)?;
        let norm_upper = circle_norm(&paired, 30)?.as_interval().hi;
        let m_t = cutoffs.iter().filter(|&&km| km <= t).count() as u64;
        let bound = if m_t == 0 {
            Rat::from_integer(BigInt::from(2))
        } else {
            Rat::new(BigInt::from(2), BigInt::from(m_t))
        };
        let ok = norm_upper <= bound;
        trace.push(TraceCheck { t, norm_upper, bound, ok });
    }

    let divergence = tail_divergence(
        &TailRule::SparseHarmonic { c, positions: sched },
        0,
        target,
    )?;

    Ok(EscapeWitnessReport {
        witness,
        bound_c: c,
        cutoffs,
        positions,
        trace,
        divergence,
    })
}

/// Certified value of one block sum.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockSum {
    Exact(Rat),
    Certified(RatInterval),
}

impl BlockSum {
    pub fn as_interval(&self) -> RatInterval {
        match self {
            BlockSum::Exact(r) => RatInterval::point(r.clone()),
            BlockSum::Certified(iv) => iv.clone(),
        }
    }
}

/// One block of consecutive coordinates whose value sum lands in the
/// window (1/3, 1/2), giving the paired character a chord at least
/// `chord_lower`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCert {
    pub start: u128,
    pub end: u128,
    pub indicator: ZInfElem,
    pub sum: BlockSum,
    pub chord_lower: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonBlockPartition {
    pub blocks: Vec<BlockCert>,
    /// min over the blocks' certified chord lower bounds
    pub chord_floor: Rat,
}

/// How a divergent element separates from the closure of the summable
/// subgroup.
#[derive(Debug, Clone, PartialEq)]
pub enum GClosureOutcome {
    /// Dense divergent tail: indicator characters of consecutive blocks
    /// whose value sums sit in (1/3, 1/2), so every pairing has chord
    /// near the maximum.
    Blocks(EpsilonBlockPartition),
    /// Constant-norm tail: a single coordinate past `from` already pairs
    /// at fixed norm forever.
    CoordinateSeparator { from: u128, norm: Rat },
}

/// Greedy minimal block whose sum first exceeds 1/3; within the window the
/// coordinates are all below the start value, so the sum stays under
/// 1/3 + epsilon_start < 1/2.
fn gclosure_block(scale: u64, a: u128) -> Result<(u128, BlockSum)> {
    // need H_b - H_{a-1} > scale/3
    let t = Rat::new(BigInt::from(scale), BigInt::from(3));
    let scale_rat = Rat::from_integer(BigInt::from(scale));

    let mut ub = a;
    loop {
        let d = hdiff(a - 1, ub, 96);
        if d.lo > t {
            break;
        }
        if ub > u128::MAX / 4 {
            return Err(Error::BudgetExhausted(String::from("block would leave the index range")));
        }
        ub = (ub * 2).max(a + 1);
    }

    if ub - a <= EXACT_SPAN {
        let (mut lo, mut hi) = (a, ub);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if exact_partial(a - 1, mid) > t {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let sum = exact_partial(a - 1, lo) / &scale_rat;
        return Ok((lo, BlockSum::Exact(sum)));
    }

    let mut bits = 128u32;
    loop {
        let (mut lo, mut hi) = (a, ub);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if hdiff(a - 1, mid, bits).lo > t {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let b = hi;
        // minimality: the previous index must sit certifiably at or below
        // the threshold
        if b > a && hdiff(a - 1, b - 1, bits).hi > t {
            if bits >= 512 {
                return Err(Error::BudgetExhausted(String::from(
                    "block boundary cannot be separated from the threshold",
                )));
            }
            bits *= 2;
            continue;
        }
        let iv = hdiff(a - 1, b, bits);
        let sum = RatInterval::new(iv.lo / &scale_rat, iv.hi / &scale_rat);
        return Ok((b, BlockSum::Certified(sum)));
    }
}

/// Build `num_blocks` consecutive blocks over a dense divergent tail, each
/// with value sum in (1/3, 1/2), certifying that the element stays at
/// chord distance about sqrt(3) from the summable subgroup under every
/// block indicator character. `start` overrides the default entry point
/// (which enforces coordinate values below 1/100); an override only needs
/// values below 1/6 to keep the window argument sound.
pub fn gclosure_blocks(
    z: &TInfElem,
    num_blocks: u32,
    start: Option<u128>,
    bits: u32,
) -> Result<GClosureOutcome> {
    if num_blocks < 1 {
        return Err(precondition("need at least one block"));
    }
    let Some(tail) = z.tail_rule() else {
        return Err(precondition(
            "element is summable; the block construction needs a divergent dense tail",
        ));
    };
    let (scale, from) = match tail {
        TailRule::DenseNorm { scale, from } => (*scale, *from),
        TailRule::ConstantNorm { value, from } => {
            let nu = rational_norm(value);
            if nu.is_zero() {
                return Err(precondition(
                    "element is summable; the block construction needs a divergent dense tail",
                ));
            }
            return Ok(GClosureOutcome::CoordinateSeparator { from: from + 1, norm: nu });
        }
        TailRule::SparseHarmonic { .. } => {
            return Err(precondition("dense tail required for the block construction"));
        }
    };

    let a0 = match start {
        None => from.max((100 / scale as u128).max(1)) + 1,
        Some(s) => {
            if s <= from {
                return Err(precondition("start lies before the ruled tail"));
            }
            let eps = Rat::new(BigInt::one(), BigInt::from(scale) * BigInt::from(s));
            if eps >= Rat::new(BigInt::one(), BigInt::from(6)) {
                return Err(precondition("coordinate value at the block start must be below 1/6"));
            }
            s
        }
    };

    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let third = Rat::new(BigInt::one(), BigInt::from(3));
    let mut blocks = Vec::new();
    let mut chord_floor: Option<Rat> = None;
    let mut a = a0;
    for _ in 0..num_blocks {
        let (b, sum) = gclosure_block(scale, a)?;
        let iv = sum.as_interval();
        if iv.hi >= half {
            return Err(Error::BudgetExhausted(String::from(
                "block sum could not be certified below 1/2",
            )));
        }
        // chord = 2 sin(pi s) is increasing for s in (1/3, 1/2)
        let s_lo = iv.lo.clone().max(third.clone());
        let chord_lower = sin_pi_frac(&s_lo, bits.max(40)).lo * Rat::from_integer(BigInt::from(2));
        chord_floor = Some(match chord_floor {
            None => chord_lower.clone(),
            Some(f) => f.min(chord_lower.clone()),
        });
        blocks.push(BlockCert {
            start: a,
            end: b,
            indicator: ZInfElem::indicator_block(a, b)?,
            sum,
            chord_lower,
        });
        a = b + 1;
    }

    Ok(GClosureOutcome::Blocks(EpsilonBlockPartition {
        blocks,
        chord_floor: chord_floor.unwrap(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::tinf::TInfElem;
    use alloc::vec;

    fn pt(p: i64, q: i64) -> CirclePoint {
        CirclePoint::from_rat(&rat(p, q))
    }

    #[test]
    fn pairing_is_exact() {
        let chi = ZInfElem::from_entries([(2u128, crate::int(3))]).unwrap();
        let z = TInfElem::finite([(2u128, pt(1, 8))]).unwrap();
        assert_eq!(pair_zinf(&chi, &z).unwrap().as_rat(), Some(&rat(3, 8)));

        // 1/3 + 2 * 1/3 wraps to the identity
        let chi = ZInfElem::from_entries([(1u128, crate::int(1)), (4, crate::int(2))]).unwrap();
        let z = TInfElem::finite([(1u128, pt(1, 3)), (4, pt(1, 3))]).unwrap();
        assert!(pair_zinf(&chi, &z).unwrap().is_zero());

        // block character against a dense harmonic tail: 1/2 + 1/3 + 1/4
        let chi = ZInfElem::indicator_block(2, 4).unwrap();
        let z = TInfElem::dense_tail(Vec::new(), 1, 1).unwrap();
        assert_eq!(pair_zinf(&chi, &z).unwrap().as_rat(), Some(&rat(1, 12)));

        // surd coordinate stays symbolic
        let s = QuadSurd::sqrt_of(2).unwrap();
        let z = TInfElem::finite([(1u128, CirclePoint::from_surd(s.clone()))]).unwrap();
        let chi = ZInfElem::from_entries([(1u128, crate::int(2))]).unwrap();
        let expect = CirclePoint::from_surd(s.scale_rat(&rat(2, 1)));
        assert_eq!(pair_zinf(&chi, &z).unwrap(), expect);
    }

    #[test]
    fn sup_metric_on_finite_elements() {
        let z = TInfElem::finite([(1u128, pt(1, 2))]).unwrap();
        let d = metric_d0(&z, &TInfElem::zero(), 30).unwrap();
        assert_eq!(d.cmp_rat(&rat(2, 1)), Some(Ordering::Equal));

        let z = TInfElem::finite([(3u128, pt(1, 6))]).unwrap();
        let d = metric_d0(&z, &TInfElem::zero(), 30).unwrap();
        assert_eq!(d.cmp_rat(&rat(1, 1)), Some(Ordering::Equal));

        // only position 2 differs; chord(1/8) = 2 sin(pi/8) = 0.7653...
        let z = TInfElem::finite([(1u128, pt(1, 4)), (2, pt(1, 8))]).unwrap();
        let w = TInfElem::finite([(1u128, pt(1, 4))]).unwrap();
        let d = metric_d0(&z, &w, 30).unwrap();
        assert_eq!(d.cmp_rat(&rat(76, 100)), Some(Ordering::Greater));
        assert_eq!(d.cmp_rat(&rat(77, 100)), Some(Ordering::Less));
    }

    #[test]
    fn sup_metric_sees_ruled_tails() {
        // equal rules cancel: only the prefixes differ
        let z = TInfElem::dense_tail([(1u128, pt(1, 4))], 10, 100).unwrap();
        let w = TInfElem::dense_tail(Vec::new(), 10, 100).unwrap();
        let d = metric_d0(&z, &w, 30).unwrap();
        assert_eq!(d, MetricValue::Exact(QuadSurd::sqrt_of(2).unwrap()));

        // sup against the zero element is attained at the first tail index
        let z = TInfElem::dense_tail(Vec::new(), 10, 100).unwrap();
        let d = metric_d0(&z, &TInfElem::zero(), 30).unwrap();
        assert_eq!(d.cmp_rat(&rat(1, 200)), Some(Ordering::Greater));
        assert_eq!(d.cmp_rat(&rat(7, 1000)), Some(Ordering::Less));

        // a finite entry deep in the tail region dominates the sup
        let w = TInfElem::finite([(150u128, pt(1, 2))]).unwrap();
        let d = metric_d0(&z, &w, 30).unwrap();
        assert_eq!(d.cmp_rat(&rat(199, 100)), Some(Ordering::Greater));
        assert_eq!(d.cmp_rat(&rat(2, 1)), Some(Ordering::Less));

        // structurally different rules are not comparable here
        let s = TInfElem::sparse_harmonic(Vec::new(), 2, PosGen::Arithmetic { start: 101, step: 1 })
            .unwrap();
        assert!(matches!(metric_d0(&z, &s, 30).unwrap(), MetricValue::Unknown { .. }));
    }

    #[test]
    fn sum_metric_exact_and_enclosed() {
        let z = TInfElem::finite([(5u128, pt(1, 4)), (9, pt(1, 4))]).unwrap();
        let d = metric_d1(&z, &TInfElem::zero(), &rat(1, 1), 30).unwrap();
        // 2 sqrt(2) = 2.8284...
        assert_eq!(d.cmp_rat(&rat(28, 10)), Some(Ordering::Greater));
        assert_eq!(d.cmp_rat(&rat(29, 10)), Some(Ordering::Less));

        let z = TInfElem::finite([(5u128, pt(1, 6)), (7, pt(1, 2))]).unwrap();
        let d = metric_d1(&z, &TInfElem::zero(), &rat(1, 1), 30).unwrap();
        assert_eq!(d.cmp_rat(&rat(3, 1)), Some(Ordering::Equal));

        // mixed exact and transcendental chords fall back to an enclosure
        let z = TInfElem::finite([(1u128, pt(1, 8)), (2, pt(1, 4))]).unwrap();
        let d = metric_d1(&z, &TInfElem::zero(), &rat(1, 1), 30).unwrap();
        assert_eq!(d.cmp_rat(&rat(21, 10)), Some(Ordering::Greater));
        assert_eq!(d.cmp_rat(&rat(22, 10)), Some(Ordering::Less));

        // identical divergent tails cancel exactly
        let z = TInfElem::dense_tail([(1u128, pt(1, 2))], 1, 1).unwrap();
        let w = TInfElem::dense_tail(Vec::new(), 1, 1).unwrap();
        let d = metric_d1(&z, &w, &rat(1, 1), 30).unwrap();
        assert_eq!(d.cmp_rat(&rat(2, 1)), Some(Ordering::Equal));
    }

    #[test]
    fn sum_metric_diverges_with_certificate() {
        // dense tail 1/n against a finite element: terms live past index 3
        let z = TInfElem::dense_tail(Vec::new(), 1, 1).unwrap();
        let w = TInfElem::finite([(3u128, pt(1, 2))]).unwrap();
        let MetricValue::Diverges(cert) = metric_d1(&z, &w, &rat(2, 1), 30).unwrap() else {
            panic!("expected divergence");
        };
        // 4(H_6 - H_3) = 4(1/4 + 1/5 + 1/6) = 37/15 >= 2, and H_5 falls short
        assert_eq!(cert.through_index, 6);
        assert!(cert.partial_lower >= rat(2, 1));

        // sparse schedule: first scheduled term already crosses target 1
        let z = TInfElem::sparse_harmonic(Vec::new(), 2, PosGen::Arithmetic { start: 5, step: 3 })
            .unwrap();
        let MetricValue::Diverges(cert) = metric_d1(&z, &TInfElem::zero(), &rat(1, 1), 30).unwrap()
        else {
            panic!("expected divergence");
        };
        assert_eq!(cert.through_index, 5);
        assert_eq!(cert.partial_lower, rat(2, 1));

        // constant-norm tail diverges linearly
        let z = TInfElem::constant_tail(Vec::new(), rat(1, 3), 7).unwrap();
        let MetricValue::Diverges(cert) = metric_d1(&z, &TInfElem::zero(), &rat(4, 1), 30).unwrap()
        else {
            panic!("expected divergence");
        };
        assert_eq!(cert.through_index, 10); // 3 terms of 4/3 past index 7
        assert_eq!(cert.partial_lower, rat(4, 1));

        // different divergent shapes stay undecided
        let s = TInfElem::sparse_harmonic(Vec::new(), 1, PosGen::Arithmetic { start: 2, step: 1 })
            .unwrap();
        let z = TInfElem::dense_tail(Vec::new(), 1, 1).unwrap();
        assert!(matches!(
            metric_d1(&z, &s, &rat(1, 1), 30).unwrap(),
            MetricValue::Unknown { .. }
        ));
    }

    #[test]
    fn family_analysis_by_rule() {
        let unit = OmegaFamily::ruled(OmegaRule::UnitDiagonal);
        let a = coefficient_analysis(&unit, 8).unwrap();
        assert!(matches!(a.leading, LeadingSupport::Divergent { from: 1, .. }));
        assert_eq!(a.bound, CoefficientBound::Bounded { c: crate::int(1) });

        let scaled = OmegaFamily::ruled(OmegaRule::ScaledDiagonal);
        let a = coefficient_analysis(&scaled, 8).unwrap();
        let CoefficientBound::Unbounded { index_poly, verified_levels } = a.bound else {
            panic!("expected unbounded coefficients");
        };
        assert_eq!(index_poly.eval(&crate::int(1)), crate::int(4));
        assert_eq!(index_poly.eval(&crate::int(2)), crate::int(9));
        assert!(verified_levels >= 4);

        let pinned = OmegaFamily::ruled(OmegaRule::PinnedFirst);
        let a = coefficient_analysis(&pinned, 8).unwrap();
        assert!(matches!(a.leading, LeadingSupport::Stuck { position: 1, .. }));

        // prefix with a large coefficient raises the bound
        let fam = OmegaFamily {
            prefix: vec![ZInfElem::from_entries([(2u128, crate::int(5))]).unwrap()],
            rule: Some(OmegaRule::UnitDiagonal),
        };
        let a = coefficient_analysis(&fam, 8).unwrap();
        assert_eq!(a.bound, CoefficientBound::Bounded { c: crate::int(5) });

        // no rule: honest inconclusives
        let fam = OmegaFamily { prefix: vec![ZInfElem::e(1)], rule: None };
        let a = coefficient_analysis(&fam, 8).unwrap();
        assert!(matches!(a.leading, LeadingSupport::Inconclusive { .. }));
        assert!(matches!(a.bound, CoefficientBound::Inconclusive { .. }));
    }

    #[test]
    fn diagonal_witness_hits_the_antipode() {
        let scaled = OmegaFamily::ruled(OmegaRule::ScaledDiagonal);
        let report = unbounded_pairing_witness(&scaled, 3).unwrap();
        let ks: Vec<u64> = report.levels.iter().map(|l| l.k).collect();
        assert_eq!(ks, vec![4, 9, 16]);
        for level in &report.levels {
            assert_eq!(level.pairing_norm, rat(1, 2));
            assert_eq!(level.position as u64, level.k);
        }
        assert_eq!(report.witness.value_at(9).unwrap(), pt(1, 18));
        assert!(report.l1_upper < rat(5, 2));
        assert!(report.l1_upper > rat(2, 1));

        let unit = OmegaFamily::ruled(OmegaRule::UnitDiagonal);
        assert!(unbounded_pairing_witness(&unit, 3).is_err());
    }

    #[test]
    fn escape_witness_along_the_diagonal() {
        let unit = OmegaFamily::ruled(OmegaRule::UnitDiagonal);
        let report = escape_witness(&unit, 5, &rat(10, 1)).unwrap();
        assert_eq!(report.bound_c, 1);
        assert_eq!(report.cutoffs, vec![1, 2, 3, 4, 5]);
        assert_eq!(report.positions, vec![1, 2, 3, 4, 5]);
        // harmonic values on the diagonal; 1/1 collapses to the identity
        assert!(report.witness.value_at(1).unwrap().is_zero());
        assert_eq!(report.witness.value_at(3).unwrap(), pt(1, 3));
        assert!(report.trace.iter().all(|t| t.ok));
        // sum_{m=2}^{19} 4/m >= 10, one block short falls just under
        assert_eq!(report.divergence.through_index, 19);
        assert!(report.divergence.partial_lower >= rat(10, 1));

        let scaled = OmegaFamily::ruled(OmegaRule::ScaledDiagonal);
        assert!(escape_witness(&scaled, 3, &rat(1, 1)).is_err());
        let pinned = OmegaFamily::ruled(OmegaRule::PinnedFirst);
        assert!(escape_witness(&pinned, 3, &rat(1, 1)).is_err());
    }

    #[test]
    fn block_partition_on_a_dense_tail() {
        // start override: coordinates 1/7, 1/8, 1/9 sum to 191/504 > 1/3,
        // and stopping one earlier provably falls short
        let z = TInfElem::dense_tail(Vec::new(), 1, 2).unwrap();
        let GClosureOutcome::Blocks(part) = gclosure_blocks(&z, 2, Some(7), 40).unwrap() else {
            panic!("expected blocks");
        };
        assert_eq!(part.blocks[0].start, 7);
        assert_eq!(part.blocks[0].end, 9);
        assert_eq!(part.blocks[0].sum, BlockSum::Exact(rat(191, 504)));
        assert_eq!(part.blocks[1].start, 10);
        assert_eq!(part.blocks[1].end, 13);
        assert!(part.chord_floor > rat(17320, 10000));
        assert_eq!(part.blocks[0].indicator, ZInfElem::indicator_block(7, 9).unwrap());

        // values at the override start must already be small
        assert!(gclosure_blocks(&z, 1, Some(3), 40).is_err());
        // the default start enforces values below 1/100
        let GClosureOutcome::Blocks(part) = gclosure_blocks(&z, 1, None, 40).unwrap() else {
            panic!("expected blocks");
        };
        assert_eq!(part.blocks[0].start, 101);

        // wrong shapes are refused
        assert!(gclosure_blocks(&TInfElem::zero(), 1, None, 40).is_err());
        let s = TInfElem::sparse_harmonic(Vec::new(), 1, PosGen::Arithmetic { start: 2, step: 1 })
            .unwrap();
        assert!(gclosure_blocks(&s, 1, None, 40).is_err());

        // constant-norm tails separate on a single coordinate
        let c = TInfElem::constant_tail(Vec::new(), rat(2, 3), 7).unwrap();
        assert_eq!(
            gclosure_blocks(&c, 1, None, 40).unwrap(),
            GClosureOutcome::CoordinateSeparator { from: 8, norm: rat(1, 3) }
        );
    }
}
