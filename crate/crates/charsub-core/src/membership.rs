//! Membership verdicts for characterized subgroups.
//!
//! A point x lies in s_u when the pairings (u_n, x) converge to the
//! identity. For rational points and closed-form integer sequences this is
//! decidable through residue orbits; for finite groups it reduces to the
//! period annihilating the point. Negative verdicts always come with a
//! distance bound plus a recurrence token showing the distance is attained
//! infinitely often.

use crate::circle::CirclePoint;
use crate::error::{precondition, Error, Result};
use crate::finabel::{Character, FinAbGroup, GroupElement, QuotientMap, Subgroup};
use crate::seq::{FinPerSeq, SeqSpec};
use crate::Rat;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Why a point is certified inside s_u.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InReason {
    /// x = 0: every pairing is the identity
    ZeroPoint,
    /// the sequence vanishes from the cutoff on
    TrivialTail,
    /// residues of u_n on the modulus cycle are all zero
    ResidueCycleVanishes,
    /// every character on the period annihilates the point
    PeriodAnnihilates,
}

/// Positive certificate: pairings are the identity for all n >= cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InCertificate {
    pub cutoff: u64,
    pub reason: InReason,
}

/// Negative certificate: the pairing sits at distance >= delta from the
/// identity at position `preperiod + witness_index + k * cycle.len()` for
/// every k >= 0, so it recurs infinitely often.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotInWitness {
    /// min over the recurring nonzero pairing values of their circle norm
    pub delta: Rat,
    /// pairing numerators over `modulus` along one full cycle
    pub cycle: Vec<BigInt>,
    pub modulus: BigInt,
    pub preperiod: u64,
    /// index into `cycle` attaining delta
    pub witness_index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    In(InCertificate),
    NotIn(NotInWitness),
    Unknown { depth: u64 },
}

impl Verdict {
    pub fn is_in(&self) -> bool {
        matches!(self, Verdict::In(_))
    }
    pub fn is_not_in(&self) -> bool {
        matches!(self, Verdict::NotIn(_))
    }
}

/// A membership probe target: a circle point for integer-valued sequences,
/// or a finite-group point for character sequences.
#[derive(Debug, Clone)]
pub enum Point {
    Circle(CirclePoint),
    Finite(FinAbGroup, GroupElement),
}

/// Decide x in s_u, at the given search depth for the undecidable cases.
pub fn member_su(u: &SeqSpec, x: &Point, depth: u64) -> Result<Verdict> {
    match (u, x) {
        (SeqSpec::FinPer(f), Point::Finite(g, p)) => member_su_finite_point(f, g, p),
        (SeqSpec::FinPer(_), Point::Circle(_)) => {
            Err(Error::WrongSequenceKind { expected: "integer-valued" })
        }
        (_, Point::Finite(..)) => Err(Error::WrongSequenceKind { expected: "finite-group" }),
        (_, Point::Circle(c)) => member_su_circle(u, c, depth),
    }
}

/// Decide x in s_u(T) for an integer-valued sequence.
pub fn member_su_circle(u: &SeqSpec, x: &CirclePoint, depth: u64) -> Result<Verdict> {
    if let SeqSpec::FinPer(_) = u {
        return Err(Error::WrongSequenceKind { expected: "integer-valued" });
    }
    if x.is_zero() {
        return Ok(Verdict::In(InCertificate { cutoff: 0, reason: InReason::ZeroPoint }));
    }
    if let Some(n0) = u.eventually_zero_from() {
        return Ok(Verdict::In(InCertificate { cutoff: n0, reason: InReason::TrivialTail }));
    }
    let r = match x.as_rat() {
        Some(r) => r,
        None => return Ok(Verdict::Unknown { depth }),
    };
    if let SeqSpec::Explicit { terms } = u {
        // a finite prefix cannot decide a tail condition either way
        return Ok(Verdict::Unknown { depth: depth.min(terms.len() as u64) });
    }
    let q = r.denom().clone();
    let p = r.numer().clone();
    let orbit = u.residue_orbit(&q)?;
    if orbit.cycle_is_zero() {
        return Ok(Verdict::In(InCertificate {
            cutoff: orbit.preperiod,
            reason: InReason::ResidueCycleVanishes,
        }));
    }
    let pairing_cycle: Vec<BigInt> =
        orbit.cycle.iter().map(|res| (res * &p).mod_floor(&q)).collect();
    let (delta, idx) = min_nonzero_norm(&pairing_cycle, &q)
        .expect("nonzero residue with unit numerator stays nonzero");
    Ok(Verdict::NotIn(NotInWitness {
        delta,
        cycle: pairing_cycle,
        modulus: q,
        preperiod: orbit.preperiod,
        witness_index: idx,
    }))
}

/// Decide x in s_u(X) for a finite group X and eventually-periodic u.
pub fn member_su_finite_point(
    u: &FinPerSeq,
    x_group: &FinAbGroup,
    x: &GroupElement,
) -> Result<Verdict> {
    if u.group != *x_group {
        return Err(Error::ShapeMismatch { expected: u.group.rank(), got: x_group.rank() });
    }
    let m = BigInt::from(x_group.exponent());
    let pairing_cycle: Vec<BigInt> = u
        .period
        .iter()
        .map(|c| x_group.pair_num(c, x).map(BigInt::from))
        .collect::<Result<_>>()?;
    if pairing_cycle.iter().all(Zero::is_zero) {
        return Ok(Verdict::In(InCertificate {
            cutoff: u.prefix.len() as u64,
            reason: InReason::PeriodAnnihilates,
        }));
    }
    let (delta, idx) = min_nonzero_norm(&pairing_cycle, &m).expect("nonzero entry exists");
    Ok(Verdict::NotIn(NotInWitness {
        delta,
        cycle: pairing_cycle,
        modulus: m,
        preperiod: u.prefix.len() as u64,
        witness_index: idx,
    }))
}

/// min over nonzero numerators of || num / modulus ||, with its index.
fn min_nonzero_norm(nums: &[BigInt], modulus: &BigInt) -> Option<(Rat, u64)> {
    let mut best: Option<(Rat, u64)> = None;
    for (i, num) in nums.iter().enumerate() {
        if num.is_zero() {
            continue;
        }
        let t = Rat::new(num.clone(), modulus.clone());
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        let norm = if t <= half { t.clone() } else { Rat::one() - &t };
        if best.as_ref().map(|(b, _)| norm < *b).unwrap_or(true) {
            best = Some((norm, i as u64));
        }
    }
    best
}

/// s_u(X) for finite X: the annihilator of the subgroup generated by the
/// characters on the period. The prefix never matters.
pub fn su_finite(x: &FinAbGroup, u: &FinPerSeq) -> Result<Subgroup> {
    if u.group != *x {
        return Err(Error::ShapeMismatch { expected: x.rank(), got: u.group.rank() });
    }
    let gens: Vec<GroupElement> =
        u.period.iter().map(|c| GroupElement { coords: c.coords.clone() }).collect();
    let span = Subgroup::from_generators(x, &gens)?;
    Ok(span.annihilator())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriBool {
    True,
    False,
    Unknown,
}

/// Structural reason the radical collapses to {0}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructuralFamily {
    /// factorial-type: every modulus eventually divides the terms
    AllModuli,
    /// geometric-type: k / base^j is a member for every j
    PowerTower { base: BigInt },
}

/// Two-sided certified bounds on the radical s_u(T)^perp inside Z, with
/// Q-level evidence flags. A modulus n stands for the subgroup n*Z, with
/// n = 0 meaning {0}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalProfile {
    pub superset_modulus: BigInt,
    pub subset_modulus: BigInt,
    /// rational members of s_u(T) found with denominator <= probe bound,
    /// canonical values in [0, 1)
    pub members: Vec<Rat>,
    /// the found members are (1/Q)-dense on the circle
    pub map_flag: TriBool,
    /// the terms generate Z and every nonzero probe was rejected
    pub minap_flag: TriBool,
    pub structural_family: Option<StructuralFamily>,
    pub probe_bound: u64,
}

/// Probe every rational with denominator <= q_max and combine with the
/// structural families to bound the radical from both sides.
pub fn radical_profile(u: &SeqSpec, q_max: u64) -> Result<RadicalProfile> {
    if q_max == 0 {
        return Err(precondition("probe bound must be >= 1"));
    }
    if let SeqSpec::FinPer(_) = u {
        return Err(Error::WrongSequenceKind { expected: "integer-valued" });
    }
    let mut members: Vec<Rat> = Vec::new();
    let mut nonzero_member = false;
    let mut all_decided = true;
    // for reduced p/q the numerator is a unit mod q, so membership of p/q
    // only depends on whether the residue cycle mod q vanishes: one orbit
    // decides every numerator of that denominator at once
    let eventually_zero_tail = u.eventually_zero_from().is_some();
    let explicit_prefix = matches!(u, SeqSpec::Explicit { .. });
    for q in 1..=q_max {
        let all_in = if eventually_zero_tail {
            Some(true)
        } else if explicit_prefix {
            None
        } else {
            Some(u.residue_orbit(&BigInt::from(q))?.cycle_is_zero())
        };
        for p in 0..q {
            if q > 1 && BigInt::from(p).gcd(&BigInt::from(q)) != BigInt::one() {
                continue;
            }
            if q == 1 && p > 0 {
                continue;
            }
            match all_in {
                Some(true) => {
                    if p > 0 {
                        nonzero_member = true;
                    }
                    members.push(Rat::new(BigInt::from(p), BigInt::from(q)));
                }
                Some(false) => {}
                None => all_decided = false,
            }
        }
    }
    members.sort();

    let structural_family = match u {
        SeqSpec::Factorial { a } if !a.is_zero() => Some(StructuralFamily::AllModuli),
        SeqSpec::Geometric { a, q } if !a.is_zero() && q.abs() >= BigInt::from(2) => {
            Some(StructuralFamily::PowerTower { base: q.clone() })
        }
        _ => None,
    };
    if let Some(StructuralFamily::PowerTower { base }) = &structural_family {
        // spot-check the family at the first ten levels
        let mut d = BigInt::one();
        for _ in 0..10 {
            d *= base.abs();
            let x = CirclePoint::from_rat(&Rat::new(BigInt::one(), d.clone()));
            if !member_su_circle(u, &x, 0)?.is_in() {
                return Err(precondition("power tower family failed its spot check"));
            }
        }
    }

    let eventually_zero = u.eventually_zero_from().is_some();
    let superset_modulus = if structural_family.is_some() || eventually_zero {
        BigInt::zero()
    } else {
        let mut l = BigInt::one();
        for m in &members {
            l = l.lcm(m.denom());
        }
        l
    };

    // circular gap check including the wraparound through 0
    let map_flag = {
        let bound = Rat::new(BigInt::one(), BigInt::from(q_max));
        let dense = !members.is_empty() && {
            let mut ok = true;
            for w in members.windows(2) {
                if &w[1] - &w[0] > bound {
                    ok = false;
                }
            }
            let wrap = Rat::one() - members.last().unwrap() + members.first().unwrap();
            ok && wrap <= bound
        };
        if dense {
            TriBool::True
        } else {
            TriBool::Unknown
        }
    };

    let minap_flag = match u.terms_gcd() {
        _ if nonzero_member => TriBool::False,
        Some(g) if g >= BigInt::from(2) => TriBool::False,
        Some(g) if g.is_one() && all_decided => TriBool::True,
        _ => TriBool::Unknown,
    };

    Ok(RadicalProfile {
        superset_modulus,
        subset_modulus: BigInt::zero(),
        members,
        map_flag,
        minap_flag,
        structural_family,
        probe_bound: q_max,
    })
}

/// Push an eventually-periodic character sequence through a quotient of the
/// group its terms live in, then canonicalize.
pub fn pushforward(u: &FinPerSeq, pi: &QuotientMap) -> Result<FinPerSeq> {
    if u.group.rank() != pi.source_rank() {
        return Err(Error::ShapeMismatch { expected: pi.source_rank(), got: u.group.rank() });
    }
    let map = |c: &Character| -> Character {
        let img = pi.project(&GroupElement { coords: c.coords.clone() });
        Character { coords: img.coords }
    };
    let prefix: Vec<Character> = u.prefix.iter().map(map).collect();
    let period: Vec<Character> = u.period.iter().map(map).collect();
    Ok(FinPerSeq::new(pi.group.clone(), prefix, period)?.canonicalize())
}

/// Outcome of the duality transfer check for a subgroup H <= G against a
/// character family S <= dual(G) and a claimed restricted family T_H.
#[derive(Debug, Clone)]
pub struct TransferReport {
    /// H equals the annihilator of (S intersect H^perp): H is recoverable
    /// from the characters of S that see it
    pub dually_closed: bool,
    /// the restrictions of S to H are exactly T_H
    pub dually_embedded: bool,
    /// annihilator of S in G
    pub n_g: Subgroup,
    /// annihilator of T_H inside H, embedded back into G
    pub n_h: Subgroup,
    /// n_h agrees with n_g
    pub lemma_holds: bool,
}

/// Check whether the radical computed inside H through T_H agrees with the
/// radical computed in G through S.
pub fn radical_transfer_check(
    g: &FinAbGroup,
    s: &Subgroup,
    h: &Subgroup,
    t_h: &Subgroup,
) -> Result<TransferReport> {
    if s.ambient() != g || h.ambient() != g {
        return Err(Error::ShapeMismatch { expected: g.rank(), got: s.ambient().rank() });
    }
    let view = h.as_group();
    if t_h.ambient() != &view.group {
        return Err(Error::ShapeMismatch {
            expected: view.group.rank(),
            got: t_h.ambient().rank(),
        });
    }

    // image of S under restriction to H, generated by generator images
    let mut restricted: Vec<GroupElement> = Vec::new();
    for row in s.basis() {
        let chi = Character { coords: row.clone() };
        let eta = crate::finabel::restrict_character(g, &chi, &view)?;
        restricted.push(GroupElement { coords: eta.coords });
    }
    let image = Subgroup::from_generators(&view.group, &restricted)?;
    let dually_embedded = image == *t_h;

    let closure = s.intersect(&h.annihilator())?.annihilator();
    let dually_closed = closure == *h;

    let n_g = s.annihilator();
    let n_h_inside = t_h.annihilator();
    let mut n_h_gens: Vec<GroupElement> = Vec::new();
    for row in n_h_inside.basis() {
        let mut acc = g.zero();
        for (j, &c) in row.iter().enumerate() {
            acc = g.add(&acc, &g.scale(c, &view.embed[j]));
        }
        n_h_gens.push(acc);
    }
    let n_h = Subgroup::from_generators(g, &n_h_gens)?;
    let lemma_holds = n_h == n_g;

    Ok(TransferReport { dually_closed, dually_embedded, n_g, n_h, lemma_holds })
}
