//! Graphs of pairing sequences and the characters that separate points
//! from them.
//!
//! The depth-N graph of a point x against a sequence u is the vector of
//! pairings ((u_1, x), ..., (u_N, x)); trace entry k always pairs the k-th
//! sequence term with the base point. A claimed trace that deviates at
//! some finite depth is refuted by an explicit character of the product
//! group, constructed from the annihilator of the graph subgroup and
//! reported together with its verification data. The same annihilator,
//! over a group the sequence characterizes completely, carries the
//! generating set {(-u_k; e_k)} whose relations tie base terms to tail
//! basis vectors.
//!
//! Sum-set neighborhoods round the module out: A(k, m) enumeration, a
//! membership search for sums of single terms with divisibility
//! certificates on the negative side, and continuity certificates turning
//! a membership verdict into cutoff data checked against sampled
//! neighborhood elements.

use crate::circle::{self, CirclePoint};
use crate::error::{precondition, Error, Result};
use crate::finabel::{restrict_character, Character, FinAbGroup, GroupElement, Subgroup, SubgroupView};
use crate::membership::{member_su_circle, su_finite, NotInWitness, Verdict};
use crate::seq::{FinPerSeq, SeqSpec};
use crate::zinf::ZInfElem;
use crate::Rat;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use alloc::{format, vec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Trace entries are materialized one by one; beyond this the request is
/// rejected rather than silently truncated.
const TRACE_CAP: u64 = 10_000;

/// Node ceiling for the A(k, m) pattern recursion and the neighborhood
/// search fallback budget.
const NODE_CAP: u64 = 1 << 22;

/// The base point a graph is computed against.
#[derive(Debug, Clone)]
pub enum GraphBase {
    Finite { group: FinAbGroup, point: GroupElement },
    Circle(CirclePoint),
}

/// A point of the product space together with its exact pairing trace.
#[derive(Debug, Clone)]
pub struct GraphPoint {
    pub base: GraphBase,
    pub trace: Vec<CirclePoint>,
}

/// Exact depth-N trace of `base` against `u`. Finite bases need a
/// finite-group sequence over the same group; circle bases need an
/// integer-valued sequence.
pub fn graph_point(u: &SeqSpec, base: &GraphBase, depth: u64) -> Result<GraphPoint> {
    if depth > TRACE_CAP {
        return Err(Error::EnumerationCap { cap: TRACE_CAP, needed: depth });
    }
    let mut trace = Vec::with_capacity(depth as usize);
    match base {
        GraphBase::Finite { group, point } => {
            let fps = match u {
                SeqSpec::FinPer(f) => f,
                _ => return Err(Error::WrongSequenceKind { expected: "finite-group" }),
            };
            if fps.group != *group {
                return Err(precondition("sequence and base point live over different groups"));
            }
            for k in 1..=depth {
                let v = group.pair(fps.term(k - 1), point)?;
                trace.push(CirclePoint::from_rat(&v));
            }
        }
        GraphBase::Circle(x) => {
            for k in 1..=depth {
                let term = u.eval_int(k - 1)?;
                trace.push(circle::pair(&term, x));
            }
        }
    }
    Ok(GraphPoint { base: base.clone(), trace })
}

/// The depth-i graph subgroup: inside X x Z_m^i (m = exponent of X, trace
/// coordinates scaled to numerators over m), the subgroup generated by
/// the graph images of the generators of X. Returns the product group
/// together with the subgroup. Depth 0 degenerates to X itself.
pub fn graph_subgroup(group: &FinAbGroup, u: &FinPerSeq, depth: u64) -> Result<(FinAbGroup, Subgroup)> {
    if u.group != *group {
        return Err(precondition("sequence and group disagree"));
    }
    let i = usize::try_from(depth).map_err(|_| Error::Overflow)?;
    let product = group.with_trace_block(i);
    let mut images = Vec::new();
    for g in group.generators() {
        let mut coords = g.coords.clone();
        for k in 1..=depth {
            coords.push(group.pair_num(u.term(k - 1), &g)?);
        }
        images.push(product.reduce(&coords)?);
    }
    let sub = Subgroup::from_generators(&product, &images)?;
    Ok((product, sub))
}

/// A character of X x Z_m^i certified to vanish on the depth-i graph
/// subgroup and not at the separated point.
#[derive(Debug, Clone)]
pub struct SeparatingCharacter {
    pub base_char: Character,
    /// tail coefficients n_1..n_i at positions 1..i
    pub tail: ZInfElem,
    /// depth i at which the claim first deviates from the graph
    pub depth: u64,
    /// graph-subgroup elements checked to pair to the identity
    pub annihilated: u64,
    /// exact value at the separated point, certified nonzero
    pub value_at_point: CirclePoint,
}

fn char_neg(group: &FinAbGroup, chi: &Character) -> Character {
    let coords: Vec<i64> = chi.coords.iter().map(|&c| -c).collect();
    group.character(&coords).expect("negation preserves shape")
}

fn char_as_element(group: &FinAbGroup, chi: &Character) -> GroupElement {
    group.reduce(&chi.coords).expect("character coords share the group shape")
}

/// Validity of the tail coefficient t at the deviation: t * delta != 0 on
/// the circle, where delta is the gap between claim and truth.
enum DeviationGap {
    /// reduced denominator of a rational gap; t works iff d does not
    /// divide t
    Rational { denom: BigInt },
    /// irrational gap; every nonzero t works
    Irrational,
}

impl DeviationGap {
    fn admits(&self, t: i64) -> bool {
        match self {
            DeviationGap::Rational { denom } => !(BigInt::from(t) % denom).is_zero(),
            DeviationGap::Irrational => t != 0,
        }
    }
}

/// Separating character for a claimed trace that leaves the graph of `u`
/// at some index: the lexicographically smallest annihilator element of
/// the deviation-depth graph subgroup that does not vanish at the claimed
/// point. Trace entries past the first deviation are ignored. Errors when
/// the claim agrees with the graph through its whole depth.
pub fn separate_point(
    group: &FinAbGroup,
    u: &FinPerSeq,
    x: &GroupElement,
    claimed: &[CirclePoint],
) -> Result<SeparatingCharacter> {
    if u.group != *group {
        return Err(precondition("sequence and group disagree"));
    }
    if claimed.is_empty() {
        return Err(precondition("an off-graph claim needs at least one trace entry"));
    }
    for z in claimed {
        if let CirclePoint::Irrational(p) = z {
            if p.descriptor().is_none() {
                return Err(precondition("separation needs symbolic trace claims"));
            }
        }
    }
    // first index (1-based) where the claim leaves the graph
    let mut deviation: Option<(u64, CirclePoint)> = None;
    for (j, z) in claimed.iter().enumerate() {
        let truth = CirclePoint::from_rat(&group.pair(u.term(j as u64), x)?);
        let gap = circle::sub_mod1(z, &truth);
        if !circle::is_zero_symbolic(&gap)? {
            deviation = Some((j as u64 + 1, gap));
            break;
        }
    }
    let (depth, gap) = deviation
        .ok_or_else(|| precondition("the point lies on the graph through the claimed depth"))?;
    if group.is_trivial() {
        return Err(precondition("the trivial group admits no separating characters"));
    }
    let m = group.exponent();
    let gap = match gap {
        CirclePoint::Rational(r) => DeviationGap::Rational { denom: r.denom().clone() },
        CirclePoint::Irrational(_) => DeviationGap::Irrational,
    };

    // Annihilator elements of the depth-i graph subgroup are exactly the
    // pairs (-(n_1 u_1 + ... + n_i u_i); n_1..n_i) with n_k in Z_m. Their
    // value at the claimed point is n_i * delta, because the true trace is
    // annihilated and the claim agrees with it below the deviation. The
    // lex order on (base coords, n_1..n_i) is minimized in two stages:
    // smallest reachable base character over admissible n_i, then the
    // smallest coefficient vector producing it.
    let terms: Vec<GroupElement> =
        (0..depth).map(|k| char_as_element(group, u.term(k))).collect();
    let below = Subgroup::from_generators(group, &terms[..terms.len() - 1])?;
    let below_elems = below.elements()?;
    let last = &terms[terms.len() - 1];

    let mut best: Option<Vec<i64>> = None;
    for t in 1..m {
        if !gap.admits(t) {
            continue;
        }
        let anchor = group.neg(&group.scale(t, last));
        for s in &below_elems {
            let cand = group.sub(&anchor, s).coords;
            if best.as_ref().map(|b| cand < *b).unwrap_or(true) {
                best = Some(cand);
            }
        }
    }
    let base_coords = best.ok_or_else(|| {
        precondition("no admissible tail coefficient exists at this exponent")
    })?;
    let base_char = group.character(&base_coords)?;

    // lex-smallest (n_1, ..., n_i) with sum n_k u_k = -base and n_i
    // admissible, by greedy descent over reachable targets
    let target0 = group.neg(&char_as_element(group, &base_char));
    let mut memo: BTreeMap<(u64, Vec<i64>), bool> = BTreeMap::new();
    fn reachable(
        group: &FinAbGroup,
        terms: &[GroupElement],
        gap: &DeviationGap,
        memo: &mut BTreeMap<(u64, Vec<i64>), bool>,
        level: u64,
        target: &GroupElement,
    ) -> bool {
        let m = group.exponent();
        let last = level as usize == terms.len() - 1;
        let key = (level, target.coords.clone());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut ok = false;
        for a in 0..m {
            if last {
                if gap.admits(a) && group.scale(a, &terms[level as usize]) == *target {
                    ok = true;
                    break;
                }
            } else {
                let rest = group.sub(target, &group.scale(a, &terms[level as usize]));
                if reachable(group, terms, gap, memo, level + 1, &rest) {
                    ok = true;
                    break;
                }
            }
        }
        memo.insert(key, ok);
        ok
    }
    let mut coeffs = Vec::with_capacity(depth as usize);
    let mut target = target0;
    for level in 0..depth {
        let lastp = level == depth - 1;
        let mut chosen = None;
        for a in 0..m {
            if lastp {
                if gap.admits(a) && group.scale(a, &terms[level as usize]) == target {
                    chosen = Some(a);
                    break;
                }
            } else {
                let rest = group.sub(&target, &group.scale(a, &terms[level as usize]));
                if reachable(group, &terms, &gap, &mut memo, level + 1, &rest) {
                    target = rest;
                    chosen = Some(a);
                    break;
                }
            }
        }
        coeffs.push(chosen.ok_or_else(|| {
            precondition("separator search lost a reachable target; bug")
        })?);
    }

    let tail = ZInfElem::from_entries(
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(j, &a)| (j as u128 + 1, BigInt::from(a))),
    )?;

    // verification: the character vanishes on every graph-subgroup element
    // and not at the claimed point
    let (product, sub) = graph_subgroup(group, u, depth)?;
    let r = group.rank();
    let mut omega_coords = base_coords.clone();
    omega_coords.extend(coeffs.iter().copied());
    let omega = product.character(&omega_coords)?;
    let mut annihilated = 0u64;
    for p in sub.elements()? {
        let v = product.pair(&omega, &p)?;
        if !v.is_zero() {
            return Err(precondition("separator failed annihilation; bug"));
        }
        annihilated += 1;
    }
    let mut value = CirclePoint::from_rat(&group.pair(&base_char, x)?);
    for (j, &a) in coeffs.iter().enumerate() {
        let contrib = circle::pair(&BigInt::from(a), &claimed[j]);
        value = circle::add_mod1(&value, &contrib)?;
    }
    if circle::is_zero_symbolic(&value)? {
        return Err(precondition("separator vanishes at the claimed point; bug"));
    }
    debug_assert_eq!(omega.coords.len(), r + depth as usize);
    Ok(SeparatingCharacter { base_char, tail, depth, annihilated, value_at_point: value })
}

/// Generating set of the graph annihilator with its verification data.
#[derive(Debug, Clone)]
pub struct AnnihilatorGenerators {
    /// (-u_k; e_k) for k = 1..depth
    pub generators: Vec<(Character, ZInfElem)>,
    /// (generator, group element) pairs checked to annihilate
    pub pairs_checked: u64,
    /// each (u_n; -e_n) is the negative of the n-th generator, so the
    /// base term u_n is identified with the n-th tail basis vector
    /// modulo the generated subgroup
    pub relation_verified: bool,
}

/// Generators {(-u_k; e_k) : k <= depth} of the annihilator of the graph
/// of `u` over a group the sequence fully characterizes. Errors when the
/// characterized subgroup is proper.
pub fn annihilator_generators(
    group: &FinAbGroup,
    u: &FinPerSeq,
    depth: u64,
) -> Result<AnnihilatorGenerators> {
    if u.group != *group {
        return Err(precondition("sequence and group disagree"));
    }
    if depth == 0 {
        return Err(precondition("the annihilator presentation needs depth at least 1"));
    }
    let su = su_finite(group, u)?;
    if !su.is_full() {
        return Err(precondition(
            "the sequence characterizes a proper subgroup; restrict to the closure first",
        ));
    }
    let mut generators = Vec::with_capacity(depth as usize);
    for k in 1..=depth {
        let chi = char_neg(group, u.term(k - 1));
        generators.push((chi, ZInfElem::e(k as u128)));
    }
    // every generator annihilates every graph point: (-u_k, y) + (u_k, y)
    // folds to zero coordinatewise
    let mut pairs_checked = 0u64;
    for y in group.elements()? {
        for (k, (chi, _)) in generators.iter().enumerate() {
            let a = group.pair(chi, &y)?;
            let b = group.pair(u.term(k as u64), &y)?;
            if !circle::reduce_mod1(&(a + b)).is_zero() {
                return Err(precondition("annihilator generator fails on a graph point; bug"));
            }
            pairs_checked += 1;
        }
    }
    // relation check: (u_n; -e_n) must equal the negated n-th generator
    let mut relation_verified = true;
    for n in 1..=depth {
        let (chi, tail) = &generators[n as usize - 1];
        let neg_base = char_neg(group, chi);
        let neg_tail = tail.neg();
        let direct = u.term(n - 1);
        relation_verified &= neg_base == *direct && neg_tail == ZInfElem::e(n as u128).neg();
    }
    Ok(AnnihilatorGenerators { generators, pairs_checked, relation_verified })
}

/// The characterized subgroup of X as a group in its own right, with the
/// sequence transported onto it. The restricted sequence always
/// characterizes the whole closure.
#[derive(Debug, Clone)]
pub struct ClosureRestriction {
    pub closure: Subgroup,
    pub view: SubgroupView,
    pub restricted: FinPerSeq,
}

pub fn restrict_to_closure(group: &FinAbGroup, u: &FinPerSeq) -> Result<ClosureRestriction> {
    if u.group != *group {
        return Err(precondition("sequence and group disagree"));
    }
    let closure = su_finite(group, u)?;
    let view = closure.as_group();
    let restrict = |chi: &Character| restrict_character(group, chi, &view);
    let prefix: Result<Vec<Character>> = u.prefix.iter().map(restrict).collect();
    let period: Result<Vec<Character>> = u.period.iter().map(restrict).collect();
    let restricted = FinPerSeq::new(view.group.clone(), prefix?, period?)?;
    let again = su_finite(&view.group, &restricted)?;
    if !again.is_full() {
        return Err(precondition("restriction to the closure did not stabilize; bug"));
    }
    Ok(ClosureRestriction { closure, view, restricted })
}

fn check_akm_args(k: u32, lo: u64, hi: u64) -> Result<()> {
    if k == 0 {
        return Err(precondition("coefficient budget must be at least 1"));
    }
    if hi < lo {
        return Err(precondition("empty index range"));
    }
    Ok(())
}

/// All sums n_1 u_{r_1} + ... + n_s u_{r_s} with lo <= r_1 < ... < r_s <=
/// hi, nonzero n_j, and total coefficient mass at most k, for an
/// integer-valued sequence. Sorted and deduplicated.
pub fn enumerate_akm_int(u: &SeqSpec, k: u32, lo: u64, hi: u64) -> Result<Vec<BigInt>> {
    check_akm_args(k, lo, hi)?;
    let terms: Result<Vec<BigInt>> = (lo..=hi).map(|n| u.eval_int(n)).collect();
    let terms = terms?;
    let mut values: BTreeSet<BigInt> = BTreeSet::new();
    let mut nodes = 0u64;
    fn dfs(
        terms: &[BigInt],
        idx: usize,
        budget: i64,
        sum: BigInt,
        used: bool,
        values: &mut BTreeSet<BigInt>,
        nodes: &mut u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > NODE_CAP {
            return Err(Error::EnumerationCap { cap: NODE_CAP, needed: *nodes });
        }
        if idx == terms.len() {
            if used {
                values.insert(sum);
            }
            return Ok(());
        }
        dfs(terms, idx + 1, budget, sum.clone(), used, values, nodes)?;
        for c in 1..=budget {
            let step = &terms[idx] * BigInt::from(c);
            dfs(terms, idx + 1, budget - c, &sum + &step, true, values, nodes)?;
            dfs(terms, idx + 1, budget - c, &sum - &step, true, values, nodes)?;
        }
        Ok(())
    }
    dfs(&terms, 0, k as i64, BigInt::zero(), false, &mut values, &mut nodes)?;
    Ok(values.into_iter().collect())
}

/// Finite-group counterpart of [`enumerate_akm_int`]: reachable characters
/// instead of integers.
pub fn enumerate_akm_chars(
    group: &FinAbGroup,
    u: &FinPerSeq,
    k: u32,
    lo: u64,
    hi: u64,
) -> Result<Vec<Character>> {
    if u.group != *group {
        return Err(precondition("sequence and group disagree"));
    }
    check_akm_args(k, lo, hi)?;
    let terms: Vec<GroupElement> =
        (lo..=hi).map(|n| char_as_element(group, u.term(n))).collect();
    let mut values: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut nodes = 0u64;
    fn dfs(
        group: &FinAbGroup,
        terms: &[GroupElement],
        idx: usize,
        budget: i64,
        sum: GroupElement,
        used: bool,
        values: &mut BTreeSet<Vec<i64>>,
        nodes: &mut u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > NODE_CAP {
            return Err(Error::EnumerationCap { cap: NODE_CAP, needed: *nodes });
        }
        if idx == terms.len() {
            if used {
                values.insert(sum.coords);
            }
            return Ok(());
        }
        dfs(group, terms, idx + 1, budget, sum.clone(), used, values, nodes)?;
        for c in 1..=budget {
            let pos = group.add(&sum, &group.scale(c, &terms[idx]));
            dfs(group, terms, idx + 1, budget - c, pos, true, values, nodes)?;
            let negv = group.sub(&sum, &group.scale(c, &terms[idx]));
            dfs(group, terms, idx + 1, budget - c, negv, true, values, nodes)?;
        }
        Ok(())
    }
    dfs(group, &terms, 0, k as i64, group.zero(), false, &mut values, &mut nodes)?;
    values.into_iter().map(|c| group.character(&c)).collect()
}

/// One summand of a verified neighborhood decomposition: sign * u_index
/// drawn from the slot with cutoff `cutoffs[slot]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumTerm {
    pub slot: usize,
    pub index: u64,
    pub sign: i8,
}

#[derive(Debug, Clone)]
pub enum NeighborhoodVerdict {
    /// y = sum of the listed terms, re-summed exactly
    In { decomposition: Vec<SumTerm> },
    /// every decomposable value is divisible by the modulus and y is not
    /// (modulus 0 means only 0 is decomposable)
    NotIn { modulus: BigInt },
    /// search exhausted through the given index bound
    Unknown { searched_to: u64 },
}

/// gcd of the whole tail {u_n : n >= from}, certified via the residue
/// orbit; None when no certificate is available (explicit prefixes, huge
/// factorials, trivial gcd 1).
fn tail_gcd(u: &SeqSpec, from: u64) -> Result<Option<BigInt>> {
    match u {
        SeqSpec::Explicit { .. } => Ok(None),
        SeqSpec::Geometric { a, q } => {
            if a.is_zero() {
                return Ok(Some(BigInt::zero()));
            }
            if from > 4_096 {
                return Ok(None);
            }
            Ok(Some((a * q.pow(from as u32)).abs()))
        }
        SeqSpec::Factorial { a } => {
            if a.is_zero() {
                return Ok(Some(BigInt::zero()));
            }
            if from > 4_096 {
                return Ok(None);
            }
            let mut f = BigInt::from(1);
            for j in 1..=from {
                f *= BigInt::from(j);
            }
            Ok(Some((a * f).abs()))
        }
        SeqSpec::Recurrence { coeffs, .. } => {
            let window = 32 + 2 * coeffs.len() as u64;
            let mut g = BigInt::zero();
            for n in from..from + window {
                g = g.gcd(&u.eval_int(n)?);
            }
            if g.is_zero() {
                // the sampled window is all zero; certify a zero tail
                return match u.eventually_zero_from() {
                    Some(z) if z <= from => Ok(Some(BigInt::zero())),
                    _ => Ok(None),
                };
            }
            loop {
                if g == BigInt::from(1) {
                    return Ok(None);
                }
                let orbit = u.residue_orbit(&g)?;
                let mut offender = None;
                for n in from..orbit.preperiod {
                    if !orbit.residue(n).is_zero() {
                        offender = Some(orbit.residue(n).clone());
                        break;
                    }
                }
                if offender.is_none() {
                    offender = orbit.cycle.iter().find(|c| !c.is_zero()).cloned();
                }
                match offender {
                    None => return Ok(Some(g)),
                    Some(c) => g = g.gcd(&c),
                }
            }
        }
        SeqSpec::FinPer(_) => Err(Error::WrongSequenceKind { expected: "integer-valued" }),
    }
}

/// Membership of y in the sum-set neighborhood A*_{n_0} + ... + A*_{n_d},
/// each A*_{n} contributing one optional signed term u_l with l >= n.
/// Positive verdicts carry the decomposition; negative verdicts only ever
/// come from a divisibility certificate, never from search exhaustion.
pub fn neighborhood_member(
    u: &SeqSpec,
    cutoffs: &[u64],
    y: &BigInt,
    extra_depth: u64,
    node_budget: u64,
) -> Result<NeighborhoodVerdict> {
    if cutoffs.is_empty() {
        return Err(precondition("at least one cutoff is required"));
    }
    if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(precondition("cutoffs must increase strictly"));
    }
    if !u.is_integer_valued() {
        return Err(Error::WrongSequenceKind { expected: "integer-valued" });
    }
    if y.is_zero() {
        return Ok(NeighborhoodVerdict::In { decomposition: Vec::new() });
    }

    // divisibility certificate across all slots
    let mut all_gcd: Option<BigInt> = Some(BigInt::zero());
    for &n in cutoffs {
        match tail_gcd(u, n)? {
            None => {
                all_gcd = None;
                break;
            }
            Some(g) => {
                all_gcd = all_gcd.map(|acc| acc.gcd(&g));
            }
        }
    }
    if let Some(g) = all_gcd {
        if g.is_zero() {
            // every slot is identically zero, so only 0 decomposes
            return Ok(NeighborhoodVerdict::NotIn { modulus: g });
        }
        if g > BigInt::from(1) && !(y % &g).is_zero() {
            return Ok(NeighborhoodVerdict::NotIn { modulus: g });
        }
    }

    let top = cutoffs.last().copied().unwrap();
    let hi = top + extra_depth;
    // explicit prefixes end where their list does
    let hi = match u {
        SeqSpec::Explicit { terms } => {
            if terms.is_empty() {
                return Ok(NeighborhoodVerdict::Unknown { searched_to: top });
            }
            hi.min(terms.len() as u64 - 1)
        }
        _ => hi,
    };

    // per-slot term tables and magnitude bounds for pruning
    let mut slot_terms: Vec<Vec<(u64, BigInt)>> = Vec::with_capacity(cutoffs.len());
    for &n in cutoffs {
        let mut tbl = Vec::new();
        for l in n..=hi {
            tbl.push((l, u.eval_int(l)?));
        }
        slot_terms.push(tbl);
    }
    let slot_max: Vec<BigInt> = slot_terms
        .iter()
        .map(|tbl| tbl.iter().map(|(_, v)| v.abs()).max().unwrap_or_else(BigInt::zero))
        .collect();
    let mut suffix_bound = vec![BigInt::zero(); cutoffs.len() + 1];
    for i in (0..cutoffs.len()).rev() {
        suffix_bound[i] = &suffix_bound[i + 1] + &slot_max[i];
    }
    let mut suffix_gcd: Vec<Option<BigInt>> = vec![Some(BigInt::zero()); cutoffs.len() + 1];
    for i in (0..cutoffs.len()).rev() {
        suffix_gcd[i] = match (tail_gcd(u, cutoffs[i])?, &suffix_gcd[i + 1]) {
            (Some(a), Some(b)) => Some(a.gcd(b)),
            _ => None,
        };
    }

    struct Search<'a> {
        slot_terms: &'a [Vec<(u64, BigInt)>],
        suffix_bound: &'a [BigInt],
        suffix_gcd: &'a [Option<BigInt>],
        nodes: u64,
    }
    impl Search<'_> {
        fn dfs(&mut self, slot: usize, residual: &BigInt, picked: &mut Vec<SumTerm>) -> Option<bool> {
            if self.nodes == 0 {
                return None;
            }
            self.nodes -= 1;
            if slot == self.slot_terms.len() {
                return Some(residual.is_zero());
            }
            if residual.abs() > self.suffix_bound[slot] {
                return Some(false);
            }
            if let Some(g) = &self.suffix_gcd[slot] {
                if g > &BigInt::from(1) && !(residual % g).is_zero() {
                    return Some(false);
                }
            }
            // skip the slot first, then signed terms in index order
            match self.dfs(slot + 1, residual, picked) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            let terms: &[(u64, BigInt)] = self.slot_terms[slot].as_slice();
            for (l, v) in terms {
                if v.is_zero() {
                    continue;
                }
                for sign in [1i8, -1] {
                    let next = if sign > 0 { residual - v } else { residual + v };
                    picked.push(SumTerm { slot, index: *l, sign });
                    match self.dfs(slot + 1, &next, picked) {
                        Some(true) => return Some(true),
                        Some(false) => {
                            picked.pop();
                        }
                        None => return None,
                    }
                }
            }
            Some(false)
        }
    }
    let mut search = Search {
        slot_terms: &slot_terms,
        suffix_bound: &suffix_bound,
        suffix_gcd: &suffix_gcd,
        nodes: node_budget.min(NODE_CAP),
    };
    let mut picked = Vec::new();
    match search.dfs(0, y, &mut picked) {
        Some(true) => {
            let mut total = BigInt::zero();
            for t in &picked {
                let v = u.eval_int(t.index)?;
                total += if t.sign > 0 { v } else { -v };
            }
            if total != *y {
                return Err(precondition("decomposition failed to re-sum; bug"));
            }
            Ok(NeighborhoodVerdict::In { decomposition: picked })
        }
        Some(false) | None => Ok(NeighborhoodVerdict::Unknown { searched_to: hi }),
    }
}

/// Cutoff data certifying that the pairings against x stay small on each
/// sum-set neighborhood level, checked against sampled elements.
#[derive(Debug, Clone)]
pub struct ContinuityReport {
    pub cutoffs: Vec<u64>,
    pub samples_checked: u64,
    pub eps: Rat,
}

#[derive(Debug, Clone)]
pub enum ContinuityOutcome {
    Certified(ContinuityReport),
    /// the base point is caught outside the characterized subgroup
    NotMember(NotInWitness),
}

/// Builds neighborhood cutoffs for a rational member point: from level k
/// onward every pairing is the identity, so sampled neighborhood sums pair
/// strictly inside the eps-ball.
pub fn continuity_certificate(
    u: &SeqSpec,
    x: &CirclePoint,
    eps: &Rat,
    levels: u64,
    samples: u64,
) -> Result<ContinuityOutcome> {
    if !eps.is_positive() {
        return Err(precondition("eps must be positive"));
    }
    if levels == 0 {
        return Err(precondition("at least one cutoff level is required"));
    }
    let xr = x
        .as_rat()
        .ok_or_else(|| precondition("continuity certificates need a rational base point"))?;
    let verdict = member_su_circle(u, x, 64)?;
    let cert = match verdict {
        Verdict::NotIn(w) => return Ok(ContinuityOutcome::NotMember(w)),
        Verdict::Unknown { depth } => {
            return Err(Error::BudgetExhausted(format!(
                "membership of the base point is undecided at depth {depth}"
            )))
        }
        Verdict::In(c) => c,
    };
    let cutoffs: Vec<u64> = (0..levels).map(|k| cert.cutoff + k).collect();

    // sampled neighborhood elements: signed single terms and short sums
    // across levels, each paired exactly against x
    let mut checked = 0u64;
    'outer: for s in 0..samples {
        let mut total = Rat::zero();
        for (j, &n) in cutoffs.iter().enumerate() {
            let offset = (s + j as u64) % 4;
            let sign = if (s >> (j % 16)) & 1 == 0 { 1 } else { -1 };
            let term = match u.eval_int(n + offset) {
                Ok(t) => t,
                // explicit prefixes run out of terms; stop sampling
                Err(_) => break 'outer,
            };
            total += Rat::from_integer(BigInt::from(sign) * term) * xr;
        }
        // pairings vanish beyond the cutoff, so the chord is exactly 0
        if !circle::reduce_mod1(&total).is_zero() {
            return Err(precondition("sampled neighborhood element escapes the ball; bug"));
        }
        checked += 1;
    }
    Ok(ContinuityOutcome::Certified(ContinuityReport {
        cutoffs,
        samples_checked: checked,
        eps: eps.clone(),
    }))
}

/// Minimal coefficient budget whose A(k, 0) sum set covers a target list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AkmExhaustion {
    Covered { k: u32 },
    NotFound { k_max: u32, uncovered: BigInt },
}

/// Smallest k <= k_max with every target in A(k, 0) (0 always counts as
/// reachable); indices range up to `hi`.
pub fn akm_exhaustion(u: &SeqSpec, targets: &[BigInt], k_max: u32, hi: u64) -> Result<AkmExhaustion> {
    if k_max == 0 {
        return Err(precondition("coefficient budget must be at least 1"));
    }
    let mut uncovered = targets.first().cloned().unwrap_or_else(BigInt::zero);
    for k in 1..=k_max {
        let reach = enumerate_akm_int(u, k, 0, hi)?;
        let missing = targets
            .iter()
            .find(|t| !t.is_zero() && reach.binary_search(t).is_err());
        match missing {
            None => return Ok(AkmExhaustion::Covered { k }),
            Some(t) => uncovered = t.clone(),
        }
    }
    Ok(AkmExhaustion::NotFound { k_max, uncovered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finabel::FinAbGroup;
    use crate::surd::QuadSurd;
    use crate::{int, rat};
    use num_traits::ToPrimitive;

    fn zgroup(factors: &[i64]) -> FinAbGroup {
        FinAbGroup::from_invariant_factors(factors).unwrap()
    }

    fn finper(group: &FinAbGroup, prefix: &[&[i64]], period: &[&[i64]]) -> FinPerSeq {
        let chars = |rows: &[&[i64]]| -> Vec<Character> {
            rows.iter().map(|r| group.character(r).unwrap()).collect()
        };
        FinPerSeq::new(group.clone(), chars(prefix), chars(period)).unwrap()
    }

    #[test]
    fn traces_follow_the_pairing_exactly() {
        // zero base point: every trace entry is the identity
        let g = zgroup(&[6]);
        let u = SeqSpec::FinPer(finper(&g, &[], &[&[1], &[4]]));
        let p = graph_point(&u, &GraphBase::Finite { group: g.clone(), point: g.zero() }, 5)
            .unwrap();
        assert!(p.trace.iter().all(CirclePoint::is_zero));

        // Z_4 with the period-(2) sequence at the point 1: constant 1/2
        let g4 = zgroup(&[4]);
        let u4 = SeqSpec::FinPer(finper(&g4, &[], &[&[2]]));
        let x = g4.reduce(&[1]).unwrap();
        let p = graph_point(&u4, &GraphBase::Finite { group: g4.clone(), point: x }, 4).unwrap();
        for z in &p.trace {
            assert_eq!(z.as_rat().unwrap(), &rat(1, 2));
        }

        // doubling sequence at 1/3 alternates starting from the first term
        let u2 = SeqSpec::geometric(1, 2).unwrap();
        let third = CirclePoint::from_rat(&rat(1, 3));
        let p = graph_point(&u2, &GraphBase::Circle(third), 4).unwrap();
        let got: Vec<Rat> = p.trace.iter().map(|z| z.as_rat().unwrap().clone()).collect();
        assert_eq!(got, vec![rat(1, 3), rat(2, 3), rat(1, 3), rat(2, 3)]);

        // mismatched kinds are rejected
        assert!(graph_point(&u2, &GraphBase::Finite { group: g4, point: g.zero() }, 1).is_err());
    }

    #[test]
    fn graph_subgroups_match_direct_enumeration() {
        // Z_2 with u = (1): the diagonal of Z_2 x Z_2
        let g = zgroup(&[2]);
        let u = finper(&g, &[], &[&[1]]);
        let (p, l1) = graph_subgroup(&g, &u, 1).unwrap();
        assert_eq!(p.factors(), &[2, 2]);
        let mut got: Vec<Vec<i64>> =
            l1.elements().unwrap().into_iter().map(|e| e.coords).collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 0], vec![1, 1]]);

        // Z_4 with u = (2): generated by (1, 2)
        let g4 = zgroup(&[4]);
        let u4 = finper(&g4, &[], &[&[2]]);
        let (p4, l) = graph_subgroup(&g4, &u4, 1).unwrap();
        let expect =
            Subgroup::from_generators(&p4, &[p4.reduce(&[1, 2]).unwrap()]).unwrap();
        assert_eq!(l, expect);

        // depth 0 degenerates to the full group
        let (_, l0) = graph_subgroup(&g4, &u4, 0).unwrap();
        assert!(l0.is_full());

        // the subgroup equals the set of graph images of all elements
        let g6 = zgroup(&[2, 6]);
        let u6 = finper(&g6, &[&[1, 2]], &[&[0, 3], &[1, 1]]);
        let (p6, l6) = graph_subgroup(&g6, &u6, 3).unwrap();
        let mut images = Vec::new();
        for x in g6.elements().unwrap() {
            let mut coords = x.coords.clone();
            for k in 0..3 {
                coords.push(g6.pair_num(u6.term(k), &x).unwrap());
            }
            images.push(p6.reduce(&coords).unwrap());
        }
        assert_eq!(l6, Subgroup::from_elements(&p6, &images).unwrap());
    }

    #[test]
    fn separators_are_lex_minimal_annihilator_elements() {
        // frozen: Z_2, u = (1), claim trace (0) at the point 1
        let g = zgroup(&[2]);
        let u = finper(&g, &[], &[&[1]]);
        let x = g.reduce(&[1]).unwrap();
        let sep = separate_point(&g, &u, &x, &[CirclePoint::zero()]).unwrap();
        assert_eq!(sep.base_char.coords, vec![1]);
        assert_eq!(sep.tail, ZInfElem::e(1));
        assert_eq!(sep.depth, 1);
        assert_eq!(sep.value_at_point.as_rat().unwrap(), &rat(1, 2));

        // frozen: Z_4, u = (2), claim trace (0) at the point 1
        let g4 = zgroup(&[4]);
        let u4 = finper(&g4, &[], &[&[2]]);
        let x1 = g4.reduce(&[1]).unwrap();
        let sep = separate_point(&g4, &u4, &x1, &[CirclePoint::zero()]).unwrap();
        assert_eq!(sep.base_char.coords, vec![2]);
        assert_eq!(sep.tail, ZInfElem::e(1));
        assert_eq!(sep.annihilated, 4);

        // on-graph claims are rejected
        let honest = CirclePoint::from_rat(&rat(1, 2));
        assert!(separate_point(&g4, &u4, &x1, &[honest]).is_err());
    }

    #[test]
    fn separator_agrees_with_the_annihilator_oracle() {
        // deterministic sweep over small cases; claims live on the 1/m
        // lattice so the lex-min annihilator search is an independent
        // oracle for the constructed separator
        let cases: Vec<(Vec<i64>, Vec<Vec<i64>>)> = vec![
            (vec![2], vec![vec![1]]),
            (vec![4], vec![vec![2], vec![1]]),
            (vec![6], vec![vec![2], vec![3]]),
            (vec![2, 4], vec![vec![1, 2], vec![0, 1]]),
            (vec![3, 3], vec![vec![1, 0], vec![1, 2]]),
        ];
        let mut separated = 0;
        for (factors, period) in cases {
            let g = zgroup(&factors);
            let rows: Vec<&[i64]> = period.iter().map(|r| r.as_slice()).collect();
            let u = finper(&g, &[], &rows);
            let m = g.exponent();
            for depth in 1..=3u64 {
                let (product, sub) = graph_subgroup(&g, &u, depth).unwrap();
                let anni = sub.annihilator();
                for x in g.elements().unwrap() {
                    // perturb the true trace at the last index
                    for bump in 1..m {
                        let mut claim = Vec::new();
                        let mut coords = x.coords.clone();
                        for k in 0..depth {
                            let mut num = g.pair_num(u.term(k), &x).unwrap();
                            if k == depth - 1 {
                                num = (num + bump) % m;
                            }
                            claim.push(CirclePoint::from_rat(&Rat::new(
                                BigInt::from(num),
                                BigInt::from(m),
                            )));
                            coords.push(num);
                        }
                        let sep = separate_point(&g, &u, &x, &claim).unwrap();
                        assert_eq!(sep.depth, depth);
                        let point = product.reduce(&coords).unwrap();
                        let oracle = anni.lex_min_nonvanishing_at(&point).unwrap();
                        let mut mine = sep.base_char.coords.clone();
                        for k in 1..=depth {
                            let c = sep.tail.coef_at(k as u128);
                            mine.push(c.to_i64().unwrap());
                        }
                        assert_eq!(mine, oracle.coords);
                        separated += 1;
                    }
                }
            }
        }
        assert!(separated > 100);
    }

    #[test]
    fn separator_handles_claims_off_the_lattice() {
        // claim 1/3 over Z_2: gap 1/3 - 1/2 has denominator 6, so the
        // tail coefficient 1 is admissible and the separator evaluates to
        // 1/2 + 1/3 at the claim
        let g = zgroup(&[2]);
        let u = finper(&g, &[], &[&[1]]);
        let x = g.reduce(&[1]).unwrap();
        let claim = CirclePoint::from_rat(&rat(1, 3));
        let sep = separate_point(&g, &u, &x, &[claim]).unwrap();
        assert_eq!(sep.base_char.coords, vec![1]);
        assert_eq!(sep.tail, ZInfElem::e(1));
        assert_eq!(sep.value_at_point.as_rat().unwrap(), &rat(5, 6));

        // an irrational claimed trace is off the graph with certainty
        let claim = CirclePoint::from_surd(QuadSurd::sqrt_of(2).unwrap());
        let sep = separate_point(&g, &u, &x, &[claim]).unwrap();
        assert_eq!(sep.depth, 1);
        assert!(!sep.value_at_point.is_rational());
    }

    #[test]
    fn annihilator_generators_and_their_relations() {
        // prefix (1), period (0) over Z_2 characterizes everything; the
        // first generator remembers the prefix term
        let g = zgroup(&[2]);
        let u = finper(&g, &[&[1]], &[&[0]]);
        let rep = annihilator_generators(&g, &u, 3).unwrap();
        assert_eq!(rep.generators.len(), 3);
        assert_eq!(rep.generators[0].0.coords, vec![1]);
        assert_eq!(rep.generators[0].1, ZInfElem::e(1));
        assert_eq!(rep.generators[1].0.coords, vec![0]);
        assert_eq!(rep.generators[1].1, ZInfElem::e(2));
        assert!(rep.relation_verified);
        assert_eq!(rep.pairs_checked, 6);

        // period (1) characterizes only 0, so the presentation is refused
        let dense = finper(&g, &[], &[&[1]]);
        assert!(matches!(
            annihilator_generators(&g, &dense, 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn closure_restriction_always_stabilizes() {
        // Z_4 with period (2): closure {0, 2} of order 2, restricted
        // sequence trivial
        let g = zgroup(&[4]);
        let u = finper(&g, &[], &[&[2]]);
        let res = restrict_to_closure(&g, &u).unwrap();
        assert_eq!(res.closure.order(), 2);
        assert_eq!(res.view.group.factors(), &[2]);
        assert!(res.restricted.is_eventually_zero());

        // Z_2 with period (1): trivial closure
        let g2 = zgroup(&[2]);
        let u2 = finper(&g2, &[], &[&[1]]);
        let res = restrict_to_closure(&g2, &u2).unwrap();
        assert!(res.closure.is_trivial_subgroup());
        assert!(res.view.group.is_trivial());

        // sweep: restriction characterizes the whole closure every time
        let sweep: Vec<(Vec<i64>, Vec<Vec<i64>>)> = vec![
            (vec![8], vec![vec![4]]),
            (vec![12], vec![vec![4], vec![6]]),
            (vec![2, 6], vec![vec![1, 3]]),
            (vec![4, 4], vec![vec![2, 0], vec![0, 2]]),
            (vec![9], vec![vec![3], vec![6]]),
        ];
        for (factors, period) in sweep {
            let g = zgroup(&factors);
            let rows: Vec<&[i64]> = period.iter().map(|r| r.as_slice()).collect();
            let u = finper(&g, &[], &rows);
            // constructor verifies stabilization internally
            restrict_to_closure(&g, &u).unwrap();
        }
    }

    #[test]
    fn akm_enumeration_frozen_examples() {
        // powers of three, single coefficient: exactly +-{1, 3, 9}
        let u = SeqSpec::geometric(1, 3).unwrap();
        let a1 = enumerate_akm_int(&u, 1, 0, 2).unwrap();
        let expect: Vec<BigInt> =
            [-9, -3, -1, 1, 3, 9].iter().map(|&v| int(v)).collect();
        assert_eq!(a1, expect);

        // coefficient mass 2 over the same indices, frozen by hand
        let a2 = enumerate_akm_int(&u, 2, 0, 2).unwrap();
        let expect2: Vec<BigInt> = [
            -18, -12, -10, -9, -8, -6, -4, -3, -2, -1, 1, 2, 3, 4, 6, 8, 9, 10, 12, 18,
        ]
        .iter()
        .map(|&v| int(v))
        .collect();
        assert_eq!(a2, expect2);

        // monotone in both the coefficient budget and the index range
        for v in &a1 {
            assert!(a2.binary_search(v).is_ok());
        }
        let wider = enumerate_akm_int(&u, 1, 0, 3).unwrap();
        for v in &a1 {
            assert!(wider.binary_search(v).is_ok());
        }

        // the all-zero sequence reaches only 0
        let z = SeqSpec::explicit(vec![int(0), int(0), int(0)]);
        assert_eq!(enumerate_akm_int(&z, 1, 0, 2).unwrap(), vec![int(0)]);

        // an oversized range trips the node ceiling
        assert!(matches!(
            enumerate_akm_int(&u, 3, 0, 80),
            Err(Error::EnumerationCap { .. })
        ));

        // finite-group flavor: over Z_4 with period (2), reachable
        // characters at mass 1 are {2} and 0 never appears without use
        let g = zgroup(&[4]);
        let fu = finper(&g, &[], &[&[2]]);
        let chars = enumerate_akm_chars(&g, &fu, 1, 0, 1).unwrap();
        let coords: Vec<Vec<i64>> = chars.into_iter().map(|c| c.coords).collect();
        assert_eq!(coords, vec![vec![2]]);
    }

    #[test]
    fn neighborhood_verdicts_with_certificates() {
        let u = SeqSpec::geometric(1, 3).unwrap();

        // 9 + 243 decomposes across cutoffs (0, 4)
        let v = neighborhood_member(&u, &[0, 4], &int(252), 6, 1 << 20).unwrap();
        match v {
            NeighborhoodVerdict::In { decomposition } => {
                assert_eq!(
                    decomposition,
                    vec![
                        SumTerm { slot: 0, index: 2, sign: 1 },
                        SumTerm { slot: 1, index: 5, sign: 1 }
                    ]
                );
            }
            other => panic!("expected In, got {other:?}"),
        }

        // cutoffs (2, 3) force divisibility by 9, so 1 is certified out
        let v = neighborhood_member(&u, &[2, 3], &int(1), 6, 1 << 20).unwrap();
        match v {
            NeighborhoodVerdict::NotIn { modulus } => assert_eq!(modulus, int(9)),
            other => panic!("expected NotIn, got {other:?}"),
        }

        // 0 is always present
        assert!(matches!(
            neighborhood_member(&u, &[2, 3], &int(0), 6, 1 << 20).unwrap(),
            NeighborhoodVerdict::In { ref decomposition } if decomposition.is_empty()
        ));

        // forward-sampled values are recovered
        let y = u.eval_int(1).unwrap() - u.eval_int(4).unwrap();
        let v = neighborhood_member(&u, &[1, 3], &y, 6, 1 << 20).unwrap();
        match v {
            NeighborhoodVerdict::In { decomposition } => {
                let mut total = BigInt::zero();
                for t in &decomposition {
                    let term = u.eval_int(t.index).unwrap();
                    total += if t.sign > 0 { term } else { -term };
                }
                assert_eq!(total, y);
            }
            other => panic!("expected In, got {other:?}"),
        }

        // explicit sequences never certify NotIn: exhaustion is Unknown
        let e = SeqSpec::explicit(vec![int(1), int(2), int(4)]);
        assert!(matches!(
            neighborhood_member(&e, &[0], &int(100), 6, 1 << 20).unwrap(),
            NeighborhoodVerdict::Unknown { .. }
        ));

        // a starved node budget also reports Unknown, never NotIn
        assert!(matches!(
            neighborhood_member(&u, &[0, 4], &int(252), 6, 1).unwrap(),
            NeighborhoodVerdict::Unknown { .. }
        ));

        // strictly increasing cutoffs are required
        assert!(neighborhood_member(&u, &[3, 3], &int(1), 2, 100).is_err());
    }

    #[test]
    fn continuity_cutoffs_for_member_points() {
        // factorials at 1/6: pairings vanish once 6 divides the terms
        let u = SeqSpec::factorial(1);
        let x = CirclePoint::from_rat(&rat(1, 6));
        let out = continuity_certificate(&u, &x, &rat(1, 10), 3, 20).unwrap();
        match out {
            ContinuityOutcome::Certified(rep) => {
                assert_eq!(rep.cutoffs.len(), 3);
                assert!(rep.cutoffs.windows(2).all(|w| w[0] < w[1]));
                let n0 = rep.cutoffs[0];
                assert!(n0 <= 6);
                // self-check: terms from the first cutoff pair to 0
                for n in n0..n0 + 10 {
                    let t = u.eval_int(n).unwrap();
                    assert!((t % BigInt::from(6)).is_zero());
                }
                assert_eq!(rep.samples_checked, 20);
            }
            other => panic!("expected certification, got {other:?}"),
        }

        // the zero point certifies with cutoffs starting at 0
        let out = continuity_certificate(&u, &CirclePoint::zero(), &rat(1, 10), 2, 5).unwrap();
        match out {
            ContinuityOutcome::Certified(rep) => assert_eq!(rep.cutoffs[0], 0),
            other => panic!("expected certification, got {other:?}"),
        }

        // 1/3 against doubling is outside: the witness distance comes back
        let d = SeqSpec::geometric(1, 2).unwrap();
        let out =
            continuity_certificate(&d, &CirclePoint::from_rat(&rat(1, 3)), &rat(1, 10), 2, 5)
                .unwrap();
        match out {
            ContinuityOutcome::NotMember(w) => assert_eq!(w.delta, rat(1, 3)),
            other => panic!("expected a membership refusal, got {other:?}"),
        }
    }

    #[test]
    fn akm_exhaustion_finds_the_minimal_budget() {
        let u = SeqSpec::geometric(1, 3).unwrap();
        // raw terms are reachable at mass 1
        let terms = vec![u.eval_int(1).unwrap(), u.eval_int(2).unwrap()];
        assert_eq!(
            akm_exhaustion(&u, &terms, 3, 4).unwrap(),
            AkmExhaustion::Covered { k: 1 }
        );
        // 4 = 1 + 3 needs mass 2
        assert_eq!(
            akm_exhaustion(&u, &[int(4)], 3, 4).unwrap(),
            AkmExhaustion::Covered { k: 2 }
        );
        // 0 is reachable by convention
        assert_eq!(
            akm_exhaustion(&u, &[int(0)], 2, 4).unwrap(),
            AkmExhaustion::Covered { k: 1 }
        );
        // 5 = 9 - 3 - 1 needs mass 3
        assert_eq!(
            akm_exhaustion(&u, &[int(5)], 2, 4).unwrap(),
            AkmExhaustion::NotFound { k_max: 2, uncovered: int(5) }
        );
    }
}
