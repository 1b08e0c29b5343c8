//! Integer relations between exact circle coordinates, simultaneous
//! approximation search, and the l1 word condition on free abelian groups.
//!
//! Relations are decided exactly: every symbolic input splits into a rational
//! part plus a coefficient on a single square root, coordinates on distinct
//! radicands are independent over the rationals, so the relation lattice is
//! the kernel of a small integer system and a shortest vector search over its
//! Hermite basis is exhaustive, not heuristic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::circle::CirclePoint;
use crate::dyadic::RatInterval;
use crate::error::{precondition, Error, Result};
use crate::linalg;
use crate::Rat;

/// Nodes the relation search may expand before giving up.
const RELATION_NODE_CAP: u64 = 8_000_000;

/// Height used to screen approximation inputs for hidden dependencies.
const GATE_HEIGHT: u64 = 1000;

/// Working precision of the approximation scan, in bits.
const SCAN_BITS: u32 = 96;

/// A verified integer dependency `sum n_i x_i = 0` on the circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCertificate {
    /// Not all zero; minimal under (max-norm, l1, lexicographic) with the
    /// first nonzero entry positive.
    pub coefficients: Vec<BigInt>,
    /// Max-norm bound the search was asked to respect.
    pub height: u64,
    /// Set once the residual has been re-derived exactly from the symbolic
    /// decomposition; certificates are only issued with this true.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationOutcome {
    Found(RelationCertificate),
    /// No dependency with coefficients bounded by `height`. `structural`
    /// means the relation lattice itself is trivial, so no height would help.
    NoneFound { height: u64, structural: bool },
}

/// Shortest integer dependency among the inputs, exhaustive up to `height`
/// in the max-norm. Inputs must be symbolic (rational or quadratic surd).
pub fn integer_relation(xs: &[CirclePoint], height: u64) -> Result<RelationOutcome> {
    if xs.is_empty() {
        return Err(precondition("integer relations need at least one input"));
    }
    if height == 0 {
        return Err(precondition("the height bound must be at least 1"));
    }
    let parts = decompose(xs)?;
    let basis = relation_lattice(&parts);
    if basis.is_empty() {
        return Ok(RelationOutcome::NoneFound { height, structural: true });
    }
    let rows = to_i128_rows(&basis)?;
    let bound = i128::try_from(height).map_err(|_| Error::Overflow)?;
    match shortest_in_lattice(&rows, xs.len(), bound)? {
        None => Ok(RelationOutcome::NoneFound { height, structural: false }),
        Some(v) => {
            let coefficients: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
            if !relation_holds(&coefficients, &parts) {
                return Err(precondition(
                    "relation candidate failed exact verification; bug",
                ));
            }
            Ok(RelationOutcome::Found(RelationCertificate {
                coefficients,
                height,
                verified: true,
            }))
        }
    }
}

/// Rational part and optional surd coefficient of each input; rejects
/// procedural irrationals, which admit no exact linear algebra.
fn decompose(xs: &[CirclePoint]) -> Result<Vec<(Rat, Option<(Rat, BigInt)>)>> {
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        if let Some(r) = x.as_rat() {
            out.push((r.clone(), None));
        } else if let Some(s) = x.as_surd() {
            let r = Rat::new(s.a().clone(), s.c().clone());
            let beta = Rat::new(s.b().clone(), s.c().clone());
            out.push((r, Some((beta, s.radicand().clone()))));
        } else {
            return Err(precondition(
                "integer relations need symbolic inputs; a procedural point cannot be decided",
            ));
        }
    }
    Ok(out)
}

/// Whether the coefficient vector kills every radicand class and lands the
/// pooled rational parts on an integer. Exact.
fn relation_holds(coeffs: &[BigInt], parts: &[(Rat, Option<(Rat, BigInt)>)]) -> bool {
    let mut rational = Rat::zero();
    let mut by_class: BTreeMap<BigInt, Rat> = BTreeMap::new();
    for (c, (r, surd)) in coeffs.iter().zip(parts) {
        let cr = Rat::from_integer(c.clone());
        rational = rational + &cr * r;
        if let Some((beta, d)) = surd {
            let entry = by_class.entry(d.clone()).or_insert_with(Rat::zero);
            *entry = entry.clone() + &cr * beta;
        }
    }
    by_class.values().all(|s| s.is_zero()) && rational.is_integer()
}

/// Hermite row basis of the lattice of integer vectors `n` for which
/// `sum n_i x_i` is an integer: one cancellation row per radicand, plus an
/// integrality slack column on the pooled rational parts.
fn relation_lattice(parts: &[(Rat, Option<(Rat, BigInt)>)]) -> Vec<Vec<BigInt>> {
    let len = parts.len();
    let cols = len + 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();

    let mut classes: BTreeMap<BigInt, Vec<(usize, Rat)>> = BTreeMap::new();
    for (i, (_, surd)) in parts.iter().enumerate() {
        if let Some((beta, d)) = surd {
            classes.entry(d.clone()).or_default().push((i, beta.clone()));
        }
    }
    for members in classes.values() {
        let scale = members
            .iter()
            .fold(BigInt::one(), |l, (_, b)| l.lcm(b.denom()));
        let mut row = vec![BigInt::zero(); cols];
        for (i, beta) in members {
            row[*i] = (beta * Rat::from_integer(scale.clone())).to_integer();
        }
        rows.push(row);
    }

    let denom = parts
        .iter()
        .fold(BigInt::one(), |l, (r, _)| l.lcm(r.denom()));
    let mut rat_row = vec![BigInt::zero(); cols];
    for (i, (r, _)) in parts.iter().enumerate() {
        rat_row[i] = (r * Rat::from_integer(denom.clone())).to_integer();
    }
    rat_row[len] = denom;
    rows.push(rat_row);

    // the slack is pinned by the rational row, so projecting it away is
    // injective on the kernel
    let projected: Vec<Vec<BigInt>> = linalg::kernel(&rows)
        .into_iter()
        .map(|v| v[..len].to_vec())
        .filter(|v| v.iter().any(|e| !e.is_zero()))
        .collect();
    if projected.is_empty() {
        return Vec::new();
    }
    linalg::hnf(projected, len)
}

fn to_i128_rows(basis: &[Vec<BigInt>]) -> Result<Vec<Vec<i128>>> {
    basis
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.to_i128().ok_or(Error::Overflow))
                .collect()
        })
        .collect()
}

fn linf(v: &[i128]) -> i128 {
    v.iter().map(|e| e.abs()).max().unwrap_or(0)
}

fn rank_key(v: &[i128]) -> (i128, i128, Vec<i128>) {
    (linf(v), v.iter().map(|e| e.abs()).sum(), v.to_vec())
}

fn normalize_sign(v: &mut [i128]) {
    if let Some(first) = v.iter().find(|e| **e != 0) {
        if *first < 0 {
            for e in v.iter_mut() {
                *e = -*e;
            }
        }
    }
}

/// Exhaustive branch-and-bound over the Hermite rows: minimal nonzero lattice
/// vector with max-norm at most `height`, sign-normalized. Rows are echelon,
/// so each pivot coordinate is final when its row's multiplier is chosen and
/// bounds the multiplier to a finite window.
fn shortest_in_lattice(
    rows: &[Vec<i128>],
    ncols: usize,
    height: i128,
) -> Result<Option<Vec<i128>>> {
    let pivots: Vec<usize> = rows
        .iter()
        .map(|r| {
            r.iter()
                .position(|e| *e != 0)
                .expect("hermite reduction drops zero rows")
        })
        .collect();
    let mut partial = vec![0i128; ncols];
    let mut best: Option<Vec<i128>> = None;
    let mut nodes: u64 = 0;
    descend(
        rows,
        &pivots,
        height,
        0,
        &mut partial,
        &mut best,
        &mut nodes,
    )?;
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    rows: &[Vec<i128>],
    pivots: &[usize],
    height: i128,
    level: usize,
    partial: &mut Vec<i128>,
    best: &mut Option<Vec<i128>>,
    nodes: &mut u64,
) -> Result<()> {
    // ties at equal max-norm still matter, so the window stays inclusive
    let bound = best.as_ref().map(|b| linf(b)).unwrap_or(height);
    if level == rows.len() {
        if partial.iter().all(|e| *e == 0) || partial.iter().any(|e| e.abs() > bound) {
            return Ok(());
        }
        let mut cand = partial.clone();
        normalize_sign(&mut cand);
        if best.as_ref().map_or(true, |b| rank_key(&cand) < rank_key(b)) {
            *best = Some(cand);
        }
        return Ok(());
    }
    let p = pivots[level];
    let piv = rows[level][p];
    let lo = Integer::div_ceil(&(-bound - partial[p]), &piv);
    let hi = Integer::div_floor(&(bound - partial[p]), &piv);
    for c in lo..=hi {
        *nodes += 1;
        if *nodes > RELATION_NODE_CAP {
            return Err(Error::BudgetExhausted(String::from(
                "integer relation search exceeded its node budget",
            )));
        }
        if c != 0 {
            for (dst, src) in partial.iter_mut().zip(&rows[level]) {
                *dst += c * *src;
            }
        }
        descend(rows, pivots, height, level + 1, partial, best, nodes)?;
        if c != 0 {
            for (dst, src) in partial.iter_mut().zip(&rows[level]) {
                *dst -= c * *src;
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct KroneckerSolution {
    pub n: u64,
    /// Certified per-coordinate enclosures of the achieved distances to the
    /// nearest integer, from the doubled-precision recheck.
    pub achieved: Vec<RatInterval>,
}

#[derive(Clone, Debug)]
pub enum KroneckerOutcome {
    Solution(KroneckerSolution),
    NotFoundWithin { n_max: u64 },
    /// The inputs satisfy an integer dependency, so most target vectors are
    /// unreachable; fix the inputs before searching.
    DependentInputs(RelationCertificate),
}

/// Smallest `n` in `1..=n_max` with every `|n x_i - t_i|` within `eps` of an
/// integer, certified by interval enclosures. Inputs are screened for
/// dependencies first. An `n` whose margins stay ambiguous after two
/// refinement rounds is rejected, so results are deterministic and finding a
/// solution at some tolerance finds one at every looser tolerance.
pub fn kronecker_char_search(
    xs: &[CirclePoint],
    targets: &[CirclePoint],
    eps: &Rat,
    n_max: u64,
) -> Result<KroneckerOutcome> {
    if xs.is_empty() || xs.len() != targets.len() {
        return Err(precondition("need exactly one target per input coordinate"));
    }
    if !eps.is_positive() {
        return Err(precondition("the tolerance must be positive"));
    }
    if n_max == 0 {
        return Err(precondition("the scan bound must be at least 1"));
    }
    if let RelationOutcome::Found(cert) = integer_relation(xs, GATE_HEIGHT)? {
        return Ok(KroneckerOutcome::DependentInputs(cert));
    }

    let base = FixedTable::build(xs, targets, SCAN_BITS)?;
    let mut fine: Option<FixedTable> = None;
    let mut finer: Option<FixedTable> = None;
    for n in 1..=n_max {
        let accepted = match base.classify(n, eps) {
            Class::Out => false,
            Class::Within => true,
            Class::Ambiguous => {
                if fine.is_none() {
                    fine = Some(FixedTable::build(xs, targets, 2 * SCAN_BITS)?);
                }
                match fine.as_ref().unwrap().classify(n, eps) {
                    Class::Out => false,
                    Class::Within => true,
                    Class::Ambiguous => {
                        if finer.is_none() {
                            finer = Some(FixedTable::build(xs, targets, 4 * SCAN_BITS)?);
                        }
                        matches!(finer.as_ref().unwrap().classify(n, eps), Class::Within)
                    }
                }
            }
        };
        if !accepted {
            continue;
        }
        let check = FixedTable::build(xs, targets, 8 * SCAN_BITS)?;
        if let Some(achieved) = check.within_intervals(n, eps) {
            return Ok(KroneckerOutcome::Solution(KroneckerSolution { n, achieved }));
        }
    }
    Ok(KroneckerOutcome::NotFoundWithin { n_max })
}

/// Inputs and targets as integer fixed-point enclosures at one precision.
struct FixedTable {
    scale: BigInt,
    half: BigInt,
    xs: Vec<(BigInt, BigInt)>,
    targets: Vec<(BigInt, BigInt)>,
}

enum Class {
    Within,
    Out,
    Ambiguous,
}

impl FixedTable {
    fn build(xs: &[CirclePoint], targets: &[CirclePoint], bits: u32) -> Result<FixedTable> {
        let scale = BigInt::one() << bits;
        let s_rat = Rat::from_integer(scale.clone());
        let fix = |p: &CirclePoint| -> Result<(BigInt, BigInt)> {
            let iv = p.enclosure(bits)?;
            let lo = (&iv.lo * &s_rat).floor().to_integer();
            let hi = (&iv.hi * &s_rat).ceil().to_integer();
            Ok((lo, hi))
        };
        let xs = xs.iter().map(&fix).collect::<Result<Vec<_>>>()?;
        let targets = targets.iter().map(&fix).collect::<Result<Vec<_>>>()?;
        Ok(FixedTable {
            half: &scale >> 1,
            scale,
            xs,
            targets,
        })
    }

    /// Certified bounds, in scale units, on the distance of `n x_i - t_i`
    /// to the nearest integer.
    fn norm_bounds(&self, n: u64, i: usize) -> (BigInt, BigInt) {
        let nn = BigInt::from(n);
        let c = &nn * &self.xs[i].0 - &self.targets[i].1;
        let d = &nn * &self.xs[i].1 - &self.targets[i].0;
        fold_norm(&c, &d, &self.scale, &self.half)
    }

    fn classify(&self, n: u64, eps: &Rat) -> Class {
        let mut all_within = true;
        for i in 0..self.xs.len() {
            let (lo, hi) = self.norm_bounds(n, i);
            if ge_eps(&lo, eps, &self.scale) {
                return Class::Out;
            }
            if !lt_eps(&hi, eps, &self.scale) {
                all_within = false;
            }
        }
        if all_within {
            Class::Within
        } else {
            Class::Ambiguous
        }
    }

    fn within_intervals(&self, n: u64, eps: &Rat) -> Option<Vec<RatInterval>> {
        let mut out = Vec::with_capacity(self.xs.len());
        for i in 0..self.xs.len() {
            let (lo, hi) = self.norm_bounds(n, i);
            if !lt_eps(&hi, eps, &self.scale) {
                return None;
            }
            out.push(RatInterval::new(
                Rat::new(lo, self.scale.clone()),
                Rat::new(hi, self.scale.clone()),
            ));
        }
        Some(out)
    }
}

fn lt_eps(v: &BigInt, eps: &Rat, scale: &BigInt) -> bool {
    v * eps.denom() < eps.numer() * scale
}

fn ge_eps(v: &BigInt, eps: &Rat, scale: &BigInt) -> bool {
    v * eps.denom() >= eps.numer() * scale
}

/// Exact min/max of the distance to the nearest multiple of `scale` over the
/// integer interval `[c, d]`: zero iff a multiple is inside, `half` iff a
/// half-odd multiple is inside, endpoint distances otherwise.
fn fold_norm(c: &BigInt, d: &BigInt, scale: &BigInt, half: &BigInt) -> (BigInt, BigInt) {
    if d - c >= *scale {
        return (BigInt::zero(), half.clone());
    }
    let dist = |p: &BigInt| -> BigInt {
        let r = p.mod_floor(scale);
        let alt = scale - &r;
        if r < alt {
            r
        } else {
            alt
        }
    };
    let two_s = scale << 1;
    let k = (c + d + scale).div_floor(&two_s);
    let a = c - &k * scale;
    let b = d - &k * scale;
    let multiples = [-scale.clone(), BigInt::zero(), scale.clone()];
    let lo = if multiples.iter().any(|m| a <= *m && *m <= b) {
        BigInt::zero()
    } else {
        core::cmp::min(dist(&a), dist(&b))
    };
    let apexes = [
        -(scale + half),
        -half.clone(),
        half.clone(),
        scale + half,
    ];
    let hi = if apexes.iter().any(|t| a <= *t && *t <= b) {
        half.clone()
    } else {
        core::cmp::max(dist(&a), dist(&b))
    };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1WordReport {
    pub rank: u32,
    pub n0: u32,
    pub vectors_enumerated: u64,
    /// Only the zero vector satisfies both word bounds.
    pub only_zero_passes: bool,
    /// `counts[n]` = integer vectors of the given rank with l1 norm at most n.
    pub counts: Vec<u64>,
    /// Cross-check of `counts` against the three-term recurrence for
    /// cross-polytope lattice point counts.
    pub delannoy_match: bool,
    /// The scalar inequality `2 n0 s > n0` for every `s` in `1..=n0`.
    pub symbolic_holds: bool,
}

/// Enumerates every integer vector of the given rank with l1 norm at most
/// `n0` and confirms that only zero also keeps `2 n0 v` within the same ball.
pub fn l1_word_check(rank: u32, n0: u32) -> Result<L1WordReport> {
    if rank == 0 || n0 == 0 {
        return Err(precondition("the word check needs rank and bound at least 1"));
    }
    if rank > 6 || n0 > 12 {
        return Err(precondition(
            "word check enumeration is capped at rank 6, bound 12",
        ));
    }
    let mut mass = vec![0u64; n0 as usize + 1];
    let mut enumerated = 0u64;
    let mut nonzero_passer = false;
    walk(rank, 0, n0, &mut mass, &mut enumerated, &mut nonzero_passer);
    let counts: Vec<u64> = mass
        .iter()
        .scan(0u64, |acc, m| {
            *acc += m;
            Some(*acc)
        })
        .collect();
    let delannoy_match = counts == delannoy(rank, n0);
    let n0_w = u64::from(n0);
    let symbolic_holds = (1..=n0_w).all(|s| 2 * n0_w * s > n0_w);
    Ok(L1WordReport {
        rank,
        n0,
        vectors_enumerated: enumerated,
        only_zero_passes: !nonzero_passer,
        counts,
        delannoy_match,
        symbolic_holds,
    })
}

fn walk(
    coords_left: u32,
    used: u32,
    n0: u32,
    mass: &mut [u64],
    enumerated: &mut u64,
    nonzero_passer: &mut bool,
) {
    if coords_left == 0 {
        *enumerated += 1;
        mass[used as usize] += 1;
        if used > 0 && 2 * u64::from(n0) * u64::from(used) <= u64::from(n0) {
            *nonzero_passer = true;
        }
        return;
    }
    let rem = i64::from(n0 - used);
    for val in -rem..=rem {
        walk(
            coords_left - 1,
            used + val.unsigned_abs() as u32,
            n0,
            mass,
            enumerated,
            nonzero_passer,
        );
    }
}

/// Cumulative cross-polytope counts by the recurrence
/// `D(r, n) = D(r-1, n) + D(r, n-1) + D(r-1, n-1)`.
fn delannoy(rank: u32, n0: u32) -> Vec<u64> {
    let mut prev: Vec<u64> = vec![1; n0 as usize + 1];
    for _ in 0..rank {
        let mut cur = vec![0u64; n0 as usize + 1];
        cur[0] = 1;
        for n in 1..=n0 as usize {
            cur[n] = prev[n] + cur[n - 1] + prev[n - 1];
        }
        prev = cur;
    }
    prev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle;
    use crate::surd::QuadSurd;
    use crate::{int, rat};
    use alloc::sync::Arc;

    fn surd_point(d: u64) -> CirclePoint {
        CirclePoint::from_surd(QuadSurd::sqrt_of(d).unwrap())
    }

    fn found(outcome: RelationOutcome) -> RelationCertificate {
        match outcome {
            RelationOutcome::Found(c) => c,
            other => panic!("expected a relation, got {other:?}"),
        }
    }

    #[test]
    fn surd_relations_certify_exactly() {
        let xs = [surd_point(2), surd_point(8)];
        let cert = found(integer_relation(&xs, 10).unwrap());
        assert_eq!(cert.coefficients, vec![int(2), int(-1)]);
        assert_eq!(cert.height, 10);
        assert!(cert.verified);
        // tie the certificate back to exact circle arithmetic
        let fold = circle::add_mod1(
            &circle::pair(&int(2), &xs[0]),
            &circle::pair(&int(-1), &xs[1]),
        )
        .unwrap();
        assert!(circle::is_zero_symbolic(&fold).unwrap());

        let mixed = [surd_point(2), surd_point(3), surd_point(8)];
        let cert = found(integer_relation(&mixed, 10).unwrap());
        assert_eq!(cert.coefficients, vec![int(2), int(0), int(-1)]);

        let indep = [surd_point(2), surd_point(3)];
        assert_eq!(
            integer_relation(&indep, 1000).unwrap(),
            RelationOutcome::NoneFound { height: 1000, structural: true }
        );
    }

    #[test]
    fn rational_relations_pick_canonical_minima() {
        let xs = [
            CirclePoint::from_rat(&rat(1, 3)),
            CirclePoint::from_rat(&rat(1, 6)),
        ];
        let cert = found(integer_relation(&xs, 10).unwrap());
        assert_eq!(cert.coefficients, vec![int(1), int(-2)]);

        // equal max-norm candidates resolved by the l1 tie-break
        let xs = [
            CirclePoint::from_rat(&rat(1, 4)),
            CirclePoint::from_rat(&rat(1, 2)),
        ];
        let cert = found(integer_relation(&xs, 10).unwrap());
        assert_eq!(cert.coefficients, vec![int(0), int(2)]);

        let cert = found(integer_relation(&[CirclePoint::from_rat(&rat(1, 2))], 10).unwrap());
        assert_eq!(cert.coefficients, vec![int(2)]);

        let cert = found(integer_relation(&[CirclePoint::zero()], 10).unwrap());
        assert_eq!(cert.coefficients, vec![int(1)]);

        // the minimal dependency has max-norm 2, so height 1 must miss it
        let xs = [
            CirclePoint::from_rat(&rat(1, 3)),
            CirclePoint::from_rat(&rat(1, 6)),
        ];
        assert_eq!(
            integer_relation(&xs, 1).unwrap(),
            RelationOutcome::NoneFound { height: 1, structural: false }
        );
    }

    #[test]
    fn relation_search_matches_brute_force() {
        let cases: Vec<Vec<CirclePoint>> = vec![
            vec![
                CirclePoint::from_rat(&rat(1, 3)),
                CirclePoint::from_rat(&rat(1, 6)),
            ],
            vec![surd_point(2), surd_point(8)],
            vec![surd_point(2), CirclePoint::from_rat(&rat(1, 4))],
            vec![surd_point(12), surd_point(3)],
            vec![
                CirclePoint::from_rat(&rat(2, 5)),
                CirclePoint::from_rat(&rat(3, 10)),
            ],
        ];
        for xs in &cases {
            let parts = decompose(xs).unwrap();
            for height in [1u64, 2, 10, 50] {
                let mine = integer_relation(xs, height).unwrap();
                let brute = brute_force_min(&parts, height as i64);
                match (mine, brute) {
                    (RelationOutcome::Found(c), Some(b)) => {
                        let got: Vec<i64> =
                            c.coefficients.iter().map(|e| e.to_i64().unwrap()).collect();
                        assert_eq!(got, b, "inputs {xs:?} height {height}");
                    }
                    (RelationOutcome::NoneFound { .. }, None) => {}
                    (m, b) => panic!("mismatch at height {height}: {m:?} vs {b:?}"),
                }
            }
        }
    }

    /// Reference search: scan every vector in the max-norm box and keep the
    /// minimum under the same (max-norm, l1, lex) order.
    fn brute_force_min(
        parts: &[(Rat, Option<(Rat, BigInt)>)],
        height: i64,
    ) -> Option<Vec<i64>> {
        let len = parts.len();
        let mut best: Option<Vec<i64>> = None;
        let mut v = vec![-height; len];
        loop {
            if v.iter().any(|e| *e != 0) {
                let coeffs: Vec<BigInt> = v.iter().map(|&e| BigInt::from(e)).collect();
                if relation_holds(&coeffs, parts) {
                    let mut cand = v.clone();
                    if cand.iter().find(|e| **e != 0).map_or(false, |f| *f < 0) {
                        for e in cand.iter_mut() {
                            *e = -*e;
                        }
                    }
                    let key = |w: &[i64]| {
                        (
                            w.iter().map(|e| e.abs()).max().unwrap(),
                            w.iter().map(|e| e.abs()).sum::<i64>(),
                            w.to_vec(),
                        )
                    };
                    if best.as_ref().map_or(true, |b| key(&cand) < key(b)) {
                        best = Some(cand);
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == len {
                    return best;
                }
                v[i] += 1;
                if v[i] <= height {
                    break;
                }
                v[i] = -height;
                i += 1;
            }
        }
    }

    #[test]
    fn relation_rejects_procedural_inputs() {
        let p = CirclePoint::from_refiner(Arc::new(|_bits: u32| {
            Ok(RatInterval::point(rat(1, 3)))
        }));
        assert!(matches!(
            integer_relation(&[p], 10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn kronecker_minimal_denominators() {
        // continued fraction denominators of sqrt(2): 1, 2, 5, 12, 29, 70;
        // the first with distance under 1/100 is 70, under 1/10 is 5
        let xs = [surd_point(2)];
        let zero = [CirclePoint::zero()];
        let sol = match kronecker_char_search(&xs, &zero, &rat(1, 100), 200).unwrap() {
            KroneckerOutcome::Solution(s) => s,
            other => panic!("expected a solution, got {other:?}"),
        };
        assert_eq!(sol.n, 70);
        assert!(sol.achieved[0].hi < rat(1, 100));

        let sol = match kronecker_char_search(&xs, &zero, &rat(1, 10), 200).unwrap() {
            KroneckerOutcome::Solution(s) => s,
            other => panic!("expected a solution, got {other:?}"),
        };
        assert_eq!(sol.n, 5);
    }

    #[test]
    fn kronecker_gates_and_bounds() {
        let half = [CirclePoint::from_rat(&rat(1, 2))];
        let zero = [CirclePoint::zero()];
        match kronecker_char_search(&half, &zero, &rat(1, 10), 100).unwrap() {
            KroneckerOutcome::DependentInputs(cert) => {
                assert_eq!(cert.coefficients, vec![int(2)]);
            }
            other => panic!("expected the dependency gate, got {other:?}"),
        }

        let xs = [surd_point(2)];
        let target = [CirclePoint::from_rat(&rat(1, 2))];
        assert!(matches!(
            kronecker_char_search(&xs, &target, &rat(1, 1_000_000_000), 100).unwrap(),
            KroneckerOutcome::NotFoundWithin { n_max: 100 }
        ));

        let xs = [surd_point(2), surd_point(3)];
        let targets = [
            CirclePoint::from_rat(&rat(1, 2)),
            CirclePoint::from_rat(&rat(1, 2)),
        ];
        let tight = match kronecker_char_search(&xs, &targets, &rat(1, 20), 1_000_000).unwrap() {
            KroneckerOutcome::Solution(s) => s,
            other => panic!("expected a solution, got {other:?}"),
        };
        for iv in &tight.achieved {
            assert!(iv.hi < rat(1, 20));
        }
        // a looser tolerance can only be hit sooner
        let loose = match kronecker_char_search(&xs, &targets, &rat(1, 10), 1_000_000).unwrap() {
            KroneckerOutcome::Solution(s) => s,
            other => panic!("expected a solution, got {other:?}"),
        };
        assert!(loose.n <= tight.n);
    }

    #[test]
    fn word_condition_reports() {
        let r = l1_word_check(1, 3).unwrap();
        assert_eq!(r.counts, vec![1, 3, 5, 7]);
        assert_eq!(r.vectors_enumerated, 7);
        assert!(r.only_zero_passes && r.delannoy_match && r.symbolic_holds);

        let r = l1_word_check(2, 1).unwrap();
        assert_eq!(r.counts, vec![1, 5]);

        let r = l1_word_check(3, 4).unwrap();
        assert_eq!(r.counts, vec![1, 7, 25, 63, 129]);
        assert!(r.only_zero_passes && r.delannoy_match && r.symbolic_holds);

        assert!(l1_word_check(0, 3).is_err());
        assert!(l1_word_check(3, 13).is_err());
    }
}
