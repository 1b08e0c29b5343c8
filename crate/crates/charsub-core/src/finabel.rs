//! Finite abelian groups in invariant-factor form with exact duality.
//!
//! A group is `Z_{d_1} x ... x Z_{d_r}` with `d_1 | d_2 | ... | d_r`, all
//! factors at least 2 (the trivial group is the empty product). The dual
//! group is isomorphic to the group itself; characters are coordinate
//! vectors of the same shape with pairing `(chi, x) = sum chi_i x_i / d_i
//! mod 1`. A subgroup is the integer lattice `L` with
//! `diag(d) Z^r <= L <= Z^r`, stored as a canonical Hermite basis, so
//! subgroup equality is structural equality — the property that turns
//! annihilator round trips into literal `==` tests.

use crate::error::{precondition, Error, Result};
use crate::linalg::{hnf, kernel, snf, Mat};
use crate::Rat;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;

/// Brute-force enumeration refuses beyond this many elements.
pub const ENUMERATION_CAP: i128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbGroup {
    factors: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub coords: Vec<i64>,
}

/// Element of the dual group; same shape as a `GroupElement`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub coords: Vec<i64>,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn to_wide(m: &Mat<i64>) -> Mat<i128> {
    m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect()
}

fn from_wide(m: &Mat<i128>) -> Result<Mat<i64>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|&v| i64::try_from(v).map_err(|_| Error::Overflow))
                .collect()
        })
        .collect()
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup { factors: vec![] }
    }

    /// Build from an invariant-factor chain; factors of 1 are pruned.
    pub fn from_invariant_factors(factors: &[i64]) -> Result<Self> {
        let mut v = Vec::new();
        for &f in factors {
            if f < 1 {
                return Err(precondition("invariant factors must be positive"));
            }
            if f > 1 {
                v.push(f);
            }
        }
        for w in v.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(precondition("invariant factors must form a divisibility chain"));
            }
        }
        Ok(FinAbGroup { factors: v })
    }

    /// Canonicalize a product of cyclic groups of arbitrary orders. Returns
    /// the invariant-factor group together with the coordinate change: a
    /// stated-coordinate vector x maps to `M x` reduced mod the factors.
    pub fn from_orders(orders: &[i64]) -> Result<(Self, Mat<i64>)> {
        if orders.iter().any(|&m| m < 1) {
            return Err(precondition("cyclic orders must be positive"));
        }
        let r = orders.len();
        let mut d: Mat<i128> = vec![vec![0; r]; r];
        for i in 0..r {
            d[i][i] = orders[i] as i128;
        }
        let s = snf(&d);
        let mut factors = Vec::new();
        let mut rows = Vec::new();
        for (i, di) in s.diag.iter().enumerate() {
            debug_assert!(*di > 0);
            if *di > 1 {
                factors.push(i64::try_from(*di).map_err(|_| Error::Overflow)?);
                rows.push(s.u[i].clone());
            }
        }
        let group = FinAbGroup::from_invariant_factors(&factors)?;
        let map = from_wide(&rows)?
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let m = group.factors[i];
                row.into_iter().map(|v| v.rem_euclid(m)).collect()
            })
            .collect();
        Ok((group, map))
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> i128 {
        self.factors.iter().map(|&d| d as i128).product()
    }

    /// Exponent = largest invariant factor (1 for the trivial group).
    pub fn exponent(&self) -> i64 {
        *self.factors.last().unwrap_or(&1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Group extended by `extra` trace coordinates of order = exponent,
    /// preserving coordinate positions (still a valid chain).
    pub fn with_trace_block(&self, extra: usize) -> FinAbGroup {
        if self.is_trivial() {
            return FinAbGroup::trivial();
        }
        let mut factors = self.factors.clone();
        factors.extend(core::iter::repeat(self.exponent()).take(extra));
        FinAbGroup { factors }
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.rank()] }
    }

    pub fn reduce(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::ShapeMismatch { expected: self.rank(), got: coords.len() });
        }
        Ok(GroupElement {
            coords: coords.iter().zip(&self.factors).map(|(&c, &d)| c.rem_euclid(d)).collect(),
        })
    }

    pub fn character(&self, coords: &[i64]) -> Result<Character> {
        Ok(Character { coords: self.reduce(coords)?.coords })
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((&x, &y), &d)| (x + y).rem_euclid(d))
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a.coords.iter().zip(&self.factors).map(|(&x, &d)| (-x).rem_euclid(d)).collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &d)| ((k.rem_euclid(d) as i128 * x as i128) % d as i128) as i64)
                .collect(),
        }
    }

    pub fn element_order(&self, a: &GroupElement) -> i64 {
        // order = lcm of d_i / gcd(a_i, d_i)
        let mut ord: i64 = 1;
        for (&x, &d) in a.coords.iter().zip(&self.factors) {
            let o = d / num_integer::gcd(x, d);
            ord = num_integer::lcm(ord, o);
        }
        ord
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.rank())
            .map(|i| {
                let mut c = vec![0; self.rank()];
                c[i] = 1;
                GroupElement { coords: c }
            })
            .collect()
    }

    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        let n = self.order();
        if n > ENUMERATION_CAP {
            return Err(Error::EnumerationCap { cap: ENUMERATION_CAP as u64, needed: n as u64 });
        }
        let mut out = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; self.rank()];
        loop {
            out.push(GroupElement { coords: cur.clone() });
            let mut i = 0;
            loop {
                if i == self.rank() {
                    return Ok(out);
                }
                cur[i] += 1;
                if cur[i] < self.factors[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Pairing numerator over the common denominator `exponent()`:
    /// `(chi, x) = pair_num / exponent mod 1`.
    pub fn pair_num(&self, chi: &Character, x: &GroupElement) -> Result<i64> {
        if chi.coords.len() != self.rank() || x.coords.len() != self.rank() {
            return Err(Error::ShapeMismatch {
                expected: self.rank(),
                got: chi.coords.len().max(x.coords.len()),
            });
        }
        let m = self.exponent() as i128;
        let mut acc: i128 = 0;
        for ((&c, &x), &d) in chi.coords.iter().zip(&x.coords).zip(&self.factors) {
            acc = (acc + c as i128 * x as i128 % m * (m / d as i128)) % m;
        }
        Ok(acc.rem_euclid(m) as i64)
    }

    /// `(chi, x)` as a canonical rational in [0, 1).
    pub fn pair(&self, chi: &Character, x: &GroupElement) -> Result<Rat> {
        let n = self.pair_num(chi, x)?;
        Ok(Rat::new(BigInt::from(n), BigInt::from(self.exponent())))
    }

    /// All abelian groups of order <= n, as invariant-factor chains,
    /// including the trivial group.
    pub fn all_up_to_order(n: i64) -> Vec<FinAbGroup> {
        let mut out = vec![FinAbGroup::trivial()];
        let mut chain: Vec<i64> = Vec::new();
        fn extend(chain: &mut Vec<i64>, prod: i64, n: i64, out: &mut Vec<FinAbGroup>) {
            let start = *chain.last().unwrap_or(&2);
            let mut f = start;
            while prod * f <= n {
                if f % start == 0 || chain.is_empty() {
                    if chain.last().map(|&l| f % l == 0).unwrap_or(true) {
                        chain.push(f);
                        out.push(FinAbGroup { factors: chain.clone() });
                        extend(chain, prod * f, n, out);
                        chain.pop();
                    }
                }
                f += 1;
            }
        }
        extend(&mut chain, 1, n, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

/// Subgroup as a canonical Hermite basis of its coordinate lattice:
/// `basis` is square upper triangular, positive pivots dividing the
/// matching invariant factor, entries above each pivot reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    ambient: FinAbGroup,
    basis: Mat<i64>,
}

/// A subgroup presented as an abstract group plus embedded generators:
/// `embed[j]` generates the j-th cyclic factor of `group` inside the
/// ambient group.
#[derive(Debug, Clone)]
pub struct SubgroupView {
    pub group: FinAbGroup,
    pub embed: Vec<GroupElement>,
}

/// Projection onto a quotient in invariant-factor form.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    pub group: FinAbGroup,
    /// column transform: x maps to x * v, then keep `kept` coordinates
    v: Mat<i64>,
    kept: Vec<usize>,
}

impl QuotientMap {
    pub fn source_rank(&self) -> usize {
        self.v.len()
    }

    pub fn project(&self, x: &GroupElement) -> GroupElement {
        let r = self.v.len();
        debug_assert_eq!(x.coords.len(), r);
        let coords = self
            .kept
            .iter()
            .zip(self.group.factors())
            .map(|(&j, &s)| {
                let mut acc: i128 = 0;
                for i in 0..r {
                    acc += x.coords[i] as i128 * self.v[i][j] as i128;
                }
                acc.rem_euclid(s as i128) as i64
            })
            .collect();
        GroupElement { coords }
    }
}

impl Subgroup {
    fn from_rows(ambient: FinAbGroup, mut rows: Mat<i64>) -> Subgroup {
        let r = ambient.rank();
        if r == 1 {
            // cyclic ambient: the lattice spanned by the rows and m is gcd Z,
            // already in canonical form
            let m = ambient.factors()[0];
            let mut g = m;
            for row in &rows {
                g = num_integer::gcd(g, row[0].rem_euclid(m));
            }
            return Subgroup { ambient, basis: vec![vec![g]] };
        }
        for (i, &d) in ambient.factors().iter().enumerate() {
            let mut rel = vec![0i64; r];
            rel[i] = d;
            rows.push(rel);
        }
        let wide = hnf(to_wide(&rows), r);
        debug_assert_eq!(wide.len(), r, "lattice containing diag(d) has full rank");
        let basis = from_wide(&wide).expect("canonical basis entries fit i64");
        Subgroup { ambient, basis }
    }

    pub fn from_generators(ambient: &FinAbGroup, gens: &[GroupElement]) -> Result<Subgroup> {
        let r = ambient.rank();
        let mut rows = Vec::with_capacity(gens.len());
        for g in gens {
            if g.coords.len() != r {
                return Err(Error::ShapeMismatch { expected: r, got: g.coords.len() });
            }
            rows.push(g.coords.clone());
        }
        Ok(Subgroup::from_rows(ambient.clone(), rows))
    }

    /// From an explicit element list; errors with `NotClosed` when the list
    /// is not a subgroup.
    pub fn from_elements(ambient: &FinAbGroup, elems: &[GroupElement]) -> Result<Subgroup> {
        let sub = Subgroup::from_generators(ambient, elems)?;
        let mut distinct: BTreeSet<Vec<i64>> = BTreeSet::new();
        distinct.insert(ambient.zero().coords);
        for e in elems {
            distinct.insert(ambient.reduce(&e.coords)?.coords);
        }
        if sub.order() != distinct.len() as i128 {
            return Err(Error::NotClosed);
        }
        Ok(sub)
    }

    pub fn full(ambient: &FinAbGroup) -> Subgroup {
        Subgroup::from_rows(ambient.clone(), ambient.generators().into_iter().map(|g| g.coords).collect())
    }

    pub fn zero_subgroup(ambient: &FinAbGroup) -> Subgroup {
        Subgroup::from_rows(ambient.clone(), vec![])
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn basis(&self) -> &Mat<i64> {
        &self.basis
    }

    pub fn order(&self) -> i128 {
        let det: i128 = (0..self.basis.len()).map(|i| self.basis[i][i] as i128).product();
        self.ambient.order() / det
    }

    pub fn is_full(&self) -> bool {
        (0..self.basis.len()).all(|i| {
            self.basis[i].iter().enumerate().all(|(j, &v)| v == i64::from(i == j))
        })
    }

    pub fn is_trivial_subgroup(&self) -> bool {
        self.order() == 1
    }

    /// Express a lifted coordinate vector in the lattice basis; None when
    /// the element is not in the subgroup.
    fn solve_in_basis(&self, coords: &[i64]) -> Option<Vec<i64>> {
        let r = self.basis.len();
        let mut t: Vec<i128> = coords.iter().map(|&c| c as i128).collect();
        let mut q = vec![0i128; r];
        for j in 0..r {
            let p = self.basis[j][j] as i128;
            if t[j] % p != 0 {
                return None;
            }
            let c = t[j] / p;
            q[j] = c;
            if c != 0 {
                for k in j..r {
                    t[k] -= c * self.basis[j][k] as i128;
                }
            }
        }
        Some(q.into_iter().map(|v| v as i64).collect())
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        debug_assert_eq!(x.coords.len(), self.ambient.rank());
        self.solve_in_basis(&x.coords).is_some()
    }

    pub fn contains_char(&self, chi: &Character) -> bool {
        self.solve_in_basis(&chi.coords).is_some()
    }

    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        let n = self.order();
        if n > ENUMERATION_CAP {
            return Err(Error::EnumerationCap { cap: ENUMERATION_CAP as u64, needed: n as u64 });
        }
        let r = self.ambient.rank();
        let reps: Vec<i64> =
            (0..r).map(|i| self.ambient.factors()[i] / self.basis[i][i]).collect();
        let mut out = Vec::with_capacity(n as usize);
        let mut c = vec![0i64; r];
        loop {
            let mut coords = vec![0i64; r];
            for j in 0..r {
                if c[j] != 0 {
                    for k in 0..r {
                        coords[k] = (coords[k] as i128 + c[j] as i128 * self.basis[j][k] as i128)
                            .rem_euclid(self.ambient.factors()[k] as i128)
                            as i64;
                    }
                }
            }
            out.push(GroupElement { coords });
            let mut i = 0;
            loop {
                if i == r {
                    return Ok(out);
                }
                c[i] += 1;
                if c[i] < reps[i] {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }

    /// Annihilator `H^perp = {chi : (chi, h) = 0 for all h in H}`, as a
    /// subgroup of the dual group (same invariant factors).
    pub fn annihilator(&self) -> Subgroup {
        let r = self.ambient.rank();
        if r == 0 {
            return Subgroup::from_rows(self.ambient.clone(), vec![]);
        }
        if r == 1 {
            // basis is [[d]] with d | m; chi kills dZ_m iff (m/d) | chi
            let m = self.ambient.factors()[0];
            let d = self.basis[0][0];
            return Subgroup { ambient: self.ambient.clone(), basis: vec![vec![m / d]] };
        }
        let m = self.ambient.exponent() as i128;
        let rows = self.basis.len();
        // chi annihilates iff B' chi = 0 mod m, with B'[j][i] = b_ji * m/d_i
        let mut mat: Mat<i128> = vec![vec![0; r + rows]; rows];
        for j in 0..rows {
            for i in 0..r {
                mat[j][i] = self.basis[j][i] as i128 * (m / self.ambient.factors()[i] as i128);
            }
            mat[j][r + j] = m;
        }
        let gens: Mat<i64> = kernel(&mat)
            .into_iter()
            .map(|k| {
                k[..r]
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| v.rem_euclid(self.ambient.factors()[i] as i128) as i64)
                    .collect()
            })
            .collect();
        Subgroup::from_rows(self.ambient.clone(), gens)
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(precondition("intersection requires a common ambient group"));
        }
        let r = self.ambient.rank();
        if r == 0 {
            return Ok(self.clone());
        }
        let k1 = self.basis.len();
        let k2 = other.basis.len();
        // solve u B1 = v B2: kernel of the map (u, v) -> u B1 - v B2,
        // written columnwise as M (u; v)^T = 0 with M = [B1^T | -B2^T]
        let mut mat: Mat<i128> = vec![vec![0; k1 + k2]; r];
        for i in 0..r {
            for j in 0..k1 {
                mat[i][j] = self.basis[j][i] as i128;
            }
            for j in 0..k2 {
                mat[i][k1 + j] = -(other.basis[j][i] as i128);
            }
        }
        let gens: Mat<i64> = kernel(&mat)
            .into_iter()
            .map(|w| {
                (0..r)
                    .map(|i| {
                        let mut acc: i128 = 0;
                        for j in 0..k1 {
                            acc += w[j] * self.basis[j][i] as i128;
                        }
                        acc.rem_euclid(self.ambient.factors()[i] as i128) as i64
                    })
                    .collect()
            })
            .collect();
        Ok(Subgroup::from_rows(self.ambient.clone(), gens))
    }

    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(precondition("join requires a common ambient group"));
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Subgroup::from_rows(self.ambient.clone(), rows))
    }

    /// Quotient G/H in invariant-factor form with its projection.
    pub fn quotient(&self) -> QuotientMap {
        let r = self.ambient.rank();
        if r == 0 {
            return QuotientMap { group: FinAbGroup::trivial(), v: vec![], kept: vec![] };
        }
        let s = snf(&to_wide(&self.basis));
        let mut factors = Vec::new();
        let mut kept = Vec::new();
        for (i, di) in s.diag.iter().enumerate() {
            debug_assert!(*di > 0);
            if *di > 1 {
                factors.push(i64::try_from(*di).expect("quotient factor fits i64"));
                kept.push(i);
            }
        }
        let group = FinAbGroup::from_invariant_factors(&factors).expect("snf diag is a chain");
        let v = from_wide(&s.v).unwrap_or_else(|_| {
            // reduce the projection columns mod the target factor first
            s.v.iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .map(|(j, &x)| {
                            let m = s.diag.get(j).copied().filter(|d| *d > 1).unwrap_or(1).max(1);
                            x.rem_euclid(m) as i64
                        })
                        .collect()
                })
                .collect()
        });
        QuotientMap { group, v, kept }
    }

    /// The subgroup as an abstract group with embedded generators.
    pub fn as_group(&self) -> SubgroupView {
        let r = self.ambient.rank();
        if r == 0 {
            return SubgroupView { group: FinAbGroup::trivial(), embed: vec![] };
        }
        // relation matrix C = diag(d) B^{-1}: row i solves x B = d_i e_i
        let mut c: Mat<i128> = Vec::with_capacity(r);
        for i in 0..r {
            let mut target = vec![0i64; r];
            target[i] = self.ambient.factors()[i];
            let row = self
                .solve_in_basis(&target)
                .expect("diag(d) lies in every subgroup lattice");
            c.push(row.into_iter().map(|v| v as i128).collect());
        }
        let s = snf(&c);
        let mut factors = Vec::new();
        let mut gens = Vec::new();
        for (j, dj) in s.diag.iter().enumerate() {
            debug_assert!(*dj > 0);
            if *dj > 1 {
                factors.push(i64::try_from(*dj).expect("subgroup factor fits i64"));
                // generator = row j of V^{-1} B, reduced mod d
                let coords: Vec<i64> = (0..r)
                    .map(|k| {
                        let mut acc: i128 = 0;
                        for t in 0..r {
                            acc += s.v_inv[j][t] * self.basis[t][k] as i128;
                        }
                        acc.rem_euclid(self.ambient.factors()[k] as i128) as i64
                    })
                    .collect();
                gens.push(GroupElement { coords });
            }
        }
        let group = FinAbGroup::from_invariant_factors(&factors).expect("snf diag is a chain");
        SubgroupView { group, embed: gens }
    }

    /// All subgroups of the ambient group (desk scale only).
    pub fn all_of(ambient: &FinAbGroup) -> Result<Vec<Subgroup>> {
        let elems = ambient.elements()?;
        let mut seen: BTreeSet<Mat<i64>> = BTreeSet::new();
        let mut queue = vec![Subgroup::zero_subgroup(ambient)];
        seen.insert(queue[0].basis.clone());
        let mut out = Vec::new();
        while let Some(h) = queue.pop() {
            for e in &elems {
                if !h.contains(e) {
                    let mut rows = h.basis.clone();
                    rows.push(e.coords.clone());
                    let bigger = Subgroup::from_rows(ambient.clone(), rows);
                    if seen.insert(bigger.basis.clone()) {
                        queue.push(bigger.clone());
                    }
                }
            }
            out.push(h);
        }
        out.sort();
        Ok(out)
    }

    /// Lexicographically smallest element (as a canonical character
    /// coordinate vector) of this subgroup whose pairing with `target` is
    /// nonzero; None when every element pairs to zero.
    pub fn lex_min_nonvanishing_at(&self, target: &GroupElement) -> Option<Character> {
        let r = self.ambient.rank();
        let m = self.ambient.exponent();
        if r == 0 {
            return None;
        }
        // pairing numerators of the basis rows against the target
        let p: Vec<i64> = (0..r)
            .map(|j| {
                self.ambient
                    .pair_num(&Character { coords: self.basis[j].clone() }, target)
                    .expect("shapes agree")
            })
            .collect();
        // tail_gcd[i] = gcd(m, p_{i+1}, ..., p_r)
        let mut tail_gcd = vec![m; r + 1];
        for i in (0..r).rev() {
            tail_gcd[i] = num_integer::gcd(tail_gcd[i + 1], p[i]);
        }
        if tail_gcd[0] == m {
            return None;
        }
        let mut coeff = vec![0i64; r];
        let mut q: i64 = 0; // pairing numerator of the fixed prefix
        for i in 0..r {
            let d = self.ambient.factors()[i];
            let pivot = self.basis[i][i];
            // offset already contributed to coordinate i by fixed rows
            let mut offset: i128 = 0;
            for j in 0..i {
                offset += coeff[j] as i128 * self.basis[j][i] as i128;
            }
            let offset = (offset.rem_euclid(d as i128)) as i64;
            let base = offset % pivot;
            let steps = d / pivot;
            let mut chosen = false;
            for k in 0..steps {
                let chi_i = base + k * pivot;
                let c = (chi_i - offset).div_euclid(pivot).rem_euclid(steps);
                let q_next = ((q as i128 + c as i128 * p[i] as i128).rem_euclid(m as i128)) as i64;
                let feasible = !(tail_gcd[i + 1] == m && q_next == 0);
                if feasible {
                    coeff[i] = c;
                    q = q_next;
                    chosen = true;
                    break;
                }
            }
            if !chosen {
                // contradicts tail_gcd[0] < m; defensive
                return None;
            }
        }
        let coords: Vec<i64> = (0..r)
            .map(|i| {
                let mut acc: i128 = 0;
                for j in 0..r {
                    acc += coeff[j] as i128 * self.basis[j][i] as i128;
                }
                acc.rem_euclid(self.ambient.factors()[i] as i128) as i64
            })
            .collect();
        Some(Character { coords })
    }
}

/// Restriction of an ambient character to a subgroup presented by `view`:
/// the character eta of `view.group` with `(eta, y) = (chi, embed(y))`.
pub fn restrict_character(
    g: &FinAbGroup,
    chi: &Character,
    view: &SubgroupView,
) -> Result<Character> {
    let mut coords = Vec::with_capacity(view.embed.len());
    for (j, h) in view.embed.iter().enumerate() {
        let s = view.group.factors()[j];
        let val = g.pair(chi, h)?;
        let scaled = val * Rat::from_integer(BigInt::from(s));
        if !scaled.is_integer() {
            return Err(precondition("character value has order not dividing the factor"));
        }
        let num: BigInt = scaled.to_integer();
        let num: i64 = i64::try_from(&num).map_err(|_| Error::Overflow)?;
        coords.push(num.rem_euclid(s));
    }
    Ok(Character { coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn zn(n: i64) -> FinAbGroup {
        FinAbGroup::from_invariant_factors(&[n]).unwrap()
    }

    fn grp(fs: &[i64]) -> FinAbGroup {
        FinAbGroup::from_invariant_factors(fs).unwrap()
    }

    #[test]
    fn construction_and_canonicalization() {
        assert!(grp(&[1, 4]).factors() == [4]);
        assert!(FinAbGroup::from_invariant_factors(&[4, 2]).is_err());
        assert_eq!(grp(&[2, 4]).order(), 8);
        assert_eq!(grp(&[2, 4]).exponent(), 4);
        assert_eq!(FinAbGroup::trivial().order(), 1);

        // Z_2 x Z_3 is cyclic of order 6
        let (g, map) = FinAbGroup::from_orders(&[2, 3]).unwrap();
        assert_eq!(g.factors(), [6]);
        // the map must be an isomorphism: image of (1,1) generates
        let img = |x: &[i64]| -> GroupElement {
            let coords = map
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let acc: i64 = row.iter().zip(x).map(|(&a, &b)| a * b).sum();
                    acc.rem_euclid(g.factors()[i])
                })
                .collect();
            GroupElement { coords }
        };
        assert_eq!(g.element_order(&img(&[1, 1])), 6);
        assert_eq!(g.element_order(&img(&[1, 0])), 2);
        assert_eq!(g.element_order(&img(&[0, 1])), 3);
    }

    #[test]
    fn pairing_table_z6() {
        let g = zn(6);
        let chi = g.character(&[3]).unwrap();
        let x = g.reduce(&[2]).unwrap();
        assert_eq!(g.pair(&chi, &x).unwrap(), Rat::new(0.into(), 1.into()));
        let chi = g.character(&[1]).unwrap();
        assert_eq!(g.pair(&chi, &x).unwrap(), rat(1, 3));
    }

    #[test]
    fn pairing_mixed_shape() {
        let g = grp(&[2, 4]);
        let chi = g.character(&[1, 1]).unwrap();
        let x = g.reduce(&[1, 2]).unwrap();
        // 1/2 + 2/4 = 1 = 0 mod 1
        assert!(g.pair(&chi, &x).unwrap() == rat(0, 1));
        let y = g.reduce(&[1, 1]).unwrap();
        assert_eq!(g.pair(&chi, &y).unwrap(), rat(3, 4));
    }

    #[test]
    fn subgroup_membership_and_order() {
        let g = zn(4);
        let h = Subgroup::from_generators(&g, &[g.reduce(&[2]).unwrap()]).unwrap();
        assert_eq!(h.order(), 2);
        assert!(h.contains(&g.reduce(&[2]).unwrap()));
        assert!(!h.contains(&g.reduce(&[1]).unwrap()));
        assert!(h.contains(&g.zero()));
        let elems = h.elements().unwrap();
        assert_eq!(elems.len(), 2);

        assert!(Subgroup::full(&g).is_full());
        assert_eq!(Subgroup::zero_subgroup(&g).order(), 1);
    }

    #[test]
    fn from_elements_closure_check() {
        let g = zn(4);
        let ok = Subgroup::from_elements(&g, &[g.reduce(&[0]).unwrap(), g.reduce(&[2]).unwrap()]);
        assert!(ok.is_ok());
        let bad = Subgroup::from_elements(&g, &[g.reduce(&[2]).unwrap(), g.reduce(&[1]).unwrap()]);
        assert!(matches!(bad, Err(Error::NotClosed)));
    }

    #[test]
    fn annihilator_z4() {
        let g = zn(4);
        let h = Subgroup::from_generators(&g, &[g.reduce(&[2]).unwrap()]).unwrap();
        let perp = h.annihilator();
        assert_eq!(perp.order(), 2);
        assert!(perp.contains(&g.reduce(&[2]).unwrap()));
        assert_eq!(perp.annihilator(), h);
        assert_eq!(Subgroup::full(&g).annihilator().order(), 1);
        assert_eq!(Subgroup::zero_subgroup(&g).annihilator().order(), 4);
    }

    #[test]
    fn annihilator_oracle_scan() {
        // oracle: brute-force pairing scan on a non-cyclic group
        let g = grp(&[2, 4]);
        let h = Subgroup::from_generators(&g, &[g.reduce(&[1, 2]).unwrap()]).unwrap();
        let perp = h.annihilator();
        let h_elems = h.elements().unwrap();
        for chi in g.elements().unwrap() {
            let chi = Character { coords: chi.coords };
            let kills = h_elems
                .iter()
                .all(|x| g.pair_num(&chi, x).unwrap() == 0);
            assert_eq!(kills, perp.contains_char(&chi));
        }
        assert_eq!(h.order() * perp.order(), g.order());
    }

    #[test]
    fn quotient_by_diagonal_line() {
        // Z_2 x Z_4 / <(1,2)> has order 4; it is cyclic
        let g = grp(&[2, 4]);
        let h = Subgroup::from_generators(&g, &[g.reduce(&[1, 2]).unwrap()]).unwrap();
        let q = h.quotient();
        assert_eq!(q.group.order(), 4);
        assert_eq!(q.group.factors(), [4]);
        // kernel of the projection is exactly H
        for x in g.elements().unwrap() {
            let is_zero = q.project(&x).coords.iter().all(|&c| c == 0);
            assert_eq!(is_zero, h.contains(&x), "kernel mismatch at {x}");
        }
        // surjectivity: image has full order
        let mut seen = BTreeSet::new();
        for x in g.elements().unwrap() {
            seen.insert(q.project(&x).coords);
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn quotient_trivial_cases() {
        let g = zn(4);
        let q = Subgroup::zero_subgroup(&g).quotient();
        assert_eq!(q.group.factors(), [4]);
        let q = Subgroup::full(&g).quotient();
        assert!(q.group.is_trivial());
    }

    #[test]
    fn subgroup_as_abstract_group() {
        let g = grp(&[2, 4]);
        let h = Subgroup::from_generators(
            &g,
            &[g.reduce(&[1, 0]).unwrap(), g.reduce(&[0, 2]).unwrap()],
        )
        .unwrap();
        let view = h.as_group();
        assert_eq!(view.group.order(), 4);
        // embedded generators have the right orders and generate H
        for (j, e) in view.embed.iter().enumerate() {
            assert_eq!(g.element_order(e), view.group.factors()[j]);
            assert!(h.contains(e));
        }
        let regen = Subgroup::from_generators(&g, &view.embed).unwrap();
        assert_eq!(regen, h);
    }

    #[test]
    fn intersect_and_join() {
        let g = grp(&[4, 4]);
        let a = Subgroup::from_generators(&g, &[g.reduce(&[1, 0]).unwrap()]).unwrap();
        let b = Subgroup::from_generators(&g, &[g.reduce(&[1, 2]).unwrap()]).unwrap();
        let i = a.intersect(&b).unwrap();
        // oracle: exhaustive intersection
        let a_el: BTreeSet<_> = a.elements().unwrap().into_iter().collect();
        let b_el: BTreeSet<_> = b.elements().unwrap().into_iter().collect();
        let both: Vec<_> = a_el.intersection(&b_el).cloned().collect();
        let oracle = Subgroup::from_elements(&g, &both).unwrap();
        assert_eq!(i, oracle);
        let j = a.join(&b).unwrap();
        assert_eq!(j.order(), a.order() * b.order() / i.order());
    }

    #[test]
    fn all_subgroups_counts() {
        // Z_4: 3 subgroups; Z_2 x Z_2: 5; Z_12: 6 (one per divisor)
        assert_eq!(Subgroup::all_of(&zn(4)).unwrap().len(), 3);
        assert_eq!(Subgroup::all_of(&grp(&[2, 2])).unwrap().len(), 5);
        assert_eq!(Subgroup::all_of(&zn(12)).unwrap().len(), 6);
    }

    #[test]
    fn all_groups_up_to_order() {
        let gs = FinAbGroup::all_up_to_order(8);
        // trivial, Z2, Z3, Z4, Z2xZ2, Z5, Z6, Z7, Z8, Z2xZ4, Z2xZ2xZ2
        assert_eq!(gs.len(), 11);
        assert!(gs.iter().all(|g| g.order() <= 8));
        let orders: Vec<i128> = gs.iter().map(|g| g.order()).collect();
        assert!(orders.contains(&1));
        assert_eq!(orders.iter().filter(|&&o| o == 8).count(), 3);
    }

    #[test]
    fn lex_min_separator_matches_exhaustive() {
        let g = grp(&[2, 4, 4]);
        let h = Subgroup::from_generators(
            &g,
            &[g.reduce(&[1, 2, 0]).unwrap(), g.reduce(&[0, 0, 2]).unwrap()],
        )
        .unwrap();
        let perp = h.annihilator();
        for target in g.elements().unwrap() {
            let fast = perp.lex_min_nonvanishing_at(&target);
            // oracle: scan annihilator elements in lex order
            let mut slow = None;
            let mut perp_elems: Vec<_> =
                perp.elements().unwrap().into_iter().map(|e| e.coords).collect();
            perp_elems.sort();
            for chi in perp_elems {
                let chi = Character { coords: chi };
                if g.pair_num(&chi, &target).unwrap() != 0 {
                    slow = Some(chi);
                    break;
                }
            }
            assert_eq!(fast, slow, "separator mismatch at target {target}");
        }
    }

    #[test]
    fn restriction_of_characters() {
        let g = zn(4);
        let h = Subgroup::from_generators(&g, &[g.reduce(&[2]).unwrap()]).unwrap();
        let view = h.as_group();
        assert_eq!(view.group.factors(), [2]);
        // chi = 1 on Z_4 restricted to {0,2}: (eta, h) = (chi, 2) = 1/2
        let chi = g.character(&[1]).unwrap();
        let eta = restrict_character(&g, &chi, &view).unwrap();
        assert_eq!(
            view.group.pair(&eta, &view.group.reduce(&[1]).unwrap()).unwrap(),
            rat(1, 2)
        );
        // chi = 2 restricts to the zero character
        let chi = g.character(&[2]).unwrap();
        let eta = restrict_character(&g, &chi, &view).unwrap();
        assert_eq!(eta.coords, [0]);
    }

    #[test]
    fn trace_block_extension() {
        let g = grp(&[2, 4]);
        let e = g.with_trace_block(2);
        assert_eq!(e.factors(), [2, 4, 4, 4]);
        assert!(FinAbGroup::trivial().with_trace_block(3).is_trivial());
    }
}
