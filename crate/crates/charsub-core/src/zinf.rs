//! Finite-support integer characters of the infinite torus product: the
//! dual side of the null-sequence group.
//!
//! Supports are kept as sorted runs of constant coefficient so that the
//! block indicators produced by the greedy cutoff construction (whose
//! blocks reach astronomical lengths) stay O(runs) in memory. Positions
//! are 1-based.

use crate::error::{precondition, Error, Result};
use crate::Rat;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Hard cap on materializing individual entries out of runs.
pub const ENTRY_CAP: u128 = 1 << 20;

/// Maximal inclusive run of equal nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub start: u128,
    pub end: u128,
    pub coef: BigInt,
}

impl Run {
    /// Number of positions covered; runs are never empty.
    pub fn count(&self) -> u128 {
        self.end - self.start + 1
    }
}

/// Integer character with finite support, canonical run-length form:
/// runs sorted, disjoint, nonzero, and adjacent equal runs merged.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZInfElem {
    runs: Vec<Run>,
}

impl ZInfElem {
    pub fn zero() -> ZInfElem {
        ZInfElem { runs: Vec::new() }
    }

    /// Standard basis character at position k >= 1.
    pub fn e(k: u128) -> ZInfElem {
        ZInfElem { runs: alloc::vec![Run { start: k, end: k, coef: BigInt::one() }] }
    }

    /// Indicator of the inclusive block [start, end].
    pub fn indicator_block(start: u128, end: u128) -> Result<ZInfElem> {
        ZInfElem::from_runs(alloc::vec![Run { start, end, coef: BigInt::one() }])
    }

    pub fn from_runs(mut runs: Vec<Run>) -> Result<ZInfElem> {
        runs.retain(|r| !r.coef.is_zero());
        runs.sort_by_key(|r| r.start);
        for r in &runs {
            if r.start < 1 {
                return Err(precondition("positions are 1-based"));
            }
            if r.end < r.start {
                return Err(precondition("run end precedes its start"));
            }
            if r.end > u128::MAX / 4 {
                return Err(precondition("run extends beyond the position ceiling"));
            }
        }
        for w in runs.windows(2) {
            if w[1].start <= w[0].end {
                return Err(precondition("runs overlap"));
            }
        }
        // merge adjacent runs carrying the same coefficient
        let mut merged: Vec<Run> = Vec::with_capacity(runs.len());
        for r in runs {
            match merged.last_mut() {
                Some(last) if last.end + 1 == r.start && last.coef == r.coef => last.end = r.end,
                _ => merged.push(r),
            }
        }
        Ok(ZInfElem { runs: merged })
    }

    pub fn from_entries<I: IntoIterator<Item = (u128, BigInt)>>(entries: I) -> Result<ZInfElem> {
        let mut acc: BTreeMap<u128, BigInt> = BTreeMap::new();
        for (pos, c) in entries {
            *acc.entry(pos).or_insert_with(BigInt::zero) += c;
        }
        ZInfElem::from_runs(
            acc.into_iter().map(|(p, c)| Run { start: p, end: p, coef: c }).collect(),
        )
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn is_zero(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn coef_at(&self, pos: u128) -> BigInt {
        match self.runs.binary_search_by(|r| r.start.cmp(&pos)) {
            Ok(i) => self.runs[i].coef.clone(),
            Err(0) => BigInt::zero(),
            Err(i) => {
                let r = &self.runs[i - 1];
                if pos <= r.end {
                    r.coef.clone()
                } else {
                    BigInt::zero()
                }
            }
        }
    }

    pub fn support_min(&self) -> Option<u128> {
        self.runs.first().map(|r| r.start)
    }

    pub fn support_max(&self) -> Option<u128> {
        self.runs.last().map(|r| r.end)
    }

    /// Number of nonzero coordinates.
    pub fn support_size(&self) -> u128 {
        self.runs.iter().map(Run::count).sum()
    }

    pub fn l1(&self) -> BigInt {
        self.runs.iter().map(|r| r.coef.abs() * BigInt::from(r.count())).sum()
    }

    pub fn l2_sq(&self) -> BigInt {
        self.runs.iter().map(|r| &r.coef * &r.coef * BigInt::from(r.count())).sum()
    }

    /// Largest absolute coefficient (zero for the zero element).
    pub fn linf(&self) -> BigInt {
        self.runs.iter().map(|r| r.coef.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Leftmost position whose coefficient attains the largest absolute
    /// value, if the element is nonzero.
    pub fn linf_position(&self) -> Option<u128> {
        let m = self.linf();
        if m.is_zero() {
            return None;
        }
        self.runs.iter().find(|r| r.coef.abs() == m).map(|r| r.start)
    }

    pub fn neg(&self) -> ZInfElem {
        ZInfElem {
            runs: self
                .runs
                .iter()
                .map(|r| Run { start: r.start, end: r.end, coef: -&r.coef })
                .collect(),
        }
    }

    /// Pointwise sum via a boundary sweep over both run lists.
    pub fn add(&self, other: &ZInfElem) -> ZInfElem {
        let mut cuts: Vec<u128> = Vec::new();
        for r in self.runs.iter().chain(&other.runs) {
            cuts.push(r.start);
            cuts.push(r.end + 1);
        }
        cuts.sort_unstable();
        cuts.dedup();
        let mut runs: Vec<Run> = Vec::new();
        for w in cuts.windows(2) {
            let c = self.coef_at(w[0]) + other.coef_at(w[0]);
            if !c.is_zero() {
                runs.push(Run { start: w[0], end: w[1] - 1, coef: c });
            }
        }
        ZInfElem::from_runs(runs).expect("sweep output is sorted and disjoint")
    }

    pub fn sub(&self, other: &ZInfElem) -> ZInfElem {
        self.add(&other.neg())
    }

    /// Materialized (position, coefficient) entries; errors past the cap.
    pub fn entries(&self) -> Result<Vec<(u128, BigInt)>> {
        let n = self.support_size();
        if n > ENTRY_CAP {
            return Err(Error::EnumerationCap { cap: ENTRY_CAP as u64, needed: n.min(u64::MAX as u128) as u64 });
        }
        let mut out = Vec::with_capacity(n as usize);
        for r in &self.runs {
            let mut p = r.start;
            loop {
                out.push((p, r.coef.clone()));
                if p == r.end {
                    break;
                }
                p += 1;
            }
        }
        Ok(out)
    }

    /// Membership in the seminorm body: support contained in (l, infinity)
    /// and sum of squared coefficients at most 1/eps^2.
    pub fn in_f_eps_l(&self, eps: &Rat, l: u128) -> Result<bool> {
        if !eps.is_positive() {
            return Err(precondition("eps must be positive"));
        }
        let tail_ok = self.support_min().map(|m| m > l).unwrap_or(true);
        let mass = Rat::from(self.l2_sq()) * eps * eps;
        Ok(tail_ok && mass <= Rat::one())
    }
}

impl fmt::Display for ZInfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::from("zinf{");
        for (i, r) in self.runs.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            if r.start == r.end {
                s.push_str(&alloc::format!("{}: {}", r.start, r.coef));
            } else {
                s.push_str(&alloc::format!("{}..{}: {}", r.start, r.end, r.coef));
            }
        }
        s.push('}');
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    #[test]
    fn canonical_runs() {
        let a = ZInfElem::from_entries([(5, int(-1)), (1, int(2))]).unwrap();
        assert_eq!(a.runs().len(), 2);
        assert_eq!(a.coef_at(1), int(2));
        assert_eq!(a.coef_at(3), int(0));
        assert_eq!(a.coef_at(5), int(-1));
        assert_eq!(a.to_string(), "zinf{1: 2, 5: -1}");
        // adjacent equal entries merge into one run
        let b = ZInfElem::from_entries([(2, int(1)), (3, int(1)), (4, int(1))]).unwrap();
        assert_eq!(b.runs().len(), 1);
        assert_eq!(b.to_string(), "zinf{2..4: 1}");
        // duplicate positions accumulate, cancellations vanish
        let c = ZInfElem::from_entries([(7, int(3)), (7, int(-3))]).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn rejects_bad_runs() {
        assert!(ZInfElem::from_runs(alloc::vec![Run { start: 0, end: 3, coef: int(1) }]).is_err());
        assert!(ZInfElem::from_runs(alloc::vec![Run { start: 4, end: 3, coef: int(1) }]).is_err());
        assert!(ZInfElem::from_runs(alloc::vec![
            Run { start: 1, end: 5, coef: int(1) },
            Run { start: 5, end: 9, coef: int(2) },
        ])
        .is_err());
    }

    #[test]
    fn norms_over_runs() {
        let big = ZInfElem::indicator_block(1, 1_000_000_000_000u128).unwrap();
        assert_eq!(big.l1(), int(1_000_000_000_000i64));
        assert_eq!(big.l2_sq(), int(1_000_000_000_000i64));
        assert_eq!(big.support_size(), 1_000_000_000_000u128);
        let mix = ZInfElem::from_entries([(1, int(-3)), (2, int(4))]).unwrap();
        assert_eq!(mix.l1(), int(7));
        assert_eq!(mix.l2_sq(), int(25));
    }

    #[test]
    fn sweep_addition() {
        let a = ZInfElem::indicator_block(1, 10).unwrap();
        let b = ZInfElem::indicator_block(5, 15).unwrap();
        let s = a.add(&b);
        assert_eq!(s.coef_at(3), int(1));
        assert_eq!(s.coef_at(7), int(2));
        assert_eq!(s.coef_at(12), int(1));
        assert_eq!(s.l1(), int(21));
        assert!(a.sub(&a).is_zero());
        // runs split and remerge cleanly
        assert_eq!(s.runs().len(), 3);
    }

    #[test]
    fn seminorm_body() {
        // chi = e_{l+1} sits exactly on the boundary at eps = 1
        let chi = ZInfElem::e(4);
        assert!(chi.in_f_eps_l(&rat(1, 1), 3).unwrap());
        assert!(!chi.in_f_eps_l(&rat(1, 1), 4).unwrap());
        assert!(!chi.in_f_eps_l(&rat(2, 1), 3).unwrap());
        // mass 1 + 4 = 5 <= 1/eps^2 needs eps <= 1/sqrt(5)
        let two = ZInfElem::from_entries([(5, int(1)), (6, int(2))]).unwrap();
        assert!(two.in_f_eps_l(&rat(1, 3), 2).unwrap());
        assert!(!two.in_f_eps_l(&rat(1, 2), 2).unwrap());
        assert!(ZInfElem::zero().in_f_eps_l(&rat(1, 1), 100).unwrap());
    }

    #[test]
    fn entry_materialization_is_capped() {
        let big = ZInfElem::indicator_block(1, (ENTRY_CAP) + 5).unwrap();
        assert!(matches!(big.entries(), Err(Error::EnumerationCap { .. })));
        let small = ZInfElem::from_entries([(2, int(1)), (9, int(-2))]).unwrap();
        assert_eq!(small.entries().unwrap(), alloc::vec![(2, int(1)), (9, int(-2))]);
    }
}
