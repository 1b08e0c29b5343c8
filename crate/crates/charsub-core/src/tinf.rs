//! Elements of the infinite torus product, with finitely many explicit
//! coordinates plus an optional closed-form tail rule.
//!
//! The tail rules cover exactly what the sequence-group constructions
//! produce and consume: a dense harmonic-decay tail, a sparse schedule of
//! harmonically shrinking values, and a constant-norm tail for exercising
//! the non-convergent paths. Convergence and summability tags are read off
//! the rule structure, so they are always certified.

use crate::circle::CirclePoint;
use crate::error::{precondition, Error, Result};
use crate::Rat;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_traits::One;

/// Schedule of strictly increasing positions for sparse tails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosGen {
    /// p_m = start + (m - 1) * step, for all m >= 1
    Arithmetic { start: u128, step: u128 },
    /// materialized prefix of an unbounded schedule; strictly increasing
    Listed(Vec<u128>),
}

impl PosGen {
    fn validate(&self) -> Result<()> {
        match self {
            PosGen::Arithmetic { start, step } => {
                if *start < 1 || *step < 1 {
                    return Err(precondition("arithmetic schedule needs start, step >= 1"));
                }
                Ok(())
            }
            PosGen::Listed(ps) => {
                if ps.is_empty() {
                    return Err(precondition("listed schedule must be nonempty"));
                }
                if ps[0] < 1 {
                    return Err(precondition("positions are 1-based"));
                }
                for w in ps.windows(2) {
                    if w[1] <= w[0] {
                        return Err(precondition("listed schedule must strictly increase"));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn first(&self) -> u128 {
        match self {
            PosGen::Arithmetic { start, .. } => *start,
            PosGen::Listed(ps) => ps[0],
        }
    }

    /// Index m >= 1 of the position, if scheduled and materialized.
    /// Ok(None): certainly not scheduled. Err: beyond the materialized part.
    pub fn index_of(&self, pos: u128) -> Result<Option<u128>> {
        match self {
            PosGen::Arithmetic { start, step } => {
                if pos < *start || (pos - start) % step != 0 {
                    Ok(None)
                } else {
                    Ok(Some((pos - start) / step + 1))
                }
            }
            PosGen::Listed(ps) => {
                if pos > *ps.last().unwrap() {
                    return Err(Error::BudgetExhausted(String::from(
                        "sparse tail not materialized to this position",
                    )));
                }
                Ok(ps.binary_search(&pos).ok().map(|i| i as u128 + 1))
            }
        }
    }

    pub fn position(&self, m: u128) -> Result<u128> {
        if m < 1 {
            return Err(precondition("schedule indices start at 1"));
        }
        match self {
            PosGen::Arithmetic { start, step } => Ok(start + (m - 1) * step),
            PosGen::Listed(ps) => ps
                .get((m - 1) as usize)
                .copied()
                .ok_or_else(|| Error::BudgetExhausted(String::from("schedule exhausted"))),
        }
    }
}

/// Closed-form coordinate rule past the explicit prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailRule {
    /// coordinate n carries 1/(scale * n) for every n > from
    DenseNorm { scale: u64, from: u128 },
    /// the m-th scheduled position carries 1/(c * m); elsewhere zero
    SparseHarmonic { c: u64, positions: PosGen },
    /// every coordinate n > from carries the same value
    ConstantNorm { value: Rat, from: u128 },
}

/// Torus-product element.
#[derive(Debug, Clone, PartialEq)]
pub enum TInfElem {
    Finite(BTreeMap<u128, CirclePoint>),
    Ruled { prefix: BTreeMap<u128, CirclePoint>, tail: TailRule },
}

/// Certified three-valued tag derived from the representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyVerdict {
    Holds,
    Fails,
    Undecided,
}

fn check_entries<I: IntoIterator<Item = (u128, CirclePoint)>>(
    entries: I,
) -> Result<BTreeMap<u128, CirclePoint>> {
    let mut map = BTreeMap::new();
    for (pos, v) in entries {
        if pos < 1 {
            return Err(precondition("positions are 1-based"));
        }
        if v.is_zero() {
            continue;
        }
        if map.insert(pos, v).is_some() {
            return Err(precondition("duplicate coordinate"));
        }
    }
    Ok(map)
}

impl TInfElem {
    pub fn zero() -> TInfElem {
        TInfElem::Finite(BTreeMap::new())
    }

    pub fn finite<I: IntoIterator<Item = (u128, CirclePoint)>>(entries: I) -> Result<TInfElem> {
        Ok(TInfElem::Finite(check_entries(entries)?))
    }

    /// Explicit entries up to `from`, then 1/(scale * n) at every n > from.
    pub fn dense_tail<I: IntoIterator<Item = (u128, CirclePoint)>>(
        prefix: I,
        scale: u64,
        from: u128,
    ) -> Result<TInfElem> {
        if scale < 1 {
            return Err(precondition("scale must be >= 1"));
        }
        let prefix = check_entries(prefix)?;
        if prefix.keys().next_back().map(|&p| p > from).unwrap_or(false) {
            return Err(precondition("prefix reaches into the ruled tail"));
        }
        Ok(TInfElem::Ruled { prefix, tail: TailRule::DenseNorm { scale, from } })
    }

    /// Explicit entries below the first scheduled position, then 1/(c * m)
    /// at the m-th scheduled position.
    pub fn sparse_harmonic<I: IntoIterator<Item = (u128, CirclePoint)>>(
        prefix: I,
        c: u64,
        positions: PosGen,
    ) -> Result<TInfElem> {
        if c < 1 {
            return Err(precondition("c must be >= 1"));
        }
        positions.validate()?;
        let prefix = check_entries(prefix)?;
        if prefix.keys().next_back().map(|&p| p >= positions.first()).unwrap_or(false) {
            return Err(precondition("prefix reaches into the ruled tail"));
        }
        Ok(TInfElem::Ruled { prefix, tail: TailRule::SparseHarmonic { c, positions } })
    }

    /// Explicit entries up to `from`, then the same value at every n > from.
    pub fn constant_tail<I: IntoIterator<Item = (u128, CirclePoint)>>(
        prefix: I,
        value: Rat,
        from: u128,
    ) -> Result<TInfElem> {
        let prefix = check_entries(prefix)?;
        if prefix.keys().next_back().map(|&p| p > from).unwrap_or(false) {
            return Err(precondition("prefix reaches into the ruled tail"));
        }
        Ok(TInfElem::Ruled { prefix, tail: TailRule::ConstantNorm { value, from } })
    }

    /// Exact coordinate value. Errors only past the materialized part of a
    /// listed sparse schedule.
    pub fn value_at(&self, pos: u128) -> Result<CirclePoint> {
        if pos < 1 {
            return Err(precondition("positions are 1-based"));
        }
        match self {
            TInfElem::Finite(m) => Ok(m.get(&pos).cloned().unwrap_or_else(CirclePoint::zero)),
            TInfElem::Ruled { prefix, tail } => {
                if let Some(v) = prefix.get(&pos) {
                    return Ok(v.clone());
                }
                match tail {
                    TailRule::DenseNorm { scale, from } => {
                        if pos > *from {
                            Ok(CirclePoint::from_rat(&Rat::new(
                                BigInt::one(),
                                BigInt::from(*scale) * BigInt::from(pos),
                            )))
                        } else {
                            Ok(CirclePoint::zero())
                        }
                    }
                    TailRule::SparseHarmonic { c, positions } => {
                        match positions.index_of(pos)? {
                            Some(m) => Ok(CirclePoint::from_rat(&Rat::new(
                                BigInt::one(),
                                BigInt::from(*c) * BigInt::from(m),
                            ))),
                            None => Ok(CirclePoint::zero()),
                        }
                    }
                    TailRule::ConstantNorm { value, from } => {
                        if pos > *from {
                            Ok(CirclePoint::from_rat(value))
                        } else {
                            Ok(CirclePoint::zero())
                        }
                    }
                }
            }
        }
    }

    pub fn explicit_entries(&self) -> &BTreeMap<u128, CirclePoint> {
        match self {
            TInfElem::Finite(m) => m,
            TInfElem::Ruled { prefix, .. } => prefix,
        }
    }

    pub fn tail_rule(&self) -> Option<&TailRule> {
        match self {
            TInfElem::Finite(_) => None,
            TInfElem::Ruled { tail, .. } => Some(tail),
        }
    }

    /// First index from which the tail rule takes over (exclusive bound of
    /// the zero-padded finite region for Finite elements).
    pub fn tail_start(&self) -> u128 {
        match self {
            TInfElem::Finite(m) => m.keys().next_back().map(|&p| p + 1).unwrap_or(1),
            TInfElem::Ruled { tail, .. } => match tail {
                TailRule::DenseNorm { from, .. } => from + 1,
                TailRule::SparseHarmonic { positions, .. } => positions.first(),
                TailRule::ConstantNorm { from, .. } => from + 1,
            },
        }
    }

    /// Certified: the coordinates converge to the identity.
    pub fn tends_to_1(&self) -> PropertyVerdict {
        match self {
            TInfElem::Finite(_) => PropertyVerdict::Holds,
            TInfElem::Ruled { tail, .. } => match tail {
                TailRule::DenseNorm { .. } | TailRule::SparseHarmonic { .. } => {
                    PropertyVerdict::Holds
                }
                TailRule::ConstantNorm { value, .. } => {
                    let v = CirclePoint::from_rat(value);
                    if v.is_zero() {
                        PropertyVerdict::Holds
                    } else {
                        PropertyVerdict::Fails
                    }
                }
            },
        }
    }

    /// Certified: the chord distances to the identity have a finite sum.
    pub fn l1_summable(&self) -> PropertyVerdict {
        match self {
            TInfElem::Finite(_) => PropertyVerdict::Holds,
            TInfElem::Ruled { tail, .. } => match tail {
                // harmonic norm sums diverge, densely or on any schedule
                TailRule::DenseNorm { .. } | TailRule::SparseHarmonic { .. } => {
                    PropertyVerdict::Fails
                }
                TailRule::ConstantNorm { value, .. } => {
                    let v = CirclePoint::from_rat(value);
                    if v.is_zero() {
                        PropertyVerdict::Holds
                    } else {
                        PropertyVerdict::Fails
                    }
                }
            },
        }
    }
}

impl fmt::Display for TInfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::from("tinf{");
        for (i, (pos, v)) in self.explicit_entries().iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(&alloc::format!("{pos}: {v}"));
        }
        match self.tail_rule() {
            None => {}
            Some(TailRule::DenseNorm { scale, from }) => {
                if !self.explicit_entries().is_empty() {
                    s.push_str("; ");
                }
                s.push_str(&alloc::format!("tail=dense(scale={scale}, from={from})"));
            }
            Some(TailRule::SparseHarmonic { c, positions }) => {
                if !self.explicit_entries().is_empty() {
                    s.push_str("; ");
                }
                match positions {
                    PosGen::Arithmetic { start, step } => {
                        s.push_str(&alloc::format!(
                            "tail=harmonic(c={c}, positions={start}+{step}m)"
                        ));
                    }
                    PosGen::Listed(ps) => {
                        s.push_str(&alloc::format!(
                            "tail=harmonic(c={c}, positions=listed[{}])",
                            ps.len()
                        ));
                    }
                }
            }
            Some(TailRule::ConstantNorm { value, from }) => {
                if !self.explicit_entries().is_empty() {
                    s.push_str("; ");
                }
                s.push_str(&alloc::format!("tail=const(value={value}, from={from})"));
            }
        }
        s.push('}');
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn p(r: Rat) -> CirclePoint {
        CirclePoint::from_rat(&r)
    }

    #[test]
    fn finite_values() {
        let z = TInfElem::finite([(3, p(rat(1, 6)))]).unwrap();
        assert_eq!(z.value_at(3).unwrap().as_rat().cloned(), Some(rat(1, 6)));
        assert!(z.value_at(2).unwrap().is_zero());
        assert!(z.value_at(1000).unwrap().is_zero());
        assert_eq!(z.tends_to_1(), PropertyVerdict::Holds);
        assert_eq!(z.l1_summable(), PropertyVerdict::Holds);
        assert_eq!(z.to_string(), "tinf{3: 1/6}");
        assert!(TInfElem::finite([(0, p(rat(1, 2)))]).is_err());
        assert!(TInfElem::finite([(2, p(rat(1, 2))), (2, p(rat(1, 3)))]).is_err());
    }

    #[test]
    fn dense_tail_values() {
        let z = TInfElem::dense_tail([], 10, 100).unwrap();
        assert!(z.value_at(100).unwrap().is_zero());
        assert_eq!(z.value_at(101).unwrap().as_rat().cloned(), Some(rat(1, 1010)));
        assert_eq!(z.value_at(500).unwrap().as_rat().cloned(), Some(rat(1, 5000)));
        assert_eq!(z.tends_to_1(), PropertyVerdict::Holds);
        assert_eq!(z.l1_summable(), PropertyVerdict::Fails);
    }

    #[test]
    fn sparse_harmonic_values() {
        let z = TInfElem::sparse_harmonic([], 1, PosGen::Arithmetic { start: 1, step: 1 })
            .unwrap();
        // m = 1 gives 1/1, the identity on the circle
        assert!(z.value_at(1).unwrap().is_zero());
        assert_eq!(z.value_at(2).unwrap().as_rat().cloned(), Some(rat(1, 2)));
        assert_eq!(z.value_at(7).unwrap().as_rat().cloned(), Some(rat(1, 7)));
        assert_eq!(z.l1_summable(), PropertyVerdict::Fails);

        let listed = TInfElem::sparse_harmonic(
            [(1, p(rat(1, 4)))],
            2,
            PosGen::Listed(alloc::vec![3, 9, 27]),
        )
        .unwrap();
        assert_eq!(listed.value_at(1).unwrap().as_rat().cloned(), Some(rat(1, 4)));
        assert_eq!(listed.value_at(9).unwrap().as_rat().cloned(), Some(rat(1, 4)));
        assert_eq!(listed.value_at(27).unwrap().as_rat().cloned(), Some(rat(1, 6)));
        assert!(listed.value_at(5).unwrap().is_zero());
        assert!(listed.value_at(28).is_err());
    }

    #[test]
    fn constant_tail_fails_convergence() {
        let z = TInfElem::constant_tail([], rat(1, 3), 5).unwrap();
        assert!(z.value_at(5).unwrap().is_zero());
        assert_eq!(z.value_at(6).unwrap().as_rat().cloned(), Some(rat(1, 3)));
        assert_eq!(z.tends_to_1(), PropertyVerdict::Fails);
        assert_eq!(z.l1_summable(), PropertyVerdict::Fails);
        // a constant zero tail is just a finite element in disguise
        let w = TInfElem::constant_tail([], rat(0, 1), 5).unwrap();
        assert_eq!(w.tends_to_1(), PropertyVerdict::Holds);
    }

    #[test]
    fn schedule_arithmetic() {
        let g = PosGen::Arithmetic { start: 4, step: 3 };
        assert_eq!(g.position(1).unwrap(), 4);
        assert_eq!(g.position(5).unwrap(), 16);
        assert_eq!(g.index_of(10).unwrap(), Some(3));
        assert_eq!(g.index_of(11).unwrap(), None);
        assert_eq!(g.index_of(1).unwrap(), None);
        let l = PosGen::Listed(alloc::vec![2, 4, 8]);
        assert_eq!(l.index_of(4).unwrap(), Some(2));
        assert_eq!(l.index_of(5).unwrap(), None);
        assert!(l.index_of(9).is_err());
        assert!(PosGen::Listed(alloc::vec![3, 3]).validate().is_err());
    }

    #[test]
    fn prefix_cannot_reach_tail() {
        assert!(TInfElem::dense_tail([(101, p(rat(1, 2)))], 10, 100).is_err());
        assert!(TInfElem::sparse_harmonic(
            [(3, p(rat(1, 2)))],
            1,
            PosGen::Listed(alloc::vec![3, 5])
        )
        .is_err());
    }
}
