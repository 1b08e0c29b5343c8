//! Character sequences: closed-form integer sequences over the dual of T,
//! and eventually-periodic character sequences over finite-group duals.
//!
//! The decision engine for rational membership is `residue_orbit`: every
//! closed-form variant is eventually periodic modulo any q >= 1, with a
//! minimal preperiod and cycle found by state-map cycle detection followed
//! by period/preperiod minimization.

use crate::error::{precondition, Error, Result};
use crate::finabel::{Character, FinAbGroup};
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// State-space cap for cycle detection.
const ORBIT_STATE_CAP: usize = 1 << 20;

/// Eventually-periodic character sequence over a finite group's dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPerSeq {
    pub group: FinAbGroup,
    pub prefix: Vec<Character>,
    pub period: Vec<Character>,
}

impl FinPerSeq {
    pub fn new(group: FinAbGroup, prefix: Vec<Character>, period: Vec<Character>) -> Result<Self> {
        if period.is_empty() {
            return Err(precondition("period must be nonempty"));
        }
        for c in prefix.iter().chain(&period) {
            if c.coords.len() != group.rank() {
                return Err(Error::ShapeMismatch { expected: group.rank(), got: c.coords.len() });
            }
        }
        Ok(FinPerSeq { group, prefix, period })
    }

    pub fn term(&self, n: u64) -> &Character {
        let n = n as usize;
        if n < self.prefix.len() {
            &self.prefix[n]
        } else {
            &self.period[(n - self.prefix.len()) % self.period.len()]
        }
    }

    /// Minimal preperiod and period representing the same sequence.
    pub fn canonicalize(&self) -> FinPerSeq {
        let plen = self.period.len();
        let mut best = plen;
        for l in 1..plen {
            if plen % l == 0 && (0..plen).all(|t| self.period[t] == self.period[t % l]) {
                best = l;
                break;
            }
        }
        let period: Vec<Character> = self.period[..best].to_vec();
        let prefix = self.prefix.clone();
        if let Some(last) = prefix.last() {
            // the last prefix term joins the cycle when it equals the value
            // the cycle places one step before its start; rotate and recurse
            if *last == period[best - 1] {
                let mut rot = Vec::with_capacity(best);
                rot.push(last.clone());
                rot.extend_from_slice(&period[..best - 1]);
                return FinPerSeq {
                    group: self.group.clone(),
                    prefix: prefix[..prefix.len() - 1].to_vec(),
                    period: rot,
                }
                .canonicalize();
            }
        }
        FinPerSeq { group: self.group.clone(), prefix, period }
    }

    /// True when all but finitely many terms are the zero character.
    pub fn is_eventually_zero(&self) -> bool {
        self.period.iter().all(|c| c.coords.iter().all(|&v| v == 0))
    }
}

/// A character sequence: integer-valued closed forms over the dual of T,
/// an explicit finite prefix, or a finite-group eventually-periodic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqSpec {
    /// u_n known only for n < terms.len()
    Explicit { terms: Vec<BigInt> },
    /// u_n = a * q^n, q != 0
    Geometric { a: BigInt, q: BigInt },
    /// u_n = a * n!
    Factorial { a: BigInt },
    /// u_n = sum_j coeffs[j] * u_{n-1-j}, seeded by init
    Recurrence { coeffs: Vec<BigInt>, init: Vec<BigInt> },
    /// eventually-periodic character sequence over a finite group
    FinPer(FinPerSeq),
}

/// A sequence term: integer character of T, or finite-group character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Int(BigInt),
    Char(Character),
}

/// Minimal eventually-periodic description of u_n mod q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueOrbit {
    pub modulus: BigInt,
    pub preperiod: u64,
    pub cycle: Vec<BigInt>,
    /// residues u_0, ..., u_{preperiod-1}
    pub head: Vec<BigInt>,
}

impl ResidueOrbit {
    pub fn residue(&self, n: u64) -> &BigInt {
        if (n as usize) < self.head.len() {
            &self.head[n as usize]
        } else {
            &self.cycle[(n as usize - self.head.len()) % self.cycle.len()]
        }
    }

    pub fn cycle_is_zero(&self) -> bool {
        self.cycle.iter().all(Zero::is_zero)
    }
}

impl SeqSpec {
    pub fn geometric(a: i64, q: i64) -> Result<SeqSpec> {
        if q == 0 {
            return Err(precondition("geometric ratio must be nonzero"));
        }
        Ok(SeqSpec::Geometric { a: BigInt::from(a), q: BigInt::from(q) })
    }

    pub fn factorial(a: i64) -> SeqSpec {
        SeqSpec::Factorial { a: BigInt::from(a) }
    }

    pub fn recurrence(coeffs: Vec<BigInt>, init: Vec<BigInt>) -> Result<SeqSpec> {
        if coeffs.is_empty() || coeffs.len() != init.len() {
            return Err(precondition("recurrence needs matching nonempty coefficient and seed lists"));
        }
        if coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            return Err(precondition("trailing recurrence coefficient must be nonzero"));
        }
        Ok(SeqSpec::Recurrence { coeffs, init })
    }

    pub fn explicit(terms: Vec<BigInt>) -> SeqSpec {
        SeqSpec::Explicit { terms }
    }

    pub fn is_integer_valued(&self) -> bool {
        !matches!(self, SeqSpec::FinPer(_))
    }

    /// Exact integer term; errors on finite-group sequences and beyond the
    /// end of an explicit prefix.
    pub fn eval_int(&self, n: u64) -> Result<BigInt> {
        match self {
            SeqSpec::Explicit { terms } => terms
                .get(n as usize)
                .cloned()
                .ok_or_else(|| precondition("index beyond explicit prefix")),
            SeqSpec::Geometric { a, q } => {
                let mut p = BigInt::from(1);
                let mut base = q.clone();
                let mut e = n;
                while e > 0 {
                    if e & 1 == 1 {
                        p = &p * &base;
                    }
                    base = &base * &base;
                    e >>= 1;
                }
                Ok(a * p)
            }
            SeqSpec::Factorial { a } => {
                let mut p = BigInt::from(1);
                for k in 1..=n {
                    p *= BigInt::from(k);
                }
                Ok(a * p)
            }
            SeqSpec::Recurrence { coeffs, init } => {
                let k = coeffs.len();
                if (n as usize) < k {
                    return Ok(init[n as usize].clone());
                }
                let mut window: Vec<BigInt> = init.clone();
                for _ in k..=(n as usize) {
                    let mut next = BigInt::zero();
                    for (j, c) in coeffs.iter().enumerate() {
                        next += c * &window[k - 1 - j];
                    }
                    window.rotate_left(1);
                    window[k - 1] = next;
                }
                Ok(window[k - 1].clone())
            }
            SeqSpec::FinPer(_) => Err(Error::WrongSequenceKind { expected: "integer-valued" }),
        }
    }

    /// Exact finite-group term; errors on integer-valued sequences.
    pub fn eval_char(&self, n: u64) -> Result<Character> {
        match self {
            SeqSpec::FinPer(f) => Ok(f.term(n).clone()),
            _ => Err(Error::WrongSequenceKind { expected: "finite-group" }),
        }
    }

    pub fn eval_term(&self, n: u64) -> Result<Term> {
        match self {
            SeqSpec::FinPer(f) => Ok(Term::Char(f.term(n).clone())),
            _ => self.eval_int(n).map(Term::Int),
        }
    }

    /// Minimal residue orbit of u_n mod q. Errors for explicit prefixes
    /// (no decidable tail) and finite-group sequences.
    pub fn residue_orbit(&self, q: &BigInt) -> Result<ResidueOrbit> {
        if q.is_zero() || q.is_negative() {
            return Err(precondition("modulus must be >= 1"));
        }
        match self {
            SeqSpec::Explicit { .. } => {
                Err(Error::WrongSequenceKind { expected: "closed-form" })
            }
            SeqSpec::FinPer(_) => Err(Error::WrongSequenceKind { expected: "integer-valued" }),
            SeqSpec::Geometric { a, q: base } => {
                let step = |st: &Vec<BigInt>| -> Vec<BigInt> { vec![(&st[0] * base).mod_floor(q)] };
                let init = vec![a.mod_floor(q)];
                orbit_from_state_machine(q, init, step, |st| st[0].clone())
            }
            SeqSpec::Factorial { a } => {
                // state = (residue, next multiplier mod q)
                let step = |st: &Vec<BigInt>| -> Vec<BigInt> {
                    let r = (&st[0] * &st[1]).mod_floor(q);
                    let mult = (&st[1] + 1u32).mod_floor(q);
                    vec![r, mult]
                };
                let init = vec![a.mod_floor(q), BigInt::from(1).mod_floor(q)];
                orbit_from_state_machine(q, init, step, |st| st[0].clone())
            }
            SeqSpec::Recurrence { coeffs, init } => {
                let k = coeffs.len();
                let step = |st: &Vec<BigInt>| -> Vec<BigInt> {
                    let mut next = BigInt::zero();
                    for (j, c) in coeffs.iter().enumerate() {
                        next += c * &st[k - 1 - j];
                    }
                    let mut out: Vec<BigInt> = st[1..].to_vec();
                    out.push(next.mod_floor(q));
                    out
                };
                let init: Vec<BigInt> = init.iter().map(|v| v.mod_floor(q)).collect();
                orbit_from_state_machine(q, init, step, |st| st[0].clone())
            }
        }
    }

    /// Certificate that the tail is identically zero: Some(n0) means
    /// u_n = 0 for all n >= n0; None means no such certificate was found
    /// (which is a proof of "not eventually zero" for the closed forms
    /// where the zero state is absorbing and was excluded).
    pub fn eventually_zero_from(&self) -> Option<u64> {
        match self {
            SeqSpec::Explicit { .. } => None,
            SeqSpec::Geometric { a, .. } => a.is_zero().then_some(0),
            SeqSpec::Factorial { a } => a.is_zero().then_some(0),
            SeqSpec::Recurrence { coeffs, init } => {
                // the all-zero window is absorbing; it can only be entered
                // within the first len(init) steps of losing all memory of
                // nonzero seeds, so a bounded scan decides conservatively
                let k = coeffs.len();
                let mut window = init.clone();
                for n in 0..(4 * k as u64 + 64) {
                    if window.iter().all(Zero::is_zero) {
                        return Some(n);
                    }
                    let mut next = BigInt::zero();
                    for (j, c) in coeffs.iter().enumerate() {
                        next += c * &window[k - 1 - j];
                    }
                    window.rotate_left(1);
                    window[k - 1] = next;
                }
                None
            }
            SeqSpec::FinPer(f) => f
                .is_eventually_zero()
                .then_some(f.prefix.len() as u64),
        }
    }

    /// gcd of the full term set, exact for closed forms: the subgroup of Z
    /// generated by the terms is gcd * Z.
    pub fn terms_gcd(&self) -> Option<BigInt> {
        match self {
            SeqSpec::Explicit { .. } => None,
            SeqSpec::Geometric { a, .. } => Some(a.abs()),
            SeqSpec::Factorial { a } => Some(a.abs()),
            SeqSpec::Recurrence { coeffs: _, init } => {
                let mut g = BigInt::zero();
                for v in init {
                    g = g.gcd(v);
                }
                Some(g)
            }
            SeqSpec::FinPer(_) => None,
        }
    }

    /// Input-literal rendering, matching the CLI grammar.
    pub fn literal(&self) -> String {
        let join = |vs: &[BigInt]| -> String {
            let mut s = String::new();
            for (i, v) in vs.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{v}");
            }
            s
        };
        match self {
            SeqSpec::Explicit { terms } => {
                let mut s = String::from("explicit([");
                s.push_str(&join(terms));
                s.push_str("])");
                s
            }
            SeqSpec::Geometric { a, q } => {
                let mut s = String::from("geometric(");
                let _ = write!(s, "{a},{q}");
                s.push(')');
                s
            }
            SeqSpec::Factorial { a } => {
                let mut s = String::from("factorial(");
                let _ = write!(s, "{a}");
                s.push(')');
                s
            }
            SeqSpec::Recurrence { coeffs, init } => {
                let mut s = String::from("recurrence([");
                s.push_str(&join(coeffs));
                s.push_str("],[");
                s.push_str(&join(init));
                s.push_str("])");
                s
            }
            SeqSpec::FinPer(f) => {
                let mut s = String::from("finper(");
                for (i, &d) in f.group.factors().iter().enumerate() {
                    if i > 0 {
                        s.push_str(" x ");
                    }
                    let _ = write!(s, "Z{d}");
                }
                let coords = |c: &Character| -> String {
                    let mut s = String::new();
                    if c.coords.len() == 1 {
                        let _ = write!(s, "{}", c.coords[0]);
                    } else {
                        s.push('(');
                        for (i, v) in c.coords.iter().enumerate() {
                            if i > 0 {
                                s.push(',');
                            }
                            let _ = write!(s, "{v}");
                        }
                        s.push(')');
                    }
                    s
                };
                s.push_str(", prefix=[");
                for (i, c) in f.prefix.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    s.push_str(&coords(c));
                }
                s.push_str("], period=[");
                for (i, c) in f.period.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    s.push_str(&coords(c));
                }
                s.push_str("])");
                s
            }
        }
    }
}

/// Run a deterministic state machine until a state repeats, then minimize
/// the observed residue sequence to its least preperiod and period.
fn orbit_from_state_machine<F, P>(
    q: &BigInt,
    init: Vec<BigInt>,
    step: F,
    project: P,
) -> Result<ResidueOrbit>
where
    F: Fn(&Vec<BigInt>) -> Vec<BigInt>,
    P: Fn(&Vec<BigInt>) -> BigInt,
{
    let mut seen: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
    let mut outputs: Vec<BigInt> = Vec::new();
    let mut state = init;
    let (start, period) = loop {
        if let Some(&at) = seen.get(&state) {
            break (at, outputs.len() - at);
        }
        if seen.len() >= ORBIT_STATE_CAP {
            return Err(Error::BudgetExhausted(String::from(
                "residue state space exceeded the detection cap",
            )));
        }
        seen.insert(state.clone(), outputs.len());
        outputs.push(project(&state));
        state = step(&state);
    };
    // minimize the period over divisors
    let cycle = &outputs[start..start + period];
    let mut plen = period;
    for l in 1..period {
        if period % l == 0 && (0..period).all(|t| cycle[t] == cycle[t % l]) {
            plen = l;
            break;
        }
    }
    // minimize the preperiod
    let mut n0 = start;
    while n0 > 0 && outputs[n0 - 1] == outputs[n0 - 1 + plen] {
        n0 -= 1;
    }
    Ok(ResidueOrbit {
        modulus: q.clone(),
        preperiod: n0 as u64,
        cycle: outputs[n0..n0 + plen].to_vec(),
        head: outputs[..n0].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn orbit(u: &SeqSpec, q: i64) -> ResidueOrbit {
        u.residue_orbit(&int(q)).unwrap()
    }

    #[test]
    fn closed_form_terms() {
        assert_eq!(SeqSpec::geometric(1, 2).unwrap().eval_int(10).unwrap(), int(1024));
        assert_eq!(SeqSpec::factorial(1).eval_int(4).unwrap(), int(24));
        let fib = SeqSpec::recurrence(vec![int(1), int(1)], vec![int(0), int(1)]).unwrap();
        assert_eq!(fib.eval_int(10).unwrap(), int(55));
        assert_eq!(fib.eval_int(0).unwrap(), int(0));
        let ex = SeqSpec::explicit(vec![int(5), int(8), int(13)]);
        assert_eq!(ex.eval_int(2).unwrap(), int(13));
        assert!(ex.eval_int(3).is_err());
    }

    #[test]
    fn geometric_orbits() {
        let u = SeqSpec::geometric(1, 2).unwrap();
        let o = orbit(&u, 3);
        assert_eq!(o.preperiod, 0);
        assert_eq!(o.cycle, vec![int(1), int(2)]);
        let o = orbit(&u, 1);
        assert_eq!(o.cycle, vec![int(0)]);
        // 2^n mod 12: 1, 2, 4, 8, 4, 8, ... preperiod 2, cycle (4, 8)
        let o = orbit(&u, 12);
        assert_eq!(o.preperiod, 2);
        assert_eq!(o.head, vec![int(1), int(2)]);
        assert_eq!(o.cycle, vec![int(4), int(8)]);
    }

    #[test]
    fn factorial_orbit_mod_7() {
        let o = orbit(&SeqSpec::factorial(1), 7);
        assert_eq!(o.preperiod, 7);
        assert_eq!(o.cycle, vec![int(0)]);
        // head = n! mod 7 for n = 0..6: 1 1 2 6 3 1 6
        assert_eq!(o.head, vec![int(1), int(1), int(2), int(6), int(3), int(1), int(6)]);
    }

    #[test]
    fn recurrence_orbit_matches_direct_evaluation() {
        let fib = SeqSpec::recurrence(vec![int(1), int(1)], vec![int(0), int(1)]).unwrap();
        let o = orbit(&fib, 8);
        // Pisano period mod 8 is 12
        assert_eq!(o.preperiod, 0);
        assert_eq!(o.cycle.len(), 12);
        for n in 0..40u64 {
            let direct = fib.eval_int(n).unwrap().mod_floor(&int(8));
            assert_eq!(*o.residue(n), direct, "mismatch at n = {n}");
        }
    }

    #[test]
    fn orbit_minimality() {
        // u_n = n mod 2 embedded with a redundant longer description:
        // direct orbit of u_n = n: cycle length q, preperiod 0
        let u = SeqSpec::recurrence(vec![int(2), int(-1)], vec![int(0), int(1)]).unwrap();
        assert_eq!(u.eval_int(10).unwrap(), int(10));
        let o = orbit(&u, 4);
        assert_eq!(o.preperiod, 0);
        assert_eq!(o.cycle, vec![int(0), int(1), int(2), int(3)]);
        // constant sequence: cycle must shrink to length 1
        let c = SeqSpec::recurrence(vec![int(1)], vec![int(5)]).unwrap();
        let o = orbit(&c, 3);
        assert_eq!(o.preperiod, 0);
        assert_eq!(o.cycle, vec![int(2)]);
    }

    #[test]
    fn eventually_zero_detection() {
        assert_eq!(SeqSpec::geometric(0, 5).unwrap().eventually_zero_from(), Some(0));
        assert_eq!(SeqSpec::geometric(3, 5).unwrap().eventually_zero_from(), None);
        assert_eq!(SeqSpec::factorial(0).eventually_zero_from(), Some(0));
        // dies after the seed: u_n = 0 * u_{n-1} with nonzero seed
        let u = SeqSpec::Recurrence { coeffs: vec![int(0), int(1)], init: vec![int(3), int(4)] };
        assert_eq!(u.eventually_zero_from(), None); // keeps echoing seeds
        let v = SeqSpec::explicit(vec![int(0)]);
        assert_eq!(v.eventually_zero_from(), None);
    }

    #[test]
    fn structural_gcd() {
        assert_eq!(SeqSpec::geometric(6, 2).unwrap().terms_gcd(), Some(int(6)));
        assert_eq!(SeqSpec::factorial(-3).terms_gcd(), Some(int(3)));
        let r = SeqSpec::recurrence(vec![int(1), int(1)], vec![int(4), int(6)]).unwrap();
        assert_eq!(r.terms_gcd(), Some(int(2)));
        assert_eq!(SeqSpec::explicit(vec![int(2)]).terms_gcd(), None);
    }

    #[test]
    fn finper_terms_and_canonical_form() {
        let g = FinAbGroup::from_invariant_factors(&[4]).unwrap();
        let ch = |v: i64| g.character(&[v]).unwrap();
        let u = FinPerSeq::new(g.clone(), vec![ch(1)], vec![ch(2), ch(2)]).unwrap();
        assert_eq!(*u.term(0), ch(1));
        assert_eq!(*u.term(1), ch(2));
        assert_eq!(*u.term(100), ch(2));
        let c = u.canonicalize();
        assert_eq!(c.period.len(), 1);
        assert_eq!(c.prefix.len(), 1);
        // prefix that already agrees with the cycle gets absorbed
        let v = FinPerSeq::new(g.clone(), vec![ch(2)], vec![ch(2)]).unwrap();
        let c = v.canonicalize();
        assert_eq!(c.prefix.len(), 0);
        assert_eq!(c.period.len(), 1);
        assert!(!u.is_eventually_zero());
        let zp = vec![ch(1)];
        let zper = vec![ch(0)];
        let z = FinPerSeq::new(g, zp, zper).unwrap();
        assert!(z.is_eventually_zero());
    }

    #[test]
    fn literals_round_out() {
        assert_eq!(SeqSpec::geometric(1, 2).unwrap().literal(), "geometric(1,2)");
        assert_eq!(SeqSpec::factorial(1).literal(), "factorial(1)");
        let fib = SeqSpec::recurrence(vec![int(1), int(1)], vec![int(0), int(1)]).unwrap();
        assert_eq!(fib.literal(), "recurrence([1,1],[0,1])");
        assert_eq!(SeqSpec::explicit(vec![int(5), int(8), int(13)]).literal(), "explicit([5,8,13])");
    }
}
