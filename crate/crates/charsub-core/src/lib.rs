//! Exact arithmetic for subgroups of the circle characterized by integer
//! sequences.
//!
//! The library answers questions of the form "which points x of a compact
//! abelian group satisfy (u_n, x) -> 0 for a fixed sequence u of characters?"
//! with verdicts that are certificates, not floating-point guesses:
//!
//! * [`circle`] - points of R/Z as canonical rationals or certified
//!   irrational enclosures, with the chord metric `|1 - e^{2 pi i t}|`.
//! * [`finabel`] - finite abelian groups in invariant-factor form, their
//!   subgroups, annihilators, and quotients via Smith normal form.
//! * [`seq`], [`membership`] - integer sequence specifications, eventually
//!   periodic residue orbits, and three-valued membership verdicts.
//! * [`zinf`], [`tinf`], [`polish`] - the Polish groups of null and
//!   summable circle sequences, their metrics, and the explicit witness
//!   constructions used to separate them.
//! * [`graph`] - graph closures of a sequence action, separating characters,
//!   and neighborhood certificates for the dual-group topology.
//! * [`dioph`] - integer relation detection, simultaneous approximation
//!   search, and l1 word-cancellation checks.
//!
//! Everything is deterministic and allocation-only (`no_std` + `alloc`);
//! randomized exploration lives in callers and test suites.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod circle;
pub mod dioph;
pub mod dyadic;
pub mod error;
pub mod finabel;
pub mod graph;
pub mod harmonic;
pub mod linalg;
pub mod membership;
pub mod polish;
pub mod poly;
pub mod seq;
pub mod surd;
pub mod tinf;
pub mod trig;
pub mod zinf;

pub use error::{Error, Result};

/// Arbitrary-precision rational, the coordinate field for every exact value.
pub type Rat = num_rational::Ratio<num_bigint::BigInt>;

/// Shorthand for `BigInt` construction in tests and examples.
pub fn int(v: i64) -> num_bigint::BigInt {
    num_bigint::BigInt::from(v)
}

/// Rational p/q with exact reduction. Panics on q = 0; use
/// [`circle::canonicalize`] for checked input handling.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(int(p), int(q))
}
