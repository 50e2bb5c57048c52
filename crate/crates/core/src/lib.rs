//! Exact verification of p-adic congruences for generalized harmonic numbers.
//!
//! The crate evaluates both sides of classical and extended congruences for
//! `H^(m)_n`, Bernoulli numbers and the base-2 Fermat quotient in exact rational
//! arithmetic, then reports the achieved p-adic valuation of the left-hand side
//! against the exponent the congruence claims.
//!
//! ```
//! use hcl::{congruences, Context};
//!
//! let ctx = Context::new();
//! let verdict = congruences::verify_eisenstein(7, &ctx).unwrap();
//! assert!(verdict.pass);
//! assert_eq!(verdict.lhs, hcl::exact::ratio(119, 6));
//! ```

pub mod bernoulli;
pub mod cli;
pub mod congruences;
pub mod error;
pub mod exact;
pub mod harmonic;
pub mod primes;
pub mod report;
pub mod scan;

pub use error::{Error, Result};

use bernoulli::BernoulliCache;
use harmonic::HarmonicTable;

/// Shared caches threaded through every verifier.
#[derive(Debug, Default)]
pub struct Context {
    pub bernoulli: BernoulliCache,
    pub harmonics: HarmonicTable,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache(bernoulli: BernoulliCache) -> Self {
        Context {
            bernoulli,
            harmonics: HarmonicTable::new(),
        }
    }
}
