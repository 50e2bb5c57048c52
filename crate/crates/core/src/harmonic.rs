//! Generalized harmonic numbers `H^(m)_n = sum_{j=1}^n j^{-m}`.
//!
//! Two independent routes: an exact rational sum and a residue computed entirely
//! with modular inverses modulo `p^e`. The second exists to cross-check the first.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{PrimePower, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicSpec {
    order: u32,
    upto: u64,
}

impl HarmonicSpec {
    pub fn new(order: u32, upto: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("harmonic order must be >= 1".into()));
        }
        Ok(HarmonicSpec { order, upto })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn upto(&self) -> u64 {
        self.upto
    }
}

/// Exact `H^(m)_n`, summed over the common denominator `lcm(1..n)^m`.
pub fn harmonic(spec: HarmonicSpec) -> Rational {
    let n = spec.upto;
    if n == 0 {
        return Rational::zero();
    }
    let lcm = (1..=n).fold(BigUint::one(), |acc, j| acc.lcm(&BigUint::from(j)));
    let m = spec.order as usize;
    let numer: BigUint = (1..=n).map(|j| num_traits::pow(&lcm / j, m)).sum();
    Rational::new(BigInt::from(numer), BigInt::from(num_traits::pow(lcm, m)))
}

/// `H^(m)_n mod p^e` using only modular arithmetic. Requires `n < p`.
pub fn harmonic_mod(spec: HarmonicSpec, m: PrimePower) -> Result<BigUint> {
    if spec.upto >= m.p() {
        return Err(Error::UpperIndexNotBelowP {
            upto: spec.upto,
            p: m.p(),
        });
    }
    let modulus = m.modulus();
    let exp = BigUint::from(spec.order);
    let mut acc = BigUint::zero();
    for j in 1..=spec.upto {
        let power = BigUint::from(j).modpow(&exp, &modulus);
        let inv = power.modinv(&modulus).expect("j < p is a unit modulo p^e");
        acc = (acc + inv) % &modulus;
    }
    Ok(acc)
}

/// Memo of exact harmonic values keyed by `(order, upto)`.
///
/// Verifiers hit the same handful of upper indices (`p - 1` and `(p - 1) / 2`)
/// at many orders, so values are computed once per run.
#[derive(Debug, Default)]
pub struct HarmonicTable {
    memo: RwLock<HashMap<HarmonicSpec, Rational>>,
}

impl HarmonicTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, order: u32, upto: u64) -> Rational {
        assert!(order >= 1, "harmonic order must be >= 1");
        let spec = HarmonicSpec { order, upto };
        if let Some(v) = self.memo.read().unwrap().get(&spec) {
            return v.clone();
        }
        let v = harmonic(spec);
        self.memo.write().unwrap().entry(spec).or_insert(v).clone()
    }

    pub fn len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
