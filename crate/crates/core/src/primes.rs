//! Prime iteration, Fermat quotients, and the arithmetic lemmas that are
//! congruences rather than identities.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bernoulli::BernoulliCache;
use crate::error::{Error, Result};
use crate::exact::{int, is_prime, p_power, vp, Rational};
use crate::harmonic::HarmonicTable;

/// All primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    let root = (hi as f64).sqrt() as u64 + 1;
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root {
        if small[i as usize] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                small[j as usize] = false;
                j += i;
            }
        }
    }
    let mut segment = vec![true; (hi - lo + 1) as usize];
    for &q in &base {
        let mut start = (lo.div_ceil(q) * q).max(q * q);
        while start <= hi {
            segment[(start - lo) as usize] = false;
            start += q;
        }
    }
    segment
        .iter()
        .enumerate()
        .filter(|(_, &keep)| keep)
        .map(|(off, _)| lo + off as u64)
        .collect()
}

pub(crate) fn require_odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::hypothesis("p must be an odd prime"));
    }
    Ok(())
}

/// Base-2 Fermat quotient `(2^{p-1} - 1) / p`.
pub fn fermat_quotient(p: u64) -> Result<BigInt> {
    require_odd_prime(p)?;
    let num: BigInt = (BigInt::one() << (p - 1)) - 1;
    let (q, r) = num.div_rem(&BigInt::from(p));
    debug_assert!(r.is_zero());
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeClass {
    pub p: u64,
    pub is_wieferich: bool,
    pub is_mersenne: bool,
    pub fermat_quotient: BigInt,
}

pub fn classify(p: u64) -> Result<PrimeClass> {
    let q = fermat_quotient(p)?;
    Ok(PrimeClass {
        p,
        is_wieferich: q.is_multiple_of(&BigInt::from(p)),
        is_mersenne: (p + 1).is_power_of_two(),
        fermat_quotient: q,
    })
}

/// `j! C(N - i, j) ≡ (-1)^j j! C(i + j - 1, j) (mod p^{n-1})` with `N = p^{n-1}(p-1)`.
///
/// Both sides are evaluated as falling/rising factorials, so `N - i < j` is fine.
pub fn check_lemma_binom(p: u64, n: u32, i: u64, j: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let modulus = num_traits::pow(BigInt::from(p), (n - 1) as usize);
    let top = BigInt::from(p).pow(n - 1) * (p - 1) - i;
    let falling: BigInt = (0..j).map(|t| &top - t).product();
    let rising: BigInt = (0..j).map(|t| BigInt::from(i + t)).product();
    let rhs = if j.is_multiple_of(2) { rising } else { -rising };
    Ok((falling - rhs).is_multiple_of(&modulus))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PbVerdict {
    /// `p B_N ≡ p - 1 (mod p^n)`
    pub top_index: bool,
    /// `p B_{N-2h} ≡ H^(2h)_{p-1} (mod p)`, present for `h >= 1`.
    pub shifted_index: Option<bool>,
}

impl PbVerdict {
    pub fn holds(&self) -> bool {
        self.top_index && self.shifted_index.unwrap_or(true)
    }
}

/// The two `p B` congruences at `N = p^{n-1}(p-1)`.
pub fn check_lemma_pb(
    p: u64,
    n: u32,
    h: u64,
    cache: &BernoulliCache,
    harmonics: &HarmonicTable,
) -> Result<PbVerdict> {
    require_odd_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let top = euler_index(p, n)?;
    cache.check_index(top)?;
    let pr = int(p);
    let top_diff = &pr * cache.get(top)? - int(p - 1);
    let top_ok = vp(&top_diff, p).at_least(n as i64);
    let shifted = if h == 0 {
        None
    } else {
        if top < 2 * h + 2 {
            return Err(Error::hypothesis(format!(
                "index {top} - 2·{h} must be at least 2"
            )));
        }
        let diff = &pr * cache.get(top - 2 * h)? - harmonics.get(2 * h as u32, p - 1);
        Some(vp(&diff, p).at_least(1))
    };
    Ok(PbVerdict {
        top_index: top_ok,
        shifted_index: shifted,
    })
}

/// `p^{n-1}(p-1)`, the exponent in Euler's theorem modulo `p^n`.
pub fn euler_index(p: u64, n: u32) -> Result<u64> {
    p.checked_pow(n.saturating_sub(1))
        .and_then(|x| x.checked_mul(p - 1))
        .ok_or_else(|| Error::InvalidArgument(format!("p^(n-1)(p-1) overflows for p={p}, n={n}")))
}

/// `(2^N - 1) / p^n mod p^n`, with `N = p^{n-1}(p-1)`.
///
/// Only `2^N mod p^{2n}` is needed: `p^n` divides `2^N - 1`, and the quotient
/// modulo `p^n` is determined by the dividend modulo `p^{2n}`.
pub fn fermat_expansion_residue(p: u64, n: u32) -> Result<BigUint> {
    require_odd_prime(p)?;
    let big_p = BigUint::from(p);
    let pn = num_traits::pow(big_p.clone(), n as usize);
    let p2n = &pn * &pn;
    let power = BigUint::from(2u32).modpow(&BigUint::from(euler_index(p, n)?), &p2n);
    let dividend = (power + &p2n - 1u32) % &p2n;
    let (quotient, rem) = dividend.div_rem(&pn);
    if !rem.is_zero() {
        return Err(Error::hypothesis(format!(
            "{p}^{n} does not divide 2^N - 1"
        )));
    }
    Ok(quotient % pn)
}

/// Exact integer `(2^N - 1) / p^n`. Feasible only for small `N`.
pub fn fermat_expansion_exact(p: u64, n: u32) -> Result<BigInt> {
    require_odd_prime(p)?;
    let big_n = euler_index(p, n)?;
    let num: BigInt = (BigInt::one() << big_n) - 1;
    let pn = num_traits::pow(BigInt::from(p), n as usize);
    let (q, r) = num.div_rem(&pn);
    if !r.is_zero() {
        return Err(Error::hypothesis(format!(
            "{p}^{n} does not divide 2^N - 1"
        )));
    }
    Ok(q)
}

/// Right-hand side of the Fermat-quotient expansion modulo `p^n`:
/// `sum_{j<n} (-1)^j q^{j+1} p^j / (j+1) + [p = n+1] q p^{n-1}`.
pub fn fermat_expansion_series(p: u64, n: u32) -> Result<Rational> {
    let q = int(fermat_quotient(p)?);
    let mut acc = Rational::zero();
    let mut q_pow = q.clone();
    for j in 0..n as u64 {
        let term = &q_pow * p_power(p, j as i64) / int(j + 1);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        q_pow *= &q;
    }
    if p == n as u64 + 1 {
        acc += q * p_power(p, n as i64 - 1);
    }
    Ok(acc)
}

pub fn check_fermat_expansion(p: u64, n: u32) -> Result<bool> {
    require_odd_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if 2 * p <= n as u64 + 1 {
        return Err(Error::hypothesis(format!(
            "need p > (n+1)/2, got p={p}, n={n}"
        )));
    }
    let lhs = int(BigInt::from(fermat_expansion_residue(p, n)?));
    let rhs = fermat_expansion_series(p, n)?;
    Ok(vp(&(lhs - rhs), p).at_least(n as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_primes(lo: u64, hi: u64) -> Vec<u64> {
        (lo..=hi)
            .filter(|&n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn prime_ranges() {
        assert_eq!(primes_in(2, 2), vec![2]);
        assert_eq!(primes_in(3, 12), vec![3, 5, 7, 11]);
        assert_eq!(primes_in(1000, 1100).len(), 16);
        assert_eq!(primes_in(1000, 1100), trial_division_primes(1000, 1100));
        assert_eq!(primes_in(0, 1), Vec::<u64>::new());
        assert_eq!(primes_in(10, 5), Vec::<u64>::new());
        assert_eq!(primes_in(0, 5000), trial_division_primes(0, 5000));
    }

    #[test]
    fn fermat_quotients() {
        assert_eq!(fermat_quotient(3).unwrap(), BigInt::from(1));
        assert_eq!(fermat_quotient(5).unwrap(), BigInt::from(3));
        assert_eq!(fermat_quotient(7).unwrap(), BigInt::from(9));
        assert!(fermat_quotient(2).is_err());
        assert!(fermat_quotient(9).is_err());
        for p in primes_in(3, 500) {
            let q = fermat_quotient(p).unwrap();
            assert_eq!((BigInt::one() << (p - 1)), BigInt::one() + q * p);
        }
    }

    #[test]
    fn classification() {
        assert!(classify(1093).unwrap().is_wieferich);
        assert!(classify(3511).unwrap().is_wieferich);
        assert!(classify(31).unwrap().is_mersenne);
        assert!(!classify(7).unwrap().is_wieferich);
        assert!(classify(7).unwrap().is_mersenne);
        assert!(!classify(11).unwrap().is_mersenne);
        let wieferich: Vec<u64> = primes_in(3, 4000)
            .into_iter()
            .filter(|&p| classify(p).unwrap().is_wieferich)
            .collect();
        assert_eq!(wieferich, vec![1093, 3511]);
    }

    #[test]
    fn lemma_binom_examples() {
        assert!(check_lemma_binom(13, 1, 3, 5).unwrap());
        assert!(check_lemma_binom(5, 2, 1, 3).unwrap());
        assert!(check_lemma_binom(7, 3, 2, 4).unwrap());
    }

    #[test]
    fn lemma_binom_grid() {
        for p in primes_in(2, 31) {
            for n in 1..=3 {
                for i in 0..=4 {
                    for j in 0..=6 {
                        assert!(
                            check_lemma_binom(p, n, i, j).unwrap(),
                            "p={p} n={n} i={i} j={j}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn lemma_pb_examples() {
        let cache = BernoulliCache::new();
        let h = HarmonicTable::new();
        // B_20 = -174611/330
        let v = check_lemma_pb(5, 2, 0, &cache, &h).unwrap();
        assert!(v.top_index && v.shifted_index.is_none());
        assert!(check_lemma_pb(3, 2, 1, &cache, &h).unwrap().holds());
        assert!(check_lemma_pb(7, 1, 1, &cache, &h).unwrap().holds());
        assert!(check_lemma_pb(3, 1, 1, &cache, &h).is_err());
    }

    #[test]
    fn lemma_pb_ceiling() {
        let cache = BernoulliCache::with_ceiling(100);
        let h = HarmonicTable::new();
        assert!(matches!(
            check_lemma_pb(11, 2, 1, &cache, &h),
            Err(Error::IndexCeilingExceeded { index: 110, .. })
        ));
    }

    #[test]
    fn fermat_expansion_examples() {
        assert!(check_fermat_expansion(3, 1).unwrap());
        assert_eq!(fermat_expansion_exact(5, 2).unwrap(), BigInt::from(41943));
        assert!(check_fermat_expansion(5, 2).unwrap());
        assert!(check_fermat_expansion(3, 2).unwrap());
        assert!(matches!(
            check_fermat_expansion(3, 5),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn delta_term_is_needed_at_p_equal_n_plus_one() {
        // Without the correction the p = n + 1 case fails.
        for (p, n) in [(3u64, 2u32), (5, 4), (7, 6)] {
            let lhs = int(BigInt::from(fermat_expansion_residue(p, n).unwrap()));
            let full = fermat_expansion_series(p, n).unwrap();
            let q = int(fermat_quotient(p).unwrap());
            let without = &full - q * p_power(p, n as i64 - 1);
            assert!(vp(&(&lhs - full), p).at_least(n as i64));
            assert!(!vp(&(lhs - without), p).at_least(n as i64), "p={p} n={n}");
        }
    }

    #[test]
    fn residue_route_matches_exact_division() {
        for p in primes_in(3, 23) {
            for n in 1..=3 {
                if euler_index(p, n).unwrap() > 20_000 {
                    continue;
                }
                let pn = num_traits::pow(BigInt::from(p), n as usize);
                let exact = fermat_expansion_exact(p, n).unwrap().mod_floor(&pn);
                assert_eq!(BigInt::from(fermat_expansion_residue(p, n).unwrap()), exact);
            }
        }
    }

    #[test]
    fn fermat_expansion_grid() {
        for p in primes_in(3, 101) {
            for n in 1..=6u32 {
                if 2 * p > n as u64 + 1 {
                    assert!(check_fermat_expansion(p, n).unwrap(), "p={p} n={n}");
                }
            }
        }
    }
}
