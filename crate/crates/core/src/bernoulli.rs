//! Exact Bernoulli numbers and the classical identities built on them.
//!
//! Values come from the recurrence `sum_{k<=n} C(n,k) B_k = (-1)^n B_n`, which
//! fixes `B_1 = -1/2`. Odd indices above one vanish, so only even indices are
//! ever summed; the running sum is kept over a common denominator and reduced
//! once per new index.
//!
//! [`BernoulliCache`] is append-only and may be backed by a text file with one
//! `<index> <numerator>/<denominator>` record per line.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    binomial, format_rational, int, is_prime, parse_rational, pow2, ratio, vp, PrimePower, Rational,
};

pub const DEFAULT_INDEX_CEILING: u64 = 2500;

#[derive(Debug)]
struct Table {
    values: Vec<Rational>,
    // B_k * common_den for even k >= 2, stored at k / 2 - 1.
    scaled_even: Vec<BigInt>,
    // lcm of 2 and every even-index denominator stored so far.
    common_den: BigInt,
    persisted: usize,
}

impl Table {
    fn new() -> Self {
        Table {
            values: vec![int(1), ratio(-1, 2)],
            scaled_even: Vec::new(),
            common_den: BigInt::from(2),
            persisted: 0,
        }
    }

    fn high_water(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    fn push(&mut self, value: Rational) -> Result<()> {
        let n = self.values.len() as u64;
        if n % 2 == 1 {
            if !value.is_zero() {
                return Err(Error::CacheFormat {
                    line: n as usize + 1,
                    reason: format!("B_{n} must vanish"),
                });
            }
            self.values.push(value);
            return Ok(());
        }
        let expected = von_staudt_denominator(n)?;
        if value.denom().magnitude() != &expected {
            return Err(Error::CacheFormat {
                line: n as usize + 1,
                reason: format!(
                    "denominator of B_{n} is {}, Von Staudt-Clausen requires {expected}",
                    value.denom()
                ),
            });
        }
        let den = value.denom().clone();
        let g = self.common_den.gcd(&den);
        let factor = &den / &g;
        if !factor.is_one() {
            for s in &mut self.scaled_even {
                *s *= &factor;
            }
            self.common_den *= &factor;
        }
        self.scaled_even
            .push(value.numer() * (&self.common_den / &den));
        self.values.push(value);
        Ok(())
    }

    /// Next even-index value from the recurrence at `n + 1`, assuming `values` ends at `n - 1`.
    fn next_even(&self) -> Rational {
        let n = self.values.len() as u64;
        debug_assert!(n.is_multiple_of(2) && n >= 2);
        // (n+1) B_n = -(1 - (n+1)/2 + sum_{even 2<=k<=n-2} C(n+1,k) B_k)
        let mut total = BigInt::zero();
        let mut c = BigInt::one();
        let mut k = 0u64;
        for scaled in &self.scaled_even {
            c = c * (n + 1 - k) * (n - k) / ((k + 1) * (k + 2));
            k += 2;
            total += &c * scaled;
        }
        let l = &self.common_den;
        let head = l - (l * (n + 1)) / 2u32;
        Rational::new(-(head + total), l * (n + 1))
    }

    fn extend_to(&mut self, n: u64) -> Result<()> {
        while self.high_water() < n {
            let next = self.values.len() as u64;
            if next % 2 == 1 {
                self.values.push(Rational::zero());
            } else {
                let b = self.next_even();
                self.push(b)?;
            }
        }
        Ok(())
    }
}

/// Index → exact `B_n` store, contiguous from zero.
///
/// Reads take a shared lock; extension takes the write lock, so concurrent
/// readers never observe a partially computed row.
#[derive(Debug)]
pub struct BernoulliCache {
    ceiling: u64,
    table: RwLock<Table>,
    path: Option<PathBuf>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        Self::with_ceiling(DEFAULT_INDEX_CEILING)
    }

    pub fn with_ceiling(ceiling: u64) -> Self {
        BernoulliCache {
            ceiling,
            table: RwLock::new(Table::new()),
            path: None,
        }
    }

    /// Opens a cache backed by `path`, loading existing records if the file exists.
    pub fn open(path: impl AsRef<Path>, ceiling: u64) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut table = Table::new();
        if path.exists() {
            load_records(&path, &mut table)?;
        }
        Ok(BernoulliCache {
            ceiling,
            table: RwLock::new(table),
            path: Some(path),
        })
    }

    pub fn ceiling(&self) -> u64 {
        self.ceiling
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// Largest index currently stored.
    pub fn high_water(&self) -> u64 {
        self.table.read().unwrap().high_water()
    }

    pub fn check_index(&self, n: u64) -> Result<()> {
        if n > self.ceiling {
            Err(Error::IndexCeilingExceeded {
                index: n,
                ceiling: self.ceiling,
            })
        } else {
            Ok(())
        }
    }

    /// Extends the table to cover index `n`.
    pub fn ensure(&self, n: u64) -> Result<()> {
        self.check_index(n)?;
        if self.table.read().unwrap().high_water() >= n {
            return Ok(());
        }
        self.table.write().unwrap().extend_to(n)
    }

    /// Exact `B_n`.
    pub fn get(&self, n: u64) -> Result<Rational> {
        self.ensure(n)?;
        Ok(self.table.read().unwrap().values[n as usize].clone())
    }

    /// `B_0 .. B_n` as one snapshot.
    pub fn range(&self, n: u64) -> Result<Vec<Rational>> {
        self.ensure(n)?;
        Ok(self.table.read().unwrap().values[..=n as usize].to_vec())
    }

    /// Appends every record not yet on disk. No-op for an in-memory cache.
    pub fn persist(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut table = self.table.write().unwrap();
        if table.persisted >= table.values.len() {
            return Ok(());
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut out = BufWriter::new(file);
        for (i, v) in table.values.iter().enumerate().skip(table.persisted) {
            writeln!(out, "{i} {}", format_rational(v))?;
        }
        out.flush()?;
        table.persisted = table.values.len();
        Ok(())
    }
}

fn load_records(path: &Path, table: &mut Table) -> Result<()> {
    let reader = BufReader::new(File::open(path)?);
    let mut loaded = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let bad = |reason: String| Error::CacheFormat {
            line: lineno + 1,
            reason,
        };
        if line.trim().is_empty() {
            continue;
        }
        let (idx, val) = line
            .split_once(' ')
            .ok_or_else(|| bad("expected `<index> <num>/<den>`".into()))?;
        let idx: usize = idx.parse().map_err(|_| bad(format!("bad index {idx:?}")))?;
        if idx != loaded {
            return Err(bad(format!("expected index {loaded}, found {idx}")));
        }
        if !val.contains('/') {
            return Err(bad("value must be written as num/den".into()));
        }
        let value = parse_rational(val).ok_or_else(|| bad(format!("bad rational {val:?}")))?;
        if idx < 2 {
            if value != table.values[idx] {
                return Err(bad(format!(
                    "B_{idx} must be {}",
                    format_rational(&table.values[idx])
                )));
            }
        } else {
            table.push(value).map_err(|e| match e {
                Error::CacheFormat { reason, .. } => bad(reason),
                other => other,
            })?;
        }
        loaded += 1;
    }
    table.persisted = loaded;
    Ok(())
}

/// `B_n` from the recurrence, one index at a time. Used where a cache is not at hand.
pub fn bernoulli(n: u64, cache: &BernoulliCache) -> Result<Rational> {
    cache.get(n)
}

/// Checks `sum_{k<=n} C(n,k) B_k = (-1)^n B_n` exactly.
pub fn check_recurrence(n: u64, cache: &BernoulliCache) -> Result<bool> {
    let b = cache.range(n)?;
    let lhs: Rational = (0..=n).map(|k| int(binomial(n, k)) * &b[k as usize]).sum();
    let rhs = if n.is_multiple_of(2) {
        b[n as usize].clone()
    } else {
        -b[n as usize].clone()
    };
    Ok(lhs == rhs)
}

/// `B_{2k+1} = 0` for `k >= 1`.
pub fn check_odd_vanishing(n: u64, cache: &BernoulliCache) -> Result<bool> {
    let b = cache.range(n)?;
    Ok((3..=n).step_by(2).all(|k| b[k as usize].is_zero()))
}

/// Direct `sum_{j=1}^n j^i`.
pub fn power_sum(n: u64, i: u32) -> BigInt {
    (1..=n)
        .map(|j| num_traits::pow(BigInt::from(j), i as usize))
        .sum()
}

/// `sum_{j=1}^n j^i` by the Faulhaber formula.
pub fn faulhaber_sum(n: u64, i: u64, cache: &BernoulliCache) -> Result<Rational> {
    let b = cache.range(i)?;
    let n = int(n);
    let mut acc = Rational::zero();
    for h in 0..=i {
        let mut term = int(binomial(i + 1, h))
            * &b[h as usize]
            * num_traits::pow(n.clone(), (i + 1 - h) as usize);
        if h % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    Ok(acc / int(i + 1))
}

/// Product of the primes `p` with `(p - 1) | two_j`.
pub fn von_staudt_denominator(two_j: u64) -> Result<BigUint> {
    if two_j == 0 || two_j % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "Von Staudt-Clausen needs a positive even index, got {two_j}"
        )));
    }
    let mut prod = BigUint::one();
    let mut d = 1;
    while d * d <= two_j {
        if two_j.is_multiple_of(d) {
            let e = two_j / d;
            if is_prime(d + 1) {
                prod *= d + 1;
            }
            if e != d && is_prime(e + 1) {
                prod *= e + 1;
            }
        }
        d += 1;
    }
    Ok(prod)
}

/// `B_h/h ≡ B_k/k (mod p)` for `h ≡ k (mod p-1)`, neither divisible by `p-1`.
pub fn check_kummer(h: u64, k: u64, p: u64, cache: &BernoulliCache) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = p - 1;
    if h == 0 || k == 0 {
        return Err(Error::hypothesis("Kummer indices must be positive"));
    }
    if h % m != k % m || h.is_multiple_of(m) {
        return Err(Error::hypothesis(format!(
            "Kummer congruence needs h ≡ k (mod {m}) with {m} dividing neither (h={h}, k={k})"
        )));
    }
    let diff = cache.get(h)? / int(h) - cache.get(k)? / int(k);
    Ok(vp(&diff, p).at_least(1))
}

/// The four binomial sums over even-index Bernoulli numbers, each checked exactly.
pub fn binomial_sum_identities(k: u64, cache: &BernoulliCache) -> Result<[bool; 4]> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    let b = cache.range(2 * k + 2)?;
    let sum = |top: u64| -> Rational {
        (1..=k)
            .map(|j| int(binomial(top, 2 * j - 1)) * &b[2 * j as usize])
            .sum()
    };
    let half = ratio(1, 2);
    let k2 = 2 * k as usize;
    Ok([
        sum(2 * k - 1) == &half + &b[k2] + &b[k2 - 1],
        sum(2 * k) == &half - &b[k2],
        sum(2 * k + 1) == half,
        sum(2 * k + 2) == &half - int(2 * k + 3) * &b[k2 + 2],
    ])
}

pub fn check_lemma_binomial_sums(k: u64, cache: &BernoulliCache) -> Result<bool> {
    Ok(binomial_sum_identities(k, cache)?.iter().all(|&ok| ok))
}

/// `sum_j B_j (2^j - 1) C(k,j) = (-1)^k B_k (1 - 2^k)` and
/// `sum_j B_j 2^j C(k,j) = 2 B_k (1 - 2^{k-1})`.
pub fn check_lemma_weighted_sums(k: u64, cache: &BernoulliCache) -> Result<bool> {
    let b = cache.range(k)?;
    let two_k = int(pow2(k));
    let mut first = Rational::zero();
    let mut second = Rational::zero();
    for j in 0..=k {
        let c = int(binomial(k, j)) * &b[j as usize];
        let tj = int(pow2(j));
        first += &c * (&tj - int(1));
        second += c * tj;
    }
    let bk = &b[k as usize];
    let sign = if k.is_multiple_of(2) { int(1) } else { int(-1) };
    let first_rhs = sign * bk * (int(1) - &two_k);
    let second_rhs = int(2) * bk * (int(1) - two_k / int(2));
    Ok(first == first_rhs && second == second_rhs)
}

/// `sum_{j<2k} C(2k-1,j)(2^j-1)(2^{j+1}-1) B_{j+1}/(j+1) = (2^{2k}-1) B_{2k}/(2k)`.
pub fn check_lemma_tangent_identity(k: u64, cache: &BernoulliCache) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    let b = cache.range(2 * k)?;
    let lhs: Rational = (0..2 * k)
        .map(|j| {
            int(binomial(2 * k - 1, j))
                * int(pow2(j) - 1)
                * int(pow2(j + 1) - 1)
                * &b[j as usize + 1]
                / int(j + 1)
        })
        .sum();
    let rhs = int(pow2(2 * k) - 1) * &b[2 * k as usize] / int(2 * k);
    Ok(lhs == rhs)
}

/// `(p, 2k)` is irregular when `p >= 2k + 3` and `p | B_{2k}`.
pub fn is_irregular_pair(p: u64, two_k: u64, cache: &BernoulliCache) -> Result<bool> {
    if two_k == 0 || two_k % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "{two_k} is not a positive even index"
        )));
    }
    if p < two_k + 3 {
        return Ok(false);
    }
    Ok(vp(&cache.get(two_k)?, p).at_least(1))
}

/// Every irregular pair `(p, 2k)` with `p` prime in `[lo, hi]`.
pub fn irregular_pairs(lo: u64, hi: u64, cache: &BernoulliCache) -> Result<Vec<(u64, u64)>> {
    if hi >= 3 {
        cache.ensure(hi - 3)?;
    }
    let mut out = Vec::new();
    for p in (lo.max(5)..=hi).filter(|&p| is_prime(p)) {
        for two_k in (2..=p - 3).step_by(2) {
            if is_irregular_pair(p, two_k, cache)? {
                out.push((p, two_k));
            }
        }
    }
    Ok(out)
}

/// Residue of `B_n` modulo `p^e` when `B_n` is p-integral.
pub fn bernoulli_mod(n: u64, m: PrimePower, cache: &BernoulliCache) -> Result<BigUint> {
    crate::exact::reduce_mod(&cache.get(n)?, m)
}
