//! Exact integer and rational arithmetic with p-adic valuation semantics.
//!
//! Every congruence in this crate is a statement about rationals: `x ≡ y (mod p^e)`
//! means `v_p(x - y) >= e`. The helpers here are the only place that definition
//! lives; verifiers build a left-hand side and ask [`vp`] for its valuation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// p-adic valuation of a rational. `Infinite` is reserved for zero and orders
/// above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// True when the valuation reaches `exponent`.
    pub fn at_least(self, exponent: i64) -> bool {
        self >= Valuation::Finite(exponent)
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// The modulus `p^e` of a congruence claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    p: u64,
    e: u32,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidArgument(
                "prime power exponent must be >= 1".into(),
            ));
        }
        Ok(PrimePower { p, e })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.e as usize)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.e)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for every `u64`.
///
/// Miller-Rabin with the first twelve prime bases has no pseudoprimes below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exponent of `p` in a nonzero integer; `None` for zero.
pub fn vp_int(x: &BigInt, p: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let p = BigUint::from(p);
    let mut m = x.magnitude().clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation `v_p(num) - v_p(den)`.
pub fn vp(x: &Rational, p: u64) -> Valuation {
    match vp_int(x.numer(), p) {
        None => Valuation::Infinite,
        Some(vn) => {
            let vd = vp_int(x.denom(), p).unwrap_or(0);
            Valuation::Finite(vn as i64 - vd as i64)
        }
    }
}

/// `x ≡ y (mod p^e)` in the valuation sense.
pub fn congruent_mod(x: &Rational, y: &Rational, m: PrimePower) -> bool {
    vp(&(x - y), m.p).at_least(m.e as i64)
}

/// Residue of a p-integral rational in `[0, p^e)`.
pub fn reduce_mod(x: &Rational, m: PrimePower) -> Result<BigUint> {
    if let Valuation::Finite(v) = vp(x, m.p) {
        if v < 0 {
            return Err(Error::NotPIntegral {
                p: m.p,
                valuation: v,
            });
        }
    }
    let modulus = BigInt::from(m.modulus());
    let den_inv = x
        .denom()
        .modinv(&modulus)
        .expect("denominator of a p-integral rational is a unit mod p^e");
    let r = (x.numer().mod_floor(&modulus) * den_inv).mod_floor(&modulus);
    Ok(r.to_biguint().expect("mod_floor is nonnegative"))
}

/// Sum of the base-`p` digits of `j`.
pub fn digit_sum(mut j: u64, p: u64) -> u64 {
    let mut s = 0;
    while j > 0 {
        s += j % p;
        j /= p;
    }
    s
}

/// `v_p(j!)` by summing `floor(j / p^k)`.
pub fn factorial_valuation(j: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = j / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    v
}

/// Compares the two routes to `v_p(j!)`: the floor sum and `(j - s_p(j)) / (p - 1)`.
pub fn check_legendre(j: u64, p: u64) -> bool {
    let digits = digit_sum(j, p);
    (j - digits).is_multiple_of(p - 1) && factorial_valuation(j, p) == (j - digits) / (p - 1)
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for t in 0..k {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

/// Binomial coefficient with a signed upper argument, `C(n, k) = n(n-1)...(n-k+1)/k!`.
pub fn binomial_signed(n: i64, k: u64) -> BigInt {
    if n >= 0 {
        return BigInt::from(binomial(n as u64, k));
    }
    // C(-m, k) = (-1)^k C(m + k - 1, k)
    let m = n.unsigned_abs();
    let b = BigInt::from(binomial(m + k - 1, k));
    if k % 2 == 1 {
        -b
    } else {
        b
    }
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `n / d` reduced. Panics on a zero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// `base^e` for a nonnegative exponent.
pub fn pow_rational(base: &Rational, e: u64) -> Rational {
    num_traits::pow(base.clone(), e as usize)
}

/// `p^e` as a rational, allowing negative exponents.
pub fn p_power(p: u64, e: i64) -> Rational {
    let mag = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// Parses `a/b` or `a` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Renders a rational as `num/den`, always with an explicit denominator.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Converts a small nonnegative rational integer to `u64` if it is one.
pub fn as_u64(x: &Rational) -> Option<u64> {
    if x.is_integer() && !x.numer().is_negative() {
        x.numer().to_u64()
    } else {
        None
    }
}
