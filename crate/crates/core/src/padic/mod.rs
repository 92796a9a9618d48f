//! ℓ-adic numbers at tracked finite precision.
//!
//! A nonzero [`PadicNumber`] is `ℓ^v · u` where the unit `u` is only known
//! modulo `ℓ^N` (`N` is the relative precision). Zero is kept as `O(ℓ^k)`:
//! the unit part is `0` and `valuation` holds the absolute precision `k`.
//! Arithmetic follows the usual ultrametric bookkeeping and never claims
//! more digits than its inputs justify.

mod log;
mod matrix;
mod quad;

pub use self::log::{hensel_sqrt, iwasawa_log, iwasawa_log_rational, teichmuller};
pub use self::matrix::{PadicMatrix, RankOutcome, DEFAULT_GUARD};
pub use self::quad::PadicQuadElement;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("valuation of zero is infinite")]
    InfiniteValuation,
    #[error("precision must be at least 1, got {0}")]
    BadPrecision(i64),
    #[error("expected an l-adic unit")]
    NotAUnit,
    #[error("division by an l-adic zero")]
    DivisionByZero,
    #[error("not enough precision: {0}")]
    InsufficientPrecision(&'static str),
    #[error("square root requires an argument prime to l")]
    SqrtNotCoprime,
    #[error("{0} is not a square in Q_l")]
    NotASquare(String),
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("mixed primes {0} and {1}")]
    PrimeMismatch(u64, u64),
}

pub type Result<T> = std::result::Result<T, PadicError>;

/// `ℓ^k` as a big integer.
pub(crate) fn prime_power(prime: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(prime), k as usize)
}

/// Strips the factors of `prime` from a nonzero integer; returns the exponent.
pub(crate) fn strip_prime(n: &mut BigInt, prime: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(prime);
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        *n = q;
        v += 1;
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Ordinary ℓ-adic valuation of a nonzero rational.
pub fn val_ell(x: &BigRational, prime: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(PadicError::InfiniteValuation);
    }
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    Ok(strip_prime(&mut num, prime) as i64 - strip_prime(&mut den, prime) as i64)
}

/// Modular inverse of `a` modulo `m`, for `gcd(a, m) = 1`.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: u64,
    valuation: i64,
    unit: BigInt,
    precision: u32,
}

impl PadicNumber {
    /// `O(ℓ^abs)`.
    pub fn zero(prime: u64, absolute_precision: i64) -> Self {
        PadicNumber { prime, valuation: absolute_precision, unit: BigInt::zero(), precision: 0 }
    }

    /// The exact integer `n` truncated to relative precision `precision`.
    pub fn from_integer(prime: u64, n: &BigInt, precision: u32) -> Self {
        Self::from_rational(prime, &BigRational::from_integer(n.clone()), precision)
    }

    pub fn from_i64(prime: u64, n: i64, precision: u32) -> Self {
        Self::from_integer(prime, &BigInt::from(n), precision)
    }

    /// An exact rational truncated to relative precision `precision`.
    ///
    /// The rational zero has no finite valuation; it becomes `O(ℓ^precision)`.
    pub fn from_rational(prime: u64, x: &BigRational, precision: u32) -> Self {
        if x.is_zero() {
            return Self::zero(prime, precision as i64);
        }
        let mut num = x.numer().clone();
        let mut den = x.denom().clone();
        let v = strip_prime(&mut num, prime) as i64 - strip_prime(&mut den, prime) as i64;
        let modulus = prime_power(prime, precision);
        let inv = mod_inverse(&den, &modulus).expect("denominator is prime to l");
        let unit = (num * inv).mod_floor(&modulus);
        PadicNumber { prime, valuation: v, unit, precision }
    }

    /// Builds `r` read modulo `ℓ^abs`, i.e. with absolute precision `abs`.
    pub fn from_residue(prime: u64, r: &BigInt, absolute_precision: i64) -> Self {
        if absolute_precision <= 0 {
            return Self::zero(prime, absolute_precision);
        }
        let modulus = prime_power(prime, absolute_precision as u32);
        let mut r = r.mod_floor(&modulus);
        if r.is_zero() {
            return Self::zero(prime, absolute_precision);
        }
        let v = strip_prime(&mut r, prime);
        let precision = absolute_precision as u32 - v;
        PadicNumber { prime, valuation: v as i64, unit: r, precision }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation of a nonzero number.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() { None } else { Some(self.valuation) }
    }

    pub fn unit_part(&self) -> &BigInt {
        &self.unit
    }

    /// Relative precision of the unit part (0 for zero).
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The exponent `k` such that the number is known modulo `ℓ^k`.
    pub fn absolute_precision(&self) -> i64 {
        self.valuation + self.precision as i64
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.valuation == 0
    }

    /// Lowers the absolute precision to at most `abs`.
    pub fn truncate(&self, abs: i64) -> Self {
        if abs >= self.absolute_precision() {
            return self.clone();
        }
        if self.is_zero() || abs <= self.valuation {
            return Self::zero(self.prime, abs);
        }
        let precision = (abs - self.valuation) as u32;
        let unit = self.unit.mod_floor(&prime_power(self.prime, precision));
        PadicNumber { prime: self.prime, valuation: self.valuation, unit, precision }
    }

    /// An integer representative `r` with `self ≡ r mod ℓ^abs`, for a number
    /// with non-negative valuation.
    pub fn residue(&self, abs: u32) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.valuation < 0 {
            return None;
        }
        let modulus = prime_power(self.prime, abs);
        let r = &self.unit * prime_power(self.prime, self.valuation.min(abs as i64) as u32);
        Some(r.mod_floor(&modulus))
    }

    /// True when both operands are known modulo `ℓ^abs` and agree there.
    pub fn congruent(&self, other: &PadicNumber, abs: i64) -> bool {
        if self.absolute_precision() < abs || other.absolute_precision() < abs {
            return false;
        }
        let diff = &self.truncate(abs) - &other.truncate(abs);
        diff.is_zero()
    }

    /// Equality at the common precision of the two operands.
    pub fn agrees_with(&self, other: &PadicNumber) -> bool {
        (self - other).is_zero()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let modulus = prime_power(self.prime, self.precision);
        let unit = mod_inverse(&self.unit, &modulus).expect("unit part is invertible");
        Ok(PadicNumber { prime: self.prime, valuation: -self.valuation, unit, precision: self.precision })
    }

    pub fn div(&self, other: &PadicNumber) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = PadicNumber::from_i64(self.prime, 1, self.precision.max(1));
        if self.is_zero() {
            return if e == 0 { acc } else { Self::zero(self.prime, self.valuation * e as i64) };
        }
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale_by_prime_power(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.valuation += k;
        out
    }

    fn check_prime(&self, other: &PadicNumber) {
        assert_eq!(self.prime, other.prime, "mixed primes in l-adic arithmetic");
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O({}^{})", self.prime, self.valuation)
        } else {
            write!(
                f,
                "{}^{}*{} + O({}^{})",
                self.prime,
                self.valuation,
                self.unit,
                self.prime,
                self.absolute_precision()
            )
        }
    }
}

impl<'a> Mul<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;

    fn mul(self, rhs: &'a PadicNumber) -> PadicNumber {
        self.check_prime(rhs);
        match (self.is_zero(), rhs.is_zero()) {
            (true, true) => PadicNumber::zero(self.prime, self.valuation + rhs.valuation),
            (true, false) => PadicNumber::zero(self.prime, self.valuation + rhs.valuation),
            (false, true) => PadicNumber::zero(self.prime, self.valuation + rhs.valuation),
            (false, false) => {
                let precision = self.precision.min(rhs.precision);
                let modulus = prime_power(self.prime, precision);
                PadicNumber {
                    prime: self.prime,
                    valuation: self.valuation + rhs.valuation,
                    unit: (&self.unit * &rhs.unit).mod_floor(&modulus),
                    precision,
                }
            }
        }
    }
}

impl<'a> Add<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;

    fn add(self, rhs: &'a PadicNumber) -> PadicNumber {
        self.check_prime(rhs);
        let abs = self.absolute_precision().min(rhs.absolute_precision());
        let nonzero: Vec<&PadicNumber> = [self, rhs].into_iter().filter(|x| !x.is_zero()).collect();
        let Some(vmin) = nonzero.iter().map(|x| x.valuation).min() else {
            return PadicNumber::zero(self.prime, abs);
        };
        if abs <= vmin {
            return PadicNumber::zero(self.prime, abs);
        }
        let mut sum = BigInt::zero();
        for x in nonzero {
            sum += &x.unit * prime_power(x.prime, (x.valuation - vmin) as u32);
        }
        PadicNumber::from_residue(self.prime, &sum, abs - vmin).scale_by_prime_power(vmin)
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;

    fn neg(self) -> PadicNumber {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = prime_power(self.prime, self.precision);
        PadicNumber {
            prime: self.prime,
            valuation: self.valuation,
            unit: (-&self.unit).mod_floor(&modulus),
            precision: self.precision,
        }
    }
}

impl<'a> Sub<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;

    fn sub(self, rhs: &'a PadicNumber) -> PadicNumber {
        self + &(-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn valuations() {
        assert_eq!(val_ell(&q(12, 1), 2).unwrap(), 2);
        assert_eq!(val_ell(&q(1, 1), 5).unwrap(), 0);
        assert_eq!(val_ell(&q(7, 25), 5).unwrap(), -2);
        assert_eq!(val_ell(&q(0, 1), 5), Err(PadicError::InfiniteValuation));
    }

    #[test]
    fn zero_is_normalized() {
        let a = PadicNumber::from_i64(5, 7, 4);
        let z = &a - &a;
        assert!(z.is_zero());
        assert_eq!(z.absolute_precision(), 4);
        assert_eq!(z, PadicNumber::zero(5, 4));
    }

    #[test]
    fn precision_bookkeeping() {
        // 1 + O(5^4) minus 1 + 5^3 + O(5^6): difference is -5^3 + O(5^4).
        let a = PadicNumber::from_i64(5, 1, 4);
        let b = PadicNumber::from_i64(5, 126, 6);
        let d = &a - &b;
        assert_eq!(d.valuation(), Some(3));
        assert_eq!(d.absolute_precision(), 4);
        assert_eq!(d.precision(), 1);

        let p = &PadicNumber::from_i64(5, 10, 3) * &PadicNumber::from_i64(5, 3, 8);
        assert_eq!(p.valuation(), Some(1));
        assert_eq!(p.precision(), 3);

        let z = &PadicNumber::zero(5, 2) * &PadicNumber::from_i64(5, 25, 3);
        assert!(z.is_zero());
        assert_eq!(z.absolute_precision(), 4);
    }

    #[test]
    fn rational_embedding_and_inverse() {
        let x = PadicNumber::from_rational(7, &q(3, 49), 5);
        assert_eq!(x.valuation(), Some(-2));
        let y = x.inverse().unwrap();
        let one = &x * &y;
        assert!(one.congruent(&PadicNumber::from_i64(7, 1, 5), 5));
        assert_eq!(PadicNumber::zero(7, 3).inverse(), Err(PadicError::DivisionByZero));
    }

    #[test]
    fn residue_reads_back() {
        let x = PadicNumber::from_i64(3, -1, 4);
        assert_eq!(x.residue(4).unwrap(), BigInt::from(80));
        let y = PadicNumber::from_i64(3, 18, 4);
        assert_eq!(y.residue(3).unwrap(), BigInt::from(18));
    }
}
