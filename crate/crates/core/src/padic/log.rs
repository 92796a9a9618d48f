use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{is_prime, mod_inverse, prime_power, strip_prime, PadicError, PadicNumber, Result};

/// Extra digits carried past the target precision before the log series is cut.
pub const SERIES_GUARD: u32 = 2;

fn check_prime(prime: u64) -> Result<()> {
    if is_prime(prime) { Ok(()) } else { Err(PadicError::NotPrime(prime)) }
}

fn floor_log(k: u64, prime: u64) -> u32 {
    let mut e = 0;
    let mut p = prime;
    while p <= k {
        e += 1;
        p = p.saturating_mul(prime);
    }
    e
}

/// Teichmüller representative of a unit: the root of unity `ω ≡ u mod ℓ`
/// (`mod 4` when `ℓ = 2`), to relative precision `precision`.
pub fn teichmuller(u: &PadicNumber, precision: u32) -> Result<PadicNumber> {
    if precision < 1 {
        return Err(PadicError::BadPrecision(precision as i64));
    }
    if !u.is_unit() {
        return Err(PadicError::NotAUnit);
    }
    let prime = u.prime();
    if prime == 2 {
        if u.precision() < 2 {
            return Err(PadicError::InsufficientPrecision("sign of a 2-adic unit needs u mod 4"));
        }
        let r = u.unit_part().mod_floor(&BigInt::from(4));
        let sign = if r.is_one() { 1 } else { -1 };
        return Ok(PadicNumber::from_i64(2, sign, precision));
    }
    // x -> x^ℓ gains one digit per step towards the fixed point.
    let modulus = prime_power(prime, precision);
    let mut x = u.unit_part().mod_floor(&BigInt::from(prime));
    let exp = BigInt::from(prime);
    for _ in 0..precision {
        x = x.modpow(&exp, &modulus);
    }
    Ok(PadicNumber::from_residue(prime, &x, precision as i64))
}

/// `log(1 + t) mod ℓ^target` for an integer `t` divisible by `ℓ`
/// (by 8 when `ℓ = 2`).
fn log_series(t: &BigInt, prime: u64, target: u32) -> BigInt {
    let out_mod = prime_power(prime, target);
    if t.is_zero() {
        return BigInt::zero();
    }
    let mut tt = t.clone();
    let vt = strip_prime(&mut tt, prime) as u64;
    debug_assert!(vt >= 1);

    // Terms with k·v(t) - ⌊log_ℓ k⌋ ≥ target + guard are dropped; that bound is
    // nondecreasing in k so the cut is final.
    let stop = (target + SERIES_GUARD) as u64;
    let mut last = 0u64;
    loop {
        let k = last + 1;
        if k * vt - floor_log(k, prime) as u64 >= stop {
            break;
        }
        last = k;
    }
    if last == 0 {
        return BigInt::zero();
    }
    let extra = floor_log(last, prime);
    let work_mod = prime_power(prime, target + extra);
    let t = t.mod_floor(&work_mod);

    let mut power = BigInt::one();
    let mut acc = BigInt::zero();
    for k in 1..=last {
        power = (&power * &t).mod_floor(&work_mod);
        let mut kk = BigInt::from(k);
        let e = strip_prime(&mut kk, prime);
        let num = &power / prime_power(prime, e);
        let inv = mod_inverse(&kk, &out_mod).expect("cofactor of k is prime to l");
        let term = (num * inv).mod_floor(&out_mod);
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.mod_floor(&out_mod)
}

/// Iwasawa logarithm `Log_ℓ`, normalised by `Log_ℓ(ℓ) = 0` and vanishing on
/// roots of unity, to absolute precision `O(ℓ^min(N, rel. precision of x))`.
pub fn iwasawa_log(x: &PadicNumber, precision: u32) -> Result<PadicNumber> {
    if precision < 1 {
        return Err(PadicError::BadPrecision(precision as i64));
    }
    if x.is_zero() {
        return Err(PadicError::InfiniteValuation);
    }
    let prime = x.prime();
    let target = precision.min(x.precision());
    let unit = PadicNumber::from_residue(prime, x.unit_part(), target as i64);

    if prime == 2 {
        if target < 2 {
            return Err(PadicError::InsufficientPrecision("2-adic log needs the unit mod 4"));
        }
        // ⟨u⟩ = ±u ≡ 1 mod 4, and log⟨u⟩ = log(⟨u⟩²)/2 with ⟨u⟩² ≡ 1 mod 8.
        let omega = teichmuller(&unit, target)?;
        let modulus = prime_power(2, target);
        let one_unit = (unit.unit_part() * omega.residue(target).unwrap()).mod_floor(&modulus);
        let t = &one_unit * &one_unit - 1u32;
        let doubled = log_series(&t, 2, target + 1);
        debug_assert!(doubled.is_even());
        return Ok(PadicNumber::from_residue(2, &(doubled / 2), target as i64));
    }

    let omega = teichmuller(&unit, target)?;
    let modulus = prime_power(prime, target);
    let omega_inv = mod_inverse(&omega.residue(target).unwrap(), &modulus).unwrap();
    let one_unit = (unit.unit_part() * omega_inv).mod_floor(&modulus);
    let t = one_unit - 1u32;
    let value = log_series(&t, prime, target);
    Ok(PadicNumber::from_residue(prime, &value, target as i64))
}

/// `Log_ℓ(x)` for a nonzero rational, exact to `O(ℓ^N)`.
pub fn iwasawa_log_rational(x: &BigRational, prime: u64, precision: u32) -> Result<PadicNumber> {
    check_prime(prime)?;
    if x.is_zero() {
        return Err(PadicError::InfiniteValuation);
    }
    if precision < 1 {
        return Err(PadicError::BadPrecision(precision as i64));
    }
    iwasawa_log(&PadicNumber::from_rational(prime, x, precision), precision)
}

/// Square root of an integer prime to `ℓ`, lifted to relative precision `N`.
///
/// For odd `ℓ` the returned root is congruent to the smallest positive square
/// root modulo `ℓ`; for `ℓ = 2` (which needs `a ≡ 1 mod 8`) it is `≡ 1 mod 4`.
pub fn hensel_sqrt(a: &BigInt, prime: u64, precision: u32) -> Result<Option<PadicNumber>> {
    check_prime(prime)?;
    if precision < 1 {
        return Err(PadicError::BadPrecision(precision as i64));
    }
    let p = BigInt::from(prime);
    if a.mod_floor(&p).is_zero() {
        return Err(PadicError::SqrtNotCoprime);
    }
    if prime == 2 {
        if a.mod_floor(&BigInt::from(8)) != BigInt::one() {
            return Ok(None);
        }
        let mut r = BigInt::one();
        for k in 3..=precision + 1 {
            let m = prime_power(2, k + 1);
            if !(&r * &r - a).mod_floor(&m).is_zero() {
                r += prime_power(2, k - 1);
            }
        }
        return Ok(Some(PadicNumber::from_residue(2, &r, precision as i64)));
    }

    let a_mod = a.mod_floor(&p);
    let Some(r0) = (1..prime).map(BigInt::from).find(|r| (r * r - &a_mod).mod_floor(&p).is_zero()) else {
        return Ok(None);
    };
    let mut r = r0;
    let mut k = 1u32;
    while k < precision {
        k = (2 * k).min(precision);
        let m = prime_power(prime, k);
        let f = (&r * &r - a).mod_floor(&m);
        let inv = mod_inverse(&(&r * 2), &m).expect("2r is a unit");
        r = (&r - f * inv).mod_floor(&m);
    }
    Ok(Some(PadicNumber::from_residue(prime, &r, precision as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    /// exp(x) = Σ x^k/k!, for v(x) large enough that the series converges.
    fn padic_exp(x: &PadicNumber, precision: u32) -> PadicNumber {
        let prime = x.prime();
        let mut acc = PadicNumber::from_i64(prime, 1, precision + 10);
        let mut term = acc.clone();
        for k in 1..(4 * precision as i64 + 20) {
            term = term.div(&PadicNumber::from_i64(prime, k, precision + 10)).unwrap();
            term = &term * x;
            acc = &acc + &term;
        }
        acc.truncate(precision as i64)
    }

    #[test]
    fn teichmuller_examples() {
        let one = teichmuller(&PadicNumber::from_i64(7, 8, 5), 5).unwrap();
        assert!(one.congruent(&PadicNumber::from_i64(7, 1, 5), 5));

        let w = teichmuller(&PadicNumber::from_i64(5, 2, 4), 4).unwrap();
        assert!(w.congruent(&PadicNumber::from_i64(5, 2, 1), 1));
        assert!(w.pow(4).congruent(&PadicNumber::from_i64(5, 1, 4), 4));
        assert!(!w.pow(2).congruent(&PadicNumber::from_i64(5, 1, 1), 1));

        let s = teichmuller(&PadicNumber::from_i64(2, 3, 6), 6).unwrap();
        assert!(s.congruent(&PadicNumber::from_i64(2, -1, 6), 6));

        assert_eq!(teichmuller(&PadicNumber::from_i64(5, 10, 4), 4), Err(PadicError::NotAUnit));
    }

    #[test]
    fn log_kills_ell_and_torsion() {
        for &l in &[2u64, 3, 5, 7, 11, 13] {
            for x in [q(l as i64), q(-1), q(-(l as i64) * (l as i64)), q(1)] {
                assert!(iwasawa_log_rational(&x, l, 10).unwrap().is_zero(), "l = {l}, x = {x}");
            }
        }
        // a Teichmüller lift that is not ±1
        let w = teichmuller(&PadicNumber::from_i64(7, 3, 12), 12).unwrap();
        assert!(iwasawa_log(&w, 12).unwrap().is_zero());
    }

    #[test]
    fn log_of_six_at_five() {
        // Direct series Σ (-1)^(k+1) 5^k / k with rationals, truncated far
        // past 5^6.
        let mut exact = BigRational::zero();
        let mut pow = BigRational::one();
        for k in 1..=20i64 {
            pow *= q(5);
            let term = &pow / q(k);
            if k % 2 == 1 { exact += term } else { exact -= term }
        }
        let oracle = PadicNumber::from_rational(5, &exact, 12).truncate(6);
        let got = iwasawa_log_rational(&q(6), 5, 6).unwrap();
        assert_eq!(got.absolute_precision(), 6);
        assert!(got.congruent(&oracle, 6));

        // exp∘log round trip on 1 + 5Z_5
        let back = padic_exp(&iwasawa_log_rational(&q(6), 5, 12).unwrap(), 10);
        assert!(back.congruent(&PadicNumber::from_i64(5, 6, 10), 10));
    }

    #[test]
    fn log_at_two_round_trips() {
        // 5 ≡ 1 mod 4 so Log_2(5) = log(5) and exp gives 5 back.
        let l5 = iwasawa_log_rational(&q(5), 2, 16).unwrap();
        assert_eq!(l5.valuation(), Some(2));
        let back = padic_exp(&l5, 14);
        assert!(back.congruent(&PadicNumber::from_i64(2, 5, 14), 14));
        // Log_2(3) = Log_2(-3)
        let a = iwasawa_log_rational(&q(3), 2, 16).unwrap();
        let b = iwasawa_log_rational(&q(-3), 2, 16).unwrap();
        assert!(a.agrees_with(&b));
    }

    #[test]
    fn log_errors() {
        assert_eq!(iwasawa_log_rational(&q(0), 5, 4), Err(PadicError::InfiniteValuation));
        assert_eq!(iwasawa_log_rational(&q(3), 5, 0), Err(PadicError::BadPrecision(0)));
        assert_eq!(iwasawa_log_rational(&q(3), 6, 4), Err(PadicError::NotPrime(6)));
    }

    #[test]
    fn log_matches_power_route() {
        // Log(u) = log(u^(ℓ-1))/(ℓ-1), which avoids Teichmüller lifts entirely.
        for &l in &[3u64, 5, 7, 13] {
            for n in [2i64, 3, 10, 17, 1234] {
                if n % l as i64 == 0 {
                    continue;
                }
                let n_pow = num_traits::pow(BigInt::from(n), (l - 1) as usize);
                let t = n_pow - 1u32;
                let log_pow = log_series(&t, l, 10);
                let inv = mod_inverse(&BigInt::from(l - 1), &prime_power(l, 10)).unwrap();
                let expected = PadicNumber::from_residue(l, &(log_pow * inv), 10);
                assert!(iwasawa_log_rational(&q(n), l, 10).unwrap().agrees_with(&expected));
            }
        }
    }

    #[test]
    fn hensel_examples() {
        let r = hensel_sqrt(&4.into(), 5, 3).unwrap().unwrap();
        assert!(r.congruent(&PadicNumber::from_i64(5, 2, 3), 3));

        let r = hensel_sqrt(&2.into(), 7, 4).unwrap().unwrap();
        assert_eq!(r.residue(1).unwrap(), BigInt::from(3));
        assert!((&r * &r).congruent(&PadicNumber::from_i64(7, 2, 4), 4));

        assert_eq!(hensel_sqrt(&3.into(), 5, 3).unwrap(), None);
        assert_eq!(hensel_sqrt(&10.into(), 5, 3), Err(PadicError::SqrtNotCoprime));

        let r = hensel_sqrt(&17.into(), 2, 10).unwrap().unwrap();
        assert_eq!(r.residue(2).unwrap(), BigInt::one());
        assert!((&r * &r).congruent(&PadicNumber::from_i64(2, 17, 10), 10));
        assert_eq!(hensel_sqrt(&5.into(), 2, 10).unwrap(), None);
    }
}
