use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{check_prime, is_squarefree, quadratic_splitting, NumFieldError, Result, Splitting, RADICAND_CAP};
use crate::padic::PadicQuadElement;

/// `a + b·√d` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElement {
    a: BigRational,
    b: BigRational,
    d: i64,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl QuadElement {
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Self {
        QuadElement { a, b, d }
    }

    pub fn from_ints(a: i64, b: i64, d: i64) -> Self {
        Self::new(rat(a), rat(b), d)
    }

    /// `(u + v·√d)/2`.
    pub fn halves(u: impl Into<BigInt>, v: impl Into<BigInt>, d: i64) -> Self {
        let two = BigInt::from(2);
        Self::new(BigRational::new(u.into(), two.clone()), BigRational::new(v.into(), two), d)
    }

    pub fn rational(q: BigRational, d: i64) -> Self {
        Self::new(q, BigRational::zero(), d)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `a² − d·b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - rat(self.d) * &self.b * &self.b
    }

    pub fn trace(&self) -> BigRational {
        &self.a * rat(2)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.d)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d);
        let a = &self.a * &other.a + rat(self.d) * &self.b * &other.b;
        let b = &self.a * &other.b + &self.b * &other.a;
        Self::new(a, b, self.d)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.a / &n, -&self.b / &n, self.d))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::rational(BigRational::one(), self.d);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Integral over `Z` iff trace and norm are integers.
    pub fn is_integral(&self) -> bool {
        self.trace().is_integer() && self.norm().is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        f(&self.a) + f(&self.b) * (self.d as f64).sqrt()
    }

    /// `(u, v, D)` with `self = (u + v·√d)/D`, `u, v ∈ Z`, `D > 0`.
    pub(crate) fn clear_denominators(&self) -> (BigInt, BigInt, BigInt) {
        let den = self.a.denom().lcm(self.b.denom());
        let u = (&self.a * rat(den.clone())).to_integer();
        let v = (&self.b * rat(den.clone())).to_integer();
        (u, v, den)
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let b = self.b.abs();
        let coeff = if b.is_one() { String::new() } else { format!("{b}*") };
        write!(f, "{} {sign} {coeff}sqrt({})", self.a, self.d)
    }
}

const MAX_CF_STEPS: usize = 100_000;

fn check_real(d: i64) -> Result<()> {
    if d <= 1 || !is_squarefree(d) {
        return Err(NumFieldError::BadRadicand(d));
    }
    Ok(())
}

/// The fundamental unit `ε > 1` of `Q(√d)`, `d > 1`.
///
/// Expands `ω = (P₀ + √d)/Q₀` (`√d`, or `(1+√d)/2` when `d ≡ 1 mod 4`) as a
/// continued fraction; the first convergent `p/q` with `N(p − q·ω̄) = ±1`
/// gives `ε = p − q·ω̄`.
pub fn fundamental_unit(d: i64) -> Result<QuadElement> {
    check_real(d)?;
    let (p0, q0): (i64, i64) = if d.rem_euclid(4) == 1 { (1, 2) } else { (0, 1) };
    let s = d.sqrt();
    let (mut pp, mut qq) = (p0, q0);
    let (mut p_prev, mut p_prev2) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q_prev2) = (BigInt::zero(), BigInt::one());
    for _ in 0..MAX_CF_STEPS {
        let a = Integer::div_floor(&(pp + s), &qq);
        let p = &p_prev * a + &p_prev2;
        let q = &q_prev * a + &q_prev2;
        let eta = QuadElement::new(
            rat(p.clone()) - BigRational::new(&q * p0, BigInt::from(q0)),
            BigRational::new(q.clone(), BigInt::from(q0)),
            d,
        );
        if eta.norm().abs().is_one() {
            return Ok(eta);
        }
        (p_prev2, p_prev) = (p_prev, p);
        (q_prev2, q_prev) = (q_prev, q);
        pp = a * qq - pp;
        qq = (d - pp * pp) / qq;
    }
    Err(NumFieldError::SearchExhausted(format!("continued fraction of sqrt({d})")))
}

fn discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Class number of `Q(√d)` from reduced binary quadratic forms.
///
/// Imaginary fields count reduced forms. Real fields count cycles of reduced
/// indefinite forms, which gives the narrow class number `h⁺`; then `h = h⁺`
/// when `N(ε) = −1` and `h⁺/2` otherwise.
pub fn class_number(d: i64) -> Result<u64> {
    if d == 1 || !is_squarefree(d) {
        return Err(NumFieldError::BadRadicand(d));
    }
    let disc = discriminant(d);
    if d < 0 {
        let n = -disc;
        let mut count = 0;
        let mut a = 1;
        while 3 * a * a <= n {
            for b in (-a + 1)..=a {
                if (b * b + n) % (4 * a) != 0 {
                    continue;
                }
                let c = (b * b + n) / (4 * a);
                if c < a || (c == a && b < 0) {
                    continue;
                }
                count += 1;
            }
            a += 1;
        }
        return Ok(count);
    }

    let s = disc.sqrt();
    let reduced = |a: i64, b: i64| {
        let a2 = 2 * a.abs();
        b > 0 && b * b < disc && (a2 + b) * (a2 + b) > disc && (a2 <= b || (a2 - b) * (a2 - b) < disc)
    };
    let mut forms = HashSet::new();
    for b in (1..=s).filter(|b| (b - disc).rem_euclid(2) == 0) {
        let n = (b * b - disc) / 4;
        for a in (1..=n.abs()).filter(|a| n % a == 0) {
            for a in [a, -a] {
                if reduced(a, b) {
                    forms.insert((a, b, n / a));
                }
            }
        }
    }
    let rho = |(_, b, c): (i64, i64, i64)| {
        let m = 2 * c.abs();
        let base = s - m + 1;
        let b2 = base + (-b - base).rem_euclid(m);
        (c, b2, (b2 * b2 - disc) / (4 * c))
    };
    let mut seen = HashSet::new();
    let mut cycles = 0u64;
    let mut ordered: Vec<_> = forms.iter().copied().collect();
    ordered.sort();
    for f in ordered {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            seen.insert(g);
            g = rho(g);
            debug_assert!(forms.contains(&g));
            if g == f {
                break;
            }
        }
    }
    let eps = fundamental_unit(d)?;
    Ok(if eps.norm() == -BigRational::one() { cycles } else { cycles / 2 })
}

/// `α` with `(α) = 𝔭^exponent` for a prime `𝔭 | ℓ` of `Q(√d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalPower {
    pub exponent: u32,
    pub generator: QuadElement,
    /// In the split case, the embedding `√d ↦ ±s` (`s` the lifted root) that
    /// belongs to `𝔭`, i.e. where `α` has positive valuation.
    pub branch: Option<bool>,
}

/// Searches integral elements of norm `±m`, calling `accept` on each in turn.
///
/// Elements are `(U + V·√d)/2` with `U² − d·V² = ±4m` (`U`, `V` even unless
/// `d ≡ 1 mod 4`). For real fields every principal ideal has a generator with
/// `|V| ≤ 2·√(m·ε/d)`.
fn search_norm(d: i64, m: u128, eps: Option<f64>, mut accept: impl FnMut(QuadElement) -> bool) -> Option<QuadElement> {
    let half_basis = d.rem_euclid(4) == 1;
    let target = 4 * m as i128;
    let dd = d as i128;
    let bound = match eps {
        None => ((target / (-dd)) as f64).sqrt() as i128 + 1,
        Some(e) => (2.0 * ((m as f64) * e / d as f64).sqrt()) as i128 + 2,
    };
    let signs: &[i128] = if d < 0 { &[1] } else { &[1, -1] };
    for v in 0..=bound {
        if !half_basis && v % 2 != 0 {
            continue;
        }
        for &sign in signs {
            let t = dd * v * v + sign * target;
            if t < 0 {
                continue;
            }
            let u = t.sqrt();
            if u * u != t || (u - v).rem_euclid(2) != 0 || (!half_basis && u % 2 != 0) {
                continue;
            }
            for vv in [v, -v] {
                let x = QuadElement::halves(BigInt::from(u), BigInt::from(vv), d);
                if accept(x.clone()) {
                    return Some(x);
                }
                if v == 0 {
                    break;
                }
            }
        }
    }
    None
}

fn embedding_valuation(x: &QuadElement, ell: u64, precision: u32, positive: bool) -> Result<i64> {
    let e = PadicQuadElement::from_rationals(ell, x.a(), x.b(), x.radicand(), precision)?;
    let image = e.embedding(positive).expect("split prime");
    Ok(image.valuation().unwrap_or(image.absolute_precision()))
}

fn principal_power_with(d: i64, ell: u64, h: u64, eps: Option<f64>) -> Result<PrincipalPower> {
    let ell_elt = QuadElement::from_ints(ell as i64, 0, d);
    match quadratic_splitting(d, ell) {
        Splitting::Inert => Ok(PrincipalPower { exponent: 1, generator: ell_elt, branch: None }),
        Splitting::Ramified => Ok(match search_norm(d, ell as u128, eps, |_| true) {
            Some(alpha) => PrincipalPower { exponent: 1, generator: alpha, branch: None },
            None => PrincipalPower { exponent: 2, generator: ell_elt, branch: None },
        }),
        Splitting::Split => {
            // the order of 𝔭 in the class group divides h
            for k in (1..=h as u32).filter(|k| h.is_multiple_of(u64::from(*k))) {
                let m = (ell as u128).pow(k);
                let mut branch = None;
                let mut failure = None;
                let found = search_norm(d, m, eps, |x| {
                    let vals = (embedding_valuation(&x, ell, k + 2, true), embedding_valuation(&x, ell, k + 2, false));
                    match vals {
                        (Ok(vp), Ok(vm)) => {
                            if vm == 0 {
                                branch = Some(true);
                            } else if vp == 0 {
                                branch = Some(false);
                            }
                            branch.is_some()
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            failure = Some(e);
                            true
                        }
                    }
                });
                if let Some(e) = failure {
                    return Err(e);
                }
                if let Some(alpha) = found {
                    return Ok(PrincipalPower { exponent: k, generator: alpha, branch });
                }
            }
            Err(NumFieldError::SearchExhausted(format!("no generator of a power of a prime over {ell} in q:{d}")))
        }
    }
}

/// Generator of the least principal power of a prime above `ℓ` in `Q(√d)`.
pub fn principal_power_generator(d: i64, ell: u64) -> Result<PrincipalPower> {
    check_prime(ell)?;
    check_cap(d)?;
    let h = class_number(d)?;
    let eps = if d > 0 { Some(fundamental_unit(d)?.to_f64()) } else { None };
    principal_power_with(d, ell, h, eps)
}

fn check_cap(d: i64) -> Result<()> {
    if d == 1 || !is_squarefree(d) {
        return Err(NumFieldError::BadRadicand(d));
    }
    if d.abs() > RADICAND_CAP {
        return Err(NumFieldError::Unsupported(format!("|d| = {} exceeds {RADICAND_CAP}", d.abs())));
    }
    Ok(())
}

/// Units and ℓ-units of `Q(√d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadUnitData {
    pub d: i64,
    /// Number of roots of unity.
    pub torsion: u32,
    pub epsilon: Option<QuadElement>,
    pub class_number: u64,
    pub principal: PrincipalPower,
    /// Generators of a finite-index subgroup of the ℓ-units modulo torsion:
    /// `ε` (real fields), then one generator per place above `ℓ`.
    pub generators: Vec<QuadElement>,
}

pub fn quad_unit_data(d: i64, ell: u64) -> Result<QuadUnitData> {
    check_prime(ell)?;
    check_cap(d)?;
    let torsion = match d {
        -1 => 4,
        -3 => 6,
        _ => 2,
    };
    let epsilon = if d > 0 { Some(fundamental_unit(d)?) } else { None };
    let h = class_number(d)?;
    let principal = principal_power_with(d, ell, h, epsilon.as_ref().map(QuadElement::to_f64))?;
    let mut generators: Vec<QuadElement> = epsilon.iter().cloned().collect();
    generators.push(principal.generator.clone());
    if principal.branch.is_some() {
        generators.push(principal.generator.conj());
    }
    Ok(QuadUnitData { d, torsion, epsilon, class_number: h, principal, generators })
}
