use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::quad::{quad_unit_data, QuadElement};
use super::{
    biquadratic_sign, check_prime, decomposition_data, quadratic_splitting, third_radicand, FieldSpec,
    NumFieldError, Result, Splitting,
};
use crate::padic::{
    iwasawa_log, iwasawa_log_rational, val_ell, PadicMatrix, PadicNumber, PadicQuadElement, DEFAULT_GUARD,
};

pub const DEFAULT_PRECISION: u32 = 12;

/// A nonzero element of `Q` or of a quadratic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldElement {
    Rational(BigRational),
    Quadratic(QuadElement),
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Quadratic(x) => x.is_zero(),
        }
    }

    /// Norm to `Q`.
    pub fn norm(&self) -> BigRational {
        match self {
            FieldElement::Rational(q) => q.clone(),
            FieldElement::Quadratic(x) => x.norm(),
        }
    }

    fn radicand(&self) -> i64 {
        match self {
            FieldElement::Rational(_) => 1,
            FieldElement::Quadratic(x) => x.radicand(),
        }
    }
}

/// A finite place of `Q(√d)` (or of `Q` when `splitting` is `None`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Place {
    pub prime: u64,
    pub splitting: Option<Splitting>,
    /// For split primes: the embedding `√d ↦ ±s` into `Q_p`.
    pub branch: Option<bool>,
}

impl Place {
    pub fn ramification(&self) -> i64 {
        if self.splitting == Some(Splitting::Ramified) {
            2
        } else {
            1
        }
    }

    pub fn residue_degree(&self) -> i64 {
        if self.splitting == Some(Splitting::Inert) {
            2
        } else {
            1
        }
    }

    pub fn local_degree(&self) -> i64 {
        self.ramification() * self.residue_degree()
    }
}

/// Places above `p` of `Q(√d)`; `d = 1` stands for `Q`.
pub fn field_places(d: i64, p: u64) -> Vec<Place> {
    if d == 1 {
        return vec![Place { prime: p, splitting: None, branch: None }];
    }
    match quadratic_splitting(d, p) {
        Splitting::Split => [true, false]
            .into_iter()
            .map(|b| Place { prime: p, splitting: Some(Splitting::Split), branch: Some(b) })
            .collect(),
        s => vec![Place { prime: p, splitting: Some(s), branch: None }],
    }
}

fn padic_embedding(x: &QuadElement, prime: u64, positive: bool, precision: u32) -> Result<PadicNumber> {
    let e = PadicQuadElement::from_rationals(prime, x.a(), x.b(), x.radicand(), precision)?;
    Ok(e.embedding(positive).expect("place is split"))
}

/// Digits of headroom so that cancellation in `a + b·s` still leaves `N`.
fn working_precision(x: &QuadElement, prime: u64, precision: u32) -> Result<u32> {
    let v = val_ell(&x.norm(), prime)?;
    Ok(precision + v.unsigned_abs() as u32 + 4)
}

/// `N_{K_𝔭/Q_p}(x)`: the image under the embedding at a split place,
/// the global norm otherwise.
pub fn local_norm_quad(x: &QuadElement, place: &Place, precision: u32) -> Result<PadicNumber> {
    if x.is_zero() {
        return Err(NumFieldError::ZeroElement);
    }
    match place.branch {
        Some(positive) => {
            let w = working_precision(x, place.prime, precision)?;
            padic_embedding(x, place.prime, positive, w)
        }
        None => Ok(PadicNumber::from_rational(place.prime, &x.norm(), precision)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogValuation {
    Integer(i64),
    Padic(PadicNumber),
}

fn valuation_at(x: &FieldElement, place: &Place) -> Result<i64> {
    let p = place.prime;
    match x {
        FieldElement::Rational(q) => Ok(place.ramification() * val_ell(q, p)?),
        FieldElement::Quadratic(y) => match place.branch {
            None => {
                let v = val_ell(&y.norm(), p)?;
                Ok(if place.splitting == Some(Splitting::Inert) { v / 2 } else { v })
            }
            Some(positive) => {
                let (u, v, den) = y.clear_denominators();
                let integral = QuadElement::new(BigRational::from_integer(u), BigRational::from_integer(v), y.radicand());
                let bound = val_ell(&integral.norm(), p)?;
                let image = padic_embedding(&integral, p, positive, bound as u32 + 2)?;
                let val = image.valuation().expect("nonzero element");
                Ok(val - val_ell(&BigRational::from_integer(den), p)?)
            }
        },
    }
}

/// `ν̃_𝔭(x)`: the ordinary valuation at `𝔭 ∤ ℓ`, and `−Log_ℓ N_{K_𝔭/Q_ℓ}(x)`
/// at `𝔭 | ℓ` (without the `1/deg 𝔭` normalisation).
pub fn log_valuation(x: &FieldElement, place: &Place, ell: u64, precision: u32) -> Result<LogValuation> {
    check_prime(ell)?;
    if x.is_zero() {
        return Err(NumFieldError::ZeroElement);
    }
    if place.prime != ell {
        return Ok(LogValuation::Integer(valuation_at(x, place)?));
    }
    let log = match x {
        FieldElement::Rational(q) => {
            let log = iwasawa_log_rational(q, ell, precision)?;
            &PadicNumber::from_i64(ell, place.local_degree(), precision) * &log
        }
        FieldElement::Quadratic(y) => iwasawa_log(&local_norm_quad(y, place, precision)?, precision)?,
    };
    Ok(LogValuation::Padic(-&log))
}

/// Result of the explicit kernel-rank computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleOutcome {
    /// `dim_Z` of the kernel of the `ν̃_𝔭` (`𝔭 | ℓ`) on the ℓ-units.
    pub tilde_e: usize,
    /// `Z_ℓ`-rank of the kernel on `Z_ℓ ⊗ E'`: the rank of the logarithmic units.
    pub log_unit_rank: usize,
    pub generators: usize,
    /// `Q_ℓ`-rank of the `ν̃`-matrix.
    pub matrix_rank: usize,
    pub ambiguous: bool,
    pub precision: u32,
}

fn padic_entry(v: LogValuation) -> PadicNumber {
    match v {
        LogValuation::Padic(x) => x,
        LogValuation::Integer(_) => unreachable!("places above ell carry l-adic values"),
    }
}

/// An element of `Q` or of the quadratic subfield `k_i`.
#[derive(Debug, Clone)]
struct Generator {
    subfield: Option<usize>,
    value: FieldElement,
}

/// `K` as a compositum of at most three quadratic fields, with `G` acting on
/// `√d_i` through `sign(x, i)`.
struct Model {
    radicands: Vec<i64>,
    order: usize,
    d_ell: Vec<usize>,
    places: Vec<usize>,
    split: Vec<bool>,
    /// Base ℓ-adic embedding: `√d_i ↦ ±s_i`, compatible across subfields.
    base: Vec<bool>,
    /// Base complex embedding: `√d_i ↦ ±√d_i` (principal root).
    arch_base: Vec<bool>,
    generators: Vec<Generator>,
}

impl Model {
    fn sign(&self, x: usize, i: usize) -> i64 {
        if self.order == 2 {
            1 - 2 * x as i64
        } else {
            biquadratic_sign(x, i)
        }
    }

    fn act(&self, x: usize, g: &Generator) -> FieldElement {
        match (&g.value, g.subfield) {
            (FieldElement::Quadratic(y), Some(i)) if self.sign(x, i) == -1 => FieldElement::Quadratic(y.conj()),
            (v, _) => v.clone(),
        }
    }

    /// `N_{K/K^D}(g)`, still an element of `Q` or `k_i`.
    fn decomposition_norm(&self, g: &Generator) -> Generator {
        let mut acc = g.value.clone();
        for &h in self.d_ell.iter().filter(|&&h| h != 0) {
            acc = match (acc, self.act(h, g)) {
                (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
                (FieldElement::Quadratic(a), FieldElement::Quadratic(b)) => FieldElement::Quadratic(a.mul(&b)),
                _ => unreachable!("conjugates stay in the same subfield"),
            };
        }
        Generator { subfield: g.subfield, value: acc }
    }

    fn ell_place(&self, x: usize, i: usize, ell: u64) -> Place {
        let positive = self.base[i] == (self.sign(x, i) == 1);
        Place { prime: ell, splitting: Some(Splitting::Split), branch: Some(positive) }
    }

    /// `ν̃` at the place `x𝔓₀`: `−|D|·Log ι(y)` if `ℓ` splits in the subfield
    /// of `y`, `−(|D|/2)·Log N(y)` otherwise.
    fn log_entry(&self, g: &Generator, x: usize, ell: u64, precision: u32) -> Result<PadicNumber> {
        let dsize = self.d_ell.len() as i64;
        let log = match (&g.value, g.subfield) {
            (FieldElement::Quadratic(y), Some(i)) if self.split[i] => {
                let log = iwasawa_log(&local_norm_quad(y, &self.ell_place(x, i, ell), precision)?, precision)?;
                &PadicNumber::from_i64(ell, dsize, precision) * &log
            }
            (FieldElement::Quadratic(y), Some(_)) => {
                let log = iwasawa_log_rational(&y.norm(), ell, precision)?;
                &PadicNumber::from_i64(ell, dsize / 2, precision) * &log
            }
            (FieldElement::Rational(q), _) => {
                let log = iwasawa_log_rational(q, ell, precision)?;
                &PadicNumber::from_i64(ell, dsize, precision) * &log
            }
            _ => unreachable!(),
        };
        Ok(-&log)
    }

    /// `(log|σ_x(z)|, v_ℓ(ι_x(z)))` over all `x ∈ G`: injective on ℓ-units
    /// modulo torsion.
    fn log_embedding(&self, z: &Generator, ell: u64) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(2 * self.order);
        for x in 0..self.order {
            match (&z.value, z.subfield) {
                (FieldElement::Rational(q), _) => {
                    out.push(ln_abs(q));
                    out.push(val_ell(q, ell)? as f64);
                }
                (FieldElement::Quadratic(y), Some(i)) => {
                    let d = self.radicands[i];
                    let norm = y.norm();
                    let sign = if self.arch_base[i] { 1 } else { -1 } * self.sign(x, i);
                    out.push(if d < 0 { 0.5 * ln_abs(&norm) } else { ln_abs_real_conjugate(y, sign) });
                    out.push(if self.split[i] {
                        valuation_at(&z.value, &self.ell_place(x, i, ell))? as f64
                    } else {
                        val_ell(&norm, ell)? as f64 / 2.0
                    });
                }
                _ => unreachable!(),
            }
        }
        Ok(out)
    }
}

fn ln_abs(q: &BigRational) -> f64 {
    let ln = |n: &BigInt| n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    ln(q.numer()) - ln(q.denom())
}

/// `log|a + sign·b·√d|` for `d > 0`, taking the conjugate without
/// cancellation and dividing it into the norm when needed.
fn ln_abs_real_conjugate(y: &QuadElement, sign: i64) -> f64 {
    let a = y.a().to_f64().unwrap_or(f64::NAN);
    let b = y.b().to_f64().unwrap_or(f64::NAN) * (y.radicand() as f64).sqrt();
    let b = if sign == 1 { b } else { -b };
    if a * b >= 0.0 {
        (a + b).abs().ln()
    } else {
        ln_abs(&y.norm()) - (a - b).abs().ln()
    }
}

/// Rows pinned as numerically zero below this (relative to the largest entry)
/// and flagged as ambiguous below `REAL_GRAY`.
const REAL_TOLERANCE: f64 = 1e-7;
const REAL_GRAY: f64 = 1e-4;

/// Rank of a real matrix by full-pivot elimination.
fn real_rank(mut m: Vec<Vec<f64>>) -> (usize, bool) {
    let scale = m.iter().flatten().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut ambiguous = false;
    while rank < m.len().min(cols) {
        let mut best = (rank, rank, 0.0f64);
        for (i, row) in m.iter().enumerate().skip(rank) {
            for (j, x) in row.iter().enumerate() {
                if x.abs() > best.2 {
                    best = (i, j, x.abs());
                }
            }
        }
        if best.2 <= REAL_TOLERANCE * scale {
            ambiguous = best.2 > 0.0 && best.2 > REAL_TOLERANCE * 1e-3 * scale;
            break;
        }
        if best.2 < REAL_GRAY * scale {
            ambiguous = true;
        }
        m.swap(rank, best.0);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let f = row[best.1] / pivot[best.1];
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= f * p;
            }
        }
        rank += 1;
    }
    (rank, ambiguous)
}

fn model(spec: &FieldSpec, ell: u64, precision: u32) -> Result<Model> {
    let data = decomposition_data(spec, ell)?;
    let ell_q = FieldElement::Rational(BigRational::from_integer(ell.into()));
    let (radicands, order, generators) = match spec {
        FieldSpec::Rational => (vec![], 1, vec![Generator { subfield: None, value: ell_q }]),
        FieldSpec::Quadratic(d) => {
            let gens = quad_unit_data(*d, ell)?
                .generators
                .into_iter()
                .map(|y| Generator { subfield: Some(0), value: FieldElement::Quadratic(y) })
                .collect();
            (vec![*d], 2, gens)
        }
        FieldSpec::Biquadratic(d1, d2) => {
            let radicands = vec![*d1, *d2, third_radicand(*d1, *d2)];
            let mut gens = vec![Generator { subfield: None, value: ell_q }];
            for (i, &d) in radicands.iter().enumerate() {
                let sub = quad_unit_data(d, ell)?;
                let mut elements: Vec<QuadElement> = sub.epsilon.into_iter().collect();
                if sub.principal.branch.is_some() {
                    elements.push(sub.principal.generator);
                }
                gens.extend(elements.into_iter().map(|y| Generator { subfield: Some(i), value: FieldElement::Quadratic(y) }));
            }
            (radicands, 4, gens)
        }
        other => return Err(NumFieldError::Unsupported(format!("no oracle for {other}"))),
    };
    let split: Vec<bool> = radicands.iter().map(|&d| quadratic_splitting(d, ell) == Splitting::Split).collect();

    let mut places: Vec<usize> = Vec::new();
    for x in 0..order {
        if !places.iter().any(|&r| data.d_ell.contains(data.group.mul(x, data.group.inv(r)))) {
            places.push(x);
        }
    }

    let mut base = vec![true; radicands.len()];
    let mut arch_base = vec![true; radicands.len()];
    if radicands.len() == 3 {
        arch_base[2] = !(radicands[0] < 0 && radicands[1] < 0);
        if split.iter().all(|&s| s) {
            let w = precision + 8;
            let one = BigRational::one();
            let s = radicands
                .iter()
                .map(|&d| PadicQuadElement::from_rationals(ell, &one, &one, d, w).map(|e| e.sqrt_d().cloned().unwrap()))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let g = BigRational::from_integer(radicands[0].gcd(&radicands[1]).into());
            let product = &(&s[0] * &s[1]) * &PadicNumber::from_rational(ell, &(one / g), w);
            base[2] = product.congruent(&s[2], w as i64 - 2);
        }
    }
    Ok(Model {
        radicands,
        order,
        d_ell: data.d_ell.elements().collect(),
        places,
        split,
        base,
        arch_base,
        generators,
    })
}

/// `ẽ_K` for `Q`, quadratic and biquadratic fields.
///
/// Generators span a finite-index subgroup of the ℓ-units modulo torsion.
/// The `Z`-kernel uses that, for Galois `K`, `ν̃_𝔭(x) = 0` iff
/// `N_{K/K^D}(x) ∈ μ·ℓ^Z` (the decomposition field embeds into `Q_ℓ`, where
/// `Log_ℓ` vanishes exactly on `μ·ℓ^Z`); membership is read off the
/// Dirichlet log-embedding. The `ν̃`-matrix at precision `O(ℓ^N)` gives the
/// `Z_ℓ`-rank of the logarithmic units alongside.
pub fn naive_rank_oracle(spec: &FieldSpec, ell: u64, precision: u32) -> Result<OracleOutcome> {
    check_prime(ell)?;
    let m = model(spec, ell, precision)?;

    let rows = m
        .generators
        .iter()
        .map(|g| m.places.iter().map(|&x| m.log_entry(g, x, ell, precision)).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let padic = PadicMatrix::new(rows)?.rank(DEFAULT_GUARD);

    let ell_gen = Generator { subfield: None, value: FieldElement::Rational(BigRational::from_integer(ell.into())) };
    let mut lattice = m
        .generators
        .iter()
        .map(|g| m.log_embedding(&m.decomposition_norm(g), ell))
        .collect::<Result<Vec<_>>>()?;
    lattice.push(m.log_embedding(&ell_gen, ell)?);
    let (lattice_rank, real_ambiguous) = real_rank(lattice);

    let generators = m.generators.len();
    Ok(OracleOutcome {
        tilde_e: generators + 1 - lattice_rank,
        log_unit_rank: generators - padic.rank,
        generators,
        matrix_rank: padic.rank,
        ambiguous: padic.ambiguous || real_ambiguous,
        precision,
    })
}

/// Runs the oracle and, if the rank was ambiguous, once more at `2N`.
pub fn naive_rank_oracle_with_retry(spec: &FieldSpec, ell: u64, precision: u32) -> Result<OracleOutcome> {
    let first = naive_rank_oracle(spec, ell, precision)?;
    if first.ambiguous {
        naive_rank_oracle(spec, ell, 2 * precision)
    } else {
        Ok(first)
    }
}

/// Prime factors of a nonzero integer by trial division.
fn prime_factors(n: &BigInt) -> Result<Vec<u64>> {
    const TRIAL: u64 = 1 << 20;
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < TRIAL && n > BigInt::one() {
        let bp = BigInt::from(p);
        if n.is_multiple_of(&bp) {
            out.push(p);
            while n.is_multiple_of(&bp) {
                n /= &bp;
            }
        }
        if BigInt::from(p) * BigInt::from(p) > n {
            break;
        }
        p += 1;
    }
    if n > BigInt::one() {
        // no factor below min(p, TRIAL), so n is prime when n < p²
        let rest = n.to_u64().filter(|&r| u128::from(r) < u128::from(p) * u128::from(p));
        match rest {
            Some(r) => out.push(r),
            None => return Err(NumFieldError::Unsupported(format!("cannot factor {n}"))),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `Σ_{𝔭∤ℓ} ν_𝔭(x)·f_𝔭·Log_ℓ(p) − Σ_{𝔭|ℓ} Log_ℓ N_{K_𝔭/Q_ℓ}(x)`, which is
/// `O(ℓ^N)` for every nonzero `x` of `Q` or a quadratic field.
pub fn product_formula_residual(x: &FieldElement, ell: u64, precision: u32) -> Result<PadicNumber> {
    check_prime(ell)?;
    if x.is_zero() {
        return Err(NumFieldError::ZeroElement);
    }
    let norm = x.norm();
    let (scale, numerator) = match x {
        FieldElement::Rational(q) => (q.denom().clone(), q.numer().clone()),
        FieldElement::Quadratic(y) => {
            let (u, v, den) = y.clear_denominators();
            (den, u.pow(2) - BigInt::from(y.radicand()) * v.pow(2))
        }
    };
    let extra = val_ell(&BigRational::from_integer(numerator.clone()), ell)?
        + val_ell(&BigRational::from_integer(scale.clone()), ell)?;
    let w = precision + 2 * extra.unsigned_abs() as u32 + 2;
    let d = x.radicand();
    let mut primes = prime_factors(&numerator)?;
    primes.extend(prime_factors(&scale)?);
    primes.sort_unstable();
    primes.dedup();
    debug_assert!(!norm.is_zero());

    let mut total = PadicNumber::zero(ell, w as i64);
    for p in primes.into_iter().filter(|&p| p != ell) {
        let log_p = iwasawa_log_rational(&BigRational::from_integer(p.into()), ell, w)?;
        for place in field_places(d, p) {
            let nu = valuation_at(x, &place)? * place.residue_degree();
            total = &total + &(&PadicNumber::from_i64(ell, nu, w) * &log_p);
        }
    }
    for place in field_places(d, ell) {
        let nu = padic_entry(log_valuation(x, &place, ell, w)?);
        // ν̃ = −Log N_loc, so adding it subtracts the local logarithm
        total = &total + &nu;
    }
    Ok(total.truncate(precision as i64))
}
