use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::{hensel_sqrt, PadicNumber, Result};

/// `a + b·√d` with `ℓ`-adic coefficients.
///
/// When `√d` lies in `Q_ℓ` it is lifted once at construction and the element
/// is read through the two embeddings `√d ↦ ±s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicQuadElement {
    a: PadicNumber,
    b: PadicNumber,
    d: i64,
    sqrt: Option<PadicNumber>,
}

impl PadicQuadElement {
    pub fn new(a: PadicNumber, b: PadicNumber, d: i64, precision: u32) -> Result<Self> {
        assert_eq!(a.prime(), b.prime());
        let prime = a.prime();
        let radicand = BigInt::from(d);
        let sqrt = if radicand.mod_floor(&BigInt::from(prime)).is_zero() {
            None
        } else {
            hensel_sqrt(&radicand, prime, precision)?
        };
        Ok(PadicQuadElement { a, b, d, sqrt })
    }

    pub fn from_rationals(prime: u64, a: &BigRational, b: &BigRational, d: i64, precision: u32) -> Result<Self> {
        Self::new(
            PadicNumber::from_rational(prime, a, precision),
            PadicNumber::from_rational(prime, b, precision),
            d,
            precision,
        )
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn is_split(&self) -> bool {
        self.sqrt.is_some()
    }

    /// The lifted `√d`, in the split case.
    pub fn sqrt_d(&self) -> Option<&PadicNumber> {
        self.sqrt.as_ref()
    }

    /// `a² − d·b²`.
    pub fn norm(&self) -> PadicNumber {
        let prime = self.a.prime();
        let d = PadicNumber::from_i64(prime, self.d, self.a.precision().max(self.b.precision()).max(1));
        let aa = &self.a * &self.a;
        let bb = &self.b * &self.b;
        &aa - &(&d * &bb)
    }

    /// `a + sign·b·s`, where `sign` picks one of the two embeddings.
    pub fn embedding(&self, positive: bool) -> Option<PadicNumber> {
        let s = self.sqrt.as_ref()?;
        let bs = &self.b * s;
        Some(if positive { &self.a + &bs } else { &self.a - &bs })
    }
}
