//! Concrete number fields: decomposition data for quadratic, biquadratic and
//! unramified cyclotomic fields, and an explicit ℓ-adic computation of the
//! naive norm rank from ℓ-unit generators.

mod oracle;
mod quad;

pub use self::oracle::{
    field_places, local_norm_quad, log_valuation, naive_rank_oracle, naive_rank_oracle_with_retry,
    product_formula_residual, FieldElement, LogValuation, OracleOutcome, Place, DEFAULT_PRECISION,
};
pub use self::quad::{
    class_number, fundamental_unit, principal_power_generator, quad_unit_data, PrincipalPower, QuadElement,
    QuadUnitData,
};

use std::fmt;
use std::path::Path;

use num_integer::Integer;
use thiserror::Error;

use crate::groups::{
    cyclic_group, direct_product, mod_pow, unit_group_mod, AbstractGroupDoc, AbstractGroupInput, FiniteGroup,
    GroupError, Subgroup,
};
use crate::padic::PadicError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumFieldError {
    #[error("cannot parse field spec {0:?}: {1}")]
    Parse(String, String),
    #[error("radicand {0} is not a squarefree integer other than 0 and 1")]
    BadRadicand(i64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("zero has no valuation")]
    ZeroElement,
    #[error("search bound exhausted: {0}")]
    SearchExhausted(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

pub type Result<T> = std::result::Result<T, NumFieldError>;

/// Largest `|d|` accepted by the class-number and generator searches.
pub const RADICAND_CAP: i64 = 200;

#[derive(Debug, Clone)]
pub enum FieldSpec {
    Rational,
    Quadratic(i64),
    Biquadratic(i64, i64),
    Cyclotomic(u64),
    Abstract { source: String, input: Box<AbstractGroupInput> },
}

pub fn is_squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q * q) {
            return false;
        }
        q += 1;
    }
    true
}

fn check_radicand(d: i64) -> Result<i64> {
    if d == 1 || !is_squarefree(d) {
        return Err(NumFieldError::BadRadicand(d));
    }
    Ok(d)
}

/// Squarefree part of `d1·d2`: the third quadratic subfield of `Q(√d1, √d2)`.
pub fn third_radicand(d1: i64, d2: i64) -> i64 {
    let g = d1.gcd(&d2);
    (d1 / g) * (d2 / g)
}

impl FieldSpec {
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 1 {
            return Ok(FieldSpec::Rational);
        }
        Ok(FieldSpec::Quadratic(check_radicand(d)?))
    }

    pub fn biquadratic(d1: i64, d2: i64) -> Result<Self> {
        check_radicand(d1)?;
        check_radicand(d2)?;
        if d1 == d2 {
            return Err(NumFieldError::Unsupported(format!("bq:{d1},{d2} is a quadratic field")));
        }
        Ok(FieldSpec::Biquadratic(d1, d2))
    }

    pub fn cyclotomic(n: u64) -> Result<Self> {
        if n < 3 {
            return Err(NumFieldError::Unsupported(format!("cyc:{n} needs n ≥ 3")));
        }
        Ok(FieldSpec::Cyclotomic(n))
    }

    pub fn from_abstract(source: impl Into<String>, doc: &AbstractGroupDoc) -> Result<Self> {
        Ok(FieldSpec::Abstract { source: source.into(), input: Box::new(doc.validate()?) })
    }

    /// Parses `q:<d>`, `bq:<d1>,<d2>`, `cyc:<n>` or `abs:<path>`.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |msg: &str| NumFieldError::Parse(text.to_string(), msg.to_string());
        let (tag, rest) = text.split_once(':').ok_or_else(|| err("expected <kind>:<data>"))?;
        let int = |s: &str| s.trim().parse::<i64>().map_err(|_| err("expected an integer"));
        match tag {
            "q" => Self::quadratic(int(rest)?),
            "bq" => {
                let (a, b) = rest.split_once(',').ok_or_else(|| err("expected two radicands"))?;
                Self::biquadratic(int(a)?, int(b)?)
            }
            "cyc" => {
                let n = int(rest)?;
                Self::cyclotomic(u64::try_from(n).map_err(|_| err("expected a positive conductor"))?)
            }
            "abs" => {
                let body = std::fs::read_to_string(Path::new(rest)).map_err(|e| err(&e.to_string()))?;
                Self::from_abstract(text, &AbstractGroupDoc::parse(&body)?)
            }
            _ => Err(err("unknown field kind")),
        }
    }

    pub fn is_concrete(&self) -> bool {
        matches!(self, FieldSpec::Rational | FieldSpec::Quadratic(_) | FieldSpec::Biquadratic(..))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "q:1"),
            FieldSpec::Quadratic(d) => write!(f, "q:{d}"),
            FieldSpec::Biquadratic(a, b) => write!(f, "bq:{a},{b}"),
            FieldSpec::Cyclotomic(n) => write!(f, "cyc:{n}"),
            FieldSpec::Abstract { source, .. } => write!(f, "{source}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

fn check_prime(ell: u64) -> Result<()> {
    if crate::padic::is_prime(ell) {
        Ok(())
    } else {
        Err(NumFieldError::NotPrime(ell))
    }
}

/// Behaviour of `p` in `Q(√d)`, from the Kronecker symbol of the discriminant.
pub fn quadratic_splitting(d: i64, p: u64) -> Splitting {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 => Splitting::Split,
            5 => Splitting::Inert,
            _ => Splitting::Ramified,
        };
    }
    let r = d.rem_euclid(p as i64) as u64;
    if r == 0 {
        Splitting::Ramified
    } else if mod_pow(r, (p - 1) / 2, p) == 1 {
        Splitting::Split
    } else {
        Splitting::Inert
    }
}

/// `G = Gal(K/Q)` with decomposition groups at infinity and at `ℓ`.
#[derive(Debug, Clone)]
pub struct DecompositionData {
    pub group: FiniteGroup,
    pub d_inf: Subgroup,
    pub d_ell: Subgroup,
    pub r: u64,
    pub c: u64,
    pub l: u64,
    /// `(e, f)` at `ℓ`; unknown for abstract input.
    pub ramification: Option<(u64, u64)>,
}

impl DecompositionData {
    fn from_groups(group: FiniteGroup, d_inf: Subgroup, d_ell: Subgroup, ramification: Option<(u64, u64)>) -> Self {
        let n = group.order() as u64;
        let (r, c) = if d_inf.order() == 1 { (n, 0) } else { (0, n / 2) };
        let l = d_ell.index_in(group.order()) as u64;
        DecompositionData { group, d_inf, d_ell, r, c, l, ramification }
    }

    pub fn degree(&self) -> u64 {
        self.group.order() as u64
    }

    /// `r + 2c = [K:Q]`, `l = [G:Dℓ]` and `e·f·l = [K:Q]`.
    pub fn is_consistent(&self) -> bool {
        let n = self.degree();
        let ef_ok = match self.ramification {
            Some((e, f)) => e * f * self.l == n && e * f == self.d_ell.order() as u64,
            None => true,
        };
        self.r + 2 * self.c == n && self.l * self.d_ell.order() as u64 == n && ef_ok
    }
}

pub fn decomposition_data(spec: &FieldSpec, ell: u64) -> Result<DecompositionData> {
    check_prime(ell)?;
    match spec {
        FieldSpec::Rational => {
            let g = cyclic_group(1)?;
            let whole = g.whole();
            Ok(DecompositionData::from_groups(g, whole, whole, Some((1, 1))))
        }
        FieldSpec::Quadratic(d) => {
            let g = cyclic_group(2)?;
            let d_inf = if *d < 0 { g.whole() } else { g.trivial_subgroup() };
            let (d_ell, ef) = match quadratic_splitting(*d, ell) {
                Splitting::Split => (g.trivial_subgroup(), (1, 1)),
                Splitting::Inert => (g.whole(), (1, 2)),
                Splitting::Ramified => (g.whole(), (2, 1)),
            };
            Ok(DecompositionData::from_groups(g, d_inf, d_ell, Some(ef)))
        }
        FieldSpec::Biquadratic(d1, d2) => {
            let c2 = cyclic_group(2)?;
            let g = direct_product(&c2, &c2)?;
            let radicands = [*d1, *d2, third_radicand(*d1, *d2)];
            let mut decomposition = g.whole();
            let mut inertia = g.whole();
            for (i, &d) in radicands.iter().enumerate() {
                let kernel = biquadratic_kernel(&g, i);
                match quadratic_splitting(d, ell) {
                    Splitting::Split => {
                        decomposition = decomposition.intersection(&kernel);
                        inertia = inertia.intersection(&kernel);
                    }
                    Splitting::Inert => inertia = inertia.intersection(&kernel),
                    Splitting::Ramified => {}
                }
            }
            let conj = 2 * usize::from(*d1 < 0) + usize::from(*d2 < 0);
            let d_inf = g.generated(&[conj]);
            let e = inertia.order() as u64;
            let f = decomposition.order() as u64 / e;
            Ok(DecompositionData::from_groups(g, d_inf, decomposition, Some((e, f))))
        }
        FieldSpec::Cyclotomic(n) => {
            if n.gcd(&ell) != 1 {
                return Err(NumFieldError::Unsupported(format!("{ell} ramifies in cyc:{n}")));
            }
            let g = unit_group_mod(*n).map_err(|e| match e {
                GroupError::TooLarge(k) => NumFieldError::Unsupported(format!("cyc:{n} has degree {k} > 64")),
                other => other.into(),
            })?;
            let index = |residue: u64| {
                g.labels().unwrap().iter().position(|s| s == &residue.to_string()).expect("unit residue")
            };
            let d_inf = g.generated(&[index(n - 1)]);
            let d_ell = g.generated(&[index(ell % n)]);
            let f = d_ell.order() as u64;
            Ok(DecompositionData::from_groups(g, d_inf, d_ell, Some((1, f))))
        }
        FieldSpec::Abstract { input, .. } => {
            if input.d_inf.order() > 2 {
                return Err(NumFieldError::Unsupported(format!(
                    "decomposition group at infinity of order {}",
                    input.d_inf.order()
                )));
            }
            Ok(DecompositionData::from_groups(input.group.clone(), input.d_inf, input.d_ell, None))
        }
    }
}

/// Subgroup of `C2 × C2` fixing `√d_i`, where element `(a, b)` (index `2a+b`)
/// sends `√d1 ↦ (−1)^a·√d1` and `√d2 ↦ (−1)^b·√d2`.
fn biquadratic_kernel(g: &FiniteGroup, i: usize) -> Subgroup {
    let fixed: Vec<usize> = (0..4).filter(|&x| biquadratic_sign(x, i) == 1).collect();
    g.subgroup(&fixed).expect("kernel of a character")
}

/// Action of element `x` of `C2 × C2` on `√d_i` (`i = 0, 1, 2`).
pub(crate) fn biquadratic_sign(x: usize, i: usize) -> i64 {
    let (a, b) = (x / 2, x % 2);
    let flips = match i {
        0 => a,
        1 => b,
        _ => a + b,
    };
    if flips % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        assert!(matches!(FieldSpec::parse("q:-5").unwrap(), FieldSpec::Quadratic(-5)));
        assert!(matches!(FieldSpec::parse("q:1").unwrap(), FieldSpec::Rational));
        assert!(matches!(FieldSpec::parse("bq:2,-3").unwrap(), FieldSpec::Biquadratic(2, -3)));
        assert!(matches!(FieldSpec::parse("cyc:20").unwrap(), FieldSpec::Cyclotomic(20)));
        for bad in ["q:4", "q:0", "q:x", "bq:2,2", "bq:2", "cyc:2", "cyc:-5", "z:3", "q", "abs:/nonexistent"] {
            assert!(FieldSpec::parse(bad).is_err(), "{bad}");
        }
        assert_eq!(FieldSpec::parse("bq:2,-3").unwrap().to_string(), "bq:2,-3");
    }

    #[test]
    fn quadratic_examples() {
        let dd = decomposition_data(&FieldSpec::Quadratic(2), 7).unwrap();
        assert_eq!((dd.r, dd.c, dd.l), (2, 0, 2));
        let dd = decomposition_data(&FieldSpec::Quadratic(-1), 2).unwrap();
        assert_eq!((dd.r, dd.c, dd.l, dd.ramification), (0, 1, 1, Some((2, 1))));
        assert_eq!(quadratic_splitting(17, 2), Splitting::Split);
        assert_eq!(quadratic_splitting(5, 2), Splitting::Inert);
        assert_eq!(quadratic_splitting(-1, 5), Splitting::Split);
        assert_eq!(quadratic_splitting(2, 5), Splitting::Inert);
        assert_eq!(quadratic_splitting(-15, 5), Splitting::Ramified);
        assert!(decomposition_data(&FieldSpec::Quadratic(2), 4).is_err());
    }

    #[test]
    fn cyclotomic_examples() {
        let dd = decomposition_data(&FieldSpec::Cyclotomic(5), 2).unwrap();
        assert_eq!(dd.d_ell.order(), 4);
        assert_eq!((dd.r, dd.c, dd.l), (0, 2, 1));
        let dd = decomposition_data(&FieldSpec::Cyclotomic(7), 2).unwrap();
        assert_eq!((dd.l, dd.ramification), (2, Some((1, 3))));
        assert!(matches!(
            decomposition_data(&FieldSpec::Cyclotomic(10), 5),
            Err(NumFieldError::Unsupported(_))
        ));
        assert!(matches!(
            decomposition_data(&FieldSpec::Cyclotomic(101), 2),
            Err(NumFieldError::Unsupported(_))
        ));
    }

    #[test]
    fn biquadratic_examples() {
        // Q(i, √2) = Q(ζ8): 2 is totally ramified
        let dd = decomposition_data(&FieldSpec::Biquadratic(-1, 2), 2).unwrap();
        assert_eq!((dd.l, dd.ramification, dd.c), (1, Some((4, 1)), 2));
        // 5 splits in Q(i), is inert in Q(√2) and Q(√-2)
        let dd = decomposition_data(&FieldSpec::Biquadratic(-1, 2), 5).unwrap();
        assert_eq!((dd.l, dd.ramification), (2, Some((1, 2))));
        assert_eq!(third_radicand(6, 10), 15);
        assert_eq!(third_radicand(2, -3), -6);
        for (a, b) in [(2, 3), (-1, 2), (-1, -3), (5, 13), (-7, 2), (6, 10)] {
            for ell in [2, 3, 5, 7, 11, 13] {
                let dd = decomposition_data(&FieldSpec::Biquadratic(a, b), ell).unwrap();
                assert!(dd.is_consistent(), "bq:{a},{b} at {ell}");
            }
        }
    }

    #[test]
    fn squarefree() {
        assert!(is_squarefree(-1) && is_squarefree(30) && !is_squarefree(18) && !is_squarefree(0));
    }
}
