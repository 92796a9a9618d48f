//! Characters of finite groups and the character formulas for naive
//! cyclotomic norms.
//!
//! A [`CharacterTable`] fixes a prime `p ≡ 1 (mod exponent)` with
//! `p > 2|G|²`; class functions carry one residue mod `p` per conjugacy class.
//! Inner products of genuine characters are small integers, so they are read
//! back exactly from their residues.

mod galois;
mod table;

pub use self::galois::{
    cla_rank, equality_verdict, gross_equality_criterion, herbrand_character, naive_norm_character,
    naive_rank_galois, subfield_heredity_check, ClaData, EqualityVerdict, GaloisSetting, GrossKuzmin,
    NaiveNormCharacter,
};
pub use self::table::dixon_prime;

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{ConjugacyClasses, FiniteGroup, GroupError, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharsError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("class functions belong to different tables")]
    Mismatch,
    #[error("inner product {0} is out of range; the table is inconsistent")]
    NotIntegral(i64),
    #[error("class function is not a character (multiplicity {0} at irreducible {1})")]
    NotACharacter(i64, usize),
    #[error("a decomposition group at infinity has order 1 or 2, got {0}")]
    InfinityOrder(usize),
    #[error("character formula and deletion rule disagree: {0} vs {1}")]
    PathsDisagree(String, String),
    #[error("r_k + c_k must be at least 1")]
    EmptyBase,
    #[error("character table construction failed: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, CharsError>;

/// A class function with values in `F_p`.
///
/// Permutation characters also keep their integer values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    modulus: u64,
    values: Vec<u64>,
    integral: Option<Vec<i64>>,
}

fn lift(x: u64, p: u64) -> i64 {
    if x > p / 2 {
        x as i64 - p as i64
    } else {
        x as i64
    }
}

impl ClassFunction {
    pub fn from_residues(modulus: u64, values: Vec<u64>) -> Self {
        ClassFunction { modulus, values: values.into_iter().map(|v| v % modulus).collect(), integral: None }
    }

    pub fn from_integers(modulus: u64, values: &[i64]) -> Self {
        let m = modulus as i64;
        ClassFunction {
            modulus,
            values: values.iter().map(|&v| v.rem_euclid(m) as u64).collect(),
            integral: Some(values.to_vec()),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Residues, one per conjugacy class.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn integer_values(&self) -> Option<&[i64]> {
        self.integral.as_deref()
    }

    /// Value at the identity class.
    pub fn degree(&self) -> i64 {
        match &self.integral {
            Some(v) => v[0],
            None => lift(self.values[0], self.modulus),
        }
    }

    pub fn scale(&self, k: i64) -> ClassFunction {
        let p = self.modulus;
        let kk = k.rem_euclid(p as i64) as u64;
        ClassFunction {
            modulus: p,
            values: self.values.iter().map(|&v| v * kk % p).collect(),
            integral: self.integral.as_ref().map(|v| v.iter().map(|&x| x * k).collect()),
        }
    }

    fn compatible(&self, other: &ClassFunction) -> bool {
        self.modulus == other.modulus && self.values.len() == other.values.len()
    }

    fn zip(&self, other: &ClassFunction, f: impl Fn(u64, u64) -> u64, g: impl Fn(i64, i64) -> i64) -> ClassFunction {
        assert!(self.compatible(other), "class functions over different tables");
        let integral = match (&self.integral, &other.integral) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(&x, &y)| g(x, y)).collect()),
            _ => None,
        };
        ClassFunction {
            modulus: self.modulus,
            values: self.values.iter().zip(&other.values).map(|(&x, &y)| f(x, y) % self.modulus).collect(),
            integral,
        }
    }
}

impl Add for &ClassFunction {
    type Output = ClassFunction;
    fn add(self, other: &ClassFunction) -> ClassFunction {
        self.zip(other, |x, y| x + y, |x, y| x + y)
    }
}

impl Sub for &ClassFunction {
    type Output = ClassFunction;
    fn sub(self, other: &ClassFunction) -> ClassFunction {
        let p = self.modulus;
        self.zip(other, move |x, y| x + p - y, |x, y| x - y)
    }
}

/// Multiplicity of each irreducible, in table order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiplicities(Vec<u32>);

impl Multiplicities {
    pub fn new(m: Vec<u32>) -> Self {
        Multiplicities(m)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// Componentwise minimum: the largest common sub-character.
    pub fn meet(&self, other: &Multiplicities) -> Multiplicities {
        assert_eq!(self.len(), other.len());
        Multiplicities(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn plus(&self, other: &Multiplicities) -> Multiplicities {
        assert_eq!(self.len(), other.len());
        Multiplicities(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    /// Exactly the trivial character (row 0 of a table).
    pub fn is_trivial(&self) -> bool {
        self.0.first() == Some(&1) && self.0[1..].iter().all(|&m| m == 0)
    }
}

impl fmt::Display for Multiplicities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableMethod {
    DualGroup,
    ClassAlgebra,
}

/// The irreducible characters of a group, rows sorted by degree and then by
/// residues, so the trivial character comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    order: usize,
    modulus: u64,
    classes: ConjugacyClasses,
    inverse_class: Vec<usize>,
    rows: Vec<ClassFunction>,
    degrees: Vec<u64>,
    method: TableMethod,
}

impl CharacterTable {
    pub fn new(group: &FiniteGroup) -> Result<Self> {
        let method = if group.is_abelian() { TableMethod::DualGroup } else { TableMethod::ClassAlgebra };
        Self::with_method(group, method)
    }

    pub fn with_method(group: &FiniteGroup, method: TableMethod) -> Result<Self> {
        let n = group.order();
        let classes = group.conjugacy_classes();
        let p = dixon_prime(n, group.exponent());
        let mut rows: Vec<(u64, Vec<u64>)> = match method {
            TableMethod::DualGroup => {
                if !group.is_abelian() {
                    return Err(CharsError::Table("dual-group method needs an abelian group".into()));
                }
                let reps = classes.representatives();
                table::dual_group(group, p)?
                    .into_iter()
                    .map(|chi| (1, reps.iter().map(|&g| chi[g]).collect()))
                    .collect()
            }
            TableMethod::ClassAlgebra => table::dixon(group, &classes, p)?,
        };
        rows.sort();
        let degrees: Vec<u64> = rows.iter().map(|r| r.0).collect();
        if rows.len() != classes.len() || degrees.iter().map(|d| d * d).sum::<u64>() != n as u64 {
            return Err(CharsError::Table("degrees do not account for the group order".into()));
        }
        let inverse_class =
            classes.representatives().iter().map(|&g| classes.class_of(group.inv(g))).collect();
        let rows = rows.into_iter().map(|(_, v)| ClassFunction::from_residues(p, v)).collect();
        Ok(CharacterTable { order: n, modulus: p, classes, inverse_class, rows, degrees, method })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn method(&self) -> TableMethod {
        self.method
    }

    pub fn classes(&self) -> &ConjugacyClasses {
        &self.classes
    }

    /// Number of irreducible characters (equal to the number of classes).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.rows
    }

    pub fn irreducible(&self, i: usize) -> &ClassFunction {
        &self.rows[i]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn class_sizes(&self) -> &[usize] {
        self.classes.sizes()
    }

    /// Class index of `g⁻¹` for `g` in each class.
    pub fn inverse_class(&self, k: usize) -> usize {
        self.inverse_class[k]
    }

    /// Whether the table was built for (a group with the classes of) `group`.
    pub fn belongs_to(&self, group: &FiniteGroup) -> bool {
        group.order() == self.order && group.conjugacy_classes() == self.classes
    }

    pub fn trivial(&self) -> ClassFunction {
        ClassFunction::from_integers(self.modulus, &vec![1; self.len()])
    }

    pub fn regular(&self) -> ClassFunction {
        let mut v = vec![0; self.len()];
        v[0] = self.order as i64;
        ClassFunction::from_integers(self.modulus, &v)
    }

    pub fn zero(&self) -> ClassFunction {
        ClassFunction::from_integers(self.modulus, &vec![0; self.len()])
    }

    /// `Σ mᵢ·χᵢ`.
    pub fn compose(&self, m: &Multiplicities) -> ClassFunction {
        assert_eq!(m.len(), self.len());
        let p = self.modulus;
        let values = (0..self.len())
            .map(|k| self.rows.iter().zip(m.as_slice()).fold(0, |acc, (row, &mi)| (acc + row.values[k] * mi as u64) % p))
            .collect();
        ClassFunction::from_residues(p, values)
    }

    fn check(&self, chi: &ClassFunction) -> Result<()> {
        if chi.modulus != self.modulus || chi.values.len() != self.len() {
            return Err(CharsError::Mismatch);
        }
        Ok(())
    }

    /// `(1/|G|)·Σ_g χ(g)·ψ(g⁻¹)`, recognised as an integer.
    pub fn inner_product(&self, chi: &ClassFunction, psi: &ClassFunction) -> Result<i64> {
        self.check(chi)?;
        self.check(psi)?;
        let p = self.modulus;
        let sum = (0..self.len()).fold(0u64, |acc, k| {
            let h = self.classes.sizes()[k] as u64;
            (acc + h * chi.values[k] % p * psi.values[self.inverse_class[k]]) % p
        });
        let value = lift(sum * table_inv(self.order as u64, p) % p, p);
        let bound = (self.order * self.order) as i64;
        if value.abs() > bound {
            return Err(CharsError::NotIntegral(value));
        }
        Ok(value)
    }

    pub fn multiplicities(&self, chi: &ClassFunction) -> Result<Multiplicities> {
        let mut out = Vec::with_capacity(self.len());
        for (i, row) in self.rows.iter().enumerate() {
            let m = self.inner_product(chi, row)?;
            if m < 0 {
                return Err(CharsError::NotACharacter(m, i));
            }
            out.push(m as u32);
        }
        Ok(Multiplicities(out))
    }

    pub fn degree_of(&self, m: &Multiplicities) -> u64 {
        m.as_slice().iter().zip(&self.degrees).map(|(&mi, &d)| mi as u64 * d).sum()
    }

    /// Stable label of irreducible `i`: row index and degree.
    pub fn label(&self, i: usize) -> String {
        format!("χ{i}[{}]", self.degrees[i])
    }

    /// Renders `Σ mᵢ·χᵢ` with [`label`](Self::label)s, or `0`.
    pub fn describe(&self, m: &Multiplicities) -> String {
        let terms: Vec<String> = m
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &mi)| mi > 0)
            .map(|(i, &mi)| if mi == 1 { self.label(i) } else { format!("{mi}·{}", self.label(i)) })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn table_inv(a: u64, p: u64) -> u64 {
    crate::groups::mod_pow(a % p, p - 2, p)
}

pub fn character_table(group: &FiniteGroup) -> Result<CharacterTable> {
    CharacterTable::new(group)
}

/// `Ind_H^G 1`: the number of left cosets of `H` fixed by each class.
pub fn induced_trivial(group: &FiniteGroup, table: &CharacterTable, h: &Subgroup) -> Result<ClassFunction> {
    if !table.belongs_to(group) {
        return Err(CharsError::Mismatch);
    }
    let h = group.subgroup_from_mask(h.mask())?;
    let values: Vec<i64> =
        table.classes.representatives().iter().map(|&g| group.coset_fixed_points(g, &h) as i64).collect();
    Ok(ClassFunction::from_integers(table.modulus, &values))
}

pub fn inner_product(table: &CharacterTable, chi: &ClassFunction, psi: &ClassFunction) -> Result<i64> {
    table.inner_product(chi, psi)
}

pub fn multiplicities(chi: &ClassFunction, table: &CharacterTable) -> Result<Multiplicities> {
    table.multiplicities(chi)
}

/// Multiplicities of `Σ deg(χᵢ)·χᵢ` over the irreducibles absent from `chi_ell`.
pub fn prime_part_multiplicities(table: &CharacterTable, chi_ell: &ClassFunction) -> Result<Multiplicities> {
    let m = table.multiplicities(chi_ell)?;
    Ok(Multiplicities(
        m.as_slice().iter().zip(table.degrees()).map(|(&mi, &d)| if mi == 0 { d as u32 } else { 0 }).collect(),
    ))
}

/// The part of the regular character with no constituent in common with `chi_ell`.
pub fn prime_part_of_regular(table: &CharacterTable, chi_ell: &ClassFunction) -> Result<ClassFunction> {
    Ok(table.compose(&prime_part_multiplicities(table, chi_ell)?))
}

pub fn meet(chi: &ClassFunction, psi: &ClassFunction, table: &CharacterTable) -> Result<ClassFunction> {
    let m = table.multiplicities(chi)?.meet(&table.multiplicities(psi)?);
    Ok(table.compose(&m))
}
