use serde::{Deserialize, Serialize};

use super::{induced_trivial, prime_part_multiplicities, CharacterTable, CharsError, ClassFunction, Multiplicities, Result};
use crate::groups::{FiniteGroup, Subgroup};

/// A Galois group with chosen decomposition groups at infinity and at `ℓ`.
#[derive(Debug, Clone, Copy)]
pub struct GaloisSetting<'a> {
    group: &'a FiniteGroup,
    table: &'a CharacterTable,
    d_inf: Subgroup,
    d_ell: Subgroup,
}

/// Multiplicity vectors of the characters entering the formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaiveNormCharacter {
    pub chi_inf: Multiplicities,
    pub chi_ell: Multiplicities,
    pub chi_bar_ell: Multiplicities,
    pub meet: Multiplicities,
    pub naive: Multiplicities,
    pub rank: u64,
}

/// Data of the totally split subfield `k = K^{Dℓ}` when `K/k` is
/// undecomposed at `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaData {
    pub r_k: u64,
    pub c_k: u64,
    pub rank: i64,
}

/// Status of the Gross–Kuz'min conjecture at `ℓ` for the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrossKuzmin {
    ProvedAbelian,
    ProvedSingleEllPlace,
    /// `K` is undecomposed at `ℓ` over its maximal abelian subfield.
    ProvedUndecomposedOverAbelian,
    Assumed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityVerdict {
    Holds,
    Fails,
    Conditional,
}

pub fn equality_verdict(disjoint_characters: bool, gross_kuzmin: GrossKuzmin) -> EqualityVerdict {
    match (disjoint_characters, gross_kuzmin) {
        (false, _) => EqualityVerdict::Fails,
        (true, GrossKuzmin::Assumed) => EqualityVerdict::Conditional,
        (true, _) => EqualityVerdict::Holds,
    }
}

impl<'a> GaloisSetting<'a> {
    pub fn new(group: &'a FiniteGroup, table: &'a CharacterTable, d_inf: Subgroup, d_ell: Subgroup) -> Result<Self> {
        if !table.belongs_to(group) {
            return Err(CharsError::Mismatch);
        }
        group.subgroup_from_mask(d_inf.mask())?;
        group.subgroup_from_mask(d_ell.mask())?;
        if d_inf.order() > 2 {
            return Err(CharsError::InfinityOrder(d_inf.order()));
        }
        Ok(GaloisSetting { group, table, d_inf, d_ell })
    }

    pub fn group(&self) -> &'a FiniteGroup {
        self.group
    }

    pub fn table(&self) -> &'a CharacterTable {
        self.table
    }

    pub fn d_inf(&self) -> Subgroup {
        self.d_inf
    }

    pub fn d_ell(&self) -> Subgroup {
        self.d_ell
    }

    /// `(r, c)`.
    pub fn signature(&self) -> (u64, u64) {
        let n = self.group.order() as u64;
        if self.d_inf.order() == 1 {
            (n, 0)
        } else {
            (0, n / 2)
        }
    }

    pub fn ell_places(&self) -> u64 {
        self.d_ell.index_in(self.group.order()) as u64
    }

    pub fn chi_inf(&self) -> ClassFunction {
        induced_trivial(self.group, self.table, &self.d_inf).expect("validated subgroup")
    }

    pub fn chi_ell(&self) -> ClassFunction {
        induced_trivial(self.group, self.table, &self.d_ell).expect("validated subgroup")
    }

    /// Character of the `ℓ`-units: `χ∞ + χℓ − 1`.
    pub fn herbrand_character(&self) -> ClassFunction {
        &(&self.chi_inf() + &self.chi_ell()) - &self.table.trivial()
    }

    /// `1 + (χ∞ ∧ χ̄ℓ)`, checked against the deletion rule: remove from `χ∞`
    /// every irreducible whose idempotent does not vanish on `Dℓ`, then add 1.
    pub fn naive_norm(&self) -> Result<NaiveNormCharacter> {
        let t = self.table;
        let chi_inf = t.multiplicities(&self.chi_inf())?;
        let chi_ell = t.multiplicities(&self.chi_ell())?;
        let chi_bar_ell = prime_part_multiplicities(t, &self.chi_ell())?;
        let meet = chi_inf.meet(&chi_bar_ell);
        let mut one = vec![0; t.len()];
        one[0] = 1;
        let one = Multiplicities::new(one);
        let naive = one.plus(&meet);

        let p = t.modulus();
        let classes = t.classes();
        let mut deleted: Vec<u32> = chi_inf.as_slice().to_vec();
        for (i, chi) in t.irreducibles().iter().enumerate() {
            let sum = self.d_ell.elements().fold(0, |acc, h| (acc + chi.values()[classes.class_of(h)]) % p);
            if sum != 0 {
                deleted[i] = 0;
            }
        }
        deleted[0] += 1;
        let other = Multiplicities::new(deleted);
        if other != naive {
            return Err(CharsError::PathsDisagree(naive.to_string(), other.to_string()));
        }
        let rank = t.degree_of(&naive);
        Ok(NaiveNormCharacter { chi_inf, chi_ell, chi_bar_ell, meet, naive, rank })
    }

    pub fn naive_rank(&self) -> Result<u64> {
        Ok(self.naive_norm()?.rank)
    }

    /// Whether `χ∞ ∧ χℓ` is the trivial character.
    pub fn disjoint_characters(&self) -> Result<bool> {
        let t = self.table;
        Ok(t.multiplicities(&self.chi_inf())?.meet(&t.multiplicities(&self.chi_ell())?).is_trivial())
    }

    /// [`disjoint_characters`](Self::disjoint_characters) for the subfield fixed by a normal `h`.
    pub fn subfield_disjoint_characters(&self, h: &Subgroup) -> Result<bool> {
        let q = self.group.quotient(h)?;
        let table = CharacterTable::new(&q.group)?;
        let sub = GaloisSetting::new(
            &q.group,
            &table,
            self.d_inf.image(&q.projection),
            self.d_ell.image(&q.projection),
        )?;
        sub.disjoint_characters()
    }

    /// Present when `Dℓ` is normal, i.e. `K` is undecomposed at `ℓ` over the
    /// totally split field `k = K^{Dℓ}`.
    pub fn ell_adic_conjugation(&self) -> Option<ClaData> {
        if !self.group.is_normal(&self.d_ell) {
            return None;
        }
        let n = self.group.order();
        let l = self.ell_places();
        let (r_k, c_k) = if self.d_inf.is_subgroup_of(&self.d_ell) { (l, 0) } else { (0, l / 2) };
        let infinite_places = self.group.join(&self.d_inf, &self.d_ell).index_in(n) as u64;
        debug_assert_eq!(r_k + c_k, infinite_places);
        let (r, c) = self.signature();
        let rank = cla_rank(r, c, r_k, c_k).expect("k has an infinite place");
        Some(ClaData { r_k, c_k, rank })
    }

    pub fn gross_kuzmin(&self) -> GrossKuzmin {
        if self.group.is_abelian() {
            GrossKuzmin::ProvedAbelian
        } else if self.ell_places() == 1 {
            GrossKuzmin::ProvedSingleEllPlace
        } else if self.group.derived_subgroup().is_subgroup_of(&self.d_ell) {
            GrossKuzmin::ProvedUndecomposedOverAbelian
        } else {
            GrossKuzmin::Assumed
        }
    }

    pub fn equality_verdict(&self) -> Result<EqualityVerdict> {
        Ok(equality_verdict(self.disjoint_characters()?, self.gross_kuzmin()))
    }
}

fn with_setting<T>(
    group: &FiniteGroup,
    d_inf: &Subgroup,
    d_ell: &Subgroup,
    f: impl FnOnce(&GaloisSetting) -> Result<T>,
) -> Result<T> {
    let table = CharacterTable::new(group)?;
    f(&GaloisSetting::new(group, &table, *d_inf, *d_ell)?)
}

pub fn naive_norm_character(group: &FiniteGroup, d_inf: &Subgroup, d_ell: &Subgroup) -> Result<ClassFunction> {
    with_setting(group, d_inf, d_ell, |s| Ok(s.table().compose(&s.naive_norm()?.naive)))
}

pub fn naive_rank_galois(group: &FiniteGroup, d_inf: &Subgroup, d_ell: &Subgroup) -> Result<u64> {
    with_setting(group, d_inf, d_ell, |s| s.naive_rank())
}

pub fn herbrand_character(group: &FiniteGroup, d_inf: &Subgroup, d_ell: &Subgroup) -> Result<ClassFunction> {
    with_setting(group, d_inf, d_ell, |s| Ok(s.herbrand_character()))
}

pub fn gross_equality_criterion(group: &FiniteGroup, d_inf: &Subgroup, d_ell: &Subgroup) -> Result<bool> {
    with_setting(group, d_inf, d_ell, |s| s.disjoint_characters())
}

pub fn subfield_heredity_check(group: &FiniteGroup, d_inf: &Subgroup, d_ell: &Subgroup, h: &Subgroup) -> Result<bool> {
    with_setting(group, d_inf, d_ell, |s| s.subfield_disjoint_characters(h))
}

/// `(r_K + c_K) − (r_k + c_k − 1)`.
pub fn cla_rank(r_big: u64, c_big: u64, r_k: u64, c_k: u64) -> Result<i64> {
    if r_k + c_k == 0 {
        return Err(CharsError::EmptyBase);
    }
    Ok((r_big + c_big) as i64 - (r_k + c_k) as i64 + 1)
}
