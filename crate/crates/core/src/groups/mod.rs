//! Finite groups given by Cayley tables, with the subgroup machinery needed to
//! model a Galois group together with its decomposition subgroups.
//!
//! Elements are indices `0..n`. Subgroups are bitmasks, which caps the order
//! at [`MAX_ORDER`].

mod build;
pub mod catalog;
mod json;

pub use self::build::{
    alternating_group_4, cyclic_group, dihedral_group, direct_product, generalized_quaternion_group,
    matrix_group_mod_p, permutation_group, semidirect_product, symmetric_group, unit_group_mod,
};
pub use self::json::{AbstractGroupDoc, AbstractGroupInput};
pub(crate) use self::build::mod_pow;

use std::fmt;

use thiserror::Error;

pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order {0} exceeds the supported maximum of 64")]
    TooLarge(usize),
    #[error("empty group table")]
    Empty,
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("product is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid construction: {0}")]
    Construction(String),
    #[error("abstract group document: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, GroupError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u8>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// A subgroup, stored as a membership mask over the parent's elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    mask: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    class_of: Vec<usize>,
    sizes: Vec<usize>,
    representatives: Vec<usize>,
    members: Vec<u64>,
}

/// `G/H` together with the projection `G → G/H`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub projection: Vec<usize>,
}

fn bit(g: usize) -> u64 {
    1u64 << g
}

fn mask_elements(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&g| mask & bit(g) != 0)
}

impl FiniteGroup {
    /// Validates a Cayley table `table[g][h] = g·h`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::Malformed(format!("row {i} has length {}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(GroupError::Malformed(format!("entry {x} out of range in row {i}")));
                }
                flat.push(x as u8);
            }
        }
        let at = |a: usize, b: usize| flat[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| at(g, h) == identity && at(h, g) == identity)
                .ok_or(GroupError::NoInverse(g))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup { order: n, table: flat, identity, inverse, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g·x·g⁻¹`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => format!("g{g}"),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn power(&self, g: usize, k: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).map(|g| self.element_order(g)).fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    fn full_mask(&self) -> u64 {
        if self.order == 64 { u64::MAX } else { (1u64 << self.order) - 1 }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { mask: self.full_mask() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { mask: bit(self.identity) }
    }

    /// Checks the subgroup axioms for an explicit element list.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut mask = 0;
        for &g in elements {
            if g >= self.order {
                return Err(GroupError::NotASubgroup(format!("element {g} out of range")));
            }
            mask |= bit(g);
        }
        self.subgroup_from_mask(mask)
    }

    pub fn subgroup_from_mask(&self, mask: u64) -> Result<Subgroup> {
        if mask & !self.full_mask() != 0 {
            return Err(GroupError::NotASubgroup("element out of range".into()));
        }
        if mask & bit(self.identity) == 0 {
            return Err(GroupError::NotASubgroup("missing the identity".into()));
        }
        for a in mask_elements(mask) {
            if mask & bit(self.inv(a)) == 0 {
                return Err(GroupError::NotASubgroup(format!("inverse of {a} missing")));
            }
            for b in mask_elements(mask) {
                if mask & bit(self.mul(a, b)) == 0 {
                    return Err(GroupError::NotASubgroup(format!("not closed at ({a}, {b})")));
                }
            }
        }
        Ok(Subgroup { mask })
    }

    fn closure(&self, seed: u64) -> u64 {
        let gens: Vec<usize> = mask_elements(seed).collect();
        let mut mask = bit(self.identity);
        let mut queue = vec![self.identity];
        while let Some(x) = queue.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if mask & bit(y) == 0 {
                    mask |= bit(y);
                    queue.push(y);
                }
            }
        }
        mask
    }

    /// Subgroup generated by the given elements.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let seed = gens.iter().fold(0, |m, &g| m | bit(g));
        Subgroup { mask: self.closure(seed) }
    }

    /// Smallest subgroup containing both.
    pub fn join(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        Subgroup { mask: self.closure(h.mask | k.mask) }
    }

    /// Every subgroup, ordered by (order, mask).
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut cyclic: Vec<Subgroup> = (0..self.order).map(|g| self.generated(&[g])).collect();
        cyclic.sort();
        cyclic.dedup();
        let mut seen: std::collections::BTreeSet<Subgroup> = cyclic.iter().copied().collect();
        let mut frontier: Vec<Subgroup> = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.mask & !h.mask == 0 {
                        continue;
                    }
                    let j = self.join(h, c);
                    if seen.insert(j) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<Subgroup> = seen.into_iter().collect();
        all.sort_by_key(|h| (h.order(), h.mask));
        all
    }

    pub fn conjugacy_classes(&self) -> ConjugacyClasses {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut members = Vec::new();
        let mut order_of_visit: Vec<usize> = vec![self.identity];
        order_of_visit.extend((0..n).filter(|&g| g != self.identity));
        for x in order_of_visit {
            if class_of[x] != usize::MAX {
                continue;
            }
            let idx = members.len();
            let mut mask = 0u64;
            for g in 0..n {
                let y = self.conjugate(g, x);
                mask |= bit(y);
                class_of[y] = idx;
            }
            members.push(mask);
        }
        let sizes = members.iter().map(|m| m.count_ones() as usize).collect();
        let representatives = members.iter().map(|&m| m.trailing_zeros() as usize).collect();
        ConjugacyClasses { class_of, sizes, representatives, members }
    }

    /// `γHγ⁻¹`.
    pub fn conjugate_subgroup(&self, gamma: usize, h: &Subgroup) -> Subgroup {
        let mask = h.elements().fold(0, |m, x| m | bit(self.conjugate(gamma, x)));
        Subgroup { mask }
    }

    /// The conjugation orbit `{γHγ⁻¹ : γ ∈ G}`, sorted.
    pub fn conjugates_of_subgroup(&self, h: &Subgroup) -> Vec<Subgroup> {
        let mut out: Vec<Subgroup> = (0..self.order).map(|g| self.conjugate_subgroup(g, h)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        (0..self.order).all(|g| self.conjugate_subgroup(g, h) == *h)
    }

    /// `G/H` for normal `H`; cosets are numbered by their least element.
    pub fn quotient(&self, h: &Subgroup) -> Result<Quotient> {
        if !self.is_normal(h) {
            return Err(GroupError::NotNormal);
        }
        let n = self.order;
        let mut projection = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if projection[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for x in h.elements() {
                projection[self.mul(g, x)] = idx;
            }
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| projection[self.mul(a, b)]).collect())
            .collect();
        let labels = reps.iter().map(|&r| format!("{}H", self.label(r))).collect();
        let group = FiniteGroup::from_table(table)?.with_labels(labels);
        Ok(Quotient { group, projection })
    }

    /// Commutator subgroup `[G, G]`.
    pub fn derived_subgroup(&self) -> Subgroup {
        let mut seed = 0u64;
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                seed |= bit(c);
            }
        }
        Subgroup { mask: self.closure(seed) }
    }

    pub fn center(&self) -> Subgroup {
        let mask = (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .fold(0, |m, z| m | bit(z));
        Subgroup { mask }
    }

    /// Number of fixed points of `g` acting on the left cosets `G/H`.
    pub fn coset_fixed_points(&self, g: usize, h: &Subgroup) -> usize {
        // xH is fixed iff x⁻¹gx ∈ H; each fixed coset is counted |H| times.
        let hits = (0..self.order).filter(|&x| h.contains(self.mul(self.mul(self.inv(x), g), x))).count();
        hits / h.order()
    }
}

impl Subgroup {
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn order(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, g: usize) -> bool {
        g < 64 && self.mask & bit(g) != 0
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        mask_elements(self.mask)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup { mask: self.mask & other.mask }
    }

    /// Image under a homomorphism given elementwise.
    pub fn image(&self, map: &[usize]) -> Subgroup {
        Subgroup { mask: self.elements().fold(0, |m, g| m | bit(map[g])) }
    }

    /// Index in a group of the given order.
    pub fn index_in(&self, group_order: usize) -> usize {
        group_order / self.order()
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elems: Vec<String> = self.elements().map(|g| g.to_string()).collect();
        write!(f, "{{{}}}", elems.join(", "))
    }
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = usize> {
        mask_elements(self.members[class])
    }
}
