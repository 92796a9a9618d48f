//! Every group of order at most 16, plus a few named groups used in tests.

use super::{
    alternating_group_4, cyclic_group, dihedral_group, direct_product, generalized_quaternion_group,
    matrix_group_mod_p, semidirect_product, symmetric_group, FiniteGroup,
};

fn c(n: usize) -> FiniteGroup {
    cyclic_group(n).expect("small cyclic group")
}

fn prod(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    direct_product(a, b).expect("small direct product")
}

/// `C_m ⋊ C_n` with the generator of `C_n` acting as `x ↦ k·x`.
fn metacyclic(m: usize, n: usize, k: usize) -> FiniteGroup {
    semidirect_product(&c(m), &c(n), |h, x| {
        let mut y = x;
        for _ in 0..h {
            y = (y * k) % m;
        }
        y
    })
    .expect("valid metacyclic data")
}

pub fn quaternion_group() -> FiniteGroup {
    generalized_quaternion_group(8).expect("Q8")
}

/// The central product `C4 ∘ D8`, as the group generated by the Pauli matrices.
fn pauli_group() -> FiniteGroup {
    // over F_5, where 2 is a square root of -1
    matrix_group_mod_p(5, &[[0, 1, 1, 0], [1, 0, 0, 4], [2, 0, 0, 2]]).expect("Pauli group")
}

/// All groups of the given order (up to isomorphism), for orders 1 to 16.
pub fn small_groups(order: usize) -> Vec<(&'static str, FiniteGroup)> {
    let c2 = c(2);
    let v4 = prod(&c2, &c2);
    match order {
        1 => vec![("C1", c(1))],
        2 | 3 | 5 | 7 | 11 | 13 => vec![(prime_name(order), c(order))],
        4 => vec![("C4", c(4)), ("C2xC2", v4)],
        6 => vec![("C6", c(6)), ("S3", symmetric_group(3).unwrap())],
        8 => vec![
            ("C8", c(8)),
            ("C4xC2", prod(&c(4), &c2)),
            ("C2^3", prod(&v4, &c2)),
            ("D8", dihedral_group(4).unwrap()),
            ("Q8", quaternion_group()),
        ],
        9 => vec![("C9", c(9)), ("C3xC3", prod(&c(3), &c(3)))],
        10 => vec![("C10", c(10)), ("D10", dihedral_group(5).unwrap())],
        12 => vec![
            ("C12", c(12)),
            ("C6xC2", prod(&c(6), &c2)),
            ("A4", alternating_group_4().unwrap()),
            ("D12", dihedral_group(6).unwrap()),
            ("Dic12", metacyclic(3, 4, 2)),
        ],
        14 => vec![("C14", c(14)), ("D14", dihedral_group(7).unwrap())],
        15 => vec![("C15", c(15))],
        16 => vec![
            ("C16", c(16)),
            ("C4xC4", prod(&c(4), &c(4))),
            ("C2^2:C4", semidirect_product(&v4, &c(4), |h, x| if h % 2 == 0 { x } else { 2 * (x % 2) + x / 2 })
                .unwrap()),
            ("C4:C4", metacyclic(4, 4, 3)),
            ("C8xC2", prod(&c(8), &c2)),
            ("M16", metacyclic(8, 2, 5)),
            ("D16", dihedral_group(8).unwrap()),
            ("SD16", metacyclic(8, 2, 3)),
            ("Q16", generalized_quaternion_group(16).unwrap()),
            ("C4xC2xC2", prod(&c(4), &v4)),
            ("D8xC2", prod(&dihedral_group(4).unwrap(), &c2)),
            ("Q8xC2", prod(&quaternion_group(), &c2)),
            ("C4oD8", pauli_group()),
            ("C2^4", prod(&v4, &v4)),
        ],
        _ => vec![],
    }
}

fn prime_name(p: usize) -> &'static str {
    match p {
        2 => "C2",
        3 => "C3",
        5 => "C5",
        7 => "C7",
        11 => "C11",
        13 => "C13",
        _ => unreachable!(),
    }
}

/// Every group of order `1..=max_order` (`max_order ≤ 16`).
pub fn groups_up_to(max_order: usize) -> Vec<(&'static str, FiniteGroup)> {
    (1..=max_order.min(16)).flat_map(small_groups).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Isomorphism invariants: enough to separate all groups of order ≤ 16.
    fn invariants(g: &FiniteGroup) -> (usize, bool, usize, usize, usize, Vec<usize>, usize) {
        let mut orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
        orders.sort();
        let mut squares: Vec<usize> = (0..g.order()).map(|x| g.mul(x, x)).collect();
        squares.sort();
        squares.dedup();
        (
            g.order(),
            g.is_abelian(),
            g.center().order(),
            g.conjugacy_classes().len(),
            g.derived_subgroup().order(),
            orders,
            squares.len(),
        )
    }

    #[test]
    fn catalog_is_complete_and_irredundant() {
        let expected = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];
        for (i, &count) in expected.iter().enumerate() {
            let order = i + 1;
            let groups = small_groups(order);
            assert_eq!(groups.len(), count, "order {order}");
            let mut keys: Vec<_> = groups.iter().map(|(_, g)| invariants(g)).collect();
            for (name, g) in &groups {
                assert_eq!(g.order(), order, "{name}");
            }
            keys.sort();
            keys.dedup();
            assert_eq!(keys.len(), count, "order {order}: two entries look isomorphic");
        }
        assert_eq!(groups_up_to(16).len(), 42);
    }
}
