use std::collections::HashMap;
use std::hash::Hash;

use num_integer::Integer;

use super::{FiniteGroup, GroupError, Result, MAX_ORDER};

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(GroupError::Empty);
    }
    if n > MAX_ORDER {
        return Err(GroupError::TooLarge(n));
    }
    Ok(())
}

pub fn cyclic_group(n: usize) -> Result<FiniteGroup> {
    check_order(n)?;
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(table)
}

/// `G × H`, with `(g, h)` stored at index `g·|H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let (n, m) = (g.order(), h.order());
    check_order(n * m)?;
    let table = (0..n * m)
        .map(|x| {
            (0..n * m)
                .map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m))
                .collect()
        })
        .collect();
    let labels = (0..n * m).map(|x| format!("({},{})", g.label(x / m), h.label(x % m))).collect();
    Ok(FiniteGroup::from_table(table)?.with_labels(labels))
}

/// `(Z/n)^×`, elements in increasing residue order and labelled by residue.
pub fn unit_group_mod(n: u64) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(GroupError::Construction("modulus must be positive".into()));
    }
    let residues: Vec<u64> = if n == 1 { vec![0] } else { (1..n).filter(|&a| a.gcd(&n) == 1).collect() };
    check_order(residues.len())?;
    let index: HashMap<u64, usize> = residues.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let table = residues
        .iter()
        .map(|&a| residues.iter().map(|&b| index[&((a * b) % n)]).collect())
        .collect();
    let labels = residues.iter().map(|r| r.to_string()).collect();
    Ok(FiniteGroup::from_table(table)?.with_labels(labels))
}

/// `N ⋊ H` where `action(h, x)` is the automorphism of `N` attached to `h`.
/// The element `(x, h)` is stored at index `x·|H| + h`.
pub fn semidirect_product(
    n: &FiniteGroup,
    h: &FiniteGroup,
    action: impl Fn(usize, usize) -> usize,
) -> Result<FiniteGroup> {
    let (a, b) = (n.order(), h.order());
    check_order(a * b)?;
    let act: Vec<Vec<usize>> = (0..b).map(|hh| (0..a).map(|x| action(hh, x)).collect()).collect();
    for (hh, phi) in act.iter().enumerate() {
        for x in 0..a {
            for y in 0..a {
                if phi[n.mul(x, y)] != n.mul(phi[x], phi[y]) {
                    return Err(GroupError::Construction(format!("action of {hh} is not an automorphism")));
                }
            }
        }
    }
    for h1 in 0..b {
        for h2 in 0..b {
            for x in 0..a {
                if act[h.mul(h1, h2)][x] != act[h1][act[h2][x]] {
                    return Err(GroupError::Construction("action is not a homomorphism".into()));
                }
            }
        }
    }
    let table = (0..a * b)
        .map(|p| {
            let (x1, h1) = (p / b, p % b);
            (0..a * b)
                .map(|q| {
                    let (x2, h2) = (q / b, q % b);
                    n.mul(x1, act[h1][x2]) * b + h.mul(h1, h2)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(table)
}

/// Closure of a generating set inside an ambient multiplicative structure.
fn group_from_generators<T: Clone + Eq + Hash>(
    identity: T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
    label: impl Fn(&T) -> String,
) -> Result<FiniteGroup> {
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
    let mut i = 0;
    while i < elements.len() {
        for g in gens {
            let y = mul(&elements[i], g);
            if !index.contains_key(&y) {
                if elements.len() == MAX_ORDER {
                    return Err(GroupError::TooLarge(MAX_ORDER + 1));
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        i += 1;
    }
    let table = elements
        .iter()
        .map(|a| elements.iter().map(|b| index[&mul(a, b)]).collect())
        .collect();
    let labels = elements.iter().map(label).collect();
    Ok(FiniteGroup::from_table(table)?.with_labels(labels))
}

/// Group generated by permutations of `0..degree`, composed right to left.
pub fn permutation_group(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
    for g in gens {
        let mut seen = vec![false; degree];
        if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
            return Err(GroupError::Construction(format!("{g:?} is not a permutation of degree {degree}")));
        }
    }
    let identity: Vec<usize> = (0..degree).collect();
    group_from_generators(
        identity,
        gens,
        |a, b| b.iter().map(|&x| a[x]).collect(),
        |p| format!("{p:?}"),
    )
}

/// Group generated by 2×2 matrices `[a, b, c, d]` over `F_p`.
pub fn matrix_group_mod_p(p: u64, gens: &[[u64; 4]]) -> Result<FiniteGroup> {
    let mul = |x: &[u64; 4], y: &[u64; 4]| {
        [
            (x[0] * y[0] + x[1] * y[2]) % p,
            (x[0] * y[1] + x[1] * y[3]) % p,
            (x[2] * y[0] + x[3] * y[2]) % p,
            (x[2] * y[1] + x[3] * y[3]) % p,
        ]
    };
    group_from_generators([1, 0, 0, 1], gens, mul, |m| format!("{m:?}"))
}

pub fn symmetric_group(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 4 {
        return Err(GroupError::Construction(format!("S_{n} is outside the supported range")));
    }
    if n == 1 {
        return cyclic_group(1);
    }
    let mut cycle: Vec<usize> = (1..n).collect();
    cycle.push(0);
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    permutation_group(n, &[cycle, swap])
}

pub fn alternating_group_4() -> Result<FiniteGroup> {
    permutation_group(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
}

/// Dihedral group of order `2n`.
pub fn dihedral_group(n: usize) -> Result<FiniteGroup> {
    let cn = cyclic_group(n)?;
    let c2 = cyclic_group(2)?;
    semidirect_product(&cn, &c2, |h, x| if h == 0 { x } else { (n - x) % n })
}

/// Generalised quaternion group of order `2^k` (`k ≥ 3`), realised inside
/// `SL_2(F_p)` for a prime `p ≡ 1 mod 2^(k-1)`.
pub fn generalized_quaternion_group(order: usize) -> Result<FiniteGroup> {
    if order < 8 || !order.is_power_of_two() || order > MAX_ORDER {
        return Err(GroupError::Construction(format!("no generalised quaternion group of order {order}")));
    }
    let m = (order / 2) as u64;
    let p = (1..).map(|k| k * m + 1).find(|&q| crate::padic::is_prime(q)).unwrap();
    // an element of exact order m in F_p^×
    let zeta = (2..p)
        .map(|g| mod_pow(g, (p - 1) / m, p))
        .find(|&z| mod_pow(z, m / 2, p) != 1)
        .unwrap();
    let zeta_inv = mod_pow(zeta, m - 1, p);
    matrix_group_mod_p(p, &[[zeta, 0, 0, zeta_inv], [0, 1, p - 1, 0]])
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_constructions() {
        assert_eq!(cyclic_group(1).unwrap().order(), 1);
        assert_eq!(cyclic_group(65).unwrap_err(), GroupError::TooLarge(65));
        let v4 = unit_group_mod(8).unwrap();
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.exponent(), 2);
        assert_eq!(v4.labels().unwrap(), &["1", "3", "5", "7"]);
        assert_eq!(symmetric_group(3).unwrap().order(), 6);
        assert_eq!(alternating_group_4().unwrap().order(), 12);
        assert_eq!(dihedral_group(4).unwrap().order(), 8);
        assert!(!dihedral_group(4).unwrap().is_abelian());
        let q16 = generalized_quaternion_group(16).unwrap();
        assert_eq!(q16.order(), 16);
        assert_eq!((0..16).filter(|&g| q16.element_order(g) == 2).count(), 1);
    }

    #[test]
    fn unit_group_orders_are_totients() {
        let phi = |n: u64| (1..=n).filter(|&a| a.gcd(&n) == 1).count();
        for n in 1..=60u64 {
            let g = unit_group_mod(n).unwrap();
            assert_eq!(g.order(), phi(n), "n = {n}");
            assert!(g.is_abelian());
        }
    }

    #[test]
    fn bad_actions_are_rejected() {
        let c3 = cyclic_group(3).unwrap();
        let c2 = cyclic_group(2).unwrap();
        // x -> x + 1 is not an automorphism
        assert!(semidirect_product(&c3, &c2, |h, x| if h == 0 { x } else { (x + 1) % 3 }).is_err());
        assert!(permutation_group(3, &[vec![0, 0, 1]]).is_err());
    }
}
