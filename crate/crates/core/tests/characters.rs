use lognorm::chars::{induced_trivial, CharacterTable, GaloisSetting};
use lognorm::groups::{catalog, symmetric_group, FiniteGroup};
use proptest::prelude::*;

fn all_groups() -> Vec<(&'static str, FiniteGroup)> {
    let mut out = catalog::groups_up_to(16);
    out.push(("S4", symmetric_group(4).unwrap()));
    out
}

#[test]
fn degrees_and_both_orthogonality_relations() {
    for (name, g) in all_groups() {
        let t = CharacterTable::new(&g).unwrap();
        let p = t.modulus();
        assert_eq!(t.degrees().iter().map(|d| d * d).sum::<u64>(), g.order() as u64, "{name}");
        for i in 0..t.len() {
            for j in 0..t.len() {
                let ip = t.inner_product(t.irreducible(i), t.irreducible(j)).unwrap();
                assert_eq!(ip, i64::from(i == j), "{name}");
            }
        }
        // column relation: Σ_χ χ(g)·χ(h⁻¹) = |C_G(g)|·[g ~ h]
        for a in 0..t.len() {
            for b in 0..t.len() {
                let s = t.irreducibles().iter().fold(0, |acc, chi| {
                    (acc + chi.values()[a] * chi.values()[t.inverse_class(b)]) % p
                });
                let expected = if a == b { (g.order() / t.class_sizes()[a]) as u64 } else { 0 };
                assert_eq!(s, expected, "{name}: classes {a}, {b}");
            }
        }
    }
}

#[test]
fn permutation_multiplicities_are_galois_stable() {
    for (name, g) in all_groups() {
        let t = CharacterTable::new(&g).unwrap();
        let classes = t.classes();
        let e = g.exponent();
        let reps = classes.representatives();
        let subgroups = g.all_subgroups();
        for k in (1..e).filter(|k| num_integer::gcd(*k, e) == 1) {
            let conj: Vec<usize> = t
                .irreducibles()
                .iter()
                .map(|chi| {
                    let values: Vec<u64> =
                        reps.iter().map(|&x| chi.values()[classes.class_of(g.power(x, k as u64))]).collect();
                    t.irreducibles().iter().position(|psi| psi.values() == values.as_slice()).unwrap()
                })
                .collect();
            for h in &subgroups {
                let m = t.multiplicities(&induced_trivial(&g, &t, h).unwrap()).unwrap();
                for (i, &j) in conj.iter().enumerate() {
                    assert_eq!(m.get(i), m.get(j), "{name}: σ_{k} moves χ{i} to χ{j}");
                }
            }
        }
    }
}

#[test]
fn formula_paths_agree_on_small_groups() {
    for (name, g) in all_groups() {
        let t = CharacterTable::new(&g).unwrap();
        let subgroups = g.all_subgroups();
        for d_inf in subgroups.iter().filter(|h| h.order() <= 2) {
            for d_ell in &subgroups {
                let s = GaloisSetting::new(&g, &t, *d_inf, *d_ell).unwrap();
                let nn = s.naive_norm().unwrap_or_else(|e| panic!("{name}: {e}"));
                let (r, c) = s.signature();
                let herbrand = r + c + s.ell_places() - 1;
                assert!(1 <= nn.rank && nn.rank <= herbrand, "{name}");
                assert_eq!(s.herbrand_character().degree() as u64, herbrand);
                if let Some(cla) = s.ell_adic_conjugation() {
                    assert_eq!(nn.rank as i64, cla.rank, "{name} {d_inf} {d_ell}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn induced_characters_are_conjugation_invariant(index in 0usize..43, h_pick in any::<prop::sample::Index>(), gamma in any::<prop::sample::Index>()) {
        let groups = all_groups();
        let (_, g) = &groups[index];
        let t = CharacterTable::new(g).unwrap();
        let subgroups = g.all_subgroups();
        let h = subgroups[h_pick.index(subgroups.len())];
        let gamma = gamma.index(g.order());
        let conj = g.conjugate_subgroup(gamma, &h);
        prop_assert_eq!(induced_trivial(g, &t, &h).unwrap(), induced_trivial(g, &t, &conj).unwrap());
        prop_assert_eq!(induced_trivial(g, &t, &h).unwrap().degree() as usize, g.order() / h.order());
    }
}
