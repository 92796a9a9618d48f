use lognorm::chars::naive_rank_galois;
use lognorm::numfield::{
    decomposition_data, is_squarefree, naive_rank_oracle_with_retry, product_formula_residual, third_radicand,
    FieldElement, FieldSpec, QuadElement, DEFAULT_PRECISION,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const ELLS: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn radicands(max: i64) -> Vec<i64> {
    (-max..=max).filter(|&d| d != 0 && d != 1 && is_squarefree(d)).collect()
}

fn check(spec: &FieldSpec, ell: u64) {
    let data = decomposition_data(spec, ell).unwrap();
    let formula = naive_rank_galois(&data.group, &data.d_inf, &data.d_ell).unwrap();
    let oracle = naive_rank_oracle_with_retry(spec, ell, DEFAULT_PRECISION).unwrap();
    assert!(!oracle.ambiguous, "{spec} at {ell}: ambiguous");
    assert_eq!(oracle.tilde_e as u64, formula, "{spec} at {ell}: {oracle:?}");
    // logarithmic units have rank r + c for abelian fields
    assert_eq!(oracle.log_unit_rank as u64, data.r + data.c, "{spec} at {ell}: {oracle:?}");
    assert!(1 <= formula && formula < data.r + data.c + data.l);
}

#[test]
fn quadratic_oracle_matches_formula() {
    for d in radicands(50) {
        for ell in ELLS {
            check(&FieldSpec::Quadratic(d), ell);
        }
    }
    for ell in ELLS {
        check(&FieldSpec::Rational, ell);
    }
}

#[test]
fn biquadratic_oracle_matches_formula() {
    let pairs = [(-1, 2), (-1, 3), (-1, 5), (-1, -2), (2, 3), (2, 5), (-3, 5), (-7, 2), (5, 13), (-1, 17), (17, 3), (-2, -7)];
    for (a, b) in pairs {
        assert!(third_radicand(a, b).abs() <= 200);
        for ell in ELLS {
            check(&FieldSpec::Biquadratic(a, b), ell);
        }
    }
}

fn element(d: i64, u: i64, v: i64, den: i64) -> FieldElement {
    let r = |n: i64| BigRational::new(BigInt::from(n), BigInt::from(den));
    if d == 1 {
        FieldElement::Rational(r(u))
    } else {
        FieldElement::Quadratic(QuadElement::new(r(u), r(v), d))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn product_formula_residual_vanishes(
        d in prop::sample::select(radicands(30).into_iter().chain([1]).collect::<Vec<_>>()),
        ell in prop::sample::select(ELLS.to_vec()),
        u in -60i64..60,
        v in -60i64..60,
        den in 1i64..40,
    ) {
        prop_assume!(u != 0 || (v != 0 && d != 1));
        let x = element(d, u, v, den);
        let r = product_formula_residual(&x, ell, 10).unwrap();
        prop_assert!(r.is_zero() && r.absolute_precision() >= 10, "{:?}: {}", x, r);
    }
}
