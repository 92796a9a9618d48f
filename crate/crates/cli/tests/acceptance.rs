//! Acceptance criteria AC1–AC9, one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use lognorm::chars::{
    cla_rank, gross_equality_criterion, induced_trivial, CharacterTable, GaloisSetting,
};
use lognorm::groups::{catalog, symmetric_group, FiniteGroup, Subgroup};
use lognorm::numfield::{
    decomposition_data, is_squarefree, naive_rank_oracle_with_retry, product_formula_residual, FieldElement,
    FieldSpec, QuadElement, DEFAULT_PRECISION,
};
use lognorm::padic::{iwasawa_log, iwasawa_log_rational, teichmuller, PadicNumber};
use lognorm_cli::{corpus_fields, run_corpus, RankReport};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ELLS: [u64; 6] = [2, 3, 5, 7, 11, 13];
const DMAX: i64 = 50;
const CYC_MAX: u64 = 25;
const AC1_BUDGET: Duration = Duration::from_secs(120);
const AC6_BUDGET: Duration = Duration::from_secs(600);
/// Residuals must vanish to `O(ℓ^8)`.
const RESIDUAL_PRECISION: u32 = 8;
const RESIDUAL_SAMPLES: usize = 200;
const LOG_PAIRS: usize = 1000;
/// Log identities are checked as exact congruences mod `ℓ^N`.
const LOG_PRECISION: u32 = 16;
const INDUCED_TRIPLES: usize = 100;
const SEED: u64 = 0x5eed_1065;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Formula-only reports over the quadratic and cyclotomic corpus.
fn corpus_reports(oracle: Option<u32>) -> Result<Vec<RankReport>, String> {
    let fields = corpus_fields(DMAX, CYC_MAX).map_err(|e| e.to_string())?;
    let run = run_corpus(&fields, &ELLS, oracle, 1).map_err(|e| e.to_string())?;
    run.reports.into_iter().collect()
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let reports = corpus_reports(Some(DEFAULT_PRECISION))?;
    let mut checked = 0;
    let mut with_oracle = 0;
    for r in reports.iter().filter(|r| r.l == 1) {
        ensure(r.tilde_e_formula == r.r + r.c, || format!("{} at {}: formula {}", r.spec, r.ell, r.tilde_e_formula))?;
        if let Some(o) = &r.tilde_e_oracle {
            ensure(!o.ambiguous && o.tilde_e == r.r + r.c, || format!("{} at {}: oracle {:?}", r.spec, r.ell, o))?;
            with_oracle += 1;
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < AC1_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} single-place runs ({with_oracle} with oracle) have rank r + c, {elapsed:.1?}"))
}

fn ac2() -> Outcome {
    let reports = corpus_reports(Some(DEFAULT_PRECISION))?;
    let mut checked = 0;
    for r in reports.iter().filter(|r| r.l == r.r + 2 * r.c) {
        ensure(r.tilde_e_formula == 1, || format!("{} at {}: formula {}", r.spec, r.ell, r.tilde_e_formula))?;
        if let Some(o) = &r.tilde_e_oracle {
            ensure(!o.ambiguous && o.tilde_e == 1, || format!("{} at {}: oracle {:?}", r.spec, r.ell, o))?;
        }
        checked += 1;
    }
    ensure(checked > 0, || "no totally split fields".into())?;
    Ok(format!("{checked} totally split runs have rank 1"))
}

fn groups_with_extras() -> Vec<(&'static str, FiniteGroup)> {
    let mut out = catalog::groups_up_to(16);
    out.push(("S4", symmetric_group(4).unwrap()));
    out
}

fn ac3() -> Outcome {
    let mut triples = 0;
    for spec in corpus_fields(DMAX, CYC_MAX).map_err(|e| e.to_string())? {
        for ell in ELLS {
            let Ok(data) = decomposition_data(&spec, ell) else { continue };
            let t = CharacterTable::new(&data.group).map_err(|e| e.to_string())?;
            GaloisSetting::new(&data.group, &t, data.d_inf, data.d_ell)
                .and_then(|s| s.naive_norm())
                .map_err(|e| format!("{spec} at {ell}: {e}"))?;
            triples += 1;
        }
    }
    let mut abstract_pairs = 0;
    for (name, g) in catalog::groups_up_to(16) {
        let t = CharacterTable::new(&g).map_err(|e| e.to_string())?;
        let subgroups = g.all_subgroups();
        for d_inf in subgroups.iter().filter(|h| h.order() <= 2) {
            for d_ell in &subgroups {
                GaloisSetting::new(&g, &t, *d_inf, *d_ell)
                    .and_then(|s| s.naive_norm())
                    .map_err(|e| format!("{name}: {e}"))?;
                abstract_pairs += 1;
            }
        }
    }
    Ok(format!("meet and deletion paths agree on {triples} corpus triples and {abstract_pairs} abstract pairs"))
}

fn ac4() -> Outcome {
    let c2 = lognorm::groups::cyclic_group(2).unwrap();
    let v4 = lognorm::groups::direct_product(&c2, &c2).unwrap();
    let t = CharacterTable::new(&v4).map_err(|e| e.to_string())?;
    let sigma = v4.generated(&[2]);
    let tau = v4.generated(&[1]);
    let s = GaloisSetting::new(&v4, &t, sigma, tau).map_err(|e| e.to_string())?;
    let expected = cla_rank(0, 2, 0, 1).map_err(|e| e.to_string())?;
    let rank = s.naive_rank().map_err(|e| e.to_string())?;
    ensure(expected == 2 && rank as i64 == expected, || format!("quartic CM: formula {rank}, closed form {expected}"))?;

    let mut configurations = 0;
    for g in [v4, lognorm::groups::cyclic_group(4).unwrap()] {
        let t = CharacterTable::new(&g).map_err(|e| e.to_string())?;
        let subgroups = g.all_subgroups();
        for d_inf in subgroups.iter().filter(|h| h.order() <= 2) {
            for d_ell in &subgroups {
                let s = GaloisSetting::new(&g, &t, *d_inf, *d_ell).map_err(|e| e.to_string())?;
                let Some(cla) = s.ell_adic_conjugation() else { continue };
                let rank = s.naive_rank().map_err(|e| e.to_string())?;
                ensure(rank as i64 == cla.rank, || format!("|G| = 4, {d_inf} / {d_ell}: {rank} vs {}", cla.rank))?;
                configurations += 1;
            }
        }
    }
    Ok(format!("quartic CM rank 2 = closed form; {configurations} V4/C4 configurations agree"))
}

fn ac5() -> Outcome {
    let mut real = 0;
    for spec in corpus_fields(DMAX, CYC_MAX).map_err(|e| e.to_string())? {
        for ell in ELLS {
            let Ok(data) = decomposition_data(&spec, ell) else { continue };
            if data.c != 0 {
                continue;
            }
            let criterion = gross_equality_criterion(&data.group, &data.d_inf, &data.d_ell).map_err(|e| e.to_string())?;
            ensure(criterion == (data.l == 1), || format!("{spec} at {ell}: criterion {criterion}, l = {}", data.l))?;
            real += 1;
        }
    }
    Ok(format!("equality criterion holds iff l = 1 on {real} real runs"))
}

fn ac6() -> Outcome {
    let start = Instant::now();
    let fields = corpus_fields(DMAX, CYC_MAX).map_err(|e| e.to_string())?;
    let run = run_corpus(&fields, &ELLS, Some(DEFAULT_PRECISION), 1).map_err(|e| e.to_string())?;
    let s = &run.summary;
    ensure(s.errors == 0, || format!("{} runs failed", s.errors))?;
    ensure(s.disagreements == 0 && s.unresolved_ambiguities == 0, || format!("{s:?}"))?;
    let mut log_units = 0;
    for r in run.reports.iter().flatten() {
        if let Some(o) = &r.tilde_e_oracle {
            ensure(o.log_unit_rank == r.r + r.c, || format!("{} at {}: log-unit rank {}", r.spec, r.ell, o.log_unit_rank))?;
            log_units += 1;
        }
    }
    let mut bq = 0;
    for (a, b) in [(-1, 2), (-1, 3), (-1, -2), (2, 3), (2, 5), (-3, 5), (-7, 2), (5, 13), (-1, 17), (-2, -7)] {
        for ell in ELLS {
            let spec = FieldSpec::Biquadratic(a, b);
            let data = decomposition_data(&spec, ell).map_err(|e| e.to_string())?;
            let formula = lognorm::chars::naive_rank_galois(&data.group, &data.d_inf, &data.d_ell).map_err(|e| e.to_string())?;
            let o = naive_rank_oracle_with_retry(&spec, ell, DEFAULT_PRECISION).map_err(|e| e.to_string())?;
            ensure(!o.ambiguous && o.tilde_e as u64 == formula, || format!("{spec} at {ell}: {formula} vs {o:?}"))?;
            bq += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < AC6_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} corpus and {bq} biquadratic oracle runs agree, 0 ambiguous; log-unit rank r + c on {log_units}; {elapsed:.1?}",
        s.agreements
    ))
}

fn random_element(rng: &mut ChaCha8Rng, d: i64) -> FieldElement {
    loop {
        let den = BigInt::from(rng.gen_range(1i64..=60));
        let u = rng.gen_range(-400i64..=400);
        let v = rng.gen_range(-400i64..=400);
        let a = BigRational::new(u.into(), den.clone());
        let b = BigRational::new(v.into(), den);
        let x = if d == 1 { FieldElement::Rational(a) } else { FieldElement::Quadratic(QuadElement::new(a, b, d)) };
        if !x.is_zero() {
            return x;
        }
    }
}

fn ac7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut fields = 0;
    let mut total = 0;
    for d in (-DMAX..=DMAX).filter(|&d| d == 1 || (d != 0 && is_squarefree(d))) {
        for i in 0..RESIDUAL_SAMPLES {
            let ell = ELLS[i % ELLS.len()];
            let x = random_element(&mut rng, d);
            let r = product_formula_residual(&x, ell, RESIDUAL_PRECISION).map_err(|e| format!("d = {d}: {e}"))?;
            ensure(r.is_zero() && r.absolute_precision() >= RESIDUAL_PRECISION as i64, || {
                format!("d = {d}, ell = {ell}, {x:?}: residual {r}")
            })?;
            total += 1;
        }
        fields += 1;
    }
    Ok(format!("{total} residuals vanish to O(l^{RESIDUAL_PRECISION}) over {fields} fields"))
}

fn random_rational(rng: &mut ChaCha8Rng, ell: u64) -> BigRational {
    loop {
        let num = rng.gen_range(-100_000i64..=100_000);
        let den = rng.gen_range(1i64..=100_000);
        if num != 0 {
            let mut q = BigRational::new(num.into(), den.into());
            for _ in 0..rng.gen_range(0..3) {
                q *= BigRational::from_integer(ell.into());
            }
            return q;
        }
    }
}

fn ac8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let n = LOG_PRECISION;
    for ell in ELLS {
        let log = |q: &BigRational, prec: u32| iwasawa_log_rational(q, ell, prec).map_err(|e| e.to_string());
        for _ in 0..LOG_PAIRS {
            let x = random_rational(&mut rng, ell);
            let y = random_rational(&mut rng, ell);
            let sum = &log(&x, n)? + &log(&y, n)?;
            let product = log(&(&x * &y), n)?;
            ensure(product.congruent(&sum, n as i64), || format!("Log({x}·{y}) at {ell}"))?;
            // recomputing at higher precision refines, never contradicts
            let fine = log(&x, 2 * n)?;
            ensure(fine.congruent(&log(&x, n)?, n as i64), || format!("precision drift for {x} at {ell}"))?;
        }
        let l = BigRational::from_integer(ell.into());
        ensure(log(&l, n)?.is_zero(), || format!("Log({ell}) != 0"))?;
        ensure(log(&BigRational::from_integer((-1).into()), n)?.is_zero(), || "Log(-1) != 0".into())?;
        for a in 1..ell.min(50) {
            let zeta = teichmuller(&PadicNumber::from_i64(ell, a as i64, n), n).map_err(|e| e.to_string())?;
            let value = iwasawa_log(&zeta, n).map_err(|e| e.to_string())?;
            ensure(value.is_zero(), || format!("Log of the root of unity lifting {a} mod {ell}"))?;
        }
    }
    Ok(format!("{LOG_PAIRS} pairs per prime: homomorphism, precision monotonicity, Log(l) = Log(zeta) = 0, exact mod l^{n}"))
}

fn ac9() -> Outcome {
    let groups = groups_with_extras();
    for (name, g) in &groups {
        let t = CharacterTable::new(g).map_err(|e| format!("{name}: {e}"))?;
        let sum: u64 = t.degrees().iter().map(|d| d * d).sum();
        ensure(sum == g.order() as u64, || format!("{name}: Σ deg² = {sum}"))?;
        for i in 0..t.len() {
            for j in 0..t.len() {
                let ip = t.inner_product(t.irreducible(i), t.irreducible(j)).map_err(|e| e.to_string())?;
                ensure(ip == i64::from(i == j), || format!("{name}: <χ{i}, χ{j}> = {ip}"))?;
            }
        }
    }
    let names: Vec<&str> = groups.iter().map(|(n, _)| *n).collect();
    for required in ["S3", "D8", "Q8", "A4"] {
        ensure(names.contains(&required), || format!("{required} missing"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..INDUCED_TRIPLES {
        let (name, g) = &groups[rng.gen_range(0..groups.len())];
        let t = CharacterTable::new(g).map_err(|e| e.to_string())?;
        let subgroups: Vec<Subgroup> = g.all_subgroups();
        let h = subgroups[rng.gen_range(0..subgroups.len())];
        let gamma = rng.gen_range(0..g.order());
        let conj = g.conjugate_subgroup(gamma, &h);
        let a = induced_trivial(g, &t, &h).map_err(|e| e.to_string())?;
        let b = induced_trivial(g, &t, &conj).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{name}: induced characters differ for {h} and its conjugate by {gamma}"))?;
    }
    Ok(format!(
        "{} groups: Σ deg² = |G| and orthonormal rows; {INDUCED_TRIPLES} conjugation triples invariant",
        groups.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] =
        [("AC1", ac1), ("AC2", ac2), ("AC3", ac3), ("AC4", ac4), ("AC5", ac5), ("AC6", ac6), ("AC7", ac7), ("AC8", ac8), ("AC9", ac9)];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("{name} PASS {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{name} FAIL {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
