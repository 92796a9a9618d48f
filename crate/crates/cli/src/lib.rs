//! Reports and corpus runs behind the `lognorm` binary.

use lognorm::chars::{CharacterTable, ClaData, EqualityVerdict, GaloisSetting, GrossKuzmin, Multiplicities};
use lognorm::numfield::{
    decomposition_data, is_squarefree, naive_rank_oracle_with_retry, FieldSpec, NumFieldError, DEFAULT_PRECISION,
    RADICAND_CAP,
};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Ambiguous(String),
    #[error("{0}")]
    Disagreement(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Ambiguous(_) => 4,
            CliError::Disagreement(_) => 5,
            CliError::Other(_) => 1,
        }
    }
}

impl From<NumFieldError> for CliError {
    fn from(e: NumFieldError) -> Self {
        match e {
            NumFieldError::Parse(..) | NumFieldError::BadRadicand(_) | NumFieldError::NotPrime(_) => {
                CliError::Usage(e.to_string())
            }
            NumFieldError::Unsupported(_) => CliError::Unsupported(e.to_string()),
            NumFieldError::Group(_) => CliError::Usage(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<lognorm::chars::CharsError> for CliError {
    fn from(e: lognorm::chars::CharsError) -> Self {
        match e {
            lognorm::chars::CharsError::InfinityOrder(_) => CliError::Unsupported(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

pub fn parse_spec(text: &str) -> Result<FieldSpec, CliError> {
    Ok(FieldSpec::parse(text)?)
}

/// Precision from `--precision`, else `LOGNORM_PRECISION`, else the default.
pub fn oracle_precision(flag: Option<u32>) -> Result<u32, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("LOGNORM_PRECISION") {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("LOGNORM_PRECISION={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SingleEllPlace,
    TotallySplit,
    EllAdicConjugation,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub tilde_e: u64,
    pub log_unit_rank: u64,
    pub ambiguous: bool,
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub spec: String,
    pub ell: u64,
    pub r: u64,
    pub c: u64,
    pub l: u64,
    pub regime: Regime,
    /// Irreducible labels `χi[deg]`, trivial first.
    pub irreducibles: Vec<String>,
    pub degrees: Vec<u64>,
    pub chi_inf: String,
    pub chi_ell: String,
    pub chi_bar_ell: String,
    pub chi_naive: String,
    pub naive_multiplicities: Multiplicities,
    pub tilde_e_formula: u64,
    pub tilde_e_oracle: Option<OracleSummary>,
    pub herbrand_degree: u64,
    pub disjoint_characters: bool,
    pub gross_kuzmin: GrossKuzmin,
    pub equality_verdict: EqualityVerdict,
    pub ell_adic_conjugation: Option<ClaData>,
}

impl RankReport {
    /// Re-derives the dependent fields from the primary ones.
    pub fn is_consistent(&self) -> bool {
        let rank: u64 = self.naive_multiplicities.as_slice().iter().zip(&self.degrees).map(|(&m, &d)| u64::from(m) * d).sum();
        let verdict = lognorm::chars::equality_verdict(self.disjoint_characters, self.gross_kuzmin);
        rank == self.tilde_e_formula
            && self.herbrand_degree == self.r + self.c + self.l - 1
            && (1..=self.herbrand_degree).contains(&self.tilde_e_formula)
            && verdict == self.equality_verdict
            && self.irreducibles.len() == self.degrees.len()
    }

    pub fn oracle_agrees(&self) -> Option<bool> {
        self.tilde_e_oracle.as_ref().map(|o| !o.ambiguous && o.tilde_e == self.tilde_e_formula)
    }
}

/// Multiplicity vectors of the characters involved, with labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub spec: String,
    pub ell: u64,
    pub irreducibles: Vec<String>,
    pub chi_inf: Multiplicities,
    pub chi_ell: Multiplicities,
    pub chi_bar_ell: Multiplicities,
    pub meet: Multiplicities,
    pub chi_naive: Multiplicities,
    pub chi_naive_text: String,
}

pub fn character_report(spec: &FieldSpec, ell: u64) -> Result<CharacterReport, CliError> {
    let data = decomposition_data(spec, ell)?;
    let table = CharacterTable::new(&data.group)?;
    let setting = GaloisSetting::new(&data.group, &table, data.d_inf, data.d_ell)?;
    let n = setting.naive_norm()?;
    Ok(CharacterReport {
        spec: spec.to_string(),
        ell,
        irreducibles: (0..table.len()).map(|i| table.label(i)).collect(),
        chi_naive_text: table.describe(&n.naive),
        chi_inf: n.chi_inf,
        chi_ell: n.chi_ell,
        chi_bar_ell: n.chi_bar_ell,
        meet: n.meet,
        chi_naive: n.naive,
    })
}

/// Formula report, with the oracle at `oracle` precision for concrete fields.
pub fn rank_report(spec: &FieldSpec, ell: u64, oracle: Option<u32>) -> Result<RankReport, CliError> {
    let data = decomposition_data(spec, ell)?;
    let table = CharacterTable::new(&data.group)?;
    let setting = GaloisSetting::new(&data.group, &table, data.d_inf, data.d_ell)?;
    let n = setting.naive_norm()?;
    let regime = if data.l == 1 {
        Regime::SingleEllPlace
    } else if data.d_ell.order() == 1 {
        Regime::TotallySplit
    } else if data.group.is_normal(&data.d_ell) {
        Regime::EllAdicConjugation
    } else {
        Regime::General
    };
    let tilde_e_oracle = match oracle {
        Some(precision) if spec.is_concrete() => {
            let o = naive_rank_oracle_with_retry(spec, ell, precision)?;
            Some(OracleSummary {
                tilde_e: o.tilde_e as u64,
                log_unit_rank: o.log_unit_rank as u64,
                ambiguous: o.ambiguous,
                precision: o.precision,
            })
        }
        _ => None,
    };
    Ok(RankReport {
        spec: spec.to_string(),
        ell,
        r: data.r,
        c: data.c,
        l: data.l,
        regime,
        irreducibles: (0..table.len()).map(|i| table.label(i)).collect(),
        degrees: table.degrees().to_vec(),
        chi_inf: table.describe(&n.chi_inf),
        chi_ell: table.describe(&n.chi_ell),
        chi_bar_ell: table.describe(&n.chi_bar_ell),
        chi_naive: table.describe(&n.naive),
        naive_multiplicities: n.naive.clone(),
        tilde_e_formula: n.rank,
        tilde_e_oracle,
        herbrand_degree: data.r + data.c + data.l - 1,
        disjoint_characters: setting.disjoint_characters()?,
        gross_kuzmin: setting.gross_kuzmin(),
        equality_verdict: setting.equality_verdict()?,
        ell_adic_conjugation: setting.ell_adic_conjugation(),
    })
}

/// `Q`, then `Q(√d)` for squarefree `2 ≤ |d| ≤ dmax` and `d = −1`, ordered by
/// `(|d|, d)`; then `Q(ζ_n)` for `3 ≤ n ≤ cyc_max`.
pub fn corpus_fields(dmax: i64, cyc_max: u64) -> Result<Vec<FieldSpec>, CliError> {
    if !(0..=RADICAND_CAP).contains(&dmax) {
        return Err(CliError::Usage(format!("--dmax must lie in 0..={RADICAND_CAP}")));
    }
    let mut ds: Vec<i64> = (-dmax..=dmax).filter(|&d| d != 0 && d != 1 && is_squarefree(d)).collect();
    ds.push(1);
    ds.sort_by_key(|&d| (d.abs(), d));
    let mut out: Vec<FieldSpec> = ds.into_iter().map(|d| FieldSpec::quadratic(d).expect("squarefree")).collect();
    out.extend((3..=cyc_max).map(FieldSpec::Cyclotomic));
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub fields: usize,
    pub runs: usize,
    pub oracle_runs: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub unresolved_ambiguities: usize,
    pub equality_holds: usize,
    pub single_ell_place: usize,
    pub totally_split: usize,
    pub errors: usize,
}

pub struct CorpusRun {
    pub reports: Vec<Result<RankReport, String>>,
    pub summary: CorpusSummary,
}

/// Every `(field, ℓ)` pair, with cyclotomic fields skipped where `ℓ | n`.
pub fn run_corpus(fields: &[FieldSpec], ells: &[u64], oracle: Option<u32>, jobs: usize) -> Result<CorpusRun, CliError> {
    let pairs: Vec<(&FieldSpec, u64)> = fields
        .iter()
        .flat_map(|f| ells.iter().map(move |&ell| (f, ell)))
        .filter(|(f, ell)| !matches!(f, FieldSpec::Cyclotomic(n) if n.gcd(ell) != 1))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Other(e.to_string()))?;
    let reports: Vec<Result<RankReport, String>> = pool.install(|| {
        pairs
            .par_iter()
            .map(|(f, ell)| rank_report(f, *ell, oracle).map_err(|e| format!("{f} at {ell}: {e}")))
            .collect()
    });

    let mut s = CorpusSummary { fields: fields.len(), runs: reports.len(), ..Default::default() };
    for r in &reports {
        let Ok(r) = r else {
            s.errors += 1;
            continue;
        };
        if let Some(o) = &r.tilde_e_oracle {
            s.oracle_runs += 1;
            if o.ambiguous {
                s.unresolved_ambiguities += 1;
            } else if o.tilde_e == r.tilde_e_formula {
                s.agreements += 1;
            } else {
                s.disagreements += 1;
            }
        }
        s.equality_holds += usize::from(r.equality_verdict == EqualityVerdict::Holds);
        s.single_ell_place += usize::from(r.l == 1);
        s.totally_split += usize::from(r.l == r.r + 2 * r.c);
    }
    Ok(CorpusRun { reports, summary: s })
}

/// Exit status of a finished corpus run.
pub fn corpus_status(summary: &CorpusSummary) -> Result<(), CliError> {
    if summary.disagreements > 0 {
        Err(CliError::Disagreement(format!("{} formula/oracle disagreements", summary.disagreements)))
    } else if summary.unresolved_ambiguities > 0 {
        Err(CliError::Ambiguous(format!("{} ambiguous oracle runs", summary.unresolved_ambiguities)))
    } else if summary.errors > 0 {
        Err(CliError::Other(format!("{} runs failed", summary.errors)))
    } else {
        Ok(())
    }
}

pub fn parse_ells(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("bad prime list {text:?}")))
        })
        .collect()
}
