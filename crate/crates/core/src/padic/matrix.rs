use super::{PadicError, PadicNumber, Result};

/// Digits below the working precision that an entry must clear before it
/// counts as nonzero.
pub const DEFAULT_GUARD: u32 = 2;

/// Dense matrix over `Q_ℓ`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicMatrix {
    prime: u64,
    rows: usize,
    cols: usize,
    entries: Vec<PadicNumber>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankOutcome {
    pub rank: usize,
    /// Some entry was nonzero at working precision but inside the guard band.
    pub ambiguous: bool,
}

impl PadicMatrix {
    pub fn new(rows: Vec<Vec<PadicNumber>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(PadicError::EmptyMatrix);
        }
        let prime = rows[0][0].prime();
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged matrix");
            for x in row {
                if x.prime() != prime {
                    return Err(PadicError::PrimeMismatch(prime, x.prime()));
                }
                entries.push(x);
            }
        }
        Ok(PadicMatrix { prime, rows: nrows, cols: ncols, entries })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicNumber {
        &self.entries[i * self.cols + j]
    }

    /// Minimum absolute precision over the entries.
    pub fn precision(&self) -> i64 {
        self.entries.iter().map(PadicNumber::absolute_precision).min().unwrap()
    }

    /// Rank over `Q_ℓ` by elimination on the entry of least valuation.
    ///
    /// An entry only serves as a pivot when its valuation sits at least `guard`
    /// digits below its own precision. Leftover entries that are nonzero but
    /// inside that band are treated as zero and reported through `ambiguous`.
    pub fn rank(&self, guard: u32) -> RankOutcome {
        let mut m: Vec<Vec<PadicNumber>> =
            self.entries.chunks(self.cols).map(<[PadicNumber]>::to_vec).collect();
        let certain = |x: &PadicNumber| match x.valuation() {
            Some(v) => v < x.absolute_precision() - guard as i64,
            None => false,
        };

        let mut rank = 0;
        let mut ambiguous = false;
        let (nrows, ncols) = (self.rows, self.cols);
        while rank < nrows.min(ncols) {
            let mut pivot: Option<(usize, usize, i64)> = None;
            for (i, row) in m.iter().enumerate().skip(rank) {
                for (j, x) in row.iter().enumerate().skip(rank) {
                    if certain(x) {
                        let v = x.valuation().unwrap();
                        if pivot.is_none_or(|(_, _, best)| v < best) {
                            pivot = Some((i, j, v));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else {
                ambiguous = m.iter().skip(rank).any(|row| row.iter().skip(rank).any(|x| !x.is_zero()));
                break;
            };
            m.swap(rank, pi);
            for row in m.iter_mut() {
                row.swap(rank, pj);
            }
            let (top, rest) = m.split_at_mut(rank + 1);
            let pivot_row = &top[rank];
            for row in rest.iter_mut() {
                if row[rank].is_zero() {
                    continue;
                }
                let factor = row[rank].div(&pivot_row[rank]).expect("pivot is nonzero");
                for j in rank..ncols {
                    let delta = &factor * &pivot_row[j];
                    row[j] = &row[j] - &delta;
                }
            }
            rank += 1;
        }
        RankOutcome { rank, ambiguous }
    }
}
