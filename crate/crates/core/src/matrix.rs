//! The binary matrix value type, its text format, and column statistics.
//!
//! Rows are stored as `u64` bit patterns. Column `k` (1-based) of an `n`-column
//! matrix lives at bit `n - k`, so the integer value of a row equals the row
//! read as a binary string, and sorting encodings sorts rows lexicographically.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Widest supported matrix.
pub const MAX_COLUMNS: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("input contains no data lines")]
    EmptyInput,
    #[error("ragged rows: line {line} has {found} columns, expected {expected}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("bad character {ch:?} on line {line}")]
    BadCharacter { line: usize, ch: char },
    #[error("matrix has {0} columns, at most 63 are supported")]
    TooWide(usize),
    #[error("matrix must have at least one row and one column")]
    Degenerate,
    #[error("row {row} has bits outside columns 1..={n}")]
    StrayBits { row: usize, n: usize },
    #[error("column {k} out of range 1..={n}")]
    ColumnOutOfRange { k: usize, n: usize },
    #[error("row {i} out of range 1..={m}")]
    IndexOutOfRange { i: usize, m: usize },
}

/// An `m x n` matrix over {0, 1}. Row order is preserved exactly as given and
/// duplicate rows are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: Vec<u64>,
    n: usize,
}

#[inline]
pub(crate) fn bit(n: usize, k: usize) -> u64 {
    1u64 << (n - k)
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Deletes column `k` from an encoded row of width `n`.
#[inline]
pub(crate) fn delete_column(row: u64, n: usize, k: usize) -> u64 {
    let p = n - k;
    let low = row & ((1u64 << p) - 1);
    let high = row >> (p + 1);
    (high << p) | low
}

/// Splits `rows` on column `k`, deleting that column from both halves.
/// Returns `(zero_branch, one_branch)` with relative row order kept.
pub(crate) fn split_rows(rows: &[u64], n: usize, k: usize) -> (Vec<u64>, Vec<u64>) {
    let b = bit(n, k);
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for &r in rows {
        let reduced = delete_column(r, n, k);
        if r & b == 0 {
            zeros.push(reduced);
        } else {
            ones.push(reduced);
        }
    }
    (zeros, ones)
}

/// Shared heaviness predicate: ones >= zeros, in integer arithmetic.
#[inline]
pub(crate) fn weight_is_heavy(weight: usize, m: usize) -> bool {
    let heavy = 2 * weight >= m;
    debug_assert_eq!(heavy, weight >= m.div_ceil(2));
    heavy
}

pub(crate) fn rows_column_weight(rows: &[u64], n: usize, k: usize) -> usize {
    let b = bit(n, k);
    rows.iter().filter(|&&r| r & b != 0).count()
}

/// True when at least one column of the encoded rows is heavy.
pub(crate) fn rows_have_heavy_column(rows: &[u64], n: usize) -> bool {
    (1..=n).any(|k| weight_is_heavy(rows_column_weight(rows, n, k), rows.len()))
}

impl BinaryMatrix {
    /// Builds a matrix from row encodings. Rejects `m = 0`, `n = 0`, `n > 63`
    /// and rows with bits outside the low `n` positions.
    pub fn new(rows: Vec<u64>, n: usize) -> Result<Self, MatrixError> {
        if n > MAX_COLUMNS {
            return Err(MatrixError::TooWide(n));
        }
        if rows.is_empty() || n == 0 {
            return Err(MatrixError::Degenerate);
        }
        let mask = full_mask(n);
        if let Some(i) = rows.iter().position(|&r| r & !mask != 0) {
            return Err(MatrixError::StrayBits { row: i + 1, n });
        }
        Ok(BinaryMatrix { rows, n })
    }

    /// Builds a matrix from rows written as `'0'`/`'1'` strings.
    pub fn from_strs(rows: &[&str]) -> Result<Self, MatrixError> {
        parse_matrix(&rows.join("\n"))
    }

    pub(crate) fn from_parts_unchecked(rows: Vec<u64>, n: usize) -> Self {
        debug_assert!(!rows.is_empty() && (1..=MAX_COLUMNS).contains(&n));
        debug_assert!(rows.iter().all(|&r| r & !full_mask(n) == 0));
        BinaryMatrix { rows, n }
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Entry at row `i`, column `k`, both 1-based.
    pub fn get(&self, i: usize, k: usize) -> Result<bool, MatrixError> {
        self.check_row(i)?;
        self.check_column(k)?;
        Ok(self.rows[i - 1] & bit(self.n, k) != 0)
    }

    pub(crate) fn check_column(&self, k: usize) -> Result<(), MatrixError> {
        if k == 0 || k > self.n {
            Err(MatrixError::ColumnOutOfRange { k, n: self.n })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_row(&self, i: usize) -> Result<(), MatrixError> {
        if i == 0 || i > self.m() {
            Err(MatrixError::IndexOutOfRange { i, m: self.m() })
        } else {
            Ok(())
        }
    }

    /// Number of ones in column `k`.
    pub fn column_weight(&self, k: usize) -> Result<usize, MatrixError> {
        self.check_column(k)?;
        Ok(rows_column_weight(&self.rows, self.n, k))
    }

    /// Column `k` is heavy when its ones are at least `ceil(m/2)`,
    /// equivalently at least its zeros.
    pub fn is_heavy(&self, k: usize) -> Result<bool, MatrixError> {
        let w = self.column_weight(k)?;
        Ok(weight_is_heavy(w, self.m()))
    }

    /// Every heavy column, ascending, found by a direct scan.
    pub fn heavy_columns(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&k| weight_is_heavy(rows_column_weight(&self.rows, self.n, k), self.m()))
            .collect()
    }

    pub fn has_heavy_column(&self) -> bool {
        rows_have_heavy_column(&self.rows, self.n)
    }

    pub fn column_weights(&self) -> Vec<usize> {
        (1..=self.n)
            .map(|k| rows_column_weight(&self.rows, self.n, k))
            .collect()
    }

    /// Column `k` as a bit vector over the rows, packed 64 rows per word.
    fn column_pattern(&self, k: usize) -> Vec<u64> {
        let b = bit(self.n, k);
        let mut words = vec![0u64; self.m().div_ceil(64)];
        for (i, &r) in self.rows.iter().enumerate() {
            if r & b != 0 {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        words
    }

    pub fn has_distinct_rows(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.m());
        self.rows.iter().all(|r| seen.insert(*r))
    }

    pub fn has_distinct_columns(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.n);
        (1..=self.n).all(|k| seen.insert(self.column_pattern(k)))
    }

    pub fn properties(&self) -> MatrixProperties {
        let column_weights = self.column_weights();
        MatrixProperties {
            distinct_rows: self.has_distinct_rows(),
            distinct_columns: self.has_distinct_columns(),
            has_all_zero_column: column_weights.contains(&0),
            column_weights,
        }
    }

    /// A copy with the input columns rearranged: column `j` of the result is
    /// column `perm[j-1]` of `self`. `perm` must be a permutation of `1..=n`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<BinaryMatrix, MatrixError> {
        let mut seen = vec![false; self.n + 1];
        if perm.len() != self.n {
            return Err(MatrixError::ColumnOutOfRange {
                k: perm.len(),
                n: self.n,
            });
        }
        for &k in perm {
            self.check_column(k)?;
            if std::mem::replace(&mut seen[k], true) {
                return Err(MatrixError::ColumnOutOfRange { k, n: self.n });
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                perm.iter().enumerate().fold(0u64, |acc, (j, &k)| {
                    if r & bit(self.n, k) != 0 {
                        acc | bit(self.n, j + 1)
                    } else {
                        acc
                    }
                })
            })
            .collect();
        Ok(BinaryMatrix { rows, n: self.n })
    }

    /// A copy with rows reordered: row `i` of the result is row `perm[i-1]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<BinaryMatrix, MatrixError> {
        let rows = perm
            .iter()
            .map(|&i| {
                self.check_row(i)?;
                Ok(self.rows[i - 1])
            })
            .collect::<Result<Vec<_>, _>>()?;
        BinaryMatrix::new(rows, self.n)
    }

    pub fn row_string(&self, i: usize) -> Result<String, MatrixError> {
        self.check_row(i)?;
        Ok(encode_row(self.rows[i - 1], self.n))
    }

    /// Text form: one line per row, no trailing newline.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn encode_row(row: u64, n: usize) -> String {
    (1..=n)
        .map(|k| if row & bit(n, k) != 0 { '1' } else { '0' })
        .collect()
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            f.write_str(&encode_row(r, self.n))?;
        }
        Ok(())
    }
}

impl FromStr for BinaryMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_matrix(s)
    }
}

/// Precondition flags and column weights of a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixProperties {
    pub distinct_rows: bool,
    pub distinct_columns: bool,
    pub has_all_zero_column: bool,
    pub column_weights: Vec<usize>,
}

/// Parses the text format: one row per line of `0`/`1` characters. Whitespace
/// anywhere is ignored, blank lines are skipped and `#` starts a comment that
/// runs to the end of the line.
pub fn parse_matrix(text: &str) -> Result<BinaryMatrix, MatrixError> {
    let mut rows = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let data = raw.split('#').next().unwrap_or("");
        let mut row = 0u64;
        let mut len = 0usize;
        for ch in data.chars() {
            match ch {
                '0' | '1' => {
                    len += 1;
                    if len > MAX_COLUMNS {
                        return Err(MatrixError::TooWide(
                            data.chars().filter(|c| matches!(c, '0' | '1')).count(),
                        ));
                    }
                    row = (row << 1) | u64::from(ch == '1');
                }
                c if c.is_whitespace() => {}
                c => return Err(MatrixError::BadCharacter { line, ch: c }),
            }
        }
        if len == 0 {
            continue;
        }
        match width {
            None => width = Some(len),
            Some(w) if w != len => {
                return Err(MatrixError::RaggedRows {
                    line,
                    expected: w,
                    found: len,
                })
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    match width {
        None => Err(MatrixError::EmptyInput),
        Some(n) => Ok(BinaryMatrix::from_parts_unchecked(rows, n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::from_strs(rows).unwrap()
    }

    #[test]
    fn parses_plain_rows() {
        let m = parse_matrix("10\n01").unwrap();
        assert_eq!((m.m(), m.n()), (2, 2));
        assert!(m.get(1, 1).unwrap() && !m.get(1, 2).unwrap());
        assert!(!m.get(2, 1).unwrap() && m.get(2, 2).unwrap());
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let m = parse_matrix("# c\n0").unwrap();
        assert_eq!((m.m(), m.n()), (1, 1));
        assert!(!m.get(1, 1).unwrap());
        let m = parse_matrix("\n  1 0 # trailing\n\n0 1\n").unwrap();
        assert_eq!(m.to_text(), "10\n01");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_matrix("10\n011"),
            Err(MatrixError::RaggedRows {
                line: 2,
                expected: 2,
                found: 3
            })
        );
        assert_eq!(parse_matrix("# only\n\n"), Err(MatrixError::EmptyInput));
        assert_eq!(parse_matrix(""), Err(MatrixError::EmptyInput));
        assert_eq!(
            parse_matrix("10\n0x"),
            Err(MatrixError::BadCharacter { line: 2, ch: 'x' })
        );
        assert_eq!(parse_matrix(&"1".repeat(64)), Err(MatrixError::TooWide(64)));
        assert!(parse_matrix(&"1".repeat(63)).is_ok());
    }

    #[test]
    fn construction_invariants() {
        assert_eq!(BinaryMatrix::new(vec![], 2), Err(MatrixError::Degenerate));
        assert_eq!(BinaryMatrix::new(vec![0], 0), Err(MatrixError::Degenerate));
        assert_eq!(
            BinaryMatrix::new(vec![0], 64),
            Err(MatrixError::TooWide(64))
        );
        assert_eq!(
            BinaryMatrix::new(vec![0b01, 0b100], 2),
            Err(MatrixError::StrayBits { row: 2, n: 2 })
        );
        // duplicates are representable
        assert_eq!(BinaryMatrix::new(vec![1, 1], 1).unwrap().m(), 2);
    }

    #[test]
    fn column_weight_examples() {
        assert_eq!(mat(&["11", "01", "10"]).column_weight(1), Ok(2));
        assert_eq!(mat(&["0"]).column_weight(1), Ok(0));
        assert_eq!(mat(&["00", "01", "10", "11"]).column_weight(2), Ok(2));
        assert_eq!(
            mat(&["0"]).column_weight(2),
            Err(MatrixError::ColumnOutOfRange { k: 2, n: 1 })
        );
        assert!(mat(&["0"]).column_weight(0).is_err());
    }

    #[test]
    fn heaviness_threshold() {
        // m = 3: weight 2 heavy, weight 1 not
        let m = mat(&["1", "1", "0"]);
        assert_eq!(m.is_heavy(1), Ok(true));
        let m = mat(&["1", "0", "0"]);
        assert_eq!(m.is_heavy(1), Ok(false));
        // m = 2: weight 1 heavy
        let m = mat(&["1", "0"]);
        assert_eq!(m.is_heavy(1), Ok(true));
        assert!(m.is_heavy(2).is_err());
    }

    #[test]
    fn heavy_column_examples() {
        assert_eq!(mat(&["10", "01"]).heavy_columns(), vec![1, 2]);
        assert!(mat(&["00", "01", "10"]).heavy_columns().is_empty());
        assert_eq!(mat(&["1"]).heavy_columns(), vec![1]);
    }

    #[test]
    fn property_examples() {
        let p = mat(&["00"]).properties();
        assert!(p.distinct_rows && !p.distinct_columns && p.has_all_zero_column);
        let p = mat(&["10", "01"]).properties();
        assert!(p.distinct_rows && p.distinct_columns && !p.has_all_zero_column);
        assert_eq!(p.column_weights, vec![1, 1]);
        assert!(!mat(&["1", "1"]).properties().distinct_rows);
    }

    #[test]
    fn wide_column_patterns() {
        // 70 rows so column patterns span two words; columns 1 and 2 differ
        // only in the last row.
        let mut rows = vec!["11"; 69];
        rows.push("10");
        let m = mat(&rows);
        assert!(m.has_distinct_columns());
        let m = mat(&vec!["11"; 70]);
        assert!(!m.has_distinct_columns());
    }

    #[test]
    fn column_permutation() {
        let m = mat(&["110", "001"]);
        let p = m.permute_columns(&[3, 1, 2]).unwrap();
        assert_eq!(p.to_text(), "011\n100");
        assert!(m.permute_columns(&[1, 1, 2]).is_err());
        assert!(m.permute_columns(&[1, 2]).is_err());
    }

    #[test]
    fn delete_column_keeps_order() {
        // 1011 minus column 2 -> 111
        assert_eq!(delete_column(0b1011, 4, 2), 0b111);
        assert_eq!(delete_column(0b1011, 4, 1), 0b011);
        assert_eq!(delete_column(0b1011, 4, 4), 0b101);
    }
}
