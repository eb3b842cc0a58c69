//! Reductions, branch sets, conjugate and unpaired rows, and sequential
//! reduction with a printable trace.
//!
//! All row and column indices are 1-based and refer to the matrix passed in.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::matrix::{bit, delete_column, BinaryMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("cannot delete column {k}: it is the only column")]
    NoColumnLeft { k: usize },
    #[error("column order must be a permutation of every column except {preserved}")]
    BadOrder { preserved: usize },
}

/// Rows of `m` with entry `b` at column `k`, with column `k` deleted.
/// `None` when no row matches.
pub fn reduce(m: &BinaryMatrix, k: usize, b: bool) -> Result<Option<BinaryMatrix>, StructureError> {
    m.check_column(k)?;
    let mask = bit(m.n(), k);
    let rows: Vec<u64> = m
        .rows()
        .iter()
        .filter(|&&r| (r & mask != 0) == b)
        .map(|&r| delete_column(r, m.n(), k))
        .collect();
    if rows.is_empty() {
        return Ok(None);
    }
    if m.n() == 1 {
        return Err(StructureError::NoColumnLeft { k });
    }
    Ok(Some(BinaryMatrix::from_parts_unchecked(rows, m.n() - 1)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub value: bool,
    pub reduced: BinaryMatrix,
}

/// The non-empty reductions of a matrix by one column, zero branch first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSet {
    pub column: usize,
    pub branches: Vec<Branch>,
}

pub fn branch_set(m: &BinaryMatrix, k: usize) -> Result<BranchSet, StructureError> {
    let mut branches = Vec::with_capacity(2);
    for value in [false, true] {
        if let Some(reduced) = reduce(m, k, value)? {
            branches.push(Branch { value, reduced });
        }
    }
    Ok(BranchSet {
        column: k,
        branches,
    })
}

/// The row differing from row `i` exactly at column `k`. With duplicate rows
/// the smallest such index is returned.
pub fn conjugate_of(m: &BinaryMatrix, i: usize, k: usize) -> Result<Option<usize>, MatrixError> {
    m.check_row(i)?;
    m.check_column(k)?;
    let target = m.rows()[i - 1] ^ bit(m.n(), k);
    Ok(m.rows().iter().position(|&r| r == target).map(|j| j + 1))
}

/// An unpaired position: row `row` has a zero at `column` and no conjugate
/// with respect to that column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Unpaired {
    pub row: usize,
    pub column: usize,
}

/// The first unpaired position scanning columns ascending, then rows
/// ascending.
pub fn find_unpaired(m: &BinaryMatrix) -> Option<Unpaired> {
    let rows = m.rows();
    (1..=m.n()).find_map(|l| {
        let b = bit(m.n(), l);
        rows.iter()
            .position(|&r| r & b == 0 && !rows.contains(&(r | b)))
            .map(|i| Unpaired {
                row: i + 1,
                column: l,
            })
    })
}

/// Rows agreeing with row `i` everywhere except possibly at column `l`,
/// ascending. Always contains `i`.
pub fn consistent_rows(m: &BinaryMatrix, i: usize, l: usize) -> Result<Vec<usize>, MatrixError> {
    m.check_row(i)?;
    m.check_column(l)?;
    let keep = !bit(m.n(), l);
    let r = m.rows()[i - 1];
    Ok(m.rows()
        .iter()
        .enumerate()
        .filter(|(_, &t)| (t ^ r) & keep == 0)
        .map(|(j, _)| j + 1)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    /// Column index in the source matrix.
    pub column: usize,
    pub value: bool,
    pub survivors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub preserved_column: usize,
    pub source_row: usize,
    pub steps: Vec<ReductionStep>,
    /// Source indices of the rows left after the last step.
    pub surviving_rows: Vec<usize>,
    pub terminal: BinaryMatrix,
}

impl ReductionTrace {
    pub fn terminal_is_all_zero(&self) -> bool {
        self.terminal.rows().iter().all(|&r| r == 0)
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "sequential reduction of row {} preserving column {}",
            self.source_row, self.preserved_column
        )?;
        writeln!(f, "  step  column  value  survivors")?;
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "  {:>4}  {:>6}  {:>5}  {:>9}",
                i + 1,
                s.column,
                u8::from(s.value),
                s.survivors
            )?;
        }
        let column: String = self
            .terminal
            .rows()
            .iter()
            .map(|&r| if r != 0 { '1' } else { '0' })
            .collect();
        write!(
            f,
            "  terminal rows {:?}, column [{}]",
            self.surviving_rows, column
        )
    }
}

/// Reduces `m` column by column along the values of row `i`, keeping column
/// `l`. `order` lists the columns to delete (default ascending) and must be a
/// permutation of every column except `l`.
pub fn sequential_reduction(
    m: &BinaryMatrix,
    i: usize,
    l: usize,
    order: Option<&[usize]>,
) -> Result<ReductionTrace, StructureError> {
    m.check_row(i)?;
    m.check_column(l)?;
    let n = m.n();
    let order: Vec<usize> = match order {
        Some(o) => {
            let mut seen = vec![false; n + 1];
            let valid = o.len() == n - 1
                && o.iter()
                    .all(|&k| k >= 1 && k <= n && k != l && !std::mem::replace(&mut seen[k], true));
            if !valid {
                return Err(StructureError::BadOrder { preserved: l });
            }
            o.to_vec()
        }
        None => (1..=n).filter(|&k| k != l).collect(),
    };

    let source = m.rows()[i - 1];
    // Original column index of each remaining column position.
    let mut columns: Vec<usize> = (1..=n).collect();
    let mut current = m.clone();
    let mut survivors: Vec<usize> = (1..=m.m()).collect();
    let mut steps = Vec::with_capacity(order.len());
    for &k in &order {
        let value = source & bit(n, k) != 0;
        let pos = columns
            .iter()
            .position(|&c| c == k)
            .expect("column already removed")
            + 1;
        let cur_bit = bit(current.n(), pos);
        survivors = survivors
            .into_iter()
            .zip(current.rows())
            .filter(|(_, &r)| (r & cur_bit != 0) == value)
            .map(|(s, _)| s)
            .collect();
        // row i always matches its own values
        current = reduce(&current, pos, value)?.expect("source row survives every step");
        columns.remove(pos - 1);
        debug_assert_eq!(survivors.len(), current.m());
        steps.push(ReductionStep {
            column: k,
            value,
            survivors: current.m(),
        });
    }
    Ok(ReductionTrace {
        preserved_column: l,
        source_row: i,
        steps,
        surviving_rows: survivors,
        terminal: current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::from_strs(rows).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let m = mat(&["10", "01"]);
        assert_eq!(reduce(&m, 1, false).unwrap().unwrap().to_text(), "1");
        assert_eq!(reduce(&m, 1, true).unwrap().unwrap().to_text(), "0");
        let m = mat(&["11", "10"]);
        assert_eq!(reduce(&m, 2, false).unwrap().unwrap().to_text(), "1");
        let m = mat(&["11", "01"]);
        assert_eq!(reduce(&m, 2, false).unwrap(), None);
        assert!(matches!(
            reduce(&m, 3, false),
            Err(StructureError::Matrix(MatrixError::ColumnOutOfRange { .. }))
        ));
    }

    #[test]
    fn reduce_single_column() {
        let m = mat(&["1"]);
        assert_eq!(
            reduce(&m, 1, true),
            Err(StructureError::NoColumnLeft { k: 1 })
        );
        assert_eq!(reduce(&m, 1, false), Ok(None));
    }

    #[test]
    fn branch_set_examples() {
        let s = branch_set(&mat(&["10", "01"]), 1).unwrap();
        assert_eq!(s.branches.len(), 2);
        assert!(!s.branches[0].value && s.branches[0].reduced.to_text() == "1");
        assert!(s.branches[1].value && s.branches[1].reduced.to_text() == "0");

        let s = branch_set(&mat(&["11", "01"]), 2).unwrap();
        assert_eq!(s.branches.len(), 1);
        assert!(s.branches[0].value);
        assert_eq!(s.branches[0].reduced.to_text(), "1\n0");

        let s = branch_set(&mat(&["00", "01"]), 1).unwrap();
        assert_eq!(s.branches.len(), 1);
        assert!(!s.branches[0].value);
        assert_eq!(s.branches[0].reduced.to_text(), "0\n1");
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate_of(&mat(&["00", "10"]), 1, 1), Ok(Some(2)));
        assert_eq!(conjugate_of(&mat(&["00", "01", "10"]), 2, 1), Ok(None));
        assert_eq!(conjugate_of(&mat(&["00", "11"]), 1, 1), Ok(None));
        assert_eq!(conjugate_of(&mat(&["0", "1", "1"]), 1, 1), Ok(Some(2)));
        assert!(conjugate_of(&mat(&["0"]), 2, 1).is_err());
    }

    #[test]
    fn unpaired_examples() {
        assert_eq!(
            find_unpaired(&mat(&["00", "01", "10"])),
            Some(Unpaired { row: 2, column: 1 })
        );
        assert_eq!(find_unpaired(&mat(&["00", "01", "10", "11"])), None);
        assert_eq!(
            find_unpaired(&mat(&["0"])),
            Some(Unpaired { row: 1, column: 1 })
        );
    }

    #[test]
    fn consistent_row_examples() {
        assert_eq!(consistent_rows(&mat(&["00", "01"]), 1, 2), Ok(vec![1, 2]));
        assert_eq!(
            consistent_rows(&mat(&["00", "01", "10"]), 2, 1),
            Ok(vec![2])
        );
        assert_eq!(consistent_rows(&mat(&["00", "11"]), 1, 1), Ok(vec![1]));
    }

    #[test]
    fn sequential_reduction_examples() {
        let t = sequential_reduction(&mat(&["00", "01", "10"]), 2, 1, None).unwrap();
        assert_eq!(
            t.steps,
            vec![ReductionStep {
                column: 2,
                value: true,
                survivors: 1
            }]
        );
        assert_eq!(t.terminal.to_text(), "0");
        assert_eq!(t.surviving_rows, vec![2]);

        let cube = mat(&["00", "01", "10", "11"]);
        let t = sequential_reduction(&cube, 1, 2, None).unwrap();
        assert_eq!(t.terminal.to_text(), "0\n1");
        assert_eq!(t.surviving_rows, vec![1, 2]);

        let one = mat(&["0", "1"]);
        let t = sequential_reduction(&one, 1, 1, None).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.terminal, one);
        assert_eq!(
            sequential_reduction(&one, 1, 1, Some(&[1])),
            Err(StructureError::BadOrder { preserved: 1 })
        );
    }

    #[test]
    fn sequential_reduction_custom_order() {
        let m = mat(&["0101", "0111", "1101", "0100", "0001"]);
        let a = sequential_reduction(&m, 1, 3, None).unwrap();
        let b = sequential_reduction(&m, 1, 3, Some(&[4, 1, 2])).unwrap();
        assert_eq!(a.surviving_rows, vec![1, 2]);
        assert_eq!(b.surviving_rows, a.surviving_rows);
        assert_eq!(
            b.steps.iter().map(|s| s.column).collect::<Vec<_>>(),
            vec![4, 1, 2]
        );
        assert_eq!(
            b.steps.iter().map(|s| s.survivors).collect::<Vec<_>>(),
            vec![4, 3, 2]
        );
        for bad in [&[1, 2][..], &[1, 2, 2], &[1, 2, 3], &[1, 2, 5]] {
            assert!(sequential_reduction(&m, 1, 3, Some(bad)).is_err());
        }
    }
}
