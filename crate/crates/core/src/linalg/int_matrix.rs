//! Sparse integer matrices (column lists) used for differentials.

use std::collections::BTreeMap;
use std::fmt;

use super::gf2::BitMatrix;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    // per column: (row, nonzero value), sorted by row
    columns: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, 1)))
    }

    /// Sums duplicate entries and drops zeros.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); cols];
        for (i, j, v) in entries {
            assert!(i < rows && j < cols, "entry ({i},{j}) outside {rows}x{cols}");
            *acc[j].entry(i).or_insert(0) += v;
        }
        let columns = acc.into_iter().map(|c| c.into_iter().filter(|&(_, v)| v != 0).collect()).collect();
        IntMatrix { rows, cols, columns }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_triplets(
            rows.len(),
            cols,
            rows.iter().enumerate().flat_map(|(i, r)| {
                assert_eq!(r.len(), cols, "ragged matrix");
                r.iter().enumerate().map(move |(j, &v)| (i, j, v))
            }),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.columns[j].iter().find(|&&(r, _)| r == i).map_or(0, |&(_, v)| v)
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |&(i, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_triplets(self.cols, self.rows, self.entries().map(|(i, j, v)| (j, i, v)))
    }

    pub fn scaled(&self, k: i64) -> IntMatrix {
        IntMatrix::from_triplets(self.rows, self.cols, self.entries().map(|(i, j, v)| (i, j, v * k)))
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut entries = Vec::new();
        for (j, col) in other.columns.iter().enumerate() {
            for &(k, b) in col {
                for &(i, a) in &self.columns[k] {
                    entries.push((i, j, a * b));
                }
            }
        }
        IntMatrix::from_triplets(self.rows, other.cols, entries)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![0; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if v[j] != 0 {
                for &(i, a) in col {
                    out[i] += a * v[j];
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            d[i][j] = v;
        }
        d
    }

    pub fn mod2(&self) -> BitMatrix {
        let mut b = BitMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.entries() {
            if v.rem_euclid(2) == 1 {
                b.set(i, j, true);
            }
        }
        b
    }

    /// Block matrix `[[a, b], [c, d]]`; blocks must have compatible shapes.
    pub fn block(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> IntMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (r0, c0) = (a.rows, a.cols);
        let entries = a
            .entries()
            .chain(b.entries().map(|(i, j, v)| (i, j + c0, v)))
            .chain(c.entries().map(|(i, j, v)| (i + r0, j, v)))
            .chain(d.entries().map(|(i, j, v)| (i + r0, j + c0, v)));
        IntMatrix::from_triplets(a.rows + c.rows, a.cols + b.cols, entries)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for row in self.to_dense() {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}
