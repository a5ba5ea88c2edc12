//! Exact linear algebra: GF(2) matrices, integer Smith normal form and
//! (co)homology of free chain complexes.

pub mod chain;
pub mod gf2;
pub mod group;
pub mod int_matrix;
pub mod snf;

pub use chain::{ChainComplex, Grading};
pub use gf2::{gf2_kernel_basis, gf2_rank, BitMatrix, BitVector};
pub use group::{AbelianGroup, Coefficients, GradedGroup};
pub use int_matrix::IntMatrix;
pub use snf::{invariant_factors, smith_normal_form, SmithNormalForm};

use crate::error::{Error, Result};
use crate::face::{Face, MAX_VERTICES};

/// An `n x m` matrix over GF(2); each row is stored as a subset of `[m]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharMatrix {
    m: usize,
    rows: Vec<Face>,
}

impl CharMatrix {
    pub fn new(m: usize, rows: Vec<Face>) -> Result<Self> {
        if m > MAX_VERTICES {
            return Err(Error::DimensionMismatch(format!("at most {MAX_VERTICES} columns are supported, got {m}")));
        }
        if let Some(r) = rows.iter().find(|r| !r.is_subset(Face::full(m))) {
            return Err(Error::DimensionMismatch(format!("row {r} has entries beyond column {m}")));
        }
        Ok(CharMatrix { m, rows })
    }

    /// Rows of 0/1 entries (any odd value counts as 1).
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        CharMatrix::from_rows_with_width(m, rows)
    }

    pub fn from_rows_with_width(m: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let mut faces = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::DimensionMismatch(format!("row {} has {} entries, expected {m}", i + 1, r.len())));
            }
            faces.push(r.iter().enumerate().filter(|&(_, &x)| x % 2 == 1).map(|(j, _)| j + 1).collect());
        }
        CharMatrix::new(m, faces)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Row `i` (1-based) as the set of columns holding a 1.
    pub fn row(&self, i: usize) -> Face {
        self.rows[i - 1]
    }

    pub fn rows(&self) -> &[Face] {
        &self.rows
    }

    /// Column `j` (1-based) as the set of rows holding a 1.
    pub fn column(&self, j: usize) -> Face {
        self.rows.iter().enumerate().filter(|(_, r)| r.contains(j)).map(|(i, _)| i + 1).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i - 1].contains(j)
    }

    pub fn to_bit_matrix(&self) -> BitMatrix {
        let mut b = BitMatrix::zeros(self.n(), self.m);
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.vertices() {
                b.set(i, j - 1, true);
            }
        }
        b
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|r| (1..=self.m).map(|j| u8::from(r.contains(j))).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        self.to_bit_matrix().rank()
    }

    /// `Λ v` for `v ⊆ [m]`, returned as a subset of the row indices.
    pub fn apply(&self, v: Face) -> Face {
        self.rows.iter().enumerate().filter(|(_, r)| r.intersection(v).len() % 2 == 1).map(|(i, _)| i + 1).collect()
    }

    /// Kernel basis from the reduced row echelon form, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Face> {
        self.to_bit_matrix().kernel_basis().iter().map(|v| v.ones().map(|j| j + 1).collect()).collect()
    }

    /// All `2^{m - rank}` kernel elements, ordered by binary value.
    pub fn kernel(&self) -> Vec<Face> {
        span(&self.kernel_basis())
    }

    /// All `2^rank` sums of rows, ordered by binary value (vertex 1 is the
    /// least significant bit).
    pub fn row_space(&self) -> Vec<Face> {
        span(&self.rows)
    }

    /// Whether the columns indexed by `face` are linearly independent.
    pub fn columns_independent(&self, face: Face) -> bool {
        let cols: Vec<BitVector> = face
            .vertices()
            .map(|j| BitVector::from_bools(&self.rows.iter().map(|r| r.contains(j)).collect::<Vec<_>>()))
            .collect();
        cols.is_empty() || BitMatrix::from_columns(self.n(), &cols).rank() == cols.len()
    }

    /// Non-singularity over the given facets: the first offending facet is reported.
    pub fn check_nonsingular(&self, facets: &[Face]) -> Result<()> {
        match facets.iter().find(|&&f| !self.columns_independent(f)) {
            Some(&f) => Err(Error::NonSingularityViolation(f)),
            None => Ok(()),
        }
    }
}

/// Span of GF(2) vectors as subsets, sorted by binary value, without repeats.
pub fn span(generators: &[Face]) -> Vec<Face> {
    let mut out = vec![Face::EMPTY];
    for &g in generators {
        if out.contains(&g) {
            continue;
        }
        let shifted: Vec<Face> = out.iter().map(|&x| x.symmetric_difference(g)).collect();
        out.extend(shifted);
    }
    out.sort_by_key(|f| f.bits());
    out
}

pub fn gf2_row_space(lambda: &CharMatrix) -> Vec<Face> {
    lambda.row_space()
}
