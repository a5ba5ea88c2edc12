//! Dense bit-packed linear algebra over GF(2).

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x % 2 == 1);
            }
        }
        m
    }

    pub fn from_columns(nrows: usize, columns: &[BitVector]) -> Self {
        let mut m = BitMatrix::zeros(nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), nrows);
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVector::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows());
        let mut out = BitMatrix::zeros(self.nrows(), other.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for k in r.ones() {
                out.rows[i].xor_assign(&other.rows[k]);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.nrows() {
                break;
            }
            let Some(p) = (r..self.nrows()).find(|&i| self.rows[i].get(c)) else {
                continue;
            };
            self.rows.swap(r, p);
            let pivot = self.rows[r].clone();
            for i in 0..self.nrows() {
                if i != r && self.rows[i].get(c) {
                    self.rows[i].xor_assign(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Kernel basis: one vector per free column (increasing), with that
    /// free coordinate set and the pivot coordinates solved from the RREF.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let mut e = self.clone();
        let pivots = e.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVector::zeros(self.cols);
                v.set(free, true);
                for (r, &p) in pivots.iter().enumerate() {
                    if e.rows[r].get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.nrows());
        let mut aug = BitMatrix::zeros(self.nrows(), self.cols + 1);
        for i in 0..self.nrows() {
            for j in self.rows[i].ones() {
                aug.set(i, j, true);
            }
            aug.set(i, self.cols, b.get(i));
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVector::zeros(self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            if aug.rows[r].get(self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

pub fn gf2_rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn gf2_kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    m.kernel_basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(v: &[u8]) -> BitVector {
        BitVector::from_bools(&v.iter().map(|&x| x == 1).collect::<Vec<_>>())
    }

    #[test]
    fn identity_has_full_rank() {
        let m = BitMatrix::identity(3);
        assert_eq!(gf2_rank(&m), 3);
        assert!(gf2_kernel_basis(&m).is_empty());
    }

    #[test]
    fn projective_plane_kernel() {
        let m = BitMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(gf2_kernel_basis(&m), vec![bits(&[1, 1, 1])]);
    }

    #[test]
    fn klein_kernel_matches_enumeration() {
        let m = BitMatrix::from_rows(&[vec![1, 0, 1, 1], vec![0, 1, 0, 1]]);
        // all 16 vectors, keep the annihilated ones
        let annihilated: Vec<BitVector> = (0u8..16)
            .map(|x| bits(&[x & 1, x >> 1 & 1, x >> 2 & 1, x >> 3 & 1]))
            .filter(|v| m.mul_vec(v).is_zero())
            .collect();
        assert_eq!(annihilated.len(), 4);
        let basis = gf2_kernel_basis(&m);
        assert_eq!(basis, vec![bits(&[1, 0, 1, 0]), bits(&[1, 1, 0, 1])]);
        for v in &basis {
            assert!(annihilated.contains(v));
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = BitMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(m.solve(&bits(&[1, 0])).is_none());
        let x = m.solve(&bits(&[1, 1])).unwrap();
        assert_eq!(m.mul_vec(&x), bits(&[1, 1]));
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..7, cols in 1usize..9, seed in any::<u64>()) {
            let mut m = BitMatrix::zeros(rows, cols);
            let mut s = seed;
            for i in 0..rows {
                for j in 0..cols {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    m.set(i, j, s >> 33 & 1 == 1);
                }
            }
            let kernel = gf2_kernel_basis(&m);
            prop_assert_eq!(gf2_rank(&m) + kernel.len(), cols);
            for v in &kernel {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            if !kernel.is_empty() {
                prop_assert_eq!(BitMatrix::from_columns(cols, &kernel).rank(), kernel.len());
            }
        }
    }
}
