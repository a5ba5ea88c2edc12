//! Finite free chain and cochain complexes over the integers.

use super::group::{AbelianGroup, Coefficients, GradedGroup};
use super::int_matrix::IntMatrix;
use super::snf::invariant_factors;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Differentials lower degree by one.
    Chain,
    /// Differentials raise degree by one.
    Cochain,
}

/// Free modules `C_d` for `d` in `min_degree..=max_degree` with integer
/// differentials. `maps[k]` connects degrees `min_degree + k` and
/// `min_degree + k + 1` in the direction fixed by the grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    grading: Grading,
    min_degree: i32,
    dims: Vec<usize>,
    maps: Vec<IntMatrix>,
    labels: Vec<Vec<String>>,
}

impl ChainComplex {
    /// `maps[k]` is the boundary `C_{min+k+1} -> C_{min+k}`.
    pub fn chain(min_degree: i32, dims: Vec<usize>, maps: Vec<IntMatrix>) -> Result<Self> {
        ChainComplex::build(Grading::Chain, min_degree, dims, maps)
    }

    /// `maps[k]` is the coboundary `C^{min+k} -> C^{min+k+1}`.
    pub fn cochain(min_degree: i32, dims: Vec<usize>, maps: Vec<IntMatrix>) -> Result<Self> {
        ChainComplex::build(Grading::Cochain, min_degree, dims, maps)
    }

    fn build(grading: Grading, min_degree: i32, dims: Vec<usize>, maps: Vec<IntMatrix>) -> Result<Self> {
        if maps.len() + 1 != dims.len().max(1) {
            return Err(Error::DimensionMismatch(format!("{} degrees need {} differentials, got {}", dims.len(), dims.len().saturating_sub(1), maps.len())));
        }
        for (k, m) in maps.iter().enumerate() {
            let (rows, cols) = match grading {
                Grading::Chain => (dims[k], dims[k + 1]),
                Grading::Cochain => (dims[k + 1], dims[k]),
            };
            if m.nrows() != rows || m.ncols() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "differential {k} is {}x{}, expected {rows}x{cols}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(ChainComplex { grading, min_degree, dims, maps, labels: Vec::new() })
    }

    /// Attaches basis labels, one list per degree.
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Self {
        assert_eq!(labels.len(), self.dims.len());
        for (l, &d) in labels.iter().zip(&self.dims) {
            assert_eq!(l.len(), d, "label count differs from rank");
        }
        self.labels = labels;
        self
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.index(degree).map_or(0, |k| self.dims[k])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self, degree: i32) -> Option<&[String]> {
        let k = self.index(degree)?;
        self.labels.get(k).map(Vec::as_slice)
    }

    fn index(&self, degree: i32) -> Option<usize> {
        let k = degree - self.min_degree;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    /// The differential leaving `degree` (to `degree - 1` for chains, to
    /// `degree + 1` for cochains), as a possibly empty matrix.
    pub fn differential(&self, degree: i32) -> IntMatrix {
        match self.grading {
            Grading::Chain => {
                let src = self.dim(degree);
                let dst = self.dim(degree - 1);
                match self.index(degree - 1) {
                    Some(k) if k < self.maps.len() => self.maps[k].clone(),
                    _ => IntMatrix::zeros(dst, src),
                }
            }
            Grading::Cochain => {
                let src = self.dim(degree);
                let dst = self.dim(degree + 1);
                match self.index(degree) {
                    Some(k) if k < self.maps.len() => self.maps[k].clone(),
                    _ => IntMatrix::zeros(dst, src),
                }
            }
        }
    }

    /// Hom into `Z`: same degrees, transposed differentials.
    pub fn dual(&self) -> ChainComplex {
        let grading = match self.grading {
            Grading::Chain => Grading::Cochain,
            Grading::Cochain => Grading::Chain,
        };
        ChainComplex {
            grading,
            min_degree: self.min_degree,
            dims: self.dims.clone(),
            maps: self.maps.iter().map(IntMatrix::transpose).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Multiplies every differential by `k`.
    pub fn scaled(&self, k: i64) -> ChainComplex {
        ChainComplex { maps: self.maps.iter().map(|m| m.scaled(k)).collect(), ..self.clone() }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| if (self.min_degree + k as i32).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    /// Fails with the lowest offending degree if some composite is nonzero.
    pub fn check_square_zero(&self) -> Result<()> {
        for k in 0..self.maps.len().saturating_sub(1) {
            let comp = match self.grading {
                Grading::Chain => self.maps[k].mul(&self.maps[k + 1]),
                Grading::Cochain => self.maps[k + 1].mul(&self.maps[k]),
            };
            if !comp.is_zero() {
                let degree = match self.grading {
                    Grading::Chain => self.min_degree + k as i32 + 2,
                    Grading::Cochain => self.min_degree + k as i32,
                };
                return Err(Error::DifferentialNotSquareZero(degree));
            }
        }
        Ok(())
    }

    /// Cohomology of the dual when this is a chain complex.
    pub fn cohomology(&self, coeff: Coefficients) -> Result<GradedGroup> {
        match self.grading {
            Grading::Chain => {
                self.check_square_zero()?;
                self.dual().cohomology(coeff)
            }
            Grading::Cochain => {
                self.check_square_zero()?;
                Ok(ascending(self.min_degree, &self.dims, &self.maps, coeff))
            }
        }
    }

    /// Homology of the chain complex (or of the dual of a cochain complex).
    pub fn homology(&self, coeff: Coefficients) -> Result<GradedGroup> {
        match self.grading {
            Grading::Cochain => {
                self.check_square_zero()?;
                self.dual().homology(coeff)
            }
            Grading::Chain => {
                self.check_square_zero()?;
                // negate degrees so the boundary raises degree
                let dims: Vec<usize> = self.dims.iter().rev().copied().collect();
                let maps: Vec<IntMatrix> = self.maps.iter().rev().cloned().collect();
                let reversed = ascending(-self.max_degree(), &dims, &maps, coeff);
                Ok(GradedGroup::from_degrees(reversed.iter().map(|(d, a)| (-d, a.clone()))))
            }
        }
    }
}

/// Cohomology of `C^lo -> C^{lo+1} -> ...` with `maps[k]: C^{lo+k} -> C^{lo+k+1}`.
fn ascending(lo: i32, dims: &[usize], maps: &[IntMatrix], coeff: Coefficients) -> GradedGroup {
    match coeff {
        Coefficients::Z | Coefficients::Q => {
            let factors: Vec<_> = maps.iter().map(invariant_factors).collect();
            GradedGroup::from_degrees(dims.iter().enumerate().map(|(k, &d)| {
                let out = factors.get(k).map_or(0, Vec::len);
                let inc = if k > 0 { factors[k - 1].as_slice() } else { &[] };
                let rank = d - out - inc.len();
                let g = match coeff {
                    Coefficients::Z => AbelianGroup::from_invariant_factors(rank, inc),
                    _ => AbelianGroup::free(rank),
                };
                (lo + k as i32, g)
            }))
        }
        Coefficients::Mod(2) => {
            let ranks: Vec<usize> = maps.iter().map(|m| m.mod2().rank()).collect();
            GradedGroup::from_degrees(dims.iter().enumerate().map(|(k, &d)| {
                let out = ranks.get(k).copied().unwrap_or(0);
                let inc = if k > 0 { ranks[k - 1] } else { 0 };
                (lo + k as i32, AbelianGroup::cyclic(2, d - out - inc))
            }))
        }
        Coefficients::Mod(q) => mod_q_by_cone(lo, dims, maps, q),
    }
}

/// `H^*(C; Z_q)` as the integral cohomology of the mapping cone of
/// multiplication by `q`, which is quasi-isomorphic to `C ⊗ Z_q`.
fn mod_q_by_cone(lo: i32, dims: &[usize], maps: &[IntMatrix], q: u64) -> GradedGroup {
    let q = i64::try_from(q).expect("modulus fits in i64");
    let n = dims.len();
    let dim = |k: isize| if k >= 0 && (k as usize) < n { dims[k as usize] } else { 0 };
    let delta = |k: isize| {
        if k >= 0 && (k as usize) < maps.len() {
            maps[k as usize].clone()
        } else {
            IntMatrix::zeros(dim(k + 1), dim(k))
        }
    };
    // cone degree index c corresponds to original index c - 1, so that
    // Cone^{i} = C^{i+1} ⊕ C^{i} for i from lo - 1 to the top degree
    let cone_dims: Vec<usize> = (-1..n as isize).map(|i| dim(i + 1) + dim(i)).collect();
    let cone_maps: Vec<IntMatrix> = (-1..n as isize - 1)
        .map(|i| {
            let top = delta(i + 1).scaled(-1);
            let zero = IntMatrix::zeros(dim(i + 2), dim(i));
            let mult = IntMatrix::identity(dim(i + 1)).scaled(q);
            IntMatrix::block(&top, &zero, &mult, &delta(i))
        })
        .collect();
    let h = ascending(lo - 1, &cone_dims, &cone_maps, Coefficients::Z);
    debug_assert!(h.iter().all(|(_, a)| a.rank == 0), "cone cohomology must be torsion");
    h
}
