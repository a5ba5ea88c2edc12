//! The Stanley–Reisner ring `Z_2[K]`, reduction modulo the linear forms
//! `l_{λ_i} = Σ_j λ_ij x_j` onto the basis `{x_{r(σ_j)}}`, and `Sq^1`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;
use crate::linalg::{BitMatrix, BitVector, CharMatrix};
use crate::shelling::{verify_shelling, Shelling};

/// `x_1^{e_1} ... x_m^{e_m}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(m: usize) -> Self {
        Monomial(vec![0; m])
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    /// The square-free monomial `x_σ`.
    pub fn square_free(m: usize, sigma: Face) -> Self {
        Monomial((1..=m).map(|i| u32::from(sigma.contains(i))).collect())
    }

    pub fn variable(m: usize, i: usize) -> Self {
        Monomial::square_free(m, Face::singleton(i))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn support(&self) -> Face {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i + 1).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A GF(2) combination of monomials of `Z_2[K]`; monomials whose support is
/// not a face are zero and never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FaceRingElement {
    terms: BTreeSet<Monomial>,
}

impl FaceRingElement {
    pub fn zero() -> Self {
        FaceRingElement::default()
    }

    pub fn monomial(k: &SimplicialComplex, mono: Monomial) -> Self {
        let mut e = FaceRingElement::zero();
        e.add_monomial(k, mono);
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_monomial(&mut self, k: &SimplicialComplex, mono: Monomial) {
        if !k.contains(mono.support()) {
            return;
        }
        if !self.terms.remove(&mono) {
            self.terms.insert(mono);
        }
    }

    pub fn add(&self, k: &SimplicialComplex, other: &FaceRingElement) -> FaceRingElement {
        let mut out = self.clone();
        for t in &other.terms {
            out.add_monomial(k, t.clone());
        }
        out
    }

    pub fn mul(&self, k: &SimplicialComplex, other: &FaceRingElement) -> FaceRingElement {
        let mut out = FaceRingElement::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.add_monomial(k, a.mul(b));
            }
        }
        out
    }

    /// The linear form `l_{λ_i}` of row `i` (1-based).
    pub fn linear_form(k: &SimplicialComplex, lambda: &CharMatrix, i: usize) -> Self {
        let mut e = FaceRingElement::zero();
        for j in lambda.row(i).vertices() {
            e.add_monomial(k, Monomial::variable(k.m(), j));
        }
        e
    }

    /// `Sq^1` via the Cartan formula: `Sq^1(Π x_i^{n_i}) = Σ_i n_i x_i^{n_i + 1} Π_{k≠i} x_k^{n_k}`.
    pub fn sq1(&self, k: &SimplicialComplex) -> FaceRingElement {
        let mut out = FaceRingElement::zero();
        for t in &self.terms {
            for (i, &e) in t.0.iter().enumerate() {
                if e % 2 == 1 {
                    let mut raised = t.0.clone();
                    raised[i] += 1;
                    out.add_monomial(k, Monomial(raised));
                }
            }
        }
        out
    }

    /// Homogeneous components by degree.
    pub fn components(&self) -> Vec<(usize, Vec<Monomial>)> {
        let mut by: HashMap<usize, Vec<Monomial>> = HashMap::new();
        for t in &self.terms {
            by.entry(t.degree()).or_default().push(t.clone());
        }
        let mut v: Vec<_> = by.into_iter().collect();
        v.sort_by_key(|(d, _)| *d);
        v
    }
}

impl fmt::Display for FaceRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Non-singularity as an l.s.o.p. statement: the columns of `Λ` over every
/// facet are independent.
pub fn lsop_check(k: &SimplicialComplex, lambda: &CharMatrix) -> Result<bool> {
    if lambda.m() != k.m() {
        return Err(Error::DimensionMismatch(format!("Λ has {} columns, K has {} vertices", lambda.m(), k.m())));
    }
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    if lambda.n() != k.facet_size() {
        return Err(Error::DimensionMismatch(format!("Λ has {} rows, facets have {} vertices", lambda.n(), k.facet_size())));
    }
    Ok(k.facets().iter().all(|&f| lambda.columns_independent(f)))
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    // positive compositions of `total` into `parts` pieces
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return if total >= 1 { vec![vec![total]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts as u32 - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All monomials of the given degree whose support is a face, sorted.
pub fn monomial_basis(k: &SimplicialComplex, degree: usize) -> Vec<Monomial> {
    let m = k.m();
    let mut out: Vec<Monomial> = Vec::new();
    for sigma in k.faces() {
        if sigma.len() > degree || (sigma.is_empty() && degree > 0) {
            continue;
        }
        let verts: Vec<usize> = sigma.vertices().collect();
        for comp in compositions(degree as u32, verts.len()) {
            let mut e = vec![0; m];
            for (&v, &c) in verts.iter().zip(&comp) {
                e[v - 1] = c;
            }
            out.push(Monomial(e));
        }
    }
    out.sort();
    out
}

struct DegreeSystem {
    monomials: HashMap<Monomial, usize>,
    /// columns: l-multiples, then the basis monomials of this degree
    matrix: BitMatrix,
    lmult_cols: usize,
    /// shelling positions of the basis elements of this degree
    basis: Vec<usize>,
}

/// Degree-by-degree reduction onto the free-module basis `{x_{r(σ_j)}}`.
pub struct QuotientReducer {
    k: SimplicialComplex,
    lambda: CharMatrix,
    shelling: Shelling,
    systems: HashMap<usize, DegreeSystem>,
}

impl QuotientReducer {
    pub fn new(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<Self> {
        if !lsop_check(k, lambda)? {
            return Err(Error::ReductionFailure("Λ is not a linear system of parameters".into()));
        }
        Ok(QuotientReducer { k: k.clone(), lambda: lambda.clone(), shelling: shelling.clone(), systems: HashMap::new() })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.k
    }

    /// Shelling positions `j` with `|r(σ_j)| = degree`.
    pub fn basis_of_degree(&self, degree: usize) -> Vec<usize> {
        (0..self.shelling.len()).filter(|&j| self.shelling.restrictions()[j].len() == degree).collect()
    }

    pub fn basis_element(&self, j: usize) -> FaceRingElement {
        FaceRingElement::monomial(&self.k, Monomial::square_free(self.k.m(), self.shelling.restrictions()[j]))
    }

    fn system(&mut self, degree: usize) -> Result<&DegreeSystem> {
        if !self.systems.contains_key(&degree) {
            let sys = self.build(degree)?;
            self.systems.insert(degree, sys);
        }
        Ok(&self.systems[&degree])
    }

    fn build(&self, degree: usize) -> Result<DegreeSystem> {
        let rows = monomial_basis(&self.k, degree);
        let monomials: HashMap<Monomial, usize> = rows.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let mut columns: Vec<BitVector> = Vec::new();
        let to_vec = |e: &FaceRingElement| {
            let mut v = BitVector::zeros(rows.len());
            for t in e.terms() {
                v.flip(monomials[t]);
            }
            v
        };
        if degree > 0 {
            let lower = monomial_basis(&self.k, degree - 1);
            for i in 1..=self.lambda.n() {
                let l = FaceRingElement::linear_form(&self.k, &self.lambda, i);
                for mono in &lower {
                    columns.push(to_vec(&l.mul(&self.k, &FaceRingElement::monomial(&self.k, mono.clone()))));
                }
            }
        }
        let lmult_cols = columns.len();
        let basis = self.basis_of_degree(degree);
        for &j in &basis {
            columns.push(to_vec(&self.basis_element(j)));
        }
        let matrix = BitMatrix::from_columns(rows.len(), &columns);
        let l_rank = BitMatrix::from_columns(rows.len(), &columns[..lmult_cols]).rank();
        let full_rank = matrix.rank();
        if full_rank != l_rank + basis.len() {
            return Err(Error::ReductionFailure(format!("degree {degree}: restriction monomials are dependent modulo the linear forms")));
        }
        if full_rank != rows.len() {
            return Err(Error::ReductionFailure(format!(
                "degree {degree}: restriction monomials and linear forms span {full_rank} of {} dimensions",
                rows.len()
            )));
        }
        Ok(DegreeSystem { monomials, matrix, lmult_cols, basis })
    }

    /// Checks that the quotient basis is valid in every degree `0..=max_degree`.
    pub fn check_degrees(&mut self, max_degree: usize) -> Result<()> {
        for d in 0..=max_degree {
            self.system(d)?;
        }
        Ok(())
    }

    /// Coordinates of `elt` in the basis `{x_{r(σ_j)}}` modulo the linear
    /// forms, as the set of shelling positions `j` with coefficient 1.
    pub fn reduce(&mut self, elt: &FaceRingElement) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for (d, monos) in elt.components() {
            let sys = self.system(d)?;
            let mut rhs = BitVector::zeros(sys.matrix.nrows());
            for mono in &monos {
                rhs.flip(sys.monomials[mono]);
            }
            let x = sys.matrix.solve(&rhs).ok_or_else(|| Error::ReductionFailure(format!("no solution in degree {d}")))?;
            for (c, &j) in sys.basis.iter().enumerate() {
                if x.get(sys.lmult_cols + c) && !out.remove(&j) {
                    out.insert(j);
                }
            }
        }
        Ok(out)
    }
}

pub fn quotient_basis_reduce(elt: &FaceRingElement, k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<BTreeSet<usize>> {
    QuotientReducer::new(k, lambda, shelling)?.reduce(elt)
}

/// `d_1 = Sq^1` on the quotient basis, one matrix per degree `d` mapping the
/// degree-`d` basis (columns, in shelling order) to the degree-`d+1` basis
/// (rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sq1Matrices {
    /// Shelling positions of the basis in each degree `0..=n`.
    pub basis: Vec<Vec<usize>>,
    pub matrices: Vec<BitMatrix>,
}

impl Sq1Matrices {
    pub fn rank(&self, degree: usize) -> usize {
        self.matrices.get(degree).map_or(0, BitMatrix::rank)
    }

    /// Image of the basis element at shelling position `j`.
    pub fn image(&self, j: usize) -> Vec<usize> {
        for (d, b) in self.basis.iter().enumerate() {
            if let Some(c) = b.iter().position(|&x| x == j) {
                let Some(next) = self.basis.get(d + 1) else { return Vec::new() };
                return (0..next.len()).filter(|&r| self.matrices[d].get(r, c)).map(|r| next[r]).collect();
            }
        }
        Vec::new()
    }

    pub fn squares_to_zero(&self) -> bool {
        self.matrices.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }
}

pub fn sq1_matrix(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<Sq1Matrices> {
    let mut red = QuotientReducer::new(k, lambda, shelling)?;
    let n = k.facet_size();
    let basis: Vec<Vec<usize>> = (0..=n).map(|d| red.basis_of_degree(d)).collect();
    let mut matrices = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let next: &[usize] = basis.get(d + 1).map_or(&[], Vec::as_slice);
        let mut mat = BitMatrix::zeros(next.len(), basis[d].len());
        for (c, &j) in basis[d].iter().enumerate() {
            let image = red.reduce(&red.basis_element(j).sq1(k))?;
            for t in image {
                let r = next.iter().position(|&x| x == t).ok_or_else(|| Error::ReductionFailure(format!("Sq^1 left degree {}", d + 1)))?;
                mat.set(r, c, true);
            }
        }
        matrices.push(mat);
    }
    Ok(Sq1Matrices { basis, matrices })
}

/// For each `j`, the first `j` facets shell `K_j` and `{x_{r(σ_t)}}_{t ≤ j}`
/// is a valid quotient basis of `Z_2[K_j]` in every degree.
pub fn djsta_filtration_check(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<bool> {
    let n = k.facet_size();
    for j in 1..=shelling.len() {
        let (kj, sj) = shelling.truncated(k.m(), j);
        let rebuilt = verify_shelling(&kj, sj.order())?;
        if rebuilt.restrictions() != &shelling.restrictions()[..j] {
            return Ok(false);
        }
        let mut red = QuotientReducer::new(&kj, lambda, &rebuilt)?;
        if red.check_degrees(n + 1).is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::simplex_boundary;

    fn f(v: &[usize]) -> Face {
        Face::new(v)
    }

    fn klein() -> (SimplicialComplex, CharMatrix, Shelling) {
        let k = SimplicialComplex::from_lists(4, &[&[1, 2], &[2, 3], &[3, 4], &[1, 4]]).unwrap();
        let l = CharMatrix::from_rows(&[vec![1, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        let sh = verify_shelling(&k, &[f(&[1, 2]), f(&[2, 3]), f(&[3, 4]), f(&[1, 4])]).unwrap();
        (k, l, sh)
    }

    fn rp2() -> (SimplicialComplex, CharMatrix, Shelling) {
        let k = simplex_boundary(2);
        let l = CharMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let sh = verify_shelling(&k, &[f(&[1, 2]), f(&[2, 3]), f(&[1, 3])]).unwrap();
        (k, l, sh)
    }

    #[test]
    fn lsop() {
        let (k, l, _) = klein();
        assert!(lsop_check(&k, &l).unwrap());
        let (t, l, _) = rp2();
        assert!(lsop_check(&t, &l).unwrap());
        let bad = CharMatrix::from_rows(&[vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(!lsop_check(&t, &bad).unwrap());
        let wide = CharMatrix::from_rows(&[vec![1, 0, 1, 0]]).unwrap();
        assert!(matches!(lsop_check(&t, &wide), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn monomial_counts() {
        let (t, _, _) = rp2();
        assert_eq!(monomial_basis(&t, 2).len(), 6);
        assert_eq!(monomial_basis(&t, 0), vec![Monomial::one(3)]);
        assert_eq!(monomial_basis(&t, 1).len(), 3);
        // oracle: count exponent vectors of degree 3 with face support by brute force
        let brute = (0..4u32)
            .flat_map(|a| (0..4u32).flat_map(move |b| (0..4u32).map(move |c| vec![a, b, c])))
            .filter(|e| e.iter().sum::<u32>() == 3 && t.contains(Monomial(e.clone()).support()))
            .count();
        assert_eq!(monomial_basis(&t, 3).len(), brute);
    }

    #[test]
    fn klein_reduction() {
        let (k, l, sh) = klein();
        let mut red = QuotientReducer::new(&k, &l, &sh).unwrap();
        let x3 = FaceRingElement::monomial(&k, Monomial::variable(4, 3));
        let x4 = FaceRingElement::monomial(&k, Monomial::variable(4, 4));
        // x_3^2 = x_1 x_4 (position 3), x_4^2 = 0
        assert_eq!(red.reduce(&x3.mul(&k, &x3)).unwrap(), BTreeSet::from([3]));
        assert!(red.reduce(&x4.mul(&k, &x4)).unwrap().is_empty());
        let one = FaceRingElement::monomial(&k, Monomial::one(4));
        assert_eq!(red.reduce(&one).unwrap(), BTreeSet::from([0]));
    }

    #[test]
    fn sq1_examples() {
        let (k, l, sh) = klein();
        let sq = sq1_matrix(&k, &l, &sh).unwrap();
        assert_eq!(sq.basis, vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(sq.image(1), vec![3]);
        assert!(sq.image(2).is_empty());
        assert!(sq.image(3).is_empty());
        assert!(sq.image(0).is_empty());
        assert_eq!(sq.rank(1), 1);
        assert!(sq.squares_to_zero());

        let (t, l, sh) = rp2();
        let sq = sq1_matrix(&t, &l, &sh).unwrap();
        // x_3 -> x_1 x_3
        assert_eq!(sq.image(1), vec![2]);
    }

    #[test]
    fn basis_sizes_match_h_vector() {
        let (k, l, sh) = klein();
        let sq = sq1_matrix(&k, &l, &sh).unwrap();
        let sizes: Vec<i64> = sq.basis.iter().map(|b| b.len() as i64).collect();
        assert_eq!(sizes, k.h_vector().unwrap());
        assert!(djsta_filtration_check(&k, &l, &sh).unwrap());
    }
}
