//! Finite simplicial complexes on the vertex set `[m]`.

use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::face::{graded_order, Face, MAX_VERTICES};
use crate::linalg::{AbelianGroup, ChainComplex, Coefficients, GradedGroup, IntMatrix};

/// A simplicial complex stored by its facets (sorted lexicographically).
///
/// Complexes built from user input must cover every vertex of `[m]`;
/// derived complexes (full subcomplexes, links) keep the ambient `m` and
/// record the vertices they actually use. The void complex has the single
/// face `∅`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    m: usize,
    vertices: Face,
    facets: Vec<Face>,
}

impl SimplicialComplex {
    /// Validated constructor: facets must form an antichain covering `[m]`.
    pub fn new(m: usize, facets: Vec<Face>) -> Result<Self> {
        if m == 0 || m > MAX_VERTICES {
            return Err(Error::InvalidComplex(format!("vertex count must lie in 1..={MAX_VERTICES}, got {m}")));
        }
        if facets.is_empty() {
            return Err(Error::InvalidComplex("no facets given".into()));
        }
        if facets == [Face::EMPTY] {
            return Ok(SimplicialComplex::void(m));
        }
        let full = Face::full(m);
        for f in &facets {
            if f.is_empty() {
                return Err(Error::InvalidComplex("the empty face cannot be a facet of a nonvoid complex".into()));
            }
            if !f.is_subset(full) {
                return Err(Error::InvalidComplex(format!("facet {f} has vertices outside [{m}]")));
            }
        }
        for (i, a) in facets.iter().enumerate() {
            for (j, b) in facets.iter().enumerate() {
                if i != j && a.is_subset(*b) {
                    return Err(Error::InvalidComplex(format!("facet {a} is contained in facet {b}")));
                }
            }
        }
        let covered = facets.iter().fold(Face::EMPTY, |acc, f| acc.union(*f));
        if covered != full {
            let missing = full.difference(covered);
            return Err(Error::InvalidComplex(format!("vertices {missing} lie in no facet")));
        }
        Ok(SimplicialComplex::from_maximal(m, facets))
    }

    /// Convenience constructor from 1-based vertex lists.
    pub fn from_lists(m: usize, facets: &[&[usize]]) -> Result<Self> {
        SimplicialComplex::new(m, facets.iter().map(|f| Face::new(f)).collect())
    }

    /// The complex whose only face is `∅`.
    pub fn void(m: usize) -> Self {
        SimplicialComplex { m, vertices: Face::EMPTY, facets: vec![Face::EMPTY] }
    }

    /// Builds the complex generated by arbitrary faces, keeping maximal ones.
    pub fn generated_by(m: usize, faces: impl IntoIterator<Item = Face>) -> Self {
        let mut cand: Vec<Face> = faces.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        cand.sort_by(|a, b| b.len().cmp(&a.len()));
        let mut maximal: Vec<Face> = Vec::new();
        for f in cand {
            if !maximal.iter().any(|g| f.is_subset(*g)) {
                maximal.push(f);
            }
        }
        if maximal.iter().all(|f| f.is_empty()) {
            return SimplicialComplex::void(m);
        }
        SimplicialComplex::from_maximal(m, maximal)
    }

    fn from_maximal(m: usize, mut facets: Vec<Face>) -> Self {
        facets.sort();
        let vertices = facets.iter().fold(Face::EMPTY, |acc, f| acc.union(*f));
        SimplicialComplex { m, vertices, facets }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn vertices(&self) -> Face {
        self.vertices
    }

    pub fn is_void(&self) -> bool {
        self.facets == [Face::EMPTY]
    }

    /// Largest facet size, i.e. `dim + 1`.
    pub fn facet_size(&self) -> usize {
        self.facets.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    pub fn dim(&self) -> isize {
        self.facet_size() as isize - 1
    }

    pub fn is_pure(&self) -> bool {
        let n = self.facet_size();
        self.facets.iter().all(|f| f.len() == n)
    }

    pub fn contains(&self, face: Face) -> bool {
        self.facets.iter().any(|f| face.is_subset(*f))
    }

    /// All faces including `∅`, by size and then lexicographically.
    pub fn faces(&self) -> Vec<Face> {
        let mut all: Vec<Face> = self.facets.iter().flat_map(|f| f.subsets()).collect::<BTreeSet<_>>().into_iter().collect();
        all.sort_by(graded_order);
        all
    }

    /// Faces grouped by size: entry `k` holds the faces with `k` vertices.
    pub fn faces_by_size(&self) -> Vec<Vec<Face>> {
        let mut out = vec![Vec::new(); self.facet_size() + 1];
        for f in self.faces() {
            out[f.len()].push(f);
        }
        out
    }

    /// `(f_{-1}, f_0, ..., f_{d})`.
    pub fn f_vector(&self) -> Vec<u64> {
        self.faces_by_size().iter().map(|v| v.len() as u64).collect()
    }

    /// Unreduced Euler characteristic `Σ_{σ ≠ ∅} (-1)^{|σ|+1}`.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().skip(1).map(|(k, &c)| if k % 2 == 1 { c as i64 } else { -(c as i64) }).sum()
    }

    /// `h_k = Σ_{i=0}^{k} (-1)^{k-i} C(n-i, k-i) f_{i-1}` for a pure complex of dimension `n - 1`.
    pub fn h_vector(&self) -> Result<Vec<i64>> {
        if !self.is_pure() {
            return Err(Error::NotPure);
        }
        let n = self.facet_size();
        let f = self.f_vector();
        Ok((0..=n)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let term = binomial((n - i) as u64, (k - i) as u64) as i64 * f[i] as i64;
                        if (k - i) % 2 == 0 { term } else { -term }
                    })
                    .sum()
            })
            .collect())
    }

    /// `K_ω = {σ ∈ K : σ ⊆ ω}`; the void complex when no vertex of `ω` is used.
    pub fn full_subcomplex(&self, omega: Face) -> SimplicialComplex {
        SimplicialComplex::generated_by(self.m, self.facets.iter().map(|f| f.intersection(omega)))
    }

    /// `lk(σ) = {τ : τ ∩ σ = ∅, τ ∪ σ ∈ K}`.
    pub fn link(&self, sigma: Face) -> Result<SimplicialComplex> {
        if !self.contains(sigma) {
            return Err(Error::FaceNotInComplex(sigma));
        }
        Ok(SimplicialComplex::generated_by(self.m, self.facets.iter().filter(|f| sigma.is_subset(**f)).map(|f| f.difference(sigma))))
    }

    /// Augmented simplicial chain complex in degrees `-1..=dim` with
    /// `∂[v_0 ... v_k] = Σ (-1)^j [v_0 ... v̂_j ... v_k]`; also returns the
    /// ordered basis in each degree.
    pub fn augmented_chain_complex(&self) -> (ChainComplex, Vec<Vec<Face>>) {
        let basis = self.faces_by_size();
        let index: Vec<HashMap<Face, usize>> = basis.iter().map(|b| b.iter().enumerate().map(|(i, &f)| (f, i)).collect()).collect();
        let maps = (1..basis.len())
            .map(|k| {
                let entries = basis[k].iter().enumerate().flat_map(|(col, &s)| {
                    let idx = &index[k - 1];
                    s.vertices().enumerate().map(move |(j, v)| (idx[&s.without(v)], col, if j % 2 == 0 { 1 } else { -1 }))
                });
                IntMatrix::from_triplets(basis[k - 1].len(), basis[k].len(), entries)
            })
            .collect();
        let dims = basis.iter().map(Vec::len).collect();
        let labels = basis.iter().map(|b| b.iter().map(|f| f.to_string()).collect()).collect();
        let cc = ChainComplex::chain(-1, dims, maps).expect("shapes match by construction").with_labels(labels);
        (cc, basis)
    }

    pub fn reduced_cohomology(&self, coeff: Coefficients) -> GradedGroup {
        self.augmented_chain_complex().0.cohomology(coeff).expect("simplicial boundary squares to zero")
    }

    pub fn reduced_homology(&self, coeff: Coefficients) -> GradedGroup {
        self.augmented_chain_complex().0.homology(coeff).expect("simplicial boundary squares to zero")
    }

    /// Reduced mod-2 Betti numbers in degrees `-1..=dim`.
    pub fn reduced_betti_mod2(&self) -> Vec<usize> {
        let h = self.reduced_homology(Coefficients::Mod(2));
        (-1..=self.dim() as i32).map(|d| h.get(d).dimension_mod(2)).collect()
    }

    /// Reisner's criterion over GF(2): every link (including `lk ∅ = K`)
    /// has vanishing reduced homology below its top dimension.
    pub fn reisner_cm_check(&self) -> bool {
        self.faces().into_iter().all(|s| {
            let lk = self.link(s).expect("face of the complex");
            let betti = lk.reduced_betti_mod2();
            // betti[0] is degree -1
            betti.iter().take(betti.len().saturating_sub(1)).all(|&b| b == 0)
        })
    }

    /// Checks that `K` is a closed pseudomanifold with the integral homology
    /// of a sphere of its dimension.
    pub fn check_homology_sphere(&self) -> Result<()> {
        if !self.is_pure() {
            return Err(Error::NotASphere("complex is not pure".into()));
        }
        let n = self.facet_size();
        if n == 0 {
            return Err(Error::NotASphere("void complex".into()));
        }
        let mut ridges: HashMap<Face, usize> = HashMap::new();
        for f in &self.facets {
            for v in f.vertices() {
                *ridges.entry(f.without(v)).or_default() += 1;
            }
        }
        if let Some((r, c)) = ridges.iter().find(|&(_, &c)| c != 2) {
            return Err(Error::NotASphere(format!("ridge {r} lies in {c} facets")));
        }
        let h = self.reduced_homology(Coefficients::Z);
        let expected = GradedGroup::from_degrees([(n as i32 - 1, AbelianGroup::free(1))]);
        if h != expected {
            return Err(Error::NotASphere(format!("reduced homology is {h}")));
        }
        Ok(())
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Boundary of the simplex on `[n + 1]`.
pub fn simplex_boundary(n: usize) -> SimplicialComplex {
    let full = Face::full(n + 1);
    SimplicialComplex::new(n + 1, full.vertices().map(|v| full.without(v)).collect()).expect("valid sphere")
}

/// Boundary of the `n`-dimensional cross-polytope; vertices `i` and `i + n`
/// are opposite.
pub fn cross_polytope_boundary(n: usize) -> SimplicialComplex {
    let facets = (0..1u64 << n)
        .map(|mask| (1..=n).map(|i| if mask >> (i - 1) & 1 == 1 { i + n } else { i }).collect())
        .collect();
    SimplicialComplex::new(2 * n, facets).expect("valid sphere")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_cycle() -> SimplicialComplex {
        SimplicialComplex::from_lists(4, &[&[1, 2], &[2, 3], &[3, 4], &[1, 4]]).unwrap()
    }

    // independent oracle for the f-to-h transform via h(t) = f(t - 1) reversal
    fn h_by_polynomial(f: &[u64]) -> Vec<i64> {
        let n = f.len() - 1;
        // Σ f_{i-1} (t-1)^{n-i}, coefficients of t^{n-k} give h_k
        let mut poly = vec![0i64; n + 1]; // poly[d] = coeff of t^d
        for (i, &fi) in f.iter().enumerate() {
            let e = n - i;
            for j in 0..=e {
                let c = binomial(e as u64, j as u64) as i64 * if (e - j).is_multiple_of(2) { 1 } else { -1 };
                poly[j] += c * fi as i64;
            }
        }
        (0..=n).map(|k| poly[n - k]).collect()
    }

    #[test]
    fn f_and_h_vectors() {
        let c = four_cycle();
        assert_eq!(c.f_vector(), vec![1, 4, 4]);
        assert_eq!(c.h_vector().unwrap(), vec![1, 2, 1]);
        assert_eq!(h_by_polynomial(&c.f_vector()), vec![1, 2, 1]);
        let s = simplex_boundary(3);
        assert_eq!(s.f_vector(), vec![1, 4, 6, 4]);
        assert_eq!(s.h_vector().unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(h_by_polynomial(&s.f_vector()), vec![1, 1, 1, 1]);
        assert_eq!(SimplicialComplex::void(3).f_vector(), vec![1]);
        let single = SimplicialComplex::from_lists(3, &[&[1, 2, 3]]).unwrap();
        assert_eq!(single.h_vector().unwrap(), vec![1, 0, 0, 0]);
        let cross = cross_polytope_boundary(4);
        assert_eq!(cross.h_vector().unwrap(), h_by_polynomial(&cross.f_vector()));
        assert_eq!(cross.h_vector().unwrap(), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn not_pure() {
        let k = SimplicialComplex::from_lists(3, &[&[1, 2], &[3]]).unwrap();
        assert_eq!(k.h_vector(), Err(Error::NotPure));
    }

    #[test]
    fn validation() {
        assert!(SimplicialComplex::from_lists(3, &[&[1, 2], &[1, 2, 3]]).is_err());
        assert!(SimplicialComplex::from_lists(4, &[&[1, 2], &[2, 3]]).is_err());
        assert!(SimplicialComplex::from_lists(2, &[&[1, 3]]).is_err());
        assert!(SimplicialComplex::new(2, vec![Face::EMPTY]).unwrap().is_void());
    }

    #[test]
    fn full_subcomplexes() {
        let k = four_cycle();
        assert_eq!(k.full_subcomplex(Face::new(&[1, 3, 4])).facets(), &[Face::new(&[1, 4]), Face::new(&[3, 4])]);
        assert_eq!(k.full_subcomplex(Face::new(&[2, 4])).facets(), &[Face::new(&[2]), Face::new(&[4])]);
        assert!(k.full_subcomplex(Face::EMPTY).is_void());
        assert_eq!(k.full_subcomplex(Face::full(4)), k);
        let w = Face::new(&[1, 2, 3]);
        let w2 = Face::new(&[1, 3]);
        assert_eq!(k.full_subcomplex(w).full_subcomplex(w2), k.full_subcomplex(w2));
    }

    #[test]
    fn euler_characteristic_matches_face_sum() {
        for k in [four_cycle(), simplex_boundary(3), cross_polytope_boundary(3)] {
            let direct: i64 = k.faces().iter().filter(|f| !f.is_empty()).map(|f| if f.len() % 2 == 1 { 1 } else { -1 }).sum();
            assert_eq!(k.euler_characteristic(), direct);
        }
        assert_eq!(simplex_boundary(3).euler_characteristic(), 2);
    }

    #[test]
    fn reisner() {
        assert!(four_cycle().reisner_cm_check());
        assert!(simplex_boundary(2).reisner_cm_check());
        let two_edges = SimplicialComplex::from_lists(4, &[&[1, 2], &[3, 4]]).unwrap();
        assert!(!two_edges.reisner_cm_check());
        assert_eq!(two_edges.reduced_betti_mod2(), vec![0, 1, 0]);
        // bowtie: two triangles sharing a vertex is not CM (link of the vertex is disconnected)
        let bowtie = SimplicialComplex::from_lists(5, &[&[1, 2, 3], &[3, 4, 5]]).unwrap();
        assert!(!bowtie.reisner_cm_check());
    }

    #[test]
    fn reduced_cohomology_examples() {
        let circle = simplex_boundary(2);
        assert_eq!(circle.reduced_cohomology(Coefficients::Z), GradedGroup::from_degrees([(1, AbelianGroup::free(1))]));
        assert_eq!(SimplicialComplex::void(1).reduced_cohomology(Coefficients::Z), GradedGroup::from_degrees([(-1, AbelianGroup::free(1))]));
        let two_points = four_cycle().full_subcomplex(Face::new(&[2, 4]));
        assert_eq!(two_points.reduced_cohomology(Coefficients::Z), GradedGroup::from_degrees([(0, AbelianGroup::free(1))]));
    }

    #[test]
    fn spheres() {
        assert!(cross_polytope_boundary(4).check_homology_sphere().is_ok());
        assert!(simplex_boundary(3).check_homology_sphere().is_ok());
        let disk = SimplicialComplex::from_lists(3, &[&[1, 2], &[2, 3]]).unwrap();
        assert!(matches!(disk.check_homology_sphere(), Err(Error::NotASphere(_))));
    }
}
