//! Critical-face complexes of full subcomplexes `K_ω`.
//!
//! Each interval of a regular expanding sequence is collapsed with the
//! matching `α <-> α ∪ {v}`, `v` the smallest free vertex of the interval.
//! The retraction `ρ` onto critical faces is the gradient flow of this
//! matching, and the Morse boundary is `∂̄' = ρ ∘ ∂'`.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;
use crate::linalg::{ChainComplex, CharMatrix, Coefficients, GradedGroup, IntMatrix};
use crate::shelling::{expanding_sequence, ExpandingSequence, Shelling};

/// Signed incidence `[∂β : β \ w]` of the ordered simplicial boundary.
pub fn incidence(beta: Face, w: usize) -> i64 {
    if beta.count_below(w).is_multiple_of(2) { 1 } else { -1 }
}

/// `∂'[σ] = Σ_k (-1)^k [σ \ i_k]` in the augmented complex.
pub fn boundary(sigma: Face) -> Vec<(Face, i64)> {
    sigma.vertices().map(|w| (sigma.without(w), incidence(sigma, w))).collect()
}

/// A sparse integer combination of faces.
pub type FaceChain = BTreeMap<Face, i64>;

fn add_into(acc: &mut FaceChain, face: Face, c: i64) {
    if c == 0 {
        return;
    }
    let e = acc.entry(face).or_insert(0);
    *e += c;
    if *e == 0 {
        acc.remove(&face);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicMatching {
    pub omega: Face,
    /// `(α, α ∪ {v})` pairs in step order.
    pub pairs: Vec<(Face, Face)>,
    /// Unmatched faces in step order; `[∅]` for the void complex.
    pub critical: Vec<Face>,
    /// For each face, the expansion step (0-based) whose interval contains it.
    step_of: HashMap<Face, usize>,
    up: HashMap<Face, Face>,
    down: HashMap<Face, Face>,
}

impl AcyclicMatching {
    pub fn partner_up(&self, alpha: Face) -> Option<Face> {
        self.up.get(&alpha).copied()
    }

    pub fn partner_down(&self, beta: Face) -> Option<Face> {
        self.down.get(&beta).copied()
    }

    pub fn is_critical(&self, face: Face) -> bool {
        self.step_of.contains_key(&face) && !self.up.contains_key(&face) && !self.down.contains_key(&face)
    }

    pub fn faces(&self) -> impl Iterator<Item = Face> + '_ {
        self.step_of.keys().copied()
    }

    /// No closed gradient path `α_0 -> β_0 > α_1 -> β_1 > ... -> α_0`.
    pub fn is_acyclic(&self) -> bool {
        let next = |alpha: Face| -> Vec<Face> {
            let beta = self.up[&alpha];
            beta.vertices().map(|w| beta.without(w)).filter(|&a| a != alpha && self.up.contains_key(&a)).collect()
        };
        !has_cycle(self.up.keys().copied(), next)
    }
}

pub fn acyclic_matching(seq: &ExpandingSequence) -> AcyclicMatching {
    let mut m = AcyclicMatching {
        omega: seq.omega,
        pairs: Vec::new(),
        critical: Vec::new(),
        step_of: HashMap::new(),
        up: HashMap::new(),
        down: HashMap::new(),
    };
    if seq.steps.is_empty() {
        m.critical.push(Face::EMPTY);
        m.step_of.insert(Face::EMPTY, 0);
        return m;
    }
    for (i, (lower, upper)) in seq.intervals().enumerate() {
        let free = upper.difference(lower);
        for x in free.subsets() {
            m.step_of.insert(lower.union(x), i);
        }
        match free.min_vertex() {
            None => m.critical.push(upper),
            Some(v) => {
                for x in free.without(v).subsets() {
                    let alpha = lower.union(x);
                    let beta = alpha.with(v);
                    m.pairs.push((alpha, beta));
                    m.up.insert(alpha, beta);
                    m.down.insert(beta, alpha);
                }
            }
        }
    }
    m
}

/// The Morse complex of `K_ω`: chain complex on critical faces in degrees
/// `-1..=dim K_ω`, each degree's basis in step order, critical faces
/// oriented by increasing vertex order.
#[derive(Clone, Debug)]
pub struct MorseComplex {
    pub omega: Face,
    pub matching: AcyclicMatching,
    /// Critical faces of each degree `d`, stored at index `d + 1`.
    pub basis: Vec<Vec<Face>>,
    pub complex: ChainComplex,
    rho: HashMap<Face, FaceChain>,
}

impl MorseComplex {
    pub fn critical(&self) -> &[Face] {
        &self.matching.critical
    }

    /// Critical faces that are not the degree `-1` class of the void complex.
    pub fn critical_nonempty(&self) -> Vec<Face> {
        self.matching.critical.iter().copied().filter(|f| !f.is_empty()).collect()
    }

    /// `ρ` of a single face of `K_ω`.
    pub fn rho_face(&self, face: Face) -> Result<&FaceChain> {
        self.rho.get(&face).ok_or(Error::FaceNotInComplex(face))
    }

    /// `ρ` of a chain of the augmented complex of `K_ω`.
    pub fn rho(&self, chain: &FaceChain) -> Result<FaceChain> {
        let mut out = FaceChain::new();
        for (&f, &c) in chain {
            for (&g, &d) in self.rho_face(f)? {
                add_into(&mut out, g, c * d);
            }
        }
        Ok(out)
    }

    /// `∂̄'` of a critical face, as a combination of critical faces.
    pub fn morse_boundary(&self, critical: Face) -> FaceChain {
        let chain: FaceChain = boundary(critical).into_iter().collect();
        self.rho(&chain).expect("faces of a face lie in the complex")
    }

    pub fn index_of(&self, critical: Face) -> Option<usize> {
        self.basis.get(critical.len())?.iter().position(|&f| f == critical)
    }

    /// Matrix of `ρ` from the degree-`d` faces (ordered as `faces`) to the
    /// degree-`d` critical faces.
    pub fn rho_matrix(&self, faces: &[Face]) -> IntMatrix {
        let d = faces.first().map_or(0, |f| f.len());
        let rows = self.basis.get(d).map_or(0, Vec::len);
        let entries = faces.iter().enumerate().flat_map(|(col, &f)| {
            self.rho[&f].iter().map(move |(&g, &c)| (self.index_of(g).expect("critical"), col, c))
        });
        IntMatrix::from_triplets(rows, faces.len(), entries)
    }

    /// Checks `ρ ∘ ∂' = ∂̄' ∘ ρ` on every face of `K_ω` and `ρ|Cri = id`.
    pub fn check_chain_map(&self) -> bool {
        let ids = self.matching.critical.iter().all(|&c| self.rho[&c] == FaceChain::from([(c, 1)]));
        ids && self.rho.keys().all(|&f| {
            let lhs = self.rho(&boundary(f).into_iter().collect()).expect("closed under faces");
            let mut rhs = FaceChain::new();
            for (&c, &k) in &self.rho[&f] {
                for (&g, &d) in &self.morse_boundary(c) {
                    add_into(&mut rhs, g, k * d);
                }
            }
            lhs == rhs
        })
    }

    /// `ρ*(c*)` for a critical face `c`: the cochain `σ ↦ coefficient of c in ρ(σ)`.
    pub fn rho_dual(&self, critical: Face) -> FaceChain {
        let mut out = FaceChain::new();
        for (&f, chain) in &self.rho {
            if let Some(&k) = chain.get(&critical) {
                add_into(&mut out, f, k);
            }
        }
        out
    }
}

pub fn morse_complex(k_omega: &SimplicialComplex, matching: &AcyclicMatching) -> Result<MorseComplex> {
    let faces = k_omega.faces();
    if faces.len() != matching.step_of.len() || faces.iter().any(|f| !matching.step_of.contains_key(f)) {
        return Err(Error::InvalidComplex(format!("matching does not cover the faces of K_{}", matching.omega)));
    }
    // ρ in step order, each interval by increasing size
    let mut by_step: Vec<Vec<Face>> = Vec::new();
    for (&f, &s) in &matching.step_of {
        if by_step.len() <= s {
            by_step.resize(s + 1, Vec::new());
        }
        by_step[s].push(f);
    }
    let mut rho: HashMap<Face, FaceChain> = HashMap::new();
    for mut interval in by_step {
        interval.sort_by(crate::face::graded_order);
        for f in interval {
            let value = if matching.down.contains_key(&f) {
                FaceChain::new()
            } else if let Some(&beta) = matching.up.get(&f) {
                let v = beta.difference(f).min_vertex().expect("pair differs by a vertex");
                let eps = incidence(beta, v);
                let mut acc = FaceChain::new();
                for w in beta.vertices().filter(|&w| w != v) {
                    let other = beta.without(w);
                    let coeff = -eps * incidence(beta, w);
                    let prev = rho.get(&other).ok_or_else(|| Error::InvalidComplex(format!("face {other} reached before it was added")))?;
                    for (&g, &d) in prev {
                        add_into(&mut acc, g, coeff * d);
                    }
                }
                acc
            } else {
                FaceChain::from([(f, 1)])
            };
            rho.insert(f, value);
        }
    }
    let top = k_omega.facet_size();
    let mut basis = vec![Vec::new(); top + 1];
    for &c in &matching.critical {
        basis[c.len()].push(c);
    }
    let mut mc = MorseComplex {
        omega: matching.omega,
        matching: matching.clone(),
        basis,
        complex: ChainComplex::chain(-1, vec![0], vec![]).expect("trivial"),
        rho,
    };
    let maps = (1..=top)
        .map(|d| {
            let entries: Vec<(usize, usize, i64)> = mc.basis[d]
                .iter()
                .enumerate()
                .flat_map(|(col, &c)| {
                    mc.morse_boundary(c).into_iter().map(move |(g, k)| (g, col, k)).collect::<Vec<_>>()
                })
                .map(|(g, col, k)| (mc.index_of(g).expect("critical"), col, k))
                .collect();
            IntMatrix::from_triplets(mc.basis[d - 1].len(), mc.basis[d].len(), entries)
        })
        .collect();
    let dims = mc.basis.iter().map(Vec::len).collect();
    let labels = mc.basis.iter().map(|b| b.iter().map(|f| f.to_string()).collect()).collect();
    mc.complex = ChainComplex::chain(-1, dims, maps)?.with_labels(labels);
    Ok(mc)
}

/// Morse complex of `K_ω` for the given shelling of `K`.
pub fn morse_complex_for(k: &SimplicialComplex, shelling: &Shelling, omega: Face) -> Result<MorseComplex> {
    let seq = expanding_sequence(shelling, omega);
    morse_complex(&k.full_subcomplex(omega), &acyclic_matching(&seq))
}

/// The cochain complex `(C̄*_λ, 2d̄')` in degrees `-1..=n-1`, where
/// `C̄*_λ = ⊕_{ω ∈ row λ} C̄*(K_ω)`; its cohomology is `H^{*+1}(Y)`.
#[derive(Clone, Debug)]
pub struct DoubledComplex {
    pub morse: Vec<MorseComplex>,
    /// `(ω, c)` per degree `d`, stored at index `d + 1`.
    pub basis: Vec<Vec<(Face, Face)>>,
    pub complex: ChainComplex,
    /// The same complex with the undoubled coboundary `d̄'`.
    pub undoubled: ChainComplex,
}

impl DoubledComplex {
    pub fn index_of(&self, omega: Face, c: Face) -> Option<usize> {
        self.basis.get(c.len())?.iter().position(|&x| x == (omega, c))
    }

    /// `H^*(Y; R)`, shifted so that degree `i` of the result is `H^i(Y)`.
    pub fn cohomology(&self, coeff: Coefficients) -> Result<GradedGroup> {
        Ok(self.complex.cohomology(coeff)?.shifted(1))
    }
}

pub fn doubled_complex(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<DoubledComplex> {
    crate::toric::validate(k, lambda)?;
    let n = k.facet_size();
    let morse: Vec<MorseComplex> =
        lambda.row_space().into_iter().map(|omega| morse_complex_for(k, shelling, omega)).collect::<Result<_>>()?;
    let mut basis: Vec<Vec<(Face, Face)>> = vec![Vec::new(); n + 1];
    for mc in &morse {
        for (d, faces) in mc.basis.iter().enumerate() {
            basis[d].extend(faces.iter().map(|&c| (mc.omega, c)));
        }
    }
    let index: Vec<HashMap<(Face, Face), usize>> = basis.iter().map(|b| b.iter().enumerate().map(|(i, &x)| (x, i)).collect()).collect();
    // d̄'(c*) = Σ_{τ} [∂̄'τ : c] τ*, block diagonal over ω
    let maps: Vec<IntMatrix> = (0..n)
        .map(|d| {
            let mut entries = Vec::new();
            for mc in &morse {
                for &tau in mc.basis.get(d + 1).into_iter().flatten() {
                    for (c, k) in mc.morse_boundary(tau) {
                        entries.push((index[d + 1][&(mc.omega, tau)], index[d][&(mc.omega, c)], k));
                    }
                }
            }
            IntMatrix::from_triplets(basis[d + 1].len(), basis[d].len(), entries)
        })
        .collect();
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let labels: Vec<Vec<String>> = basis.iter().map(|b| b.iter().map(|(w, c)| format!("{}|{}", w.short_label(), c.short_label())).collect()).collect();
    let undoubled = ChainComplex::cochain(-1, dims, maps)?.with_labels(labels);
    let complex = undoubled.scaled(2);
    complex.check_square_zero()?;
    Ok(DoubledComplex { morse, basis, complex, undoubled })
}

pub fn doubled_cohomology(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<GradedGroup> {
    doubled_complex(k, lambda, shelling)?.cohomology(Coefficients::Z)
}

/// Cycle detection on a directed graph of faces.
pub(crate) fn has_cycle(nodes: impl Iterator<Item = Face>, next: impl Fn(Face) -> Vec<Face>) -> bool {
    let mut state: HashMap<Face, u8> = HashMap::new();
    let mut seen = HashSet::new();
    for start in nodes {
        if !seen.insert(start) || state.contains_key(&start) {
            continue;
        }
        let mut stack = vec![(start, next(start), 0usize)];
        state.insert(start, 1);
        while let Some((node, succ, i)) = stack.last_mut() {
            if *i < succ.len() {
                let s = succ[*i];
                *i += 1;
                match state.get(&s) {
                    Some(1) => return true,
                    Some(_) => {}
                    None => {
                        state.insert(s, 1);
                        let ns = next(s);
                        stack.push((s, ns, 0));
                    }
                }
            } else {
                state.insert(*node, 2);
                stack.pop();
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shelling::verify_shelling;

    fn f(v: &[usize]) -> Face {
        Face::new(v)
    }

    fn klein() -> (SimplicialComplex, CharMatrix, Shelling) {
        let k = SimplicialComplex::from_lists(4, &[&[1, 2], &[2, 3], &[3, 4], &[1, 4]]).unwrap();
        let l = CharMatrix::from_rows(&[vec![1, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        let sh = verify_shelling(&k, &[f(&[1, 2]), f(&[2, 3]), f(&[3, 4]), f(&[1, 4])]).unwrap();
        (k, l, sh)
    }

    #[test]
    fn klein_matching() {
        let (_, _, sh) = klein();
        let m = acyclic_matching(&expanding_sequence(&sh, f(&[1, 3, 4])));
        assert_eq!(m.pairs, vec![(Face::EMPTY, f(&[1])), (f(&[4]), f(&[3, 4]))]);
        assert_eq!(m.critical, vec![f(&[3]), f(&[1, 4])]);
        assert!(m.is_acyclic());
    }

    #[test]
    fn klein_rho_and_boundary() {
        let (k, _, sh) = klein();
        let mc = morse_complex_for(&k, &sh, f(&[1, 3, 4])).unwrap();
        assert_eq!(mc.rho_face(f(&[4])).unwrap(), &FaceChain::from([(f(&[3]), 1)]));
        assert!(mc.rho_face(f(&[3, 4])).unwrap().is_empty());
        assert_eq!(mc.rho_face(f(&[3])).unwrap(), &FaceChain::from([(f(&[3]), 1)]));
        assert_eq!(mc.morse_boundary(f(&[1, 4])), FaceChain::from([(f(&[3]), 1)]));
        assert!(mc.check_chain_map());
        // ∂'[34] = [4] - [3] maps to [3] - [3] = 0
        let chain: FaceChain = boundary(f(&[3, 4])).into_iter().collect();
        assert!(mc.rho(&chain).unwrap().is_empty());
        assert_eq!(mc.basis[1], vec![f(&[3])]);
        assert_eq!(mc.basis[2], vec![f(&[1, 4])]);

        let two = morse_complex_for(&k, &sh, f(&[2, 4])).unwrap();
        assert_eq!(two.critical(), &[f(&[4])]);
        assert_eq!(two.complex.homology(Coefficients::Z).unwrap(), k.full_subcomplex(f(&[2, 4])).reduced_homology(Coefficients::Z));

        let none = morse_complex_for(&k, &sh, f(&[1, 2, 3])).unwrap();
        assert!(none.critical().is_empty());
        assert!(none.complex.homology(Coefficients::Z).unwrap().is_zero());

        let void = morse_complex_for(&k, &sh, Face::EMPTY).unwrap();
        assert_eq!(void.critical(), &[Face::EMPTY]);
    }

    #[test]
    fn morse_homology_matches_simplicial() {
        let (k, _, sh) = klein();
        for omega in Face::full(4).subsets() {
            let mc = morse_complex_for(&k, &sh, omega).unwrap();
            mc.complex.check_square_zero().unwrap();
            assert!(mc.check_chain_map(), "ω = {omega}");
            assert!(mc.matching.is_acyclic());
            let expected = k.full_subcomplex(omega).reduced_homology(Coefficients::Z);
            assert_eq!(mc.complex.homology(Coefficients::Z).unwrap(), expected, "ω = {omega}");
        }
    }

    #[test]
    fn rho_dual_is_triangular() {
        let (k, _, sh) = klein();
        let mc = morse_complex_for(&k, &sh, f(&[1, 3, 4])).unwrap();
        // ρ*(3*) = 3* + 4*: no other critical dual appears
        assert_eq!(mc.rho_dual(f(&[3])), FaceChain::from([(f(&[3]), 1), (f(&[4]), 1)]));
        assert_eq!(mc.rho_dual(f(&[1, 4])), FaceChain::from([(f(&[1, 4]), 1)]));
    }

    #[test]
    fn klein_doubled_cohomology() {
        let (k, l, sh) = klein();
        let h = doubled_cohomology(&k, &l, &sh).unwrap();
        use crate::linalg::AbelianGroup;
        assert_eq!(h, GradedGroup::from_list(&[AbelianGroup::free(1), AbelianGroup::free(1), AbelianGroup::cyclic(2, 1)]));
    }

    #[test]
    fn projective_plane_and_torus() {
        use crate::linalg::AbelianGroup;
        let tri = SimplicialComplex::from_lists(3, &[&[1, 2], &[2, 3], &[1, 3]]).unwrap();
        let l = CharMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let sh = verify_shelling(&tri, &[f(&[1, 2]), f(&[2, 3]), f(&[1, 3])]).unwrap();
        let h = doubled_cohomology(&tri, &l, &sh).unwrap();
        assert_eq!(h, GradedGroup::from_list(&[AbelianGroup::free(1), AbelianGroup::zero(), AbelianGroup::cyclic(2, 1)]));

        let (k, _, sh) = klein();
        let torus = CharMatrix::from_rows(&[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap();
        let h = doubled_cohomology(&k, &torus, &sh).unwrap();
        assert_eq!(h, GradedGroup::from_list(&[AbelianGroup::free(1), AbelianGroup::free(2), AbelianGroup::free(1)]));
    }
}
