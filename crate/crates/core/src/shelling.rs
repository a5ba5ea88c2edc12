//! Shellings, restriction faces and regular expanding sequences of full
//! subcomplexes.

use std::collections::HashSet;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;

/// A shelling order `σ_1, ..., σ_s` together with the restriction faces
/// `r(σ_j) = {v ∈ σ_j : σ_j \ v ⊆ σ_i for some i < j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shelling {
    order: Vec<Face>,
    restrictions: Vec<Face>,
}

impl Shelling {
    pub fn order(&self) -> &[Face] {
        &self.order
    }

    pub fn restrictions(&self) -> &[Face] {
        &self.restrictions
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `#{j : |r(σ_j)| = i}` for `i = 0..=n`, which equals the h-vector.
    pub fn restriction_counts(&self) -> Vec<i64> {
        let n = self.order.first().map_or(0, |f| f.len());
        let mut counts = vec![0; n + 1];
        for r in &self.restrictions {
            counts[r.len()] += 1;
        }
        counts
    }

    /// Position (0-based) of the first facet containing `sigma`.
    pub fn first_containing_index(&self, sigma: Face) -> Option<usize> {
        self.order.iter().position(|f| sigma.is_subset(*f))
    }

    /// `f(σ)`, the earliest facet of the shelling containing `sigma`.
    pub fn first_containing_facet(&self, sigma: Face) -> Result<Face> {
        self.first_containing_index(sigma).map(|j| self.order[j]).ok_or(Error::FaceNotInComplex(sigma))
    }

    /// The first `j` facets, which shell the subcomplex `K_j` on `[m]` they generate.
    pub fn truncated(&self, m: usize, j: usize) -> (SimplicialComplex, Shelling) {
        let j = j.min(self.len());
        let k = SimplicialComplex::generated_by(m, self.order[..j].iter().copied());
        let sh = Shelling { order: self.order[..j].to_vec(), restrictions: self.restrictions[..j].to_vec() };
        (k, sh)
    }
}

fn step_is_valid(n: usize, earlier: impl Iterator<Item = Face>, next: Face) -> bool {
    let mut maximal: Vec<Face> = Vec::new();
    let mut any = false;
    for f in earlier {
        any = true;
        let x = f.intersection(next);
        if maximal.iter().any(|g| x.is_subset(*g)) {
            continue;
        }
        maximal.retain(|g| !g.is_subset(x));
        maximal.push(x);
    }
    !any || maximal.iter().all(|g| g.len() + 1 == n)
}

fn restriction(earlier: &[Face], facet: Face) -> Face {
    facet.vertices().filter(|&v| earlier.iter().any(|f| facet.without(v).is_subset(*f))).collect()
}

/// Checks the shelling condition step by step and computes restrictions.
pub fn verify_shelling(k: &SimplicialComplex, order: &[Face]) -> Result<Shelling> {
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    if order.len() != k.facets().len() {
        return Err(Error::InvalidOrder(format!("order lists {} facets, complex has {}", order.len(), k.facets().len())));
    }
    let mut seen = HashSet::new();
    for f in order {
        if !k.facets().contains(f) {
            return Err(Error::InvalidOrder(format!("{f} is not a facet")));
        }
        if !seen.insert(*f) {
            return Err(Error::InvalidOrder(format!("facet {f} is repeated")));
        }
    }
    let n = k.facet_size();
    let mut restrictions = Vec::with_capacity(order.len());
    for (j, &f) in order.iter().enumerate() {
        if !step_is_valid(n, order[..j].iter().copied(), f) {
            return Err(Error::NotShellingStep(j + 1));
        }
        restrictions.push(restriction(&order[..j], f));
    }
    Ok(Shelling { order: order.to_vec(), restrictions })
}

/// Shelling from 1-based positions into the (sorted) facet list of `k`.
pub fn shelling_from_indices(k: &SimplicialComplex, indices: &[usize]) -> Result<Shelling> {
    let facets = k.facets();
    let order = indices
        .iter()
        .map(|&i| {
            if (1..=facets.len()).contains(&i) {
                Ok(facets[i - 1])
            } else {
                Err(Error::InvalidOrder(format!("facet index {i} outside 1..={}", facets.len())))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    verify_shelling(k, &order)
}

/// Depth-first search over facet orders, candidates tried lexicographically.
/// Whether a facet can be appended depends only on the set already used, so
/// dead sets are memoized.
pub fn find_shelling(k: &SimplicialComplex) -> Result<Shelling> {
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    let facets = k.facets();
    let n = k.facet_size();
    let s = facets.len();
    let mut used = vec![false; s];
    let mut order = Vec::with_capacity(s);
    let mut dead: HashSet<Vec<bool>> = HashSet::new();

    fn dfs(facets: &[Face], n: usize, used: &mut Vec<bool>, order: &mut Vec<usize>, dead: &mut HashSet<Vec<bool>>) -> bool {
        if order.len() == facets.len() {
            return true;
        }
        if dead.contains(used) {
            return false;
        }
        for c in 0..facets.len() {
            if used[c] || !step_is_valid(n, order.iter().map(|&i| facets[i]), facets[c]) {
                continue;
            }
            used[c] = true;
            order.push(c);
            if dfs(facets, n, used, order, dead) {
                return true;
            }
            order.pop();
            used[c] = false;
        }
        dead.insert(used.clone());
        false
    }

    if dfs(facets, n, &mut used, &mut order, &mut dead) {
        let faces: Vec<Face> = order.iter().map(|&i| facets[i]).collect();
        verify_shelling(k, &faces)
    } else {
        Err(Error::NonShellable)
    }
}

/// One step of a regular expanding sequence of `K_ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExpansionStep {
    /// Position of `σ_j` in the shelling (0-based).
    pub index: usize,
    /// `σ_j ∩ ω`.
    pub face: Face,
    /// `r(σ_j)`.
    pub restriction: Face,
    pub critical: bool,
}

impl ExpansionStep {
    /// Bottom of the interval of faces added at this step; the first step
    /// adds `[∅, σ_{j_1} ∩ ω]`.
    pub fn lower(&self, first: bool) -> Face {
        if first { Face::EMPTY } else { self.restriction }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpandingSequence {
    pub omega: Face,
    pub steps: Vec<ExpansionStep>,
}

impl ExpandingSequence {
    /// Faces of `K_ω` added at each step, as `(lower, upper)` intervals.
    pub fn intervals(&self) -> impl Iterator<Item = (Face, Face)> + '_ {
        self.steps.iter().enumerate().map(|(i, s)| (s.lower(i == 0), s.face))
    }
}

/// Steps are the facets with `σ_j ∩ ω ≠ ∅` and `r(σ_j) ⊆ ω`; a later step is
/// critical exactly when `σ_j ∩ ω = r(σ_j)`.
pub fn expanding_sequence(shelling: &Shelling, omega: Face) -> ExpandingSequence {
    let mut steps = Vec::new();
    for (j, (&f, &r)) in shelling.order.iter().zip(&shelling.restrictions).enumerate() {
        let face = f.intersection(omega);
        if face.is_empty() || !r.is_subset(omega) {
            continue;
        }
        let critical = !steps.is_empty() && face == r;
        steps.push(ExpansionStep { index: j, face, restriction: r, critical });
    }
    ExpandingSequence { omega, steps }
}

pub fn critical_faces(seq: &ExpandingSequence) -> Vec<Face> {
    seq.steps.iter().filter(|s| s.critical).map(|s| s.face).collect()
}
