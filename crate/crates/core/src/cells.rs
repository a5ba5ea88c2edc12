//! Cubical cells of the real moment-angle complex `RZ_K ⊆ [0,1]^m`, the
//! `ker λ` action, canonical representatives and the quotient complex of
//! `Y = RZ_K / ker λ`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;
use crate::linalg::{BitMatrix, BitVector, ChainComplex, CharMatrix, Coefficients, GradedGroup, IntMatrix};
use crate::shelling::Shelling;

/// A cell `e = Π e_i` with `e_i = [0,1]` on `sigma`, `{1}` on `plus` and
/// `{0}` on `minus`; the three sets partition `[m]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubicalCell {
    pub sigma: Face,
    pub plus: Face,
    pub minus: Face,
}

impl CubicalCell {
    pub fn new(sigma: Face, plus: Face, minus: Face) -> Self {
        debug_assert!(sigma.is_disjoint(plus) && sigma.is_disjoint(minus) && plus.is_disjoint(minus));
        CubicalCell { sigma, plus, minus }
    }

    /// Cell on `[m]` with the remaining coordinates fixed at 0.
    pub fn with_plus(m: usize, sigma: Face, plus: Face) -> Self {
        CubicalCell::new(sigma, plus, Face::full(m).difference(sigma.union(plus)))
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn m(&self) -> usize {
        self.sigma.union(self.plus).union(self.minus).len()
    }

    /// `∂_i^± e`: the interval coordinate `i` fixed at 1 or 0.
    pub fn face(&self, i: usize, positive: bool) -> CubicalCell {
        debug_assert!(self.sigma.contains(i));
        if positive {
            CubicalCell::new(self.sigma.without(i), self.plus.with(i), self.minus)
        } else {
            CubicalCell::new(self.sigma.without(i), self.plus, self.minus.with(i))
        }
    }

    /// `g · e`: swaps the fixed values 0 and 1 on the support of `g`.
    pub fn flipped(&self, g: Face) -> CubicalCell {
        CubicalCell::new(
            self.sigma,
            self.plus.difference(g).union(self.minus.intersection(g)),
            self.minus.difference(g).union(self.plus.intersection(g)),
        )
    }

    /// Canonical for the shelling: `τ⁻ ⊆ f(σ)`.
    pub fn is_canonical(&self, shelling: &Shelling) -> bool {
        shelling.first_containing_facet(self.sigma).is_ok_and(|f| self.minus.is_subset(f))
    }
}

/// Order by dimension, then `sigma`, `minus`, `plus`.
impl Ord for CubicalCell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then(self.sigma.cmp(&other.sigma))
            .then(self.minus.cmp(&other.minus))
            .then(self.plus.cmp(&other.plus))
    }
}

impl PartialOrd for CubicalCell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coordinate notation, e.g. `01×1×0` for `[0,1] × {1} × {0}`.
impl fmt::Display for CubicalCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = (1..=self.m())
            .map(|i| if self.sigma.contains(i) { "01" } else if self.plus.contains(i) { "1" } else { "0" })
            .collect();
        write!(f, "{}", parts.join("×"))
    }
}

impl fmt::Debug for CubicalCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finite integer combination of cells; zero coefficients are dropped.
pub type SignedCellSum = BTreeMap<CubicalCell, i64>;

fn add_cell(acc: &mut SignedCellSum, cell: CubicalCell, c: i64) {
    if c == 0 {
        return;
    }
    let e = acc.entry(cell).or_insert(0);
    *e += c;
    if *e == 0 {
        acc.remove(&cell);
    }
}

/// `∂[e] = Σ_{i∈σ} (-1)^{(σ,i)} ([∂_i^+ e] - [∂_i^- e])`.
pub fn boundary_cell(e: &CubicalCell) -> SignedCellSum {
    let mut out = SignedCellSum::new();
    for i in e.sigma.vertices() {
        let s = if e.sigma.count_below(i).is_multiple_of(2) { 1 } else { -1 };
        add_cell(&mut out, e.face(i, true), s);
        add_cell(&mut out, e.face(i, false), -s);
    }
    out
}

pub fn boundary_sum(chain: &SignedCellSum) -> SignedCellSum {
    let mut out = SignedCellSum::new();
    for (e, &c) in chain {
        for (f, d) in boundary_cell(e) {
            add_cell(&mut out, f, c * d);
        }
    }
    out
}

/// `g_*[e] = (-1)^{|σ_e ∩ g|} [g · e]`.
pub fn act(g: Face, e: &CubicalCell) -> (i64, CubicalCell) {
    let sign = if e.sigma.intersection(g).len().is_multiple_of(2) { 1 } else { -1 };
    (sign, e.flipped(g))
}

/// Every cell of `RZ_K`: `σ ∈ K` and any 0/1 values elsewhere.
pub fn enumerate_cells(k: &SimplicialComplex) -> Vec<CubicalCell> {
    let full = Face::full(k.m());
    let mut cells: Vec<CubicalCell> = k
        .faces()
        .into_iter()
        .flat_map(|s| {
            let rest = full.difference(s);
            rest.subsets().map(move |minus| CubicalCell::new(s, rest.difference(minus), minus))
        })
        .collect();
    cells.sort();
    cells
}

/// A cellular chain complex with its cells listed per dimension.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub cells: Vec<Vec<CubicalCell>>,
    index: HashMap<CubicalCell, usize>,
    pub complex: ChainComplex,
}

impl CellComplex {
    pub fn index_of(&self, cell: &CubicalCell) -> Option<usize> {
        self.index.get(cell).copied()
    }

    pub fn count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }
}

fn group_by_dim(cells: &[CubicalCell], top: usize) -> (Vec<Vec<CubicalCell>>, HashMap<CubicalCell, usize>) {
    let mut by_dim = vec![Vec::new(); top + 1];
    for &c in cells {
        by_dim[c.dim()].push(c);
    }
    let mut index = HashMap::new();
    for list in &by_dim {
        for (i, &c) in list.iter().enumerate() {
            index.insert(c, i);
        }
    }
    (by_dim, index)
}

fn assemble(by_dim: Vec<Vec<CubicalCell>>, index: HashMap<CubicalCell, usize>, bd: impl Fn(&CubicalCell) -> Result<SignedCellSum>) -> Result<CellComplex> {
    let mut maps = Vec::new();
    for d in 1..by_dim.len() {
        let mut entries = Vec::new();
        for (col, e) in by_dim[d].iter().enumerate() {
            for (f, c) in bd(e)? {
                let row = *index.get(&f).ok_or_else(|| Error::InvalidComplex(format!("boundary cell {f} is not listed")))?;
                entries.push((row, col, c));
            }
        }
        maps.push(IntMatrix::from_triplets(by_dim[d - 1].len(), by_dim[d].len(), entries));
    }
    let dims = by_dim.iter().map(Vec::len).collect();
    let labels = by_dim.iter().map(|l| l.iter().map(|c| c.to_string()).collect()).collect();
    let complex = ChainComplex::chain(0, dims, maps)?.with_labels(labels);
    Ok(CellComplex { cells: by_dim, index, complex })
}

/// Cellular chain complex of `RZ_K`.
pub fn rz_complex(k: &SimplicialComplex) -> Result<CellComplex> {
    let cells = enumerate_cells(k);
    let (by_dim, index) = group_by_dim(&cells, k.facet_size());
    assemble(by_dim, index, |e| Ok(boundary_cell(e)))
}

/// Precomputed kernel elements `g_ℓ` (one per facet `F` and `ℓ ∉ F`) with
/// `g_ℓ \ F = {ℓ}`.
#[derive(Clone, Debug)]
pub struct Canonicalizer {
    m: usize,
    shelling: Shelling,
    per_facet: HashMap<Face, HashMap<usize, Face>>,
}

impl Canonicalizer {
    pub fn new(lambda: &CharMatrix, shelling: &Shelling) -> Result<Self> {
        let m = lambda.m();
        let mut per_facet = HashMap::new();
        for &facet in shelling.order() {
            per_facet.insert(facet, facet_generators(lambda, facet)?);
        }
        Ok(Canonicalizer { m, shelling: shelling.clone(), per_facet })
    }

    /// `g_e` with `g_e · e` canonical, the canonical cell and the sign of `g_e*`.
    pub fn canonicalize(&self, e: &CubicalCell) -> Result<(Face, CubicalCell, i64)> {
        let facet = self.shelling.first_containing_facet(e.sigma)?;
        let gens = &self.per_facet[&facet];
        let mut g = Face::EMPTY;
        for l in e.minus.difference(facet).vertices() {
            let gl = gens.get(&l).ok_or_else(|| Error::NoSolution(format!("no kernel element for coordinate {l} of {e}")))?;
            g = g.symmetric_difference(*gl);
        }
        let (sign, cell) = act(g, e);
        debug_assert!(cell.minus.is_subset(facet));
        Ok((g, cell, sign))
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

fn facet_generators(lambda: &CharMatrix, facet: Face) -> Result<HashMap<usize, Face>> {
    let n = lambda.n();
    let cols: Vec<usize> = facet.vertices().collect();
    let mut a = BitMatrix::zeros(n, cols.len());
    for (c, &j) in cols.iter().enumerate() {
        for i in 1..=n {
            a.set(i - 1, c, lambda.get(i, j));
        }
    }
    if a.rank() != cols.len() || cols.len() != n {
        return Err(Error::NonSingularityViolation(facet));
    }
    let mut out = HashMap::new();
    for l in Face::full(lambda.m()).difference(facet).vertices() {
        let rhs = BitVector::from_bools(&(1..=n).map(|i| lambda.get(i, l)).collect::<Vec<_>>());
        let x = a.solve(&rhs).ok_or_else(|| Error::NoSolution(format!("column {l} is outside the span of facet {facet}")))?;
        let g: Face = x.ones().map(|c| cols[c]).collect::<Face>().with(l);
        debug_assert!(lambda.apply(g).is_empty());
        out.insert(l, g);
    }
    Ok(out)
}

/// One-shot version of [`Canonicalizer::canonicalize`].
pub fn canonicalize(e: &CubicalCell, lambda: &CharMatrix, shelling: &Shelling) -> Result<(Face, CubicalCell, i64)> {
    Canonicalizer::new(lambda, shelling)?.canonicalize(e)
}

/// The cell complex of `Y` on canonical cells, with `∂π_*[e] = π_*∂[e]`.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub cells: CellComplex,
    pub canonicalizer: Canonicalizer,
    pub kernel: Vec<Face>,
    pub n: usize,
}

impl QuotientComplex {
    pub fn complex(&self) -> &ChainComplex {
        &self.cells.complex
    }

    pub fn cells_of_dim(&self, d: usize) -> &[CubicalCell] {
        self.cells.cells.get(d).map_or(&[], Vec::as_slice)
    }

    /// `π_*[e] = s · π_*[canonical]`, as (sign, index among canonical cells of that dimension).
    pub fn project(&self, e: &CubicalCell) -> Result<(i64, usize)> {
        let (_, c, s) = self.canonicalizer.canonicalize(e)?;
        Ok((s, self.cells.index_of(&c).expect("canonical cells are listed")))
    }

    /// Integral cochain complex `C^*(Y)` (dual of the cellular chains).
    pub fn cochain_complex(&self) -> ChainComplex {
        self.cells.complex.dual()
    }

    /// `T^* w` for a cochain `w` on `RZ_K` of degree `d`, evaluated on each
    /// canonical cell: `⟨T^* w, π_*[e]⟩ = Σ_{g ∈ ker λ} ±⟨w, [g · e]⟩`.
    pub fn transfer(&self, d: usize, w: impl Fn(&CubicalCell) -> i64) -> Vec<i64> {
        self.cells_of_dim(d)
            .iter()
            .map(|e| {
                self.kernel
                    .iter()
                    .map(|&g| {
                        let (s, ge) = act(g, e);
                        s * w(&ge)
                    })
                    .sum()
            })
            .collect()
    }

    /// Coboundary of a degree-`d` cochain on `Y`.
    pub fn coboundary(&self, d: usize, values: &[i64]) -> Vec<i64> {
        self.cells.complex.differential(d as i32 + 1).transpose().mul_vec(values)
    }
}

pub fn quotient_complex(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<QuotientComplex> {
    crate::toric::validate(k, lambda)?;
    let canonicalizer = Canonicalizer::new(lambda, shelling)?;
    let mut cells = Vec::new();
    for s in k.faces() {
        let f = shelling.first_containing_facet(s)?;
        let free = f.difference(s);
        let rest = Face::full(k.m()).difference(s);
        for minus in free.subsets() {
            cells.push(CubicalCell::new(s, rest.difference(minus), minus));
        }
    }
    cells.sort();
    let (by_dim, index) = group_by_dim(&cells, k.facet_size());
    let cc = assemble(by_dim, index, |e| {
        let mut out = SignedCellSum::new();
        for (f, c) in boundary_cell(e) {
            let (_, canon, s) = canonicalizer.canonicalize(&f)?;
            add_cell(&mut out, canon, c * s);
        }
        Ok(out)
    })?;
    Ok(QuotientComplex { cells: cc, canonicalizer, kernel: lambda.kernel(), n: lambda.n() })
}

/// `H^*(Y; R)` from the quotient cell complex.
pub fn oracle_cohomology(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling, coeff: Coefficients) -> Result<GradedGroup> {
    quotient_complex(k, lambda, shelling)?.complex().cohomology(coeff)
}

/// The cochain `u_σ t_τ`: dual of `[0,1]` on `σ`, of `{1}` on `τ`, and of
/// `{0} + {1}` elsewhere. `u_∅ t_∅` is the empty word `⊘`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CochainWord {
    pub sigma: Face,
    pub tau: Face,
}

impl CochainWord {
    pub fn new(sigma: Face, tau: Face) -> Self {
        debug_assert!(sigma.is_disjoint(tau));
        CochainWord { sigma, tau }
    }

    pub fn degree(&self) -> usize {
        self.sigma.len()
    }

    pub fn eval(&self, e: &CubicalCell) -> i64 {
        i64::from(e.sigma == self.sigma && self.tau.is_subset(e.plus))
    }

    /// The dual cells this word sums, `2^{m - |σ| - |τ|}` of them.
    pub fn expansion(&self, m: usize) -> Vec<CubicalCell> {
        let rest = Face::full(m).difference(self.sigma).difference(self.tau);
        rest.subsets().map(|minus| CubicalCell::new(self.sigma, Face::full(m).difference(self.sigma).difference(minus), minus)).collect()
    }
}

impl fmt::Display for CochainWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sigma.is_empty() && self.tau.is_empty() {
            return write!(f, "⊘");
        }
        write!(f, "u{}t{}", self.sigma.short_label(), self.tau.short_label())
    }
}

/// `d(u_σ t_τ) = Σ_{i ∈ τ, σ ∪ i ∈ K} (-1)^{(σ,i)} u_{σ∪i} t_{τ\i}`.
pub fn cochain_coboundary(w: &CochainWord, k: &SimplicialComplex) -> Vec<(CochainWord, i64)> {
    w.tau
        .vertices()
        .filter(|&i| k.contains(w.sigma.with(i)))
        .map(|i| {
            let s = if w.sigma.count_below(i).is_multiple_of(2) { 1 } else { -1 };
            (CochainWord::new(w.sigma.with(i), w.tau.without(i)), s)
        })
        .collect()
}

/// `μ_k(ω) = max(m - n + k - |ω|, 0)`.
pub fn mu(m: usize, n: usize, k: usize, omega: Face) -> u32 {
    (m + k).saturating_sub(n + omega.len()) as u32
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub sigma: Face,
    pub omega: Face,
    pub mu: u32,
    /// `T^*(u_σ t_{ω\σ})` on the canonical cells of dimension `|σ|`.
    pub transfer: Vec<i64>,
    /// `T^*(u_σ t_{ω\σ}) / 2^μ`.
    pub quotient: Vec<i64>,
    /// When `ω ∩ f(σ) = σ`: whether the quotient equals the primitive
    /// cochain `T^*(u_σ t_{[m]\f(σ)})`.
    pub primitive_identity: Option<bool>,
}

fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)) == 1
}

pub fn transfer_divisibility_in(q: &QuotientComplex, k: &SimplicialComplex, shelling: &Shelling, sigma: Face, omega: Face) -> Result<TransferReport> {
    if !sigma.is_subset(omega) || !k.contains(sigma) {
        return Err(Error::FaceNotInComplex(sigma));
    }
    let m = k.m();
    let deg = sigma.len();
    let mu_k = mu(m, q.n, deg, omega);
    let word = CochainWord::new(sigma, omega.difference(sigma));
    let transfer = q.transfer(deg, |e| word.eval(e));
    let div = 1i64 << mu_k;
    if let Some(x) = transfer.iter().find(|&&x| x % div != 0) {
        return Err(Error::DivisibilityFailure { expected: mu_k, detail: format!("{word} for ω = {omega} has entry {x}") });
    }
    let quotient: Vec<i64> = transfer.iter().map(|x| x / div).collect();
    let f = shelling.first_containing_facet(sigma)?;
    let primitive_identity = (omega.intersection(f) == sigma).then(|| {
        let spe = CochainWord::new(sigma, Face::full(m).difference(f));
        let direct = q.transfer(deg, |e| spe.eval(e));
        direct == quotient && is_primitive(&direct)
    });
    Ok(TransferReport { sigma, omega, mu: mu_k, transfer, quotient, primitive_identity })
}

pub fn transfer_divisibility(sigma: Face, omega: Face, k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<TransferReport> {
    let q = quotient_complex(k, lambda, shelling)?;
    transfer_divisibility_in(&q, k, shelling, sigma, omega)
}
