//! Assembly of `H^*(Y)` from the full subcomplexes `K_ω`, coefficient
//! statements, Bockstein pages and small-cover tables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::cells::{self, QuotientComplex};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;
use crate::facering;
use crate::linalg::{AbelianGroup, BitMatrix, BitVector, CharMatrix, Coefficients, GradedGroup};
use crate::morse::{self, DoubledComplex, MorseComplex};
use crate::shelling::{find_shelling, verify_shelling, Shelling};

/// Shape and non-singularity checks shared by every pipeline.
pub fn validate(k: &SimplicialComplex, lambda: &CharMatrix) -> Result<()> {
    if lambda.m() != k.m() {
        return Err(Error::DimensionMismatch(format!("Λ has {} columns but K lives on {} vertices", lambda.m(), k.m())));
    }
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    if lambda.n() != k.facet_size() {
        return Err(Error::DimensionMismatch(format!("Λ has {} rows but facets have {} vertices", lambda.n(), k.facet_size())));
    }
    lambda.check_nonsingular(k.facets())
}

/// `H̃^*(K_ω)` for every `ω ∈ row λ`, in row-space order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcomplexTable {
    pub coefficients: Coefficients,
    entries: Vec<(Face, GradedGroup)>,
}

impl SubcomplexTable {
    pub fn get(&self, omega: Face) -> Option<&GradedGroup> {
        self.entries.iter().find(|(w, _)| *w == omega).map(|(_, g)| g)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Face, &GradedGroup)> {
        self.entries.iter().map(|(w, g)| (*w, g))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ_ω rank H̃^i(K_ω)`; with `i = 0, 1, 2` these are `b, c, d`.
    pub fn betti_sum(&self, degree: i32) -> usize {
        self.entries.iter().map(|(_, g)| g.get(degree).rank).sum()
    }

    /// `⊕_ω H̃^{*-1}(K_ω)`.
    pub fn total_shifted(&self) -> GradedGroup {
        self.entries.iter().fold(GradedGroup::new(), |acc, (_, g)| acc.direct_sum(&g.shifted(1)))
    }
}

impl fmt::Display for SubcomplexTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, g) in &self.entries {
            writeln!(f, "{w}: {g}")?;
        }
        Ok(())
    }
}

pub fn subcomplex_cohomology_table(k: &SimplicialComplex, lambda: &CharMatrix) -> SubcomplexTable {
    subcomplex_table_with(k, lambda, Coefficients::Z)
}

pub fn subcomplex_table_with(k: &SimplicialComplex, lambda: &CharMatrix, coeff: Coefficients) -> SubcomplexTable {
    let entries = lambda.row_space().into_iter().map(|w| (w, k.full_subcomplex(w).reduced_cohomology(coeff))).collect();
    SubcomplexTable { coefficients: coeff, entries }
}

/// `H^*(Y; Z)` from the integral subcomplex table and the h-vector.
///
/// Free ranks and odd torsion move up one degree, `Z_{2^k}` becomes
/// `Z_{2^{k+1}}`, and the remaining `Z_2` summands are counted from
/// `h_i = rank_i + t_i + t_{i+1}` (`t_j` = number of 2-primary summands in
/// degree `j`), solved from the top with `t_{n+1} = 0`.
pub fn assemble_integral(table: &SubcomplexTable, h: &[i64]) -> Result<GradedGroup> {
    if table.coefficients != Coefficients::Z {
        return Err(Error::DimensionMismatch(format!("integral table required, got {}", table.coefficients)));
    }
    let n = h.len().checked_sub(1).ok_or_else(|| Error::InconsistentHVector("empty h-vector".into()))?;
    let mut lifted: Vec<AbelianGroup> = vec![AbelianGroup::zero(); n + 1];
    for (_, g) in table.iter() {
        for (d, a) in g.iter() {
            let i = d + 1;
            if i < 0 || i as usize > n {
                return Err(Error::InconsistentHVector(format!("subcomplex cohomology in degree {d} is out of range")));
            }
            let orders = a.torsion.iter().map(|&t| if t % 2 == 0 { 2 * t } else { t });
            lifted[i as usize] = lifted[i as usize].direct_sum(&AbelianGroup::new(a.rank, orders));
        }
    }
    let mut out = GradedGroup::new();
    let mut t_above: i64 = 0;
    for i in (0..=n).rev() {
        let a = &lifted[i];
        let t = h[i] - a.rank as i64 - t_above;
        let big = a.count_p_primary(2) as i64;
        let extra = t - big;
        if extra < 0 {
            return Err(Error::InconsistentHVector(format!("degree {i}: h = {} leaves {extra} summands of order 2", h[i])));
        }
        if i == 0 && t != 0 {
            return Err(Error::InconsistentHVector(format!("degree 0 would carry {t} torsion summands")));
        }
        out.add(i as i32, &a.direct_sum(&AbelianGroup::cyclic(2, extra as usize)));
        t_above = t;
    }
    Ok(out)
}

/// Which pipeline computes `H^*(Y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Subcomplex table with h-vector assembly.
    Formula,
    /// Doubled critical complex.
    Morse,
    /// Quotient cell complex.
    Cells,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Formula, Method::Morse, Method::Cells];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Formula => "formula",
            Method::Morse => "morse",
            Method::Cells => "cells",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formula" => Ok(Method::Formula),
            "morse" => Ok(Method::Morse),
            "cells" => Ok(Method::Cells),
            _ => Err(Error::InvalidOrder(format!("unknown method {s:?}"))),
        }
    }
}

/// `H^*(Y; R)`. Over `Q` and `Z_q` with `q` odd the answer is
/// `⊕_ω H̃^{*-1}(K_ω; R)`, checked against the oracle; for other `R` the
/// oracle value is returned (over `Z` it is checked against the assembly).
pub fn coefficient_cohomology(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling, coeff: Coefficients) -> Result<GradedGroup> {
    let oracle = cells::oracle_cohomology(k, lambda, shelling, coeff)?;
    let formula = match coeff {
        Coefficients::Q => Some(subcomplex_table_with(k, lambda, coeff).total_shifted()),
        Coefficients::Mod(q) if q % 2 == 1 => Some(subcomplex_table_with(k, lambda, coeff).total_shifted()),
        Coefficients::Z => Some(assemble_integral(&subcomplex_cohomology_table(k, lambda), &k.h_vector()?)?),
        Coefficients::Mod(_) => None,
    };
    match formula {
        Some(f) if f != oracle => Err(Error::Mismatch(format!("over {coeff}: formula {f}, oracle {oracle}"))),
        Some(f) => Ok(f),
        None => Ok(oracle),
    }
}

/// One degree of [`ClaimReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimDegree {
    pub degree: i32,
    /// `H^i(Y; Z_{2^{k+1}})` from the oracle.
    pub lhs: AbelianGroup,
    /// `⊕_ω H̃^{i-1}(K_ω; Z_{2^k})`.
    pub rhs_literal: AbelianGroup,
    /// `⊕_ω H^{i-1}(C̄*(K_ω) ⊗ Z_{2^{k+1}}, 2d̄')`.
    pub rhs_doubled: AbelianGroup,
}

impl ClaimDegree {
    pub fn literal_match(&self) -> bool {
        self.lhs == self.rhs_literal
    }

    pub fn doubled_match(&self) -> bool {
        self.lhs == self.rhs_doubled
    }
}

fn order_string(a: &AbelianGroup) -> String {
    a.order().map_or_else(|| "infinite".to_string(), |o: BigInt| o.to_string())
}

/// Two readings of the `Z_{2^{k+1}}` coefficient statement compared degree
/// by degree. Nothing is asserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimReport {
    pub k: u32,
    pub degrees: Vec<ClaimDegree>,
}

impl ClaimReport {
    pub fn literal_holds(&self) -> bool {
        self.degrees.iter().all(ClaimDegree::literal_match)
    }

    pub fn doubled_holds(&self) -> bool {
        self.degrees.iter().all(ClaimDegree::doubled_match)
    }
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = 1u64 << self.k;
        writeln!(f, "k = {}: H^i(Y; Z_{}) against sums of H~^(i-1)(K_w; Z_{})", self.k, 2 * lo, lo)?;
        for d in &self.degrees {
            let verdict = |b: bool| if b { "match" } else { "mismatch" };
            writeln!(
                f,
                "degree {}: lhs {} (order {}); literal rhs {} (order {}) {}; doubled rhs {} (order {}) {}",
                d.degree,
                d.lhs,
                order_string(&d.lhs),
                d.rhs_literal,
                order_string(&d.rhs_literal),
                verdict(d.literal_match()),
                d.rhs_doubled,
                order_string(&d.rhs_doubled),
                verdict(d.doubled_match()),
            )?;
        }
        writeln!(f, "literal reading holds: {}", self.literal_holds())?;
        write!(f, "doubled reading holds: {}", self.doubled_holds())
    }
}

pub fn claim_check_thm11(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling, kk: u32) -> Result<ClaimReport> {
    if kk == 0 || kk > 30 {
        return Err(Error::DimensionMismatch(format!("k must lie in 1..=30, got {kk}")));
    }
    let n = k.facet_size() as i32;
    let big = Coefficients::two_power(kk + 1);
    let small = Coefficients::two_power(kk);
    let lhs = cells::oracle_cohomology(k, lambda, shelling, big)?;
    let literal = subcomplex_table_with(k, lambda, small).total_shifted();
    let dc = morse::doubled_complex(k, lambda, shelling)?;
    let mut doubled = GradedGroup::new();
    for mc in &dc.morse {
        let local = mc.complex.dual().scaled(2).cohomology(big)?;
        doubled = doubled.direct_sum(&local.shifted(1));
    }
    let degrees = (0..=n)
        .map(|i| ClaimDegree { degree: i, lhs: lhs.get(i), rhs_literal: literal.get(i), rhs_doubled: doubled.get(i) })
        .collect();
    Ok(ClaimReport { k: kk, degrees })
}

/// Dimensions of the mod-2 Bockstein pages `E_k^i`, `k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BocksteinPages {
    pub min_degree: i32,
    /// `dims[k - 1][i - min_degree] = dim E_k^i`.
    pub dims: Vec<Vec<usize>>,
    /// `E_∞`: free ranks.
    pub infinity: Vec<usize>,
}

impl BocksteinPages {
    pub fn pages(&self) -> usize {
        self.dims.len()
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.infinity.len() as i32 - 1
    }

    pub fn page(&self, k: usize) -> &[usize] {
        &self.dims[k - 1]
    }

    /// `dim E_k^i`, zero outside the stored range; pages past the last one
    /// repeat `E_∞`.
    pub fn dim(&self, k: usize, degree: i32) -> usize {
        if degree < self.min_degree || degree > self.max_degree() {
            return 0;
        }
        let i = (degree - self.min_degree) as usize;
        self.dims.get(k - 1).map_or(self.infinity[i], |p| p[i])
    }

    pub fn is_monotone(&self) -> bool {
        self.dims.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| a >= b))
    }
}

impl fmt::Display for BocksteinPages {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_row = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        writeln!(f, "degrees {}..={}", self.min_degree, self.max_degree())?;
        for (k, p) in self.dims.iter().enumerate() {
            writeln!(f, "E_{}: {}", k + 1, fmt_row(p))?;
        }
        write!(f, "E_inf: {}", fmt_row(&self.infinity))
    }
}

/// `1 +` the largest 2-adic valuation of a torsion order, capped at 8.
pub fn k_max(h: &GradedGroup) -> usize {
    let v = h.iter().flat_map(|(_, a)| a.torsion.iter()).map(|&t| t.trailing_zeros() as usize).max().unwrap_or(0);
    (1 + v).min(8)
}

/// `dim E_k^i = rank H^i + #{2-primary summands of order ≥ 2^k in H^i and H^{i+1}}`
/// for `k = 1..=pages` and `i = lo..=hi`.
pub fn bockstein_pages(h: &GradedGroup, lo: i32, hi: i32, pages: usize) -> BocksteinPages {
    let dims = (1..=pages)
        .map(|k| {
            (lo..=hi)
                .map(|i| h.get(i).rank + h.get(i).count_two_primary_at_least(k as u32) + h.get(i + 1).count_two_primary_at_least(k as u32))
                .collect()
        })
        .collect();
    let infinity = (lo..=hi).map(|i| h.get(i).rank).collect();
    BocksteinPages { min_degree: lo, dims, infinity }
}

/// One comparison `dim E_{k+1}^i(Y) = Σ_ω dim E_k^{i-1}(K_ω)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageComparison {
    pub page: usize,
    pub degree: i32,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BocksteinReport {
    pub y_pages: BocksteinPages,
    pub comparisons: Vec<PageComparison>,
    /// `dim E_2^i(Y)` against `Σ_ω dim H̃^{i-1}(K_ω; Z_2)` (GF(2) ranks).
    pub second_page: Vec<PageComparison>,
}

impl BocksteinReport {
    pub fn holds(&self) -> bool {
        self.comparisons.iter().chain(&self.second_page).all(|c| c.lhs == c.rhs)
    }
}

impl fmt::Display for BocksteinReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.y_pages)?;
        for c in &self.comparisons {
            let mark = if c.lhs == c.rhs { "ok" } else { "FAIL" };
            writeln!(f, "E_{}^{}(Y) = {}, subcomplex sum of E_{}^{} = {} {mark}", c.page + 1, c.degree, c.lhs, c.page, c.degree - 1, c.rhs)?;
        }
        write!(f, "holds: {}", self.holds())
    }
}

pub fn bockstein_check_thm15(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<BocksteinReport> {
    let n = k.facet_size() as i32;
    let hy = cells::oracle_cohomology(k, lambda, shelling, Coefficients::Z)?;
    let table = subcomplex_cohomology_table(k, lambda);
    let kmax = table.iter().map(|(_, g)| k_max(g)).max().unwrap_or(1).max(k_max(&hy));
    let y_pages = bockstein_pages(&hy, 0, n, kmax + 1);
    let local: Vec<BocksteinPages> = table.iter().map(|(_, g)| bockstein_pages(g, -1, n - 1, kmax)).collect();
    let mut comparisons = Vec::new();
    for page in 1..=kmax {
        for i in 0..=n {
            let rhs = local.iter().map(|p| p.dim(page, i - 1)).sum();
            comparisons.push(PageComparison { page, degree: i, lhs: y_pages.dim(page + 1, i), rhs });
        }
    }
    let mod2 = subcomplex_table_with(k, lambda, Coefficients::Mod(2)).total_shifted();
    let second_page = (0..=n)
        .map(|i| PageComparison { page: 1, degree: i, lhs: y_pages.dim(2, i), rhs: mod2.get(i).dimension_mod(2) })
        .collect();
    Ok(BocksteinReport { y_pages, comparisons, second_page })
}

/// A row of the small-cover tables together with the oracle value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallCoverRow {
    pub n: usize,
    pub m: usize,
    pub orientable: bool,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub predicted: GradedGroup,
    pub oracle: GradedGroup,
}

impl fmt::Display for SmallCoverRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.orientable { "orientable" } else { "non-orientable" };
        write!(f, "n = {}, m = {}, {kind}, b = {}", self.n, self.m, self.b)?;
        if self.n == 4 {
            write!(f, ", c = {}, d = {}", self.c, self.d)?;
        }
        writeln!(f)?;
        for i in 0..=self.n as i32 {
            writeln!(f, "H^{i}: {}", self.predicted.get(i))?;
        }
        write!(f, "oracle agrees: {}", self.predicted == self.oracle)
    }
}

fn z2_count(m: usize, minus: usize) -> Result<usize> {
    m.checked_sub(minus).ok_or_else(|| Error::Mismatch(format!("table exponent m - {minus} is negative for m = {m}")))
}

pub fn small_cover_table(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<SmallCoverRow> {
    let n = k.facet_size();
    if n != 3 && n != 4 {
        return Err(Error::DimensionUnsupported(n));
    }
    k.check_homology_sphere()?;
    let oracle = cells::oracle_cohomology(k, lambda, shelling, Coefficients::Z)?;
    let top = oracle.get(n as i32);
    let orientable = if top == AbelianGroup::free(1) {
        true
    } else if top == AbelianGroup::cyclic(2, 1) {
        false
    } else {
        return Err(Error::Mismatch(format!("top cohomology {top} is neither Z nor Z_2")));
    };
    let table = subcomplex_cohomology_table(k, lambda);
    let (b, c, d) = (table.betti_sum(0), table.betti_sum(1), table.betti_sum(2));
    let m = k.m();
    let z = AbelianGroup::free;
    let z2 = |e: usize| AbelianGroup::cyclic(2, e);
    let top_group = if orientable { z(1) } else { z2(1) };
    let rows: Vec<AbelianGroup> = match (n, orientable) {
        (3, true) => vec![z(1), z(b), z(b).direct_sum(&z2(z2_count(m, 3 + b)?)), top_group],
        (3, false) => {
            let r = b.checked_sub(1).ok_or_else(|| Error::Mismatch("non-orientable row needs b ≥ 1".into()))?;
            vec![z(1), z(b), z(r).direct_sum(&z2(z2_count(m, 3 + b)?)), top_group]
        }
        (4, true) => vec![z(1), z(b), z(c).direct_sum(&z2(z2_count(m, 4 + b)?)), z(b).direct_sum(&z2(z2_count(m, 4 + b)?)), top_group],
        (_, _) => vec![z(1), z(b), z(c).direct_sum(&z2(z2_count(m, 4 + b)?)), z(d).direct_sum(&z2(z2_count(m, 5 + d)?)), top_group],
    };
    let predicted = GradedGroup::from_list(&rows);
    let row = SmallCoverRow { n, m, orientable, b, c, d, predicted, oracle };
    if row.predicted != row.oracle {
        return Err(Error::Mismatch(format!("table row {} against oracle {}", row.predicted, row.oracle)));
    }
    Ok(row)
}

/// `φ(c^*)` for a critical face `c` of `K_ω`, as values on the canonical
/// cells of dimension `|c|` of the quotient complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiCochain {
    pub omega: Face,
    pub critical: Face,
    pub degree: usize,
    pub mu: u32,
    pub values: Vec<i64>,
}

impl PhiCochain {
    pub fn is_primitive(&self) -> bool {
        self.values.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)) == 1
    }
}

/// `φ(c^*) = 2^{-μ} Σ_σ ρ^*(c^*)(σ) T^*(u_σ t_{ω\σ})` with `μ = μ_{|c|}(ω)`.
pub fn phi_cochain_in(q: &QuotientComplex, mc: &MorseComplex, critical: Face) -> Result<PhiCochain> {
    if !mc.matching.is_critical(critical) {
        return Err(Error::FaceNotInComplex(critical));
    }
    let omega = mc.omega;
    let degree = critical.len();
    let m = q.canonicalizer.m();
    let mu = cells::mu(m, q.n, degree, omega);
    let rho = mc.rho_dual(critical);
    let words: Vec<(cells::CochainWord, i64)> =
        rho.iter().filter(|(_, &c)| c != 0).map(|(&s, &c)| (cells::CochainWord::new(s, omega.difference(s)), c)).collect();
    let total = q.transfer(degree, |e| words.iter().map(|(w, c)| c * w.eval(e)).sum());
    let div = 1i64 << mu;
    if let Some(x) = total.iter().find(|&&x| x % div != 0) {
        return Err(Error::DivisibilityFailure { expected: mu, detail: format!("φ of {critical} in K_{omega} has entry {x}") });
    }
    Ok(PhiCochain { omega, critical, degree, mu, values: total.iter().map(|x| x / div).collect() })
}

pub fn phi_cochain(omega: Face, critical: Face, k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<PhiCochain> {
    if !lambda.row_space().contains(&omega) {
        return Err(Error::DimensionMismatch(format!("{omega} is not in the row space of Λ")));
    }
    let q = cells::quotient_complex(k, lambda, shelling)?;
    let mc = morse::morse_complex_for(k, shelling, omega)?;
    phi_cochain_in(&q, &mc, critical)
}

/// `δ φ(c^*) = φ(2 d̄' c^*)` for every critical face of every `K_ω`.
pub fn phi_chain_map_check(q: &QuotientComplex, dc: &DoubledComplex) -> Result<bool> {
    let n = q.n;
    for mc in &dc.morse {
        for &c in mc.critical() {
            let d = c.len();
            if d >= n {
                continue;
            }
            let phi = phi_cochain_in(q, mc, c)?;
            let lhs = q.coboundary(d, &phi.values);
            let mut rhs = vec![0i64; lhs.len()];
            for &tau in mc.basis.get(d + 1).into_iter().flatten() {
                let coeff = mc.morse_boundary(tau).get(&c).copied().unwrap_or(0);
                if coeff == 0 {
                    continue;
                }
                let image = phi_cochain_in(q, mc, tau)?;
                for (r, v) in rhs.iter_mut().zip(&image.values) {
                    *r += 2 * coeff * v;
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The critical face `(ω_j, r(σ_j))` paired with shelling position `j`:
/// `ω_j` is the unique row-space element with `ω_j ∩ σ_j = r(σ_j)`.
pub fn restriction_pairs(lambda: &CharMatrix, shelling: &Shelling) -> Result<Vec<(Face, Face)>> {
    let row = lambda.row_space();
    shelling
        .order()
        .iter()
        .zip(shelling.restrictions())
        .map(|(&s, &r)| {
            let mut hits = row.iter().filter(|w| w.intersection(s) == r);
            match (hits.next(), hits.next()) {
                (Some(&w), None) => Ok((w, r)),
                _ => Err(Error::NonSingularityViolation(s)),
            }
        })
        .collect()
}

/// How the face-ring `Sq^1` matrix `S` relates to `D = d̄'` mod 2 under
/// `x_{r(σ_j)} ↔ (ω_j, r(σ_j))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identification {
    /// `S = D`.
    Exact,
    /// `S P_d = P_{d+1} D` for some `P` that is unitriangular in shelling
    /// order: `[φ(r(σ_j))] = [x_{r(σ_j)}] + Σ_{t > j} a_t [x_{r(σ_t)}]`.
    Unitriangular,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2Report {
    /// Every `(ω_j, r(σ_j))` is a critical face of `K_{ω_j}`.
    pub pairs_critical: bool,
    /// `φ(r(σ_j))` is a mod-2 cocycle and, per degree, these classes are
    /// independent in `H^*(Y; Z_2)`.
    pub classes_independent: bool,
    pub identification: Identification,
}

impl Mod2Report {
    pub fn passes(&self) -> bool {
        self.pairs_critical && self.classes_independent && self.identification != Identification::None
    }
}

pub fn phi_mod2_check(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<Mod2Report> {
    let q = cells::quotient_complex(k, lambda, shelling)?;
    let dc = morse::doubled_complex(k, lambda, shelling)?;
    phi_mod2_check_in(k, lambda, shelling, &q, &dc)
}

fn classes_independent(n: usize, pairs: &[(Face, Face)], q: &QuotientComplex, morse_of: &BTreeMap<Face, &MorseComplex>) -> Result<bool> {
    for d in 0..=n {
        let cells_d = q.cells_of_dim(d).len();
        let mut columns: Vec<BitVector> = Vec::new();
        if d > 0 {
            let delta = q.complex().differential(d as i32).transpose().mod2();
            columns.extend((0..delta.ncols()).map(|c| delta.column(c)));
        }
        let boundary_rank = BitMatrix::from_columns(cells_d, &columns).rank();
        let mut count = 0;
        for &(w, r) in pairs.iter().filter(|(_, r)| r.len() == d) {
            let phi = phi_cochain_in(q, morse_of[&w], r)?;
            if d < n && q.coboundary(d, &phi.values).iter().any(|x| x % 2 != 0) {
                return Ok(false);
            }
            columns.push(BitVector::from_bools(&phi.values.iter().map(|x| x % 2 != 0).collect::<Vec<_>>()));
            count += 1;
        }
        if BitMatrix::from_columns(cells_d, &columns).rank() != boundary_rank + count {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves `S_d N_d + N_{d+1} D_d = S_d + D_d` over GF(2) for strictly lower
/// triangular `N` (basis of each degree in shelling order).
fn unitriangular_conjugacy(s: &[BitMatrix], dm: &[BitMatrix], sizes: &[usize]) -> bool {
    let mut unknowns: Vec<BTreeMap<(usize, usize), usize>> = Vec::new();
    let mut count = 0;
    for &size in sizes {
        let mut map = BTreeMap::new();
        for t in 0..size {
            for j in 0..t {
                map.insert((t, j), count);
                count += 1;
            }
        }
        unknowns.push(map);
    }
    let mut rows: Vec<(BitVector, bool)> = Vec::new();
    for d in 0..s.len() {
        let (lo, hi) = (sizes[d], sizes.get(d + 1).copied().unwrap_or(0));
        for r in 0..hi {
            for c in 0..lo {
                let mut eq = BitVector::zeros(count);
                for t in 0..lo {
                    if s[d].get(r, t) {
                        if let Some(&x) = unknowns[d].get(&(t, c)) {
                            eq.flip(x);
                        }
                    }
                }
                for u in 0..hi {
                    if dm[d].get(u, c) {
                        if let Some(&x) = unknowns[d + 1].get(&(r, u)) {
                            eq.flip(x);
                        }
                    }
                }
                rows.push((eq, s[d].get(r, c) != dm[d].get(r, c)));
            }
        }
    }
    if rows.is_empty() {
        return true;
    }
    let b = BitVector::from_bools(&rows.iter().map(|(_, v)| *v).collect::<Vec<_>>());
    if count == 0 {
        return b.is_zero();
    }
    let a = BitMatrix::from_columns(count, &rows.iter().map(|(e, _)| e.clone()).collect::<Vec<_>>()).transpose();
    a.solve(&b).is_some()
}

pub fn phi_mod2_check_in(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling, q: &QuotientComplex, dc: &DoubledComplex) -> Result<Mod2Report> {
    let n = k.facet_size();
    let pairs = restriction_pairs(lambda, shelling)?;
    let morse_of: BTreeMap<Face, &MorseComplex> = dc.morse.iter().map(|mc| (mc.omega, mc)).collect();
    let pairs_critical = pairs.iter().all(|&(w, r)| dc.index_of(w, r).is_some());
    if !pairs_critical {
        return Ok(Mod2Report { pairs_critical, classes_independent: false, identification: Identification::None });
    }
    let classes_independent = classes_independent(n, &pairs, q, &morse_of)?;
    let sq = facering::sq1_matrix(k, lambda, shelling)?;
    let dm: Vec<BitMatrix> = (0..=n)
        .map(|d| {
            let next: &[usize] = sq.basis.get(d + 1).map_or(&[], Vec::as_slice);
            let mut mat = BitMatrix::zeros(next.len(), sq.basis[d].len());
            for (col, &j) in sq.basis[d].iter().enumerate() {
                let (w, r) = pairs[j];
                for (row, &jj) in next.iter().enumerate() {
                    let (w2, r2) = pairs[jj];
                    mat.set(row, col, w == w2 && morse_of[&w].morse_boundary(r2).get(&r).is_some_and(|c| c % 2 != 0));
                }
            }
            mat
        })
        .collect();
    let identification = if dm == sq.matrices {
        Identification::Exact
    } else if unitriangular_conjugacy(&sq.matrices, &dm, &sq.basis.iter().map(Vec::len).collect::<Vec<_>>()) {
        Identification::Unitriangular
    } else {
        Identification::None
    };
    Ok(Mod2Report { pairs_critical, classes_independent, identification })
}

/// `H^*(Y; Z)` from all three pipelines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeWay {
    pub formula: GradedGroup,
    pub morse: GradedGroup,
    pub cells: GradedGroup,
}

impl ThreeWay {
    pub fn agree(&self) -> bool {
        self.formula == self.morse && self.morse == self.cells
    }
}

pub fn three_way(k: &SimplicialComplex, lambda: &CharMatrix, shelling: &Shelling) -> Result<ThreeWay> {
    let formula = assemble_integral(&subcomplex_cohomology_table(k, lambda), &k.h_vector()?)?;
    let morse = morse::doubled_cohomology(k, lambda, shelling)?;
    let cells = cells::oracle_cohomology(k, lambda, shelling, Coefficients::Z)?;
    Ok(ThreeWay { formula, morse, cells })
}

/// A validated triple `(K, Λ, shelling)`.
#[derive(Clone, Debug)]
pub struct ToricSpace {
    pub k: SimplicialComplex,
    pub lambda: CharMatrix,
    pub shelling: Shelling,
}

impl ToricSpace {
    /// Validates `(K, Λ)`; searches for a shelling when none is given.
    pub fn new(k: SimplicialComplex, lambda: CharMatrix, order: Option<&[Face]>) -> Result<Self> {
        validate(&k, &lambda)?;
        let shelling = match order {
            Some(o) => verify_shelling(&k, o)?,
            None => find_shelling(&k)?,
        };
        Ok(ToricSpace { k, lambda, shelling })
    }

    pub fn n(&self) -> usize {
        self.k.facet_size()
    }

    pub fn cohomology(&self, method: Method, coeff: Coefficients) -> Result<GradedGroup> {
        let (k, l, s) = (&self.k, &self.lambda, &self.shelling);
        match method {
            Method::Cells => cells::oracle_cohomology(k, l, s, coeff),
            Method::Morse => morse::doubled_complex(k, l, s)?.cohomology(coeff),
            Method::Formula => match coeff {
                Coefficients::Q => Ok(subcomplex_table_with(k, l, coeff).total_shifted()),
                Coefficients::Mod(q) if q % 2 == 1 => Ok(subcomplex_table_with(k, l, coeff).total_shifted()),
                _ => {
                    let z = assemble_integral(&subcomplex_cohomology_table(k, l), &k.h_vector()?)?;
                    Ok(if coeff == Coefficients::Z { z } else { z.uct_cohomology(coeff) })
                }
            },
        }
    }

    pub fn three_way(&self) -> Result<ThreeWay> {
        three_way(&self.k, &self.lambda, &self.shelling)
    }

    pub fn subcomplex_table(&self) -> SubcomplexTable {
        subcomplex_cohomology_table(&self.k, &self.lambda)
    }

    pub fn bockstein(&self) -> Result<BocksteinReport> {
        bockstein_check_thm15(&self.k, &self.lambda, &self.shelling)
    }

    pub fn small_cover_table(&self) -> Result<SmallCoverRow> {
        small_cover_table(&self.k, &self.lambda, &self.shelling)
    }

    pub fn claim_check(&self, kk: u32) -> Result<ClaimReport> {
        claim_check_thm11(&self.k, &self.lambda, &self.shelling, kk)
    }

    pub fn run_checks(&self) -> Vec<CheckItem> {
        run_checks(self)
    }
}

/// One line of the full consistency check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn item(name: &'static str, r: Result<(bool, String)>) -> CheckItem {
    match r {
        Ok((passed, detail)) => CheckItem { name, passed, detail },
        Err(e) => CheckItem { name, passed: false, detail: e.to_string() },
    }
}

/// Every cross-validation available for the instance.
pub fn run_checks(space: &ToricSpace) -> Vec<CheckItem> {
    let (k, l, s) = (&space.k, &space.lambda, &space.shelling);
    let n = space.n();
    let mut out = Vec::new();
    out.push(item("shelling", verify_shelling(k, s.order()).map(|_| (true, format!("{} facets", s.len())))));
    out.push(item("non-singularity", l.check_nonsingular(k.facets()).map(|_| (true, format!("{} facets", k.facets().len())))));
    out.push(item(
        "boundary squares to zero (RZ_K)",
        cells::rz_complex(k).and_then(|c| c.complex.check_square_zero().map(|_| (true, format!("{} cells", c.count())))),
    ));
    let q = cells::quotient_complex(k, l, s);
    out.push(item(
        "boundary squares to zero (Y)",
        q.clone().and_then(|q| q.complex().check_square_zero().map(|_| (true, format!("{} cells", q.cells.count())))),
    ));
    let dc = morse::doubled_complex(k, l, s);
    out.push(item(
        "gradient chain map",
        dc.clone().map(|dc| (dc.morse.iter().all(MorseComplex::check_chain_map), format!("{} full subcomplexes", dc.morse.len()))),
    ));
    out.push(item(
        "critical count",
        dc.clone().map(|dc| {
            let total: usize = dc.morse.iter().map(|mc| mc.critical_nonempty().len()).sum();
            (total + 1 == s.len(), format!("{} + 1 against {} facets", total, s.len()))
        }),
    ));
    out.push(item("three-way agreement", three_way(k, l, s).map(|t| (t.agree(), format!("formula {}; morse {}; cells {}", t.formula, t.morse, t.cells)))));
    out.push(item(
        "mod-2 Betti numbers equal h-vector",
        cells::oracle_cohomology(k, l, s, Coefficients::Mod(2)).and_then(|h2| {
            let h = k.h_vector()?;
            let dims: Vec<i64> = (0..=n as i32).map(|i| h2.get(i).dimension_mod(2) as i64).collect();
            Ok((dims == h, format!("{dims:?} against {h:?}")))
        }),
    ));
    out.push(item(
        "transfer divisibility",
        q.clone().and_then(|q| {
            let mut count = 0;
            let mut ok = true;
            for w in l.row_space() {
                for sigma in k.faces().into_iter().filter(|f| f.is_subset(w)) {
                    let rep = cells::transfer_divisibility_in(&q, k, s, sigma, w)?;
                    ok &= rep.primitive_identity != Some(false);
                    count += 1;
                }
            }
            Ok((ok, format!("{count} pairs")))
        }),
    ));
    out.push(item(
        "phi chain map",
        q.clone().and_then(|q| dc.clone().and_then(|dc| phi_chain_map_check(&q, &dc).map(|b| (b, String::new())))),
    ));
    out.push(item(
        "phi mod 2 and Sq^1",
        q.clone().and_then(|q| dc.clone().and_then(|dc| phi_mod2_check_in(k, l, s, &q, &dc).map(|r| (r.passes(), format!("{:?}", r.identification))))),
    ));
    out.push(item(
        "Sq^1 squares to zero",
        facering::sq1_matrix(k, l, s).map(|m| (m.squares_to_zero(), format!("ranks {:?}", (0..=n).map(|d| m.rank(d)).collect::<Vec<_>>()))),
    ));
    out.push(item("face-ring filtration", facering::djsta_filtration_check(k, l, s).map(|b| (b, String::new()))));
    out.push(item("Bockstein pages", bockstein_check_thm15(k, l, s).map(|r| (r.holds(), format!("{} comparisons", r.comparisons.len())))));
    for coeff in [Coefficients::Q, Coefficients::Mod(3), Coefficients::Mod(5), Coefficients::Mod(7)] {
        let name = match coeff {
            Coefficients::Q => "formula over Q",
            Coefficients::Mod(3) => "formula over Z_3",
            Coefficients::Mod(5) => "formula over Z_5",
            _ => "formula over Z_7",
        };
        out.push(item(name, coefficient_cohomology(k, l, s, coeff).map(|g| (true, g.to_string()))));
    }
    if (n == 3 || n == 4) && k.check_homology_sphere().is_ok() {
        out.push(item("small cover table", small_cover_table(k, l, s).map(|r| (true, r.to_string().lines().next().unwrap_or("").to_string()))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cross_polytope_boundary, simplex_boundary};

    fn f(v: &[usize]) -> Face {
        Face::new(v)
    }

    #[test]
    fn conjugacy_is_unitriangular_only() {
        let m = |rows: &[Vec<u8>], nc: usize| if rows.is_empty() { BitMatrix::zeros(0, nc) } else { BitMatrix::from_rows(rows) };
        let sizes = [2, 1];
        let top = m(&[], 1);
        // [1 0] and [0 1] have the same rank but no lower unitriangular P relates them
        assert!(!unitriangular_conjugacy(&[m(&[vec![1, 0]], 2), top.clone()], &[m(&[vec![0, 1]], 2), top.clone()], &sizes));
        assert!(unitriangular_conjugacy(&[m(&[vec![0, 1]], 2), top.clone()], &[m(&[vec![1, 1]], 2), top.clone()], &sizes));
        assert!(unitriangular_conjugacy(&[m(&[vec![1, 1]], 2), top.clone()], &[m(&[vec![1, 1]], 2), top], &sizes));
    }

    fn klein() -> ToricSpace {
        let k = SimplicialComplex::from_lists(4, &[&[1, 2], &[2, 3], &[3, 4], &[1, 4]]).unwrap();
        let l = CharMatrix::from_rows(&[vec![1, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        ToricSpace::new(k, l, Some(&[f(&[1, 2]), f(&[2, 3]), f(&[3, 4]), f(&[1, 4])])).unwrap()
    }

    fn rp3() -> ToricSpace {
        let l = CharMatrix::from_rows(&[vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]).unwrap();
        ToricSpace::new(simplex_boundary(3), l, None).unwrap()
    }

    fn z(r: usize) -> AbelianGroup {
        AbelianGroup::free(r)
    }

    fn z2(e: usize) -> AbelianGroup {
        AbelianGroup::cyclic(2, e)
    }

    #[test]
    fn klein_table_and_assembly() {
        let y = klein();
        let t = y.subcomplex_table();
        assert_eq!(t.get(Face::EMPTY).unwrap(), &GradedGroup::from_degrees([(-1, z(1))]));
        assert!(t.get(f(&[1, 3, 4])).unwrap().is_zero());
        assert!(t.get(f(&[1, 2, 3])).unwrap().is_zero());
        assert_eq!(t.get(f(&[2, 4])).unwrap(), &GradedGroup::from_degrees([(0, z(1))]));
        let h = assemble_integral(&t, &y.k.h_vector().unwrap()).unwrap();
        assert_eq!(h, GradedGroup::from_list(&[z(1), z(1), z2(1)]));
        assert!(y.three_way().unwrap().agree());
    }

    #[test]
    fn inconsistent_h_vector() {
        let y = klein();
        let t = y.subcomplex_table();
        assert!(matches!(assemble_integral(&t, &[1, 0, 0]), Err(Error::InconsistentHVector(_))));
        assert!(matches!(assemble_integral(&t, &[2, 2, 1]), Err(Error::InconsistentHVector(_))));
    }

    #[test]
    fn rp3_formula_and_coefficients() {
        let y = rp3();
        let t = y.subcomplex_table();
        let nonzero: Vec<Face> = t.iter().filter(|(w, g)| !w.is_empty() && !g.is_zero()).map(|(w, _)| w).collect();
        assert_eq!(nonzero, vec![Face::full(4)]);
        assert_eq!(t.get(Face::full(4)).unwrap(), &GradedGroup::from_degrees([(2, z(1))]));
        assert_eq!(y.three_way().unwrap().cells, GradedGroup::from_list(&[z(1), z(0), z2(1), z(1)]));
        let q = coefficient_cohomology(&y.k, &y.lambda, &y.shelling, Coefficients::Q).unwrap();
        assert_eq!(q, GradedGroup::from_degrees([(0, z(1)), (3, z(1))]));
        let row = y.small_cover_table().unwrap();
        assert!(row.orientable);
        assert_eq!(row.b, 0);
    }

    #[test]
    fn klein_coefficients() {
        let y = klein();
        for coeff in [Coefficients::Q, Coefficients::Mod(3)] {
            let g = coefficient_cohomology(&y.k, &y.lambda, &y.shelling, coeff).unwrap();
            let dims: Vec<usize> = (0..=2).map(|i| g.get(i).rank + g.get(i).torsion.len()).collect();
            assert_eq!(dims, vec![1, 1, 0]);
        }
        for method in Method::ALL {
            assert_eq!(y.cohomology(method, Coefficients::Mod(4)).unwrap(), y.cohomology(Method::Cells, Coefficients::Mod(4)).unwrap());
        }
    }

    #[test]
    fn klein_claim() {
        let y = klein();
        let r = y.claim_check(1).unwrap();
        let d1 = &r.degrees[1];
        assert_eq!(d1.lhs, AbelianGroup::new(0, [4, 2]));
        assert_eq!(d1.rhs_literal, z2(1));
        assert_eq!(d1.rhs_doubled, AbelianGroup::new(0, [4, 2]));
        assert_eq!(r.degrees[0].lhs, AbelianGroup::new(0, [4]));
        assert_eq!(r.degrees[0].rhs_literal, z2(1));
        assert!(!r.literal_holds());
        assert!(r.doubled_holds());
    }

    #[test]
    fn pages() {
        let klein = GradedGroup::from_list(&[z(1), z(1), z2(1)]);
        let p = bockstein_pages(&klein, 0, 2, 2);
        assert_eq!(p.page(1), &[1, 2, 1]);
        assert_eq!(p.page(2), &[1, 1, 0]);
        assert_eq!(p.infinity, vec![1, 1, 0]);
        let rp3 = GradedGroup::from_list(&[z(1), z(0), z2(1), z(1)]);
        let p = bockstein_pages(&rp3, 0, 3, 2);
        assert_eq!(p.page(1), &[1, 1, 1, 1]);
        assert_eq!(p.page(2), &[1, 0, 0, 1]);
        let g = GradedGroup::from_list(&[z(1), AbelianGroup::new(0, [8])]);
        assert_eq!(k_max(&g), 4);
        assert!(bockstein_pages(&g, 0, 1, 4).is_monotone());
        assert!(klein_space_report().holds());
    }

    fn klein_space_report() -> BocksteinReport {
        klein().bockstein().unwrap()
    }

    #[test]
    fn klein_phi() {
        let y = klein();
        let q = cells::quotient_complex(&y.k, &y.lambda, &y.shelling).unwrap();
        let phi = phi_cochain(Face::EMPTY, Face::EMPTY, &y.k, &y.lambda, &y.shelling).unwrap();
        assert_eq!(phi.mu, 2);
        assert_eq!(phi.values, vec![1; q.cells_of_dim(0).len()]);
        assert_eq!(phi.values.len(), 4);
        let top = phi_cochain(f(&[1, 3, 4]), f(&[1, 4]), &y.k, &y.lambda, &y.shelling).unwrap();
        assert!(top.is_primitive());
        let dc = morse::doubled_complex(&y.k, &y.lambda, &y.shelling).unwrap();
        assert!(phi_chain_map_check(&q, &dc).unwrap());
        let rep = phi_mod2_check(&y.k, &y.lambda, &y.shelling).unwrap();
        assert!(rep.passes());
        assert_eq!(rep.identification, Identification::Exact);
    }

    #[test]
    fn small_cover_errors() {
        let y = klein();
        assert_eq!(y.small_cover_table(), Err(Error::DimensionUnsupported(2)));
        let path = SimplicialComplex::from_lists(3, &[&[1, 2], &[2, 3]]).unwrap();
        let _ = cross_polytope_boundary(2);
        let l = CharMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        let sp = ToricSpace::new(path, l, None).unwrap();
        assert!(matches!(sp.small_cover_table(), Err(Error::DimensionUnsupported(2))));
    }

    #[test]
    fn all_checks_pass_on_klein() {
        for c in klein().run_checks() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
