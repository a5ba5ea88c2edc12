#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use realtoric::cli;
use realtoric::complex::{cross_polytope_boundary, simplex_boundary, SimplicialComplex};
use realtoric::linalg::CharMatrix;
use realtoric::shelling::verify_shelling;
use realtoric::toric::ToricSpace;
use realtoric::Face;

pub fn corpus_dir() -> PathBuf {
    cli::default_corpus_dir()
}

pub fn load(name: &str) -> ToricSpace {
    let path = corpus_dir().join(format!("{name}.json"));
    cli::load_instance(path.to_str().unwrap()).unwrap().space().unwrap()
}

/// Every corpus instance, sorted by name.
pub fn corpus() -> Vec<(String, ToricSpace)> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter_map(|e| e.path().file_stem().map(|s| s.to_string_lossy().into_owned()))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), load(&n))).collect()
}

/// Grows a shellable subcomplex of `∂Δ^n` or `∂cross_n` one facet at a time
/// (each step checked by the shelling verifier), relabels the used vertices
/// to `[m]`, and searches for a non-singular `Λ`.
pub fn random_instance<R: Rng>(rng: &mut R) -> ToricSpace {
    let n = rng.gen_range(2..=4);
    let base = if rng.gen_bool(0.5) { simplex_boundary(n) } else { cross_polytope_boundary(n) };
    let mut pool: Vec<Face> = base.facets().to_vec();
    pool.shuffle(rng);
    let target = rng.gen_range(1..=pool.len());
    let mut order: Vec<Face> = vec![pool.pop().unwrap()];
    while order.len() < target {
        let m = base.m();
        let candidates: Vec<usize> = (0..pool.len())
            .filter(|&i| {
                let mut trial = order.clone();
                trial.push(pool[i]);
                let k = SimplicialComplex::generated_by(m, trial.iter().copied());
                verify_shelling(&k, &trial).is_ok()
            })
            .collect();
        let Some(&pick) = candidates.choose(rng) else { break };
        order.push(pool.remove(pick));
    }
    let used: Vec<usize> = order.iter().fold(Face::EMPTY, |a, f| a.union(*f)).to_vec();
    let relabel = |f: Face| -> Face { f.vertices().map(|v| used.iter().position(|&u| u == v).unwrap() + 1).collect() };
    let order: Vec<Face> = order.into_iter().map(relabel).collect();
    let m = used.len();
    let k = SimplicialComplex::new(m, order.clone()).unwrap();
    let lambda = random_lambda(rng, &k, n).expect("a sub-complex of a sphere with a characteristic map has one");
    ToricSpace::new(k, lambda, Some(&order)).unwrap()
}

/// Backtracking search over columns in a random order of nonzero vectors.
pub fn random_lambda<R: Rng>(rng: &mut R, k: &SimplicialComplex, n: usize) -> Option<CharMatrix> {
    let m = k.m();
    let mut vectors: Vec<u64> = (1..(1u64 << n)).collect();
    vectors.shuffle(rng);
    let mut cols: Vec<u64> = Vec::with_capacity(m);
    fn independent(vs: &[u64]) -> bool {
        let mut basis: Vec<u64> = Vec::new();
        for &v in vs {
            let mut x = v;
            for &b in &basis {
                x = x.min(x ^ b);
            }
            if x == 0 {
                return false;
            }
            basis.push(x);
        }
        true
    }
    fn go(k: &SimplicialComplex, vectors: &[u64], cols: &mut Vec<u64>) -> bool {
        let v = cols.len() + 1;
        if v > k.m() {
            return true;
        }
        for &c in vectors {
            cols.push(c);
            let ok = k.facets().iter().filter(|f| f.contains(v)).all(|f| {
                let vs: Vec<u64> = f.vertices().filter(|&u| u <= v).map(|u| cols[u - 1]).collect();
                independent(&vs)
            });
            if ok && go(k, vectors, cols) {
                return true;
            }
            cols.pop();
        }
        false
    }
    if !go(k, &vectors, &mut cols) {
        return None;
    }
    let rows: Vec<Vec<u8>> = (0..n).map(|i| (0..m).map(|j| ((cols[j] >> i) & 1) as u8).collect()).collect();
    CharMatrix::from_rows_with_width(m, &rows).ok()
}

/// The randomized-suite properties for one instance; `Err` names the first failure.
pub fn check_properties(y: &ToricSpace) -> Result<(), String> {
    use realtoric::cells;
    use realtoric::linalg::Coefficients;
    use realtoric::morse;
    use realtoric::toric;

    let (k, l, s) = (&y.k, &y.lambda, &y.shelling);
    let e = |what: &str, err: realtoric::Error| format!("{what}: {err}");
    let t = toric::three_way(k, l, s).map_err(|x| e("three-way", x))?;
    if !t.agree() {
        return Err(format!("three-way disagreement: formula {}, morse {}, cells {}", t.formula, t.morse, t.cells));
    }
    cells::rz_complex(k).and_then(|c| c.complex.check_square_zero()).map_err(|x| e("RZ_K boundary", x))?;
    let q = cells::quotient_complex(k, l, s).map_err(|x| e("quotient", x))?;
    q.complex().check_square_zero().map_err(|x| e("quotient boundary", x))?;
    let dc = morse::doubled_complex(k, l, s).map_err(|x| e("doubled complex", x))?;
    if !dc.morse.iter().all(|mc| mc.check_chain_map()) {
        return Err("ρ is not a chain map".into());
    }
    if !toric::phi_chain_map_check(&q, &dc).map_err(|x| e("φ", x))? {
        return Err("φ is not a cochain map".into());
    }
    let critical: usize = dc.morse.iter().map(|mc| mc.critical_nonempty().len()).sum();
    if critical + 1 != s.len() {
        return Err(format!("{critical} critical faces + 1 against {} facets", s.len()));
    }
    for coeff in [Coefficients::Q, Coefficients::Mod(2), Coefficients::Mod(3), Coefficients::Mod(4), Coefficients::Mod(8)] {
        let want = t.cells.uct_cohomology(coeff);
        let oracle = q.complex().cohomology(coeff).map_err(|x| e("oracle", x))?;
        let via_morse = dc.cohomology(coeff).map_err(|x| e("morse", x))?;
        if oracle != want || via_morse != want {
            return Err(format!("over {coeff}: universal coefficients {want}, oracle {oracle}, morse {via_morse}"));
        }
    }
    Ok(())
}
