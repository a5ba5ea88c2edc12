//! Smith normal form over the integers.
//!
//! Pivot rule: the nonzero entry of smallest absolute value in the active
//! submatrix, ties broken by lowest row and then lowest column. The
//! reduction first runs on checked `i64` arithmetic and restarts on
//! `BigInt` as soon as any operation would overflow, so the result is
//! always exact.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::int_matrix::IntMatrix;

trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn abs_cmp(&self, other: &Self) -> Ordering;
    fn neg(&self) -> Option<Self>;
    /// Quotient truncated toward zero.
    fn quot(&self, d: &Self) -> Option<Self>;
    fn divides(&self, n: &Self) -> bool;
    /// `self - q * x`
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self>;
    fn into_big(self) -> BigInt;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        self.checked_div(*d)
    }
    fn divides(&self, n: &Self) -> bool {
        n.checked_rem(*self).is_none_or(|r| r == 0)
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*x)?)
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        Some(self / d)
    }
    fn divides(&self, n: &Self) -> bool {
        Zero::is_zero(&(n % self))
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        Some(self - q * x)
    }
    fn into_big(self) -> BigInt {
        self
    }
}

type Dense<S> = Vec<Vec<S>>;

fn identity<S: Scalar>(n: usize) -> Dense<S> {
    (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect()
}

struct Reduction<S: Scalar> {
    a: Dense<S>,
    nrows: usize,
    ncols: usize,
    // U, U^{-1}, V, V^{-1} with U A V = D
    transforms: Option<[Dense<S>; 4]>,
}

impl<S: Scalar> Reduction<S> {
    fn new(a: Dense<S>, nrows: usize, ncols: usize, track: bool) -> Self {
        let transforms = track.then(|| [identity(nrows), identity(nrows), identity(ncols), identity(ncols)]);
        Reduction { a, nrows, ncols, transforms }
    }

    // row_i -= q * row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &S) -> Option<()> {
        for j in 0..self.ncols {
            if !self.a[t][j].is_zero() {
                self.a[i][j] = self.a[i][j].sub_mul(q, &self.a[t][j])?;
            }
        }
        if let Some([u, u_inv, _, _]) = &mut self.transforms {
            for j in 0..u.len() {
                u[i][j] = u[i][j].sub_mul(q, &u[t][j])?;
            }
            // column t of U^{-1} += q * column i
            let mq = q.neg()?;
            for row in u_inv.iter_mut() {
                row[t] = row[t].sub_mul(&mq, &row[i])?;
            }
        }
        Some(())
    }

    // col_j -= q * col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &S) -> Option<()> {
        for row in self.a.iter_mut() {
            if !row[t].is_zero() {
                row[j] = row[j].sub_mul(q, &row[t])?;
            }
        }
        if let Some([_, _, v, v_inv]) = &mut self.transforms {
            for row in v.iter_mut() {
                row[j] = row[j].sub_mul(q, &row[t])?;
            }
            // row t of V^{-1} += q * row j
            let mq = q.neg()?;
            for k in 0..v_inv.len() {
                v_inv[t][k] = v_inv[t][k].sub_mul(&mq, &v_inv[j][k])?;
            }
        }
        Some(())
    }

    // row_t += row_i
    fn row_add(&mut self, t: usize, i: usize) -> Option<()> {
        let minus_one = S::from_i64(-1);
        for j in 0..self.ncols {
            if !self.a[i][j].is_zero() {
                self.a[t][j] = self.a[t][j].sub_mul(&minus_one, &self.a[i][j])?;
            }
        }
        if let Some([u, u_inv, _, _]) = &mut self.transforms {
            for j in 0..u.len() {
                u[t][j] = u[t][j].sub_mul(&minus_one, &u[i][j])?;
            }
            // column i of U^{-1} -= column t
            for row in u_inv.iter_mut() {
                row[i] = row[i].sub_mul(&S::one(), &row[t])?;
            }
        }
        Some(())
    }

    fn swap_rows(&mut self, i: usize, t: usize) {
        if i == t {
            return;
        }
        self.a.swap(i, t);
        if let Some([u, u_inv, _, _]) = &mut self.transforms {
            u.swap(i, t);
            for row in u_inv.iter_mut() {
                row.swap(i, t);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, t: usize) {
        if j == t {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(j, t);
        }
        if let Some([_, _, v, v_inv]) = &mut self.transforms {
            for row in v.iter_mut() {
                row.swap(j, t);
            }
            v_inv.swap(j, t);
        }
    }

    fn negate_row(&mut self, t: usize) -> Option<()> {
        for j in 0..self.ncols {
            self.a[t][j] = self.a[t][j].neg()?;
        }
        if let Some([u, u_inv, _, _]) = &mut self.transforms {
            for j in 0..u.len() {
                u[t][j] = u[t][j].neg()?;
            }
            for row in u_inv.iter_mut() {
                row[t] = row[t].neg()?;
            }
        }
        Some(())
    }

    fn smallest_in_submatrix(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.nrows {
            for j in t..self.ncols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs_cmp(&self.a[bi][bj]) == Ordering::Less) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(&mut self) -> Option<usize> {
        let mut t = 0;
        while t < self.nrows.min(self.ncols) {
            let Some((pi, pj)) = self.smallest_in_submatrix(t) else {
                break;
            };
            self.swap_rows(pi, t);
            self.swap_cols(pj, t);
            loop {
                for i in t + 1..self.nrows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].quot(&self.a[t][t])?;
                        if !q.is_zero() {
                            self.row_axpy(i, t, &q)?;
                        }
                    }
                }
                for j in t + 1..self.ncols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].quot(&self.a[t][t])?;
                        if !q.is_zero() {
                            self.col_axpy(j, t, &q)?;
                        }
                    }
                }
                // leftover remainders: the smallest becomes the next pivot
                let mut best: Option<(usize, usize)> = None;
                let candidates = (t + 1..self.ncols).map(|j| (t, j)).chain((t + 1..self.nrows).map(|i| (i, t)));
                for (i, j) in candidates {
                    let x = &self.a[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs_cmp(&self.a[bi][bj]) == Ordering::Less) {
                        best = Some((i, j));
                    }
                }
                if let Some((i, j)) = best {
                    self.swap_rows(i, t);
                    self.swap_cols(j, t);
                    continue;
                }
                let pivot = self.a[t][t].clone();
                let offender = (t + 1..self.nrows).find(|&i| (t + 1..self.ncols).any(|j| !pivot.divides(&self.a[i][j])));
                match offender {
                    Some(i) => self.row_add(t, i)?,
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t)?;
            }
            t += 1;
        }
        Some(t)
    }
}

/// Smith normal form with unimodular transforms: `left * A * right = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub factors: Vec<BigInt>,
    pub nrows: usize,
    pub ncols: usize,
    pub left: Vec<Vec<BigInt>>,
    pub left_inverse: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
    pub right_inverse: Vec<Vec<BigInt>>,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn diagonal(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![<BigInt as Zero>::zero(); self.ncols]; self.nrows];
        for (i, f) in self.factors.iter().enumerate() {
            d[i][i] = f.clone();
        }
        d
    }
}

fn to_dense<S: Scalar>(a: &IntMatrix) -> Dense<S> {
    let mut d = vec![vec![S::zero(); a.ncols()]; a.nrows()];
    for (i, j, v) in a.entries() {
        d[i][j] = S::from_i64(v);
    }
    d
}

fn big(d: Dense<i64>) -> Vec<Vec<BigInt>> {
    d.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
}

fn reduce<S: Scalar>(a: &IntMatrix, track: bool) -> Option<Reduction<S>> {
    let mut r = Reduction::new(to_dense::<S>(a), a.nrows(), a.ncols(), track);
    let rank = r.run()?;
    r.nrows = rank; // reuse as rank carrier below
    Some(r)
}

fn factors_of<S: Scalar>(r: &Reduction<S>) -> Vec<BigInt> {
    (0..r.nrows).map(|t| r.a[t][t].clone().into_big()).collect()
}

/// Invariant factors only (no transforms).
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    match reduce::<i64>(a, false) {
        Some(r) => factors_of(&r),
        None => factors_of(&reduce::<BigInt>(a, false).expect("bigint reduction cannot overflow")),
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithNormalForm {
    let (factors, [left, left_inverse, right, right_inverse]) = match reduce::<i64>(a, true) {
        Some(r) => {
            let f = factors_of(&r);
            let [u, ui, v, vi] = r.transforms.expect("tracked");
            (f, [big(u), big(ui), big(v), big(vi)])
        }
        None => {
            let r = reduce::<BigInt>(a, true).expect("bigint reduction cannot overflow");
            let f = factors_of(&r);
            (f, r.transforms.expect("tracked"))
        }
    };
    SmithNormalForm { factors, nrows: a.nrows(), ncols: a.ncols(), left, left_inverse, right, right_inverse }
}

/// Dense big-integer product, used to check factorizations.
pub fn dense_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).fold(<BigInt as Zero>::zero(), |s, t| s + t))
                .collect()
        })
        .collect()
}
