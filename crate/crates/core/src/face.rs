//! Vertex subsets of `[m] = {1, ..., m}` packed into a `u64`.
//!
//! Vertex `i` occupies bit `i - 1`. The same type doubles as a vector in
//! `GF(2)^m` (row-space elements, kernel elements of a characteristic
//! matrix), matching the usual identification of subsets with 0/1 vectors.

use std::cmp::Ordering;
use std::fmt;

/// Largest supported vertex label.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    /// Builds a face from 1-based vertex labels.
    ///
    /// Panics on label 0 or labels above [`MAX_VERTICES`].
    pub fn new(vertices: &[usize]) -> Face {
        vertices.iter().copied().collect()
    }

    pub fn from_bits(bits: u64) -> Face {
        Face(bits)
    }

    /// The full vertex set `[m]`.
    pub fn full(m: usize) -> Face {
        assert!(m <= MAX_VERTICES, "at most {MAX_VERTICES} vertices are supported");
        if m == MAX_VERTICES {
            Face(u64::MAX)
        } else {
            Face((1u64 << m) - 1)
        }
    }

    pub fn singleton(v: usize) -> Face {
        assert!((1..=MAX_VERTICES).contains(&v), "vertex label {v} out of range");
        Face(1u64 << (v - 1))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=MAX_VERTICES).contains(&v) && self.0 & (1u64 << (v - 1)) != 0
    }

    pub fn is_subset(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    pub fn difference(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: Face) -> Face {
        Face(self.0 ^ other.0)
    }

    pub fn with(self, v: usize) -> Face {
        self.union(Face::singleton(v))
    }

    pub fn without(self, v: usize) -> Face {
        self.difference(Face::singleton(v))
    }

    pub fn is_disjoint(self, other: Face) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min_vertex(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// `#{j in self : j < i}`, the exponent in the cubical and simplicial
    /// sign rules.
    pub fn count_below(self, i: usize) -> usize {
        debug_assert!(i >= 1);
        let mask = if i > 64 { u64::MAX } else { (1u64 << (i - 1)) - 1 };
        (self.0 & mask).count_ones() as usize
    }

    /// Vertices in increasing order.
    pub fn vertices(self) -> Vertices {
        Vertices(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.vertices().collect()
    }

    /// All subsets of this face, in increasing binary order (the empty face first).
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, next: Some(0) }
    }

    /// Compact label such as `134`, or `∅`. Only meaningful for labels below 10.
    pub fn short_label(self) -> String {
        if self.is_empty() {
            return "∅".to_string();
        }
        if self.vertices().all(|v| v < 10) {
            self.vertices().map(|v| v.to_string()).collect()
        } else {
            self.to_string()
        }
    }
}

impl FromIterator<usize> for Face {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(Face::EMPTY, |f, v| f.with(v))
    }
}

/// Lexicographic order on increasing vertex lists: `{1,2} < {1,2,3} < {1,3} < {2}`.
impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let p = diff.trailing_zeros();
        let rest = |bits: u64| if p >= 63 { 0 } else { bits >> (p + 1) };
        if self.0 & (1u64 << p) != 0 {
            // self has the smaller next vertex unless other has run out
            if rest(other.0) != 0 { Ordering::Less } else { Ordering::Greater }
        } else if rest(self.0) != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.vertices().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = Face;

    fn next(&mut self) -> Option<Face> {
        let cur = self.next?;
        self.next = if cur == self.mask { None } else { Some((cur.wrapping_sub(self.mask)) & self.mask) };
        Some(Face(cur))
    }
}

/// Sorts faces by cardinality first, then lexicographically.
pub fn graded_order(a: &Face, b: &Face) -> Ordering {
    a.len().cmp(&b.len()).then(a.cmp(b))
}
