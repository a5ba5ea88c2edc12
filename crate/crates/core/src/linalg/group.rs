//! Finitely generated abelian groups in primary-decomposed form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

/// Coefficient rings for (co)homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Z,
    Q,
    /// `Z_q` for `q >= 2`.
    Mod(u64),
}

impl Coefficients {
    pub fn two_power(k: u32) -> Coefficients {
        Coefficients::Mod(1u64 << k)
    }

    pub fn is_field(self) -> bool {
        match self {
            Coefficients::Z => false,
            Coefficients::Q => true,
            Coefficients::Mod(q) => is_prime(q),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Z => write!(f, "Z"),
            Coefficients::Q => write!(f, "Q"),
            Coefficients::Mod(q) => write!(f, "Z_{q}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = String;

    /// Accepts `Z`, `Q`, `Zq:<q>` and `Z2k:<k>` (the ring `Z_{2^k}`).
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s {
            "Z" => return Ok(Coefficients::Z),
            "Q" => return Ok(Coefficients::Q),
            _ => {}
        }
        if let Some(q) = s.strip_prefix("Zq:") {
            let q: u64 = q.parse().map_err(|_| format!("bad modulus in {s:?}"))?;
            if q < 2 {
                return Err(format!("modulus must be at least 2, got {q}"));
            }
            return Ok(Coefficients::Mod(q));
        }
        if let Some(k) = s.strip_prefix("Z2k:") {
            let k: u32 = k.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            if !(1..=62).contains(&k) {
                return Err(format!("exponent must lie in 1..=62, got {k}"));
            }
            return Ok(Coefficients::two_power(k));
        }
        Err(format!("unknown coefficients {s:?}; expected Z, Q, Zq:<q> or Z2k:<k>"))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n >= 1` into its prime-power factors, in increasing prime order.
pub fn prime_power_split(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut pk = 1;
            while n.is_multiple_of(p) {
                n /= p;
                pk *= p;
            }
            out.push(pk);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// `Z^rank` plus cyclic groups of prime-power order, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    /// Builds the group from arbitrary cyclic orders (each `>= 1`); orders
    /// are split into prime powers and units dropped.
    pub fn new(rank: usize, orders: impl IntoIterator<Item = u64>) -> Self {
        let mut torsion: Vec<u64> = orders.into_iter().flat_map(prime_power_split).collect();
        torsion.sort_unstable();
        AbelianGroup { rank, torsion }
    }

    /// Cokernel-style group from invariant factors: `Z^rank ⊕ ⊕ Z_d`.
    pub fn from_invariant_factors(rank: usize, factors: &[BigInt]) -> Self {
        let orders = factors.iter().filter(|d| !d.is_one()).map(|d| {
            d.to_u64().unwrap_or_else(|| panic!("torsion order {d} does not fit in 64 bits"))
        });
        AbelianGroup::new(rank, orders)
    }

    /// `Z_2^k`, or more generally `k` copies of `Z_q`.
    pub fn cyclic(order: u64, copies: usize) -> Self {
        AbelianGroup::new(0, std::iter::repeat_n(order, copies))
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        AbelianGroup::new(self.rank + other.rank, self.torsion.iter().chain(&other.torsion).copied())
    }

    /// Number of cyclic summands `Z_{p^j}` with the given prime `p`.
    pub fn count_p_primary(&self, p: u64) -> usize {
        self.torsion.iter().filter(|&&t| t % p == 0).count()
    }

    /// Number of 2-primary summands of order at least `2^k`.
    pub fn count_two_primary_at_least(&self, k: u32) -> usize {
        self.torsion.iter().filter(|&&t| t % 2 == 0 && t >= 1u64 << k).count()
    }

    /// Order of a finite group as a big integer; `None` if it has free part.
    pub fn order(&self) -> Option<BigInt> {
        (self.rank == 0).then(|| self.torsion.iter().map(|&t| BigInt::from(t)).product())
    }

    /// Dimension over a prime field `Z_p` of a group that is a `Z_p`-vector space.
    pub fn dimension_mod(&self, p: u64) -> usize {
        self.rank + self.count_p_primary(p)
    }

    /// `self ⊗ Z_q`.
    pub fn tensor_mod(&self, q: u64) -> AbelianGroup {
        let mut orders: Vec<u64> = Vec::new();
        for _ in 0..self.rank {
            orders.push(q);
        }
        orders.extend(self.torsion.iter().map(|&t| gcd(t, q)));
        AbelianGroup::new(0, orders)
    }

    /// `Tor(self, Z_q)`.
    pub fn tor_mod(&self, q: u64) -> AbelianGroup {
        AbelianGroup::new(0, self.torsion.iter().map(|&t| gcd(t, q)))
    }

    /// Every cyclic summand with its order doubled (`Z_{2^k} -> Z_{2^{k+1}}`,
    /// `Z_{p^k} -> Z_2 ⊕ Z_{p^k}` for odd `p`).
    pub fn order_doubled(&self) -> AbelianGroup {
        AbelianGroup::new(self.rank, self.torsion.iter().map(|&t| 2 * t))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&x| x == t).count();
            parts.push(if run == 1 { format!("Z_{t}") } else { format!("Z_{t}^{run}") });
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Degree-indexed groups; zero groups are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedGroup {
    groups: BTreeMap<i32, AbelianGroup>,
}

impl GradedGroup {
    pub fn new() -> Self {
        GradedGroup::default()
    }

    pub fn from_degrees(entries: impl IntoIterator<Item = (i32, AbelianGroup)>) -> Self {
        let mut g = GradedGroup::new();
        for (d, a) in entries {
            g.add(d, &a);
        }
        g
    }

    /// Groups listed from degree 0 upward.
    pub fn from_list(groups: &[AbelianGroup]) -> Self {
        GradedGroup::from_degrees(groups.iter().cloned().enumerate().map(|(i, a)| (i as i32, a)))
    }

    pub fn get(&self, degree: i32) -> AbelianGroup {
        self.groups.get(&degree).cloned().unwrap_or_default()
    }

    /// Adds `a` as a direct summand in the given degree.
    pub fn add(&mut self, degree: i32, a: &AbelianGroup) {
        if a.is_zero() {
            return;
        }
        let cur = self.get(degree);
        self.groups.insert(degree, cur.direct_sum(a));
    }

    pub fn direct_sum(&self, other: &GradedGroup) -> GradedGroup {
        let mut out = self.clone();
        for (&d, a) in &other.groups {
            out.add(d, a);
        }
        out
    }

    pub fn shifted(&self, by: i32) -> GradedGroup {
        GradedGroup { groups: self.groups.iter().map(|(&d, a)| (d + by, a.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &AbelianGroup)> {
        self.groups.iter().map(|(&d, a)| (d, a))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.groups.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.groups.keys().next_back().copied()
    }

    /// Groups in degrees `lo..=hi`, zeros included.
    pub fn to_list(&self, lo: i32, hi: i32) -> Vec<AbelianGroup> {
        (lo..=hi).map(|d| self.get(d)).collect()
    }

    /// Universal-coefficient prediction of cohomology with `Z_q`
    /// coefficients from integral cohomology:
    /// `H^i ⊗ Z_q ⊕ Tor(H^{i+1}, Z_q)`.
    pub fn uct_cohomology(&self, coeff: Coefficients) -> GradedGroup {
        let mut out = GradedGroup::new();
        let Some((lo, hi)) = self.min_degree().zip(self.max_degree()) else {
            return out;
        };
        for d in lo - 1..=hi {
            match coeff {
                Coefficients::Z => out.add(d, &self.get(d)),
                Coefficients::Q => out.add(d, &AbelianGroup::free(self.get(d).rank)),
                Coefficients::Mod(q) => {
                    out.add(d, &self.get(d).tensor_mod(q));
                    out.add(d, &self.get(d + 1).tor_mod(q));
                }
            }
        }
        out
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.groups.iter().map(|(d, a)| format!("{d}: {a}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}
