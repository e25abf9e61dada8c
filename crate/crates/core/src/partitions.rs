//! Integer partitions and Young diagram statistics.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing list of positive parts. The empty list is the partition of 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Per-cell integers laid out like a Young diagram (row i has λ_i entries).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGrid {
    pub rows: Vec<Vec<i64>>,
}

impl CellGrid {
    pub fn cells(&self) -> impl Iterator<Item = i64> + '_ {
        self.rows.iter().flatten().copied()
    }
}

impl Partition {
    /// Validates that the parts are positive and weakly decreasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::domain(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Drops zeros and sorts descending.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part i (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn height(&self) -> usize {
        self.parts.len()
    }

    pub fn width(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.width();
        let parts = (0..w)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// h(i,j) = λ_i − i + λ*_j − j + 1 with 1-based (i,j).
    pub fn hook_lengths(&self) -> CellGrid {
        let conj = self.conjugate();
        let rows = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, &li)| {
                (0..li)
                    .map(|j| (li - j) as i64 + (conj.parts[j] - i) as i64 - 1)
                    .collect()
            })
            .collect();
        CellGrid { rows }
    }

    /// c(i,j) = j − i.
    pub fn contents(&self) -> CellGrid {
        let rows = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, &li)| (0..li).map(|j| j as i64 - i as i64).collect())
            .collect();
        CellGrid { rows }
    }

    /// C_λ(d) = Π (d + c_u). Nonpositive factors appear only when ht(λ) > d.
    pub fn content_polynomial(&self, d: usize) -> BigInt {
        let mut acc = BigInt::one();
        for c in self.contents().cells() {
            acc *= BigInt::from(d as i64 + c);
        }
        acc
    }

    /// s_λ(1,…,1) with d ones, via the hook-content formula.
    pub fn schur_at_ones(&self, d: usize) -> BigUint {
        if self.height() > d {
            return BigUint::zero();
        }
        let num = self.content_polynomial(d);
        let den = self.hook_product();
        let (q, r) = num.div_rem(&BigInt::from(den));
        assert!(r.is_zero(), "hook-content quotient not integral for {self} at d={d}");
        q.to_biguint().expect("hook-content quotient is nonnegative")
    }

    /// χ_λ(1) = n!/Π h_u.
    pub fn irrep_dimension(&self) -> BigUint {
        let (q, r) = factorial(self.weight()).div_rem(&self.hook_product());
        assert!(r.is_zero(), "hook length formula not integral for {self}");
        q
    }

    pub fn hook_product(&self) -> BigUint {
        self.hook_lengths()
            .cells()
            .fold(BigUint::one(), |acc, h| acc * BigUint::from(h as u64))
    }

    /// Prefix sums of `self` are all ≤ those of `other` (both zero-padded).
    /// Weights need not agree.
    pub fn dominates(&self, other: &Partition) -> bool {
        let len = self.height().max(other.height());
        let (mut a, mut b) = (0usize, 0usize);
        for i in 0..len {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }

    /// μ_i ≤ λ_i for all i, zero-padded.
    pub fn is_subpartition_of(&self, lambda: &Partition) -> bool {
        self.height() <= lambda.height()
            && self.parts.iter().zip(&lambda.parts).all(|(m, l)| m <= l)
    }

    /// Centralizer order of a permutation with this cycle type: Π i^{m_i} m_i!.
    pub fn z_lambda(&self) -> BigUint {
        let mut acc = BigUint::one();
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let m = self.parts[i..].iter().take_while(|&&q| q == p).count();
            acc *= BigUint::from(p).pow(m as u32) * factorial(m);
            i += m;
        }
        acc
    }

    /// Number of permutations with this cycle type.
    pub fn class_size(&self) -> BigUint {
        factorial(self.weight()) / self.z_lambda()
    }

    /// Part-wise sum, zero-padded.
    pub fn add(&self, other: &Partition) -> Partition {
        let len = self.height().max(other.height());
        Partition {
            parts: (0..len).map(|i| self.part(i) + other.part(i)).collect(),
        }
    }

    /// Sign of any permutation of this cycle type.
    pub fn sign(&self) -> i32 {
        if (self.weight() - self.height()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Is `mu` contained in `lambda`.
pub fn is_subpartition(mu: &Partition, lambda: &Partition) -> bool {
    mu.is_subpartition_of(lambda)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// All partitions of n with at most `max_height` parts and parts at most
/// `max_width`, in descending lexicographic order.
pub fn enumerate_partitions(
    n: usize,
    max_height: Option<usize>,
    max_width: Option<usize>,
) -> Vec<Partition> {
    let h = max_height.unwrap_or(n);
    let w = max_width.unwrap_or(n).min(n);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    gen(n, w, h, &mut cur, &mut out);
    out
}

fn gen(rem: usize, max_part: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rem == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    if slots == 0 || max_part * slots < rem {
        return;
    }
    for p in (1..=max_part.min(rem)).rev() {
        cur.push(p);
        gen(rem - p, p, slots - 1, cur, out);
        cur.pop();
    }
}

/// All partitions contained in `lambda` of the given weight, descending lexicographic.
pub fn subpartitions_of_weight(lambda: &Partition, weight: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    sub_gen(lambda.parts(), 0, weight, usize::MAX, &mut cur, &mut out);
    out
}

fn sub_gen(
    lam: &[usize],
    row: usize,
    rem: usize,
    cap: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if rem == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    if row >= lam.len() {
        return;
    }
    let room: usize = lam[row..].iter().map(|&l| l.min(cap)).sum();
    if room < rem {
        return;
    }
    let hi = lam[row].min(cap).min(rem);
    for p in (1..=hi).rev() {
        cur.push(p);
        sub_gen(lam, row + 1, rem - p, p, cur, out);
        cur.pop();
    }
}
