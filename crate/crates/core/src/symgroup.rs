//! Permutations, characters of S_n, Young subgroups and trace monomials.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use dashmap::DashMap;
use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{CMatrix, MatrixTuple};
use crate::partitions::{factorial, Partition};

/// Largest |S_α| that `young_subgroup_elements` and `orbit_stabilizer` will enumerate.
pub const DEFAULT_YOUNG_CAP: u64 = 3_628_800;

/// A permutation of {1,…,n}, stored 0-based. Serializes as the 1-based image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(one_based: Vec<usize>) -> Result<Self> {
        Permutation::from_one_based(&one_based)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation including fixed points, e.g. `(1 2)(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.is_empty() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            write!(f, "({})", cycle.iter().map(|i| i + 1).join(" "))?;
        }
        Ok(())
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::domain(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::domain("permutation images are 1-based"));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    /// Parses cycle notation such as `(1 2)(3)` or `(1,3,2)`. The ground set is
    /// `n` if given, otherwise the largest point mentioned. `()` is the identity.
    pub fn parse_cycles(s: &str, n: Option<usize>) -> Result<Self> {
        let s = s.trim();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::parse(format!("expected '(' in cycle notation {s:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::parse(format!("unclosed cycle in {s:?}")))?;
            let body = &open[..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(format!("bad point {tok:?} in {s:?}")))?;
                if v == 0 {
                    return Err(Error::parse(format!("points are 1-based in {s:?}")));
                }
                cycle.push(v - 1);
            }
            cycles.push(cycle);
            rest = open[close + 1..].trim_start();
        }
        let max_pt = cycles.iter().flatten().map(|&i| i + 1).max().unwrap_or(0);
        let n = n.unwrap_or(max_pt);
        if max_pt > n {
            return Err(Error::parse(format!("point {max_pt} exceeds ground set size {n}")));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in &cycles {
            for (a, &i) in cycle.iter().enumerate() {
                if seen[i] {
                    return Err(Error::parse(format!("point {} repeated in {s:?}", i + 1)));
                }
                seen[i] = true;
                images[i] = cycle[(a + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of 0-based i.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composing permutations of different degree");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Disjoint cycles (i, σ(i), σ²(i), …), each starting at its smallest point,
    /// fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles().len()
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycles().iter().map(|c| c.len()).collect())
    }

    /// (−1)^{n − c(σ)}.
    pub fn sign(&self) -> i32 {
        if (self.n() - self.num_cycles()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Every element of S_n.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    (0..n)
        .permutations(n)
        .map(|images| Permutation { images })
}

/// A tuple α of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex {
    entries: Vec<usize>,
}

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        MultiIndex { entries }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn g(&self) -> usize {
        self.entries.len()
    }

    pub fn weight(&self) -> usize {
        self.entries.iter().sum()
    }

    /// α! = Π α_j!.
    pub fn factorial(&self) -> BigUint {
        self.entries.iter().map(|&a| factorial(a)).product()
    }

    /// binom(n, α) = n!/α!.
    pub fn multinomial(&self) -> BigUint {
        factorial(self.weight()) / self.factorial()
    }

    /// Block label of each position 0..n: positions of block P_j are consecutive.
    pub fn blocks(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(j, &a)| std::iter::repeat_n(j, a))
            .collect()
    }

    /// Entries sorted descending with zeros dropped; identifies α up to reordering.
    pub fn shape(&self) -> Partition {
        Partition::from_unsorted(self.entries.clone())
    }

    /// All α with g entries and weight n, in lexicographic descending order.
    pub fn all_of_weight(g: usize, n: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(g);
        compositions(g, n, &mut cur, &mut out);
        out
    }
}

fn compositions(g: usize, rem: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
    if cur.len() + 1 == g {
        cur.push(rem);
        out.push(MultiIndex::new(cur.clone()));
        cur.pop();
        return;
    }
    if g == 0 {
        if rem == 0 {
            out.push(MultiIndex::new(Vec::new()));
        }
        return;
    }
    for a in (0..=rem).rev() {
        cur.push(a);
        compositions(g, rem - a, cur, out);
        cur.pop();
    }
}

fn char_cache() -> &'static DashMap<(Partition, Partition), BigInt> {
    static CACHE: OnceLock<DashMap<(Partition, Partition), BigInt>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// χ_λ evaluated on cycle type ρ (Murnaghan–Nakayama).
pub fn character(lambda: &Partition, rho: &Partition) -> Result<BigInt> {
    if lambda.weight() != rho.weight() {
        return Err(Error::domain(format!(
            "character of {lambda} on class {rho}: weights differ"
        )));
    }
    Ok(mn(lambda, rho.parts()))
}

fn mn(lambda: &Partition, rho: &[usize]) -> BigInt {
    if rho.is_empty() {
        return BigInt::one();
    }
    let key = (lambda.clone(), Partition::new(rho.to_vec()).expect("cycle type"));
    if let Some(v) = char_cache().get(&key) {
        return v.clone();
    }
    // Remove rim hooks of size r = ρ_1 using β-numbers: moving a bead from b to
    // b − r is a rim-hook removal with sign (−1)^{beads strictly between}.
    let r = rho[0];
    let len = lambda.height();
    let beta: Vec<usize> = (0..len).map(|i| lambda.part(i) + len - 1 - i).collect();
    let mut total = BigInt::zero();
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut nb = beta.clone();
        nb[idx] = target;
        nb.sort_unstable_by(|x, y| y.cmp(x));
        let parts = nb.iter().enumerate().map(|(i, &v)| v - (len - 1 - i)).collect();
        let sub = Partition::from_unsorted(parts);
        let term = mn(&sub, &rho[1..]);
        if between % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    char_cache().insert(key, total.clone());
    total
}

/// Elements of S_α: independent permutations of the consecutive blocks.
pub fn young_subgroup_elements(alpha: &MultiIndex) -> Result<impl Iterator<Item = Permutation>> {
    young_subgroup_elements_capped(alpha, DEFAULT_YOUNG_CAP)
}

pub fn young_subgroup_elements_capped(
    alpha: &MultiIndex,
    cap: u64,
) -> Result<impl Iterator<Item = Permutation>> {
    let order = alpha.factorial();
    if order > BigUint::from(cap) {
        return Err(Error::Resource(format!(
            "|S_alpha| = {order} exceeds the enumeration cap {cap}"
        )));
    }
    let n = alpha.weight();
    let mut starts = Vec::new();
    let mut s = 0;
    for &a in alpha.entries() {
        if a >= 2 {
            starts.push((s, a));
        }
        s += a;
    }
    let factors: Vec<Vec<Vec<usize>>> = starts
        .iter()
        .map(|&(s, a)| (s..s + a).permutations(a).collect())
        .collect();
    let combos: Box<dyn Iterator<Item = Vec<Vec<usize>>>> = if factors.is_empty() {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new(factors.into_iter().multi_cartesian_product())
    };
    Ok(combos.map(move |blocks| {
        let mut images: Vec<usize> = (0..n).collect();
        for (&(s, a), block) in starts.iter().zip(&blocks) {
            images[s..s + a].copy_from_slice(block);
        }
        Permutation { images }
    }))
}

/// Orbit of σ under conjugation by S_α, and the order of its stabilizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitStabilizer {
    pub orbit: BTreeSet<Permutation>,
    pub stab_size: u64,
}

pub fn orbit_stabilizer(sigma: &Permutation, alpha: &MultiIndex) -> Result<OrbitStabilizer> {
    if sigma.n() != alpha.weight() {
        return Err(Error::domain(format!(
            "permutation of degree {} vs |alpha| = {}",
            sigma.n(),
            alpha.weight()
        )));
    }
    let mut orbit = BTreeSet::new();
    let mut stab_size = 0u64;
    for gamma in young_subgroup_elements(alpha)? {
        let conj = gamma.compose(sigma).compose(&gamma.inverse());
        if &conj == sigma {
            stab_size += 1;
        }
        orbit.insert(conj);
    }
    Ok(OrbitStabilizer { orbit, stab_size })
}

/// p_{σ,α}(𝒳) = tr(ρ(σ⁻¹) ∘ 𝒳^{⊗α}). Position i carries the matrix of its block;
/// each cycle (i σ(i) σ²(i) …) of σ contributes tr(X_{b(i)} X_{b(σ(i))} ⋯).
pub fn trace_monomial(sigma: &Permutation, alpha: &MultiIndex, x: &MatrixTuple) -> Result<Complex64> {
    if sigma.n() != alpha.weight() {
        return Err(Error::domain(format!(
            "permutation of degree {} vs |alpha| = {}",
            sigma.n(),
            alpha.weight()
        )));
    }
    if alpha.g() != x.g() {
        return Err(Error::domain(format!(
            "multi-index has {} entries but tuple has {} matrices",
            alpha.g(),
            x.g()
        )));
    }
    Ok(trace_monomial_unchecked(sigma, &alpha.blocks(), x))
}

pub(crate) fn trace_monomial_unchecked(sigma: &Permutation, blocks: &[usize], x: &MatrixTuple) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    if x.k() == 1 {
        for &b in blocks {
            acc *= x.get(b)[(0, 0)];
        }
        return acc;
    }
    for cycle in sigma.cycles() {
        let mut word: CMatrix = x.get(blocks[cycle[0]]).clone();
        for &i in &cycle[1..] {
            word *= x.get(blocks[i]);
        }
        acc *= word.trace();
    }
    acc
}
