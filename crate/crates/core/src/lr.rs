//! Littlewood–Richardson coefficients and restriction of S_n characters to
//! Young subgroups.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::partitions::{subpartitions_of_weight, Partition};
use crate::symgroup::MultiIndex;

/// One term c^λ_{μν} of the two-block splitting rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTerm {
    pub mu: Partition,
    pub nu: Partition,
    pub coeff: u64,
}

/// A right-nested chain (μ^1, …, μ^g) with the summed product of LR coefficients
/// over all intermediate ν's. `coeff` is the multiplicity of χ_{μ^1}⊗⋯⊗χ_{μ^g}
/// in the restriction of χ_λ to S_α.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitChain {
    pub mus: Vec<Partition>,
    pub coeff: u64,
}

type LrKey = (Partition, Partition, Partition);

fn lr_cache() -> &'static DashMap<LrKey, u64> {
    static CACHE: OnceLock<DashMap<LrKey, u64>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

type ChainMap = DashMap<(Partition, Vec<usize>), Arc<Vec<SplitChain>>>;

fn chain_cache() -> &'static ChainMap {
    static CACHE: OnceLock<ChainMap> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// c^λ_{μν}: the number of skew tableaux of shape λ/μ and content ν whose
/// reverse reading word is a lattice word.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if mu.weight() + nu.weight() != lambda.weight()
        || !mu.is_subpartition_of(lambda)
        || !nu.is_subpartition_of(lambda)
    {
        return 0;
    }
    if mu.is_empty() {
        return u64::from(nu == lambda);
    }
    if nu.is_empty() {
        return u64::from(mu == lambda);
    }
    let key = (lambda.clone(), mu.clone(), nu.clone());
    if let Some(v) = lr_cache().get(&key) {
        return *v;
    }
    // Fewer distinct letters make the search much narrower; the coefficient is
    // invariant under conjugating all three shapes.
    let value = if nu.height() > nu.width() {
        count_lr_tableaux(&lambda.conjugate(), &mu.conjugate(), &nu.conjugate())
    } else {
        count_lr_tableaux(lambda, mu, nu)
    };
    lr_cache().insert(key, value);
    value
}

struct Search<'a> {
    lam: &'a [usize],
    mu: Vec<usize>,
    nu: &'a [usize],
    cells: Vec<(usize, usize)>,
    fill: Vec<Vec<usize>>,
    count: Vec<usize>,
}

fn count_lr_tableaux(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    let lam = lambda.parts();
    let mu_p: Vec<usize> = (0..lam.len()).map(|i| mu.part(i)).collect();
    let mut cells = Vec::new();
    for (i, &l) in lam.iter().enumerate() {
        for j in (mu_p[i]..l).rev() {
            cells.push((i, j));
        }
    }
    let mut s = Search {
        lam,
        mu: mu_p,
        nu: nu.parts(),
        cells,
        fill: lam.iter().map(|&l| vec![usize::MAX; l]).collect(),
        count: vec![0; nu.height()],
    };
    place(&mut s, 0)
}

fn place(s: &mut Search<'_>, idx: usize) -> u64 {
    if idx == s.cells.len() {
        return 1;
    }
    let (i, j) = s.cells[idx];
    let mut hi = s.nu.len().min(i + 1);
    if j + 1 < s.lam[i] {
        hi = hi.min(s.fill[i][j + 1] + 1);
    }
    let lo = if i > 0 && j >= s.mu[i - 1] {
        s.fill[i - 1][j] + 1
    } else {
        0
    };
    let mut total = 0;
    for v in lo..hi {
        if s.count[v] >= s.nu[v] || (v > 0 && s.count[v] >= s.count[v - 1]) {
            continue;
        }
        s.count[v] += 1;
        s.fill[i][j] = v;
        total += place(s, idx + 1);
        s.count[v] -= 1;
    }
    s.fill[i][j] = usize::MAX;
    total
}

/// All (μ ⊢ a1, ν ⊢ a2) with c^λ_{μν} > 0.
pub fn split_pairs(lambda: &Partition, a1: usize, a2: usize) -> Vec<SplitTerm> {
    if a1 + a2 != lambda.weight() {
        return Vec::new();
    }
    let nus = subpartitions_of_weight(lambda, a2);
    let mut out = Vec::new();
    for mu in subpartitions_of_weight(lambda, a1) {
        for nu in &nus {
            let coeff = lr_coefficient(lambda, &mu, nu);
            if coeff > 0 {
                out.push(SplitTerm { mu: mu.clone(), nu: nu.clone(), coeff });
            }
        }
    }
    out
}

/// Restriction of χ_λ to S_α by right-nested splitting: split off α_1, then
/// recurse on the ν-part with (α_2, …, α_g). Chains are aggregated by (μ^1,…,μ^g).
pub fn split_chains(lambda: &Partition, alpha: &MultiIndex) -> Arc<Vec<SplitChain>> {
    if lambda.weight() != alpha.weight() || alpha.g() == 0 {
        return Arc::new(Vec::new());
    }
    let key = (lambda.clone(), alpha.entries().to_vec());
    if let Some(v) = chain_cache().get(&key) {
        return Arc::clone(&v);
    }
    let entries = alpha.entries();
    let result = if entries.len() == 1 {
        vec![SplitChain { mus: vec![lambda.clone()], coeff: 1 }]
    } else {
        let rest = MultiIndex::new(entries[1..].to_vec());
        let mut acc: BTreeMap<Vec<Partition>, u64> = BTreeMap::new();
        for term in split_pairs(lambda, entries[0], lambda.weight() - entries[0]) {
            for tail in split_chains(&term.nu, &rest).iter() {
                let mut mus = Vec::with_capacity(entries.len());
                mus.push(term.mu.clone());
                mus.extend(tail.mus.iter().cloned());
                *acc.entry(mus).or_insert(0) += term.coeff * tail.coeff;
            }
        }
        acc.into_iter().map(|(mus, coeff)| SplitChain { mus, coeff }).collect()
    };
    let result = Arc::new(result);
    chain_cache().insert(key, Arc::clone(&result));
    result
}

/// Σ over chains of (Π LR coefficients)·(Π χ_{μ^i}(1))/χ_λ(1). Equals 1: it is the
/// dimension count of the restriction of χ_λ to S_α.
pub fn splitting_identity_value(lambda: &Partition, alpha: &MultiIndex) -> BigRational {
    let mut num = BigInt::zero();
    for chain in split_chains(lambda, alpha).iter() {
        let dims: BigInt = chain
            .mus
            .iter()
            .map(|m| BigInt::from(m.irrep_dimension()))
            .product();
        num += dims * BigInt::from(chain.coeff);
    }
    BigRational::new(num, BigInt::from(lambda.irrep_dimension()))
}
