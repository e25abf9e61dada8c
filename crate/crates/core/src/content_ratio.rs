//! Content ratios C_λ(d)/(C_μ(d)C_ν(d)), the row-update walk that maximizes
//! them, and exhaustive checks of the (n+1)^{k²} bound.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Pow;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lr::{lr_coefficient, split_chains};
use crate::numbers::{serde_biguint, serde_rational};
use crate::partitions::{enumerate_partitions, subpartitions_of_weight, Partition};
use crate::symgroup::MultiIndex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReport {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
    pub d: usize,
    #[serde(with = "serde_rational")]
    pub ratio: BigRational,
    #[serde(with = "serde_biguint")]
    pub bound: BigUint,
    pub satisfies: bool,
    pub is_special_form: bool,
}

impl RatioReport {
    fn new(lambda: &Partition, mu: Partition, nu: Partition, d: usize, ratio: BigRational, bound: BigUint) -> Self {
        let satisfies = ratio <= BigRational::from_integer(BigInt::from(bound.clone()));
        let is_special_form = &mu.add(&nu) == lambda;
        RatioReport {
            lambda: lambda.clone(),
            mu,
            nu,
            d,
            ratio,
            bound,
            satisfies,
            is_special_form,
        }
    }
}

/// r^λ_{μν}(d) = C_λ(d)/(C_μ(d)·C_ν(d)).
pub fn content_ratio(lambda: &Partition, mu: &Partition, nu: &Partition, d: usize) -> Result<BigRational> {
    if lambda.height() > d {
        return Err(Error::domain(format!("ht({lambda}) = {} exceeds d = {d}", lambda.height())));
    }
    if mu.height() > d || nu.height() > d {
        return Err(Error::domain(format!("ht of {mu} or {nu} exceeds d = {d}")));
    }
    Ok(BigRational::new(
        lambda.content_polynomial(d),
        mu.content_polynomial(d) * nu.content_polynomial(d),
    ))
}

/// The differences λ_i − μ_i sorted descending, zeros dropped.
pub fn rows_of_skew(lambda: &Partition, mu: &Partition) -> Result<Partition> {
    if !mu.is_subpartition_of(lambda) {
        return Err(Error::domain(format!("{mu} is not contained in {lambda}")));
    }
    Ok(Partition::from_unsorted(
        (0..lambda.height()).map(|i| lambda.part(i) - mu.part(i)).collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Update {
    /// Add a box to row i0+1 of μ.
    A,
    /// Remove a box from row i0 of μ.
    B,
}

/// Smallest row i0 (1-based) with λ_{i0} − μ_{i0} < λ_{i0+1} − μ_{i0+1}.
pub fn violating_row(lambda: &Partition, mu: &Partition) -> Option<usize> {
    (1..lambda.height()).find(|&i| {
        lambda.part(i - 1) - mu.part(i - 1) < lambda.part(i) - mu.part(i)
    })
}

/// One update of μ at row i0 (1-based). Returns (μ̂, rows(λ/μ̂)).
pub fn update_step(lambda: &Partition, mu: &Partition, i0: usize, variant: Update) -> Result<(Partition, Partition)> {
    if !mu.is_subpartition_of(lambda) {
        return Err(Error::domain(format!("{mu} is not contained in {lambda}")));
    }
    if i0 == 0 || i0 >= lambda.height() {
        return Err(Error::domain(format!("row {i0} has no successor in {lambda}")));
    }
    let (a, b) = (i0 - 1, i0);
    if lambda.part(a) - mu.part(a) >= lambda.part(b) - mu.part(b) {
        return Err(Error::domain(format!(
            "row differences of {lambda}/{mu} do not increase at row {i0}"
        )));
    }
    let mut parts: Vec<usize> = (0..lambda.height()).map(|i| mu.part(i)).collect();
    match variant {
        Update::A => parts[b] += 1,
        Update::B => {
            if parts[a] == 0 {
                return Err(Error::domain(format!("update B empties a missing box at row {i0}")));
            }
            parts[a] -= 1;
        }
    }
    let valid_shape = parts.windows(2).all(|w| w[0] >= w[1]);
    let hat = Partition::from_unsorted(parts.clone());
    if !valid_shape || parts.iter().zip(lambda.parts()).any(|(m, l)| m > l) {
        return Err(Error::domain(format!("update {variant:?} at row {i0} leaves the shape {lambda}")));
    }
    let nu = rows_of_skew(lambda, &hat)?;
    Ok((hat, nu))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStep {
    pub mu: Partition,
    pub nu: Partition,
    #[serde(with = "serde_rational")]
    pub ratio: BigRational,
    /// The update that produced this step; `None` for the start.
    pub update: Option<Update>,
}

/// From (μ, rows(λ/μ)), repeatedly apply whichever of updates A/B raises the
/// ratio more at the smallest violating row, until λ = μ + ν.
pub fn greedy_walk(lambda: &Partition, mu: &Partition, d: usize) -> Result<Vec<WalkStep>> {
    let mut mu = mu.clone();
    let mut nu = rows_of_skew(lambda, &mu)?;
    let mut ratio = content_ratio(lambda, &mu, &nu, d)?;
    let mut steps = vec![WalkStep { mu: mu.clone(), nu: nu.clone(), ratio: ratio.clone(), update: None }];
    let limit = (lambda.weight() + 1).pow(2);
    while let Some(i0) = violating_row(lambda, &mu) {
        if steps.len() > limit {
            return Err(Error::Numeric(format!("walk on {lambda} did not terminate in {limit} steps")));
        }
        let mut best: Option<(Partition, Partition, BigRational, Update)> = None;
        for variant in [Update::A, Update::B] {
            let Ok((m, n)) = update_step(lambda, &mu, i0, variant) else { continue };
            let r = content_ratio(lambda, &m, &n, d)?;
            if r > ratio && best.as_ref().is_none_or(|b| r > b.2) {
                best = Some((m, n, r, variant));
            }
        }
        let Some((m, n, r, v)) = best else {
            return Err(Error::Numeric(format!(
                "no update raises the ratio for {lambda}/{mu} at row {i0}"
            )));
        };
        mu = m;
        nu = n;
        ratio = r;
        steps.push(WalkStep { mu: mu.clone(), nu: nu.clone(), ratio: ratio.clone(), update: Some(v) });
    }
    Ok(steps)
}

/// (n+1)^{k²}.
pub fn ratio_bound(n: usize, k: usize) -> BigUint {
    BigUint::from(n + 1).pow((k * k) as u32)
}

/// All (μ, ν) with c^λ_{μν} > 0 and |μ| = a.
fn admissible_pairs(lambda: &Partition, a: usize) -> Vec<(Partition, Partition)> {
    let n = lambda.weight();
    let nus = subpartitions_of_weight(lambda, n - a);
    let mut out = Vec::new();
    for mu in subpartitions_of_weight(lambda, a) {
        for nu in &nus {
            if lr_coefficient(lambda, &mu, nu) > 0 {
                out.push((mu.clone(), nu.clone()));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxRatio {
    /// First maximizer in enumeration order; its bound is (n+1)^{wd(λ)²}.
    pub best: RatioReport,
    pub maximizers: usize,
    /// Every maximizer has λ = μ + ν.
    pub all_special_form: bool,
}

fn max_over(lambda: &Partition, d: usize, sizes: impl Iterator<Item = usize>) -> Result<MaxRatio> {
    if lambda.height() > d {
        return Err(Error::domain(format!("ht({lambda}) = {} exceeds d = {d}", lambda.height())));
    }
    let mut best: Option<(BigRational, Vec<(Partition, Partition)>)> = None;
    for a in sizes {
        for (mu, nu) in admissible_pairs(lambda, a) {
            let r = content_ratio(lambda, &mu, &nu, d)?;
            match &mut best {
                Some((br, list)) if r == *br => list.push((mu, nu)),
                Some((br, _)) if r < *br => {}
                _ => best = Some((r, vec![(mu, nu)])),
            }
        }
    }
    let (ratio, list) = best.ok_or_else(|| Error::domain(format!("no admissible splits of {lambda}")))?;
    let all_special_form = list.iter().all(|(m, n)| &m.add(n) == lambda);
    let maximizers = list.len();
    let (mu, nu) = list.into_iter().next().expect("nonempty");
    let bound = ratio_bound(lambda.weight(), lambda.width());
    Ok(MaxRatio {
        best: RatioReport::new(lambda, mu, nu, d, ratio, bound),
        maximizers,
        all_special_form,
    })
}

/// Exhaustive maximum of the content ratio over every split |μ| + |ν| = |λ|
/// with nonzero LR coefficient. Cost grows quickly past |λ| ≈ 12.
pub fn max_ratio_search(lambda: &Partition, d: usize) -> Result<MaxRatio> {
    max_over(lambda, d, 0..=lambda.weight())
}

/// Exhaustive maximum restricted to |μ| = a.
pub fn max_ratio_for_split(lambda: &Partition, a: usize, d: usize) -> Result<MaxRatio> {
    if a > lambda.weight() {
        return Err(Error::domain(format!("split size {a} exceeds |{lambda}|")));
    }
    max_over(lambda, d, std::iter::once(a))
}

/// One report per (λ, μ, ν) with λ ⊢ n, wd(λ) ≤ k, ht(λ) ≤ d and c^λ_{μν} > 0,
/// checked against (n+1)^{k²}.
pub fn verify_bound(n: usize, k: usize, d: usize) -> Result<Vec<RatioReport>> {
    if d == 0 || k > n || n > k * d {
        return Err(Error::domain(format!("need k <= n <= k*d, got n={n}, k={k}, d={d}")));
    }
    let bound = ratio_bound(n, k);
    let lambdas = enumerate_partitions(n, Some(d), Some(k));
    let per: Vec<Result<Vec<RatioReport>>> = lambdas
        .par_iter()
        .map(|lambda| {
            let mut out = Vec::new();
            for a in 0..=n {
                for (mu, nu) in admissible_pairs(lambda, a) {
                    let r = content_ratio(lambda, &mu, &nu, d)?;
                    out.push(RatioReport::new(lambda, mu, nu, d, r, bound.clone()));
                }
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub lambda: Partition,
    pub alpha: MultiIndex,
    pub mus: Vec<Partition>,
    pub d: usize,
    #[serde(with = "serde_rational")]
    pub ratio: BigRational,
    #[serde(with = "serde_biguint")]
    pub bound: BigUint,
    pub satisfies: bool,
}

/// For each λ ⊢ n (wd ≤ k, ht ≤ d), each α with g entries and each split chain
/// with nonzero coefficient: C_λ(d)/Π C_{μ^i}(d) ≤ (n+1)^{(g−1)k²}.
pub fn verify_chain_bound(n: usize, k: usize, d: usize, g: usize) -> Result<Vec<ChainReport>> {
    if d == 0 || g == 0 || k > n || n > k * d {
        return Err(Error::domain(format!("need k <= n <= k*d and g >= 1, got n={n}, k={k}, d={d}, g={g}")));
    }
    let bound = BigUint::from(n + 1).pow(((g - 1) * k * k) as u32);
    let bound_q = BigRational::from_integer(BigInt::from(bound.clone()));
    let alphas = MultiIndex::all_of_weight(g, n);
    let mut out = Vec::new();
    for lambda in enumerate_partitions(n, Some(d), Some(k)) {
        let cl = lambda.content_polynomial(d);
        for alpha in &alphas {
            for chain in split_chains(&lambda, alpha).iter() {
                let den: BigInt = chain.mus.iter().map(|m| m.content_polynomial(d)).product();
                let ratio = BigRational::new(cl.clone(), den);
                out.push(ChainReport {
                    lambda: lambda.clone(),
                    alpha: alpha.clone(),
                    mus: chain.mus.clone(),
                    d,
                    satisfies: ratio <= bound_q,
                    ratio,
                    bound: bound.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Helper for callers that only need to know whether a report list passed.
pub fn all_satisfied(reports: &[RatioReport]) -> bool {
    reports.iter().all(|r| r.satisfies)
}
