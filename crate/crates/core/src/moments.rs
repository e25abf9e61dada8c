//! Exact finite-d moments, large-d limits, homogeneous expansion terms,
//! spectral radii of matrix tuples and conic asymptotic constants.

use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lr::split_chains;
use crate::matrices::{det, CMatrix, MatrixTuple};
use crate::numbers::{
    gauss_conj, gauss_from_rat, gauss_norm_sqr, gauss_one, gauss_to_c64, gauss_zero,
    parse_complex_list, serde_opt_gauss, to_f64, GaussRat,
};
use crate::partitions::{enumerate_partitions, factorial, Partition};
use crate::symgroup::{all_permutations, trace_monomial_unchecked, MultiIndex};

/// Largest n accepted by `homogeneous_coefficient` by default (cost n!·#α).
pub const DEFAULT_HOMOGENEOUS_CAP: usize = 8;

/// Largest d for which `exact_identity_moment` sums all kd + 1 degrees without
/// an explicit `n_max`.
pub const FULL_SUM_MAX_D: usize = 12;

/// A point (x_1, …, x_g) of ℂ^g, optionally carrying exact Gaussian-rational values.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarTuple {
    values: Vec<Complex64>,
    exact: Option<Vec<GaussRat>>,
}

#[derive(Serialize, Deserialize)]
struct ScalarTupleRepr {
    values: Vec<[f64; 2]>,
    exact: Option<Vec<String>>,
}

impl Serialize for ScalarTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScalarTupleRepr {
            values: self.values.iter().map(|z| [z.re, z.im]).collect(),
            exact: self
                .exact
                .as_ref()
                .map(|v| v.iter().map(crate::numbers::format_gauss).collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ScalarTupleRepr::deserialize(d)?;
        match repr.exact {
            Some(strs) => {
                let exact = strs
                    .iter()
                    .map(|s| crate::numbers::parse_complex(s))
                    .collect::<Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                ScalarTuple::from_exact(exact).map_err(D::Error::custom)
            }
            None => ScalarTuple::new(repr.values.iter().map(|v| Complex64::new(v[0], v[1])).collect())
                .map_err(D::Error::custom),
        }
    }
}

impl ScalarTuple {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("scalar tuple needs g >= 1 coordinates"));
        }
        Ok(ScalarTuple { values, exact: None })
    }

    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_exact(exact: Vec<GaussRat>) -> Result<Self> {
        if exact.is_empty() {
            return Err(Error::domain("scalar tuple needs g >= 1 coordinates"));
        }
        Ok(ScalarTuple {
            values: exact.iter().map(gauss_to_c64).collect(),
            exact: Some(exact),
        })
    }

    /// Comma-separated `re` / `re+imi` tokens; the result is exact.
    pub fn parse(s: &str) -> Result<Self> {
        Self::from_exact(parse_complex_list(s)?)
    }

    pub fn g(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn exact(&self) -> Option<&[GaussRat]> {
        self.exact.as_deref()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨x, y⟩ = Σ x_j·conj(y_j).
    pub fn inner(&self, other: &ScalarTuple) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn with_zero_appended(&self) -> Self {
        let mut values = self.values.clone();
        values.push(Complex64::new(0.0, 0.0));
        let exact = self.exact.clone().map(|mut e| {
            e.push(gauss_zero());
            e
        });
        ScalarTuple { values, exact }
    }

    /// Divides every coordinate by `c`; exactness is kept only when `c` is exact.
    pub fn scaled_by_inverse(&self, c: Complex64, exact_c: Option<&GaussRat>) -> Self {
        let values = self.values.iter().map(|z| z / c).collect();
        let exact = match (&self.exact, exact_c) {
            (Some(e), Some(c)) if !gauss_norm_sqr(c).is_zero() => {
                let n = gauss_norm_sqr(c);
                let inv = GaussRat::new(&c.re / &n, -&c.im / &n);
                Some(e.iter().map(|z| z * &inv).collect())
            }
            _ => None,
        };
        ScalarTuple { values, exact }
    }
}

/// A moment value: exact Gaussian rational when available, its float rounding,
/// and a truncation bound when the series was cut short.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentValue {
    #[serde(rename = "float")]
    pub re: f64,
    pub imag: f64,
    #[serde(with = "serde_opt_gauss")]
    pub exact: Option<GaussRat>,
    pub trunc_bound: Option<f64>,
    pub d: usize,
    pub k: usize,
    pub g: usize,
}

impl MomentValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.imag)
    }

    fn from_parts(
        exact: Option<GaussRat>,
        float: Complex64,
        trunc_bound: Option<f64>,
        d: usize,
        k: usize,
        g: usize,
    ) -> Self {
        let float = exact.as_ref().map(gauss_to_c64).unwrap_or(float);
        MomentValue { re: float.re, imag: float.im, exact, trunc_bound, d, k, g }
    }
}

fn falling_factorials(d: usize, upto: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(upto + 1);
    let mut acc = BigInt::one();
    out.push(acc.clone());
    for i in 0..upto {
        acc *= BigInt::from(d as i64 - i as i64);
        out.push(acc.clone());
    }
    out
}

/// c(d, α) = binom(d,n)·binom(n,α)/Π binom(d,α_j) = d^{(n)}/Π d^{(α_j)} with
/// falling factorials; 0 when n > d.
pub fn c_coefficient(d: usize, alpha: &MultiIndex) -> BigRational {
    let n = alpha.weight();
    if n > d {
        return BigRational::zero();
    }
    let ff = falling_factorials(d, n);
    let den: BigInt = alpha.entries().iter().map(|&a| ff[a].clone()).product();
    BigRational::new(ff[n].clone(), den)
}

/// Σ_{n=0}^{d} Σ_{|α|=n} c(d,α)·binom(n,α)·x^α·conj(y)^α.
pub fn exact_scalar_moment(d: usize, x: &ScalarTuple, y: &ScalarTuple) -> Result<MomentValue> {
    scalar_moment_upto(d, x, y, d)
}

/// The scalar moment summed over n ≤ n_max only. Each omitted degree is bounded
/// by ρ^n with ρ = Σ|x_j||y_j| since c(d,α) ≤ 1.
pub fn scalar_moment_truncated(d: usize, x: &ScalarTuple, y: &ScalarTuple, n_max: usize) -> Result<MomentValue> {
    let mut v = scalar_moment_upto(d, x, y, n_max.min(d))?;
    if n_max < d {
        let rho: f64 = x.values.iter().zip(&y.values).map(|(a, b)| a.norm() * b.norm()).sum();
        v.trunc_bound = Some(geometric_tail(rho, n_max + 1, d));
    }
    Ok(v)
}

/// Σ_{n=from}^{to} ρ^n.
fn geometric_tail(rho: f64, from: usize, to: usize) -> f64 {
    if from > to {
        return 0.0;
    }
    if (rho - 1.0).abs() < 1e-15 {
        return (to - from + 1) as f64;
    }
    rho.powi(from as i32) * (1.0 - rho.powi((to - from + 1) as i32)) / (1.0 - rho)
}

fn scalar_moment_upto(d: usize, x: &ScalarTuple, y: &ScalarTuple, n_top: usize) -> Result<MomentValue> {
    if d == 0 {
        return Err(Error::domain("d must be at least 1"));
    }
    if x.g() != y.g() {
        return Err(Error::domain(format!("x has {} coordinates, y has {}", x.g(), y.g())));
    }
    let g = x.g();
    let ff = falling_factorials(d, n_top);
    let fact: Vec<BigInt> = (0..=n_top).map(|i| BigInt::from(factorial(i))).collect();
    // c·binom(n,α) = d^{(n)}·n! / Π (d^{(α_j)}·α_j!)
    let weight = |alpha: &MultiIndex| -> BigRational {
        let n = alpha.weight();
        let den: BigInt = alpha.entries().iter().map(|&a| &ff[a] * &fact[a]).product();
        BigRational::new(&ff[n] * &fact[n], den)
    };
    let per_degree = |n: usize| -> Vec<MultiIndex> { MultiIndex::all_of_weight(g, n) };

    match (x.exact(), y.exact()) {
        (Some(xe), Some(ye)) => {
            let z: Vec<GaussRat> = xe.iter().zip(ye).map(|(a, b)| a * gauss_conj(b)).collect();
            let pows: Vec<Vec<GaussRat>> = z
                .iter()
                .map(|zj| {
                    let mut v = vec![gauss_one()];
                    for i in 0..n_top {
                        let next = &v[i] * zj;
                        v.push(next);
                    }
                    v
                })
                .collect();
            let total = (0..=n_top)
                .into_par_iter()
                .map(|n| {
                    let mut acc = gauss_zero();
                    for alpha in per_degree(n) {
                        let mut mono = gauss_from_rat(weight(&alpha));
                        for (j, &a) in alpha.entries().iter().enumerate() {
                            mono = &mono * &pows[j][a];
                        }
                        acc += mono;
                    }
                    acc
                })
                .collect::<Vec<_>>()
                .into_iter()
                .fold(gauss_zero(), |a, b| a + b);
            Ok(MomentValue::from_parts(Some(total), Complex64::default(), None, d, 1, g))
        }
        _ => {
            let z: Vec<Complex64> = x.values.iter().zip(&y.values).map(|(a, b)| a * b.conj()).collect();
            let total: Complex64 = (0..=n_top)
                .into_par_iter()
                .map(|n| {
                    per_degree(n)
                        .iter()
                        .map(|alpha| {
                            let mono: Complex64 = alpha
                                .entries()
                                .iter()
                                .zip(&z)
                                .map(|(&a, zj)| zj.powu(a as u32))
                                .product();
                            mono * to_f64(&weight(alpha))
                        })
                        .sum::<Complex64>()
                })
                .collect::<Vec<_>>()
                .into_iter()
                .sum();
            Ok(MomentValue::from_parts(None, total, None, d, 1, g))
        }
    }
}

/// 1/(1 − ⟨x,y⟩) for ‖x‖, ‖y‖ < 1.
pub fn scalar_limit(x: &ScalarTuple, y: &ScalarTuple) -> Result<Complex64> {
    if x.g() != y.g() {
        return Err(Error::domain(format!("x has {} coordinates, y has {}", x.g(), y.g())));
    }
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::domain("the limit needs ||x||, ||y|| < 1"));
    }
    Ok(Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - x.inner(y)))
}

type BracketKey = (usize, usize, Partition);

fn bracket_cache() -> &'static DashMap<BracketKey, Arc<BigRational>> {
    static CACHE: OnceLock<DashMap<BracketKey, Arc<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// The combinatorial factor multiplying binom(n,α)·|x|^{2α} in the identity
/// coefficient moment:
/// Σ_{λ ⊢ n, wd ≤ k, ht ≤ d} s_{λ*}(k)² Σ_chains (Π LR)(Π χ_{μ^i}(1)/χ_λ(1))·C_λ(d)/Π C_{μ^i}(d).
/// Depends on α only through its sorted nonzero entries.
pub fn identity_bracket(d: usize, k: usize, alpha: &MultiIndex) -> Arc<BigRational> {
    let shape = alpha.shape();
    let key = (d, k, shape.clone());
    if let Some(v) = bracket_cache().get(&key) {
        return Arc::clone(&v);
    }
    let n = shape.weight();
    let sorted = MultiIndex::new(if shape.is_empty() { vec![0] } else { shape.parts().to_vec() });
    let mut total = BigRational::zero();
    for lambda in enumerate_partitions(n, Some(d), Some(k)) {
        let s = BigInt::from(lambda.conjugate().schur_at_ones(k));
        let cl = lambda.content_polynomial(d);
        let dim_l = BigInt::from(lambda.irrep_dimension());
        let mut inner_num = BigRational::zero();
        for chain in split_chains(&lambda, &sorted).iter() {
            let dims: BigInt = chain.mus.iter().map(|m| BigInt::from(m.irrep_dimension())).product();
            let cont: BigInt = chain.mus.iter().map(|m| m.content_polynomial(d)).product();
            inner_num += BigRational::new(BigInt::from(chain.coeff) * dims * &cl, cont);
        }
        total += inner_num * BigRational::new(&s * &s, dim_l);
    }
    let total = Arc::new(total);
    bracket_cache().insert(key, Arc::clone(&total));
    total
}

/// Options for `exact_identity_moment_with`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityMomentOptions {
    /// Highest degree summed; `None` sums all kd + 1 degrees (allowed for d ≤ 12).
    pub n_max: Option<usize>,
    /// Multiplier on the per-degree tail estimate.
    pub tail_constant: f64,
}

impl Default for IdentityMomentOptions {
    fn default() -> Self {
        IdentityMomentOptions { n_max: None, tail_constant: 1.0 }
    }
}

/// Bound on the degree-n contribution for k ≥ 1 and n ≥ k:
/// C·n^k·n^{k²−k}·(n+1)^{k²}·r^{2n} (partition count × s_{λ*}(k)² × content ratio).
pub fn identity_degree_bound(n: usize, k: usize, r: f64, tail_constant: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let (nf, kf) = (n as f64, k as f64);
    let log = tail_constant.ln() + kf * kf * nf.ln() + kf * kf * (nf + 1.0).ln() + 2.0 * nf * r.ln();
    log.exp()
}

/// Σ_{n = n_max+1}^{kd} of `identity_degree_bound`.
pub fn identity_tail_bound(d: usize, k: usize, r: f64, n_max: usize, tail_constant: f64) -> f64 {
    let top = k * d;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for n in n_max + 1..=top {
        let t = identity_degree_bound(n, k, r, tail_constant);
        sum += t;
        if t < prev && t < sum * 1e-18 {
            // Terms are log-concave in n, so once they fall this far they keep
            // falling at least geometrically; close the tail with that ratio.
            let ratio = t / prev;
            if ratio < 1.0 {
                sum += t * ratio / (1.0 - ratio);
            }
            break;
        }
        prev = t;
    }
    sum
}

/// Smallest n_max ≥ k whose certified tail is below `tol` (capped at kd).
pub fn auto_identity_truncation(d: usize, k: usize, r: f64, tol: f64, tail_constant: f64) -> usize {
    let top = k * d;
    (k..top)
        .find(|&m| identity_tail_bound(d, k, r, m, tail_constant) <= tol)
        .unwrap_or(top)
}

/// ∫ |det(I_k⊗I_d + Σ x_j I_k⊗U_j)|² over Haar g-tuples, summed over degrees
/// n ≤ min(kd, n_max).
pub fn exact_identity_moment(d: usize, k: usize, x: &ScalarTuple, n_max: Option<usize>) -> Result<MomentValue> {
    exact_identity_moment_with(d, k, x, IdentityMomentOptions { n_max, ..Default::default() })
}

pub fn exact_identity_moment_with(
    d: usize,
    k: usize,
    x: &ScalarTuple,
    opts: IdentityMomentOptions,
) -> Result<MomentValue> {
    if d == 0 || k == 0 {
        return Err(Error::domain("d and k must be at least 1"));
    }
    let top = k * d;
    let r = x.norm();
    let n_top = match opts.n_max {
        None if d > FULL_SUM_MAX_D => {
            return Err(Error::domain(format!(
                "d = {d} > {FULL_SUM_MAX_D} needs an explicit n_max"
            )))
        }
        None => top,
        Some(m) => {
            if r >= 1.0 {
                return Err(Error::domain("truncation needs ||x|| < 1"));
            }
            if m < top && m < k {
                return Err(Error::domain(format!("n_max must be at least k = {k}")));
            }
            m.min(top)
        }
    };
    let g = x.g();
    let alphas: Vec<MultiIndex> = (0..=n_top).flat_map(|n| MultiIndex::all_of_weight(g, n)).collect();
    // Fill the bracket cache in parallel by distinct shape, then combine in order.
    let mut shapes: Vec<MultiIndex> = alphas.iter().map(|a| MultiIndex::new(a.shape().parts().to_vec())).collect();
    shapes.sort();
    shapes.dedup();
    shapes.par_iter().for_each(|s| {
        identity_bracket(d, k, s);
    });

    let trunc_bound = (n_top < top).then(|| identity_tail_bound(d, k, r, n_top, opts.tail_constant));
    match x.exact() {
        Some(xe) => {
            let sq: Vec<BigRational> = xe.iter().map(gauss_norm_sqr).collect();
            let mut total = BigRational::zero();
            for alpha in &alphas {
                let mut term = BigRational::from_integer(BigInt::from(alpha.multinomial()))
                    * identity_bracket(d, k, alpha).as_ref();
                for (j, &a) in alpha.entries().iter().enumerate() {
                    term *= num_traits::pow(sq[j].clone(), a);
                }
                total += term;
            }
            Ok(MomentValue::from_parts(Some(gauss_from_rat(total)), Complex64::default(), trunc_bound, d, k, g))
        }
        None => {
            let sq: Vec<f64> = x.values.iter().map(|z| z.norm_sqr()).collect();
            let total: f64 = alphas
                .iter()
                .map(|alpha| {
                    let coeff = BigRational::from_integer(BigInt::from(alpha.multinomial()))
                        * identity_bracket(d, k, alpha).as_ref();
                    let mono: f64 = alpha.entries().iter().zip(&sq).map(|(&a, s)| s.powi(a as i32)).product();
                    to_f64(&coeff) * mono
                })
                .sum();
            Ok(MomentValue::from_parts(None, Complex64::new(total, 0.0), trunc_bound, d, k, g))
        }
    }
}

/// Σ over split chains of λ along α of (Π LR)·s_λ(d)/Π s_{μ^i}(d)·Π χ_{μ^i}(1)²;
/// 0 when ht(λ) > d.
pub fn trace_projection_expectation(lambda: &Partition, alpha: &MultiIndex, d: usize) -> Result<BigRational> {
    if lambda.weight() != alpha.weight() {
        return Err(Error::domain(format!("|{lambda}| != |alpha| = {}", alpha.weight())));
    }
    if lambda.height() > d {
        return Ok(BigRational::zero());
    }
    let sl = BigInt::from(lambda.schur_at_ones(d));
    let mut total = BigRational::zero();
    for chain in split_chains(lambda, alpha).iter() {
        let den: BigInt = chain.mus.iter().map(|m| BigInt::from(m.schur_at_ones(d))).product();
        let dims: BigInt = chain
            .mus
            .iter()
            .map(|m| {
                let c = BigInt::from(m.irrep_dimension());
                &c * &c
            })
            .product();
        total += BigRational::new(BigInt::from(chain.coeff) * &sl * dims, den);
    }
    Ok(total)
}

/// Degree-n term of the expansion of det(I − Σ X_j⊗conj(Y_j))⁻¹:
/// (1/n!)·Σ_{|α|=n} binom(n,α)·Σ_{σ∈S_n} p_{σ,α}(𝒳)·conj(p_{σ,α}(𝒴)).
pub fn homogeneous_coefficient(n: usize, x: &MatrixTuple, y: &MatrixTuple) -> Result<Complex64> {
    homogeneous_coefficient_capped(n, x, y, DEFAULT_HOMOGENEOUS_CAP)
}

pub fn homogeneous_coefficient_capped(n: usize, x: &MatrixTuple, y: &MatrixTuple, cap: usize) -> Result<Complex64> {
    if x.g() != y.g() {
        return Err(Error::domain(format!("tuples have {} and {} matrices", x.g(), y.g())));
    }
    if n > cap {
        return Err(Error::Resource(format!("degree {n} exceeds the cap {cap} (cost grows like n!)")));
    }
    if let (Some(xs), Some(ys)) = (x.as_scalars(), y.as_scalars()) {
        // p_{σ,α} = x^α for every σ, so the sum collapses to ⟨x,y⟩^n.
        let ip: Complex64 = xs.iter().zip(&ys).map(|(a, b)| a * b.conj()).sum();
        return Ok(ip.powu(n as u32));
    }
    let perms: Vec<_> = all_permutations(n).collect();
    let n_fact = to_f64(&BigRational::from_integer(BigInt::from(factorial(n))));
    let parts: Vec<Complex64> = MultiIndex::all_of_weight(x.g(), n)
        .par_iter()
        .map(|alpha| {
            let blocks = alpha.blocks();
            let s: Complex64 = perms
                .iter()
                .map(|sigma| {
                    trace_monomial_unchecked(sigma, &blocks, x) * trace_monomial_unchecked(sigma, &blocks, y).conj()
                })
                .sum();
            let m = to_f64(&BigRational::from_integer(BigInt::from(alpha.multinomial())));
            s * m
        })
        .collect();
    Ok(parts.into_iter().sum::<Complex64>() / n_fact)
}

/// Value of det(I − Σ X_j⊗conj(Y_j))⁻¹ and the determinant it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixLimit {
    pub value: Complex64,
    pub determinant: Complex64,
    /// |det| < 1e−12: the value is unreliable.
    pub ill_conditioned: bool,
}

/// det(I_k⊗I_{k'} − Σ X_j⊗conj(Y_j))⁻¹, requiring outer spectral radius < 1 for both.
pub fn matrix_limit(x: &MatrixTuple, y: &MatrixTuple) -> Result<MatrixLimit> {
    if x.g() != y.g() {
        return Err(Error::domain(format!("tuples have {} and {} matrices", x.g(), y.g())));
    }
    for (name, t) in [("X", x), ("Y", y)] {
        let r = outer_spectral_radius(t)?;
        if r >= 1.0 {
            return Err(Error::domain(format!("outer spectral radius of {name} is {r} >= 1")));
        }
    }
    let size = x.k() * y.k();
    let mut m = CMatrix::identity(size, size);
    for (a, b) in x.matrices().iter().zip(y.matrices()) {
        m -= a.kronecker(&b.map(|z| z.conj()));
    }
    let determinant = det(&m);
    if determinant == Complex64::new(0.0, 0.0) {
        return Err(Error::Numeric("singular matrix in the limit formula".into()));
    }
    Ok(MatrixLimit {
        value: Complex64::new(1.0, 0.0) / determinant,
        determinant,
        ill_conditioned: determinant.norm() < 1e-12,
    })
}

/// Π_{l,m} 1/(1 − ⟨x_l, y_m⟩).
pub fn diagonal_limit(xs: &[ScalarTuple], ys: &[ScalarTuple]) -> Result<Complex64> {
    let g = xs.first().or(ys.first()).map(|t| t.g()).unwrap_or(0);
    for t in xs.iter().chain(ys) {
        if t.g() != g {
            return Err(Error::domain("all rows must have the same number of coordinates"));
        }
        if t.norm() >= 1.0 {
            return Err(Error::domain("every row needs norm < 1"));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let mut acc = one;
    for a in xs {
        for b in ys {
            acc /= one - a.inner(b);
        }
    }
    Ok(acc)
}

/// ‖Σ X_j X_j*‖^{1/2}.
pub fn row_norm(x: &MatrixTuple) -> f64 {
    let k = x.k();
    let mut s = CMatrix::zeros(k, k);
    for m in x.matrices() {
        s += m * m.adjoint();
    }
    let top = s
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max);
    top.max(0.0).sqrt()
}

const RADIUS_TOL: f64 = 1e-10;
const RADIUS_MAX_ITER: usize = 10_000;

/// rad(Σ X_j⊗conj(X_j))^{1/2}, by power iteration of T ↦ Σ X_j T X_j* from T = I.
/// The map is completely positive, so its spectral radius is attained on the
/// positive cone and tr Φ(T)/tr T converges to it.
pub fn outer_spectral_radius(x: &MatrixTuple) -> Result<f64> {
    let k = x.k();
    let mut t: CMatrix = DMatrix::identity(k, k) / Complex64::new(k as f64, 0.0);
    let mut prev = f64::NAN;
    for iter in 1..=RADIUS_MAX_ITER {
        let mut next = CMatrix::zeros(k, k);
        for m in x.matrices() {
            next += m * &t * m.adjoint();
        }
        let tr = next.trace().re;
        if tr <= f64::MIN_POSITIVE {
            return Ok(0.0);
        }
        // t has unit trace, so the ratio is tr(next).
        let ratio = tr;
        t = next / Complex64::new(tr, 0.0);
        if (ratio - prev).abs() <= RADIUS_TOL * ratio.max(1e-300) {
            return Ok(ratio.sqrt());
        }
        if iter == RADIUS_MAX_ITER {
            return Err(Error::Numeric(format!(
                "outer spectral radius did not converge after {iter} iterations"
            )));
        }
        prev = ratio;
    }
    unreachable!()
}

/// Constants of the conic asymptotic log ∫|det(x0 U_0 + Σ x_j U_j)|^{2k} ≈ d·k·c0 + k²·c1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicConstants {
    pub c0: f64,
    pub c1: f64,
    pub k: usize,
}

impl ConicConstants {
    pub fn predicted_log_moment(&self, d: usize) -> f64 {
        let k = self.k as f64;
        d as f64 * k * self.c0 + k * k * self.c1
    }
}

/// c0 = log|x0|², c1 = log(|x0|²/(|x0|² − Σ|x_j|²)); needs |x0|² > Σ|x_j|².
pub fn conic_constants(x0: Complex64, x: &ScalarTuple, k: usize) -> Result<ConicConstants> {
    let a = x0.norm_sqr();
    let b: f64 = x.values.iter().map(|z| z.norm_sqr()).sum();
    if a <= b {
        return Err(Error::domain(format!("not conic: |x0|^2 = {a} <= sum |x_j|^2 = {b}")));
    }
    Ok(ConicConstants { c0: a.ln(), c1: (a / (a - b)).ln(), k })
}

/// log ∫|det(x0 I⊗U_0 + Σ x_j I_k⊗U_j)|² for the conic pencil, evaluated as
/// d·k·log|x0|² + log of the identity-coefficient moment at x/x0. Returns the
/// value and the certified truncation bound on the moment (absolute).
pub fn conic_log_moment(d: usize, k: usize, x0: Complex64, x: &ScalarTuple, tol: f64) -> Result<(f64, Option<f64>)> {
    let consts = conic_constants(x0, x, k)?;
    let xt = x.scaled_by_inverse(x0, None);
    let n_max = if d <= FULL_SUM_MAX_D {
        None
    } else {
        Some(auto_identity_truncation(d, k, xt.norm(), tol, 1.0))
    };
    let m = exact_identity_moment(d, k, &xt, n_max)?;
    Ok((d as f64 * k as f64 * consts.c0 + m.re.ln(), m.trunc_bound))
}
