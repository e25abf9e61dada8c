//! Brute-force oracles checked against the library.

use std::collections::BTreeMap;

use approx::assert_relative_eq;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pencil_core::content_ratio::{content_ratio, greedy_walk, ratio_bound, rows_of_skew, violating_row};
use pencil_core::haar_mc::estimate_mixed_trace_pair;
use pencil_core::lr::lr_coefficient;
use pencil_core::matrices::{kron, CMatrix, MatrixTuple};
use pencil_core::moments::{
    auto_identity_truncation, c_coefficient, exact_identity_moment, exact_scalar_moment, outer_spectral_radius,
};
use pencil_core::partitions::{enumerate_partitions, factorial, Partition};
use pencil_core::symgroup::{all_permutations, character, trace_monomial, MultiIndex, Permutation};
use pencil_core::ScalarTuple;

fn rand_matrix(rng: &mut ChaCha8Rng, k: usize) -> CMatrix {
    CMatrix::from_fn(k, k, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn all_partitions_upto(n: usize) -> Vec<Partition> {
    (0..=n).flat_map(|m| enumerate_partitions(m, None, None)).collect()
}

/// tr((A_1⊗…⊗A_n)·Q) with Q e_{i_1…i_n} = e_{i_σ(1)…i_σ(n)}, built densely.
fn dense_trace(sigma: &Permutation, mats: &[CMatrix]) -> Complex64 {
    let n = mats.len();
    let k = mats[0].nrows();
    let mut big = CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for m in mats {
        big = kron(&big, m);
    }
    let dim = k.pow(n as u32);
    let digits = |mut idx: usize| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = idx % k;
            idx /= k;
        }
        v
    };
    let index = |v: &[usize]| v.iter().fold(0, |acc, &d| acc * k + d);
    let mut q = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let i = digits(col);
        let j: Vec<usize> = (0..n).map(|m| i[sigma.apply(m)]).collect();
        q[(index(&j), col)] = Complex64::new(1.0, 0.0);
    }
    (big * q).trace()
}

#[test]
fn trace_monomial_matches_dense_tensor() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = MatrixTuple::new(vec![rand_matrix(&mut rng, 2), rand_matrix(&mut rng, 2)]).unwrap();
    for n in 1..=4 {
        for alpha in MultiIndex::all_of_weight(2, n) {
            let mats: Vec<CMatrix> = alpha.blocks().iter().map(|&b| x.get(b).clone()).collect();
            for sigma in all_permutations(n) {
                let got = trace_monomial(&sigma, &alpha, &x).unwrap();
                let want = dense_trace(&sigma, &mats);
                assert!((got - want).norm() < 1e-9 * (1.0 + want.norm()), "{sigma} {alpha:?}: {got} vs {want}");
            }
        }
    }
}

/// Semistandard fillings of λ with entries < d, counted by content.
fn ssyt_contents(lambda: &Partition, d: usize) -> BTreeMap<Vec<usize>, u64> {
    let cells: Vec<(usize, usize)> = lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut grid = vec![vec![0usize; lambda.width()]; lambda.height()];
    let mut out = BTreeMap::new();
    fn go(
        idx: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        d: usize,
        out: &mut BTreeMap<Vec<usize>, u64>,
    ) {
        if idx == cells.len() {
            let mut content = vec![0; d];
            for row in grid.iter() {
                for &v in row {
                    content[v] += 1;
                }
            }
            *out.entry(content).or_insert(0) += 1;
            return;
        }
        let (r, c) = cells[idx];
        let lo_row = if c > 0 { grid[r][c - 1] } else { 0 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 0 };
        for v in lo_row.max(lo_col)..d {
            grid[r][c] = v;
            go(idx + 1, cells, grid, d, out);
        }
        grid[r][c] = 0;
    }
    go(0, &cells, &mut grid, d, &mut out);
    // Strip padding zeros from cells outside λ.
    let padding = lambda.height() * lambda.width() - lambda.weight();
    out.into_iter()
        .map(|(mut c, m)| {
            c[0] -= padding;
            (c, m)
        })
        .collect()
}

#[test]
fn schur_at_ones_counts_tableaux() {
    for lambda in all_partitions_upto(6) {
        for d in 1..=4 {
            if lambda.is_empty() {
                assert_eq!(lambda.schur_at_ones(d), BigUint::one());
                continue;
            }
            let count: u64 = ssyt_contents(&lambda, d).values().sum();
            assert_eq!(lambda.schur_at_ones(d), BigUint::from(count), "{lambda} d={d}");
        }
    }
}

#[test]
fn class_sizes_match_enumeration() {
    for n in 1..=6 {
        let mut counts: BTreeMap<Partition, u64> = BTreeMap::new();
        for p in all_permutations(n) {
            *counts.entry(p.cycle_type()).or_insert(0) += 1;
        }
        for rho in enumerate_partitions(n, None, None) {
            let c = counts[&rho];
            assert_eq!(rho.class_size(), BigUint::from(c));
            assert_eq!(rho.z_lambda() * BigUint::from(c), factorial(n));
        }
    }
}

fn count_standard(lambda: &Partition) -> u64 {
    if lambda.weight() <= 1 {
        return 1;
    }
    let parts = lambda.parts();
    let mut total = 0;
    for i in 0..parts.len() {
        let corner = i + 1 == parts.len() || parts[i + 1] < parts[i];
        if corner {
            let mut p = parts.to_vec();
            p[i] -= 1;
            total += count_standard(&Partition::from_unsorted(p));
        }
    }
    total
}

#[test]
fn characters_at_identity_count_standard_tableaux() {
    for n in 1..=8 {
        let id = Partition::new(vec![1; n]).unwrap();
        for lambda in enumerate_partitions(n, None, None) {
            let chi = character(&lambda, &id).unwrap();
            assert_eq!(chi, BigInt::from(count_standard(&lambda)));
            assert_eq!(BigUint::from(count_standard(&lambda)), lambda.irrep_dimension());
        }
    }
}

#[test]
fn character_column_orthogonality() {
    for n in 1..=7 {
        let parts = enumerate_partitions(n, None, None);
        for a in &parts {
            for b in &parts {
                let s: BigInt = parts
                    .iter()
                    .map(|l| character(l, a).unwrap() * character(l, b).unwrap())
                    .sum();
                let want = if a == b { BigInt::from(a.z_lambda()) } else { BigInt::zero() };
                assert_eq!(s, want, "{a} {b}");
            }
        }
    }
}

/// Monomial expansion of s_λ in `vars` variables.
fn schur_monomials(lambda: &Partition, vars: usize) -> BTreeMap<Vec<usize>, u64> {
    if lambda.is_empty() {
        return BTreeMap::from([(vec![0; vars], 1)]);
    }
    ssyt_contents(lambda, vars)
}

#[test]
fn lr_coefficients_match_monomial_expansion() {
    // Peel s_μ·s_ν by leading dominant monomials, largest partitions first.
    for total in 1..=6usize {
        let lambdas = enumerate_partitions(total, None, None);
        let monos: BTreeMap<Partition, BTreeMap<Vec<usize>, u64>> =
            lambdas.iter().map(|l| (l.clone(), schur_monomials(l, total))).collect();
        let pad = |l: &Partition| {
            let mut v = l.parts().to_vec();
            v.resize(total, 0);
            v
        };
        for a in 0..=total {
            for mu in enumerate_partitions(a, None, None) {
                for nu in enumerate_partitions(total - a, None, None) {
                    let sm = schur_monomials(&mu, total);
                    let sn = schur_monomials(&nu, total);
                    let mut residual: BTreeMap<Partition, i64> = BTreeMap::new();
                    for l in &lambdas {
                        let target = pad(l);
                        let mut c = 0i64;
                        for (e, m) in &sm {
                            if e.iter().zip(&target).all(|(x, t)| x <= t) {
                                let rest: Vec<usize> = target.iter().zip(e).map(|(t, x)| t - x).collect();
                                if let Some(n) = sn.get(&rest) {
                                    c += (m * n) as i64;
                                }
                            }
                        }
                        residual.insert(l.clone(), c);
                    }
                    // lambdas are in descending lexicographic order
                    for l in &lambdas {
                        let c = residual[l];
                        assert_eq!(c as u64, lr_coefficient(l, &mu, &nu), "{l} / {mu} {nu}");
                        for other in &lambdas {
                            let k = monos[l].get(&pad(other)).copied().unwrap_or(0) as i64;
                            *residual.get_mut(other).unwrap() -= c * k;
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn lr_support_needs_dominance_and_containment() {
    for total in 1..=7usize {
        for l in enumerate_partitions(total, None, None) {
            for a in 0..=total {
                for mu in enumerate_partitions(a, None, None) {
                    for nu in enumerate_partitions(total - a, None, None) {
                        if lr_coefficient(&l, &mu, &nu) > 0 {
                            assert!(mu.is_subpartition_of(&l) && nu.is_subpartition_of(&l));
                            // μ ∪ ν ⊴ λ ⊴ μ + ν
                            let mut union: Vec<usize> = mu.parts().iter().chain(nu.parts()).copied().collect();
                            union.sort_unstable_by(|x, y| y.cmp(x));
                            let union = Partition::new(union).unwrap();
                            assert!(l.dominates(&mu.add(&nu)), "{l} {mu} {nu}");
                            assert!(union.dominates(&l), "{l} {mu} {nu}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn content_polynomial_is_monotone_in_dominance() {
    for n in 1..=8 {
        for d in 1..=6 {
            let ps = enumerate_partitions(n, Some(d), None);
            for a in &ps {
                for b in &ps {
                    // a ⊴ b moves cells to higher rows, raising contents
                    if a.dominates(b) {
                        assert!(a.content_polynomial(d) <= b.content_polynomial(d), "{a} {b} d={d}");
                    }
                }
            }
        }
    }
}

#[test]
fn greedy_walk_raises_ratio_until_special_form() {
    for n in 2..=9 {
        for k in 1..=3 {
            for d in 1..=4 {
                for l in enumerate_partitions(n, Some(d), Some(k)) {
                    for a in 0..=n {
                        for mu in pencil_core::partitions::subpartitions_of_weight(&l, a) {
                            let steps = greedy_walk(&l, &mu, d).unwrap();
                            assert!(steps.windows(2).all(|w| w[1].ratio > w[0].ratio));
                            let last = steps.last().unwrap();
                            assert_eq!(last.mu.add(&last.nu), l);
                            assert!(violating_row(&l, &last.mu).is_none());
                            let start = rows_of_skew(&l, &mu).unwrap();
                            let r0 = content_ratio(&l, &mu, &start, d).unwrap();
                            let bound = BigRational::from_integer(BigInt::from(ratio_bound(n, k)));
                            assert!(r0 <= last.ratio && last.ratio <= bound);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn c_coefficients_increase_with_dimension() {
    for n in 0..=6 {
        for g in 1..=3 {
            for alpha in MultiIndex::all_of_weight(g, n) {
                let mut prev = BigRational::zero();
                for d in 1..=60 {
                    let c = c_coefficient(d, &alpha);
                    assert!(c >= prev && c <= BigRational::one(), "{alpha:?} d={d}");
                    prev = c;
                }
                assert!(prev.to_f64().unwrap() > 0.7);
            }
        }
    }
}

#[test]
fn zero_coordinates_do_not_change_moments() {
    let x = ScalarTuple::parse("1/3,1/5+1/7i").unwrap();
    let y = ScalarTuple::parse("1/4,-1/6").unwrap();
    for d in 1..=6 {
        let a = exact_scalar_moment(d, &x, &y).unwrap().exact;
        let b = exact_scalar_moment(d, &x.with_zero_appended(), &y.with_zero_appended()).unwrap().exact;
        assert_eq!(a, b);
        for k in 1..=2 {
            let a = exact_identity_moment(d, k, &x, None).unwrap().exact;
            let b = exact_identity_moment(d, k, &x.with_zero_appended(), None).unwrap().exact;
            assert_eq!(a, b);
        }
    }
}

#[test]
fn identity_moments_stay_below_their_limit() {
    let x = ScalarTuple::from_reals(&[0.36, 0.48]).unwrap();
    let limit = (1.0f64 - 0.36).powi(-4);
    let mut prev = 0.0;
    for d in 1..=30 {
        let n_max = (d > 12).then(|| auto_identity_truncation(d, 2, 0.6, 1e-9, 1.0));
        let m = exact_identity_moment(d, 2, &x, n_max).unwrap();
        let upper = m.re + m.trunc_bound.unwrap_or(0.0);
        assert!(upper <= limit * (1.0 + 1e-9), "d={d}: {upper} > {limit}");
        assert!(m.re >= prev - 1e-9, "d={d}");
        prev = m.re;
    }
}

#[test]
fn outer_radius_matches_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for k in 1..=4 {
        for g in 1..=3 {
            let x = MatrixTuple::new((0..g).map(|_| rand_matrix(&mut rng, k)).collect()).unwrap();
            let mut s = CMatrix::zeros(k * k, k * k);
            for m in x.matrices() {
                s += kron(m, &m.map(|z| z.conj()));
            }
            let eig = s.clone().schur().eigenvalues().expect("triangular Schur form");
            let rad = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert_relative_eq!(outer_spectral_radius(&x).unwrap(), rad.sqrt(), max_relative = 1e-6);
        }
    }
}

#[test]
fn mismatched_trace_words_vanish_under_phases() {
    let sigma = Permutation::identity(2);
    let alpha = MultiIndex::new(vec![2, 0]);
    let beta = MultiIndex::new(vec![1, 1]);
    let e = estimate_mixed_trace_pair(&sigma, &alpha, &sigma, &beta, 3, 20_000, 5).unwrap();
    assert!(e.mean.norm() <= 4.0 * e.stderr + 1e-12, "{} +- {}", e.mean, e.stderr);
}
