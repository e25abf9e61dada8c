//! Haar-random unitaries and Monte Carlo estimates of pencil moments and
//! trace-monomial pairings.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{det, CMatrix, MatrixTuple};
use crate::symgroup::{trace_monomial_unchecked, MultiIndex, Permutation};

pub const DEFAULT_CHUNK: usize = 10_000;
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: Complex64,
    /// sqrt(E|z − mean|² / samples) from the unbiased sample variance.
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    pub d: usize,
    pub g: usize,
}

/// Draws a Haar-distributed d×d unitary: QR of a complex Ginibre matrix with
/// the columns of Q rotated by the phases of R's diagonal.
pub fn sample_haar<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    loop {
        let z = CMatrix::from_fn(d, d, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * scale, im * scale)
        });
        let qr = z.qr();
        let r = qr.r();
        if (0..d).any(|i| r[(i, i)].norm() < 1e-300) {
            continue;
        }
        let mut q = qr.q();
        for j in 0..d {
            let phase = r[(j, j)] / r[(j, j)].norm();
            let mut col = q.column_mut(j);
            col *= phase;
        }
        return q;
    }
}

/// det(I_{kd} + Σ X_j ⊗ U_j).
pub fn pencil_determinant(x: &MatrixTuple, us: &[CMatrix]) -> Result<Complex64> {
    if us.len() != x.g() {
        return Err(Error::domain(format!("{} unitaries for {} coefficients", us.len(), x.g())));
    }
    let d = us.first().map(|u| u.nrows()).unwrap_or(0);
    if us.iter().any(|u| u.nrows() != d || u.ncols() != d) {
        return Err(Error::domain("unitaries must share one square size"));
    }
    Ok(pencil_det_unchecked(x, us))
}

fn pencil_det_unchecked(x: &MatrixTuple, us: &[CMatrix]) -> Complex64 {
    let d = us[0].nrows();
    let k = x.k();
    if k == 1 {
        let mut m = CMatrix::identity(d, d);
        for (xj, u) in x.matrices().iter().zip(us) {
            let c = xj[(0, 0)];
            if c != Complex64::new(0.0, 0.0) {
                m += u * c;
            }
        }
        return det(&m);
    }
    let mut m = CMatrix::identity(k * d, k * d);
    for (xj, u) in x.matrices().iter().zip(us) {
        m += xj.kronecker(u);
    }
    det(&m)
}

#[derive(Debug, Clone, Copy)]
struct Accum {
    count: usize,
    mean: Complex64,
    /// Σ |z − mean|²
    m2: f64,
}

impl Accum {
    fn new() -> Self {
        Accum { count: 0, mean: Complex64::new(0.0, 0.0), m2: 0.0 }
    }

    fn push(&mut self, z: Complex64) {
        self.count += 1;
        let delta = z - self.mean;
        self.mean += delta / self.count as f64;
        let delta2 = z - self.mean;
        self.m2 += delta.re * delta2.re + delta.im * delta2.im;
    }

    fn merge(self, other: Accum) -> Accum {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / n as f64;
        Accum {
            count: n,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta.norm_sqr() * self.count as f64 * w,
        }
    }
}

/// Runs `f` on `samples` draws split into fixed chunks. Chunk c uses the ChaCha
/// stream c under `seed`, and chunk results are merged in index order, so the
/// output does not depend on the number of worker threads.
fn chunked<F>(samples: usize, seed: u64, chunk: usize, f: F) -> Result<(Complex64, f64)>
where
    F: Fn(&mut ChaCha8Rng) -> Complex64 + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(Error::domain(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    if chunk == 0 {
        return Err(Error::domain("chunk size must be positive"));
    }
    let n_chunks = samples.div_ceil(chunk);
    let parts: Vec<Accum> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = chunk.min(samples - c * chunk);
            let mut acc = Accum::new();
            for _ in 0..len {
                acc.push(f(&mut rng));
            }
            acc
        })
        .collect();
    let total = parts.into_iter().fold(Accum::new(), Accum::merge);
    let var = total.m2 / (total.count as f64 - 1.0);
    Ok((total.mean, (var / total.count as f64).sqrt()))
}

/// Monte Carlo estimate of ∫ det(L_𝒳(𝒰))·conj(det(L_𝒴(𝒰))) d𝒰 over Haar g-tuples.
pub fn estimate_moment(x: &MatrixTuple, y: &MatrixTuple, d: usize, samples: usize, seed: u64) -> Result<MomentEstimate> {
    estimate_moment_chunked(x, y, d, samples, seed, DEFAULT_CHUNK)
}

pub fn estimate_moment_chunked(
    x: &MatrixTuple,
    y: &MatrixTuple,
    d: usize,
    samples: usize,
    seed: u64,
    chunk: usize,
) -> Result<MomentEstimate> {
    if x.g() != y.g() {
        return Err(Error::domain(format!("tuples have {} and {} matrices", x.g(), y.g())));
    }
    if d == 0 {
        return Err(Error::domain("d must be at least 1"));
    }
    let g = x.g();
    let same = x == y;
    let (mean, stderr) = chunked(samples, seed, chunk, |rng| {
        let us: Vec<CMatrix> = (0..g).map(|_| sample_haar(d, rng)).collect();
        let a = pencil_det_unchecked(x, &us);
        if same {
            Complex64::new(a.norm_sqr(), 0.0)
        } else {
            a * pencil_det_unchecked(y, &us).conj()
        }
    })?;
    Ok(MomentEstimate { mean, stderr, samples, seed, d, g })
}

/// Monte Carlo estimate of ∫ p_{σ,α}(𝒰)·conj(p_{τ,α}(𝒰)) d𝒰.
pub fn estimate_trace_pair(
    sigma: &Permutation,
    tau: &Permutation,
    alpha: &MultiIndex,
    d: usize,
    samples: usize,
    seed: u64,
) -> Result<MomentEstimate> {
    estimate_mixed_trace_pair(sigma, alpha, tau, alpha, d, samples, seed)
}

/// Monte Carlo estimate of ∫ p_{σ,α}(𝒰)·conj(p_{τ,β}(𝒰)) d𝒰; α and β may differ.
pub fn estimate_mixed_trace_pair(
    sigma: &Permutation,
    alpha: &MultiIndex,
    tau: &Permutation,
    beta: &MultiIndex,
    d: usize,
    samples: usize,
    seed: u64,
) -> Result<MomentEstimate> {
    if sigma.n() != alpha.weight() || tau.n() != beta.weight() {
        return Err(Error::domain("permutation degree must equal the multi-index weight"));
    }
    if alpha.g() != beta.g() || alpha.g() == 0 {
        return Err(Error::domain("multi-indices need the same positive number of entries"));
    }
    if d == 0 {
        return Err(Error::domain("d must be at least 1"));
    }
    let g = alpha.g();
    let (ba, bb) = (alpha.blocks(), beta.blocks());
    // Coordinates that appear in neither word do not affect the integrand.
    let used: Vec<bool> = (0..g)
        .map(|j| alpha.entries()[j] > 0 || beta.entries()[j] > 0)
        .collect();
    let (mean, stderr) = chunked(samples, seed, DEFAULT_CHUNK, |rng| {
        let us: Vec<CMatrix> = used
            .iter()
            .map(|&u| if u { sample_haar(d, rng) } else { CMatrix::identity(d, d) })
            .collect();
        let t = MatrixTuple::new(us).expect("unitaries share size");
        trace_monomial_unchecked(sigma, &ba, &t) * trace_monomial_unchecked(tau, &bb, &t).conj()
    })?;
    Ok(MomentEstimate { mean, stderr, samples, seed, d, g })
}
