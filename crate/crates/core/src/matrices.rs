//! Complex matrix tuples and the small dense helpers built on nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// g complex k×k coefficient matrices. Scalar tuples are the k = 1 case.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    k: usize,
    matrices: Vec<CMatrix>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<CMatrix>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::domain("matrix tuple needs at least one matrix"))?;
        let k = first.nrows();
        if k == 0 {
            return Err(Error::domain("matrices must be at least 1x1"));
        }
        for (j, m) in matrices.iter().enumerate() {
            if m.nrows() != k || m.ncols() != k {
                return Err(Error::domain(format!(
                    "matrix {} is {}x{}, expected {k}x{k}",
                    j + 1,
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(MatrixTuple { k, matrices })
    }

    /// 1×1 tuple from scalars.
    pub fn from_scalars(xs: &[Complex64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| CMatrix::from_element(1, 1, x)).collect())
    }

    /// X_j = x_j · I_k.
    pub fn scalar_multiples(xs: &[Complex64], k: usize) -> Result<Self> {
        Self::new(
            xs.iter()
                .map(|&x| CMatrix::identity(k, k) * x)
                .collect(),
        )
    }

    /// X_j = diag(x_{1j}, …, x_{kj}) where `rows[l]` is the tuple x_l.
    pub fn diagonal(rows: &[Vec<Complex64>]) -> Result<Self> {
        let g = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != g) {
            return Err(Error::domain("diagonal rows must share the same length"));
        }
        let k = rows.len();
        Self::new(
            (0..g)
                .map(|j| CMatrix::from_fn(k, k, |a, b| if a == b { rows[a][j] } else { Complex64::new(0.0, 0.0) }))
                .collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn g(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn get(&self, j: usize) -> &CMatrix {
        &self.matrices[j]
    }

    /// Appends a zero matrix as an extra coordinate.
    pub fn with_zero_appended(&self) -> Self {
        let mut matrices = self.matrices.clone();
        matrices.push(CMatrix::zeros(self.k, self.k));
        MatrixTuple { k: self.k, matrices }
    }

    /// The scalars when k = 1.
    pub fn as_scalars(&self) -> Option<Vec<Complex64>> {
        (self.k == 1).then(|| self.matrices.iter().map(|m| m[(0, 0)]).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixTupleRepr {
    k: usize,
    g: usize,
    matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl Serialize for MatrixTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                (0..self.k)
                    .map(|r| (0..self.k).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                    .collect()
            })
            .collect();
        MatrixTupleRepr { k: self.k, g: self.g(), matrices }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixTupleRepr::deserialize(d)?;
        if repr.matrices.len() != repr.g {
            return Err(D::Error::custom(format!(
                "field g = {} but {} matrices given",
                repr.g,
                repr.matrices.len()
            )));
        }
        let mut out = Vec::with_capacity(repr.g);
        for (j, m) in repr.matrices.iter().enumerate() {
            if m.len() != repr.k || m.iter().any(|row| row.len() != repr.k) {
                return Err(D::Error::custom(format!(
                    "matrix {} is not {}x{}",
                    j + 1,
                    repr.k,
                    repr.k
                )));
            }
            out.push(CMatrix::from_fn(repr.k, repr.k, |r, c| {
                Complex64::new(m[r][c][0], m[r][c][1])
            }));
        }
        MatrixTuple::new(out).map_err(D::Error::custom)
    }
}

/// Kronecker product A ⊗ B.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Determinant via LU with partial pivoting.
pub fn det(m: &CMatrix) -> Complex64 {
    if m.nrows() == 1 {
        return m[(0, 0)];
    }
    if m.nrows() == 2 {
        return m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    }
    m.clone().lu().determinant()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}
