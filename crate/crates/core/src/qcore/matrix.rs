use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix with finite entries.
///
/// Thin wrapper over `nalgebra::DMatrix<Complex64>`; construction rejects
/// NaN and infinite entries so every downstream check can assume finiteness.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Self::from_na(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_na(m: DMatrix<Complex64>) -> Result<Self> {
        if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(Self(m))
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Builds a real diagonal matrix.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &DVector<Complex64>, v: &DVector<Complex64>) -> Self {
        Self(u * v.adjoint())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_na(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_na(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    /// Kronecker product with the left factor most significant.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry-wise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Eigen-decomposition of the Hermitian part, eigenvalues in ascending
    /// order with matching eigenvector columns.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let eig = SymmetricEigen::new(self.hermitian_part().0);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |i, j| {
            eig.eigenvectors[(i, order[j])]
        });
        (values, vectors)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.hermitian_part().0)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Applies `f` to the eigenvalues of the Hermitian part.
    pub fn hermitian_map(&self, f: impl Fn(f64) -> f64) -> Self {
        let (values, vecs) = self.hermitian_eigen();
        let n = values.len();
        let diag = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(f(values[i]), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self(&vecs * diag * vecs.adjoint())
    }

    /// Operator commutator `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// JSON form of a matrix: real and imaginary parts as nested row arrays.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixRepr {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixRepr {
    fn from(m: &ComplexMatrix) -> Self {
        let (re, im) = split_rows(m);
        MatrixRepr {
            rows: m.rows(),
            cols: m.cols(),
            re,
            im,
        }
    }
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        join_rows(r.rows, r.cols, &r.re, &r.im)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        ComplexMatrix::try_from(repr).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn split_rows(m: &ComplexMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).re).collect())
        .collect();
    let im = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).im).collect())
        .collect();
    (re, im)
}

pub(crate) fn join_rows(
    rows: usize,
    cols: usize,
    re: &[Vec<f64>],
    im: &[Vec<f64>],
) -> Result<ComplexMatrix> {
    if re.len() != rows || im.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            got: re.len().min(im.len()),
        });
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (r_row, i_row) in re.iter().zip(im) {
        if r_row.len() != cols || i_row.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: r_row.len().min(i_row.len()),
            });
        }
        entries.extend(r_row.iter().zip(i_row).map(|(&a, &b)| Complex64::new(a, b)));
    }
    ComplexMatrix::from_row_major(rows, cols, entries)
}
