use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{join_rows, split_rows, ComplexMatrix};
use crate::error::{Error, Result};

/// Tolerance for the Hermiticity, trace and positivity checks.
pub const STATE_TOL: f64 = 1e-10;

/// Largest joint dimension `tensor` will build.
pub const MAX_DIM: usize = 64;

/// A d×d Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `mat` as a density matrix.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch {
                expected: mat.rows(),
                got: mat.cols(),
            });
        }
        if mat.rows() == 0 {
            return Err(Error::InvalidDimension("empty matrix".into()));
        }
        let herm = mat.hermiticity_defect();
        if herm > STATE_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = mat.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = mat.hermitian_eigenvalues()[0];
        if min < -STATE_TOL {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        Ok(Self { mat })
    }

    /// Rescales a PSD matrix with positive trace to unit trace.
    pub fn normalized(mat: ComplexMatrix) -> Result<Self> {
        let tr = mat.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidTrace(tr));
        }
        Self::new(mat.scale(Complex64::new(1.0 / tr, 0.0)))
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            mat: ComplexMatrix::outer(psi.vector(), psi.vector()),
        }
    }

    /// `|k⟩⟨k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        Ok(Self::from_pure(&PureState::basis(d, k)?))
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension("d = 0".into()));
        }
        Ok(Self {
            mat: ComplexMatrix::diagonal(&vec![1.0 / d as f64; d]),
        })
    }

    /// Diagonal state `Σ p_k |k⟩⟨k|`.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diagonal(p))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mat.get(i, j)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat.hermitian_eigenvalues()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// `U ρ U†` for a unitary (or isometry) `u`, renormalised.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.cols(),
            });
        }
        Self::normalized(&(u * &self.mat) * &u.adjoint())
    }
}

/// JSON layout `{dim, re, im}`.
#[derive(Serialize, Deserialize)]
struct DensityRepr {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (re, im) = split_rows(&self.mat);
        DensityRepr {
            dim: self.dim(),
            re,
            im,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DensityRepr::deserialize(d)?;
        join_rows(r.dim, r.dim, &r.re, &r.im)
            .and_then(DensityMatrix::new)
            .map_err(serde::de::Error::custom)
    }
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension("empty state vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::NotNormalized(n2));
        }
        let s = 1.0 / n2.sqrt();
        Self::new(amplitudes.into_iter().map(|z| z * s).collect())
    }

    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::InvalidDimension(format!("basis index {k} in dimension {d}")));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[k] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn vector(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

/// Bloch-ball coordinates `(x, y, z)` of a qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Inside the unit ball up to `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.norm() <= 1.0 + tol
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let d = Self::new(self.x - other.x, self.y - other.y, self.z - other.z);
        d.norm()
    }
}

/// Which factor of a bipartite system to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// `a ⊗ b` with A-major index ordering (`i_A·d_B + i_B`).
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    tensor_with_limit(a, b, MAX_DIM)
}

pub fn tensor_with_limit(a: &DensityMatrix, b: &DensityMatrix, max_dim: usize) -> Result<DensityMatrix> {
    let dim = a.dim() * b.dim();
    if dim > max_dim {
        return Err(Error::DimensionTooLarge { dim, max: max_dim });
    }
    DensityMatrix::new(a.matrix().kron(b.matrix()))
}

/// Reduced state of one factor of a `d_a·d_b` system.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Subsystem) -> Result<DensityMatrix> {
    let (da, db) = dims;
    if da * db != rho.dim() || da == 0 || db == 0 {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            got: rho.dim(),
        });
    }
    let m = rho.matrix().as_na();
    let out = match keep {
        Subsystem::A => DMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::B => DMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
    };
    DensityMatrix::new(ComplexMatrix::from_na(out)?)
}

fn check_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

/// `½‖a − b‖₁`, from the eigenvalues of the Hermitian difference.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_same_dim(a, b)?;
    let diff = a.matrix() - b.matrix();
    let t = 0.5 * diff.hermitian_eigenvalues().iter().map(|l| l.abs()).sum::<f64>();
    Ok(t.clamp(0.0, 1.0))
}

/// Uhlmann fidelity `(Tr √(√a b √a))²`.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_same_dim(a, b)?;
    let sqrt_a = a.matrix().hermitian_map(|l| l.max(0.0).sqrt());
    let inner = &(&sqrt_a * b.matrix()) * &sqrt_a;
    let root_trace: f64 = inner
        .hermitian_eigenvalues()
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// `(I + xσ_x + yσ_y + zσ_z)/2`.
pub fn bloch_to_density(v: &BlochVector) -> Result<DensityMatrix> {
    if !v.is_physical(STATE_TOL) {
        return Err(Error::NonPhysical(v.norm()));
    }
    let c = Complex64::new;
    let m = ComplexMatrix::from_row_major(
        2,
        2,
        vec![
            c((1.0 + v.z) / 2.0, 0.0),
            c(v.x / 2.0, -v.y / 2.0),
            c(v.x / 2.0, v.y / 2.0),
            c((1.0 - v.z) / 2.0, 0.0),
        ],
    )?;
    DensityMatrix::new(m)
}

/// Pauli expectation values of a qubit state.
pub fn density_to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    let off = rho.get(1, 0);
    Ok(BlochVector::new(
        2.0 * off.re,
        2.0 * off.im,
        (rho.get(0, 0) - rho.get(1, 1)).re,
    ))
}
