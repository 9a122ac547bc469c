use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::state::{DensityMatrix, STATE_TOL};
use crate::error::{Error, Result};

/// Generalized Gell-Mann matrices spanning su(d).
///
/// Ordering: all symmetric off-diagonal generators for pairs `j < k`
/// (lexicographic), then the antisymmetric ones in the same pair order,
/// then the `d − 1` diagonal generators. For `d = 2` this is `σ_x, σ_y, σ_z`.
#[derive(Clone, Debug)]
pub struct GellMannBasis {
    dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl GellMannBasis {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(format!("Gell-Mann basis needs d >= 2, got {d}")));
        }
        let zero = Complex64::new(0.0, 0.0);
        let pairs: Vec<(usize, usize)> = (0..d)
            .flat_map(|j| ((j + 1)..d).map(move |k| (j, k)))
            .collect();
        let mut generators = Vec::with_capacity(d * d - 1);
        for &(j, k) in &pairs {
            let mut e = vec![zero; d * d];
            e[j * d + k] = Complex64::new(1.0, 0.0);
            e[k * d + j] = Complex64::new(1.0, 0.0);
            generators.push(ComplexMatrix::from_row_major(d, d, e)?);
        }
        for &(j, k) in &pairs {
            let mut e = vec![zero; d * d];
            e[j * d + k] = Complex64::new(0.0, -1.0);
            e[k * d + j] = Complex64::new(0.0, 1.0);
            generators.push(ComplexMatrix::from_row_major(d, d, e)?);
        }
        for l in 1..d {
            let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
            let diag: Vec<f64> = (0..d)
                .map(|j| match j.cmp(&l) {
                    std::cmp::Ordering::Less => norm,
                    std::cmp::Ordering::Equal => -(l as f64) * norm,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect();
            generators.push(ComplexMatrix::diagonal(&diag));
        }
        Ok(Self { dim: d, generators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    /// Coordinates `x_i = Tr(M Λ_i)` of an arbitrary d×d matrix.
    pub fn coords_of(&self, m: &ComplexMatrix) -> Result<Vec<f64>> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: m.rows(),
            });
        }
        Ok(self
            .generators
            .iter()
            .map(|g| (m * g).trace().re)
            .collect())
    }

    /// `I/d + ½ Σ x_i Λ_i`. Unit trace and Hermitian, but not necessarily
    /// positive.
    pub fn matrix_from_coords(&self, x: &[f64]) -> Result<ComplexMatrix> {
        if x.len() != self.generators.len() {
            return Err(Error::DimensionMismatch {
                expected: self.generators.len(),
                got: x.len(),
            });
        }
        let mut acc = ComplexMatrix::diagonal(&vec![1.0 / self.dim as f64; self.dim]);
        for (xi, g) in x.iter().zip(&self.generators) {
            acc = &acc + &g.scale(Complex64::new(0.5 * xi, 0.0));
        }
        Ok(acc)
    }

    /// Reassembles a density matrix from coordinates; membership in the
    /// state set is decided by positivity, not by a radius test.
    pub fn state_from_coords(&self, x: &[f64]) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix_from_coords(x)?)
    }
}

/// Upper bound `2(d−1)/d` on the squared coordinate norm, attained by pure
/// states.
pub fn max_radius_sq(d: usize) -> f64 {
    2.0 * (d as f64 - 1.0) / d as f64
}

/// Lower bound `2/(d(d−1))`: every matrix inside this radius is a state.
pub fn min_radius_sq(d: usize) -> f64 {
    2.0 / (d as f64 * (d as f64 - 1.0))
}

/// SU(d) coordinates of a density matrix.
pub fn qudit_coords(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let basis = GellMannBasis::new(rho.dim())?;
    let x = basis.coords_of(rho.matrix())?;
    debug_assert!(
        x.iter().map(|v| v * v).sum::<f64>() <= max_radius_sq(rho.dim()) + STATE_TOL,
        "coordinate norm exceeds the pure-state bound"
    );
    Ok(x)
}
