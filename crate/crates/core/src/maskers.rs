//! Maskable disks and masking isometries.
//!
//! A masker is stored as the isometry `V = U(· ⊗ |0⟩)`, an `out × in`
//! column matrix; masking a state is `ρ ↦ VρV†`. The free columns of a
//! dilated unitary never affect an output and are not represented.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{partial_trace, BlochVector, ComplexMatrix, DensityMatrix, Subsystem, STATE_TOL};

/// Tolerance on the isometry condition `V†V = I`.
pub const ISOMETRY_TOL: f64 = 1e-10;

const RANGE_TOL: f64 = 1e-12;

fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Unit normal `(sinα cosθ, sinα sinθ, cosα)`.
pub fn normal_from_angles(alpha: f64, theta: f64) -> [f64; 3] {
    [
        alpha.sin() * theta.cos(),
        alpha.sin() * theta.sin(),
        alpha.cos(),
    ]
}

/// The plane section `{ρ : n·ρ = c}` of the Bloch ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    normal: [f64; 3],
    c: f64,
}

impl Disk {
    pub fn new(normal: [f64; 3], c: f64) -> Result<Self> {
        let n = normal.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("disk normal has norm {n}")));
        }
        if !(c.abs() <= 1.0) {
            return Err(Error::InvalidParameter(format!("disk offset {c} misses the Bloch ball")));
        }
        Ok(Self { normal, c })
    }

    pub fn from_angles(alpha: f64, theta: f64, c: f64) -> Result<Self> {
        Self::new(normal_from_angles(alpha, theta), c)
    }

    pub fn normal(&self) -> [f64; 3] {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.c
    }

    /// Polar angle of the normal, in `[0, π]`.
    pub fn alpha(&self) -> f64 {
        self.normal[2].clamp(-1.0, 1.0).acos()
    }

    /// Azimuth of the normal in `[0, 2π)`; 0 when the normal is on the z axis.
    pub fn theta(&self) -> f64 {
        let [x, y, _] = self.normal;
        if x.hypot(y) < 1e-15 {
            return 0.0;
        }
        y.atan2(x).rem_euclid(TAU)
    }

    /// `n·ρ − c`.
    pub fn residual(&self, rho: &BlochVector) -> f64 {
        let [nx, ny, nz] = self.normal;
        nx * rho.x + ny * rho.y + nz * rho.z - self.c
    }

    /// Representative with `c ≥ 0`; for `c = 0` the normal is taken in the
    /// upper hemisphere (then `θ ∈ [0, π)` on the equator).
    pub fn canonical(&self) -> Self {
        let [x, y, z] = self.normal;
        let flip = if self.c != 0.0 {
            self.c < 0.0
        } else if z.abs() > 1e-15 {
            z < 0.0
        } else if y.abs() > 1e-15 {
            y < 0.0
        } else {
            x < 0.0
        };
        if flip {
            Self {
                normal: [-x, -y, -z],
                c: -self.c,
            }
        } else {
            *self
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DiskRepr {
    alpha: f64,
    theta: f64,
    c: f64,
}

impl Serialize for Disk {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.canonical();
        DiskRepr {
            alpha: d.alpha(),
            theta: d.theta(),
            c: d.c,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Disk {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DiskRepr::deserialize(d)?;
        Disk::from_angles(r.alpha, r.theta, r.c).map_err(serde::de::Error::custom)
    }
}

/// Disk with normal `(α, θ)` through the reference point `rho0`.
pub fn disk_through(alpha: f64, theta: f64, rho0: &BlochVector) -> Disk {
    let normal = normal_from_angles(alpha, theta);
    let c = normal[0] * rho0.x + normal[1] * rho0.y + normal[2] * rho0.z;
    debug_assert!(c.abs() <= 1.0 + STATE_TOL, "reference point outside the Bloch ball");
    Disk {
        normal,
        c: c.clamp(-1.0, 1.0),
    }
}

/// Membership of `rho` in the disk, up to `tol` on both the plane equation
/// and the ball radius.
pub fn disk_contains(disk: &Disk, rho: &BlochVector, tol: f64) -> bool {
    disk.residual(rho).abs() <= tol && rho.norm() <= 1.0 + tol
}

/// Which construction produced a masker.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MaskerLabel {
    QubitAlphaTheta { alpha: f64, theta: f64 },
    Vandermonde { d: usize },
    HighDim { d: usize, alpha: Vec<f64>, theta: Vec<f64> },
}

/// A masking isometry from `C^d` into `C^{d_A} ⊗ C^{d_B}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Masker {
    label: MaskerLabel,
    in_dim: usize,
    out_dims: (usize, usize),
    columns: ComplexMatrix,
}

impl Masker {
    /// Wraps arbitrary isometry columns.
    pub fn from_columns(label: MaskerLabel, out_dims: (usize, usize), columns: ComplexMatrix) -> Result<Self> {
        if columns.rows() != out_dims.0 * out_dims.1 {
            return Err(Error::DimensionMismatch {
                expected: out_dims.0 * out_dims.1,
                got: columns.rows(),
            });
        }
        let m = Self {
            label,
            in_dim: columns.cols(),
            out_dims,
            columns,
        };
        let defect = m.isometry_defect();
        if defect > ISOMETRY_TOL {
            return Err(Error::InvalidParameter(format!("columns are not orthonormal (defect {defect:e})")));
        }
        Ok(m)
    }

    pub fn label(&self) -> &MaskerLabel {
        &self.label
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dims.0 * self.out_dims.1
    }

    pub fn out_dims(&self) -> (usize, usize) {
        self.out_dims
    }

    pub fn columns(&self) -> &ComplexMatrix {
        &self.columns
    }

    /// `max |V†V − I|`.
    pub fn isometry_defect(&self) -> f64 {
        (&self.columns.adjoint() * &self.columns).max_abs_diff(&ComplexMatrix::identity(self.in_dim))
    }

    /// Image of the basis ket `|k⟩`.
    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.out_dim()).map(|r| self.columns.get(r, k)).collect()
    }
}

/// Builds the columns matrix from a closure `(row, col) -> amplitude`.
fn columns_from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> ComplexMatrix {
    let entries = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| f(r, c)).collect();
    ComplexMatrix::from_row_major(rows, cols, entries).expect("finite masker entries")
}

/// Columns of the 2-block `U_α^θ` pattern placed on basis pair `(2i, 2i+1)`
/// of a `d`-level system with output `|kk⟩` kets.
fn block_columns(d: usize, alphas: &[f64], thetas: &[f64]) -> ComplexMatrix {
    let mut cols = ComplexMatrix::zeros(d * d, d).into_na();
    for (i, (&a, &t)) in alphas.iter().zip(thetas).enumerate() {
        let (lo, hi) = (2 * i, 2 * i + 1);
        let (ll, hh) = (lo * d + lo, hi * d + hi);
        let (s, c) = (a / 2.0).sin_cos();
        let phase = Complex64::from_polar(1.0, -t);
        cols[(ll, lo)] = cplx(c, 0.0);
        cols[(hh, lo)] = cplx(s, 0.0);
        cols[(ll, hi)] = phase * s;
        cols[(hh, hi)] = -phase * c;
    }
    ComplexMatrix::from_na(cols).expect("finite masker entries")
}

/// The qubit masker `U_α^θ`:
/// `|0⟩ ↦ cos(α/2)|00⟩ + sin(α/2)|11⟩`,
/// `|1⟩ ↦ e^{−iθ}(sin(α/2)|00⟩ − cos(α/2)|11⟩)`.
///
/// It masks every disk with normal `(α, θ)`. At `α = 0` the azimuth is
/// irrelevant and is stored as 0.
pub fn qubit_masker(alpha: f64, theta: f64) -> Masker {
    let theta = if alpha == 0.0 { 0.0 } else { theta };
    Masker {
        label: MaskerLabel::QubitAlphaTheta { alpha, theta },
        in_dim: 2,
        out_dims: (2, 2),
        columns: block_columns(2, &[alpha], &[theta]),
    }
}

/// Masker for every state diagonal in the computational basis:
/// `|k⟩ ↦ d^{−1/2} Σ_l x_l^k |l⟩|l⟩` with `x_l = e^{2πil/d}`.
pub fn vandermonde_masker(d: usize) -> Result<Masker> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("Vandermonde masker needs d >= 2, got {d}")));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let columns = columns_from_fn(d * d, d, |row, k| {
        let (a, b) = (row / d, row % d);
        if a != b {
            return cplx(0.0, 0.0);
        }
        // x_l^k with the exponent reduced mod d
        let phase = TAU * ((a * k) % d) as f64 / d as f64;
        Complex64::from_polar(norm, phase)
    });
    Ok(Masker {
        label: MaskerLabel::Vandermonde { d },
        in_dim: d,
        out_dims: (d, d),
        columns,
    })
}

/// State `((d−1)/d + i/d)|0⟩ + Σ_{k≥1} (−1/d + i/d)|k⟩`: masked by the
/// Vandermonde masker together with all diagonal states, yet not diagonal.
pub fn vandermonde_companion_state(d: usize) -> Result<crate::qcore::PureState> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("need d >= 2, got {d}")));
    }
    let df = d as f64;
    let mut amps = vec![cplx(-1.0 / df, 1.0 / df); d];
    amps[0] = cplx((df - 1.0) / df, 1.0 / df);
    crate::qcore::PureState::new(amps)
}

/// Parameters of the even-dimension block masker and of the state family
/// it masks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HighDimFamily {
    d: usize,
    p: Vec<f64>,
    c: Vec<f64>,
    alpha: Vec<f64>,
    theta: Vec<f64>,
}

impl HighDimFamily {
    pub fn new(d: usize, p: Vec<f64>, c: Vec<f64>, alpha: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if d < 2 || !d.is_multiple_of(2) {
            return Err(Error::InvalidDimension(format!("block masker needs an even d >= 2, got {d}")));
        }
        let n = d / 2;
        for (name, len) in [("p", p.len()), ("c", c.len()), ("alpha", alpha.len()), ("theta", theta.len())] {
            if len != n {
                return Err(Error::InvalidParameter(format!("{name} has {len} entries, expected {n}")));
            }
        }
        if p.iter().any(|&v| !(v >= 0.0)) || (p.iter().sum::<f64>() - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidParameter("p must be a probability vector".into()));
        }
        if c.iter().any(|v| !(v.abs() <= 1.0)) {
            return Err(Error::InvalidParameter("every |c_i| must be at most 1".into()));
        }
        Ok(Self { d, p, c, alpha, theta })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn blocks(&self) -> usize {
        self.d / 2
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Disk of block `i`.
    pub fn block_disk(&self, i: usize) -> Result<Disk> {
        Disk::from_angles(self.alpha[i], self.theta[i], self.c[i])
    }

    /// Shared marginal `½ ⊕_i p_i (I + c_i σ_z)` of every state in the family.
    pub fn expected_marginal(&self) -> Result<DensityMatrix> {
        let diag: Vec<f64> = self
            .p
            .iter()
            .zip(&self.c)
            .flat_map(|(&p, &c)| [0.5 * p * (1.0 + c), 0.5 * p * (1.0 - c)])
            .collect();
        DensityMatrix::diagonal(&diag)
    }
}

/// The `d = 2n` block masker acting as `U_{α_i}^{θ_i}` on each basis pair
/// `(2i, 2i+1)` with outputs on `|kk⟩`.
pub fn highdim_masker(fam: &HighDimFamily) -> Masker {
    Masker {
        label: MaskerLabel::HighDim {
            d: fam.d,
            alpha: fam.alpha.clone(),
            theta: fam.theta.clone(),
        },
        in_dim: fam.d,
        out_dims: (fam.d, fam.d),
        columns: block_columns(fam.d, &fam.alpha, &fam.theta),
    }
}

/// Assembles the block state with diagonal blocks `p_i D_i` and
/// off-diagonal blocks `F_jk` (`j < k`, lexicographic order).
pub fn highdim_maskable_state(
    fam: &HighDimFamily,
    bloch_per_block: &[BlochVector],
    offdiag: &[ComplexMatrix],
) -> Result<DensityMatrix> {
    let n = fam.blocks();
    if bloch_per_block.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bloch_per_block.len(),
        });
    }
    if offdiag.len() != n * (n - 1) / 2 {
        return Err(Error::DimensionMismatch {
            expected: n * (n - 1) / 2,
            got: offdiag.len(),
        });
    }
    if let Some(f) = offdiag.iter().find(|f| f.rows() != 2 || f.cols() != 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: f.rows().max(f.cols()),
        });
    }
    for (i, v) in bloch_per_block.iter().enumerate() {
        let residual = fam.block_disk(i)?.residual(v);
        if residual.abs() > STATE_TOL {
            return Err(Error::BlockOffDisk { block: i, residual });
        }
    }

    let d = fam.d;
    let mut m = ComplexMatrix::zeros(d, d).into_na();
    for (i, v) in bloch_per_block.iter().enumerate() {
        let p = fam.p[i];
        let o = 2 * i;
        m[(o, o)] = cplx(0.5 * p * (1.0 + v.z), 0.0);
        m[(o + 1, o + 1)] = cplx(0.5 * p * (1.0 - v.z), 0.0);
        m[(o, o + 1)] = cplx(0.5 * p * v.x, -0.5 * p * v.y);
        m[(o + 1, o)] = cplx(0.5 * p * v.x, 0.5 * p * v.y);
    }
    let pairs = (0..n).flat_map(|j| ((j + 1)..n).map(move |k| (j, k)));
    for ((j, k), f) in pairs.zip(offdiag) {
        for a in 0..2 {
            for b in 0..2 {
                m[(2 * j + a, 2 * k + b)] = f.get(a, b);
                m[(2 * k + b, 2 * j + a)] = f.get(a, b).conj();
            }
        }
    }
    let mat = ComplexMatrix::from_na(m)?;
    let min = mat.hermitian_eigenvalues()[0];
    if min < -STATE_TOL {
        return Err(Error::InvalidOffDiagonal(min));
    }
    DensityMatrix::new(mat)
}

/// `V ρ V†`.
pub fn mask(m: &Masker, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != m.in_dim {
        return Err(Error::DimensionMismatch {
            expected: m.in_dim,
            got: rho.dim(),
        });
    }
    DensityMatrix::new(&(&m.columns * rho.matrix()) * &m.columns.adjoint())
}

/// `V† ρ_AB V`, renormalized; fails when `ρ_AB` has no weight on the
/// masker's range.
pub fn unmask(m: &Masker, rho_ab: &DensityMatrix) -> Result<DensityMatrix> {
    if rho_ab.dim() != m.out_dim() {
        return Err(Error::DimensionMismatch {
            expected: m.out_dim(),
            got: rho_ab.dim(),
        });
    }
    let back = &(&m.columns.adjoint() * rho_ab.matrix()) * &m.columns;
    if back.trace().re < RANGE_TOL {
        return Err(Error::NotInMaskerRange);
    }
    DensityMatrix::normalized(back.hermitian_part())
}

/// `(Tr_B ρ_AB, Tr_A ρ_AB)`.
pub fn marginals(rho_ab: &DensityMatrix, d_a: usize, d_b: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    Ok((
        partial_trace(rho_ab, (d_a, d_b), Subsystem::A)?,
        partial_trace(rho_ab, (d_a, d_b), Subsystem::B)?,
    ))
}

/// Masks `rho` and returns both marginals.
pub fn masked_marginals(m: &Masker, rho: &DensityMatrix) -> Result<(DensityMatrix, DensityMatrix)> {
    let (da, db) = m.out_dims;
    marginals(&mask(m, rho)?, da, db)
}

/// Polar angle `arctan √2` of the `(1,1,1)/√3` direction.
pub fn body_diagonal_alpha() -> f64 {
    2f64.sqrt().atan()
}

/// Azimuth of the `(1,1,·)` direction.
pub const BODY_DIAGONAL_THETA: f64 = PI / 4.0;
