//! Sampling of random states for property tests and drivers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::ComplexMatrix;
use super::state::{BlochVector, DensityMatrix, PureState};

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random pure state (normalized complex Gaussian vector).
pub fn haar_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| gaussian_complex(rng)).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

/// Mixed state `GG†/Tr(GG†)` from a d×d Ginibre matrix.
pub fn ginibre_mixed<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    loop {
        let g = DMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
        let m = ComplexMatrix::from_na(&g * g.adjoint()).expect("finite Gaussian samples");
        if let Ok(rho) = DensityMatrix::normalized(m.hermitian_part()) {
            return rho;
        }
    }
}

/// Uniform point in the closed unit ball.
pub fn uniform_ball<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let v = BlochVector::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

/// Uniform point on the unit sphere.
pub fn uniform_sphere<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let x: f64 = StandardNormal.sample(rng);
        let y: f64 = StandardNormal.sample(rng);
        let z: f64 = StandardNormal.sample(rng);
        let n = (x * x + y * y + z * z).sqrt();
        if n > 1e-9 {
            return BlochVector::new(x / n, y / n, z / n);
        }
    }
}
