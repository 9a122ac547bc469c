//! Dense complex linear algebra and quantum-state primitives.

mod gellmann;
mod matrix;
pub mod random;
mod state;

pub use gellmann::{max_radius_sq, min_radius_sq, qudit_coords, GellMannBasis};
pub use matrix::{ComplexMatrix, MatrixRepr};
pub use state::{
    bloch_to_density, density_to_bloch, fidelity, partial_trace, tensor, tensor_with_limit,
    trace_distance, BlochVector, DensityMatrix, PureState, Subsystem, MAX_DIM, STATE_TOL,
};

/// Pauli matrices `σ_x, σ_y, σ_z`.
pub fn pauli() -> [ComplexMatrix; 3] {
    let c = num_complex::Complex64::new;
    let m = |e| ComplexMatrix::from_row_major(2, 2, e).expect("2x2");
    [
        m(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        m(vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        m(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ket(v: &[Complex64]) -> DensityMatrix {
        PureState::normalized(v.to_vec()).unwrap().to_density()
    }

    #[test]
    fn tensor_examples() {
        let zero = DensityMatrix::basis(2, 0).unwrap();
        let t = tensor(&zero, &zero).unwrap();
        assert_eq!(t.dim(), 4);
        assert_eq!(t.get(0, 0), c(1.0, 0.0));
        assert!(t.matrix().to_row_major().iter().skip(1).all(|z| z.norm() == 0.0));

        let half = DensityMatrix::maximally_mixed(2).unwrap();
        let quarter = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(tensor(&half, &half).unwrap().matrix().max_abs_diff(quarter.matrix()) < 1e-15);

        // hand-computed Kronecker product of two diagonals
        let a = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let expected = DensityMatrix::diagonal(&[0.42, 0.28, 0.18, 0.12]).unwrap();
        assert!(tensor(&a, &b).unwrap().matrix().max_abs_diff(expected.matrix()) < 1e-15);
    }

    #[test]
    fn tensor_overflow() {
        let big = DensityMatrix::maximally_mixed(16).unwrap();
        let small = DensityMatrix::maximally_mixed(5).unwrap();
        assert!(matches!(tensor(&big, &small), Err(Error::DimensionTooLarge { dim: 80, max: 64 })));
        assert!(tensor(&big, &DensityMatrix::maximally_mixed(4).unwrap()).is_ok());
    }

    #[test]
    fn partial_trace_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ket(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        let half = DensityMatrix::maximally_mixed(2).unwrap();
        let ra = partial_trace(&bell, (2, 2), Subsystem::A).unwrap();
        assert!(ra.matrix().max_abs_diff(half.matrix()) < 1e-15);

        let a = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let b = bloch_to_density(&BlochVector::new(0.1, -0.4, 0.5)).unwrap();
        let rb = partial_trace(&tensor(&a, &b).unwrap(), (2, 2), Subsystem::B).unwrap();
        assert!(rb.matrix().max_abs_diff(b.matrix()) < 1e-15);

        // explicit trace-out of (|00⟩ − |11⟩)/√2 over A
        let minus = ket(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-s, 0.0)]);
        let m = minus.matrix();
        let mut oracle = [[c(0.0, 0.0); 2]; 2];
        for (i, row) in oracle.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = m.get(i, j) + m.get(2 + i, 2 + j);
            }
        }
        let rb = partial_trace(&minus, (2, 2), Subsystem::B).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rb.get(i, j) - oracle[i][j]).norm() < 1e-15);
            }
        }
        assert!(rb.matrix().max_abs_diff(half.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_dims_mismatch() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(partial_trace(&rho, (3, 2), Subsystem::A).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityMatrix::basis(2, 0).unwrap();
        let one = DensityMatrix::basis(2, 1).unwrap();
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        // diagonal: ½ Σ |p_i − q_i| = ½(0.25 + 0.25)
        let a = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let b = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 0.25).abs() < 1e-15);
        assert!(trace_distance(&a, &DensityMatrix::maximally_mixed(3).unwrap()).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let zero = DensityMatrix::basis(2, 0).unwrap();
        let one = DensityMatrix::basis(2, 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d = ket(&[c(s, 0.0), c(s, 0.0)]);
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&zero, &one).unwrap() < 1e-12);
        assert!((fidelity(&zero, &d).unwrap() - 0.5).abs() < 1e-12);
        assert!(fidelity(&zero, &DensityMatrix::maximally_mixed(3).unwrap()).is_err());
    }

    #[test]
    fn bloch_examples() {
        let north = bloch_to_density(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert!(north.matrix().max_abs_diff(DensityMatrix::basis(2, 0).unwrap().matrix()) < 1e-15);
        let center = bloch_to_density(&BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert!(center.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).unwrap().matrix()) < 1e-15);
        let d = bloch_to_density(&BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((d.get(i, j) - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
        assert!(matches!(
            bloch_to_density(&BlochVector::new(1.0, 0.1, 0.0)),
            Err(Error::NonPhysical(_))
        ));
    }

    #[test]
    fn density_to_bloch_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d = ket(&[c(s, 0.0), c(s, 0.0)]);
        let v = density_to_bloch(&d).unwrap();
        assert!(v.distance(&BlochVector::new(1.0, 0.0, 0.0)) < 1e-15);
        let v = density_to_bloch(&DensityMatrix::maximally_mixed(2).unwrap()).unwrap();
        assert_eq!(v, BlochVector::new(0.0, 0.0, 0.0));
        let l = DensityMatrix::new(
            ComplexMatrix::from_row_major(2, 2, vec![c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.5, 0.0)])
                .unwrap(),
        )
        .unwrap();
        assert!(density_to_bloch(&l).unwrap().distance(&BlochVector::new(0.0, 1.0, 0.0)) < 1e-15);
        assert!(density_to_bloch(&DensityMatrix::maximally_mixed(3).unwrap()).is_err());
    }

    #[test]
    fn gellmann_qubit_is_pauli() {
        let basis = GellMannBasis::new(2).unwrap();
        for (g, p) in basis.generators().iter().zip(pauli().iter()) {
            assert_eq!(g, p);
        }
        let x = qudit_coords(&DensityMatrix::maximally_mixed(2).unwrap()).unwrap();
        assert!(x.iter().all(|v| v.abs() < 1e-15));
        assert!(GellMannBasis::new(1).is_err());
    }

    #[test]
    fn gellmann_qutrit_orthogonality() {
        let basis = GellMannBasis::new(3).unwrap();
        assert_eq!(basis.generators().len(), 8);
        for (i, a) in basis.generators().iter().enumerate() {
            assert!(a.hermiticity_defect() < 1e-12);
            assert!(a.trace().norm() < 1e-12);
            for (j, b) in basis.generators().iter().enumerate() {
                let expected = if i == j { 2.0 } else { 0.0 };
                assert!(((a * b).trace() - c(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn qudit_coord_norms() {
        let mixed = qudit_coords(&DensityMatrix::maximally_mixed(4).unwrap()).unwrap();
        assert!(mixed.iter().all(|v| v.abs() < 1e-15));
        let q = density_to_bloch(&ket(&[c(0.6, 0.0), c(0.0, 0.8)])).unwrap();
        assert!((q.norm() - 1.0).abs() < 1e-12);
        let x = qudit_coords(&DensityMatrix::basis(3, 0).unwrap()).unwrap();
        let n2: f64 = x.iter().map(|v| v * v).sum();
        assert!((n2 - 4.0 / 3.0).abs() < 1e-12);
        assert!((max_radius_sq(3) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn density_validation_errors() {
        let m = ComplexMatrix::diagonal(&[1.2, -0.2]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPositiveSemidefinite(_))));
        let m = ComplexMatrix::diagonal(&[0.5, 0.4]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidTrace(_))));
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)])
            .unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn density_json_shape() {
        let rho = bloch_to_density(&BlochVector::new(0.0, 1.0, 0.0)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rho).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["im"][0][1], -0.5);
        let back: DensityMatrix = serde_json::from_value(v).unwrap();
        assert_eq!(back, rho);
        let bad = serde_json::json!({"dim": 2, "re": [[1.2, 0.0], [0.0, -0.2]], "im": [[0.0, 0.0], [0.0, 0.0]]});
        let err = serde_json::from_value::<DensityMatrix>(bad).unwrap_err();
        assert!(err.to_string().contains("not positive semidefinite"));
    }
}
