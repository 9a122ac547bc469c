//! Simulation of quantum information masking.
//!
//! The crate is organised around the pipeline a masked state goes through:
//!
//! * [`qcore`]: dense complex matrices, density matrices, Bloch vectors,
//!   partial traces, distances and the SU(d) coordinate system.
//! * [`maskers`]: maskable disks and the masking isometries (qubit
//!   `U_α^θ`, the Vandermonde commuting-set masker and the even-dimension
//!   block masker).
//! * [`photonics`]: second-quantised model of the polarizing beam splitter
//!   fusion gate with coincidence post-selection.
//! * [`experiments`]: drivers for the disk demo, the latitude sweep and the
//!   phase-noise protection protocol.
//! * [`secretshare`]: pixel-wise tripartite secret sharing through three
//!   orthogonal maskers, including the HSL codec and share files.

// negated float comparisons below are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod maskers;
pub mod photonics;
pub mod qcore;
pub mod secretshare;

pub use error::{Error, Result};
pub use maskers::{Disk, HighDimFamily, Masker, MaskerLabel};
pub use qcore::{BlochVector, ComplexMatrix, DensityMatrix, GellMannBasis, PureState, Subsystem};
pub use experiments::{Direction, SweepConfig, SweepRecord};
pub use photonics::{FusionOutcome, FusionState, ModeState};
pub use secretshare::{ColorHSL, ColorRGB, MaskerId, PixelShare};
