//! Drivers reproducing the simulation-accessible experiments: masking a
//! tilted disk, the latitude sweep around `U_0^0`, and phase-noise
//! protection through a masked pair.

use std::f64::consts::FRAC_PI_4;
use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maskers::{
    body_diagonal_alpha, disk_through, mask, marginals, qubit_masker, unmask, Disk, Masker,
    BODY_DIAGONAL_THETA,
};
use crate::qcore::{
    bloch_to_density, density_to_bloch, fidelity, pauli, trace_distance, BlochVector, ComplexMatrix,
    DensityMatrix, PureState,
};

/// Direction of the displacement away from the reference state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Phase rotation about z: stays on the latitude circle.
    Parallel,
    /// Change of latitude.
    Meridian,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Parallel => "parallel",
            Direction::Meridian => "meridian",
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "parallel" => Ok(Direction::Parallel),
            "meridian" => Ok(Direction::Meridian),
            other => Err(Error::InvalidParameter(format!("unknown direction {other:?}"))),
        }
    }
}

/// Latitude sweep grid. Angles in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    phi_list: Vec<f64>,
    shift_list: Vec<f64>,
    direction: Direction,
    shots: Option<u64>,
    seed: u64,
}

impl SweepConfig {
    pub fn new(
        phi_list: Vec<f64>,
        shift_list: Vec<f64>,
        direction: Direction,
        shots: Option<u64>,
        seed: u64,
    ) -> Result<Self> {
        if let Some(s) = shift_list.iter().find(|s| !(s.abs() < std::f64::consts::PI)) {
            return Err(Error::InvalidParameter(format!("shift {s} outside (-pi, pi)")));
        }
        if phi_list.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("non-finite reference latitude".into()));
        }
        if let Some(n) = shots.filter(|&n| n < 100) {
            return Err(Error::InvalidParameter(format!("shots must be at least 100, got {n}")));
        }
        Ok(Self {
            phi_list,
            shift_list,
            direction,
            shots,
            seed,
        })
    }

    /// Symmetric grid `−max, −max+step, …, max` in degrees.
    pub fn degree_grid(
        phi_deg: &[f64],
        shift_max_deg: f64,
        step_deg: f64,
        direction: Direction,
        shots: Option<u64>,
        seed: u64,
    ) -> Result<Self> {
        if !(step_deg > 0.0) || !(shift_max_deg >= 0.0) {
            return Err(Error::InvalidParameter("step must be positive and the range non-negative".into()));
        }
        let steps = (shift_max_deg / step_deg + 1e-9).floor() as i64;
        let shifts = (-steps..=steps).map(|k| (k as f64 * step_deg).to_radians()).collect();
        Self::new(
            phi_deg.iter().map(|p| p.to_radians()).collect(),
            shifts,
            direction,
            shots,
            seed,
        )
    }

    pub fn phi_list(&self) -> &[f64] {
        &self.phi_list
    }

    pub fn shift_list(&self) -> &[f64] {
        &self.shift_list
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn shots(&self) -> Option<u64> {
        self.shots
    }
}

/// One point of the sweep. Angles in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub phi: f64,
    pub shift: f64,
    pub direction: Direction,
    pub trace_distance: f64,
    pub std_error: Option<f64>,
}

/// `sin(φ/2)|H⟩ + cos(φ/2)|V⟩`.
pub fn reference_state(phi: f64) -> PureState {
    PureState::new(vec![
        Complex64::new((phi / 2.0).sin(), 0.0),
        Complex64::new((phi / 2.0).cos(), 0.0),
    ])
    .expect("unit vector")
}

/// Reference state displaced by `shift` along `direction`.
pub fn shifted_state(phi: f64, shift: f64, direction: Direction) -> PureState {
    match direction {
        Direction::Meridian => reference_state(phi + shift),
        Direction::Parallel => PureState::new(vec![
            Complex64::new((phi / 2.0).sin(), 0.0),
            Complex64::from_polar((phi / 2.0).cos(), shift),
        ])
        .expect("unit vector"),
    }
}

/// Closed-form distance of Bob's marginal from the reference marginal.
pub fn analytic_trace_distance(phi: f64, shift: f64, direction: Direction) -> f64 {
    match direction {
        Direction::Parallel => 0.0,
        Direction::Meridian => 0.5 * (phi.cos() - (phi + shift).cos()).abs(),
    }
}

fn bob_marginal(m: &Masker, rho: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(marginals(&mask(m, rho)?, 2, 2)?.1)
}

/// Measurement axis for `sample_counts`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

fn plus_probability(rho: &DensityMatrix, axis: PauliAxis) -> Result<f64> {
    let v = density_to_bloch(rho)?;
    let e = match axis {
        PauliAxis::X => v.x,
        PauliAxis::Y => v.y,
        PauliAxis::Z => v.z,
    };
    Ok((0.5 * (1.0 + e)).clamp(0.0, 1.0))
}

fn draw<R: rand::Rng>(p: f64, shots: u64, rng: &mut R) -> (u64, u64) {
    let plus = Binomial::new(shots, p).expect("probability in [0, 1]").sample(rng);
    (plus, shots - plus)
}

/// Binomial `(+1, −1)` counts for `shots` projective measurements of a
/// qubit along `axis`. Deterministic for a fixed seed.
pub fn sample_counts(rho: &DensityMatrix, axis: PauliAxis, shots: u64, seed: u64) -> Result<(u64, u64)> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let p = plus_probability(rho, axis)?;
    Ok(draw(p, shots, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Masks each grid state with `U_0^0` and records the trace distance of
/// Bob's marginal from the reference marginal. With `shots`, Bob's
/// population is estimated from Z-basis counts and the 1σ binomial error
/// is attached.
pub fn run_sweep_fig3(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let m = qubit_masker(0.0, 0.0);
    let mut out = Vec::with_capacity(cfg.phi_list.len() * cfg.shift_list.len());
    let mut point = 0u64;
    for &phi in &cfg.phi_list {
        let reference = bob_marginal(&m, &reference_state(phi).to_density())?;
        for &shift in &cfg.shift_list {
            let shifted = bob_marginal(&m, &shifted_state(phi, shift, cfg.direction).to_density())?;
            let (td, err) = match cfg.shots {
                None => (trace_distance(&shifted, &reference)?, None),
                Some(shots) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(point);
                    let (plus, _) = draw(plus_probability(&shifted, PauliAxis::Z)?, shots, &mut rng);
                    let p_hat = plus as f64 / shots as f64;
                    let p_ref = reference.get(0, 0).re;
                    (
                        (p_hat - p_ref).abs(),
                        Some((p_hat * (1.0 - p_hat) / shots as f64).sqrt()),
                    )
                }
            };
            out.push(SweepRecord {
                phi,
                shift,
                direction: cfg.direction,
                trace_distance: td,
                std_error: err,
            });
            point += 1;
        }
    }
    Ok(out)
}

fn tidy_degrees(rad: f64) -> f64 {
    (rad.to_degrees() * 1e9).round() / 1e9
}

/// Writes sweep records as CSV with a leading units comment.
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], mut w: W) -> std::io::Result<()> {
    writeln!(
        w,
        "# phi_deg [deg] reference latitude; shift_deg [deg] displacement; direction parallel|meridian; \
         trace_distance [dimensionless] T(rho_B, rho0_B); std_error [dimensionless] 1-sigma binomial, empty when exact"
    )?;
    writeln!(w, "phi_deg,shift_deg,direction,trace_distance,std_error")?;
    for r in records {
        let err = r.std_error.map(|e| e.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{}",
            tidy_degrees(r.phi),
            tidy_degrees(r.shift),
            r.direction.as_str(),
            r.trace_distance,
            err
        )?;
    }
    Ok(())
}

/// Per-state section of the disk-masking demo.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemoState {
    pub name: String,
    pub bloch: BlochVector,
    pub on_disk: bool,
    pub roundtrip_fidelity: f64,
    pub marginal_a: DensityMatrix,
    pub marginal_b: DensityMatrix,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bipartite: Option<DensityMatrix>,
}

/// Disk-masking demo report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DemoReport {
    pub masker: Masker,
    pub disk: Disk,
    pub expected_marginal: DensityMatrix,
    pub states: Vec<DemoState>,
    /// Largest pairwise trace distance between Alice's marginals.
    pub max_pairwise_td_a: f64,
    /// Largest pairwise trace distance between Bob's marginals.
    pub max_pairwise_td_b: f64,
    /// Largest distance of any marginal from the predicted one.
    pub max_td_from_expected: f64,
    pub min_roundtrip_fidelity: f64,
}

/// The five states on the plane `x + y + z = 1`.
pub fn demo_states() -> [(&'static str, BlochVector); 5] {
    [
        ("rho1", BlochVector::new(0.0, 0.0, 1.0)),
        ("rho2", BlochVector::new(1.0, 0.0, 0.0)),
        ("rho3", BlochVector::new(0.0, 1.0, 0.0)),
        ("rho4", BlochVector::new(2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0)),
        ("rho5", BlochVector::new(0.5, 0.5, 0.0)),
    ]
}

/// Masks the five demo states with `U_{arctan√2}^{π/4}`, unmasks them, and
/// compares all marginals.
pub fn run_demo_fig2() -> Result<DemoReport> {
    let masker = qubit_masker(body_diagonal_alpha(), BODY_DIAGONAL_THETA);
    let states = demo_states();
    let disk = disk_through(body_diagonal_alpha(), BODY_DIAGONAL_THETA, &states[0].1);
    let c = disk.offset();
    let expected_marginal = DensityMatrix::diagonal(&[(1.0 + c) / 2.0, (1.0 - c) / 2.0])?;

    let mut out = Vec::with_capacity(states.len());
    for (k, (name, v)) in states.iter().enumerate() {
        let rho = bloch_to_density(v)?;
        let ab = mask(&masker, &rho)?;
        let (ma, mb) = marginals(&ab, 2, 2)?;
        let back = unmask(&masker, &ab)?;
        out.push(DemoState {
            name: name.to_string(),
            bloch: *v,
            on_disk: crate::maskers::disk_contains(&disk, v, 1e-12),
            roundtrip_fidelity: fidelity(&rho, &back)?,
            marginal_a: ma,
            marginal_b: mb,
            bipartite: (k < 2).then_some(ab),
        });
    }

    let mut max_a = 0.0f64;
    let mut max_b = 0.0f64;
    let mut max_e = 0.0f64;
    for s in &out {
        max_e = max_e
            .max(trace_distance(&s.marginal_a, &expected_marginal)?)
            .max(trace_distance(&s.marginal_b, &expected_marginal)?);
        for t in &out {
            max_a = max_a.max(trace_distance(&s.marginal_a, &t.marginal_a)?);
            max_b = max_b.max(trace_distance(&s.marginal_b, &t.marginal_b)?);
        }
    }
    let min_f = out.iter().map(|s| s.roundtrip_fidelity).fold(1.0, f64::min);
    Ok(DemoReport {
        masker,
        disk,
        expected_marginal,
        states: out,
        max_pairwise_td_a: max_a,
        max_pairwise_td_b: max_b,
        max_td_from_expected: max_e,
        min_roundtrip_fidelity: min_f,
    })
}

/// Outcome of sending a qubit through two phase-noise channels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelReport {
    pub t: f64,
    pub input: DensityMatrix,
    pub recovered: DensityMatrix,
    pub recovered_fidelity: f64,
    /// Fidelity after one bare pass through the channel.
    pub unprotected_fidelity: f64,
}

/// `e^{−iσ_z t}`.
pub fn phase_error(t: f64) -> ComplexMatrix {
    let a = Complex64::from_polar(1.0, -t);
    let b = Complex64::from_polar(1.0, t);
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix::from_row_major(2, 2, vec![a, z, z, b]).expect("finite")
}

/// Mask with `U_0^0`, flip the ancilla, send both qubits through
/// `e^{−iσ_z t}`, flip the ancilla back and unmask.
pub fn run_channel_protection(rho: &DensityMatrix, t: f64) -> Result<ChannelReport> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    let m = qubit_masker(0.0, 0.0);
    let id = ComplexMatrix::identity(2);
    let [sx, _, _] = pauli();
    let flip_b = id.kron(&sx);
    let channel = phase_error(t).kron(&phase_error(t));
    let sent = mask(&m, rho)?.conjugate(&flip_b)?.conjugate(&channel)?.conjugate(&flip_b)?;
    let recovered = unmask(&m, &sent)?;
    let bare = rho.conjugate(&phase_error(t))?;
    Ok(ChannelReport {
        t,
        input: rho.clone(),
        recovered_fidelity: fidelity(rho, &recovered)?,
        recovered,
        unprotected_fidelity: fidelity(rho, &bare)?,
    })
}

/// `t = π/4` makes the unprotected `|D⟩` lose half its fidelity.
pub const HALF_FIDELITY_T: f64 = FRAC_PI_4;
