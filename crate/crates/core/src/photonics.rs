//! Second-quantised model of the photonic masking machine.
//!
//! States are sparse superpositions of Fock occupation vectors over labelled
//! modes `(index, site, polarization)`. The polarizing beam splitter
//! transmits `H` and reflects `V` with a `+i` phase, so each mode maps to
//! exactly one mode and the gate acts on Fock amplitudes as a phased
//! relabelling. Coincidence post-selection keeps terms with one photon at
//! each site per photon slot.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, DensityMatrix, PureState};

/// Amplitudes below this modulus are dropped.
pub const PRUNE_TOL: f64 = 1e-14;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Site {
    A,
    B,
}

impl Site {
    fn other(self) -> Self {
        match self {
            Site::A => Site::B,
            Site::B => Site::A,
        }
    }
}

/// A photonic mode. Field order fixes the canonical ordering
/// `(index, site, polarization)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mode {
    pub index: usize,
    pub site: Site,
    pub polarization: Polarization,
}

impl Mode {
    pub const fn new(polarization: Polarization, site: Site, index: usize) -> Self {
        Self {
            index,
            site,
            polarization,
        }
    }
}

/// Sparse occupation vector, sorted by mode, no zero counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occupation(Vec<(Mode, u32)>);

impl Occupation {
    pub fn from_counts(counts: impl IntoIterator<Item = (Mode, u32)>) -> Self {
        let mut map: BTreeMap<Mode, u32> = BTreeMap::new();
        for (m, n) in counts {
            *map.entry(m).or_default() += n;
        }
        Self(map.into_iter().filter(|&(_, n)| n > 0).collect())
    }

    pub fn count(&self, mode: &Mode) -> u32 {
        self.0
            .binary_search_by(|(m, _)| m.cmp(mode))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn modes(&self) -> impl Iterator<Item = &(Mode, u32)> {
        self.0.iter()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&(_, n)| n).sum()
    }

    fn with_added(&self, mode: Mode) -> Self {
        Self::from_counts(self.0.iter().copied().chain(std::iter::once((mode, 1))))
    }
}

/// Superposition of Fock states with complex amplitudes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModeState {
    terms: BTreeMap<Occupation, Complex64>,
}

impl ModeState {
    pub fn vacuum() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Occupation::default(), Complex64::new(1.0, 0.0));
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Occupation, Complex64)>) -> Self {
        let mut s = Self::default();
        for (occ, amp) in terms {
            *s.terms.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        s.prune();
        s
    }

    fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() >= PRUNE_TOL);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, occ: &Occupation) -> Complex64 {
        self.terms.get(occ).copied().unwrap_or_default()
    }

    /// Applies `a_mode†` (`√(n+1)` Fock factor).
    pub fn create(&self, mode: Mode) -> Self {
        Self::from_terms(self.terms.iter().map(|(occ, &amp)| {
            let n = occ.count(&mode) as f64;
            (occ.with_added(mode), amp * (n + 1.0).sqrt())
        }))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(o, &a)| (o.clone(), a * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(o, &a)| (o.clone(), a)),
        )
    }

    /// State reached by applying the creation operators of both states to
    /// the vacuum. On shared modes occupations add with the bosonic factor
    /// `√((n+m)!/(n!m!))`.
    pub fn product(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for (oa, &aa) in &self.terms {
            for (ob, &ab) in &other.terms {
                let merged = Occupation::from_counts(oa.modes().chain(ob.modes()).copied());
                let factor: f64 = oa
                    .modes()
                    .map(|&(m, n)| binomial_sqrt(n + ob.count(&m), n))
                    .product();
                out.push((merged, aa * ab * factor));
            }
        }
        Self::from_terms(out)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.terms
            .iter()
            .map(|(o, a)| a.conj() * other.amplitude(o))
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// Photon slots appearing in any term.
    pub fn indices(&self) -> BTreeSet<usize> {
        self.terms
            .keys()
            .flat_map(|o| o.modes().map(|(m, _)| m.index))
            .collect()
    }
}

fn binomial_sqrt(total: u32, k: u32) -> f64 {
    // √C(total, k)
    let mut c = 1.0f64;
    for i in 0..k {
        c *= (total - i) as f64 / (i + 1) as f64;
    }
    c.sqrt()
}

/// Single photon in slot `index` at `site` with polarization amplitudes
/// `(h, v)`.
pub fn single_photon(site: Site, index: usize, h: Complex64, v: Complex64) -> ModeState {
    let vac = ModeState::vacuum();
    vac.create(Mode::new(Polarization::H, site, index))
        .scale(h)
        .add(&vac.create(Mode::new(Polarization::V, site, index)).scale(v))
}

/// Beam-splitter mode conversion: `a_H^{s†} → a_H^{s†}`,
/// `a_V^{s†} → i a_V^{s̄†}`.
pub fn pbs_convert(s: &ModeState) -> ModeState {
    let i = Complex64::new(0.0, 1.0);
    ModeState::from_terms(s.terms.iter().map(|(occ, &amp)| {
        let mut vertical = 0u32;
        let moved = occ.modes().map(|&(m, n)| match m.polarization {
            Polarization::H => (m, n),
            Polarization::V => {
                vertical += n;
                (Mode::new(Polarization::V, m.site.other(), m.index), n)
            }
        });
        let moved = Occupation::from_counts(moved.collect::<Vec<_>>());
        (moved, amp * i.powu(vertical))
    }))
}

/// A post-selected state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FusionState {
    Pure(PureStateRepr),
    Mixed(DensityMatrix),
}

/// JSON layout of a pure state: `{dim, amp_re, amp_im}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureStateRepr {
    pub dim: usize,
    pub amp_re: Vec<f64>,
    pub amp_im: Vec<f64>,
}

impl From<&PureState> for PureStateRepr {
    fn from(p: &PureState) -> Self {
        Self {
            dim: p.dim(),
            amp_re: p.amplitudes().iter().map(|z| z.re).collect(),
            amp_im: p.amplitudes().iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<&PureStateRepr> for PureState {
    type Error = Error;
    fn try_from(r: &PureStateRepr) -> Result<Self> {
        if r.amp_re.len() != r.dim || r.amp_im.len() != r.dim {
            return Err(Error::DimensionMismatch {
                expected: r.dim,
                got: r.amp_re.len().min(r.amp_im.len()),
            });
        }
        PureState::new(
            r.amp_re
                .iter()
                .zip(&r.amp_im)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect(),
        )
    }
}

impl FusionState {
    pub fn density(&self) -> Result<DensityMatrix> {
        match self {
            FusionState::Pure(p) => Ok(PureState::try_from(p)?.to_density()),
            FusionState::Mixed(m) => Ok(m.clone()),
        }
    }

    pub fn pure(&self) -> Option<PureState> {
        match self {
            FusionState::Pure(p) => PureState::try_from(p).ok(),
            FusionState::Mixed(_) => None,
        }
    }
}

/// Result of a post-selected fusion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FusionOutcome {
    pub state: FusionState,
    pub success_probability: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub noise_coefficient: Option<Complex64>,
}

/// Keeps the terms with exactly one photon at each site in every photon
/// slot. The kept amplitudes are returned on the `2^n ⊗ 2^n` polarization
/// register (A register first; slot 0 is the most significant qubit,
/// `H ↔ 0`, `V ↔ 1`) without renormalisation.
pub fn coincidence_amplitudes(s: &ModeState) -> Vec<Complex64> {
    let slots: Vec<usize> = s.indices().into_iter().collect();
    let n = slots.len();
    let side = 1usize << n;
    let mut out = vec![Complex64::new(0.0, 0.0); side * side];
    'terms: for (occ, &amp) in s.terms() {
        let (mut ka, mut kb) = (0usize, 0usize);
        for (pos, &slot) in slots.iter().enumerate() {
            let bit = n - 1 - pos;
            let mut found = [None, None];
            for &(m, cnt) in occ.modes().filter(|(m, _)| m.index == slot) {
                let which = match m.site {
                    Site::A => 0,
                    Site::B => 1,
                };
                if cnt != 1 || found[which].is_some() {
                    continue 'terms;
                }
                found[which] = Some(m.polarization);
            }
            match found {
                [Some(pa), Some(pb)] => {
                    ka |= usize::from(pa == Polarization::V) << bit;
                    kb |= usize::from(pb == Polarization::V) << bit;
                }
                _ => continue 'terms,
            }
        }
        out[ka * side + kb] += amp;
    }
    out
}

/// Coincidence post-selection with renormalisation.
pub fn coincidence_postselect(s: &ModeState) -> Result<FusionOutcome> {
    let total = s.norm_sqr();
    let kept = coincidence_amplitudes(s);
    let kept_norm: f64 = kept.iter().map(|z| z.norm_sqr()).sum();
    if kept_norm < PRUNE_TOL || total < PRUNE_TOL {
        return Err(Error::PostSelectionEmpty);
    }
    let state = PureState::normalized(kept)?;
    Ok(FusionOutcome {
        state: FusionState::Pure(PureStateRepr::from(&state)),
        success_probability: (kept_norm / total).clamp(0.0, 1.0),
        noise_coefficient: None,
    })
}

/// Carrier photons at site A encoding basis state `k` across `n` slots
/// (slot 0 carries the most significant bit).
fn carrier_basis(k: usize, n: usize) -> ModeState {
    (0..n).fold(ModeState::vacuum(), |acc, slot| {
        let bit = (k >> (n - 1 - slot)) & 1;
        let pol = if bit == 1 { Polarization::V } else { Polarization::H };
        acc.create(Mode::new(pol, Site::A, slot))
    })
}

/// Auxiliary `|D⟩^{⊗n}` at site B.
fn diagonal_ancillas(n: usize) -> ModeState {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    (0..n).fold(ModeState::vacuum(), |acc, slot| {
        acc.product(&single_photon(Site::B, slot, s, s))
    })
}

/// Unnormalised post-selected image of each carrier basis state, as the
/// columns of a `4^n × 2^n` matrix.
fn fusion_kernel(n: usize) -> Result<ComplexMatrix> {
    let d = 1usize << n;
    let aux = diagonal_ancillas(n);
    let mut cols = ComplexMatrix::zeros(d * d, d).into_na();
    for k in 0..d {
        let out = coincidence_amplitudes(&pbs_convert(&carrier_basis(k, n).product(&aux)));
        for (row, amp) in out.into_iter().enumerate() {
            cols[(row, k)] = amp;
        }
    }
    ComplexMatrix::from_na(cols)
}

/// Fuses a qubit (pure or mixed) with a `|D⟩` ancilla and post-selects on
/// coincidence. Equivalent to masking with `U_0^0`.
pub fn fuse_qubit(psi: &DensityMatrix) -> Result<FusionOutcome> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: psi.dim(),
        });
    }
    let k = fusion_kernel(1)?;
    let kept = &(&k * psi.matrix()) * &k.adjoint();
    let p = kept.trace().re;
    if p < PRUNE_TOL {
        return Err(Error::PostSelectionEmpty);
    }
    Ok(FusionOutcome {
        state: FusionState::Mixed(DensityMatrix::normalized(kept.hermitian_part())?),
        success_probability: p.clamp(0.0, 1.0),
        noise_coefficient: None,
    })
}

/// Digit-wise fusion of a qudit encoded on `n` photons. The output lives on
/// `C^d ⊗ C^d` and equals `Σ_k (−1)^{popcount k} ψ_k |kk⟩`.
pub fn fuse_qudit(psi: &PureState, n: usize) -> Result<FusionOutcome> {
    let d = psi.dim();
    if n == 0 || n > 6 || d > (1usize << n) {
        return Err(Error::InvalidDimension(format!(
            "qudit of dimension {d} does not fit on {n} photons"
        )));
    }
    let carrier = psi
        .amplitudes()
        .iter()
        .enumerate()
        .fold(ModeState::default(), |acc, (k, &c)| acc.add(&carrier_basis(k, n).scale(c)));
    let fused = pbs_convert(&carrier.product(&diagonal_ancillas(n)));
    let kept = coincidence_amplitudes(&fused);
    let side = 1usize << n;
    let mut restricted = vec![Complex64::new(0.0, 0.0); d * d];
    for ka in 0..side {
        for kb in 0..side {
            let amp = kept[ka * side + kb];
            if ka < d && kb < d {
                restricted[ka * d + kb] = amp;
            } else {
                debug_assert!(amp.norm() < PRUNE_TOL, "fusion leaked outside the qudit subspace");
            }
        }
    }
    let p: f64 = restricted.iter().map(|z| z.norm_sqr()).sum();
    if p < PRUNE_TOL {
        return Err(Error::PostSelectionEmpty);
    }
    let state = PureState::normalized(restricted)?;
    Ok(FusionOutcome {
        state: FusionState::Pure(PureStateRepr::from(&state)),
        success_probability: (p / fused.norm_sqr()).clamp(0.0, 1.0),
        noise_coefficient: None,
    })
}

/// Carrier from a source with efficiency `p`:
/// `[√(1−p) + √p(β a_H^{A†} + γ a_V^{A†})]|0⟩`.
pub fn probabilistic_carrier(psi: &PureState, p: f64) -> ModeState {
    let amps = psi.amplitudes();
    ModeState::vacuum()
        .scale(Complex64::new((1.0 - p).sqrt(), 0.0))
        .add(&single_photon(Site::A, 0, amps[0], amps[1]).scale(Complex64::new(p.sqrt(), 0.0)))
}

/// Diagonally polarised coherent pulse at site B, truncated after
/// `max_photons` (unnormalised, `Σ_k amp^k/k! (a_D†)^k |0⟩`).
pub fn coherent_pulse(amp: Complex64, max_photons: u32) -> ModeState {
    let h = Mode::new(Polarization::H, Site::B, 0);
    let v = Mode::new(Polarization::V, Site::B, 0);
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let apply_d = |st: &ModeState| st.create(h).scale(s).add(&st.create(v).scale(s));
    let mut power = ModeState::vacuum();
    let mut acc = ModeState::vacuum();
    let mut coeff = Complex64::new(1.0, 0.0);
    for k in 1..=max_photons {
        power = apply_d(&power);
        coeff = coeff * amp / k as f64;
        acc = acc.add(&power.scale(coeff));
    }
    acc
}

/// Fusion of an imperfect single photon (efficiency `p`) with a weak
/// coherent pulse of amplitude `amp`, truncated at second order.
///
/// The coincidence state is `(β|HH⟩ − γe^{iφ}|VV⟩) + η|VH⟩` with noise
/// coefficient `η = i√((1−p)/(2p))·amp`; the returned state is its
/// normalisation. At `amp = 0` no coincidence ever occurs, so the
/// `amp → 0` limit is returned with zero success probability.
pub fn fuse_coherent(psi: &PureState, p: f64, amp: Complex64) -> Result<FusionOutcome> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: psi.dim(),
        });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("source efficiency must be in (0, 1], got {p}")));
    }
    if amp.norm() > 0.3 {
        log::warn!("coherent amplitude {} is not small; second-order truncation is inaccurate", amp.norm());
    }
    let ideal = ideal_fusion_vector(psi);
    if amp.norm() == 0.0 {
        return Ok(FusionOutcome {
            state: FusionState::Pure(PureStateRepr::from(&PureState::normalized(ideal)?)),
            success_probability: 0.0,
            noise_coefficient: Some(Complex64::new(0.0, 0.0)),
        });
    }
    let input = probabilistic_carrier(psi, p).product(&coherent_pulse(amp, 2));
    let kept = coincidence_amplitudes(&pbs_convert(&input));
    let scale: Complex64 = ideal.iter().zip(&kept).map(|(w, k)| w.conj() * k).sum();
    if scale.norm() < PRUNE_TOL {
        return Err(Error::PostSelectionEmpty);
    }
    let noise = kept[2] / scale;
    debug_assert!(kept[1].norm() < PRUNE_TOL);
    let mut out = ideal;
    out[2] += noise;
    let kept_norm: f64 = kept.iter().map(|z| z.norm_sqr()).sum();
    Ok(FusionOutcome {
        state: FusionState::Pure(PureStateRepr::from(&PureState::normalized(out)?)),
        success_probability: (kept_norm / input.norm_sqr()).clamp(0.0, 1.0),
        noise_coefficient: Some(noise),
    })
}

/// `β|HH⟩ − γe^{iφ}|VV⟩` for `ψ = β|H⟩ + γe^{iφ}|V⟩`.
fn ideal_fusion_vector(psi: &PureState) -> Vec<Complex64> {
    let a = psi.amplitudes();
    let z = Complex64::new(0.0, 0.0);
    vec![a[0], z, z, -a[1]]
}

/// Closed-form noise coefficient `i√((1−p)/(2p))·amp`.
pub fn coherent_noise_coefficient(p: f64, amp: Complex64) -> Complex64 {
    Complex64::new(0.0, ((1.0 - p) / (2.0 * p)).sqrt()) * amp
}

/// `(−1)^{popcount k}`.
pub fn parity_sign(k: usize) -> f64 {
    if k.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}
