//! Tripartite secret sharing of colour images through three maskers whose
//! disks are orthogonal.
//!
//! Each pixel is encoded as a Bloch vector, masked with `U_{π/2}^0`,
//! `U_{π/2}^{π/2}` and `U_0^0`, and Bob's marginal from each masking is a
//! share. A single share fixes one Bloch coordinate; all three pin the
//! point down.

mod codec;
mod files;

pub use codec::{bloch_to_hsl, bloch_to_rgb, hsl_to_bloch, hsl_to_rgb, rgb_to_bloch, rgb_to_hsl, ColorHSL, ColorRGB};
pub use files::{read_ppm, write_ppm, RgbImage, ShareFile};

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maskers::{masked_marginals, qubit_masker, Masker};
use crate::qcore::{bloch_to_density, BlochVector, DensityMatrix};

/// Norm excess above which a reconstruction is treated as forged.
pub const TAMPER_TOL: f64 = 1e-6;

/// Which of the three sharing maskers produced a share.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MaskerId {
    /// `U_{π/2}^0`: share carries x.
    X,
    /// `U_{π/2}^{π/2}`: share carries y.
    Y,
    /// `U_0^0`: share carries z.
    Z,
}

impl MaskerId {
    pub const ALL: [MaskerId; 3] = [MaskerId::X, MaskerId::Y, MaskerId::Z];

    pub fn masker(&self) -> Masker {
        match self {
            MaskerId::X => qubit_masker(FRAC_PI_2, 0.0),
            MaskerId::Y => qubit_masker(FRAC_PI_2, FRAC_PI_2),
            MaskerId::Z => qubit_masker(0.0, 0.0),
        }
    }

    pub fn index(&self) -> usize {
        *self as usize
    }

    pub fn to_byte(&self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_byte(b: u8) -> Result<Self> {
        match b {
            1 => Ok(MaskerId::X),
            2 => Ok(MaskerId::Y),
            3 => Ok(MaskerId::Z),
            _ => Err(Error::ShareFormat(format!("unknown masker id {b}"))),
        }
    }
}

/// Bob's marginal from one of the sharing maskers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PixelShare {
    masker_id: MaskerId,
    marginal: DensityMatrix,
}

impl PixelShare {
    pub fn new(masker_id: MaskerId, marginal: DensityMatrix) -> Result<Self> {
        if marginal.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: marginal.dim(),
            });
        }
        Ok(Self { masker_id, marginal })
    }

    /// Share whose marginal is `diag((1+w)/2, (1−w)/2)`.
    pub fn from_population_difference(masker_id: MaskerId, w: f64) -> Result<Self> {
        Self::new(masker_id, DensityMatrix::diagonal(&[(1.0 + w) / 2.0, (1.0 - w) / 2.0])?)
    }

    pub fn masker_id(&self) -> MaskerId {
        self.masker_id
    }

    pub fn marginal(&self) -> &DensityMatrix {
        &self.marginal
    }

    /// `ρ₀₀ − ρ₁₁`.
    pub fn population_difference(&self) -> f64 {
        (self.marginal.get(0, 0) - self.marginal.get(1, 1)).re
    }
}

/// Masks `v` with the three sharing maskers and returns Bob's marginals in
/// x, y, z order.
pub fn share_pixel(v: &BlochVector) -> Result<[PixelShare; 3]> {
    let rho = bloch_to_density(v)?;
    let share = |id: MaskerId| -> Result<PixelShare> {
        let (_, bob) = masked_marginals(&id.masker(), &rho)?;
        PixelShare::new(id, bob)
    };
    Ok([share(MaskerId::X)?, share(MaskerId::Y)?, share(MaskerId::Z)?])
}

/// Assembles a Bloch vector from the three population differences.
pub fn reconstruct_from_components(w: [f64; 3]) -> Result<BlochVector> {
    let v = BlochVector::new(w[0], w[1], w[2]);
    let n = v.norm();
    if !n.is_finite() || n > 1.0 + TAMPER_TOL {
        return Err(Error::TamperDetected { norm: n });
    }
    Ok(v)
}

/// Intersects the three share disks. Shares may come in any order but
/// must cover each masker once.
pub fn reconstruct_pixel(s1: &PixelShare, s2: &PixelShare, s3: &PixelShare) -> Result<BlochVector> {
    let mut w = [None; 3];
    for s in [s1, s2, s3] {
        let slot = &mut w[s.masker_id.index()];
        if slot.is_some() {
            return Err(Error::MaskerSet(format!("{:?} appears twice", s.masker_id)));
        }
        *slot = Some(s.population_difference());
    }
    let w = [w[0].unwrap(), w[1].unwrap(), w[2].unwrap()];
    reconstruct_from_components(w)
}

/// Splits an image into three share files, one per masker.
pub fn share_image(img: &RgbImage) -> Result<[ShareFile; 3]> {
    if img.width() == 0 || img.height() == 0 {
        return Err(Error::ImageFormat("empty image".into()));
    }
    let n = img.pixels().len();
    let mut w: [Vec<f64>; 3] = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    for px in img.pixels() {
        let v = rgb_to_bloch(&ColorRGB::from_u8(*px));
        for s in share_pixel(&v)? {
            w[s.masker_id.index()].push(s.population_difference());
        }
    }
    let [wx, wy, wz] = w;
    Ok([
        ShareFile::new(MaskerId::X, img.width(), img.height(), wx)?,
        ShareFile::new(MaskerId::Y, img.width(), img.height(), wy)?,
        ShareFile::new(MaskerId::Z, img.width(), img.height(), wz)?,
    ])
}

/// A pixel whose shares reconstruct outside the Bloch ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TamperedPixel {
    pub x: u32,
    pub y: u32,
    pub norm: f64,
}

/// Agreement between an original image and its reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// Mean of the per-channel Pearson correlations.
    pub correlation: f64,
    pub per_channel: [f64; 3],
    /// Set when a channel has zero variance; that channel reports 1.0 if
    /// both images agree on it and 0.0 otherwise.
    pub constant_channel: bool,
    /// Largest absolute channel difference, in units of full scale.
    pub max_channel_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub image: RgbImage,
    /// Forged pixels; they are rendered after projection onto the sphere.
    pub tampered: Vec<TamperedPixel>,
    pub comparison: Option<Comparison>,
}

/// Recombines three share files. With `original`, also scores the result.
pub fn reconstruct_image(shares: [&ShareFile; 3], original: Option<&RgbImage>) -> Result<Reconstruction> {
    let mut slots: [Option<&ShareFile>; 3] = [None; 3];
    for s in shares {
        let slot = &mut slots[s.masker_id().index()];
        if slot.is_some() {
            return Err(Error::MaskerSet(format!("{:?} appears twice", s.masker_id())));
        }
        *slot = Some(s);
    }
    let [sx, sy, sz] = [slots[0].unwrap(), slots[1].unwrap(), slots[2].unwrap()];
    let (w, h) = (sx.width(), sx.height());
    for s in [sy, sz] {
        if (s.width(), s.height()) != (w, h) {
            return Err(Error::ImageFormat(format!(
                "share sizes differ: {}x{} vs {}x{}",
                w,
                h,
                s.width(),
                s.height()
            )));
        }
    }
    if let Some(o) = original {
        if (o.width(), o.height()) != (w, h) {
            return Err(Error::ImageFormat(format!(
                "original is {}x{}, shares are {}x{}",
                o.width(),
                o.height(),
                w,
                h
            )));
        }
    }

    let mut pixels = Vec::with_capacity(sx.values().len());
    let mut tampered = Vec::new();
    for (i, ((&a, &b), &c)) in sx.values().iter().zip(sy.values()).zip(sz.values()).enumerate() {
        let v = match reconstruct_from_components([a, b, c]) {
            Ok(v) => v,
            Err(Error::TamperDetected { norm }) => {
                tampered.push(TamperedPixel {
                    x: (i % w as usize) as u32,
                    y: (i / w as usize) as u32,
                    norm,
                });
                if norm.is_finite() && norm > 0.0 {
                    BlochVector::new(a / norm, b / norm, c / norm)
                } else {
                    BlochVector::new(0.0, 0.0, 0.0)
                }
            }
            Err(e) => return Err(e),
        };
        pixels.push(bloch_to_rgb(&v)?.to_u8());
    }
    let image = RgbImage::new(w, h, pixels)?;
    let comparison = original.map(|o| compare_images(o, &image)).transpose()?;
    Ok(Reconstruction {
        image,
        tampered,
        comparison,
    })
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    (saa > 0.0 && sbb > 0.0).then(|| sab / (saa * sbb).sqrt())
}

/// Per-channel Pearson correlation and maximum error between two images.
pub fn compare_images(original: &RgbImage, other: &RgbImage) -> Result<Comparison> {
    if (original.width(), original.height()) != (other.width(), other.height()) {
        return Err(Error::ImageFormat("images differ in size".into()));
    }
    let mut per_channel = [0.0; 3];
    let mut constant = false;
    let mut max_err = 0u8;
    for ch in 0..3 {
        let a: Vec<f64> = original.pixels().iter().map(|p| p[ch] as f64 / 255.0).collect();
        let b: Vec<f64> = other.pixels().iter().map(|p| p[ch] as f64 / 255.0).collect();
        per_channel[ch] = match pearson(&a, &b) {
            Some(r) => r,
            None => {
                constant = true;
                if a == b {
                    1.0
                } else {
                    0.0
                }
            }
        };
        for (p, q) in original.pixels().iter().zip(other.pixels()) {
            max_err = max_err.max(p[ch].abs_diff(q[ch]));
        }
    }
    Ok(Comparison {
        correlation: per_channel.iter().sum::<f64>() / 3.0,
        per_channel,
        constant_channel: constant,
        max_channel_error: max_err as f64 / 255.0,
    })
}
