//! Bijection between the Bloch ball and HSL colours, plus HSL↔RGB.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::BlochVector;

const BALL_TOL: f64 = 1e-10;

/// Hue in turns `[0, 1)`, saturation and luminosity in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorHSL {
    pub h: f64,
    pub s: f64,
    pub l: f64,
}

impl ColorHSL {
    pub fn new(h: f64, s: f64, l: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&h) || !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&l) {
            return Err(Error::InvalidParameter(format!("HSL out of range: ({h}, {s}, {l})")));
        }
        Ok(Self { h, s, l })
    }
}

/// Channels in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorRGB {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl ColorRGB {
    pub fn new(r: f64, g: f64, b: f64) -> Result<Self> {
        if [r, g, b].iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::InvalidParameter(format!("RGB out of range: ({r}, {g}, {b})")));
        }
        Ok(Self { r, g, b })
    }

    pub fn from_u8(px: [u8; 3]) -> Self {
        Self {
            r: px[0] as f64 / 255.0,
            g: px[1] as f64 / 255.0,
            b: px[2] as f64 / 255.0,
        }
    }

    /// Rounds each channel to the nearest 8-bit level.
    pub fn to_u8(&self) -> [u8; 3] {
        let q = |c: f64| (c.clamp(0.0, 1.0) * 255.0).round() as u8;
        [q(self.r), q(self.g), q(self.b)]
    }
}

/// `h = ½ + atan2(y, x)/2π`, `s = (x²+y²)/(1−z²)`, `l = (1+z)/2`.
/// On the z axis `h = 0`; at the poles `s = 0`.
pub fn bloch_to_hsl(v: &BlochVector) -> Result<ColorHSL> {
    if !v.is_physical(BALL_TOL) {
        return Err(Error::NonPhysical(v.norm()));
    }
    let r2 = v.x * v.x + v.y * v.y;
    let mut h = if r2 == 0.0 { 0.0 } else { 0.5 + v.y.atan2(v.x) / (2.0 * PI) };
    if h >= 1.0 {
        h = 0.0;
    }
    let rim = 1.0 - v.z * v.z;
    let s = if rim <= 0.0 { 0.0 } else { (r2 / rim).min(1.0) };
    let l = ((1.0 + v.z) / 2.0).clamp(0.0, 1.0);
    Ok(ColorHSL { h, s, l })
}

pub fn hsl_to_bloch(c: &ColorHSL) -> BlochVector {
    let z = 2.0 * c.l - 1.0;
    let rho = (c.s * (1.0 - z * z)).max(0.0).sqrt();
    let phi = 2.0 * PI * (c.h - 0.5);
    BlochVector::new(rho * phi.cos(), rho * phi.sin(), z)
}

pub fn hsl_to_rgb(c: &ColorHSL) -> ColorRGB {
    let a = c.s * c.l.min(1.0 - c.l);
    let f = |n: f64| {
        let k = (n + 12.0 * c.h).rem_euclid(12.0);
        (c.l - a * (k - 3.0).min(9.0 - k).clamp(-1.0, 1.0)).clamp(0.0, 1.0)
    };
    ColorRGB {
        r: f(0.0),
        g: f(8.0),
        b: f(4.0),
    }
}

/// Inverse of `hsl_to_rgb`; greys get `h = s = 0`.
pub fn rgb_to_hsl(c: &ColorRGB) -> ColorHSL {
    let max = c.r.max(c.g).max(c.b);
    let min = c.r.min(c.g).min(c.b);
    let l = (max + min) / 2.0;
    let d = max - min;
    if d <= 0.0 {
        return ColorHSL { h: 0.0, s: 0.0, l };
    }
    let s = (d / (1.0 - (2.0 * l - 1.0).abs())).min(1.0);
    let sector = if max == c.r {
        ((c.g - c.b) / d).rem_euclid(6.0)
    } else if max == c.g {
        (c.b - c.r) / d + 2.0
    } else {
        (c.r - c.g) / d + 4.0
    };
    let mut h = sector / 6.0;
    if h >= 1.0 {
        h = 0.0;
    }
    ColorHSL { h, s, l }
}

pub fn rgb_to_bloch(c: &ColorRGB) -> BlochVector {
    hsl_to_bloch(&rgb_to_hsl(c))
}

pub fn bloch_to_rgb(v: &BlochVector) -> Result<ColorRGB> {
    Ok(hsl_to_rgb(&bloch_to_hsl(v)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: (f64, f64, f64), b: (f64, f64, f64), tol: f64) -> bool {
        (a.0 - b.0).abs() < tol && (a.1 - b.1).abs() < tol && (a.2 - b.2).abs() < tol
    }

    #[test]
    fn pole_and_equator_examples() {
        let white = bloch_to_hsl(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!((white.h, white.s, white.l), (0.0, 0.0, 1.0));
        assert_eq!(hsl_to_rgb(&white).to_u8(), [255, 255, 255]);

        let black = bloch_to_hsl(&BlochVector::new(0.0, 0.0, -1.0)).unwrap();
        assert_eq!(black.l, 0.0);
        assert_eq!(hsl_to_rgb(&black).to_u8(), [0, 0, 0]);

        let x = bloch_to_hsl(&BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        assert!(close((x.h, x.s, x.l), (0.5, 1.0, 0.5), 1e-15));
        let back = hsl_to_bloch(&x);
        assert!(close((back.x, back.y, back.z), (1.0, 0.0, 0.0), 1e-15));

        assert!(bloch_to_hsl(&BlochVector::new(1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn rgb_examples() {
        let rgb = |h, s, l| {
            let c = hsl_to_rgb(&ColorHSL::new(h, s, l).unwrap());
            (c.r, c.g, c.b)
        };
        assert!(close(rgb(0.3, 0.7, 1.0), (1.0, 1.0, 1.0), 1e-15));
        assert!(close(rgb(0.0, 1.0, 0.5), (1.0, 0.0, 0.0), 1e-15));
        assert!(close(rgb(0.5, 1.0, 0.5), (0.0, 1.0, 1.0), 1e-15));
    }

    #[test]
    fn hue_fold_at_negative_x_axis() {
        let c = bloch_to_hsl(&BlochVector::new(-0.5, 0.0, 0.0)).unwrap();
        assert!((0.0..1.0).contains(&c.h));
        let v = hsl_to_bloch(&c);
        assert!((v.x + 0.5).abs() < 1e-15 && v.y.abs() < 1e-15);
    }

    #[test]
    fn corner_colours_round_trip() {
        for bits in 0..8u8 {
            let px = [
                if bits & 4 != 0 { 255 } else { 0 },
                if bits & 2 != 0 { 255 } else { 0 },
                if bits & 1 != 0 { 255 } else { 0 },
            ];
            let v = rgb_to_bloch(&ColorRGB::from_u8(px));
            assert_eq!(bloch_to_rgb(&v).unwrap().to_u8(), px);
        }
    }
}
