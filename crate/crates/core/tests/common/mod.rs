//! Test-only reference implementations.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;

/// Polynomial in the four creation operators `a_H^A†, a_V^A†, a_H^B†,
/// a_V^B†` (exponent order). Acting on the vacuum it is a Fock state whose
/// amplitude on `|n⟩` is `coeff·√(Π n_i!)`.
#[derive(Clone, Debug, Default)]
pub struct Poly(pub BTreeMap<[u8; 4], Complex64>);

pub const HA: usize = 0;
pub const VA: usize = 1;
pub const HB: usize = 2;
pub const VB: usize = 3;

impl Poly {
    pub fn constant(c: Complex64) -> Self {
        let mut m = BTreeMap::new();
        m.insert([0; 4], c);
        Poly(m)
    }

    pub fn linear(coeffs: [Complex64; 4]) -> Self {
        let mut m = BTreeMap::new();
        for (i, c) in coeffs.into_iter().enumerate() {
            let mut e = [0u8; 4];
            e[i] = 1;
            *m.entry(e).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Poly(m)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (e, c) in &other.0 {
            *m.entry(*e).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Poly(m)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Poly(self.0.iter().map(|(e, c)| (*e, c * s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = BTreeMap::new();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                *m.entry(e).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
        Poly(m)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::constant(Complex64::new(1.0, 0.0)), |acc, _| acc.mul(self))
    }

    /// Substitutes `a_V^A† → i a_V^B†` and `a_V^B† → i a_V^A†`.
    pub fn beam_splitter(&self) -> Self {
        let i = Complex64::new(0.0, 1.0);
        let mut m = BTreeMap::new();
        for (e, c) in &self.0 {
            let moved = [e[HA], e[VB], e[HB], e[VA]];
            *m.entry(moved).or_insert(Complex64::new(0.0, 0.0)) += c * i.powu((e[VA] + e[VB]) as u32);
        }
        Poly(m)
    }

    pub fn fock_norm_sqr(&self) -> f64 {
        let fact = |n: u8| (1..=n as u64).product::<u64>() as f64;
        self.0
            .iter()
            .map(|(e, c)| c.norm_sqr() * e.iter().map(|&n| fact(n)).product::<f64>())
            .sum()
    }

    /// Amplitudes with exactly one photon at each site, indexed
    /// `2·pol_A + pol_B` with `H = 0`, `V = 1`.
    pub fn coincidences(&self) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (e, c) in &self.0 {
            if e[HA] + e[VA] == 1 && e[HB] + e[VB] == 1 {
                out[2 * e[VA] as usize + e[VB] as usize] += c;
            }
        }
        out
    }
}

/// Diagonal photon `(a_H† + a_V†)/√2` at site B.
pub fn diagonal_b() -> Poly {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    Poly::linear([z, z, s, s])
}

/// `Σ_{k ≤ max} amp^k/k! (a_D†)^k`.
pub fn coherent_b(amp: Complex64, max: u32) -> Poly {
    let d = diagonal_b();
    let mut acc = Poly::default();
    let mut coeff = Complex64::new(1.0, 0.0);
    for k in 0..=max {
        if k > 0 {
            coeff = coeff * amp / k as f64;
        }
        acc = acc.add(&d.pow(k).scale(coeff));
    }
    acc
}

/// Coincidence amplitudes of an imperfect single photon `√(1−p) +
/// √p(β a_H^A† + γ a_V^A†)` fused with a coherent pulse expanded to three
/// photons.
pub fn coherent_fusion_oracle(beta: Complex64, gamma: Complex64, p: f64, amp: Complex64) -> [Complex64; 4] {
    let z = Complex64::new(0.0, 0.0);
    let carrier = Poly::constant(Complex64::new((1.0 - p).sqrt(), 0.0))
        .add(&Poly::linear([beta, gamma, z, z]).scale(Complex64::new(p.sqrt(), 0.0)));
    carrier.mul(&coherent_b(amp, 3)).beam_splitter().coincidences()
}

/// Coincidence amplitudes and total norm for `β|H⟩ + γ|V⟩` fused with `|D⟩`.
pub fn ideal_fusion_oracle(beta: Complex64, gamma: Complex64) -> ([Complex64; 4], f64) {
    let z = Complex64::new(0.0, 0.0);
    let input = Poly::linear([beta, gamma, z, z]).mul(&diagonal_b());
    let norm = input.fock_norm_sqr();
    (input.beam_splitter().coincidences(), norm)
}

/// Reduced matrix of a `da·db` square matrix (A-major indices).
pub fn trace_out(m: &nalgebra::DMatrix<Complex64>, da: usize, db: usize, keep_a: bool) -> nalgebra::DMatrix<Complex64> {
    let k = if keep_a { da } else { db };
    let mut out = nalgebra::DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let mut s = Complex64::new(0.0, 0.0);
            for t in 0..(if keep_a { db } else { da }) {
                s += if keep_a {
                    m[(i * db + t, j * db + t)]
                } else {
                    m[(t * db + i, t * db + j)]
                };
            }
            out[(i, j)] = s;
        }
    }
    out
}
