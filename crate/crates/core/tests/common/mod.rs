//! Oracles shared by the integration tests. Nothing here calls the
//! library's eigensolver.

#![allow(dead_code)]

use pulseforge::quantum::{sigma_x, sigma_y, Matrix3};
use pulseforge::{Unitary, C64};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// exp(−iHt) by Taylor series with scaling and squaring.
pub fn expm_taylor(h: &Matrix3, t: f64) -> Matrix3 {
    let a = h.scale(c(0.0, -t));
    let norm: f64 = a.0.iter().flatten().map(|z| z.norm()).sum();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = a.scale_real(scale);
    let mut term = Matrix3::identity();
    let mut sum = Matrix3::identity();
    for k in 1..=24 {
        term = (term * a).scale_real(1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Block projector |p⟩⟨p| + |q⟩⟨q| for the labelled levels.
pub fn block_projector(p: u8, q: u8) -> Matrix3 {
    let sx = sigma_x(p, q).unwrap();
    sx * sx
}

/// exp(iφσ) for σ with σ² equal to its block projector P:
/// (1 − P) + cos φ P + i sin φ σ.
pub fn block_rotation(sigma: &Matrix3, phi: f64) -> Matrix3 {
    let p = *sigma * *sigma;
    Matrix3::identity() - p + p.scale_real(phi.cos()) + sigma.scale(c(0.0, phi.sin()))
}

pub fn sy20() -> Matrix3 {
    sigma_y(2, 0).unwrap()
}

pub fn sy23() -> Matrix3 {
    sigma_y(2, 3).unwrap()
}

/// Literal entries of the target gate.
pub fn usq_entries() -> Matrix3 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix3::from_real([[s, s, 0.0], [0.0, 0.0, -1.0], [-s, s, 0.0]])
}

pub fn random_hermitian<R: Rng>(rng: &mut R, scale: f64) -> Matrix3 {
    let mut m = Matrix3::zeros();
    for i in 0..3 {
        m.0[i][i] = c(rng.gen_range(-scale..scale), 0.0);
        for j in i + 1..3 {
            let z = c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            m.0[i][j] = z;
            m.0[j][i] = z.conj();
        }
    }
    m
}

/// Haar-ish random unitary: exponential of a random Hermitian generator.
pub fn random_unitary<R: Rng>(rng: &mut R) -> Unitary {
    let h = random_hermitian(rng, 2.0);
    Unitary::new(expm_taylor(&h, 1.0)).unwrap()
}
