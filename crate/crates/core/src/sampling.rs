//! Seeded test-matrix generators.
//!
//! Streams are reproducible across implementations: the generator is
//! ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`), uniforms are the
//! standard 53-bit `f64` draws on `[0, 1)`, and Gaussians come in pairs
//! from Box-Muller, `r = sqrt(-2 ln(1 - u1))`, `(r cos 2 pi u2, r sin 2 pi u2)`.
//! Complex Gaussian entries are filled row-major, real part first.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ONE};
use crate::xu_group::{conjugate_by_dft, embed_core};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Unitary,
    Xu,
    CirculantXu,
    Zu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n: usize,
    pub kind: SampleKind,
    pub seed: u64,
}

impl SampleSpec {
    pub fn draw(&self) -> Result<ComplexMatrix> {
        match self.kind {
            SampleKind::Unitary => haar_unitary(self.n, self.seed),
            SampleKind::Xu => random_xu(self.n, self.seed),
            SampleKind::CirculantXu => random_circulant_xu(self.n, self.seed),
            SampleKind::Zu => random_zu(self.n, self.seed),
        }
    }
}

pub(crate) fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn gaussian_pair(rng: &mut impl Rng) -> (f64, f64) {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    let r = (-2.0 * (1.0 - u1).ln()).sqrt();
    let (s, c) = (2.0 * PI * u2).sin_cos();
    (r * c, r * s)
}

pub(crate) fn random_phase(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * rng.random::<f64>())
}

/// Haar-distributed unitary: Gram-Schmidt on the columns of a complex
/// Gaussian matrix, which fixes the triangular factor's diagonal positive.
pub fn haar_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut rng = rng(seed);
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    let mut g = ComplexMatrix::zeros(n);
    for k in 0..n {
        for l in 0..n {
            let (a, b) = gaussian_pair(&mut rng);
            g[(k, l)] = Complex64::new(a * norm, b * norm);
        }
    }

    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|l| (0..n).map(|k| g[(k, l)]).collect()).collect();
    for j in 0..n {
        // two passes of modified Gram-Schmidt keep U^H U = I near machine precision
        for _ in 0..2 {
            for i in 0..j {
                let proj: Complex64 = cols[i].iter().zip(&cols[j]).map(|(q, v)| q.conj() * v).sum();
                let qi = cols[i].clone();
                for (v, q) in cols[j].iter_mut().zip(&qi) {
                    *v -= proj * q;
                }
            }
        }
        let len = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v /= len;
        }
    }
    Ok(ComplexMatrix::from_fn(n, |k, l| cols[l][k]))
}

/// Diagonal unitary with entry (1,1) = 1 and uniform phases elsewhere.
pub fn random_zu(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut rng = rng(seed);
    let diag: Vec<Complex64> = (0..n)
        .map(|k| if k == 0 { ONE } else { random_phase(&mut rng) })
        .collect();
    Ok(ComplexMatrix::diagonal(&diag))
}

/// `embed_core(haar_unitary(n - 1, seed))`.
pub fn random_xu(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::UnsupportedDimension {
            n,
            reason: "random XU samples need n >= 2".into(),
        });
    }
    embed_core(&haar_unitary(n - 1, seed)?, 1e-8)
}

/// `F Z F^-1` for `Z = random_zu(n, seed)`.
pub fn random_circulant_xu(n: usize, seed: u64) -> Result<ComplexMatrix> {
    Ok(conjugate_by_dft(&random_zu(n, seed)?))
}
