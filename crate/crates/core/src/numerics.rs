//! Complex scalars, dense square complex matrices, roots of unity, the
//! discrete Fourier matrix and the matrix-class predicates.
//!
//! Indices are 0-based in code. Documentation and every external format
//! use the 1-based convention of the underlying mathematics, so entry
//! `(k, l)` in prose is `m[(k - 1, l - 1)]` here.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutations::satisfies_pitches;

/// Default tolerance for every membership predicate.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `e^{i 2 pi a / n}`, with the exponent reduced mod `n` before the
/// trigonometric evaluation.
pub fn root_of_unity(n: usize, a: i64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let k = a.rem_euclid(n as i64);
    if k == 0 {
        return Ok(ONE);
    }
    Ok(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
}

/// Unit-modulus phase of `z`, or 1 when `z` is too small to carry a phase.
pub(crate) fn phase_or_one(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > 1e-300 && r.is_finite() {
        z / r
    } else {
        ONE
    }
}

/// Dense square matrix of complex entries, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |k, l| if k == l { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for k in 0..dim {
            for l in 0..dim {
                data.push(f(k, l));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from rows, rejecting empty, ragged or non-finite input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (k, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Malformed(format!(
                    "row {} has {} entries, expected {dim}",
                    k + 1,
                    row.len()
                )));
            }
            for (l, z) in row.into_iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::Malformed(format!("non-finite entry at ({}, {})", k + 1, l + 1)));
                }
                data.push(z);
            }
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        Self::from_fn(entries.len(), |k, l| if k == l { entries[k] } else { ZERO })
    }

    /// `diag(1, core)`: the core placed in the lower-right block.
    pub fn bordered(core: &ComplexMatrix) -> Self {
        Self::from_fn(core.dim + 1, |k, l| match (k, l) {
            (0, 0) => ONE,
            (0, _) | (_, 0) => ZERO,
            _ => core[(k - 1, l - 1)],
        })
    }

    /// Lower-right `(n-1) x (n-1)` block.
    pub fn lower_block(&self) -> Self {
        Self::from_fn(self.dim - 1, |k, l| self[(k + 1, l + 1)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        self.rows().map(<[Complex64]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |k, l| self[(l, k)].conj())
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `diag(left) * self * diag(right)`.
    pub fn diag_scaled(&self, left: &[Complex64], right: &[Complex64]) -> Self {
        Self::from_fn(self.dim, |k, l| left[k] * self[(k, l)] * right[l])
    }

    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise max-modulus difference; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M^H M - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (k, l): (usize, usize)) -> &Complex64 {
        assert!(k < self.dim && l < self.dim, "index ({k}, {l}) out of bounds");
        &self.data[k * self.dim + l]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (k, l): (usize, usize)) -> &mut Complex64 {
        assert!(k < self.dim && l < self.dim, "index ({k}, {l}) out of bounds");
        &mut self.data[k * self.dim + l]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            for j in 0..n {
                let a = self.data[k * n + j];
                if a == ZERO {
                    continue;
                }
                for l in 0..n {
                    out.data[k * n + l] += a * rhs.data[j * n + l];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.rows() {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>10.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Wire form: `{"dim": n, "entries": [[[re, im], ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            dim: self.dim,
            entries: self.rows().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.dim {
            return Err(serde::de::Error::custom(format!(
                "dim is {} but {} rows given",
                repr.dim,
                repr.entries.len()
            )));
        }
        let rows = repr
            .entries
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// `F_{kl} = n^{-1/2} w^{(k-1)(l-1)}` with `w = e^{i 2 pi / n}`.
pub fn dft_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let norm = 1.0 / (n as f64).sqrt();
    let mut f = ComplexMatrix::zeros(n);
    for k in 0..n {
        for l in 0..n {
            f[(k, l)] = root_of_unity(n, (k * l) as i64)? * norm;
        }
    }
    Ok(f)
}

/// Row sums and column sums, in index order.
pub fn line_sums(m: &ComplexMatrix) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = m.dim();
    let mut rows = vec![ZERO; n];
    let mut cols = vec![ZERO; n];
    for k in 0..n {
        for l in 0..n {
            rows[k] += m[(k, l)];
            cols[l] += m[(k, l)];
        }
    }
    (rows, cols)
}

/// Labels and values of all `2n` line sums, rows first.
pub(crate) fn labelled_line_sums(m: &ComplexMatrix) -> Vec<(String, Complex64)> {
    let (rows, cols) = line_sums(m);
    rows.into_iter()
        .enumerate()
        .map(|(k, s)| (format!("row {}", k + 1), s))
        .chain(
            cols.into_iter()
                .enumerate()
                .map(|(l, s)| (format!("column {}", l + 1), s)),
        )
        .collect()
}

/// Common value of all line sums when they agree pairwise within `tol`.
pub fn common_line_sum(m: &ComplexMatrix, tol: f64) -> Option<Complex64> {
    let (rows, cols) = line_sums(m);
    let all: Vec<Complex64> = rows.into_iter().chain(cols).collect();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            if (a - b).norm() > tol {
                return None;
            }
        }
    }
    let mean = all.iter().sum::<Complex64>() / all.len() as f64;
    Some(mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixClass {
    pub is_unitary: bool,
    pub is_xu: bool,
    pub is_zu: bool,
    pub is_circulant: bool,
    pub is_anticirculant: bool,
    pub line_sum: Option<Complex64>,
}

pub fn classify(m: &ComplexMatrix, tol: f64) -> MatrixClass {
    let n = m.dim();
    let is_unitary = m.is_unitary(tol);
    let line_sum = common_line_sum(m, tol);
    let is_xu = is_unitary && line_sum.is_some_and(|s| (s - ONE).norm() <= tol);

    let is_diagonal = (0..n).all(|k| (0..n).all(|l| k == l || m[(k, l)].norm() <= tol));
    let is_zu = is_diagonal && (0..n).all(|k| (m[(k, k)].norm() - 1.0).abs() <= tol) && (m[(0, 0)] - ONE).norm() <= tol;

    MatrixClass {
        is_unitary,
        is_xu,
        is_zu,
        is_circulant: satisfies_pitches(m, 1, 1, tol),
        is_anticirculant: satisfies_pitches(m, n as i64 - 1, n as i64 - 1, tol),
        line_sum,
    }
}

/// Checks XU membership, naming the worst line sum on failure.
pub(crate) fn require_xu(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let residual = m.unitarity_residual();
    if residual > tol {
        return Err(Error::NotUnitary { residual });
    }
    // first of the worst lines
    let (line, sum) = labelled_line_sums(m)
        .into_iter()
        .rev()
        .max_by(|a, b| (a.1 - ONE).norm().total_cmp(&(b.1 - ONE).norm()))
        .expect("dimension is at least 1");
    if (sum - ONE).norm() > tol {
        return Err(Error::NotXu { n: m.dim(), line, sum });
    }
    Ok(())
}

pub(crate) fn require_unitary(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let residual = m.unitarity_residual();
    if residual > tol {
        Err(Error::NotUnitary { residual })
    } else {
        Ok(())
    }
}
