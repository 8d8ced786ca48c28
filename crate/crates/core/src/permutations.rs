//! Permutations in one-line notation and the structured families used by
//! the decompositions: supercirculant permutations `C_{l,x}`, the cyclic
//! shift `Q`, the family `D_j = Q^{j-1} D_1`, and the van der Waerden matrix.
//!
//! Matrix convention: the permutation matrix of `sigma` has its unit entry
//! of row `k` in column `sigma(k)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ONE};

/// A bijection on `{1..n}`. Ordering is lexicographic on the one-line image.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // 0-based images
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    /// From 1-based one-line notation `[sigma(1), ..., sigma(n)]`.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        let zero: Option<Vec<usize>> = image.iter().map(|&s| s.checked_sub(1)).collect();
        let zero = zero.ok_or_else(|| Error::NotPermutation(format!("{image:?} contains 0")))?;
        Self::from_zero_based(zero)
    }

    pub fn from_zero_based(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let mut seen = vec![false; n];
        for &s in &image {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::NotPermutation(format!(
                    "{:?} is not a bijection on 1..={n}",
                    image.iter().map(|s| s + 1).collect::<Vec<_>>()
                )));
            }
        }
        Ok(Self { image })
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// 0-based image of the 0-based point `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.image[k]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.image.iter().map(|s| s + 1).collect()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.n());
        for (k, &s) in self.image.iter().enumerate() {
            m[(k, s)] = ONE;
        }
        m
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (k, &s) in self.image.iter().enumerate() {
            inv[s] = k;
        }
        Self { image: inv }
    }

    /// `diag(1, self)`: fixes the first point and shifts the rest up by one.
    pub fn bordered(&self) -> Self {
        Self {
            image: std::iter::once(0).chain(self.image.iter().map(|s| s + 1)).collect(),
        }
    }
}

/// The permutation whose matrix is `P(p) * P(q)`, i.e. `k -> q(p(k))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch {
            left: p.n(),
            right: q.n(),
        });
    }
    Ok(Permutation {
        image: p.image.iter().map(|&s| q.image[s]).collect(),
    })
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PermutationRepr {
            n: self.n(),
            image: self.one_based(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PermutationRepr::deserialize(d)?;
        if repr.image.len() != repr.n {
            return Err(serde::de::Error::custom(format!(
                "n is {} but image has {} entries",
                repr.n,
                repr.image.len()
            )));
        }
        Permutation::from_one_based(&repr.image).map_err(serde::de::Error::custom)
    }
}

/// Wire form: `{"n": n, "image": [sigma(1), ..., sigma(n)]}`.
#[derive(Serialize, Deserialize)]
struct PermutationRepr {
    n: usize,
    image: Vec<usize>,
}

/// All `n!` permutations in lexicographic order of their one-line images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation { image: cur.clone() });
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// First-row column `l` (1-based) and pitch `x` of a supercirculant permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SupercirculantLabel {
    pub l: usize,
    pub x: usize,
}

/// `C_{l,x}`: row `k` has its unit entry in column `l + (k-1) x` mod `n`.
pub fn supercirculant_perm(n: usize, label: SupercirculantLabel) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let SupercirculantLabel { l, x } = label;
    if !(1..=n).contains(&l) {
        return Err(Error::IndexOutOfRange {
            what: "l",
            value: l as i64,
            lo: 1,
            hi: n as i64,
        });
    }
    if gcd(x % n, n) != 1 {
        return Err(Error::NotPermutation(format!(
            "C_{{{l},{x}}}: pitch {x} is not coprime with {n}"
        )));
    }
    Permutation::from_zero_based((0..n).map(|k| (l - 1 + k * x) % n).collect())
}

/// The cyclic shift `Q`, with unit entries at `(k, k+1 mod n)`.
pub fn shift_matrix(n: usize) -> Result<Permutation> {
    if n < 2 {
        return Err(Error::UnsupportedDimension {
            n,
            reason: "the shift matrix needs n >= 2".into(),
        });
    }
    Ok(Permutation {
        image: (0..n).map(|k| (k + 1) % n).collect(),
    })
}

/// `D_1, ..., D_n` with `D_1` the identity with its last two rows swapped and
/// `D_j = Q^{j-1} D_1`. The `n` matrices share no unit entry.
pub fn d_family(n: usize) -> Result<Vec<Permutation>> {
    if n < 3 {
        return Err(Error::UnsupportedDimension {
            n,
            reason: "the D family needs n >= 3".into(),
        });
    }
    let q = shift_matrix(n)?;
    let mut d = Permutation::identity(n);
    d.image.swap(n - 2, n - 1);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let next = compose(&q, &d)?;
        out.push(d);
        d = next;
    }
    Ok(out)
}

/// `W_n`, every entry `1/n`.
pub fn van_der_waerden(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok(ComplexMatrix::from_fn(n, |_, _| ONE / n as f64))
}

/// Max defect of the two shift relations `A_{k+1,l+x} = A_{k,l}` and
/// `A_{k+y,l+1} = A_{k,l}` (indices mod `n`).
pub fn pitch_defect(m: &ComplexMatrix, x: i64, y: i64) -> f64 {
    let n = m.dim();
    let ni = n as i64;
    let wrap = |v: i64| v.rem_euclid(ni) as usize;
    let mut defect = 0.0f64;
    for k in 0..n {
        for l in 0..n {
            let a = m[(k, l)];
            let along_rows = m[(wrap(k as i64 + 1), wrap(l as i64 + x))];
            let along_cols = m[(wrap(k as i64 + y), wrap(l as i64 + 1))];
            defect = defect.max((along_rows - a).norm()).max((along_cols - a).norm());
        }
    }
    defect
}

pub fn satisfies_pitches(m: &ComplexMatrix, x: i64, y: i64, tol: f64) -> bool {
    pitch_defect(m, x, y) <= tol
}

/// The pitch pair `(x, y)`, `1 <= x, y <= n-1` and `x y = 1 mod n`, for which
/// both shift relations hold within `tol`. When several pairs qualify (a
/// constant matrix, say) the smallest `x` wins.
pub fn detect_supercirculant(m: &ComplexMatrix, tol: f64) -> Option<(usize, usize)> {
    let n = m.dim();
    for x in 1..n {
        for y in 1..n {
            if (x * y) % n == 1 && satisfies_pitches(m, x as i64, y as i64, tol) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Splits a complex permutation matrix into its permutation and the entry
/// of each row: `None` unless every row and column has exactly one entry of
/// modulus above `tol`, and that entry has unit modulus within `tol`.
pub fn as_complex_permutation(m: &ComplexMatrix, tol: f64) -> Option<(Permutation, Vec<Complex64>)> {
    let n = m.dim();
    let mut image = Vec::with_capacity(n);
    let mut phases = Vec::with_capacity(n);
    for k in 0..n {
        let mut hits = (0..n).filter(|&l| m[(k, l)].norm() > tol);
        let l = hits.next()?;
        if hits.next().is_some() || (m[(k, l)].norm() - 1.0).abs() > tol {
            return None;
        }
        image.push(l);
        phases.push(m[(k, l)]);
    }
    Some((Permutation::from_zero_based(image).ok()?, phases))
}
