//! Decompositions with `sum |m_j|^2 = 1` for prime dimension.
//!
//! With `X = F diag(1, U) F^-1` every entry is
//! `X_kl = (1/n) [1 + sum_{r,s} w^{(k-1) r - (l-1) s} U_rs]`, so
//! `X = W_n + (1/n) sum_{r,s} U_rs M_rs`. For prime `n` each transfer
//! matrix `M_rs` is a phase-weighted sum of the supercirculant permutations
//! `C_{l,x}` with `x = x(r, s)`, and `W_n` splits over the `D_j` family.
//! Dimensions 2 and 3 use closed forms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{require_xu, root_of_unity, ComplexMatrix, ONE};
use crate::permutations::{all_permutations, d_family, supercirculant_perm, Permutation, SupercirculantLabel};
use crate::xu_group::{extract_core, is_prime};

use super::WeightedPermSum;

fn require_dim(x: &ComplexMatrix, n: usize) -> Result<()> {
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: x.dim(),
        });
    }
    Ok(())
}

/// `X = m1 I + m2 S` with `m1 = (1 + e^{i alpha})/2` and `m2 = 1 - m1`.
pub fn decompose_xu2(x: &ComplexMatrix, tol: f64) -> Result<WeightedPermSum> {
    require_dim(x, 2)?;
    require_xu(x, tol)?;
    let e = ((x[(0, 0)] + x[(1, 1)]) - (x[(0, 1)] + x[(1, 0)])) / 2.0;
    let m1 = (ONE + e) / 2.0;
    let m2 = ONE - m1;
    WeightedPermSum::from_terms(
        2,
        [
            (Permutation::identity(2), m1),
            (Permutation::from_one_based(&[2, 1])?, m2),
        ],
    )
}

/// The six-term XU(3) family, parameterized by how `W_3` is split:
/// `p` on the circulants and `1 - p` on the anticirculants.
/// `sum |m|^2 = 1 + (2 |p|^2 - p - conj p) / 3`, which is 1 exactly when
/// `p` lies on the circle `|p - 1/2| = 1/2`.
pub fn decompose_xu3(x: &ComplexMatrix, p: Complex64, tol: f64) -> Result<WeightedPermSum> {
    require_dim(x, 3)?;
    let u = extract_core(x, tol)?;
    let (u11, u12, u21, u22) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let w = root_of_unity(3, 1)?;
    let w2 = root_of_unity(3, 2)?;
    let q = ONE - p;
    let weights = [
        (p + u11 + u22) / 3.0,
        (q + u12 + u21) / 3.0,
        (q + w * u12 + w2 * u21) / 3.0,
        (p + w2 * u11 + w * u22) / 3.0,
        (p + w * u11 + w2 * u22) / 3.0,
        (q + w2 * u12 + w * u21) / 3.0,
    ];
    WeightedPermSum::from_terms(3, all_permutations(3).into_iter().zip(weights))
}

/// Unmerged output of the generic prime construction (`n >= 5`).
#[derive(Debug, Clone)]
pub struct PrimeTerms {
    pub n: usize,
    /// `m_lx` on `C_{l,x}`, for `l` in `1..=n`, `x` in `1..n`.
    pub c_terms: Vec<(SupercirculantLabel, Permutation, Complex64)>,
    /// `1/n` on each `D_j`.
    pub d_terms: Vec<(Permutation, Complex64)>,
}

impl PrimeTerms {
    pub fn term_count(&self) -> usize {
        self.c_terms.len() + self.d_terms.len()
    }

    pub fn c_part_sq_moduli(&self) -> f64 {
        self.c_terms.iter().map(|(_, _, m)| m.norm_sqr()).sum()
    }

    pub fn d_part_sq_moduli(&self) -> f64 {
        self.d_terms.iter().map(|(_, m)| m.norm_sqr()).sum()
    }

    pub fn into_sum(self) -> WeightedPermSum {
        let mut sum = WeightedPermSum::new(self.n);
        for (_, p, m) in self.c_terms {
            sum.add_term(p, m);
        }
        for (p, m) in self.d_terms {
            sum.add_term(p, m);
        }
        sum
    }
}

/// `m_lx = (1/n) sum_{s=1}^{n-1} w^{-(l-1) s} U_{r,s}` with `r = s x mod n`,
/// plus weight `1/n` on each `D_j`. Requires prime `n >= 5`.
pub fn prime_terms(x: &ComplexMatrix, tol: f64) -> Result<PrimeTerms> {
    let n = x.dim();
    if !is_prime(n) || n < 5 {
        return Err(Error::UnsupportedDimension {
            n,
            reason: "the supercirculant construction needs a prime n >= 5".into(),
        });
    }
    let u = extract_core(x, tol)?;
    let inv_n = 1.0 / n as f64;
    let mut c_terms = Vec::with_capacity(n * (n - 1));
    for l in 1..=n {
        for pitch in 1..n {
            let mut m = Complex64::new(0.0, 0.0);
            for s in 1..n {
                let r = (s * pitch) % n;
                m += root_of_unity(n, -(((l - 1) * s) as i64))? * u[(r - 1, s - 1)];
            }
            let label = SupercirculantLabel { l, x: pitch };
            c_terms.push((label, supercirculant_perm(n, label)?, m * inv_n));
        }
    }
    let d_terms = d_family(n)?.into_iter().map(|d| (d, ONE * inv_n)).collect();
    Ok(PrimeTerms { n, c_terms, d_terms })
}

/// Dispatches on the prime dimension: closed form for 2, the `p = 1`
/// member of the XU(3) family for 3, the supercirculant construction above.
pub fn decompose_prime(x: &ComplexMatrix, tol: f64) -> Result<WeightedPermSum> {
    match x.dim() {
        2 => decompose_xu2(x, tol),
        3 => decompose_xu3(x, ONE, tol),
        n if is_prime(n) => Ok(prime_terms(x, tol)?.into_sum()),
        n => Err(Error::UnsupportedDimension {
            n,
            reason: "a decomposition with unit sum of squared weight moduli is only known for \
                     prime n (and n = 4 via the explicit XU(4) formulas); composite n is open"
                .into(),
        }),
    }
}
