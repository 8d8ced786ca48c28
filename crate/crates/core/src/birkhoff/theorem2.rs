//! Constructive decomposition of any XU(n) matrix with `sum m = 1`, by
//! induction on `n`.
//!
//! Write `X = F diag(1, U) F^-1` and scale `U = a Z1 x Z2` with `x` in
//! XU(n-1). Then `X = X1 Y X2` where `X1 = F diag(1, a Z1) F^-1` and
//! `X2 = F diag(1, Z2) F^-1` are circulant XU matrices, and
//! `Y = F diag(1, x) F^-1 = sum_j m_j F diag(1, p_j) F^-1` once `x` is
//! decomposed recursively. Each `F diag(1, p_j) F^-1` has upper-left entry 1,
//! so it equals `diag(1, y_j)` with `y_j` in XU(n-1), which recurses again.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{require_xu, ComplexMatrix, ONE};
use crate::permutations::Permutation;
use crate::scaling::{zxz_scale, ScalingOptions};
use crate::xu_group::{circulant_xu_decompose, conjugate_by_dft, extract_core};

use super::prime::decompose_xu2;
use super::{product, WeightedPermSum};

/// Weights below this modulus are dropped after every product.
pub const PRUNE_EPS: f64 = 1e-14;

/// Scaled cores have line sums within `opts.tol` of 1, so pairwise
/// differences reach `2 tol`; recursion levels accept that slack.
pub(crate) fn membership_tol(opts: &ScalingOptions) -> f64 {
    10.0 * opts.tol
}

pub fn decompose_theorem2(x: &ComplexMatrix, opts: &ScalingOptions) -> Result<WeightedPermSum> {
    let tol = membership_tol(opts);
    if x.dim() < 2 {
        return Err(Error::UnsupportedDimension {
            n: x.dim(),
            reason: "the recursive decomposition starts at n = 2".into(),
        });
    }
    require_xu(x, tol)?;
    let mut cache = HashMap::new();
    Ok(recurse(x, opts, tol, &mut cache)?.pruned(PRUNE_EPS))
}

/// Decompositions of `y(p)`, keyed by `p`.
type Cache = HashMap<Permutation, WeightedPermSum>;

fn recurse(x: &ComplexMatrix, opts: &ScalingOptions, tol: f64, cache: &mut Cache) -> Result<WeightedPermSum> {
    let n = x.dim();
    if n == 2 {
        return decompose_xu2(x, tol);
    }

    let u = extract_core(x, tol)?;
    let f = zxz_scale(&u, opts)?;
    let a = Complex64::from_polar(1.0, f.alpha);

    let left: Vec<Complex64> = std::iter::once(ONE).chain(f.z1.iter().map(|z| a * z)).collect();
    let right: Vec<Complex64> = std::iter::once(ONE).chain(f.z2.iter().copied()).collect();
    let x1 = circulant_xu_decompose(&conjugate_by_dft(&ComplexMatrix::diagonal(&left)), tol)?;
    let x2 = circulant_xu_decompose(&conjugate_by_dft(&ComplexMatrix::diagonal(&right)), tol)?;

    let inner = recurse(&f.core, opts, tol, cache)?;
    let mut y = WeightedPermSum::new(n);
    for (p, &m) in &inner {
        let yp = match cache.get(p) {
            Some(d) => d.clone(),
            None => {
                let d = decompose_bordered(p, opts, tol, cache)?;
                cache.insert(p.clone(), d.clone());
                d
            }
        };
        for (q, &mq) in &yp {
            y.add_term(q.bordered(), m * mq);
        }
    }
    let y = y.pruned(PRUNE_EPS);

    let xy = product(&x1.pruned(PRUNE_EPS), &y)?.pruned(PRUNE_EPS);
    Ok(product(&xy, &x2.pruned(PRUNE_EPS))?.pruned(PRUNE_EPS))
}

/// Decomposes the lower block `y` of `F diag(1, P) F^-1 = diag(1, y)`.
fn decompose_bordered(p: &Permutation, opts: &ScalingOptions, tol: f64, cache: &mut Cache) -> Result<WeightedPermSum> {
    if *p == Permutation::identity(p.n()) {
        return WeightedPermSum::from_terms(p.n(), [(p.clone(), ONE)]);
    }
    let full = conjugate_by_dft(&ComplexMatrix::bordered(&p.to_matrix()));
    recurse(&full.lower_block(), opts, tol, cache)
}
