//! Any unitary `U` is a weighted sum of complex permutation matrices:
//! scale `U = e^{i alpha} Z1 X Z2`, decompose `X = sum m_j P_j`, and carry
//! the diagonal factors into each term as `Z1 P_j Z2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{require_unitary, ComplexMatrix, ONE};
use crate::permutations::as_complex_permutation;
use crate::scaling::{zxz_scale, ZxzFactorization};

use super::theorem2::{membership_tol, PRUNE_EPS};
use super::{decompose_xu, ComplexPermSum, ComplexPermTerm, DecomposeOptions, Engine, Method, WeightedPermSum};

/// Entries this close to 0 or to unit modulus mark the input as already a
/// complex permutation matrix.
const SHORTCUT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct UnitaryDecomposition {
    /// Engine that decomposed the scaled core.
    pub engine: Engine,
    /// Absent when the input was already a complex permutation matrix.
    pub factorization: Option<ZxzFactorization>,
    pub sum: ComplexPermSum,
}

pub fn decompose_unitary(u: &ComplexMatrix, method: Method, opts: &DecomposeOptions) -> Result<UnitaryDecomposition> {
    let n = u.dim();
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    require_unitary(u, opts.tol.max(1e-8))?;

    if let Some((perm, phases)) = as_complex_permutation(u, SHORTCUT_TOL) {
        return Ok(UnitaryDecomposition {
            engine: Engine::Permutation,
            factorization: None,
            sum: ComplexPermSum {
                n,
                terms: vec![ComplexPermTerm {
                    perm,
                    phases,
                    weight: ONE,
                }],
            },
        });
    }

    let f = zxz_scale(u, &opts.scaling)?;
    let core_opts = DecomposeOptions {
        tol: opts.tol.max(membership_tol(&opts.scaling)),
        ..*opts
    };
    let (engine, real) = decompose_xu(&f.core, method, &core_opts)?;
    let sum = lift(&real, &f);
    Ok(UnitaryDecomposition {
        engine,
        factorization: Some(f),
        sum,
    })
}

/// `m_j P_j` becomes weight `e^{i alpha} m_j` on `Z1 P_j Z2`.
fn lift(real: &WeightedPermSum, f: &ZxzFactorization) -> ComplexPermSum {
    let a = Complex64::from_polar(1.0, f.alpha);
    let terms = real
        .iter()
        .filter(|(_, m)| m.norm() >= PRUNE_EPS)
        .map(|(p, &m)| ComplexPermTerm {
            perm: p.clone(),
            phases: (0..p.n()).map(|k| f.z1[k] * f.z2[p.apply(k)]).collect(),
            weight: a * m,
        })
        .collect();
    ComplexPermSum { n: real.n(), terms }
}
