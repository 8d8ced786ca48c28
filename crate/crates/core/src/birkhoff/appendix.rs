//! Explicit weights for XU(4) satisfying `sum m = 1` and `sum |m|^2 = 1`,
//! written in terms of the 3x3 core `U`. Term `j` sits on the `j`-th
//! permutation of `{1,2,3,4}` in lexicographic order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ONE};
use crate::permutations::all_permutations;
use crate::xu_group::extract_core;

use super::WeightedPermSum;

/// The 24 weights as a function of the core.
pub fn xu4_weights(u: &ComplexMatrix) -> [Complex64; 24] {
    let at = |r: usize, s: usize| u[(r - 1, s - 1)];
    let (u11, u12, u13) = (at(1, 1), at(1, 2), at(1, 3));
    let (u21, u22, u23) = (at(2, 1), at(2, 2), at(2, 3));
    let (u31, u32, u33) = (at(3, 1), at(3, 2), at(3, 3));
    let i = Complex64::i();
    let quarter = ONE / 4.0;
    [
        (u11 + u22 + u33) / 4.0,
        quarter,
        (u12 + u21 + u23 + u32 + i * u12 - i * u21 + i * u23 - i * u32) / 8.0,
        (u21 + u23 + i * u21 - i * u23) / 8.0,
        (u12 + u32 - i * u12 + i * u32) / 8.0,
        (u13 + u31) / 4.0,
        quarter,
        (i * u13 - i * u31) / 4.0,
        (-u12 - u32 + i * u12 - i * u32) / 8.0,
        (-u22 - i * u11 + i * u33) / 4.0,
        (-u12 + u21 + u23 - u32 - i * u12 - i * u21 + i * u23 + i * u32) / 8.0,
        (-u21 - u23 - i * u21 + i * u23) / 8.0,
        (-u21 - u23 - i * u21 + i * u23) / 8.0,
        (u12 - u21 - u23 + u32 + i * u12 + i * u21 - i * u23 - i * u32) / 8.0,
        (-u13 - u31) / 4.0,
        (u12 + u32 - i * u12 + i * u32) / 8.0,
        (-u11 + u22 - u33) / 4.0,
        quarter,
        (-u22 + i * u11 - i * u33) / 4.0,
        (-u12 - u32 + i * u12 - i * u32) / 8.0,
        (u21 + u23 + i * u21 - i * u23) / 8.0,
        (-u12 - u21 - u23 - u32 - i * u12 + i * u21 - i * u23 + i * u32) / 8.0,
        quarter,
        (-i * u13 + i * u31) / 4.0,
    ]
}

pub fn decompose_xu4_appendix(x: &ComplexMatrix, tol: f64) -> Result<WeightedPermSum> {
    if x.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: 4,
            right: x.dim(),
        });
    }
    let u = extract_core(x, tol)?;
    WeightedPermSum::from_terms(4, all_permutations(4).into_iter().zip(xu4_weights(&u)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DEFAULT_TOL;
    use crate::sampling::random_xu;

    #[test]
    fn identity_core_pattern() {
        let w = xu4_weights(&ComplexMatrix::identity(3));
        let expect = |j: usize| -> f64 {
            match j {
                1 => 0.75,
                2 | 7 | 18 | 23 => 0.25,
                10 | 17 | 19 => -0.25,
                _ => 0.0,
            }
        };
        for (j, m) in w.iter().enumerate() {
            assert!((m - ONE * expect(j + 1)).norm() < 1e-15, "m_{}", j + 1);
        }
        let s = decompose_xu4_appendix(&ComplexMatrix::identity(4), DEFAULT_TOL).unwrap();
        assert!(s.reconstruct().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        assert!((s.sq_moduli_sum() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_weights_independent_of_core() {
        for seed in 0..5 {
            let x = random_xu(4, seed).unwrap();
            let u = extract_core(&x, DEFAULT_TOL).unwrap();
            let w = xu4_weights(&u);
            for j in [2, 7, 18, 23] {
                assert_eq!(w[j - 1], ONE / 4.0);
            }
        }
    }

    #[test]
    fn random_reconstruction() {
        for seed in 0..10 {
            let x = random_xu(4, seed).unwrap();
            let s = decompose_xu4_appendix(&x, DEFAULT_TOL).unwrap();
            assert_eq!(s.len(), 24);
            assert!(s.reconstruct().max_abs_diff(&x) < 1e-12);
            assert!((s.weight_sum() - ONE).norm() < 1e-12);
            assert!((s.sq_moduli_sum() - 1.0).abs() < 1e-12);
        }
        assert!(decompose_xu4_appendix(&ComplexMatrix::identity(3), DEFAULT_TOL).is_err());
    }
}
