//! Structure of the group XU(n): the Fourier embedding `X = F diag(1, U) F^-1`
//! and its inverse, circulant decompositions, the constant-line-sum test,
//! transfer matrices and their pitches.

use num_complex::Complex64;
use serde::Serialize;

use crate::birkhoff::WeightedPermSum;
use crate::error::{Error, Result};
use crate::numerics::{common_line_sum, dft_matrix, require_unitary, require_xu, root_of_unity, ComplexMatrix, ONE};
use crate::permutations::{gcd, pitch_defect, supercirculant_perm, SupercirculantLabel};

/// `X = F diag(1, U) F^-1` for a unitary core `U` of dimension `n - 1`.
pub fn embed_core(core: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    require_unitary(core, tol)?;
    Ok(conjugate_by_dft(&ComplexMatrix::bordered(core)))
}

/// `F M F^-1`, with `F` the DFT matrix of the dimension of `M`.
pub(crate) fn conjugate_by_dft(m: &ComplexMatrix) -> ComplexMatrix {
    let f = dft_matrix(m.dim()).expect("matrices have dim >= 1");
    &(&f * m) * &f.adjoint()
}

/// Largest entry of `F^-1 X F` outside the `diag(1, U)` block pattern.
pub fn off_block_leak(x: &ComplexMatrix) -> f64 {
    let f = dft_matrix(x.dim()).expect("matrices have dim >= 1");
    let g = &(&f.adjoint() * x) * &f;
    off_block_leak_of_conjugate(&g)
}

fn off_block_leak_of_conjugate(g: &ComplexMatrix) -> f64 {
    let mut leak = (g[(0, 0)] - ONE).norm();
    for j in 1..g.dim() {
        leak = leak.max(g[(0, j)].norm()).max(g[(j, 0)].norm());
    }
    leak
}

/// Recovers `U` from `X = F diag(1, U) F^-1`.
pub fn extract_core(x: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if x.dim() < 2 {
        return Err(Error::UnsupportedDimension {
            n: x.dim(),
            reason: "XU(1) has no core".into(),
        });
    }
    require_xu(x, tol)?;
    let f = dft_matrix(x.dim())?;
    let g = &(&f.adjoint() * x) * &f;
    let leak = off_block_leak_of_conjugate(&g);
    if leak > tol {
        return Err(Error::OffBlockLeak { leak });
    }
    Ok(g.lower_block())
}

/// Any circulant matrix is the sum of its first-row entries times the
/// circulant permutations `C_{l,1}`.
pub fn circulant_decompose(m: &ComplexMatrix, tol: f64) -> Result<WeightedPermSum> {
    let defect = pitch_defect(m, 1, 1);
    if defect > tol {
        return Err(Error::NotCirculant { defect });
    }
    let n = m.dim();
    let mut sum = WeightedPermSum::new(n);
    for l in 1..=n {
        let c = supercirculant_perm(n, SupercirculantLabel { l, x: 1 })?;
        sum.add_term(c, m[(0, l - 1)]);
    }
    Ok(sum)
}

/// XU variant: the input must also be XU, so the weights sum to 1.
pub fn circulant_xu_decompose(x: &ComplexMatrix, tol: f64) -> Result<WeightedPermSum> {
    let sum = circulant_decompose(x, tol)?;
    require_xu(x, tol)?;
    Ok(sum)
}

/// If the matrix rebuilt from `sum` is unitary with a constant line sum,
/// returns that line sum (necessarily of unit modulus).
pub fn constant_line_sum_check(sum: &WeightedPermSum, tol: f64) -> Option<Complex64> {
    let m = sum.reconstruct();
    if !m.is_unitary(tol) {
        return None;
    }
    common_line_sum(&m, tol).filter(|s| (s.norm() - 1.0).abs() <= tol)
}

/// `(M_rs)_{kl} = w^{(k-1) r - (l-1) s}`, the transfer matrix of `U_rs`.
#[derive(Debug, Clone, Serialize)]
pub struct TransferMatrix {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub matrix: ComplexMatrix,
}

fn check_range(what: &'static str, v: usize, n: usize) -> Result<()> {
    if v == 0 || v >= n {
        return Err(Error::IndexOutOfRange {
            what,
            value: v as i64,
            lo: 1,
            hi: n as i64 - 1,
        });
    }
    Ok(())
}

pub fn transfer_matrix(n: usize, r: usize, s: usize) -> Result<TransferMatrix> {
    check_range("r", r, n)?;
    check_range("s", s, n)?;
    let mut matrix = ComplexMatrix::zeros(n);
    for k in 0..n {
        for l in 0..n {
            let a = (k * r) as i64 - (l * s) as i64;
            matrix[(k, l)] = root_of_unity(n, a)?;
        }
    }
    Ok(TransferMatrix { n, r, s, matrix })
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Pitches of `M_rs` for prime `n`: the solutions of `s x = r` and
/// `r y = s` (mod `n`) in `1..n-1`.
pub fn pitch(n: usize, r: usize, s: usize) -> Result<(usize, usize)> {
    if !is_prime(n) {
        return Err(Error::UnsupportedDimension {
            n,
            reason: "pitches are defined for prime n only".into(),
        });
    }
    check_range("r", r, n)?;
    check_range("s", s, n)?;
    let solve = |a: usize, b: usize| (1..n).find(|&t| (a * t) % n == b).expect("n is prime");
    Ok((solve(s, r), solve(r, s)))
}

/// Row period `b = n / gcd(n, r)` and column period `c = n / gcd(n, s)` of
/// `M_rs`, checked against the generated matrix.
pub fn transfer_block_dims(n: usize, r: usize, s: usize) -> Result<(usize, usize)> {
    let m = transfer_matrix(n, r, s)?.matrix;
    let b = n / gcd(n, r);
    let c = n / gcd(n, s);
    for k in 0..n {
        for l in 0..n {
            assert!(
                (m[(k, l)] - m[(k % b, l % c)]).norm() < 1e-12,
                "M_{r}{s} does not tile with {b}x{c} blocks"
            );
        }
    }
    Ok((b, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{classify, line_sums, DEFAULT_TOL, ZERO};
    use crate::permutations::{detect_supercirculant, Permutation};

    fn w(n: usize, a: i64) -> Complex64 {
        root_of_unity(n, a).unwrap()
    }

    #[test]
    fn embed_identity_and_xu2_closed_form() {
        for n in 2..6 {
            let x = embed_core(&ComplexMatrix::identity(n - 1), DEFAULT_TOL).unwrap();
            assert!(x.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-14);
        }
        let alpha = 1.234f64;
        let e = Complex64::from_polar(1.0, alpha);
        let x = embed_core(&ComplexMatrix::diagonal(&[e]), DEFAULT_TOL).unwrap();
        let expected = ComplexMatrix::from_rows(vec![
            vec![(ONE + e) / 2.0, (ONE - e) / 2.0],
            vec![(ONE - e) / 2.0, (ONE + e) / 2.0],
        ])
        .unwrap();
        assert!(x.max_abs_diff(&expected) < 1e-15);

        let back = extract_core(&x, DEFAULT_TOL).unwrap();
        assert!((back[(0, 0)] - e).norm() < 1e-15);
    }

    #[test]
    fn xu3_entries_match_displayed_formulas() {
        let (t, p, q) = (0.4f64, 2.2f64, -0.7f64);
        let u = ComplexMatrix::from_rows(vec![
            vec![Complex64::from_polar(t.cos(), q), Complex64::from_polar(t.sin(), p)],
            vec![Complex64::from_polar(-t.sin(), -p), Complex64::from_polar(t.cos(), -q)],
        ])
        .unwrap();
        let x = embed_core(&u, DEFAULT_TOL).unwrap();
        let (u11, u12, u21, u22) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
        let o = w(3, 1);
        let o2 = w(3, 2);
        let x11 = (ONE + u11 + u12 + u21 + u22) / 3.0;
        let x12 = (ONE + o2 * u11 + o * u12 + o2 * u21 + o * u22) / 3.0;
        let x13 = (ONE + o * u11 + o2 * u12 + o * u21 + o2 * u22) / 3.0;
        let x21 = (ONE + o * u11 + o * u12 + o2 * u21 + o2 * u22) / 3.0;
        let x33 = (ONE + u11 + o * u12 + o2 * u21 + u22) / 3.0;
        for (got, want) in [
            (x[(0, 0)], x11),
            (x[(0, 1)], x12),
            (x[(0, 2)], x13),
            (x[(1, 0)], x21),
            (x[(2, 2)], x33),
        ] {
            assert!((got - want).norm() < 1e-15);
        }
    }

    #[test]
    fn extract_rejects_non_xu_and_non_unitary() {
        let d = ComplexMatrix::diagonal(&[ONE, -ONE]);
        assert!(matches!(extract_core(&d, DEFAULT_TOL), Err(Error::NotXu { .. })));
        let junk = ComplexMatrix::from_fn(3, |_, _| ONE);
        assert!(matches!(
            extract_core(&junk, DEFAULT_TOL),
            Err(Error::NotUnitary { .. })
        ));
        assert!(embed_core(&junk, DEFAULT_TOL).is_err());
        assert!(extract_core(&ComplexMatrix::identity(1), DEFAULT_TOL).is_err());
    }

    #[test]
    fn circulant_decomposition_of_w3_and_identity() {
        // W3 is circulant with unit line sums but not unitary
        let w3 = ComplexMatrix::from_fn(3, |_, _| ONE / 3.0);
        assert!(matches!(
            circulant_xu_decompose(&w3, DEFAULT_TOL),
            Err(Error::NotUnitary { .. })
        ));
        let sum = circulant_decompose(&w3, DEFAULT_TOL).unwrap();
        assert_eq!(sum.len(), 3);
        for img in [[1, 2, 3], [2, 3, 1], [3, 1, 2]] {
            let m = sum.weight(&Permutation::from_one_based(&img).unwrap());
            assert!((m - ONE / 3.0).norm() < 1e-15);
        }
        let id = circulant_xu_decompose(&ComplexMatrix::identity(4), DEFAULT_TOL).unwrap();
        assert_eq!(id.weight(&Permutation::identity(4)), ONE);
        assert_eq!(id.weight_sum(), ONE);

        let not_circ = Permutation::from_one_based(&[1, 3, 2]).unwrap().to_matrix();
        assert!(matches!(
            circulant_xu_decompose(&not_circ, DEFAULT_TOL),
            Err(Error::NotCirculant { .. })
        ));
    }

    #[test]
    fn circulant_of_zu_has_first_row_weights() {
        let z = ComplexMatrix::diagonal(&[ONE, Complex64::from_polar(1.0, 0.5), Complex64::from_polar(1.0, 2.5)]);
        let x = conjugate_by_dft(&z);
        let sum = circulant_xu_decompose(&x, DEFAULT_TOL).unwrap();
        assert!(sum.reconstruct().max_abs_diff(&x) < 1e-15);
        assert!((sum.weight_sum() - ONE).norm() < 1e-15);
        // Parseval on the first row of a unitary matrix.
        assert!((sum.sq_moduli_sum() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_line_sum_cases() {
        let mut id = WeightedPermSum::new(3);
        id.add_term(Permutation::identity(3), ONE);
        assert_eq!(constant_line_sum_check(&id, DEFAULT_TOL), Some(ONE));

        let e = Complex64::from_polar(1.0, 0.9);
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        let mut two = WeightedPermSum::new(2);
        two.add_term(Permutation::identity(2), (ONE + e) / 2.0);
        two.add_term(swap.clone(), (ONE - e) / 2.0);
        let s = constant_line_sum_check(&two, DEFAULT_TOL).unwrap();
        assert!((s - ONE).norm() < 1e-15);

        let mut half = WeightedPermSum::new(2);
        half.add_term(Permutation::identity(2), ONE * 0.5);
        half.add_term(swap, ONE * 0.5);
        assert_eq!(constant_line_sum_check(&half, DEFAULT_TOL), None);

        // Global phase passes through.
        let mut phased = WeightedPermSum::new(2);
        phased.add_term(Permutation::identity(2), e);
        assert!((constant_line_sum_check(&phased, DEFAULT_TOL).unwrap() - e).norm() < 1e-15);
    }

    #[test]
    fn transfer_matrix_m12_for_five() {
        let m = transfer_matrix(5, 1, 2).unwrap().matrix;
        let exps = [
            [0, 3, 1, 4, 2],
            [1, 4, 2, 0, 3],
            [2, 0, 3, 1, 4],
            [3, 1, 4, 2, 0],
            [4, 2, 0, 3, 1],
        ];
        for k in 0..5 {
            for l in 0..5 {
                assert!((m[(k, l)] - w(5, exps[k][l])).norm() < 1e-12);
            }
        }
        let (rows, cols) = line_sums(&m);
        assert!(rows.iter().chain(&cols).all(|s| s.norm() < 1e-12));
        assert_eq!(detect_supercirculant(&m, DEFAULT_TOL), Some((3, 2)));
    }

    #[test]
    fn transfer_matrix_m12_for_four() {
        let m = transfer_matrix(4, 1, 2).unwrap().matrix;
        let exps = [[0, 2, 0, 2], [1, 3, 1, 3], [2, 0, 2, 0], [3, 1, 3, 1]];
        for k in 0..4 {
            for l in 0..4 {
                assert!((m[(k, l)] - w(4, exps[k][l])).norm() < 1e-12);
            }
        }
        assert_eq!(detect_supercirculant(&m, DEFAULT_TOL), None);
        assert_eq!(transfer_block_dims(4, 1, 2).unwrap(), (4, 2));
        assert_eq!(transfer_block_dims(6, 2, 3).unwrap(), (3, 2));
        assert_eq!(transfer_block_dims(7, 3, 5).unwrap(), (7, 7));
    }

    #[test]
    fn transfer_matrix_range_errors() {
        assert!(transfer_matrix(5, 0, 1).is_err());
        assert!(transfer_matrix(5, 1, 5).is_err());
        assert_eq!(transfer_matrix(7, 3, 4).unwrap().matrix[(0, 0)], ONE);
    }

    #[test]
    fn pitch_tables_for_five() {
        let xs = [[1, 3, 2, 4], [2, 1, 4, 3], [3, 4, 1, 2], [4, 2, 3, 1]];
        let ys = [[1, 2, 3, 4], [3, 1, 4, 2], [2, 4, 1, 3], [4, 3, 2, 1]];
        for r in 1..5 {
            for s in 1..5 {
                assert_eq!(pitch(5, r, s).unwrap(), (xs[r - 1][s - 1], ys[r - 1][s - 1]));
            }
        }
        for n in [2usize, 3, 7, 11] {
            for r in 1..n {
                assert_eq!(pitch(n, r, r).unwrap(), (1, 1));
            }
        }
        assert!(matches!(pitch(4, 1, 1), Err(Error::UnsupportedDimension { n: 4, .. })));
    }

    #[test]
    fn transfer_matrix_is_sum_of_supercirculants() {
        for n in [3usize, 5, 7, 11, 13] {
            for r in 1..n {
                for s in 1..n {
                    let m = transfer_matrix(n, r, s).unwrap().matrix;
                    let (x, y) = pitch(n, r, s).unwrap();
                    assert_eq!(detect_supercirculant(&m, 1e-10), Some((x, y)));
                    let mut acc = ComplexMatrix::zeros(n);
                    for l in 1..=n {
                        let c = supercirculant_perm(n, SupercirculantLabel { l, x }).unwrap();
                        acc = &acc + &c.to_matrix().scaled(w(n, -(((l - 1) * s) as i64)));
                    }
                    assert!(acc.max_abs_diff(&m) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn primality() {
        let primes: Vec<usize> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    }

    #[test]
    fn embed_output_classifies_as_xu() {
        let u = ComplexMatrix::diagonal(&[Complex64::from_polar(1.0, 0.2), ZERO + Complex64::from_polar(1.0, 1.0)]);
        let x = embed_core(&u, DEFAULT_TOL).unwrap();
        assert!(classify(&x, DEFAULT_TOL).is_xu);
    }
}
