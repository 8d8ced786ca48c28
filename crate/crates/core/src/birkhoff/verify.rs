use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{line_sums, ComplexMatrix, ONE};

use super::{ComplexPermSum, WeightedPermSum};

/// Anything that rebuilds to a matrix from weighted (complex) permutation terms.
pub trait Decomposition {
    fn dim(&self) -> usize;
    fn reconstruct(&self) -> ComplexMatrix;
    fn weight_sum(&self) -> Complex64;
    fn sq_moduli_sum(&self) -> f64;
    fn term_count(&self) -> usize;
    /// Real permutations carry line sums equal to the weight sum; complex
    /// permutation sums have no such constraint.
    fn real_permutations(&self) -> bool;
    fn max_shape_defect(&self) -> f64;
}

impl Decomposition for WeightedPermSum {
    fn dim(&self) -> usize {
        self.n()
    }
    fn reconstruct(&self) -> ComplexMatrix {
        WeightedPermSum::reconstruct(self)
    }
    fn weight_sum(&self) -> Complex64 {
        WeightedPermSum::weight_sum(self)
    }
    fn sq_moduli_sum(&self) -> f64 {
        WeightedPermSum::sq_moduli_sum(self)
    }
    fn term_count(&self) -> usize {
        self.len()
    }
    fn real_permutations(&self) -> bool {
        true
    }
    fn max_shape_defect(&self) -> f64 {
        0.0
    }
}

impl Decomposition for ComplexPermSum {
    fn dim(&self) -> usize {
        self.n
    }
    fn reconstruct(&self) -> ComplexMatrix {
        ComplexPermSum::reconstruct(self)
    }
    fn weight_sum(&self) -> Complex64 {
        ComplexPermSum::weight_sum(self)
    }
    fn sq_moduli_sum(&self) -> f64 {
        ComplexPermSum::sq_moduli_sum(self)
    }
    fn term_count(&self) -> usize {
        self.terms.len()
    }
    fn real_permutations(&self) -> bool {
        false
    }
    fn max_shape_defect(&self) -> f64 {
        ComplexPermSum::max_shape_defect(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportFlags {
    pub reconstruction: bool,
    /// `sum m = 1` for real permutations, `|sum m| = 1` for complex ones.
    pub weight_sum: bool,
    pub sq_moduli_sum: bool,
    /// All line sums of the rebuilt matrix equal `sum m`; absent for complex sums.
    pub line_sums: Option<bool>,
    pub term_shape: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub reconstruction_error: f64,
    pub weight_sum: Complex64,
    pub sq_moduli_sum: f64,
    pub term_count: usize,
    pub line_sum_deviation: Option<f64>,
    pub shape_defect: f64,
    pub tol: f64,
    pub flags: ReportFlags,
}

impl VerificationReport {
    /// Every applicable flag, with the squared-moduli flag only when asked for.
    pub fn passes(&self, require_sq_moduli: bool) -> bool {
        let f = &self.flags;
        f.reconstruction
            && f.weight_sum
            && f.term_shape
            && f.line_sums.unwrap_or(true)
            && (!require_sq_moduli || f.sq_moduli_sum)
    }
}

/// Recomputes every figure from the decomposition itself.
pub fn verify<D: Decomposition + ?Sized>(d: &D, target: &ComplexMatrix, tol: f64) -> VerificationReport {
    let rebuilt = d.reconstruct();
    let reconstruction_error = rebuilt.max_abs_diff(target);
    let weight_sum = d.weight_sum();
    let sq_moduli_sum = d.sq_moduli_sum();
    let shape_defect = d.max_shape_defect();

    let line_sum_deviation = d.real_permutations().then(|| {
        let (rows, cols) = line_sums(&rebuilt);
        rows.iter()
            .chain(&cols)
            .map(|s| (s - weight_sum).norm())
            .fold(0.0, f64::max)
    });
    let weight_ok = if d.real_permutations() {
        (weight_sum - ONE).norm() <= tol
    } else {
        (weight_sum.norm() - 1.0).abs() <= tol
    };

    VerificationReport {
        reconstruction_error,
        weight_sum,
        sq_moduli_sum,
        term_count: d.term_count(),
        line_sum_deviation,
        shape_defect,
        tol,
        flags: ReportFlags {
            reconstruction: reconstruction_error <= tol,
            weight_sum: weight_ok,
            sq_moduli_sum: (sq_moduli_sum - 1.0).abs() <= tol,
            line_sums: line_sum_deviation.map(|dev| dev <= tol),
            term_shape: shape_defect <= tol,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::{decompose_xu2, prime_terms, ComplexPermTerm};
    use crate::numerics::DEFAULT_TOL;
    use crate::permutations::Permutation;
    use crate::sampling::random_xu;

    #[test]
    fn closed_form_two_passes_everything() {
        let x = random_xu(2, 5).unwrap();
        let s = decompose_xu2(&x, DEFAULT_TOL).unwrap();
        let r = verify(&s, &x, DEFAULT_TOL);
        assert!(r.passes(true));
        assert_eq!(r.term_count, 2);
        assert_eq!(r.flags.line_sums, Some(true));
    }

    #[test]
    fn perturbed_weight_fails_reconstruction() {
        let x = random_xu(2, 5).unwrap();
        let s = decompose_xu2(&x, DEFAULT_TOL).unwrap();
        let mut bad = WeightedPermSum::new(2);
        for (i, (p, &m)) in s.iter().enumerate() {
            bad.add_term(p.clone(), if i == 0 { m + 1e-6 } else { m });
        }
        let r = verify(&bad, &x, DEFAULT_TOL);
        assert!(!r.flags.reconstruction);
        assert!(!r.flags.weight_sum);
        assert!(!r.passes(false));
    }

    #[test]
    fn prime_five_sq_moduli() {
        let x = random_xu(5, 12).unwrap();
        let t = prime_terms(&x, DEFAULT_TOL).unwrap();
        let oracle: f64 = t
            .c_terms
            .iter()
            .map(|(_, _, m)| m.norm_sqr())
            .chain(t.d_terms.iter().map(|(_, m)| m.norm_sqr()))
            .sum();
        let r = verify(&t.into_sum(), &x, DEFAULT_TOL);
        assert!((r.sq_moduli_sum - 1.0).abs() < 1e-9);
        assert!((r.sq_moduli_sum - oracle).abs() < 1e-14);
        assert!(r.passes(true));
    }

    #[test]
    fn dimension_mismatch_is_a_failed_flag() {
        let s = decompose_xu2(&random_xu(2, 1).unwrap(), DEFAULT_TOL).unwrap();
        let r = verify(&s, &ComplexMatrix::identity(3), DEFAULT_TOL);
        assert_eq!(r.reconstruction_error, f64::INFINITY);
        assert!(!r.flags.reconstruction);
    }

    #[test]
    fn complex_sum_flags() {
        let phase = Complex64::from_polar(1.0, 0.4);
        let sum = ComplexPermSum {
            n: 2,
            terms: vec![ComplexPermTerm {
                perm: Permutation::identity(2),
                phases: vec![ONE, phase],
                weight: Complex64::from_polar(1.0, 1.0),
            }],
        };
        let target = ComplexMatrix::diagonal(&[Complex64::from_polar(1.0, 1.0), Complex64::from_polar(1.0, 1.4)]);
        let r = verify(&sum, &target, DEFAULT_TOL);
        assert!(r.flags.reconstruction && r.flags.weight_sum && r.flags.term_shape);
        assert_eq!(r.flags.line_sums, None);
    }
}
