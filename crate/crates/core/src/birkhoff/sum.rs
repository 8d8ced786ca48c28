use std::collections::btree_map;
use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ZERO};
use crate::permutations::{compose, Permutation};

/// `sum_j m_j P_j` over distinct permutations; adding a permutation twice
/// adds the weights. Iteration is lexicographic in the one-line image.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPermSum {
    n: usize,
    terms: BTreeMap<Permutation, Complex64>,
}

impl WeightedPermSum {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Permutation, Complex64)>) -> Result<Self> {
        let mut sum = Self::new(n);
        for (p, m) in terms {
            if p.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: p.n() });
            }
            sum.add_term(p, m);
        }
        Ok(sum)
    }

    /// Panics if `p` has the wrong dimension.
    pub fn add_term(&mut self, p: Permutation, m: Complex64) {
        assert_eq!(p.n(), self.n, "permutation dimension differs from the sum");
        *self.terms.entry(p).or_insert(ZERO) += m;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight(&self, p: &Permutation) -> Complex64 {
        self.terms.get(p).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Permutation, Complex64> {
        self.terms.iter()
    }

    pub fn weight_sum(&self) -> Complex64 {
        self.terms.values().sum()
    }

    pub fn sq_moduli_sum(&self) -> f64 {
        self.terms.values().map(|m| m.norm_sqr()).sum()
    }

    /// Drops terms whose weight modulus is below `eps`.
    pub fn pruned(mut self, eps: f64) -> Self {
        self.terms.retain(|_, m| m.norm() >= eps);
        self
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n);
        for (p, &m) in &self.terms {
            for k in 0..self.n {
                out[(k, p.apply(k))] += m;
            }
        }
        out
    }
}

impl<'a> IntoIterator for &'a WeightedPermSum {
    type Item = (&'a Permutation, &'a Complex64);
    type IntoIter = btree_map::Iter<'a, Permutation, Complex64>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

/// Decomposition of `a * b` from decompositions of `a` and `b`: weights
/// `m_u^a m_v^b` on the products `P_u P_v`, merged.
pub fn product(a: &WeightedPermSum, b: &WeightedPermSum) -> Result<WeightedPermSum> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { left: a.n, right: b.n });
    }
    let mut out = WeightedPermSum::new(a.n);
    for (pu, &mu) in a {
        for (pv, &mv) in b {
            out.add_term(compose(pu, pv)?, mu * mv);
        }
    }
    Ok(out)
}

/// A weight times a complex permutation matrix whose row `k` carries
/// `phases[k]` in column `perm(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPermTerm {
    pub perm: Permutation,
    pub phases: Vec<Complex64>,
    pub weight: Complex64,
}

impl ComplexPermTerm {
    pub fn to_matrix(&self) -> ComplexMatrix {
        let n = self.perm.n();
        let mut m = ComplexMatrix::zeros(n);
        for k in 0..n {
            m[(k, self.perm.apply(k))] = self.phases[k];
        }
        m
    }

    /// Largest `| |phase| - 1 |`; infinite when the phase vector has the wrong length.
    pub fn shape_defect(&self) -> f64 {
        if self.phases.len() != self.perm.n() {
            return f64::INFINITY;
        }
        self.phases.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPermSum {
    pub n: usize,
    pub terms: Vec<ComplexPermTerm>,
}

impl ComplexPermSum {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n);
        for t in &self.terms {
            for k in 0..self.n.min(t.phases.len()) {
                out[(k, t.perm.apply(k))] += t.weight * t.phases[k];
            }
        }
        out
    }

    pub fn weight_sum(&self) -> Complex64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn sq_moduli_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight.norm_sqr()).sum()
    }

    pub fn max_shape_defect(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                if t.perm.n() == self.n {
                    t.shape_defect()
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ONE;

    fn perm(img: &[usize]) -> Permutation {
        Permutation::from_one_based(img).unwrap()
    }

    #[test]
    fn duplicates_merge_by_addition() {
        let mut s = WeightedPermSum::new(3);
        s.add_term(perm(&[2, 1, 3]), ONE * 0.25);
        s.add_term(perm(&[2, 1, 3]), ONE * 0.5);
        s.add_term(Permutation::identity(3), ONE * 0.25);
        assert_eq!(s.len(), 2);
        assert_eq!(s.weight(&perm(&[2, 1, 3])), ONE * 0.75);
        assert_eq!(s.weight_sum(), ONE);
        let order: Vec<_> = s.iter().map(|(p, _)| p.one_based()).collect();
        assert_eq!(order, vec![vec![1, 2, 3], vec![2, 1, 3]]);
    }

    #[test]
    fn from_terms_checks_dimension() {
        assert!(WeightedPermSum::from_terms(3, [(Permutation::identity(2), ONE)]).is_err());
    }

    #[test]
    fn product_with_identity_is_neutral() {
        let mut id = WeightedPermSum::new(3);
        id.add_term(Permutation::identity(3), ONE);
        let s = WeightedPermSum::from_terms(
            3,
            [
                (perm(&[2, 3, 1]), Complex64::new(0.3, 0.1)),
                (perm(&[1, 3, 2]), Complex64::new(0.7, -0.1)),
            ],
        )
        .unwrap();
        assert_eq!(product(&id, &s).unwrap(), s);
        assert_eq!(product(&s, &id).unwrap(), s);
        assert!(product(&s, &WeightedPermSum::new(4)).is_err());
    }

    #[test]
    fn product_reconstructs_matrix_product() {
        let a = WeightedPermSum::from_terms(
            3,
            [
                (perm(&[2, 3, 1]), Complex64::new(0.3, 0.1)),
                (perm(&[1, 3, 2]), Complex64::new(0.7, -0.1)),
            ],
        )
        .unwrap();
        let b = WeightedPermSum::from_terms(
            3,
            [
                (perm(&[3, 2, 1]), Complex64::new(0.5, 0.5)),
                (perm(&[2, 3, 1]), Complex64::new(0.5, -0.5)),
            ],
        )
        .unwrap();
        let c = product(&a, &b).unwrap();
        assert!(c.reconstruct().max_abs_diff(&(&a.reconstruct() * &b.reconstruct())) < 1e-15);
        assert!((c.weight_sum() - a.weight_sum() * b.weight_sum()).norm() < 1e-15);
    }

    #[test]
    fn pruning_and_merging_keep_reconstruction() {
        let mut s = WeightedPermSum::new(2);
        s.add_term(Permutation::identity(2), ONE);
        s.add_term(perm(&[2, 1]), Complex64::new(1e-16, 0.0));
        let before = s.reconstruct();
        let after = s.clone().pruned(1e-14);
        assert_eq!(after.len(), 1);
        assert!(after.reconstruct().max_abs_diff(&before) < 1e-15);
    }

    #[test]
    fn complex_term_shape() {
        let t = ComplexPermTerm {
            perm: perm(&[2, 1]),
            phases: vec![Complex64::from_polar(1.0, 0.3), Complex64::from_polar(1.0, -2.0)],
            weight: ONE,
        };
        assert!(t.shape_defect() < 1e-15);
        let m = t.to_matrix();
        assert_eq!(m[(0, 0)], ZERO);
        assert_eq!(m[(0, 1)], t.phases[0]);
        assert!(m.unitarity_residual() < 1e-15);
        let bad = ComplexPermTerm { phases: vec![ONE], ..t };
        assert_eq!(bad.shape_defect(), f64::INFINITY);
    }
}
