//! Built-in reference checks: every worked example, table and displayed
//! matrix of the construction, recomputed by the library and compared with
//! the published value. Backs the `paper-check` subcommand.

use num_complex::Complex64;
use serde::Serialize;

use crate::birkhoff::{decompose_theorem2, decompose_xu2, decompose_xu3, prime_terms, product, verify, xu4_weights};
use crate::error::Result;
use crate::numerics::{dft_matrix, line_sums, root_of_unity, ComplexMatrix, ONE, ZERO};
use crate::permutations::{
    all_permutations, d_family, detect_supercirculant, satisfies_pitches, supercirculant_perm, Permutation,
    SupercirculantLabel,
};
use crate::sampling::{haar_unitary, random_circulant_xu, random_xu};
use crate::scaling::ScalingOptions;
use crate::xu_group::{
    circulant_decompose, circulant_xu_decompose, constant_line_sum_check, embed_core, extract_core, pitch,
    transfer_block_dims, transfer_matrix,
};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Exact-ish comparisons of closed forms.
const TIGHT: f64 = 1e-14;

/// Seed for the generic `U` used where an example holds for any core.
const SEED: u64 = 2024;

pub const N5_X_TABLE: [[usize; 4]; 4] = [[1, 3, 2, 4], [2, 1, 4, 3], [3, 4, 1, 2], [4, 2, 3, 1]];
pub const N5_Y_TABLE: [[usize; 4]; 4] = [[1, 2, 3, 4], [3, 1, 4, 2], [2, 4, 1, 3], [4, 3, 2, 1]];
/// Exponents of `w = e^{2 pi i/5}` in the displayed `M_12`.
pub const N5_M12_EXPONENTS: [[i64; 5]; 5] = [
    [0, 3, 1, 4, 2],
    [1, 4, 2, 0, 3],
    [2, 0, 3, 1, 4],
    [3, 1, 4, 2, 0],
    [4, 2, 0, 3, 1],
];
/// Exponents of `i` in the displayed `M_12` for `n = 4`.
pub const N4_M12_EXPONENTS: [[i64; 4]; 4] = [[0, 2, 0, 2], [1, 3, 1, 3], [2, 0, 2, 0], [3, 1, 3, 1]];

fn perm(img: &[usize]) -> Permutation {
    Permutation::from_one_based(img).expect("literal permutation")
}

/// 1-based lexicographic position.
fn lex_index(p: &Permutation) -> usize {
    all_permutations(p.n()).iter().position(|q| q == p).expect("same n") + 1
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= TIGHT
}

fn from_exponents<const N: usize>(e: &[[i64; N]; N]) -> Result<ComplexMatrix> {
    let rows = e
        .iter()
        .map(|row| row.iter().map(|&a| root_of_unity(N, a)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    ComplexMatrix::from_rows(rows)
}

fn generic_u2() -> Result<ComplexMatrix> {
    haar_unitary(2, SEED)
}

struct Suite(Vec<CheckResult>);

impl Suite {
    fn add(&mut self, name: &'static str, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.0.push(CheckResult { name, passed, detail });
    }
}

pub fn run_all() -> Vec<CheckResult> {
    let mut s = Suite(Vec::new());

    s.add(
        "roots of unity n=3 and n=5",
        (|| {
            let w3 = root_of_unity(3, 1)?;
            let w5 = root_of_unity(5, 1)?;
            let want3 = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
            let want5 = Complex64::new(5f64.sqrt() - 1.0, (10.0 + 2.0 * 5f64.sqrt()).sqrt()) / 4.0;
            Ok((close(w3, want3) && close(w5, want5), format!("w3 = {w3}, w5 = {w5}")))
        })(),
    );

    s.add(
        "DFT matrix n=3",
        (|| {
            let w = root_of_unity(3, 1)?;
            let w2 = w * w;
            let want = ComplexMatrix::from_rows(vec![vec![ONE, ONE, ONE], vec![ONE, w, w2], vec![ONE, w2, w]])?
                .scaled(ONE / 3f64.sqrt());
            let err = dft_matrix(3)?.max_abs_diff(&want);
            Ok((err <= TIGHT, format!("max deviation {err:e}")))
        })(),
    );

    s.add(
        "line sums of W3 and of M12 (n=5)",
        (|| {
            let w3 = ComplexMatrix::from_fn(3, |_, _| ONE / 3.0);
            let (r, c) = line_sums(&w3);
            let w_ok = r.iter().chain(&c).all(|&z| close(z, ONE));
            let (r, c) = line_sums(&transfer_matrix(5, 1, 2)?.matrix);
            let m_ok = r.iter().chain(&c).all(|z| z.norm() <= 1e-12);
            Ok((w_ok && m_ok, format!("W3 sums are 1: {w_ok}; M12 sums are 0: {m_ok}")))
        })(),
    );

    s.add(
        "displayed P2 and P4 (n=3)",
        (|| {
            let p2 = ComplexMatrix::from_real_rows(&[&[1., 0., 0.], &[0., 0., 1.], &[0., 1., 0.]])?;
            let p4 = ComplexMatrix::from_real_rows(&[&[0., 1., 0.], &[0., 0., 1.], &[1., 0., 0.]])?;
            let all = all_permutations(3);
            let ok = all[1].to_matrix() == p2 && all[3].to_matrix() == p4 && all[1] == perm(&[1, 3, 2]);
            Ok((ok, "P2 = (1,3,2), P4 = (2,3,1)".into()))
        })(),
    );

    s.add("appendix ordering P1, P2, P3, P23, P24", {
        let all = all_permutations(4);
        let ok = all[0] == perm(&[1, 2, 3, 4])
            && all[1] == perm(&[1, 2, 4, 3])
            && all[2] == perm(&[1, 3, 2, 4])
            && all[22] == perm(&[4, 3, 1, 2])
            && all[23] == perm(&[4, 3, 2, 1]);
        Ok((ok, "lexicographic order of the 24 permutations".into()))
    });

    s.add(
        "appendix supercirculant labels (n=4)",
        (|| {
            let pos = |l, x| -> Result<usize> { Ok(lex_index(&supercirculant_perm(4, SupercirculantLabel { l, x })?)) };
            let listed = [
                ((1, 1), 1),
                ((1, 3), 6),
                ((2, 1), 10),
                ((2, 3), 8),
                ((4, 1), 19),
                ((4, 3), 24),
            ];
            let mut ok = true;
            for ((l, x), want) in listed {
                ok &= pos(l, x)? == want;
            }
            let (c31, c33) = (pos(3, 1)?, pos(3, 3)?);
            ok &= c33 == 15 && c31 == 17;
            Ok((
                ok,
                format!(
                    "C11=P1 C13=P6 C21=P10 C23=P8 C41=P19 C43=P24 as listed; P15 = (3,2,1,4) is C33 and C31 = P{c31} \
                 by the first-row/pitch definition (the list pairs P15 with the label C31)"
                ),
            ))
        })(),
    );

    s.add(
        "D1 for n=5 and disjoint D family",
        (|| {
            let d = d_family(5)?;
            let d1_ok = d[0] == perm(&[1, 2, 3, 5, 4]);
            let disjoint = (0..5).all(|k| {
                let mut cols: Vec<usize> = d.iter().map(|p| p.apply(k)).collect();
                cols.sort_unstable();
                cols == (0..5).collect::<Vec<_>>()
            });
            Ok((
                d1_ok && disjoint,
                format!("D1 = {:?}, supports disjoint: {disjoint}", d[0].one_based()),
            ))
        })(),
    );

    s.add(
        "D family anticirculant for n=3",
        (|| {
            let d = d_family(3)?;
            let anti = d.iter().all(|p| satisfies_pitches(&p.to_matrix(), 2, 2, TIGHT));
            let as_c =
                (1..=3).all(|l| supercirculant_perm(3, SupercirculantLabel { l, x: 2 }).is_ok_and(|c| d.contains(&c)));
            Ok((anti && as_c, "D1, D2, D3 coincide with C12, C22, C32".into()))
        })(),
    );

    s.add(
        "W3 as circulant and anticirculant sums",
        (|| {
            let all = all_permutations(3);
            let third = |idx: [usize; 3]| {
                idx.iter()
                    .fold(ComplexMatrix::zeros(3), |acc, &j| &acc + &all[j - 1].to_matrix())
                    .scaled(ONE / 3.0)
            };
            let w3 = ComplexMatrix::from_fn(3, |_, _| ONE / 3.0);
            let e1 = third([1, 4, 5]).max_abs_diff(&w3);
            let e2 = third([2, 3, 6]).max_abs_diff(&w3);
            let circ = circulant_decompose(&w3, TIGHT)?;
            let weights_ok = [1, 4, 5].iter().all(|&j| close(circ.weight(&all[j - 1]), ONE / 3.0));
            Ok((
                e1 <= TIGHT && e2 <= TIGHT && weights_ok && circ.len() == 3,
                format!("(P1+P4+P5)/3 off by {e1:e}, (P2+P3+P6)/3 off by {e2:e}; circulant weights 1/3: {weights_ok}"),
            ))
        })(),
    );

    s.add(
        "supercirculant pitches",
        (|| {
            let circ = random_circulant_xu(5, SEED)?;
            let a = detect_supercirculant(&circ, 1e-12);
            let b = detect_supercirculant(&transfer_matrix(5, 1, 2)?.matrix, 1e-12);
            let c = detect_supercirculant(&transfer_matrix(4, 1, 2)?.matrix, 1e-12);
            Ok((
                a == Some((1, 1)) && b == Some((3, 2)) && c.is_none(),
                format!("circulant {a:?}, M12(n=5) {b:?}, M12(n=4) {c:?}"),
            ))
        })(),
    );

    s.add(
        "XU(2) form and its core",
        (|| {
            let alpha = 0.9f64;
            let e = Complex64::from_polar(1.0, alpha);
            let x = embed_core(&ComplexMatrix::diagonal(&[e]), 1e-12)?;
            let want = ComplexMatrix::from_rows(vec![
                vec![(ONE + e) / 2.0, (ONE - e) / 2.0],
                vec![(ONE - e) / 2.0, (ONE + e) / 2.0],
            ])?;
            let err = x.max_abs_diff(&want);
            let back = extract_core(&x, 1e-12)?[(0, 0)];
            let sampled = random_xu(2, SEED)?;
            let u = extract_core(&sampled, 1e-12)?[(0, 0)];
            let sampled_ok = sampled.max_abs_diff(&embed_core(&ComplexMatrix::diagonal(&[u]), 1e-12)?) <= TIGHT
                && (u.norm() - 1.0).abs() <= TIGHT;
            Ok((
                err <= TIGHT && close(back, e) && sampled_ok,
                format!(
                    "embed off by {err:e}; recovered core {back}; sampled XU(2) has alpha = {:.6}",
                    u.arg()
                ),
            ))
        })(),
    );

    s.add(
        "XU(3) entry formulas",
        (|| {
            let u = generic_u2()?;
            let x = embed_core(&u, 1e-12)?;
            let (u11, u12, u21, u22) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
            let w = root_of_unity(3, 1)?;
            let w2 = w * w;
            let want = [
                ((0, 0), (ONE + u11 + u12 + u21 + u22) / 3.0),
                ((0, 1), (ONE + w2 * u11 + w * u12 + w2 * u21 + w * u22) / 3.0),
                ((0, 2), (ONE + w * u11 + w2 * u12 + w * u21 + w2 * u22) / 3.0),
                ((1, 0), (ONE + w * u11 + w * u12 + w2 * u21 + w2 * u22) / 3.0),
                ((2, 2), (ONE + u11 + w * u12 + w2 * u21 + u22) / 3.0),
            ];
            let err = want.iter().map(|&(kl, v)| (x[kl] - v).norm()).fold(0.0, f64::max);
            Ok((err <= TIGHT, format!("X11, X12, X13, X21, X33 off by at most {err:e}")))
        })(),
    );

    s.add(
        "circulant decomposition of an XU matrix",
        (|| {
            let x = random_circulant_xu(4, SEED)?;
            let d = circulant_xu_decompose(&x, 1e-12)?;
            let err = d.reconstruct().max_abs_diff(&x);
            Ok((
                err <= 1e-12 && close(d.weight_sum(), ONE),
                format!("reconstruction {err:e}"),
            ))
        })(),
    );

    s.add(
        "constant line sum of the XU(2) weights",
        (|| {
            let e = Complex64::from_polar(1.0, 2.0);
            let d = crate::birkhoff::WeightedPermSum::from_terms(
                2,
                [
                    (Permutation::identity(2), (ONE + e) / 2.0),
                    (perm(&[2, 1]), (ONE - e) / 2.0),
                ],
            )?;
            let sum = constant_line_sum_check(&d, 1e-12);
            Ok((sum.is_some_and(|s| close(s, ONE)), format!("line sum {sum:?}")))
        })(),
    );

    s.add(
        "displayed M12 (n=5)",
        (|| {
            let err = transfer_matrix(5, 1, 2)?
                .matrix
                .max_abs_diff(&from_exponents(&N5_M12_EXPONENTS)?);
            Ok((err <= 1e-12, format!("max deviation {err:e}")))
        })(),
    );

    s.add(
        "displayed M12 (n=4) and its 4x2 blocks",
        (|| {
            let err = transfer_matrix(4, 1, 2)?
                .matrix
                .max_abs_diff(&from_exponents(&N4_M12_EXPONENTS)?);
            let dims = transfer_block_dims(4, 1, 2)?;
            Ok((
                err <= 1e-12 && dims == (4, 2),
                format!("max deviation {err:e}, blocks {dims:?}"),
            ))
        })(),
    );

    s.add(
        "pitch tables x(r,s) and y(r,s) for n=5",
        (|| {
            let mut mismatches = Vec::new();
            for r in 1..5 {
                for s_ in 1..5 {
                    let (x, y) = pitch(5, r, s_)?;
                    if x != N5_X_TABLE[r - 1][s_ - 1] || y != N5_Y_TABLE[r - 1][s_ - 1] {
                        mismatches.push((r, s_, x, y));
                    }
                }
            }
            Ok((mismatches.is_empty(), format!("32 entries, mismatches: {mismatches:?}")))
        })(),
    );

    s.add(
        "product weights multiply",
        (|| {
            let a = circulant_xu_decompose(&random_circulant_xu(3, SEED)?, 1e-12)?;
            let b = circulant_xu_decompose(&random_circulant_xu(3, SEED + 1)?, 1e-12)?;
            let c = product(&a, &b)?;
            let err = c.reconstruct().max_abs_diff(&(&a.reconstruct() * &b.reconstruct()));
            Ok((
                close(c.weight_sum(), ONE) && err <= 1e-12,
                format!("weight sum {}, reconstruction {err:e}", c.weight_sum()),
            ))
        })(),
    );

    s.add(
        "XU(2) weights",
        (|| {
            let x = embed_core(&ComplexMatrix::diagonal(&[-ONE]), 1e-12)?;
            let d = decompose_xu2(&x, 1e-12)?;
            let (m1, m2) = (d.weight(&Permutation::identity(2)), d.weight(&perm(&[2, 1])));
            let pi_ok = m1.norm() <= TIGHT && close(m2, ONE);
            let g = random_xu(2, SEED)?;
            let t2 = decompose_theorem2(&g, &ScalingOptions::default())?;
            let closed = decompose_xu2(&g, 1e-12)?;
            let same = t2.len() == 2 && t2.iter().all(|(p, &m)| close(m, closed.weight(p)));
            let report = verify(&closed, &g, 1e-12);
            Ok((
                pi_ok && same && report.passes(true),
                format!("alpha = pi gives ({m1}, {m2}); recursive engine matches the closed form: {same}"),
            ))
        })(),
    );

    s.add(
        "XU(3) weights for p = 1",
        (|| {
            let u = generic_u2()?;
            let x = embed_core(&u, 1e-12)?;
            let (u11, u12, u21, u22) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
            let w = root_of_unity(3, 1)?;
            let w2 = w * w;
            let want = [
                (ONE + u11 + u22) / 3.0,
                (u12 + u21) / 3.0,
                (w * u12 + w2 * u21) / 3.0,
                (ONE + w2 * u11 + w * u22) / 3.0,
                (ONE + w * u11 + w2 * u22) / 3.0,
                (w2 * u12 + w * u21) / 3.0,
            ];
            let d = decompose_xu3(&x, ONE, 1e-12)?;
            let err = all_permutations(3)
                .iter()
                .zip(want)
                .map(|(p, m)| (d.weight(p) - m).norm())
                .fold(0.0, f64::max);
            let sq = d.sq_moduli_sum();
            Ok((
                err <= TIGHT && (sq - 1.0).abs() <= 1e-12,
                format!("max weight deviation {err:e}, sum |m|^2 = {sq}"),
            ))
        })(),
    );

    s.add(
        "prime construction term counts (n=5)",
        (|| {
            let t = prime_terms(&random_xu(5, SEED)?, 1e-12)?;
            let (c, d) = (t.c_terms.len(), t.d_terms.len());
            let d_weights = t.d_terms.iter().all(|&(_, m)| close(m, ONE / 5.0));
            Ok((
                c == 20 && d == 5 && t.term_count() == 25 && d_weights,
                format!("{c} C terms + {d} D terms of weight 1/5"),
            ))
        })(),
    );

    s.add(
        "appendix constant weights and sum of squares",
        (|| {
            let x = random_xu(4, SEED)?;
            let w = xu4_weights(&extract_core(&x, 1e-12)?);
            let consts = [2, 7, 18, 23].iter().all(|&j| w[j - 1] == ONE / 4.0);
            let sq: f64 = w.iter().map(|m| m.norm_sqr()).sum();
            Ok((
                consts && (sq - 1.0).abs() <= 1e-12,
                format!("m2 = m7 = m18 = m23 = 1/4: {consts}; sum |m|^2 = {sq}"),
            ))
        })(),
    );

    s.add("appendix weights at U = identity", {
        let w = xu4_weights(&ComplexMatrix::identity(3));
        let want = |j: usize| match j {
            1 => 0.75,
            2 | 7 | 18 | 23 => 0.25,
            10 | 17 | 19 => -0.25,
            _ => 0.0,
        };
        let ok = w.iter().enumerate().all(|(i, &m)| close(m, ONE * want(i + 1)));
        let nonzero = w.iter().filter(|m| **m != ZERO).count();
        Ok((ok, format!("{nonzero} nonzero weights")))
    });

    s.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_reference_check_passes() {
        let results = run_all();
        assert!(results.len() >= 20);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
