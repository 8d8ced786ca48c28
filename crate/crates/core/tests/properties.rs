use num_complex::Complex64;
use proptest::prelude::*;

use xu_birkhoff::birkhoff::{
    decompose, decompose_prime, decompose_theorem2, decompose_xu3, decompose_xu4_appendix, prime_terms, product,
    verify, DecomposeOptions, Method, Terms, WeightedPermSum,
};
use xu_birkhoff::io::to_json;
use xu_birkhoff::numerics::{classify, dft_matrix, line_sums, root_of_unity};
use xu_birkhoff::permutations::{
    all_permutations, compose, detect_supercirculant, supercirculant_perm, Permutation, SupercirculantLabel,
};
use xu_birkhoff::sampling::{haar_unitary, random_circulant_xu, random_xu, random_zu};
use xu_birkhoff::scaling::{zxz_scale, ScalingOptions};
use xu_birkhoff::xu_group::{circulant_xu_decompose, embed_core, extract_core, is_prime, pitch, transfer_matrix};
use xu_birkhoff::ComplexMatrix;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|img| Permutation::from_zero_based(img).unwrap())
}

fn perm_pair(max_n: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let base: Vec<usize> = (0..n).collect();
            (Just(base.clone()).prop_shuffle(), Just(base).prop_shuffle())
        })
        .prop_map(|(a, b)| {
            (
                Permutation::from_zero_based(a).unwrap(),
                Permutation::from_zero_based(b).unwrap(),
            )
        })
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Every engine that applies to `n`, run on one XU matrix.
fn engine_outputs(x: &ComplexMatrix) -> Vec<WeightedPermSum> {
    let n = x.dim();
    let mut out = vec![decompose_theorem2(x, &ScalingOptions::default()).unwrap()];
    if is_prime(n) {
        out.push(decompose_prime(x, 1e-10).unwrap());
    }
    if n == 4 {
        out.push(decompose_xu4_appendix(x, 1e-10).unwrap());
    }
    out
}

proptest! {
    #[test]
    fn compose_matches_matrix_product((p, q) in perm_pair(8)) {
        let lhs = compose(&p, &q).unwrap().to_matrix();
        let rhs = &p.to_matrix() * &q.to_matrix();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_composes_to_identity(p in permutation(8)) {
        prop_assert_eq!(compose(&p, &p.inverse()).unwrap(), Permutation::identity(p.n()));
    }

    #[test]
    fn dft_is_unitary(n in 1usize..=32) {
        prop_assert!(dft_matrix(n).unwrap().unitarity_residual() < 1e-12);
    }

    #[test]
    fn roots_multiply(n in 1usize..40, a in -100i64..100, b in -100i64..100) {
        let lhs = root_of_unity(n, a).unwrap() * root_of_unity(n, b).unwrap();
        prop_assert!((lhs - root_of_unity(n, a + b).unwrap()).norm() < 1e-12);
        prop_assert!((root_of_unity(n, a).unwrap() - root_of_unity(n, a + n as i64).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn roots_orthogonal(n in 1usize..24, a in 0i64..24, b in 0i64..24) {
        let s: Complex64 = (0..n as i64).map(|k| root_of_unity(n, k * (a - b)).unwrap()).sum();
        let want = if (a - b).rem_euclid(n as i64) == 0 { n as f64 } else { 0.0 };
        prop_assert!((s - ONE * want).norm() < 1e-10);
    }

    #[test]
    fn embed_extract_round_trip(n in 2usize..=8, seed in any::<u64>()) {
        let u = haar_unitary(n - 1, seed).unwrap();
        let x = embed_core(&u, 1e-10).unwrap();
        prop_assert!(classify(&x, 1e-10).is_xu);
        let back = extract_core(&x, 1e-10).unwrap();
        prop_assert!(back.max_abs_diff(&u) < 1e-10);
        prop_assert!(embed_core(&back, 1e-10).unwrap().max_abs_diff(&x) < 1e-10);
    }

    #[test]
    fn xu3_sq_moduli_law(seed in any::<u64>(), p in complex()) {
        let x = random_xu(3, seed).unwrap();
        let d = decompose_xu3(&x, p, 1e-10).unwrap();
        let predicted = (2.0 * p.norm_sqr() - p.re * 2.0) / 3.0;
        prop_assert!((d.sq_moduli_sum() - 1.0 - predicted).abs() < 1e-10);
        prop_assert!((d.weight_sum() - ONE).norm() < 1e-12);
        prop_assert!(d.reconstruct().max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn merging_does_not_change_reconstruction(seed in any::<u64>(), split in 0.0..1.0f64) {
        let x = random_xu(5, seed).unwrap();
        let d = decompose_prime(&x, 1e-10).unwrap();
        let mut doubled = WeightedPermSum::new(5);
        for (p, &m) in d.iter().rev() {
            doubled.add_term(p.clone(), m * split);
            doubled.add_term(p.clone(), m * (1.0 - split));
        }
        prop_assert_eq!(doubled.len(), d.len());
        prop_assert!(doubled.reconstruct().max_abs_diff(&d.reconstruct()) < 1e-15);
    }

    #[test]
    fn supercirculant_perms_carry_their_pitch(n in prop::sample::select(vec![3usize, 5, 7, 11, 13]), l in 1usize..14, x in 1usize..13) {
        prop_assume!(l <= n && x < n);
        let c = supercirculant_perm(n, SupercirculantLabel { l, x }).unwrap().to_matrix();
        let (px, py) = detect_supercirculant(&c, 1e-12).unwrap();
        prop_assert_eq!(px, x);
        prop_assert_eq!((px * py) % n, 1);
    }

    #[test]
    fn transfer_matrix_splits_over_supercirculants(n in prop::sample::select(vec![2usize, 3, 5, 7, 11, 13]), r in 1usize..13, s in 1usize..13) {
        prop_assume!(r < n && s < n);
        let m = transfer_matrix(n, r, s).unwrap().matrix;
        let (x, _) = pitch(n, r, s).unwrap();
        let mut sum = ComplexMatrix::zeros(n);
        for l in 1..=n {
            let c = supercirculant_perm(n, SupercirculantLabel { l, x }).unwrap().to_matrix();
            sum = &sum + &c.scaled(root_of_unity(n, -(((l - 1) * s) as i64)).unwrap());
        }
        prop_assert!(sum.max_abs_diff(&m) < 1e-10);
        prop_assert_eq!(detect_supercirculant(&m, 1e-10), Some(pitch(n, r, s).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn samplers_hold_their_class(n in 2usize..=8, seed in any::<u64>()) {
        let tol = 1e-10;
        prop_assert!(haar_unitary(n, seed).unwrap().is_unitary(1e-12));
        prop_assert!(classify(&random_xu(n, seed).unwrap(), tol).is_xu);
        let c = classify(&random_circulant_xu(n, seed).unwrap(), tol);
        prop_assert!(c.is_xu && c.is_circulant);
        prop_assert!(classify(&random_zu(n, seed).unwrap(), tol).is_zu);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn products_of_verified_decompositions_verify(n in 3usize..=5, sa in any::<u64>(), sb in any::<u64>()) {
        let (a_m, b_m) = (random_xu(n, sa).unwrap(), random_xu(n, sb).unwrap());
        let opts = DecomposeOptions::default();
        let real = |m: &ComplexMatrix| match decompose(m, Method::Auto, &opts).unwrap().terms {
            Terms::Real(s) => s,
            Terms::Complex(_) => unreachable!("XU input"),
        };
        let (a, b) = (real(&a_m), real(&b_m));
        prop_assert!(verify(&a, &a_m, 1e-9).passes(false));
        prop_assert!(verify(&b, &b_m, 1e-9).passes(false));
        let c = product(&a, &b).unwrap();
        prop_assert!(verify(&c, &(&a_m * &b_m), 1e-9).passes(false));
    }

    #[test]
    fn line_sums_equal_weight_sum_for_every_engine(n in 2usize..=5, seed in any::<u64>()) {
        let x = random_xu(n, seed).unwrap();
        for d in engine_outputs(&x) {
            let total = d.weight_sum();
            let (rows, cols) = line_sums(&d.reconstruct());
            for s in rows.iter().chain(&cols) {
                prop_assert!((s - total).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn engines_agree_on_the_matrix(n in 3usize..=5, seed in any::<u64>()) {
        let x = random_xu(n, seed).unwrap();
        let outs = engine_outputs(&x);
        prop_assert!(outs.len() >= 2);
        for d in &outs[1..] {
            prop_assert!(d.reconstruct().max_abs_diff(&outs[0].reconstruct()) < 1e-8);
        }
    }

    #[test]
    fn prime_c_part(n in prop::sample::select(vec![5usize, 7, 11]), seed in any::<u64>()) {
        let t = prime_terms(&random_xu(n, seed).unwrap(), 1e-10).unwrap();
        prop_assert!((t.c_part_sq_moduli() - (n as f64 - 1.0) / n as f64).abs() < 1e-9);
        prop_assert!((t.d_part_sq_moduli() - 1.0 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn scaling_is_deterministic_and_exact(n in 2usize..=6, seed in any::<u64>()) {
        let u = haar_unitary(n, seed).unwrap();
        let opts = ScalingOptions { rng_seed: seed, ..Default::default() };
        let a = zxz_scale(&u, &opts).unwrap();
        let b = zxz_scale(&u, &opts).unwrap();
        prop_assert_eq!(&a.core, &b.core);
        prop_assert!(a.reconstruct().max_abs_diff(&u) < 1e-9);
        prop_assert!(extract_core(&a.core, 1e-8).is_ok());
        prop_assert!(circulant_xu_decompose(&random_circulant_xu(n, seed).unwrap(), 1e-10).is_ok());
    }

    #[test]
    fn matrix_json_round_trip(n in 1usize..=6, seed in any::<u64>()) {
        let u = haar_unitary(n, seed).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&to_json(&u).unwrap()).unwrap();
        prop_assert_eq!(back, u);
    }
}

#[test]
fn lexicographic_enumeration_sizes() {
    for (n, count) in [(1, 1), (2, 2), (3, 6), (4, 24), (5, 120)] {
        let all = all_permutations(n);
        assert_eq!(all.len(), count);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
