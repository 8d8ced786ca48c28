//! Factorization `U = e^{i alpha} Z1 X Z2` of a unitary matrix, with `X` in
//! XU(n) and `Z1`, `Z2` diagonal unitaries whose first entry is 1.
//!
//! The factors are found by alternating phase normalization: each
//! half-step multiplies rows (then columns) by the conjugate phase of their
//! sums, which never decreases the modulus of the total entry sum. Fixed
//! points with real positive but unequal line sums exist; when the line
//! sums stop moving the run restarts from a random diagonal-phase
//! perturbation drawn from the seeded generator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{line_sums, phase_or_one, require_unitary, ComplexMatrix, DEFAULT_TOL, ONE};
use crate::sampling::{random_phase, rng};

/// Line sums that move less than this between iterations count as stalled.
const STALL_STEP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingOptions {
    /// Target for the largest deviation of a line sum from 1.
    pub tol: f64,
    pub max_iters: usize,
    pub max_restarts: usize,
    pub rng_seed: u64,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iters: 10_000,
            max_restarts: 8,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZxzFactorization {
    pub alpha: f64,
    pub z1: Vec<Complex64>,
    pub z2: Vec<Complex64>,
    pub core: ComplexMatrix,
    /// Largest `|line sum - 1|` of the core.
    pub spread: f64,
    /// `max |e^{i alpha} Z1 X Z2 - U|`.
    pub residual: f64,
    pub iterations: usize,
    pub restarts: usize,
}

impl ZxzFactorization {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.core
            .diag_scaled(&self.z1, &self.z2)
            .scaled(Complex64::from_polar(1.0, self.alpha))
    }
}

fn spread_of(sums: &[Complex64]) -> f64 {
    sums.iter().map(|s| (s - ONE).norm()).fold(0.0, f64::max)
}

/// Spread after removing the phase of the mean line sum, as `finish` does.
fn normalized_spread(sums: &[Complex64]) -> f64 {
    let common = phase_or_one(sums.iter().sum::<Complex64>()).conj();
    sums.iter().map(|s| (s * common - ONE).norm()).fold(0.0, f64::max)
}

fn all_sums(m: &ComplexMatrix) -> Vec<Complex64> {
    let (mut r, c) = line_sums(m);
    r.extend(c);
    r
}

enum RunOutcome {
    Converged,
    Stalled,
    Exhausted,
}

/// Working state: `v = diag(left) u diag(right)`.
struct Run {
    v: ComplexMatrix,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
}

impl Run {
    fn step(&mut self) {
        let n = self.v.dim();
        let (rows, _) = line_sums(&self.v);
        let row_phase: Vec<Complex64> = rows.iter().map(|&s| phase_or_one(s).conj()).collect();
        self.v = self.v.diag_scaled(&row_phase, &vec![ONE; n]);
        for (l, p) in self.left.iter_mut().zip(&row_phase) {
            *l *= p;
        }
        let (_, cols) = line_sums(&self.v);
        let col_phase: Vec<Complex64> = cols.iter().map(|&s| phase_or_one(s).conj()).collect();
        self.v = self.v.diag_scaled(&vec![ONE; n], &col_phase);
        for (r, p) in self.right.iter_mut().zip(&col_phase) {
            *r *= p;
        }
    }

    fn iterate(&mut self, opts: &ScalingOptions, iterations: &mut usize, best: &mut f64) -> RunOutcome {
        let mut prev = all_sums(&self.v);
        if normalized_spread(&prev) <= opts.tol {
            return RunOutcome::Converged;
        }
        for _ in 0..opts.max_iters {
            self.step();
            *iterations += 1;
            let sums = all_sums(&self.v);
            let spread = normalized_spread(&sums);
            *best = best.min(spread);
            if spread <= opts.tol {
                return RunOutcome::Converged;
            }
            let moved = sums.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if moved < STALL_STEP {
                return RunOutcome::Stalled;
            }
            prev = sums;
        }
        RunOutcome::Exhausted
    }
}

pub fn zxz_scale(u: &ComplexMatrix, opts: &ScalingOptions) -> Result<ZxzFactorization> {
    require_unitary(u, 1e-8)?;
    let n = u.dim();
    let mut rng = rng(opts.rng_seed);
    let mut iterations = 0;
    let mut best = f64::INFINITY;

    for restart in 0..=opts.max_restarts {
        let (left, right) = if restart == 0 {
            (vec![ONE; n], vec![ONE; n])
        } else {
            let l: Vec<Complex64> = (0..n).map(|_| random_phase(&mut rng)).collect();
            let r: Vec<Complex64> = (0..n).map(|_| random_phase(&mut rng)).collect();
            (l, r)
        };
        let mut run = Run {
            v: u.diag_scaled(&left, &right),
            left,
            right,
        };
        if let RunOutcome::Converged = run.iterate(opts, &mut iterations, &mut best) {
            return Ok(finish(u, run, iterations, restart));
        }
    }
    Err(Error::ScalingFailed {
        best_spread: best,
        restarts: opts.max_restarts,
    })
}

/// Turns `v = diag(left) u diag(right)` into normalized factors.
fn finish(u: &ComplexMatrix, run: Run, iterations: usize, restarts: usize) -> ZxzFactorization {
    let Run { v, left, right } = run;
    let sums = all_sums(&v);
    let common = phase_or_one(sums.iter().sum::<Complex64>());
    let core = v.scaled(common.conj());

    // u = diag(conj left) v diag(conj right) = g * diag(z1) core diag(z2)
    let (l0, r0) = (left[0].conj(), right[0].conj());
    let z1: Vec<Complex64> = left.iter().map(|l| phase_or_one(l.conj() / l0)).collect();
    let z2: Vec<Complex64> = right.iter().map(|r| phase_or_one(r.conj() / r0)).collect();
    let alpha = (l0 * r0 * common).arg();

    let mut f = ZxzFactorization {
        alpha,
        z1,
        z2,
        spread: spread_of(&all_sums(&core)),
        core,
        residual: 0.0,
        iterations,
        restarts,
    };
    f.residual = f.reconstruct().max_abs_diff(u);
    f
}
