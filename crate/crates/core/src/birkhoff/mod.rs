//! Decomposition engines and their dispatch.

pub mod appendix;
pub mod prime;
mod sum;
pub mod theorem2;
pub mod unitary;
pub mod verify;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use appendix::{decompose_xu4_appendix, xu4_weights};
pub use prime::{decompose_prime, decompose_xu2, decompose_xu3, prime_terms, PrimeTerms};
pub use sum::{product, ComplexPermSum, ComplexPermTerm, WeightedPermSum};
pub use theorem2::decompose_theorem2;
pub use unitary::{decompose_unitary, UnitaryDecomposition};
pub use verify::{verify, Decomposition, ReportFlags, VerificationReport};

use crate::error::{Error, Result};
use crate::numerics::{common_line_sum, require_unitary, require_xu, ComplexMatrix, DEFAULT_TOL, ONE};
use crate::permutations::Permutation;
use crate::scaling::{ScalingOptions, ZxzFactorization};
use crate::xu_group::is_prime;

/// Which construction produced a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// `n = 1`: the single identity term.
    Trivial,
    /// The input already was a (complex) permutation matrix.
    Permutation,
    Xu2,
    Xu3,
    Prime,
    Xu4,
    Theorem2,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Trivial => "trivial",
            Engine::Permutation => "permutation",
            Engine::Xu2 => "xu2",
            Engine::Xu3 => "xu3",
            Engine::Prime => "prime",
            Engine::Xu4 => "xu4",
            Engine::Theorem2 => "theorem2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Engine::Trivial,
            Engine::Permutation,
            Engine::Xu2,
            Engine::Xu3,
            Engine::Prime,
            Engine::Xu4,
            Engine::Theorem2,
        ]
        .into_iter()
        .find(|e| e.name() == name)
    }

    /// Whether the construction guarantees `sum |m|^2 = 1`. The XU(3) family
    /// does so only for `p` on the circle `|p - 1/2| = 1/2`.
    pub fn claims_unit_sq_moduli(self, p: Complex64, tol: f64) -> bool {
        match self {
            Engine::Theorem2 => false,
            Engine::Xu3 => ((p - ONE * 0.5).norm() - 0.5).abs() <= tol,
            _ => true,
        }
    }
}

/// Engine selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Prime `n` and `n = 4` use the unit-`sum |m|^2` constructions,
    /// every other `n` the recursive one.
    #[default]
    Auto,
    Theorem2,
    Prime,
    Xu3,
    Xu4,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "theorem2" => Ok(Method::Theorem2),
            "prime" => Ok(Method::Prime),
            "xu3" => Ok(Method::Xu3),
            "xu4" => Ok(Method::Xu4),
            other => Err(Error::Parse(format!(
                "unknown method '{other}' (expected auto, theorem2, prime, xu3 or xu4)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecomposeOptions {
    /// Membership tolerance for the input.
    pub tol: f64,
    pub scaling: ScalingOptions,
    /// How `W_3` is split in the XU(3) family.
    pub p: Complex64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            scaling: ScalingOptions::default(),
            p: ONE,
        }
    }
}

/// Decomposes an XU matrix with the requested engine.
pub fn decompose_xu(x: &ComplexMatrix, method: Method, opts: &DecomposeOptions) -> Result<(Engine, WeightedPermSum)> {
    let n = x.dim();
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let tol = opts.tol;
    if n == 1 {
        require_xu(x, tol)?;
        return Ok((
            Engine::Trivial,
            WeightedPermSum::from_terms(1, [(Permutation::identity(1), ONE)])?,
        ));
    }
    let small_prime = |n: usize| match n {
        2 => Engine::Xu2,
        3 => Engine::Xu3,
        _ => Engine::Prime,
    };
    match method {
        Method::Auto if is_prime(n) => Ok((small_prime(n), prime_with_p(x, opts)?)),
        Method::Auto if n == 4 => Ok((Engine::Xu4, decompose_xu4_appendix(x, tol)?)),
        Method::Auto => Ok((Engine::Theorem2, theorem2_at(x, opts)?)),
        Method::Prime => {
            if !is_prime(n) {
                return decompose_prime(x, tol).map(|s| (Engine::Prime, s));
            }
            Ok((small_prime(n), prime_with_p(x, opts)?))
        }
        Method::Xu3 => Ok((Engine::Xu3, decompose_xu3(x, opts.p, tol)?)),
        Method::Xu4 => Ok((Engine::Xu4, decompose_xu4_appendix(x, tol)?)),
        Method::Theorem2 => Ok((Engine::Theorem2, theorem2_at(x, opts)?)),
    }
}

fn prime_with_p(x: &ComplexMatrix, opts: &DecomposeOptions) -> Result<WeightedPermSum> {
    if x.dim() == 3 {
        decompose_xu3(x, opts.p, opts.tol)
    } else {
        decompose_prime(x, opts.tol)
    }
}

fn theorem2_at(x: &ComplexMatrix, opts: &DecomposeOptions) -> Result<WeightedPermSum> {
    require_xu(x, opts.tol)?;
    let scaling = ScalingOptions {
        tol: opts.scaling.tol.min(opts.tol),
        ..opts.scaling
    };
    decompose_theorem2(x, &scaling)
}

#[derive(Debug, Clone)]
pub enum Terms {
    Real(WeightedPermSum),
    Complex(ComplexPermSum),
}

impl Terms {
    pub fn len(&self) -> usize {
        match self {
            Terms::Real(s) => s.len(),
            Terms::Complex(s) => s.terms.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_decomposition(&self) -> &dyn Decomposition {
        match self {
            Terms::Real(s) => s,
            Terms::Complex(s) => s,
        }
    }
}

/// A finished decomposition of an XU or unitary matrix.
#[derive(Debug, Clone)]
pub struct Decomposed {
    pub n: usize,
    pub engine: Engine,
    /// The `W_3` split, recorded only when the XU(3) family ran.
    pub p: Option<Complex64>,
    pub terms: Terms,
    pub factorization: Option<ZxzFactorization>,
}

impl Decomposed {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.terms.as_decomposition().reconstruct()
    }

    pub fn verify(&self, target: &ComplexMatrix, tol: f64) -> VerificationReport {
        verify(self.terms.as_decomposition(), target, tol)
    }

    pub fn claims_unit_sq_moduli(&self, tol: f64) -> bool {
        self.engine.claims_unit_sq_moduli(self.p.unwrap_or(ONE), tol)
    }

    /// The report passes every flag the engine is accountable for.
    pub fn accepts(&self, report: &VerificationReport) -> bool {
        report.passes(self.claims_unit_sq_moduli(report.tol))
    }
}

/// XU input gets real permutations; other unitary input gets complex ones.
pub fn decompose(m: &ComplexMatrix, method: Method, opts: &DecomposeOptions) -> Result<Decomposed> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    require_unitary(m, opts.tol.max(1e-8))?;
    let is_xu = common_line_sum(m, opts.tol).is_some_and(|s| (s - ONE).norm() <= opts.tol);
    let record_p = |e: Engine| (e == Engine::Xu3).then_some(opts.p);

    if is_xu {
        let (engine, sum) = decompose_xu(m, method, opts)?;
        return Ok(Decomposed {
            n,
            engine,
            p: record_p(engine),
            terms: Terms::Real(sum),
            factorization: None,
        });
    }
    let u = decompose_unitary(m, method, opts)?;
    Ok(Decomposed {
        n,
        engine: u.engine,
        p: record_p(u.engine),
        terms: Terms::Complex(u.sum),
        factorization: u.factorization,
    })
}
