//! The `xu-birkhoff` command line. Every command writes one JSON document
//! to standard output (or `--output`). Exit status: 0 when every requested
//! check passes, 1 on an engine error or a failed check, 2 when the
//! arguments or input files cannot be parsed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::birkhoff::{decompose, DecomposeOptions, Method};
use crate::checks::{self, CheckResult};
use crate::error::Error;
use crate::io::{to_json, DecompositionDoc};
use crate::numerics::{ComplexMatrix, DEFAULT_TOL};
use crate::permutations::detect_supercirculant;
use crate::sampling::{SampleKind, SampleSpec};
use crate::scaling::{zxz_scale, ScalingOptions};
use crate::xu_group::{is_prime, pitch, transfer_block_dims, transfer_matrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "xu-birkhoff",
    version,
    about = "Permutation-matrix decompositions of XU(n) and U(n) matrices"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Tolerance for membership tests and report flags.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for sampling and for scaling restarts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON document here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random matrix.
    Sample {
        #[arg(long, short)]
        n: usize,
        #[arg(long, value_parser = parse_kind, default_value = "xu")]
        kind: SampleKind,
    },
    /// Decompose an XU(n) matrix into permutation matrices, or a unitary
    /// matrix into complex permutation matrices.
    Decompose {
        input: PathBuf,
        #[arg(long, default_value = "auto")]
        method: Method,
        /// W3 split for the XU(3) family, as `re` or `re,im`.
        #[arg(long, value_parser = parse_complex, default_value = "1")]
        p: Complex64,
    },
    /// Factor a unitary matrix as e^{i alpha} Z1 X Z2.
    Scale {
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 8)]
        max_restarts: usize,
    },
    /// Recompute the report of a decomposition against a matrix.
    Verify { decomposition: PathBuf, matrix: PathBuf },
    /// Pitch tables x(r,s), y(r,s) for prime n.
    PitchTable { n: usize },
    /// The transfer matrix M_rs.
    Transfer { n: usize, r: usize, s: usize },
    /// Run the built-in reference checks.
    PaperCheck,
}

fn parse_kind(s: &str) -> Result<SampleKind, String> {
    match s {
        "unitary" => Ok(SampleKind::Unitary),
        "xu" => Ok(SampleKind::Xu),
        "circulant_xu" | "circulant-xu" => Ok(SampleKind::CirculantXu),
        "zu" => Ok(SampleKind::Zu),
        _ => Err(format!("unknown kind '{s}' (expected unitary, xu, circulant_xu or zu)")),
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected 're' or 're,im', got '{s}'")),
    }
}

/// Failure of a command, carrying its exit status.
struct Failure {
    status: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) | Error::Malformed(_) => EXIT_PARSE,
            _ => EXIT_FAILED,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn parse_failure(message: String) -> Failure {
    Failure {
        status: EXIT_PARSE,
        message,
    }
}

type CmdResult = Result<(String, bool), Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_failure(format!("{}: {e}", path.display())))
}

fn json<T: Serialize + ?Sized>(v: &T) -> Result<String, Failure> {
    Ok(to_json(v)?)
}

#[derive(Serialize)]
struct PitchTable {
    n: usize,
    x: Vec<Vec<usize>>,
    y: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct TransferDoc {
    n: usize,
    r: usize,
    s: usize,
    matrix: ComplexMatrix,
    pitches: Option<(usize, usize)>,
    block_dims: (usize, usize),
}

#[derive(Serialize)]
struct CheckSummary {
    passed: usize,
    failed: usize,
    checks: Vec<CheckResult>,
}

fn execute(cli: &Cli) -> CmdResult {
    let Common { tol, seed, .. } = cli.common;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(parse_failure(format!("--tol must be positive, got {tol}")));
    }
    let scaling = ScalingOptions {
        tol: tol.min(DEFAULT_TOL),
        rng_seed: seed,
        ..Default::default()
    };
    match &cli.command {
        Command::Sample { n, kind } => {
            let m = SampleSpec {
                n: *n,
                kind: *kind,
                seed,
            }
            .draw()?;
            Ok((json(&m)?, true))
        }
        Command::Decompose { input, method, p } => {
            let m: ComplexMatrix = read_json(input)?;
            let opts = DecomposeOptions { tol, scaling, p: *p };
            let d = decompose(&m, *method, &opts)?;
            let report = d.verify(&m, tol);
            let ok = d.accepts(&report);
            Ok((json(&DecompositionDoc::new(&d, Some(report)))?, ok))
        }
        Command::Scale {
            input,
            max_iters,
            max_restarts,
        } => {
            let m: ComplexMatrix = read_json(input)?;
            let opts = ScalingOptions {
                tol,
                max_iters: *max_iters,
                max_restarts: *max_restarts,
                rng_seed: seed,
            };
            let f = zxz_scale(&m, &opts)?;
            Ok((json(&f)?, true))
        }
        Command::Verify { decomposition, matrix } => {
            let doc: DecompositionDoc = read_json(decomposition)?;
            let m: ComplexMatrix = read_json(matrix)?;
            let d = doc.to_decomposed()?;
            let report = d.verify(&m, tol);
            let ok = d.accepts(&report);
            Ok((json(&report)?, ok))
        }
        Command::PitchTable { n } => {
            if !is_prime(*n) {
                return Err(pitch(*n, 1, 1).expect_err("composite n").into());
            }
            let mut x = vec![vec![0; n - 1]; n - 1];
            let mut y = x.clone();
            for r in 1..*n {
                for s in 1..*n {
                    (x[r - 1][s - 1], y[r - 1][s - 1]) = pitch(*n, r, s)?;
                }
            }
            Ok((json(&PitchTable { n: *n, x, y })?, true))
        }
        Command::Transfer { n, r, s } => {
            let t = transfer_matrix(*n, *r, *s)?;
            let doc = TransferDoc {
                n: *n,
                r: *r,
                s: *s,
                pitches: detect_supercirculant(&t.matrix, 1e-12),
                block_dims: transfer_block_dims(*n, *r, *s)?,
                matrix: t.matrix,
            };
            Ok((json(&doc)?, true))
        }
        Command::PaperCheck => {
            let results = checks::run_all();
            let passed = results.iter().filter(|c| c.passed).count();
            let failed = results.len() - passed;
            let doc = CheckSummary {
                passed,
                failed,
                checks: results,
            };
            Ok((json(&doc)?, failed == 0))
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return status;
        }
    };
    match execute(&cli) {
        Ok((text, ok)) => {
            let written = match &cli.common.output {
                Some(path) => std::fs::write(path, format!("{text}\n")),
                None => writeln!(out, "{text}"),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_FAILED;
            }
            if ok {
                EXIT_OK
            } else {
                let _ = writeln!(err, "check failed");
                EXIT_FAILED
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}
