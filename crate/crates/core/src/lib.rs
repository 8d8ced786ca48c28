//! Decompositions of unitary matrices whose line sums all equal 1 (the
//! group XU(n)) into weighted sums of permutation matrices, and of general
//! unitaries into weighted sums of complex permutation matrices.
//!
//! ```
//! use xu_birkhoff::{birkhoff, sampling};
//!
//! let x = sampling::random_xu(5, 7).unwrap();
//! let d = birkhoff::decompose(&x, birkhoff::Method::Auto, &Default::default()).unwrap();
//! let report = d.verify(&x, 1e-9);
//! assert!(report.passes(true));
//! assert_eq!(report.term_count, 25);
//! ```

pub mod birkhoff;
pub mod checks;
pub mod cli;
pub mod error;
pub mod io;
pub mod numerics;
pub mod permutations;
pub mod sampling;
pub mod scaling;
pub mod xu_group;

pub use error::{Error, Result};
pub use numerics::ComplexMatrix;
pub use permutations::Permutation;
