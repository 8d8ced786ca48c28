//! JSON documents. Floats are written with 17 significant digits so that
//! every double survives a round trip; non-finite values become `null`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::birkhoff::{
    ComplexPermSum, ComplexPermTerm, Decomposed, Engine, Terms, VerificationReport, WeightedPermSum,
};
use crate::error::{Error, Result};
use crate::permutations::Permutation;

/// Compact output with `{:.16e}` floats.
#[derive(Debug, Default, Clone, Copy)]
pub struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value.serialize(&mut ser)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    /// One-based image.
    pub perm: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<Complex64>>,
    pub weight: Complex64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub n: usize,
    pub engine: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Complex64>,
    pub terms: Vec<TermDoc>,
    /// Ignored on input: `verify` always recomputes.
    #[serde(default, skip_deserializing)]
    pub report: Option<VerificationReport>,
}

impl DecompositionDoc {
    pub fn new(d: &Decomposed, report: Option<VerificationReport>) -> Self {
        let terms = match &d.terms {
            Terms::Real(s) => s
                .iter()
                .map(|(p, &m)| TermDoc {
                    perm: p.one_based(),
                    phases: None,
                    weight: m,
                })
                .collect(),
            Terms::Complex(s) => s
                .terms
                .iter()
                .map(|t| TermDoc {
                    perm: t.perm.one_based(),
                    phases: Some(t.phases.clone()),
                    weight: t.weight,
                })
                .collect(),
        };
        Self {
            n: d.n,
            engine: d.engine.name().to_string(),
            p: d.p,
            terms,
            report,
        }
    }

    /// Rebuilds the terms. A document is complex when any term has phases;
    /// then every term must have them.
    pub fn to_terms(&self) -> Result<Terms> {
        let complex = self.terms.iter().any(|t| t.phases.is_some());
        let perm = |t: &TermDoc| -> Result<Permutation> {
            let p = Permutation::from_one_based(&t.perm)?;
            if p.n() != self.n {
                return Err(Error::DimensionMismatch {
                    left: self.n,
                    right: p.n(),
                });
            }
            Ok(p)
        };
        if !complex {
            let terms = self
                .terms
                .iter()
                .map(|t| Ok((perm(t)?, t.weight)))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Terms::Real(WeightedPermSum::from_terms(self.n, terms)?));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let phases = t
                    .phases
                    .clone()
                    .ok_or_else(|| Error::Malformed("a term without phases in a complex decomposition".into()))?;
                if phases.len() != self.n {
                    return Err(Error::Malformed(format!("{} phases for n = {}", phases.len(), self.n)));
                }
                Ok(ComplexPermTerm {
                    perm: perm(t)?,
                    phases,
                    weight: t.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Terms::Complex(ComplexPermSum { n: self.n, terms }))
    }

    pub fn to_decomposed(&self) -> Result<Decomposed> {
        let engine =
            Engine::from_name(&self.engine).ok_or_else(|| Error::Parse(format!("unknown engine '{}'", self.engine)))?;
        Ok(Decomposed {
            n: self.n,
            engine,
            p: self.p,
            terms: self.to_terms()?,
            factorization: None,
        })
    }
}
