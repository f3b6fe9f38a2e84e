//! Report documents.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::problem::{ProblemSpec, Rat};
use crate::logmonomial::NCSpectrum;
use crate::microdiff::{CriticalValue, ECFactor};
use crate::{Error, Q};

pub const SCHEMA: &str = "vancyc-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CriticalValueReport {
    Rational { value: Rat },
    /// Written in the variable `c`.
    Algebraic { minimal_polynomial: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub beta: Rat,
    /// `β mod 1`; the monodromy eigenvalue is `exp(-2πi·rotation)`.
    pub rotation: Rat,
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    pub critical_value: CriticalValueReport,
    pub galois_orbit: usize,
    pub dimension: usize,
    pub exponents: Vec<ExponentReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedReport {
    pub mu: usize,
    pub degree: usize,
    pub precision: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilization_certificate: Option<bool>,
    pub factors: Vec<FactorReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcEntryReport {
    pub eigenvalue: Rat,
    pub degree: usize,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcReport {
    pub i0: String,
    /// Cohomological degrees run over `0..degrees`.
    pub degrees: usize,
    pub spectrum: Vec<NcEntryReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub input: ProblemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isolated: Option<IsolatedReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nc_monomial: Option<NcReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

pub fn rotation(beta: &Q) -> Q {
    beta - beta.floor()
}

impl From<&ECFactor> for FactorReport {
    fn from(f: &ECFactor) -> Self {
        let critical_value = match &f.critical_value {
            CriticalValue::Rational(c) => CriticalValueReport::Rational { value: Rat(c.clone()) },
            CriticalValue::Algebraic { minimal_polynomial, .. } => {
                CriticalValueReport::Algebraic { minimal_polynomial: minimal_polynomial.fmt_var("c") }
            }
        };
        FactorReport {
            critical_value,
            galois_orbit: f.critical_value.orbit(),
            dimension: f.dimension,
            exponents: f
                .exponents
                .iter()
                .map(|e| ExponentReport {
                    beta: Rat(e.beta.clone()),
                    rotation: Rat(rotation(&e.beta)),
                    blocks: e.blocks.clone(),
                })
                .collect(),
        }
    }
}

impl NcReport {
    pub fn new(spec: &NCSpectrum, variables: &[String], degrees: usize) -> Self {
        NcReport {
            i0: variables[spec.i0].clone(),
            degrees,
            spectrum: spec
                .entries
                .iter()
                .map(|e| NcEntryReport { eigenvalue: Rat(e.eigenvalue.clone()), degree: e.degree, multiplicity: e.multiplicity })
                .collect(),
        }
    }

    /// Multiplicities per degree at one eigenvalue.
    pub fn dims_at(&self, eigenvalue: &Q) -> Vec<u64> {
        let mut out = vec![0; self.degrees];
        for e in self.spectrum.iter().filter(|e| &e.eigenvalue.0 == eigenvalue) {
            out[e.degree] += e.multiplicity;
        }
        out
    }
}

impl IsolatedReport {
    /// Total dimension over all conjugates.
    pub fn total_dimension(&self) -> usize {
        self.factors.iter().map(|f| f.dimension * f.galois_orbit).sum()
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let r: Report = serde_json::from_str(text).map_err(|e| Error::InvalidProblem(e.to_string()))?;
        if r.schema != SCHEMA {
            return Err(Error::InvalidProblem(format!("unsupported schema {:?}", r.schema)));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(f) = &self.input.f {
            let _ = writeln!(s, "f = {f}");
        }
        if let Some(iso) = &self.isolated {
            let cert = match iso.stabilization_certificate {
                Some(true) => "certified",
                Some(false) => "NOT certified",
                None => "unchecked",
            };
            let _ = writeln!(s, "mu = {}, degree {}, precision {} ({cert})", iso.mu, iso.degree, iso.precision);
            if iso.factors.is_empty() {
                let _ = writeln!(s, "no critical values");
            }
            for fac in &iso.factors {
                match &fac.critical_value {
                    CriticalValueReport::Rational { value } => {
                        let _ = writeln!(s, "c = {value}: dimension {}", fac.dimension);
                    }
                    CriticalValueReport::Algebraic { minimal_polynomial } => {
                        let _ = writeln!(
                            s,
                            "c root of {minimal_polynomial} ({} conjugates): dimension {} each",
                            fac.galois_orbit, fac.dimension
                        );
                    }
                }
                for e in &fac.exponents {
                    let blocks: Vec<String> = e.blocks.iter().map(|b| b.to_string()).collect();
                    let _ = writeln!(s, "  beta {:>8}  rotation {:>6}  blocks {}", e.beta, e.rotation, blocks.join(","));
                }
            }
        }
        if let Some(nc) = &self.nc_monomial {
            let _ = writeln!(s, "i0 = {}", nc.i0);
            if nc.spectrum.is_empty() {
                let _ = writeln!(s, "no eigenvalues in range");
            }
            let mut values: Vec<&Rat> = nc.spectrum.iter().map(|e| &e.eigenvalue).collect();
            values.dedup();
            for v in values {
                let dims: Vec<String> = nc.dims_at(&v.0).iter().map(|d| d.to_string()).collect();
                let _ = writeln!(s, "  eigenvalue {:>8}  dims {}", v, dims.join(" "));
            }
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(s, "time {ms} ms");
        }
        s
    }
}

/// Exponent multiset of a factor list, over all conjugates, ascending.
pub fn exponent_multiset(factors: &[FactorReport]) -> Vec<Q> {
    let mut out: Vec<Q> = factors
        .iter()
        .flat_map(|f| {
            f.exponents.iter().flat_map(move |e| {
                std::iter::repeat_n(e.beta.0.clone(), e.blocks.iter().sum::<usize>() * f.galois_orbit)
            })
        })
        .collect();
    out.sort();
    out
}
