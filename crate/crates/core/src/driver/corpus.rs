//! The golden corpus, embedded at build time from `corpus/`.

use serde::{Deserialize, Serialize};

use super::problem::ProblemSpec;
use super::report::{FactorReport, NcEntryReport, Report};
use super::run;

const FILES: &[(&str, &str)] = &[
    ("a1", include_str!("../../corpus/a1.json")),
    ("a2", include_str!("../../corpus/a2.json")),
    ("a3", include_str!("../../corpus/a3.json")),
    ("a4", include_str!("../../corpus/a4.json")),
    ("a5", include_str!("../../corpus/a5.json")),
    ("broughton", include_str!("../../corpus/broughton.json")),
    ("cusp", include_str!("../../corpus/cusp.json")),
    ("d4", include_str!("../../corpus/d4.json")),
    ("morse1", include_str!("../../corpus/morse1.json")),
    ("morse2", include_str!("../../corpus/morse2.json")),
    ("morse3", include_str!("../../corpus/morse3.json")),
    ("morse4", include_str!("../../corpus/morse4.json")),
    ("nc-x1", include_str!("../../corpus/nc-x1.json")),
    ("nc-x2y2-twisted", include_str!("../../corpus/nc-x2y2-twisted.json")),
    ("nc-x3", include_str!("../../corpus/nc-x3.json")),
    ("nc-x7", include_str!("../../corpus/nc-x7.json")),
    ("nc-xy", include_str!("../../corpus/nc-xy.json")),
    ("nc-xy-boundary", include_str!("../../corpus/nc-xy-boundary.json")),
    ("x3-2x-extension", include_str!("../../corpus/x3-2x-extension.json")),
    ("x3-3x", include_str!("../../corpus/x3-3x.json")),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<NcEntryReport>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub problem: ProblemSpec,
    pub expected: Expected,
}

pub fn corpus() -> Vec<CorpusEntry> {
    FILES
        .iter()
        .map(|(file, text)| {
            let e: CorpusEntry = serde_json::from_str(text).unwrap_or_else(|err| panic!("corpus/{file}.json: {err}"));
            assert_eq!(&e.name, file, "corpus entry name must match its file");
            e
        })
        .collect()
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}

/// Compares a report against the expectation, naming the first mismatch.
pub fn compare(expected: &Expected, report: &Report) -> Result<(), String> {
    let iso = report.isolated.as_ref();
    if let Some(mu) = expected.mu {
        let got = iso.map(|r| r.mu);
        if got != Some(mu) {
            return Err(format!("mu: expected {mu}, got {got:?}"));
        }
    }
    if let Some(fs) = &expected.factors {
        let got = iso.map(|r| &r.factors);
        if got != Some(fs) {
            return Err(format!(
                "factors: expected {}, got {}",
                serde_json::to_string(fs).unwrap_or_default(),
                serde_json::to_string(&got).unwrap_or_default()
            ));
        }
    }
    if let Some(sp) = &expected.spectrum {
        let got = report.nc_monomial.as_ref().map(|r| &r.spectrum);
        if got != Some(sp) {
            return Err(format!(
                "spectrum: expected {}, got {}",
                serde_json::to_string(sp).unwrap_or_default(),
                serde_json::to_string(&got).unwrap_or_default()
            ));
        }
    }
    Ok(())
}

pub fn check_entry(e: &CorpusEntry) -> Result<Report, String> {
    let report = run(&e.problem).map_err(|err| format!("{}: {err}", err.kind().name()))?;
    compare(&e.expected, &report)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads() {
        let c = corpus();
        assert_eq!(c.len(), FILES.len());
        assert!(entry("cusp").is_some());
    }
}
