//! End-to-end runs: problem document in, report document out.

pub mod corpus;
pub mod problem;
pub mod report;
pub mod selftest;

use std::time::Instant;

use crate::brieskorn::{jacobian_data, t_matrix_with};
use crate::field::spectrum::ExtensionPolicy;
use crate::groebner::MilnorData;
use crate::logmonomial::nc_spectrum;
use crate::microdiff::{normalize, ECFactor, MicrodiffError};
use crate::mpoly::MPoly;
use crate::{Error, Q};

pub use problem::{Check, Extension, Mode, ProblemSpec, Rat};
pub use report::{FactorReport, IsolatedReport, NcReport, Report, SCHEMA};

/// Doublings tried after the default precision fails.
pub const RETRIES: usize = 2;

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub timing: bool,
}

pub fn default_precision(mu: usize, nvars: usize) -> usize {
    2 * (mu + nvars + 2)
}

pub fn isolated_factors(
    f: &MPoly<Q>,
    md: &MilnorData<Q>,
    precision: usize,
    policy: ExtensionPolicy,
) -> Result<Vec<ECFactor>, Error> {
    Ok(normalize(&t_matrix_with(f, md, precision), policy)?)
}

fn retryable(e: &Error) -> bool {
    matches!(e, Error::Microdiff(MicrodiffError::PrecisionExhausted { .. } | MicrodiffError::NoStabilization { .. }))
}

fn run_isolated(spec: &ProblemSpec) -> Result<IsolatedReport, Error> {
    let f = spec.function()?;
    let md = jacobian_data(&f)?;
    let mu = md.mu();
    let policy = spec.extension.policy();
    let (precision, factors) = match spec.precision {
        Some(p) => (p, isolated_factors(&f, &md, p, policy)?),
        None => {
            let mut p = default_precision(mu, f.nvars());
            let mut attempt = 0;
            loop {
                match isolated_factors(&f, &md, p, policy) {
                    Ok(fs) => break (p, fs),
                    Err(e) if retryable(&e) && attempt < RETRIES => {
                        attempt += 1;
                        p *= 2;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    };
    let factors: Vec<FactorReport> = factors.iter().map(FactorReport::from).collect();
    let stabilization_certificate = match spec.check {
        Check::None => None,
        Check::Certify => Some(
            isolated_factors(&f, &md, 2 * precision, policy)
                .is_ok_and(|g| g.iter().map(FactorReport::from).collect::<Vec<_>>() == factors),
        ),
    };
    let report = IsolatedReport { mu, degree: f.nvars(), precision, stabilization_certificate, factors };
    if report.total_dimension() != mu {
        return Err(Error::Internal(format!(
            "factor dimensions add up to {}, Milnor number is {mu}",
            report.total_dimension()
        )));
    }
    Ok(report)
}

fn run_nc(spec: &ProblemSpec) -> Result<NcReport, Error> {
    let prob = spec.nc_problem()?;
    let s = nc_spectrum(&prob)?;
    Ok(NcReport::new(&s, &spec.variables, prob.j_prime.len()))
}

pub fn run(spec: &ProblemSpec) -> Result<Report, Error> {
    run_with(spec, RunOptions::default())
}

pub fn run_with(spec: &ProblemSpec, opts: RunOptions) -> Result<Report, Error> {
    let start = Instant::now();
    let mut report = Report {
        schema: SCHEMA.to_string(),
        input: spec.clone(),
        isolated: None,
        nc_monomial: None,
        timing_ms: None,
    };
    match spec.mode {
        Mode::Isolated => report.isolated = Some(run_isolated(spec)?),
        Mode::NcMonomial => report.nc_monomial = Some(run_nc(spec)?),
    }
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}
