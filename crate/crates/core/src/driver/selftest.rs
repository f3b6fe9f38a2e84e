//! Built-in checks: the golden corpus, a negative control and a sample of
//! the invariant suites.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::corpus::{check_entry, compare, corpus, entry};
use super::problem::Mode;
use super::{default_precision, run, Rat};
use crate::brieskorn::{jacobian_data, t_matrix_with, MicroModule};
use crate::field::spectrum::ExtensionPolicy;
use crate::logmonomial::nc_spectrum_at;
use crate::microdiff::normalize;
use crate::{q, ErrorKind, MPoly, Matrix, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SelftestSummary {
    pub checks: Vec<SelfCheck>,
}

impl SelftestSummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, name: impl Into<String>, result: Result<(), String>) {
        let (passed, detail) = match result {
            Ok(()) => (true, String::new()),
            Err(d) => (false, d),
        };
        self.checks.push(SelfCheck { name: name.into(), passed, detail });
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            if c.passed {
                let _ = writeln!(s, "PASS {}", c.name);
            } else {
                let _ = writeln!(s, "FAIL {}: {}", c.name, c.detail);
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(s, "{} checks, {failed} failed", self.checks.len());
        s
    }
}

/// A random invertible matrix with small integer entries and its inverse.
pub fn random_base_change(rng: &mut impl Rng, dim: usize) -> (Matrix<Q>, Matrix<Q>) {
    loop {
        let p = Matrix::from_fn(dim, dim, |_, _| q(rng.gen_range(-3..=3), 1));
        if let Some(inv) = p.inverse() {
            return (p, inv);
        }
    }
}

pub fn base_change(module: &MicroModule<Q>, p: &Matrix<Q>, pinv: &Matrix<Q>) -> MicroModule<Q> {
    MicroModule {
        series: module.series.conjugate_const(p, pinv),
        labels: (0..module.dim()).map(|j| format!("e{}", j + 1)).collect(),
        nvars: module.nvars,
    }
}

fn groebner_invariants(f: &MPoly<Q>) -> Result<(), String> {
    let md = jacobian_data(f).map_err(|e| e.to_string())?;
    let gb = &md.gb;
    let mut probes = vec![f * f, f.clone()];
    for i in 0..f.nvars() {
        probes.push(&MPoly::var(f.vars().clone(), i).pow(3) * f);
    }
    for g in probes {
        let (r, qs) = gb.normal_form_with_quotients(&g);
        let back = gb.generators().iter().zip(&qs).fold(r.clone(), |acc, (b, qi)| &acc + &(qi * b));
        if back != g {
            return Err(format!("reconstruction fails for {g}"));
        }
        if gb.normal_form(&r) != r {
            return Err(format!("normal form of {g} is not idempotent"));
        }
    }
    Ok(())
}

fn gauge_invariance(f: &MPoly<Q>, trials: usize, seed: u64) -> Result<(), String> {
    let md = jacobian_data(f).map_err(|e| e.to_string())?;
    let module = t_matrix_with(f, &md, default_precision(md.mu(), f.nvars()));
    let reference = normalize(&module, ExtensionPolicy::RationalOnly).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let (p, pinv) = random_base_change(&mut rng, module.dim());
        let got = normalize(&base_change(&module, &p, &pinv), ExtensionPolicy::RationalOnly)
            .map_err(|e| format!("trial {t}: {e}"))?;
        if got != reference {
            return Err(format!("trial {t}: factors changed under base change"));
        }
    }
    Ok(())
}

pub fn selftest() -> SelftestSummary {
    let mut summary = SelftestSummary::default();
    let entries = corpus();
    for e in &entries {
        let result = check_entry(e).and_then(|r| match r.isolated.and_then(|i| i.stabilization_certificate) {
            Some(false) => Err("results differ at N and 2N".to_string()),
            _ => Ok(()),
        });
        summary.record(format!("corpus/{}", e.name), result);
    }

    let cusp = entry("cusp").expect("cusp is in the corpus");
    let mut perturbed = cusp.expected.clone();
    if let Some(b) = perturbed.factors.as_mut().and_then(|fs| fs[0].exponents.first_mut()) {
        b.beta = Rat(&b.beta.0 + q(1, 1));
    }
    summary.record(
        "negative-control",
        match run(&cusp.problem).map(|r| compare(&perturbed, &r)) {
            Ok(Err(_)) => Ok(()),
            Ok(Ok(())) => Err("perturbed expectation was accepted".into()),
            Err(e) => Err(e.to_string()),
        },
    );

    let mut forced = cusp.problem.clone();
    forced.precision = Some(1);
    summary.record(
        "forced-precision-1",
        match run(&forced) {
            Err(e) if e.kind() == ErrorKind::PrecisionExhausted => Ok(()),
            Err(e) => Err(format!("expected precision-exhausted, got {}", e.kind().name())),
            Ok(_) => Err("expected precision-exhausted, got a report".into()),
        },
    );

    for e in entries.iter().filter(|e| e.problem.mode == Mode::Isolated) {
        if let Ok(f) = e.problem.function() {
            if jacobian_data(&f).is_ok() {
                summary.record(format!("groebner/{}", e.name), groebner_invariants(&f));
            }
        }
    }

    for (name, seed) in [("cusp", 1), ("x3-3x", 2)] {
        let f = entry(name).and_then(|e| e.problem.function().ok()).expect("corpus function");
        summary.record(format!("gauge/{name}"), gauge_invariance(&f, 5, seed));
    }

    for e in entries.iter().filter(|e| e.problem.mode == Mode::NcMonomial) {
        let result = e.problem.nc_problem().map_err(|err| err.to_string()).and_then(|p| {
            let base = nc_spectrum_at(&p, p.j[0]).map_err(|err| err.to_string())?;
            for &i0 in &p.j {
                let s = nc_spectrum_at(&p, i0).map_err(|err| err.to_string())?;
                if s.entries != base.entries {
                    return Err(format!("spectrum depends on i0 = {i0}"));
                }
            }
            Ok(())
        });
        summary.record(format!("nc-i0/{}", e.name), result);
    }

    summary.record(
        "determinism",
        match (run(&cusp.problem), run(&cusp.problem)) {
            (Ok(a), Ok(b)) if a.to_json() == b.to_json() => Ok(()),
            (Ok(_), Ok(_)) => Err("two runs gave different reports".into()),
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        },
    );
    summary
}
