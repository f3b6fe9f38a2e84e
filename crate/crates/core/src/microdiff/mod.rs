//! Normal form of a t-action module: split by critical values, saturate each
//! block to a regular lattice, remove resonances and read off the monodromy.

mod decouple;
mod regularize;
mod resonance;

pub use decouple::{decouple, Decoupled};
pub use regularize::{regularize, RegularForm};
pub use resonance::{desresonate, desresonate_series, rational_spectrum, Desresonated, ResonanceMode};

use std::cmp::Ordering;

use rayon::prelude::*;
use thiserror::Error;

use crate::brieskorn::MicroModule;
use crate::field::matrix::Matrix;
use crate::field::spectrum::{jordan_data, split_spectrum, ExtensionPolicy, Spectrum};
use crate::field::upoly::UPoly;
use crate::field::{FieldError, Scalar, Q};
use crate::series::MatSeries;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MicrodiffError {
    #[error("precision exhausted: {needed} orders needed, {available} available")]
    PrecisionExhausted { needed: usize, available: usize },
    #[error("lattice saturation did not stabilize after {steps} steps")]
    NoStabilization { steps: usize },
    #[error("exponent is not rational: {0}")]
    NonrationalExponent(String),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("invalid block: {0}")]
    InvalidBlock(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriticalValue {
    Rational(Q),
    /// A root of an irreducible polynomial; the factor stands for each of
    /// its `orbit` conjugate roots.
    Algebraic { minimal_polynomial: UPoly<Q>, orbit: usize },
}

impl CriticalValue {
    pub fn orbit(&self) -> usize {
        match self {
            CriticalValue::Rational(_) => 1,
            CriticalValue::Algebraic { orbit, .. } => *orbit,
        }
    }

    fn sort_key(&self) -> (u8, Q, String) {
        match self {
            CriticalValue::Rational(q) => (0, q.clone(), String::new()),
            CriticalValue::Algebraic { minimal_polynomial, .. } => {
                (1, Q::from_integer(0.into()), minimal_polynomial.fmt_var("c"))
            }
        }
    }
}

impl Ord for CriticalValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for CriticalValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One exponent `β` and the Jordan block sizes of `exp(-2πiβ)` attached to
/// it, in descending order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExponentClass {
    pub beta: Q,
    pub blocks: Vec<usize>,
}

impl ExponentClass {
    pub fn multiplicity(&self) -> usize {
        self.blocks.iter().sum()
    }
}

/// The vanishing-cycle summand over one critical value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ECFactor {
    pub critical_value: CriticalValue,
    /// Dimension over a single root of the critical value.
    pub dimension: usize,
    pub exponents: Vec<ExponentClass>,
    pub degree: usize,
}

impl ECFactor {
    /// All exponents with multiplicity, ascending.
    pub fn exponent_multiset(&self) -> Vec<Q> {
        self.exponents
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.beta.clone(), e.multiplicity()))
            .collect()
    }
}

pub fn monodromy<F: Scalar>(r: &Matrix<F>, c: CriticalValue, degree: usize) -> Result<ECFactor, MicrodiffError> {
    let mut exponents = jordan_data(r)
        .map_err(|e| match e {
            FieldError::IrreducibleFactor(p) => MicrodiffError::NonrationalExponent(format!("roots of {p}")),
            other => other.into(),
        })?
        .into_iter()
        .map(|(v, blocks)| {
            let beta = v.to_rational().ok_or_else(|| MicrodiffError::NonrationalExponent(v.to_string()))?;
            Ok(ExponentClass { beta, blocks })
        })
        .collect::<Result<Vec<_>, MicrodiffError>>()?;
    exponents.sort();
    Ok(ECFactor { critical_value: c, dimension: r.rows(), exponents, degree })
}

/// Saturation and resonance removal for one decoupled block.
pub fn normalize_block<F: Scalar>(block: &MatSeries<F>, c: &F, nvars: usize) -> Result<Matrix<F>, MicrodiffError> {
    let reg = regularize(block, c, nvars)?;
    let mode = if reg.steps == 0 { ResonanceMode::Preserve } else { ResonanceMode::Minimal };
    Ok(desresonate_series(&reg.series, mode)?.residue)
}

fn normalize_over<F: Scalar>(
    series: &MatSeries<F>,
    nvars: usize,
    degree: usize,
    classify: impl Fn(&F) -> CriticalValue + Sync,
) -> Result<Vec<ECFactor>, MicrodiffError> {
    let dec = decouple(series)?;
    let mut out = dec
        .blocks
        .par_iter()
        .map(|(c, block)| {
            let r = normalize_block(block, c, nvars)?;
            monodromy(&r, classify(c), degree)
        })
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| a.critical_value.cmp(&b.critical_value));
    Ok(out)
}

/// The full list of vanishing-cycle factors of a module, sorted by critical
/// value.
pub fn normalize(module: &MicroModule<Q>, policy: ExtensionPolicy) -> Result<Vec<ECFactor>, MicrodiffError> {
    if module.dim() == 0 {
        return Ok(Vec::new());
    }
    let degree = module.nvars;
    match split_spectrum(module.series.coeff(0), policy)? {
        Spectrum::Rational(_) => {
            normalize_over(&module.series, module.nvars, degree, |c: &Q| CriticalValue::Rational(c.clone()))
        }
        Spectrum::Extended { field, .. } => {
            let lifted = module.series.map(|x| field.lift(x));
            let p = field.modulus().clone();
            let orbit = field.degree();
            normalize_over(&lifted, module.nvars, degree, |c| match c.to_rational() {
                Some(q) => CriticalValue::Rational(q),
                None => CriticalValue::Algebraic { minimal_polynomial: p.clone(), orbit },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brieskorn::t_matrix;
    use crate::mpoly::parse;
    use crate::q;
    use std::sync::Arc;

    fn m(rows: &[&[(i64, i64)]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&(a, b)| q(a, b)).collect()).collect())
    }

    fn module(f: &str, vars: &[&str], n: usize) -> MicroModule<Q> {
        let vars = Arc::new(vars.iter().map(|s| s.to_string()).collect());
        t_matrix(&parse(f, &vars).unwrap(), n).unwrap()
    }

    pub(crate) fn synthetic(precision: usize) -> MatSeries<Q> {
        let mut s = MatSeries::zeros(2, precision);
        *s.coeff_mut(0) = m(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]);
        *s.coeff_mut(1) = m(&[&[(3, 4), (0, 1)], &[(0, 1), (3, 4)]]);
        s
    }

    #[test]
    fn decouple_two_values() {
        let md = module("x^3 - 3*x", &["x"], 8);
        let dec = decouple(&md.series).unwrap();
        assert_eq!(dec.blocks.len(), 2);
        assert_eq!(dec.blocks[0].0, q(-2, 1));
        assert_eq!(dec.blocks[1].0, q(2, 1));
        for (_, b) in &dec.blocks {
            assert_eq!(b.dim(), 1);
            assert_eq!(b.coeff(1)[(0, 0)], q(1, 2));
        }
        // off-diagonal entries of A₁ in the eigenbasis; their product does
        // not depend on how the eigenvectors are scaled
        let p = dec.gauge.coeff(0).clone();
        let a1 = &(&p.inverse().unwrap() * md.series.coeff(1)) * &p;
        assert_eq!(a1[(0, 0)], q(1, 2));
        assert_eq!(a1[(0, 1)].clone() * a1[(1, 0)].clone(), q(1, 36));
    }

    #[test]
    fn decouple_round_trip() {
        for f in ["x^3 - 3*x", "x^4 - 2*x^2 + x"] {
            let md = module(f, &["x"], 8);
            let dec = decouple(&md.series).unwrap();
            assert_eq!(md.series.gauge(&dec.gauge).unwrap(), dec.reassemble(), "{f}");
        }
    }

    #[test]
    fn decouple_single_value_is_identity() {
        let md = module("x^2 + y^3", &["x", "y"], 6);
        let dec = decouple(&md.series).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        assert_eq!(dec.blocks[0].1, md.series);
        assert_eq!(dec.gauge, MatSeries::identity(2, 6));
    }

    #[test]
    fn decouple_needs_margin() {
        let md = module("x^2 + y^3", &["x", "y"], 1);
        assert!(matches!(decouple(&md.series), Err(MicrodiffError::PrecisionExhausted { .. })));
    }

    #[test]
    fn regularize_examples() {
        let md = module("x^2 + y^3", &["x", "y"], 6);
        let r = regularize(&md.series, &q(0, 1), 2).unwrap();
        assert_eq!(r.steps, 0);
        assert_eq!(r.residue, Matrix::diagonal(&[q(5, 6), q(7, 6)]));

        let zero = MatSeries::<Q>::zeros(2, 4);
        assert_eq!(regularize(&zero, &q(0, 1), 0).unwrap().residue, Matrix::zeros(2, 2));

        let r = regularize(&synthetic(6), &q(0, 1), 0).unwrap();
        assert_eq!(r.steps, 1);
        assert_eq!(r.residue, m(&[&[(-1, 4), (1, 1)], &[(0, 1), (3, 4)]]));
        assert_eq!(r.basis.matrix.valuation, -1);
        assert_eq!(r.basis.matrix.coeff(-1), m(&[&[(1, 1), (0, 1)], &[(0, 1), (0, 1)]]));
    }

    #[test]
    fn regularize_cap() {
        // a twist that is not nilpotent is rejected, not looped on
        let s = MatSeries::constant(Matrix::identity(1), 4);
        assert!(matches!(regularize(&s, &q(0, 1), 0), Err(MicrodiffError::InvalidBlock(_))));
    }

    #[test]
    fn desresonate_examples() {
        let (r, _) = desresonate(&Matrix::diagonal(&[q(5, 6), q(7, 6)])).unwrap();
        assert_eq!(r, Matrix::diagonal(&[q(5, 6), q(7, 6)]));
        let (r, _) = desresonate(&m(&[&[(-1, 4), (1, 1)], &[(0, 1), (3, 4)]])).unwrap();
        assert_eq!(r, Matrix::diagonal(&[q(-1, 4), q(-1, 4)]));
        let (r, _) = desresonate(&Matrix::<Q>::zeros(2, 2)).unwrap();
        assert!(r.is_zero());
        let bad = m(&[&[(0, 1), (-2, 1)], &[(1, 1), (0, 1)]]);
        assert!(matches!(desresonate(&bad), Err(MicrodiffError::NonrationalExponent(_))));
    }

    #[test]
    fn exponent_sum_bookkeeping() {
        let reg = regularize(&synthetic(8), &q(0, 1), 0).unwrap();
        let d = desresonate_series(&reg.series, ResonanceMode::Minimal).unwrap();
        assert_eq!(d.total_shift, -1);
        assert_eq!(d.residue.trace(), reg.residue.trace() + q(d.total_shift, 1));
    }

    #[test]
    fn preserve_keeps_uncoupled_resonance() {
        let mut a = MatSeries::zeros(2, 6);
        *a.coeff_mut(1) = Matrix::diagonal(&[q(1, 1), q(2, 1)]);
        let d = desresonate_series(&a, ResonanceMode::Preserve).unwrap();
        assert_eq!(d.mode, ResonanceMode::Preserve);
        assert_eq!(d.residue, Matrix::diagonal(&[q(1, 1), q(2, 1)]));
        // a coupling at the resonant order forces the shear
        *a.coeff_mut(2) = m(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]);
        let d = desresonate_series(&a, ResonanceMode::Preserve).unwrap();
        assert_eq!(d.mode, ResonanceMode::Minimal);
        assert_eq!(monodromy(&d.residue, CriticalValue::Rational(q(0, 1)), 0).unwrap().exponents, vec![
            ExponentClass { beta: q(1, 1), blocks: vec![2] }
        ]);
    }

    #[test]
    fn monodromy_examples() {
        let f = monodromy(&Matrix::diagonal(&[q(5, 6), q(7, 6)]), CriticalValue::Rational(q(0, 1)), 2).unwrap();
        assert_eq!(f.dimension, 2);
        assert_eq!(f.exponents, vec![
            ExponentClass { beta: q(5, 6), blocks: vec![1] },
            ExponentClass { beta: q(7, 6), blocks: vec![1] }
        ]);
        let f = monodromy(&Matrix::diagonal(&[q(1, 2)]), CriticalValue::Rational(q(-2, 1)), 1).unwrap();
        assert_eq!(f.exponents, vec![ExponentClass { beta: q(1, 2), blocks: vec![1] }]);
        let f = monodromy(&Matrix::<Q>::zeros(1, 1), CriticalValue::Rational(q(0, 1)), 1).unwrap();
        assert_eq!(f.exponents, vec![ExponentClass { beta: q(0, 1), blocks: vec![1] }]);
    }

    #[test]
    fn synthetic_pipeline() {
        let facs = normalize(&MicroModule::synthetic(synthetic(10)), ExtensionPolicy::RationalOnly).unwrap();
        assert_eq!(facs.len(), 1);
        assert_eq!(facs[0].exponent_multiset(), vec![q(-1, 4), q(-1, 4)]);
    }

    #[test]
    fn cusp_and_two_points() {
        let facs = normalize(&module("x^2 + y^3", &["x", "y"], 8), ExtensionPolicy::RationalOnly).unwrap();
        assert_eq!(facs.len(), 1);
        assert_eq!(facs[0].exponent_multiset(), vec![q(5, 6), q(7, 6)]);
        assert_eq!(facs[0].degree, 2);
        let facs = normalize(&module("x^3 - 3*x", &["x"], 8), ExtensionPolicy::RationalOnly).unwrap();
        let cs: Vec<_> = facs.iter().map(|f| f.critical_value.clone()).collect();
        assert_eq!(cs, vec![CriticalValue::Rational(q(-2, 1)), CriticalValue::Rational(q(2, 1))]);
        assert!(facs.iter().all(|f| f.exponent_multiset() == vec![q(1, 2)]));
    }

    #[test]
    fn extension_critical_values() {
        let md = module("x^3 - 2*x", &["x"], 8);
        assert!(matches!(
            normalize(&md, ExtensionPolicy::RationalOnly),
            Err(MicrodiffError::Field(FieldError::IrreducibleFactor(_)))
        ));
        let facs = normalize(&md, ExtensionPolicy::AllowOneExtension).unwrap();
        assert_eq!(facs.len(), 1);
        let CriticalValue::Algebraic { minimal_polynomial, orbit } = &facs[0].critical_value else {
            panic!("expected an algebraic critical value");
        };
        assert_eq!(minimal_polynomial.fmt_var("c"), "c^2 - 32/27");
        assert_eq!(*orbit, 2);
        assert_eq!(facs[0].exponent_multiset(), vec![q(1, 2)]);
    }

    #[test]
    fn dropping_the_derivative_term_gives_wrong_residue() {
        // the shear u^{-1} on e1 without its u²∂_u contribution
        let full = synthetic(6).shear(&[-1, 0]).unwrap();
        let mut naive = full.clone();
        naive.coeff_mut(1)[(0, 0)] = naive.coeff(1)[(0, 0)].clone() + q(1, 1);
        assert_eq!(full.coeff(1), &m(&[&[(-1, 4), (1, 1)], &[(0, 1), (3, 4)]]));
        assert_eq!(naive.coeff(1), &m(&[&[(3, 4), (1, 1)], &[(0, 1), (3, 4)]]));
        let spec = |a: &MatSeries<Q>| {
            let r = desresonate_series(a, ResonanceMode::Minimal).unwrap().residue;
            monodromy(&r, CriticalValue::Rational(q(0, 1)), 0).unwrap().exponents
        };
        assert_eq!(spec(&full), vec![ExponentClass { beta: q(-1, 4), blocks: vec![1, 1] }]);
        assert_eq!(spec(&naive), vec![ExponentClass { beta: q(3, 4), blocks: vec![2] }]);
    }
}
