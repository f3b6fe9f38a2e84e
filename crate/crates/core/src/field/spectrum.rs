//! Generalized eigenspace splitting and Jordan data.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ext::{Ext, ExtField};
use super::factor;
use super::matrix::Matrix;
use super::upoly::UPoly;
use super::{FieldError, RootSplit, Scalar, Q};

/// Whether the splitting may adjoin a root of one irreducible factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionPolicy {
    #[default]
    RationalOnly,
    AllowOneExtension,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenspace<F> {
    pub value: F,
    /// Columns span the generalized eigenspace.
    pub basis: Matrix<F>,
    pub multiplicity: usize,
}

/// Invariant complement on which the characteristic polynomial does not
/// split in the active field (the Galois conjugates of an adjoined root).
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugateSpace<F> {
    pub factor: UPoly<F>,
    pub basis: Matrix<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSplit<F> {
    pub spaces: Vec<Eigenspace<F>>,
    pub conjugates: Option<ConjugateSpace<F>>,
}

impl<F: Scalar> SpectralSplit<F> {
    /// All bases side by side: an invertible change of basis that
    /// block-diagonalizes the split matrix.
    pub fn change_of_basis(&self, n: usize) -> Matrix<F> {
        let mut cols = Vec::new();
        for s in &self.spaces {
            cols.extend((0..s.basis.cols()).map(|j| s.basis.column(j)));
        }
        if let Some(c) = &self.conjugates {
            cols.extend((0..c.basis.cols()).map(|j| c.basis.column(j)));
        }
        Matrix::from_columns(n, &cols)
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.spaces.iter().map(|s| s.multiplicity).collect();
        if let Some(c) = &self.conjugates {
            out.push(c.basis.cols());
        }
        out
    }
}

/// Splits `m` over its own field `F`: one generalized eigenspace per root
/// of the characteristic polynomial in `F`, plus the complement belonging
/// to the unsplit cofactor.
pub fn split_in_field<F: Scalar>(m: &Matrix<F>) -> SpectralSplit<F> {
    let split = triangular_roots(m).unwrap_or_else(|| F::split_roots(&m.char_poly()));
    let spaces = split
        .roots
        .into_iter()
        .map(|(value, multiplicity)| {
            let basis = generalized_kernel(m, &value, multiplicity);
            Eigenspace { value, basis, multiplicity }
        })
        .collect();
    let conjugates = (split.cofactor.degree().unwrap_or(0) > 0).then(|| {
        let basis = split.cofactor.eval_matrix(m).kernel();
        ConjugateSpace { factor: split.cofactor, basis }
    });
    SpectralSplit { spaces, conjugates }
}

/// The spectrum of a triangular matrix with rational diagonal, in the
/// ascending order `split_roots` uses.
fn triangular_roots<F: Scalar>(m: &Matrix<F>) -> Option<RootSplit<F>> {
    let n = m.rows();
    let upper = (0..n).all(|i| (0..i).all(|j| m[(i, j)].is_zero()));
    if !upper && !(0..n).all(|i| (i + 1..n).all(|j| m[(i, j)].is_zero())) {
        return None;
    }
    let mut diag: Vec<Q> = (0..n).map(|i| m[(i, i)].to_rational()).collect::<Option<_>>()?;
    diag.sort();
    let mut roots: Vec<(F, usize)> = Vec::new();
    let mut last: Option<&Q> = None;
    for v in &diag {
        match roots.last_mut() {
            Some((_, k)) if last == Some(v) => *k += 1,
            _ => roots.push((F::from_rational(v.clone()), 1)),
        }
        last = Some(v);
    }
    Some(RootSplit { roots, cofactor: UPoly::one() })
}

/// `ker (m - c)^k` for the least `k` giving dimension `mult`.
fn generalized_kernel<F: Scalar>(m: &Matrix<F>, c: &F, mult: usize) -> Matrix<F> {
    let nil = m.shift(c);
    let mut p = nil.clone();
    loop {
        let k = p.kernel();
        if k.cols() >= mult {
            debug_assert_eq!(k.cols(), mult);
            return k;
        }
        p = &p * &nil;
    }
}

/// Result of splitting a rational matrix under an extension policy.
#[derive(Clone, Debug, PartialEq)]
pub enum Spectrum {
    Rational(SpectralSplit<Q>),
    /// The characteristic polynomial needed the root `s` of the field's
    /// modulus; `split` is computed over that field.
    Extended { field: Arc<ExtField>, split: SpectralSplit<Ext> },
}

pub fn split_spectrum(m: &Matrix<Q>, policy: ExtensionPolicy) -> Result<Spectrum, FieldError> {
    let rational = split_in_field(m);
    let Some(conj) = &rational.conjugates else {
        return Ok(Spectrum::Rational(rational));
    };
    let irreducibles = factor::factor(&conj.factor)?;
    let first = irreducibles[0].0.clone();
    if policy == ExtensionPolicy::RationalOnly {
        return Err(FieldError::IrreducibleFactor(first.fmt_var("x")));
    }
    if let Some((other, _)) = irreducibles.iter().find(|(g, _)| *g != first) {
        // a second extension layer would be needed
        return Err(FieldError::IrreducibleFactor(other.fmt_var("x")));
    }
    let field = ExtField::new(first);
    let lifted = m.map(|x| field.lift(x));
    let split = split_in_field(&lifted);
    Ok(Spectrum::Extended { field, split })
}

/// Jordan block sizes per eigenvalue, from the rank sequence of powers of
/// `m - c·I`. Sizes are listed in descending order.
pub fn jordan_data<F: Scalar>(m: &Matrix<F>) -> Result<Vec<(F, Vec<usize>)>, FieldError> {
    let split = split_in_field(m);
    if let Some(c) = split.conjugates {
        return Err(FieldError::IrreducibleFactor(c.factor.to_string()));
    }
    Ok(split
        .spaces
        .into_iter()
        .map(|s| {
            let sizes = block_sizes_at(m, &s.value, s.multiplicity);
            (s.value, sizes)
        })
        .collect())
}

/// Jordan block sizes of eigenvalue `c` with algebraic multiplicity `mult`.
pub fn block_sizes_at<F: Scalar>(m: &Matrix<F>, c: &F, mult: usize) -> Vec<usize> {
    let n = m.rows();
    let nil = m.shift(c);
    let mut ranks = vec![n];
    let mut p = Matrix::<F>::identity(n);
    for _ in 0..=mult {
        p = &p * &nil;
        let r = p.rank();
        ranks.push(r);
        if r + mult == n {
            break;
        }
    }
    let last = *ranks.last().expect("nonempty");
    ranks.resize(mult + 2, last);
    // at_least[k] = number of blocks of size >= k+1
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in (0..mult).rev() {
        let exactly = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k + 1, exactly));
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;
    use proptest::prelude::*;

    fn m(rows: &[&[(i64, i64)]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&(a, b)| q(a, b)).collect()).collect())
    }

    #[test]
    fn split_symmetric_example() {
        let a = m(&[&[(0, 1), (-2, 1)], &[(-2, 1), (0, 1)]]);
        let Spectrum::Rational(s) = split_spectrum(&a, ExtensionPolicy::RationalOnly).unwrap() else {
            panic!("expected a rational split");
        };
        assert_eq!(s.spaces.len(), 2);
        assert_eq!(s.spaces[0].value, q(-2, 1));
        // span (1, 1)
        let v = s.spaces[0].basis.column(0);
        assert_eq!(v[0], v[1]);
        assert_eq!(s.spaces[1].value, q(2, 1));
        let w = s.spaces[1].basis.column(0);
        assert_eq!(w[0], -w[1].clone());
    }

    #[test]
    fn nilpotent_single_space() {
        let a = m(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]);
        let s = split_in_field(&a);
        assert_eq!(s.spaces.len(), 1);
        assert_eq!(s.spaces[0].multiplicity, 2);
        assert_eq!(s.spaces[0].basis.rank(), 2);
    }

    #[test]
    fn irreducible_factor_is_reported() {
        let a = m(&[&[(0, 1), (-2, 1)], &[(1, 1), (0, 1)]]);
        assert_eq!(
            split_spectrum(&a, ExtensionPolicy::RationalOnly),
            Err(FieldError::IrreducibleFactor("x^2 + 2".into()))
        );
        let Spectrum::Extended { field, split } = split_spectrum(&a, ExtensionPolicy::AllowOneExtension).unwrap() else {
            panic!("expected an extension");
        };
        assert_eq!(field.modulus().fmt_var("x"), "x^2 + 2");
        assert_eq!(split.spaces[0].value, field.generator());
        assert_eq!(split.spaces[0].multiplicity, 1);
        assert_eq!(split.conjugates.as_ref().unwrap().basis.cols(), 1);
    }

    #[test]
    fn two_irreducible_factors_need_nested_extension() {
        // diag blocks with char polys x^2+2 and x^2-3
        let a = m(&[
            &[(0, 1), (-2, 1), (0, 1), (0, 1)],
            &[(1, 1), (0, 1), (0, 1), (0, 1)],
            &[(0, 1), (0, 1), (0, 1), (3, 1)],
            &[(0, 1), (0, 1), (1, 1), (0, 1)],
        ]);
        assert!(matches!(
            split_spectrum(&a, ExtensionPolicy::AllowOneExtension),
            Err(FieldError::IrreducibleFactor(_))
        ));
    }

    #[test]
    fn jordan_examples() {
        let a = m(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]);
        assert_eq!(jordan_data(&a).unwrap(), vec![(q(0, 1), vec![2])]);
        let d = Matrix::diagonal(&[q(5, 6), q(7, 6)]);
        assert_eq!(jordan_data(&d).unwrap(), vec![(q(5, 6), vec![1]), (q(7, 6), vec![1])]);
        let r = m(&[&[(-1, 4), (1, 1)], &[(0, 1), (3, 4)]]);
        assert_eq!(jordan_data(&r).unwrap(), vec![(q(-1, 4), vec![1]), (q(3, 4), vec![1])]);
        // J_2(1) ⊕ J_1(1) ⊕ J_3(-2)
        let mut big = Matrix::block_diag(&[
            m(&[&[(1, 1), (1, 1)], &[(0, 1), (1, 1)]]),
            m(&[&[(1, 1)]]),
            m(&[&[(-2, 1), (1, 1), (0, 1)], &[(0, 1), (-2, 1), (1, 1)], &[(0, 1), (0, 1), (-2, 1)]]),
        ]);
        big[(0, 5)] = q(0, 1);
        assert_eq!(jordan_data(&big).unwrap(), vec![(q(-2, 1), vec![3]), (q(1, 1), vec![2, 1])]);
    }

    fn invertible(n: usize) -> impl Strategy<Value = Matrix<Q>> {
        proptest::collection::vec(-3i64..4, n * n)
            .prop_map(move |v| Matrix::from_fn(n, n, |i, j| q(v[i * n + j], 1)))
            .prop_filter("invertible", |p| p.inverse().is_some())
    }

    proptest! {
        #[test]
        fn jordan_data_is_conjugation_invariant(p in invertible(4)) {
            let mut j = Matrix::block_diag(&[
                m(&[&[(1, 2), (1, 1)], &[(0, 1), (1, 2)]]),
                m(&[&[(1, 2)]]),
                m(&[&[(-3, 1)]]),
            ]);
            j[(0, 0)] = q(1, 2);
            let conj = &(&p.inverse().unwrap() * &j) * &p;
            prop_assert_eq!(jordan_data(&conj).unwrap(), jordan_data(&j).unwrap());
        }

        #[test]
        fn split_reassembles(v in proptest::collection::vec(-3i64..4, 16)) {
            // lower-triangular with small integer diagonal: always splits over Q
            let a = Matrix::from_fn(4, 4, |i, j| if j <= i { q(v[i * 4 + j], 1) } else { q(0, 1) });
            let s = split_in_field(&a);
            prop_assert!(s.conjugates.is_none());
            let total: usize = s.spaces.iter().map(|e| e.multiplicity).sum();
            prop_assert_eq!(total, 4);
            prop_assert_eq!(s.change_of_basis(4).rank(), 4);
            for e in &s.spaces {
                let image = &a * &e.basis;
                // invariance: image lies in the span
                prop_assert_eq!(e.basis.hstack(&image).rank(), e.multiplicity);
                let nil = a.shift(&e.value).pow(4);
                prop_assert!((&nil * &e.basis).is_zero());
            }
        }
    }
}
