//! Exact scalars and the dense linear algebra built on them.

pub mod ext;
pub mod factor;
pub mod matrix;
pub mod rational;
pub mod spectrum;
pub mod upoly;

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use self::upoly::UPoly;

/// Arbitrary-precision rationals, always in lowest terms.
pub type Q = BigRational;

/// An element of an exact field of characteristic zero.
///
/// Zero and one are context free: an extension element that has not met its
/// modulus yet is a plain rational.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse. Panics on zero, like division.
    fn inv(&self) -> Self;

    fn from_rational(q: Q) -> Self;

    /// `Some` when the element lies in the prime field.
    fn to_rational(&self) -> Option<Q>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Q::from_integer(n.into()))
    }

    /// Roots of `p` lying in this field, with multiplicities, in a
    /// deterministic order, plus the monic cofactor that does not split.
    fn split_roots(p: &UPoly<Self>) -> RootSplit<Self>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSplit<F> {
    pub roots: Vec<(F, usize)>,
    pub cofactor: UPoly<F>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("characteristic polynomial has an irreducible factor {0} that does not split")]
    IrreducibleFactor(String),
    #[error("Sylvester equation is singular: the spectra intersect")]
    SingularSylvester,
    #[error("factor search limit exceeded while factoring {0}")]
    FactorizationLimit(String),
}
