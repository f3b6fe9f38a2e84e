//! Exact computation of vanishing-cycle invariants of polynomial functions.
//!
//! Given a polynomial `f` on affine space with isolated critical points, the
//! engine builds the t-action `A(u) + u²∂_u` on the completed Brieskorn
//! lattice over the Milnor algebra and normalizes it, critical value by
//! critical value, into the form `t = c + R·u + u²∂_u`. The dimension of each
//! summand is the number of vanishing cycles over `c`, and the eigenvalues
//! `β` of `R` give the monodromy as `exp(-2πiβ)`.
//!
//! A second mode handles monomial functions with a rank-one twist on a normal
//! crossing divisor, where everything reduces to counting lattice points.
//!
//! All arithmetic is exact. The algebra is generic over [`Scalar`]; the
//! concrete instances are the rationals [`Q`] and simple extensions
//! [`Ext`] of the rationals.

pub mod brieskorn;
pub mod driver;
pub mod field;
pub mod groebner;
pub mod logmonomial;
pub mod microdiff;
pub mod mpoly;
pub mod series;

mod error;

pub use error::{Error, ErrorKind};
pub use field::ext::{Ext, ExtField};
pub use field::matrix::Matrix;
pub use field::upoly::UPoly;
pub use field::{Scalar, Q};
pub use mpoly::{Monomial, MPoly};

/// Matrices over the rationals.
pub type QMatrix = Matrix<Q>;
/// Univariate polynomials over the rationals.
pub type QUPoly = UPoly<Q>;
/// Multivariate polynomials over the rationals.
pub type QPoly = MPoly<Q>;
/// Groebner bases over the rationals.
pub type QGroebnerBasis = groebner::GroebnerBasis<Q>;
/// Truncated t-action modules over the rationals.
pub type QMicroModule = brieskorn::MicroModule<Q>;
/// Matrix power series over the rationals.
pub type QMatSeries = series::MatSeries<Q>;

/// Shorthand for an exact rational `num / den`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}
