//! Simple algebraic extensions `ℚ[s]/(p)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::factor::split_rational;
use super::upoly::UPoly;
use super::{RootSplit, Scalar, Q};

/// The field `ℚ[s]/(p)` for a monic irreducible `p` of degree at least two.
#[derive(Debug, PartialEq)]
pub struct ExtField {
    modulus: UPoly<Q>,
}

impl ExtField {
    /// Irreducibility of `modulus` is the caller's responsibility; the
    /// spectral code only builds fields from factors it has proven
    /// irreducible.
    pub fn new(modulus: UPoly<Q>) -> Arc<Self> {
        assert!(modulus.degree().unwrap_or(0) >= 2, "extension modulus must have degree >= 2");
        Arc::new(ExtField { modulus: modulus.monic() })
    }

    pub fn modulus(&self) -> &UPoly<Q> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    /// The class of `s`.
    pub fn generator(self: &Arc<Self>) -> Ext {
        Ext::from_poly(UPoly::new(vec![Q::zero(), Q::one()]), Some(self.clone()))
    }

    pub fn lift(self: &Arc<Self>, q: &Q) -> Ext {
        Ext::from_poly(UPoly::constant(q.clone()), Some(self.clone()))
    }
}

/// An element of `ℚ[s]/(p)`, reduced modulo `p`. Elements of ℚ may carry no
/// field reference.
#[derive(Clone, Debug)]
pub struct Ext {
    value: UPoly<Q>,
    field: Option<Arc<ExtField>>,
}

impl Ext {
    fn from_poly(value: UPoly<Q>, field: Option<Arc<ExtField>>) -> Self {
        let value = match &field {
            Some(k) if value.degree().unwrap_or(0) >= k.degree() => value.div_rem(&k.modulus).1,
            _ => value,
        };
        Ext { value, field }
    }

    /// Coordinates in the basis `1, s, s², …`.
    pub fn poly(&self) -> &UPoly<Q> {
        &self.value
    }

    pub fn field(&self) -> Option<&Arc<ExtField>> {
        self.field.as_ref()
    }

    fn merged(a: &Ext, b: &Ext) -> Option<Arc<ExtField>> {
        match (&a.field, &b.field) {
            (Some(x), Some(y)) => {
                debug_assert!(Arc::ptr_eq(x, y) || x == y, "mixing elements of different extensions");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }
}

impl PartialEq for Ext {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(q) => write!(f, "{q}"),
            None => f.write_str(&self.value.fmt_var("s")),
        }
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, rhs: Ext) -> Ext {
        let field = Ext::merged(&self, &rhs);
        Ext { value: &self.value + &rhs.value, field }
    }
}

impl Sub for Ext {
    type Output = Ext;
    fn sub(self, rhs: Ext) -> Ext {
        let field = Ext::merged(&self, &rhs);
        Ext { value: &self.value - &rhs.value, field }
    }
}

impl Mul for Ext {
    type Output = Ext;
    fn mul(self, rhs: Ext) -> Ext {
        let field = Ext::merged(&self, &rhs);
        Ext::from_poly(&self.value * &rhs.value, field)
    }
}

impl Div for Ext {
    type Output = Ext;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Ext) -> Ext {
        self * rhs.inv()
    }
}

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext { value: -&self.value, field: self.field }
    }
}

impl Zero for Ext {
    fn zero() -> Self {
        Ext { value: UPoly::zero(), field: None }
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl One for Ext {
    fn one() -> Self {
        Ext { value: UPoly::one(), field: None }
    }
}

impl Scalar for Ext {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if let Some(q) = self.to_rational() {
            return Ext { value: UPoly::constant(q.recip()), field: self.field.clone() };
        }
        let k = self.field.as_ref().expect("irrational element without a field");
        let (g, s, _) = self.value.xgcd(&k.modulus);
        assert!(g.degree() == Some(0), "zero divisor: the extension modulus is reducible");
        Ext::from_poly(s, Some(k.clone()))
    }

    fn from_rational(q: Q) -> Self {
        Ext { value: UPoly::constant(q), field: None }
    }

    fn to_rational(&self) -> Option<Q> {
        match self.value.degree() {
            None => Some(Q::zero()),
            Some(0) => Some(self.value.coeff(0)),
            _ => None,
        }
    }

    /// Rational roots are the common rational roots of the coordinate
    /// polynomials; the generator `s` is tested directly. Other conjugates
    /// of `s` stay in the cofactor.
    fn split_roots(p: &UPoly<Self>) -> RootSplit<Self> {
        let field = p.coeffs().iter().find_map(|c| c.field.clone());
        let width = field.as_ref().map_or(1, |k| k.degree());
        let mut common = UPoly::<Q>::zero();
        for j in 0..width {
            let coord = UPoly::new(p.coeffs().iter().map(|c| c.value.coeff(j)).collect());
            common = common.gcd(&coord);
        }
        let mut candidates: Vec<Ext> = split_rational(&common)
            .roots
            .into_iter()
            .map(|(r, _)| Ext::from_rational(r))
            .collect();
        if let Some(k) = &field {
            candidates.push(k.generator());
        }
        let mut cofactor = p.monic();
        let mut roots = Vec::new();
        for c in candidates {
            let lin = UPoly::linear(c.clone());
            let mut mult = 0;
            while let Some(next) = cofactor.exact_div(&lin) {
                cofactor = next;
                mult += 1;
            }
            if mult > 0 {
                roots.push((c, mult));
            }
        }
        RootSplit { roots, cofactor }
    }
}
