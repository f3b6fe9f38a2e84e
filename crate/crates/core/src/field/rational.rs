use num_traits::{One, Zero};

use super::factor::split_rational;
use super::upoly::UPoly;
use super::{RootSplit, Scalar, Q};

impl Scalar for Q {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }

    fn from_rational(q: Q) -> Self {
        q
    }

    fn to_rational(&self) -> Option<Q> {
        Some(self.clone())
    }

    fn split_roots(p: &UPoly<Self>) -> RootSplit<Self> {
        split_rational(p)
    }
}

/// `q mod 1`, in `[0, 1)`.
pub fn frac(q: &Q) -> Q {
    q - q.floor()
}

/// Whether `q` is an integer.
pub fn is_integer(q: &Q) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;
    use proptest::prelude::*;

    fn small_q() -> impl Strategy<Value = Q> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_q(), b in small_q(), c in small_q()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * a.inv(), Q::one());
            }
            // lowest terms, positive denominator
            let s = a + b;
            prop_assert!(num_traits::Signed::is_positive(s.denom()));
            prop_assert!(num_integer::Integer::gcd(s.numer(), s.denom()).is_one());
        }
    }

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(frac(&q(-1, 4)), q(3, 4));
        assert_eq!(frac(&q(7, 6)), q(1, 6));
        assert_eq!(frac(&q(2, 1)), q(0, 1));
    }
}
