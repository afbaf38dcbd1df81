//! The scalar abstraction shared by the matrix and Laurent-polynomial code.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, Zero};

/// An exact ring element: integers or rationals of any width.
///
/// Division through `Num::div` is only required to be correct when the
/// quotient exists in the ring; [`Scalar::exact_quotient`] makes that check.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type holds an i64")
    }

    /// `Some(a / b)` when `b` divides `a` in the ring.
    fn exact_quotient(a: &Self, b: &Self) -> Option<Self> {
        if b.is_zero() {
            return None;
        }
        let q = a.clone() / b.clone();
        if q.clone() * b.clone() == *a {
            Some(q)
        } else {
            None
        }
    }
}

/// Marker for scalars where every nonzero element is invertible.
pub trait Field: Scalar {}

impl Scalar for i64 {}
impl Scalar for i128 {}
impl Scalar for BigInt {}
macro_rules! rational_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for Ratio<$t> {
            fn exact_quotient(a: &Self, b: &Self) -> Option<Self> {
                if b.is_zero() {
                    None
                } else {
                    Some(a.clone() / b.clone())
                }
            }
        }
        impl Field for Ratio<$t> {}
    )*};
}
rational_scalar!(i64, i128, BigInt);

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn integer_quotients_are_checked() {
        assert_eq!(i64::exact_quotient(&12, &4), Some(3));
        assert_eq!(i64::exact_quotient(&12, &5), None);
        assert_eq!(BigInt::exact_quotient(&BigInt::from(-9), &BigInt::from(3)), Some(BigInt::from(-3)));
        assert_eq!(i64::exact_quotient(&1, &0), None);
    }

    #[test]
    fn rational_quotients_always_exist() {
        let a = BigRational::new(3.into(), 4.into());
        let b = BigRational::new(5.into(), 7.into());
        let q = BigRational::exact_quotient(&a, &b).unwrap();
        assert_eq!(q, BigRational::new(21.into(), 20.into()));
    }
}
