//! The scalar interface shared by exact operators.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::{CycInt, Cyclo};

/// Exact commutative ring elements with a conjugation.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conjugate(&self) -> Self;

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }
}

/// Scalars that form a field.
pub trait Field: Scalar {
    fn inverse(&self) -> Option<Self>;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.checked_add(*rhs).expect("integer overflow in exact arithmetic")
    }
    fn times(&self, rhs: &Self) -> Self {
        self.checked_mul(*rhs).expect("integer overflow in exact arithmetic")
    }
    fn negated(&self) -> Self {
        self.checked_neg().expect("integer overflow in exact arithmetic")
    }
    fn conjugate(&self) -> Self {
        *self
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conjugate(&self) -> Self {
        self.clone()
    }
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Scalar for Cyclo {
    fn zero() -> Self {
        Cyclo::zero()
    }
    fn one() -> Self {
        Cyclo::one()
    }
    fn from_i64(v: i64) -> Self {
        Cyclo::from_i64(v)
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

impl Field for Cyclo {
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

impl Scalar for CycInt {
    fn zero() -> Self {
        CycInt::from_i64(0)
    }
    fn one() -> Self {
        CycInt::from_i64(1)
    }
    fn from_i64(v: i64) -> Self {
        CycInt::from_i64(v)
    }
    fn is_zero(&self) -> bool {
        CycInt::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
}
