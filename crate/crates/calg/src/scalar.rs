//! A small ring interface shared by number-field and quotient-ring elements.

use std::fmt::{Debug, Display};

use crate::numfield::NfElem;
use crate::quotient::QrElem;
use crate::rational::Rational;

pub trait Scalar: Clone + PartialEq + Debug + Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn from_rational_like(&self, q: Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse when the ring can produce one.
    fn try_inv(&self) -> Option<Self>;

    fn one_like(&self) -> Self {
        self.from_rational_like(num_traits::One::one())
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

impl Scalar for NfElem {
    fn zero_like(&self) -> Self {
        NfElem::from_int(self.field(), 0)
    }
    fn from_rational_like(&self, q: Rational) -> Self {
        NfElem::from_rational(self.field(), q)
    }
    fn add(&self, o: &Self) -> Self {
        NfElem::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        NfElem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        NfElem::mul(self, o)
    }
    fn neg(&self) -> Self {
        NfElem::neg(self)
    }
    fn is_zero(&self) -> bool {
        NfElem::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

impl Scalar for QrElem {
    fn zero_like(&self) -> Self {
        QrElem::from_rational(self.ring(), num_traits::Zero::zero())
    }
    fn from_rational_like(&self, q: Rational) -> Self {
        QrElem::from_rational(self.ring(), q)
    }
    fn add(&self, o: &Self) -> Self {
        QrElem::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        QrElem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        QrElem::mul(self, o)
    }
    fn neg(&self) -> Self {
        QrElem::neg(self)
    }
    fn is_zero(&self) -> bool {
        QrElem::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}
