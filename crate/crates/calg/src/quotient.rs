//! Arithmetic in Q[vars]/I through normal forms modulo a Groebner basis.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::groebner::GroebnerBasis;
use crate::poly::MultiPoly;
use crate::rational::Rational;

#[derive(Debug, PartialEq, Eq)]
pub struct QuotientRing {
    gb: GroebnerBasis,
}

impl QuotientRing {
    pub fn new(gb: GroebnerBasis) -> Arc<Self> {
        Arc::new(QuotientRing { gb })
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.gb
    }
}

#[derive(Clone, Debug)]
pub struct QrElem {
    ring: Arc<QuotientRing>,
    p: MultiPoly,
}

impl PartialEq for QrElem {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p
    }
}
impl Eq for QrElem {}

impl QrElem {
    pub fn new(ring: &Arc<QuotientRing>, p: &MultiPoly) -> Self {
        QrElem { ring: ring.clone(), p: ring.gb.normal_form(p) }
    }

    pub fn from_rational(ring: &Arc<QuotientRing>, q: Rational) -> Self {
        Self::new(ring, &MultiPoly::constant(ring.gb.ring(), q))
    }

    pub fn var(ring: &Arc<QuotientRing>, name: &str) -> Self {
        Self::new(ring, &MultiPoly::var_named(ring.gb.ring(), name))
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.p
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        QrElem { ring: self.ring.clone(), p: &self.p + &o.p }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QrElem { ring: self.ring.clone(), p: &self.p - &o.p }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.ring, &(&self.p * &o.p))
    }

    pub fn neg(&self) -> Self {
        QrElem { ring: self.ring.clone(), p: -self.p.clone() }
    }

    /// Only nonzero constants are inverted here; monomial units carry explicit inverses upstream.
    pub fn inv(&self) -> Option<Self> {
        match self.p.constant_value() {
            Some(c) if !c.is_zero() => Some(Self::from_rational(&self.ring, c.recip())),
            _ => None,
        }
    }
}

impl fmt::Display for QrElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}
