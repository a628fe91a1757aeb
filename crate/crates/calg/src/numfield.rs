//! Simple algebraic number fields Q[w]/(p(w)).

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::factor::is_irreducible;
use crate::poly::MultiPoly;
use crate::rational::{rat, Rational};
use crate::upoly::UPoly;
use crate::CalgError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    minpoly: UPoly,
    var: String,
}

impl NumberField {
    /// Certifies irreducibility before accepting the minimal polynomial.
    pub fn new(minpoly: &UPoly, var: &str) -> Result<Arc<Self>, CalgError> {
        if !is_irreducible(minpoly) {
            return Err(CalgError::NotIrreducible(minpoly.to_string_in(var)));
        }
        Ok(Arc::new(NumberField { minpoly: minpoly.monic(), var: var.to_string() }))
    }

    /// Q itself, presented as Q[w]/(w).
    pub fn rationals(var: &str) -> Arc<Self> {
        Arc::new(NumberField { minpoly: UPoly::x(), var: var.to_string() })
    }

    pub fn minpoly(&self) -> &UPoly {
        &self.minpoly
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }
}

#[derive(Clone, Debug)]
pub struct NfElem {
    field: Arc<NumberField>,
    c: UPoly,
}

impl PartialEq for NfElem {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && (Arc::ptr_eq(&self.field, &o.field) || self.field == o.field)
    }
}
impl Eq for NfElem {}

impl NfElem {
    pub fn from_upoly(field: &Arc<NumberField>, p: &UPoly) -> Self {
        NfElem { field: field.clone(), c: p.rem(&field.minpoly) }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        Self::from_upoly(field, &UPoly::constant(q))
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, rat(n))
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_upoly(field, &UPoly::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn poly(&self) -> &UPoly {
        &self.c
    }

    /// Coefficients padded to the field degree.
    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.field.degree()).map(|i| self.c.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.c.is_constant()
    }

    pub fn add(&self, o: &Self) -> Self {
        NfElem { field: self.field.clone(), c: &self.c + &o.c }
    }

    pub fn sub(&self, o: &Self) -> Self {
        NfElem { field: self.field.clone(), c: &self.c - &o.c }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_upoly(&self.field, &(&self.c * &o.c))
    }

    pub fn neg(&self) -> Self {
        NfElem { field: self.field.clone(), c: -self.c.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (g, s, _) = UPoly::ext_gcd(&self.c, &self.field.minpoly);
        debug_assert!(g.is_constant());
        Some(Self::from_upoly(&self.field, &s))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::from_rational(&self.field, Rational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates a polynomial with the given per-variable values.
    pub fn eval_poly(field: &Arc<NumberField>, p: &MultiPoly, vals: &[NfElem]) -> NfElem {
        let mut acc = Self::from_rational(field, Rational::zero());
        for (e, c) in p.terms() {
            let mut t = Self::from_rational(field, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&vals[i].pow(k));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.c.to_string_in(&self.field.var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_in_quartic_field() {
        let k = NumberField::new(&UPoly::from_ints(&[2, 0, 1, 0, 1]), "w").unwrap();
        let w = NfElem::generator(&k);
        let u = w.pow(3).add(&NfElem::from_int(&k, 1));
        let v = u.inv().unwrap();
        assert_eq!(u.mul(&v), NfElem::from_int(&k, 1));
        // minimal polynomial annihilates w
        let mp = w.pow(4).add(&w.pow(2)).add(&NfElem::from_int(&k, 2));
        assert!(mp.is_zero());
    }

    #[test]
    fn reducible_rejected() {
        assert!(NumberField::new(&UPoly::from_ints(&[-1, 0, 1]), "w").is_err());
    }
}
