//! Polynomial ideals: Groebner-backed emptiness, elimination and intersection.

use std::sync::Arc;

use crate::groebner::{Budget, GroebnerBasis};
use crate::poly::{BaseOrder, MonomialOrder, MultiPoly, PolyRing};
use crate::CalgError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyIdeal {
    ring: Arc<PolyRing>,
    gens: Vec<MultiPoly>,
}

impl PolyIdeal {
    /// Generators are moved into `ring` by variable name; zero generators are dropped.
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<MultiPoly>) -> Result<Self, CalgError> {
        let gens = gens
            .into_iter()
            .map(|g| g.to_ring(ring))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|g| !g.is_zero())
            .collect();
        Ok(PolyIdeal { ring: ring.clone(), gens })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn groebner(&self, budget: Budget) -> Result<GroebnerBasis, CalgError> {
        GroebnerBasis::compute_with(&self.gens, &self.ring, budget)
    }

    pub fn groebner_in(&self, order: MonomialOrder, budget: Budget) -> Result<GroebnerBasis, CalgError> {
        let r = self.ring.with_order(order);
        GroebnerBasis::compute_with(&self.gens, &r, budget)
    }

    /// True iff 1 lies in the ideal.
    pub fn is_empty(&self, budget: Budget) -> Result<bool, CalgError> {
        Ok(self.groebner(budget)?.is_unit())
    }

    /// I ∩ Q[keep], returned in a grevlex ring on the kept variables (original order).
    pub fn eliminate(&self, keep: &[&str], budget: Budget) -> Result<PolyIdeal, CalgError> {
        let kept: Vec<String> =
            self.ring.vars.iter().filter(|v| keep.contains(&v.as_str())).cloned().collect();
        let elim: Vec<String> =
            self.ring.vars.iter().filter(|v| !keep.contains(&v.as_str())).cloned().collect();
        let mut vars = elim.clone();
        vars.extend(kept.iter().cloned());
        let order = if elim.is_empty() {
            MonomialOrder::GrevLex
        } else {
            MonomialOrder::Block {
                first: BaseOrder::GrevLex,
                second: BaseOrder::GrevLex,
                split: elim.len(),
            }
        };
        let big = PolyRing::new(&vars, order);
        // a grevlex basis first makes a much better starting point for the block order
        let warm = GroebnerBasis::compute_with(&self.gens, &big.with_order(MonomialOrder::GrevLex), budget)?;
        let gb = GroebnerBasis::compute_with(warm.polys(), &big, budget)?;
        let small = PolyRing::new(&kept, MonomialOrder::GrevLex);
        let gens = gb
            .polys()
            .iter()
            .filter(|g| g.support().iter().all(|&i| i >= elim.len()))
            .map(|g| g.to_ring(&small))
            .collect::<Result<Vec<_>, _>>()?;
        PolyIdeal::new(&small, gens)
    }

    /// I ∩ J via a fresh variable u: (u·I + (1-u)·J) ∩ Q[vars].
    pub fn intersect(&self, other: &PolyIdeal, budget: Budget) -> Result<PolyIdeal, CalgError> {
        let mut vars = vec!["_u".to_string()];
        vars.extend(self.ring.vars.iter().cloned());
        let big = PolyRing::new(&vars, MonomialOrder::GrevLex);
        let u = MultiPoly::var(&big, 0);
        let one_minus = &MultiPoly::one(&big) - &u;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&u * &g.to_ring(&big)?);
        }
        for g in &other.gens {
            gens.push(&one_minus * &g.to_ring(&big)?);
        }
        let keep: Vec<&str> = self.ring.vars.iter().map(|s| s.as_str()).collect();
        let r = PolyIdeal::new(&big, gens)?.eliminate(&keep, budget)?;
        let gens = r.gens.iter().map(|g| g.to_ring(&self.ring)).collect::<Result<Vec<_>, _>>()?;
        PolyIdeal::new(&self.ring, gens)
    }

    /// Mutual containment.
    pub fn same_ideal(&self, other: &PolyIdeal, budget: Budget) -> Result<bool, CalgError> {
        let a = self.groebner(budget)?;
        let b = GroebnerBasis::compute_with(&other.gens, &self.ring, budget)?;
        Ok(other.gens.iter().all(|g| a.contains(g)) && self.gens.iter().all(|g| b.contains(g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eliminate_parabola() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::GrevLex);
        let i = PolyIdeal::new(
            &r,
            vec![MultiPoly::parse(&r, "y-x^2").unwrap(), MultiPoly::parse(&r, "y-1").unwrap()],
        )
        .unwrap();
        let e = i.eliminate(&["x"], Budget::default()).unwrap();
        assert_eq!(e.gens().len(), 1);
        assert_eq!(e.gens()[0].to_string(), "x^2 - 1");
    }

    #[test]
    fn intersection_is_lcm_for_principal() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::GrevLex);
        let a = PolyIdeal::new(&r, vec![MultiPoly::parse(&r, "x*(x-y)").unwrap()]).unwrap();
        let b = PolyIdeal::new(&r, vec![MultiPoly::parse(&r, "(x-y)*(y+1)").unwrap()]).unwrap();
        let c = a.intersect(&b, Budget::default()).unwrap();
        let want = PolyIdeal::new(&r, vec![MultiPoly::parse(&r, "x*(x-y)*(y+1)").unwrap()]).unwrap();
        assert!(c.same_ideal(&want, Budget::default()).unwrap());
    }
}
