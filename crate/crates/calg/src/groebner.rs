//! Buchberger's algorithm with the Gebauer-Moeller pair criteria and the sugar strategy.

use std::sync::Arc;


use crate::poly::{coprime, divides, mono_div, mono_lcm, Exps, MultiPoly, PolyRing};
use crate::rational::Rational;
use crate::CalgError;

/// Resource caps for a Groebner computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_basis: usize,
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 100_000, max_basis: 4_000, max_terms: 100_000 }
    }
}

/// A reduced Groebner basis: monic, interreduced, sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    polys: Vec<MultiPoly>,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exps,
    sugar: u32,
}

fn deg(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// S-polynomial of two nonzero polynomials.
pub fn spoly(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let l = mono_lcm(a.lm(), b.lm());
    let ma = mono_div(&l, a.lm());
    let mb = mono_div(&l, b.lm());
    let sa = a.mul_term(&ma, &a.lc().recip());
    sa.add_scaled(b, &mb, &-b.lc().recip())
}

/// Full reduction of `f` by `basis` (any nonzero polynomials).
pub fn reduce(f: &MultiPoly, basis: &[&MultiPoly]) -> MultiPoly {
    let ring = f.ring().clone();
    let mut rem: Vec<(Exps, Rational)> = Vec::new();
    let mut p = f.clone();
    // p.terms()[start..] is the part still to be reduced
    let mut start = 0;
    while start < p.len() {
        let lm = &p.terms()[start].0;
        match basis.iter().find(|g| divides(g.lm(), lm)) {
            Some(g) => {
                let m = mono_div(lm, g.lm());
                let c = -(&p.terms()[start].1 / g.lc());
                p = p.add_scaled_from(start, g, &m, &c);
                start = 0;
            }
            None => {
                rem.push(p.terms()[start].clone());
                start += 1;
            }
        }
    }
    MultiPoly::from_sorted_terms(&ring, rem)
}

impl GroebnerBasis {
    pub fn compute(gens: &[MultiPoly], ring: &Arc<PolyRing>) -> Result<Self, CalgError> {
        Self::compute_with(gens, ring, Budget::default())
    }

    pub fn compute_with(
        gens: &[MultiPoly],
        ring: &Arc<PolyRing>,
        budget: Budget,
    ) -> Result<Self, CalgError> {
        let mut input: Vec<MultiPoly> = gens
            .iter()
            .map(|g| g.to_ring(ring))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.monic())
            .collect();
        input.sort_by(|a, b| ring.order.cmp(a.lm(), b.lm()).then_with(|| a.len().cmp(&b.len())));

        let mut polys: Vec<MultiPoly> = Vec::new();
        let mut sugar: Vec<u32> = Vec::new();
        let mut active: Vec<bool> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut processed = 0usize;

        let over = |what: &str| CalgError::BudgetExceeded(what.to_string());

        for g in input {
            let basis: Vec<&MultiPoly> =
                polys.iter().zip(&active).filter(|(_, &a)| a).map(|(p, _)| p).collect();
            let h = reduce(&g, &basis);
            if h.is_zero() {
                continue;
            }
            let s = g.total_degree();
            Self::insert(&mut polys, &mut sugar, &mut active, &mut pairs, h.monic(), s);
            if h.is_constant() {
                return Ok(Self::unit(ring));
            }
            if active.iter().filter(|&&a| a).count() > budget.max_basis {
                return Err(over("basis size limit"));
            }
        }

        while !pairs.is_empty() {
            processed += 1;
            if processed > budget.max_pairs {
                return Err(over("pair limit"));
            }
            let k = (0..pairs.len())
                .min_by(|&a, &b| {
                    pairs[a]
                        .sugar
                        .cmp(&pairs[b].sugar)
                        .then_with(|| ring.order.cmp(&pairs[a].lcm, &pairs[b].lcm))
                        .then_with(|| (pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
                })
                .unwrap();
            let pr = pairs.swap_remove(k);
            let s = spoly(&polys[pr.i], &polys[pr.j]);
            let basis: Vec<&MultiPoly> =
                polys.iter().zip(&active).filter(|(_, &a)| a).map(|(p, _)| p).collect();
            let h = reduce(&s, &basis);
            if h.is_zero() {
                continue;
            }
            if h.is_constant() {
                return Ok(Self::unit(ring));
            }
            if h.len() > budget.max_terms {
                return Err(over("term limit"));
            }
            Self::insert(&mut polys, &mut sugar, &mut active, &mut pairs, h.monic(), pr.sugar);
            if active.iter().filter(|&&a| a).count() > budget.max_basis {
                return Err(over("basis size limit"));
            }
        }

        let mut min: Vec<MultiPoly> =
            polys.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
        min.sort_by(|a, b| ring.order.cmp(a.lm(), b.lm()));
        let mut out = Vec::with_capacity(min.len());
        for i in 0..min.len() {
            let others: Vec<&MultiPoly> =
                min.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
            let head = MultiPoly::from_terms(ring, vec![min[i].terms()[0].clone()]);
            let tail = MultiPoly::from_terms(ring, min[i].terms()[1..].to_vec());
            out.push((&head + &reduce(&tail, &others)).monic());
        }
        Ok(GroebnerBasis { ring: ring.clone(), polys: out })
    }

    fn unit(ring: &Arc<PolyRing>) -> Self {
        GroebnerBasis { ring: ring.clone(), polys: vec![MultiPoly::one(ring)] }
    }

    fn insert(
        polys: &mut Vec<MultiPoly>,
        sugar: &mut Vec<u32>,
        active: &mut Vec<bool>,
        pairs: &mut Vec<Pair>,
        h: MultiPoly,
        s: u32,
    ) {
        let hi = polys.len();
        let lh = h.lm().clone();
        let s = s.max(h.total_degree());
        polys.push(h);
        sugar.push(s);
        active.push(true);

        // candidate pairs (h, g)
        let cands: Vec<(usize, Exps, bool)> = (0..hi)
            .filter(|&g| active[g])
            .map(|g| (g, mono_lcm(&lh, polys[g].lm()), coprime(&lh, polys[g].lm())))
            .collect();
        let mut kept: Vec<(usize, Exps, bool)> = Vec::new();
        for (idx, c) in cands.iter().enumerate() {
            if c.2 {
                kept.push(c.clone());
                continue;
            }
            let later_divides = cands[idx + 1..].iter().any(|d| divides(&d.1, &c.1));
            let kept_divides = kept.iter().any(|d| divides(&d.1, &c.1));
            if !later_divides && !kept_divides {
                kept.push(c.clone());
            }
        }
        // Buchberger product criterion on the survivors
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|c| !c.2)
            .map(|(g, l, _)| {
                let sg = sugar[g] + deg(&l) - deg(polys[g].lm());
                let sh = s + deg(&l) - deg(&lh);
                Pair { i: g, j: hi, lcm: l, sugar: sg.max(sh) }
            })
            .collect();
        // chain criterion on old pairs
        pairs.retain(|p| {
            !(divides(&lh, &p.lcm)
                && mono_lcm(polys[p.i].lm(), &lh) != p.lcm
                && mono_lcm(polys[p.j].lm(), &lh) != p.lcm)
        });
        pairs.extend(new_pairs);
        for g in 0..hi {
            if active[g] && divides(&lh, polys[g].lm()) {
                active[g] = false;
            }
        }
    }

    /// Wraps polynomials already known to form a reduced basis.
    pub fn from_reduced(ring: &Arc<PolyRing>, polys: Vec<MultiPoly>) -> Self {
        GroebnerBasis { ring: ring.clone(), polys }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant() && !self.polys[0].is_zero()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn normal_form(&self, f: &MultiPoly) -> MultiPoly {
        let f = f.to_ring(&self.ring).expect("polynomial outside the basis ring");
        let b: Vec<&MultiPoly> = self.polys.iter().collect();
        reduce(&f, &b)
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Every listed variable has a pure power among the leading monomials.
    pub fn is_zero_dimensional_in(&self, vars: &[usize]) -> bool {
        if self.is_unit() {
            return true;
        }
        vars.iter().all(|&v| {
            self.polys.iter().any(|g| {
                let lm = g.lm();
                lm[v] > 0 && lm.iter().enumerate().all(|(i, &e)| i == v || e == 0)
            })
        })
    }

    /// Certificate: all S-polynomials reduce to zero.
    pub fn verify_s_pairs(&self) -> bool {
        let b: Vec<&MultiPoly> = self.polys.iter().collect();
        for i in 0..self.polys.len() {
            for j in i + 1..self.polys.len() {
                if !reduce(&spoly(&self.polys[i], &self.polys[j]), &b).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Leading-monomial staircase size when zero-dimensional.
    pub fn quotient_dimension(&self) -> Option<usize> {
        self.standard_monomials().map(|v| v.len())
    }

    /// Monomials outside the leading-term ideal, in ascending order; None unless zero-dimensional.
    pub fn standard_monomials(&self) -> Option<Vec<Exps>> {
        if self.is_unit() {
            return Some(vec![]);
        }
        let n = self.ring.nvars();
        if !self.is_zero_dimensional_in(&(0..n).collect::<Vec<_>>()) {
            return None;
        }
        let bounds: Vec<u32> = (0..n)
            .map(|v| {
                self.polys
                    .iter()
                    .filter(|g| g.lm().iter().enumerate().all(|(i, &e)| i == v || e == 0))
                    .map(|g| g.lm()[v])
                    .min()
                    .unwrap()
            })
            .collect();
        let mut out = Vec::new();
        let mut e = self.ring.zero_exps();
        loop {
            if !self.polys.iter().any(|g| divides(g.lm(), &e)) {
                out.push(e.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    out.sort_by(|a, b| self.ring.order.cmp(a, b));
                    return Some(out);
                }
                e[i] += 1;
                if e[i] < bounds[i] {
                    break;
                }
                e[i] = 0;
                i += 1;
            }
        }
    }
}

/// Convenience for tests and callers that only want the generator list.
pub fn groebner(gens: &[MultiPoly]) -> Result<GroebnerBasis, CalgError> {
    let ring = gens
        .first()
        .map(|g| g.ring().clone())
        .ok_or_else(|| CalgError::Parse("empty generator list".into()))?;
    GroebnerBasis::compute(gens, &ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    #[test]
    fn hand_elimination() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::Lex);
        let g = [
            MultiPoly::parse(&r, "x^2+y-1").unwrap(),
            MultiPoly::parse(&r, "x-y").unwrap(),
        ];
        let gb = GroebnerBasis::compute(&g, &r).unwrap();
        let want = [MultiPoly::parse(&r, "y^2+y-1").unwrap(),
            MultiPoly::parse(&r, "x-y").unwrap()];
        assert_eq!(gb.polys(), &want[..]);
    }

    #[test]
    fn cyclic3_certificate() {
        let r = PolyRing::new(&["a", "b", "c"], MonomialOrder::GrevLex);
        let g: Vec<_> = ["a+b+c", "a*b+b*c+c*a", "a*b*c-1"]
            .iter()
            .map(|s| MultiPoly::parse(&r, s).unwrap())
            .collect();
        let gb = GroebnerBasis::compute(&g, &r).unwrap();
        assert!(gb.verify_s_pairs());
        assert!(g.iter().all(|p| gb.contains(p)));
        assert_eq!(gb.quotient_dimension(), Some(6));
    }

    #[test]
    fn unit_and_zero() {
        let r = PolyRing::new(&["x"], MonomialOrder::GrevLex);
        let gb = GroebnerBasis::compute(&[MultiPoly::parse(&r, "x").unwrap(), MultiPoly::parse(&r, "x-1").unwrap()], &r).unwrap();
        assert!(gb.is_unit());
        let z = GroebnerBasis::compute(&[MultiPoly::parse(&r, "x-x").unwrap()], &r).unwrap();
        assert!(!z.is_unit());
        assert!(z.is_zero_ideal());
    }

    #[test]
    fn budget_is_reported() {
        let r = PolyRing::new(&["a", "b", "c"], MonomialOrder::GrevLex);
        let g: Vec<_> = ["a+b+c", "a*b+b*c+c*a", "a*b*c-1"]
            .iter()
            .map(|s| MultiPoly::parse(&r, s).unwrap())
            .collect();
        let tiny = Budget { max_pairs: 100, max_basis: 2, max_terms: 100 };
        assert!(matches!(
            GroebnerBasis::compute_with(&g, &r, tiny),
            Err(CalgError::BudgetExceeded(_))
        ));
    }
}
