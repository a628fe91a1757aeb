//! Exact solving of zero-dimensional ideals over number fields.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::factor::factor_univariate;
use crate::groebner::{Budget, GroebnerBasis};
use crate::ideal::PolyIdeal;
use crate::numfield::{NfElem, NumberField};
use crate::poly::{Exps, MonomialOrder, MultiPoly, PolyRing};
use crate::rational::{rat, Rational};
use crate::upoly::UPoly;
use crate::CalgError;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub budget: Budget,
    /// Variables tried first as primitive element, in order.
    pub prefer: Vec<String>,
    /// Random linear forms tried when no single variable separates the points.
    pub retries: usize,
    pub seed: u64,
    pub field_var: String,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: Budget::default(),
            prefer: vec![],
            retries: 24,
            seed: 0x9e37_79b9_7f4a_7c15,
            field_var: "w".into(),
        }
    }
}

/// One Galois orbit of solutions: a number field and coordinates in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicPoint {
    pub field: Arc<NumberField>,
    pub coords: Vec<(String, NfElem)>,
}

impl AlgebraicPoint {
    pub fn get(&self, name: &str) -> Option<&NfElem> {
        self.coords.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Values ordered like the variables of `ring`; None if a variable is missing.
    pub fn values_for(&self, ring: &PolyRing) -> Option<Vec<NfElem>> {
        ring.vars.iter().map(|v| self.get(v).cloned()).collect()
    }

    pub fn satisfies(&self, ideal: &PolyIdeal) -> bool {
        match self.values_for(ideal.ring()) {
            Some(vals) => ideal
                .gens()
                .iter()
                .all(|g| NfElem::eval_poly(&self.field, g, &vals).is_zero()),
            None => false,
        }
    }
}

/// Minimal polynomial of `f` acting on the finite-dimensional quotient by `gb`.
pub fn min_poly_in_quotient(gb: &GroebnerBasis, f: &MultiPoly) -> Option<UPoly> {
    let basis = gb.standard_monomials()?;
    let index: HashMap<Exps, usize> =
        basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let dim = basis.len();
    let coords = |p: &MultiPoly| {
        let mut v = vec![Rational::zero(); dim];
        for (e, c) in p.terms() {
            v[index[e]] = c.clone();
        }
        v
    };
    let f = gb.normal_form(f);
    let mut rows: Vec<(usize, Vec<Rational>, UPoly)> = Vec::new();
    let mut cur = gb.normal_form(&MultiPoly::one(gb.ring()));
    for k in 0..=dim {
        let mut v = coords(&cur);
        let mut comb = UPoly::monomial(Rational::one(), k);
        for (piv, rv, rc) in &rows {
            if !v[*piv].is_zero() {
                let fac = &v[*piv] / &rv[*piv];
                for (a, b) in v.iter_mut().zip(rv) {
                    *a -= &fac * b;
                }
                comb = &comb - &rc.scale(&fac);
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => return Some(comb.monic()),
            Some(p) => rows.push((p, v, comb)),
        }
        cur = gb.normal_form(&(&cur * &f));
    }
    unreachable!("minimal polynomial degree exceeds quotient dimension")
}

pub fn solve_zero_dim(ideal: &PolyIdeal, opts: &SolveOptions) -> Result<Vec<AlgebraicPoint>, CalgError> {
    let ring = ideal.ring().with_order(MonomialOrder::GrevLex);
    let gb = GroebnerBasis::compute_with(ideal.gens(), &ring, opts.budget)?;
    if gb.is_unit() {
        return Ok(vec![]);
    }
    let n = ring.nvars();
    if !gb.is_zero_dimensional_in(&(0..n).collect::<Vec<_>>()) {
        return Err(CalgError::NotZeroDimensional(ring.vars.join(",")));
    }

    // Seidenberg: adding square-free univariate eliminants yields the radical.
    let mut radical_gens: Vec<MultiPoly> =
        ideal.gens().iter().map(|g| g.to_ring(&ring)).collect::<Result<_, _>>()?;
    let mut sqf: Vec<UPoly> = Vec::with_capacity(n);
    for v in 0..n {
        let mp = min_poly_in_quotient(&gb, &MultiPoly::var(&ring, v)).expect("zero-dimensional");
        let s = mp.squarefree_part();
        radical_gens.push(MultiPoly::from_upoly(&ring, v, &s));
        sqf.push(s);
    }
    let gbr = GroebnerBasis::compute_with(&radical_gens, &ring, opts.budget)?;
    let dim = gbr.quotient_dimension().expect("zero-dimensional");

    let mut order: Vec<usize> = opts.prefer.iter().filter_map(|p| ring.index(p)).collect();
    for v in 0..n {
        if !order.contains(&v) {
            order.push(v);
        }
    }
    if let Some(&v) = order.iter().find(|&&v| sqf[v].degree() == Some(dim)) {
        return shape_solve(&radical_gens, &ring, None, v, opts);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.retries {
        let cs: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        let mut form = MultiPoly::zero(&ring);
        for (v, &c) in cs.iter().enumerate() {
            form = &form + &MultiPoly::var(&ring, v).scale(&rat(c));
        }
        let mp = min_poly_in_quotient(&gbr, &form).expect("zero-dimensional");
        if mp.degree() == Some(dim) {
            return shape_solve(&radical_gens, &ring, Some(cs), 0, opts);
        }
    }
    Err(CalgError::ShapePosition(opts.retries))
}

/// Lex solve with the primitive element last: either variable `prim`, or a new
/// variable equal to Σ cs[i]·x_i.
fn shape_solve(
    gens: &[MultiPoly],
    ring: &Arc<PolyRing>,
    form: Option<Vec<i64>>,
    prim: usize,
    opts: &SolveOptions,
) -> Result<Vec<AlgebraicPoint>, CalgError> {
    let mut vars: Vec<String> = ring.vars.clone();
    let prim_name = match &form {
        None => vars.remove(prim),
        Some(_) => "_s".to_string(),
    };
    let others = vars.clone();
    vars.push(prim_name.clone());
    let lex = PolyRing::new(&vars, MonomialOrder::Lex);
    let mut g: Vec<MultiPoly> = gens.iter().map(|p| p.to_ring(&lex)).collect::<Result<_, _>>()?;
    if let Some(cs) = &form {
        let mut l = MultiPoly::var_named(&lex, "_s");
        for (v, &c) in cs.iter().enumerate() {
            l = &l - &MultiPoly::var_named(&lex, &ring.vars[v]).scale(&rat(c));
        }
        g.push(l);
    }
    let gb = GroebnerBasis::compute_with(&g, &lex, opts.budget)?;
    let p = lex.nvars() - 1;
    let shape_err = || CalgError::ShapePosition(opts.retries);
    let h = gb
        .polys()
        .iter()
        .find_map(|q| q.to_upoly(p))
        .ok_or_else(shape_err)?;
    let mut exprs: HashMap<String, UPoly> = HashMap::new();
    for (i, name) in others.iter().enumerate() {
        let q = gb
            .polys()
            .iter()
            .find(|q| {
                let lm = q.lm();
                lm[i] == 1 && lm.iter().enumerate().all(|(j, &e)| j == i || e == 0)
            })
            .ok_or_else(shape_err)?;
        let mut lin = q.coeffs_in(i);
        if lin.len() != 2 {
            return Err(shape_err());
        }
        let rest = lin.pop();
        debug_assert!(rest.is_some_and(|c| c.constant_value().is_some_and(|v| v.is_one())));
        let g = lin.pop().unwrap().to_upoly(p).ok_or_else(shape_err)?;
        exprs.insert(name.clone(), -g);
    }
    exprs.insert(prim_name, UPoly::x());

    let mut out = Vec::new();
    for (f, _) in factor_univariate(&h).factors {
        let field = NumberField::new(&f, &opts.field_var)?;
        let coords = ring
            .vars
            .iter()
            .map(|v| (v.clone(), NfElem::from_upoly(&field, &exprs[v])))
            .collect();
        out.push(AlgebraicPoint { field, coords });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_system() {
        let r = PolyRing::new(&["x"], MonomialOrder::GrevLex);
        let i = PolyIdeal::new(&r, vec![MultiPoly::parse(&r, "x-1").unwrap()]).unwrap();
        let pts = solve_zero_dim(&i, &SolveOptions::default()).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].field.degree(), 1);
        assert!(pts[0].get("x").unwrap().is_rational());
        assert_eq!(pts[0].get("x").unwrap().coeffs(), vec![rat(1)]);
    }

    #[test]
    fn needs_linear_change() {
        // four points (±1, ±1): neither coordinate separates them
        let r = PolyRing::new(&["x", "y"], MonomialOrder::GrevLex);
        let i = PolyIdeal::new(
            &r,
            vec![MultiPoly::parse(&r, "x^2-1").unwrap(), MultiPoly::parse(&r, "y^2-1").unwrap()],
        )
        .unwrap();
        let pts = solve_zero_dim(&i, &SolveOptions::default()).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|p| p.satisfies(&i) && p.field.degree() == 1));
    }

    #[test]
    fn non_radical_input() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::GrevLex);
        let i = PolyIdeal::new(
            &r,
            vec![MultiPoly::parse(&r, "(x^2-2)^2").unwrap(), MultiPoly::parse(&r, "y-x").unwrap()],
        )
        .unwrap();
        let pts = solve_zero_dim(&i, &SolveOptions::default()).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].field.degree(), 2);
    }

    #[test]
    fn positive_dimensional_rejected() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::GrevLex);
        let i = PolyIdeal::new(&r, vec![MultiPoly::parse(&r, "x*y-1").unwrap()]).unwrap();
        assert!(matches!(
            solve_zero_dim(&i, &SolveOptions::default()),
            Err(CalgError::NotZeroDimensional(_))
        ));
    }
}
