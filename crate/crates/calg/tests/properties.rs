use std::sync::Arc;

use calg::{
    factor_univariate, is_irreducible, rat, Budget, CalgError, GroebnerBasis, MonomialOrder, MultiPoly, NfElem,
    NumberField, PolyIdeal, PolyRing, UPoly,
};
use proptest::prelude::*;

fn ring() -> Arc<PolyRing> {
    PolyRing::new(&["x", "y", "z"], MonomialOrder::GrevLex)
}

/// Up to four low-degree terms with small integer coefficients.
fn small_poly() -> impl Strategy<Value = Vec<([u32; 3], i64)>> {
    prop::collection::vec(((0u32..=2, 0u32..=1, 0u32..=1), -3i64..=3), 1..=4)
        .prop_map(|ts| ts.into_iter().map(|((a, b, c), k)| ([a, b, c], k)).collect())
}

fn build(r: &Arc<PolyRing>, terms: &[([u32; 3], i64)]) -> MultiPoly {
    MultiPoly::from_terms(r, terms.iter().map(|(e, k)| (e.iter().copied().collect(), rat(*k))).collect())
}

fn system() -> impl Strategy<Value = Vec<Vec<([u32; 3], i64)>>> {
    prop::collection::vec(small_poly(), 2..=3)
}

fn budget() -> Budget {
    Budget { max_pairs: 400, ..Budget::default() }
}

fn basis(gens: &[MultiPoly], r: &Arc<PolyRing>) -> Option<GroebnerBasis> {
    match GroebnerBasis::compute_with(gens, r, budget()) {
        Ok(gb) => Some(gb),
        Err(CalgError::BudgetExceeded(_)) => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_basis_ignores_generator_order(sys in system(), rot in 0usize..3) {
        let r = ring();
        let gens: Vec<MultiPoly> = sys.iter().map(|t| build(&r, t)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let mut shuffled = gens.clone();
        shuffled.rotate_left(rot % gens.len());
        shuffled.reverse();
        let (Some(a), Some(b)) = (basis(&gens, &r), basis(&shuffled, &r)) else { return Ok(()) };
        prop_assert_eq!(a.polys(), b.polys());
        prop_assert!(a.verify_s_pairs());
        for g in &gens {
            prop_assert!(a.contains(g));
        }
    }

    #[test]
    fn elimination_stays_inside_the_ideal(sys in system()) {
        let r = ring();
        let gens: Vec<MultiPoly> = sys.iter().map(|t| build(&r, t)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let Some(full) = basis(&gens, &r) else { return Ok(()) };
        let elim = match PolyIdeal::new(&r, gens).unwrap().eliminate(&["y", "z"], budget()) {
            Ok(e) => e,
            Err(CalgError::BudgetExceeded(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for g in elim.gens() {
            prop_assert!(full.contains(&g.to_ring(&r).unwrap()), "{} escaped", g);
        }
        // 1 survives elimination exactly when the ideal is the unit ideal
        let unit = elim.gens().iter().any(|g| g.is_constant() && !g.is_zero());
        prop_assert_eq!(unit, full.is_unit());
    }

    #[test]
    fn number_field_inverses(
        minpoly in prop::collection::vec(-5i64..=5, 2..=4),
        elem in prop::collection::vec(-6i64..=6, 1..=4),
    ) {
        let mut c = minpoly;
        c.push(1);
        let p = UPoly::from_ints(&c);
        prop_assume!(is_irreducible(&p));
        let k = NumberField::new(&p, "w").unwrap();
        let e = NfElem::from_upoly(&k, &UPoly::from_ints(&elem));
        prop_assume!(!e.is_zero());
        let inv = e.inv().unwrap();
        prop_assert_eq!(e.mul(&inv), NfElem::from_int(&k, 1));
        // the minimal polynomial vanishes at the generator
        let w = NfElem::generator(&k);
        let mut acc = NfElem::from_int(&k, 0);
        for (i, q) in p.coeffs().iter().enumerate() {
            acc = acc.add(&w.pow(i as u32).mul(&NfElem::from_rational(&k, q.clone())));
        }
        prop_assert!(acc.is_zero());
    }

    #[test]
    fn factorization_round_trip(parts in prop::collection::vec(prop::collection::vec(-4i64..=4, 2..=4), 1..=3)) {
        let mut p = UPoly::one();
        for c in &parts {
            let f = UPoly::from_ints(c);
            prop_assume!(!f.is_zero());
            p = &p * &f;
        }
        prop_assume!(p.degree().unwrap_or(0) > 0);
        let f = factor_univariate(&p);
        prop_assert_eq!(f.expand(), p.clone());
        for (g, _) in &f.factors {
            prop_assert!(is_irreducible(g));
            prop_assert_eq!(g.lc(), rat(1));
        }
    }
}
