mod common;

use ptolemy::mod2::{h1_order, h2_classes};
use ptolemy::partition::enumerate_partitions;
use ptolemy::perm::Perm4;
use ptolemy::trig::{Gluing, Triangulation};
use proptest::prelude::*;

fn perm() -> impl Strategy<Value = Perm4> {
    Just(vec![0u8, 1, 2, 3]).prop_shuffle().prop_map(|v| Perm4::new([v[0], v[1], v[2], v[3]]).unwrap())
}

/// Same gluing with tetrahedra renumbered by `order` and vertices of each
/// tetrahedron relabelled by an even permutation.
fn relabel(tri: &Triangulation, order: &[usize], vertex: &[Perm4]) -> Triangulation {
    let n = tri.tet_count();
    let mut g = vec![[Gluing { tet: 0, perm: Perm4::new([0, 1, 2, 3]).unwrap() }; 4]; n];
    for t in 0..n {
        for f in 0..4 {
            let old = tri.gluing(t, f);
            // new vertex v of t is old vertex vertex[t]^-1(v)
            let perm = vertex[old.tet].compose(old.perm).compose(vertex[t].inverse());
            g[order[t]][vertex[t].apply(f)] = Gluing { tet: order[old.tet], perm };
        }
    }
    Triangulation::new(g, None).unwrap()
}

fn invariants(tri: &Triangulation) -> (Vec<usize>, usize, u64, usize, Vec<String>) {
    let table = tri.edge_table().unwrap();
    let mut valences: Vec<usize> = table.classes.iter().map(|c| c.valence()).collect();
    valences.sort();
    let mut kinds: Vec<String> =
        enumerate_partitions(tri).unwrap().iter().map(|p| format!("{:?}", p.classify(tri, &table).0)).collect();
    kinds.sort();
    (valences, tri.cusps().count, h1_order(tri).unwrap() as u64, h2_classes(tri).unwrap().len(), kinds)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn perm_group_laws(a in perm(), b in perm(), c in perm()) {
        let id = Perm4::new([0, 1, 2, 3]).unwrap();
        prop_assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
        prop_assert_eq!(a.compose(a.inverse()), id);
        prop_assert_eq!(a.compose(b).is_odd(), a.is_odd() != b.is_odd());
        for i in 0..4 {
            prop_assert_eq!(a.compose(b).apply(i), a.apply(b.apply(i)));
        }
    }

    #[test]
    fn relabelling_preserves_invariants(
        name in prop::sample::select(vec!["m004", "m009", "moderate4", "wild4"]),
        seed in prop::collection::vec(perm(), 4),
        shuffle in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let doc = common::fixture(name);
        let n = doc.tri.tet_count();
        let order: Vec<usize> = shuffle.iter().copied().filter(|&i| i < n).collect();
        // keep orientation: an odd relabel gets one more transposition
        let swap = Perm4::new([1, 0, 2, 3]).unwrap();
        let vertex: Vec<Perm4> = seed[..n].iter().map(|p| if p.is_odd() { p.compose(swap) } else { *p }).collect();
        let moved = relabel(&doc.tri, &order, &vertex);
        prop_assert!(moved.is_oriented());
        prop_assert_eq!(invariants(&moved), invariants(&doc.tri));
    }
}
