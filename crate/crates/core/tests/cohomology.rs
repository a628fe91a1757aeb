mod common;

use ptolemy::mod2::{build_complex, h1_order, h2_classes};

// Closing every cusp to a point gives one vertex per cusp, and an ideal
// triangulation has as many edges as tetrahedra and twice as many faces, so
// the Euler characteristic counts cusps.
#[test]
fn euler_characteristic_counts_cusps() {
    for name in ["m004", "m009", "moderate4", "wild4"] {
        let doc = common::fixture(name);
        let cx = build_complex(&doc.tri).unwrap();
        let n = doc.tri.tet_count();
        assert_eq!(cx.cells, [doc.tri.cusps().count, n, 2 * n, n], "{name}");
        assert_eq!(cx.euler_characteristic(), doc.tri.cusps().count as i64, "{name}");
        let betti: i64 = (0..4).map(|k| if k % 2 == 0 { 1 } else { -1 } * cx.betti(k) as i64).sum();
        assert_eq!(betti, cx.euler_characteristic(), "{name}");
    }
}

#[test]
fn cohomology_orders_follow_betti_numbers() {
    for name in ["m004", "m009", "moderate4", "wild4"] {
        let doc = common::fixture(name);
        let cx = build_complex(&doc.tri).unwrap();
        assert_eq!(h1_order(&doc.tri).unwrap() as u64, 1u64 << cx.betti(1), "{name}");
        assert_eq!(h2_classes(&doc.tri).unwrap().len(), 1usize << cx.betti(2), "{name}");
    }
}
