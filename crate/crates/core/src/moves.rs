//! The 2-3 Pachner move.

use crate::decoration::CuspDecoration;
use crate::error::{PtolemyError, Result};
use crate::perm::{face_vertices, Perm4};
use crate::trig::{Gluing, Triangulation};

/// Result of a 2-3 move together with the bookkeeping needed to carry data across.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoThreeMove {
    pub before: Triangulation,
    pub after: Triangulation,
    /// The face the move was performed on, (tet, face) in `before`.
    pub face: (usize, usize),
    /// Old edge class → (new edge class, relative orientation sign).
    pub edge_map: Vec<(usize, i8)>,
    /// The new central edge class in `after`.
    pub new_edge: usize,
    /// Indices of the three new tetrahedra.
    pub new_tets: [usize; 3],
    /// (old tet, old face) → (new tet, new face, old vertex → new vertex); None on the moved face.
    addresses: Vec<[Option<(usize, usize, Perm4)>; 4]>,
}

const SWAP23: Perm4 = Perm4([0, 1, 3, 2]);

pub fn two_three_move(tri: &Triangulation, face: (usize, usize)) -> Result<TwoThreeMove> {
    let (ta, fa) = face;
    let n = tri.tet_count();
    if ta >= n || fa > 3 {
        return Err(PtolemyError::Malformed(format!("no face ({ta}, {fa})")));
    }
    let g = tri.gluing(ta, fa);
    let tb = g.tet;
    if tb == ta {
        return Err(PtolemyError::NonEmbeddedFace { tet: ta, face: fa });
    }
    let fb = g.perm.apply(fa);
    let mut us = face_vertices(fa);
    if fa % 2 == 1 {
        us.swap(1, 2);
    }
    let ub: [usize; 3] = std::array::from_fn(|k| g.perm.apply(us[k]));
    let tnew = [ta, tb, n];

    let chi_a = |k: usize| {
        Perm4::from_fn(|v| {
            if v == fa {
                0
            } else if v == us[k] {
                1
            } else if v == us[(k + 1) % 3] {
                2
            } else {
                3
            }
        })
        .unwrap()
    };
    let chi_b = |k: usize| {
        Perm4::from_fn(|v| {
            if v == fb {
                1
            } else if v == ub[k] {
                0
            } else if v == ub[(k + 1) % 3] {
                2
            } else {
                3
            }
        })
        .unwrap()
    };

    let mut addresses: Vec<[Option<(usize, usize, Perm4)>; 4]> = vec![[None; 4]; n];
    for (x, row) in addresses.iter_mut().enumerate() {
        for (f, slot) in row.iter_mut().enumerate() {
            *slot = if x == ta {
                (f != fa).then(|| {
                    let k = us.iter().position(|&u| u == f).unwrap();
                    (tnew[k], 1, chi_a(k))
                })
            } else if x == tb {
                (f != fb).then(|| {
                    let k = ub.iter().position(|&u| u == f).unwrap();
                    (tnew[k], 0, chi_b(k))
                })
            } else {
                Some((x, f, Perm4::IDENTITY))
            };
        }
    }

    let placeholder = Gluing { tet: usize::MAX, perm: Perm4::IDENTITY };
    let mut gl = vec![[placeholder; 4]; n + 1];
    let mut labels: Vec<[String; 4]> = vec![Default::default(); n + 1];
    for x in 0..n {
        for f in 0..4 {
            let Some((nt, nf, cx)) = addresses[x][f] else { continue };
            let old = tri.gluing(x, f);
            let fy = old.perm.apply(f);
            let (mt, _, cy) = addresses[old.tet][fy].expect("moved face glued only to itself");
            let perm = cy.compose(old.perm).compose(cx.inverse());
            gl[nt][nf] = Gluing { tet: mt, perm };
            labels[nt][nf] = tri.label(x, f).to_string();
        }
    }
    for k in 0..3 {
        let (a, b) = (tnew[k], tnew[(k + 1) % 3]);
        gl[a][2] = Gluing { tet: b, perm: SWAP23 };
        gl[b][3] = Gluing { tet: a, perm: SWAP23 };
        labels[a][2] = format!("n{}_{}", n + 1, k);
        labels[b][3] = format!("n{}_{}", n + 1, k);
    }
    let after = Triangulation::new(gl, Some(labels))?;

    let old_table = tri.edge_table()?;
    let new_table = after.edge_table()?;
    let mut edge_map = Vec::with_capacity(old_table.classes.len());
    for class in &old_table.classes {
        let r = class.representative();
        let (nt, ni, nj) = if r.tet == ta || r.tet == tb {
            let (apex, verts, chi): (usize, [usize; 3], &dyn Fn(usize) -> Perm4) =
                if r.tet == ta { (fa, us, &chi_a) } else { (fb, ub, &chi_b) };
            let _ = apex;
            let k = (0..3).find(|&k| verts[k] != r.i && verts[k] != r.j).unwrap();
            let c = chi(k);
            (tnew[k], c.apply(r.i), c.apply(r.j))
        } else {
            (r.tet, r.i, r.j)
        };
        edge_map.push(new_table.class_of(nt, ni, nj));
    }
    let new_edge = new_table.class_of(tnew[0], 0, 1).0;
    Ok(TwoThreeMove { before: tri.clone(), after, face, edge_map, new_edge, new_tets: tnew, addresses })
}

impl TwoThreeMove {
    /// Where an old face ended up.
    pub fn address(&self, tet: usize, face: usize) -> Option<(usize, usize)> {
        self.addresses[tet][face].map(|(t, f, _)| (t, f))
    }

    /// Gauges the second tetrahedron so the moved face carries trivial monomials,
    /// then copies the remaining gluing monomials to their new faces.
    pub fn transport_decoration(&self, dec: &CuspDecoration) -> CuspDecoration {
        let (ta, fa) = self.face;
        let g = self.before.gluing(ta, fa);
        let mut gauge = vec![[[0i32; 2]; 4]; self.before.tet_count()];
        for v in (0..4).filter(|&v| v != fa) {
            gauge[g.tet][g.perm.apply(v)] = dec.raw()[ta][fa][v];
        }
        let d = dec.gauged(&self.before, &gauge);
        debug_assert!((0..4).all(|v| d.raw()[ta][fa][v] == [0, 0]));
        let mut raw = vec![[[[0i32; 2]; 4]; 4]; self.after.tet_count()];
        for x in 0..self.before.tet_count() {
            for f in 0..4 {
                if let Some((nt, nf, c)) = self.addresses[x][f] {
                    for v in (0..4).filter(|&v| v != f) {
                        raw[nt][nf][c.apply(v)] = d.raw()[x][f][v];
                    }
                }
            }
        }
        CuspDecoration::from_parts(raw, &self.after)
    }

    /// Carries a 2-cocycle (per face class) across the move; the three new
    /// internal faces are filled in so the result stays a cocycle.
    pub fn transport_cocycle(&self, sigma: &[bool]) -> Vec<bool> {
        let (_, old_of) = self.before.face_classes();
        let (new_classes, new_of) = self.after.face_classes();
        let mut out: Vec<Option<bool>> = vec![None; new_classes.len()];
        for x in 0..self.before.tet_count() {
            for f in 0..4 {
                if let Some((nt, nf, _)) = self.addresses[x][f] {
                    out[new_of[nt][nf]] = Some(sigma[old_of[x][f]]);
                }
            }
        }
        let t = self.new_tets;
        let ext = |k: usize| out[new_of[t[k]][0]].unwrap() ^ out[new_of[t[k]][1]].unwrap();
        // internal face k joins T_k (face 2) and T_{k+1} (face 3)
        let s0 = false;
        let s1 = ext(1) ^ s0;
        let s2 = ext(2) ^ s1;
        for (k, s) in [s0, s1, s2].into_iter().enumerate() {
            out[new_of[t[k]][2]] = Some(s);
        }
        out.into_iter().map(|x| x.unwrap()).collect()
    }
}
