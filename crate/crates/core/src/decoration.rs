//! Cusp decorations: Laurent monomials in (m_s, l_s) attached to face gluings.
//!
//! Each gluing of face f of tet t carries, for every vertex v of the face, a
//! monomial h(v) on the cusp of v. Across the gluing the Ptolemy coordinate
//! of the edge (v, w) satisfies c_t(v, w) = h(v)·h(w)·c_t'(p v, p w).

use crate::error::{PtolemyError, Result};
use crate::perm::{complement, edge_index, EDGES};
use crate::trig::{EdgeTable, Triangulation};

/// Exponent vector over (m_0, l_0, m_1, l_1, ...).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent(pub Vec<i32>);

impl Laurent {
    pub fn one(cusps: usize) -> Self {
        Laurent(vec![0; 2 * cusps])
    }

    pub fn on_cusp(cusps: usize, s: usize, e: [i32; 2]) -> Self {
        let mut v = vec![0; 2 * cusps];
        v[2 * s] = e[0];
        v[2 * s + 1] = e[1];
        Laurent(v)
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        Laurent(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, o: &Laurent) -> Laurent {
        Laurent(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn inv(&self) -> Laurent {
        Laurent(self.0.iter().map(|a| -a).collect())
    }

    pub fn pow(&self, k: i32) -> Laurent {
        Laurent(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

/// Names of the eigenvalue variables: "m","l" for one cusp, else "m0","l0",...
pub fn cusp_var_names(cusps: usize) -> Vec<String> {
    if cusps == 1 {
        return vec!["m".into(), "l".into()];
    }
    (0..cusps).flat_map(|s| [format!("m{s}"), format!("l{s}")]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspDecoration {
    raw: Vec<[[[i32; 2]; 4]; 4]>,
    cusps: usize,
    vertex_cusp: Vec<[usize; 4]>,
}

impl CuspDecoration {
    pub fn new(tri: &Triangulation, raw: Vec<[[[i32; 2]; 4]; 4]>) -> Result<Self> {
        let bad = |m: String| PtolemyError::Decoration(m);
        if raw.len() != tri.tet_count() {
            return Err(bad(format!("{} rows for {} tetrahedra", raw.len(), tri.tet_count())));
        }
        for (t, row) in raw.iter().enumerate() {
            for f in 0..4 {
                if row[f][f] != [0, 0] {
                    return Err(bad(format!("tet {t} face {f}: opposite vertex must carry [0,0]")));
                }
                let g = tri.gluing(t, f);
                let f2 = g.perm.apply(f);
                for v in (0..4).filter(|&v| v != f) {
                    let back = raw[g.tet][f2][g.perm.apply(v)];
                    if back != [-row[f][v][0], -row[f][v][1]] {
                        return Err(bad(format!(
                            "tet {t} face {f} vertex {v}: reverse gluing is not inverse"
                        )));
                    }
                }
            }
        }
        let cusps = tri.cusps();
        let d = CuspDecoration { raw, cusps: cusps.count, vertex_cusp: cusps.vertex_cusp };
        let table = tri.edge_table()?;
        d.occurrence_monomials(tri, &table, None)?;
        Ok(d)
    }

    pub fn trivial(tri: &Triangulation) -> Self {
        let cusps = tri.cusps();
        CuspDecoration {
            raw: vec![[[[0, 0]; 4]; 4]; tri.tet_count()],
            cusps: cusps.count,
            vertex_cusp: cusps.vertex_cusp,
        }
    }

    pub fn raw(&self) -> &[[[[i32; 2]; 4]; 4]] {
        &self.raw
    }

    pub fn cusp_count(&self) -> usize {
        self.cusps
    }

    /// h(v) for the gluing of face f of tet t.
    pub fn factor(&self, t: usize, f: usize, v: usize) -> Laurent {
        Laurent::on_cusp(self.cusps, self.vertex_cusp[t][v], self.raw[t][f][v])
    }

    /// Monomial M with c_t(i,j) = M·(anchor coordinate), per (tet, local edge).
    /// Fails when the monomials do not close up around an edge.
    pub fn occurrence_monomials(
        &self,
        tri: &Triangulation,
        table: &EdgeTable,
        anchors: Option<&[(usize, usize, usize)]>,
    ) -> Result<Vec<[Laurent; 6]>> {
        let n = tri.tet_count();
        let mut m: Vec<[Option<Laurent>; 6]> = vec![Default::default(); n];
        for class in &table.classes {
            let (t0, i0, j0) = match anchors {
                Some(a) => a[class.id],
                None => {
                    let r = class.representative();
                    (r.tet, r.i, r.j)
                }
            };
            let mut stack = vec![(t0, i0, j0)];
            m[t0][edge_index(i0, j0)] = Some(Laurent::one(self.cusps));
            while let Some((t, a, b)) = stack.pop() {
                let cur = m[t][edge_index(a, b)].clone().unwrap();
                let (c, d) = complement(a, b);
                for f in [c, d] {
                    let g = tri.gluing(t, f);
                    let (na, nb) = (g.perm.apply(a), g.perm.apply(b));
                    let val = cur.div(&self.factor(t, f, a).mul(&self.factor(t, f, b)));
                    let slot = &mut m[g.tet][edge_index(na, nb)];
                    match slot {
                        None => {
                            *slot = Some(val);
                            stack.push((g.tet, na, nb));
                        }
                        Some(old) => {
                            if *old != val {
                                return Err(PtolemyError::Decoration(format!(
                                    "monomials do not close around edge class {}",
                                    class.id
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(m.into_iter().map(|r| r.map(|x| x.unwrap())).collect())
    }

    /// Applies a corner gauge: h'_{t,f}(v) = g_t(v)·h_{t,f}(v)/g_{t'}(p v).
    pub fn gauged(&self, tri: &Triangulation, g: &[[[i32; 2]; 4]]) -> CuspDecoration {
        let mut raw = self.raw.clone();
        for t in 0..tri.tet_count() {
            for f in 0..4 {
                let gl = tri.gluing(t, f);
                for v in (0..4).filter(|&v| v != f) {
                    let w = gl.perm.apply(v);
                    for k in 0..2 {
                        raw[t][f][v][k] = g[t][v][k] + self.raw[t][f][v][k] - g[gl.tet][w][k];
                    }
                }
            }
        }
        CuspDecoration { raw, cusps: self.cusps, vertex_cusp: self.vertex_cusp.clone() }
    }

    pub(crate) fn from_parts(raw: Vec<[[[i32; 2]; 4]; 4]>, tri: &Triangulation) -> Self {
        let cusps = tri.cusps();
        CuspDecoration { raw, cusps: cusps.count, vertex_cusp: cusps.vertex_cusp }
    }
}

/// All six (i, j) pairs, for callers iterating edges with their index.
pub fn edges() -> impl Iterator<Item = (usize, (usize, usize))> {
    EDGES.iter().copied().enumerate()
}
