//! Cellular Z/2 cohomology of the end-compactified manifold: H¹, H², obstruction
//! cocycles and their per-simplex lifts.

use crate::error::{PtolemyError, Result};
use crate::perm::{face_edges, EDGES};
use crate::trig::Triangulation;

pub type Gf2Vec = Vec<bool>;

/// Rows reduced to echelon form with each pivot at the lowest set index;
/// pivot columns are cleared in all other rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<Gf2Vec>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(width: usize, input: &[Gf2Vec]) -> Self {
        let mut e = Echelon { rows: vec![], pivots: vec![] };
        for v in input {
            e.insert(width, v);
        }
        e
    }

    /// Adds a vector; returns false when it was already in the span.
    pub fn insert(&mut self, _width: usize, v: &Gf2Vec) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|&b| b) else { return false };
        for row in self.rows.iter_mut() {
            if row[p] {
                xor_into(row, &r);
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.rows.insert(at, r);
        self.pivots.insert(at, p);
        true
    }

    /// Canonical representative of v modulo the span: zero at every pivot.
    pub fn reduce(&self, v: &Gf2Vec) -> Gf2Vec {
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p] {
                xor_into(&mut r, row);
            }
        }
        r
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &Gf2Vec) -> bool {
        !self.reduce(v).iter().any(|&b| b)
    }
}

pub fn xor_into(a: &mut Gf2Vec, b: &Gf2Vec) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= *y;
    }
}

/// Matrix-vector product; `m` has one row per output coordinate.
pub fn apply(m: &[Gf2Vec], v: &Gf2Vec) -> Gf2Vec {
    m.iter().map(|row| row.iter().zip(v).fold(false, |acc, (a, b)| acc ^ (*a & *b))).collect()
}

/// Basis of {v : m·v = 0}.
pub fn kernel(m: &[Gf2Vec], width: usize) -> Vec<Gf2Vec> {
    // Gauss-Jordan on the rows, then read off free columns.
    let mut rows: Vec<Gf2Vec> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c]) else { continue };
        rows.swap(r, k);
        let pr = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] {
                xor_into(row, &pr);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![false; width];
            v[f] = true;
            for (i, &p) in pivots.iter().enumerate() {
                if rows[i][f] {
                    v[p] = true;
                }
            }
            v
        })
        .collect()
}

pub fn rank(m: &[Gf2Vec], width: usize) -> usize {
    Echelon::new(width, m).rank()
}

/// Cells of M̂ and the coboundary maps between them.
#[derive(Clone, Debug)]
pub struct CellComplex2 {
    pub cells: [usize; 4],
    /// delta[k] maps k-cochains to (k+1)-cochains; one row per (k+1)-cell.
    pub delta: [Vec<Gf2Vec>; 3],
    /// (tet, face) → face class.
    pub face_of: Vec<[usize; 4]>,
    /// (tet, local edge) → edge class.
    pub edge_of: Vec<[usize; 6]>,
}

pub fn build_complex(tri: &Triangulation) -> Result<CellComplex2> {
    let table = tri.edge_table()?;
    let cusps = tri.cusps();
    let (faces, face_of) = tri.face_classes();
    let (c0, c1, c2, c3) = (cusps.count, table.classes.len(), faces.len(), tri.tet_count());
    let d0: Vec<Gf2Vec> = table
        .classes
        .iter()
        .map(|e| {
            let r = e.representative();
            let mut row = vec![false; c0];
            row[cusps.vertex_cusp[r.tet][r.i]] ^= true;
            row[cusps.vertex_cusp[r.tet][r.j]] ^= true;
            row
        })
        .collect();
    let d1: Vec<Gf2Vec> = faces
        .iter()
        .map(|fc| {
            let (t, f) = fc.members[0];
            let mut row = vec![false; c1];
            for e in face_edges(f) {
                row[table.of[t][e].0] ^= true;
            }
            row
        })
        .collect();
    let d2: Vec<Gf2Vec> = (0..c3)
        .map(|t| {
            let mut row = vec![false; c2];
            for f in 0..4 {
                row[face_of[t][f]] ^= true;
            }
            row
        })
        .collect();
    let edge_of = table.of.iter().map(|r| std::array::from_fn(|e| r[e].0)).collect();
    Ok(CellComplex2 { cells: [c0, c1, c2, c3], delta: [d0, d1, d2], face_of, edge_of })
}

impl CellComplex2 {
    pub fn euler_characteristic(&self) -> i64 {
        let [a, b, c, d] = self.cells.map(|x| x as i64);
        a - b + c - d
    }

    /// dim H^k for k = 0..3.
    pub fn betti(&self, k: usize) -> usize {
        let ker = if k == 3 { self.cells[3] } else { self.cells[k] - rank(&self.delta[k], self.cells[k]) };
        let im = if k == 0 { 0 } else { rank(&self.delta[k - 1], self.cells[k - 1]) };
        ker - im
    }

    fn coboundaries2(&self) -> Echelon {
        let c1 = self.cells[1];
        let images: Vec<Gf2Vec> = (0..c1)
            .map(|e| {
                let mut v = vec![false; c1];
                v[e] = true;
                apply(&self.delta[1], &v)
            })
            .collect();
        Echelon::new(self.cells[2], &images)
    }
}

pub fn h1_order(tri: &Triangulation) -> Result<u64> {
    Ok(1u64 << build_complex(tri)?.betti(1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionClass {
    /// One flag per face class.
    pub sigma: Gf2Vec,
    /// Per tetrahedron, one flag per edge in `EDGES` order.
    pub eta: Vec<[bool; 6]>,
    pub class_index: usize,
}

impl ObstructionClass {
    /// ±1 factor of η on edge (i, j) of tet t.
    pub fn eta_sign(&self, t: usize, i: usize, j: usize) -> i64 {
        let e = crate::perm::edge_index(i, j);
        if self.eta[t][e] {
            -1
        } else {
            1
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.class_index == 0
    }

    /// Builds the class of the cocycle δη from explicit per-simplex lifts.
    pub fn from_eta(tri: &Triangulation, eta: Vec<[bool; 6]>) -> Result<Self> {
        let cx = build_complex(tri)?;
        let mut sigma: Vec<Option<bool>> = vec![None; cx.cells[2]];
        for (t, et) in eta.iter().enumerate() {
            for f in 0..4 {
                let s = face_edges(f).iter().fold(false, |a, &e| a ^ et[e]);
                let slot = &mut sigma[cx.face_of[t][f]];
                match slot {
                    None => *slot = Some(s),
                    Some(old) if *old != s => {
                        return Err(PtolemyError::Malformed(format!(
                            "lifts disagree on face class {}",
                            cx.face_of[t][f]
                        )))
                    }
                    _ => {}
                }
            }
        }
        let sigma: Gf2Vec = sigma.into_iter().map(|x| x.unwrap()).collect();
        let classes = h2_classes(tri)?;
        let b = cx.coboundaries2();
        let canon = b.reduce(&sigma);
        let class_index = classes
            .iter()
            .position(|c| b.reduce(&c.sigma) == canon)
            .ok_or_else(|| PtolemyError::Malformed("not a cocycle".into()))?;
        Ok(ObstructionClass { sigma, eta, class_index })
    }

    /// The class of an arbitrary cocycle, with lexicographically smallest lifts.
    pub fn from_sigma(tri: &Triangulation, sigma: Gf2Vec, class_index: usize) -> Result<Self> {
        let cx = build_complex(tri)?;
        if apply(&cx.delta[2], &sigma).iter().any(|&b| b) {
            return Err(PtolemyError::Malformed("sigma is not a cocycle".into()));
        }
        let eta = (0..tri.tet_count()).map(|t| smallest_lift(&cx, &sigma, t)).collect();
        Ok(ObstructionClass { sigma, eta, class_index })
    }
}

/// Lexicographically smallest η_t (as a 6-bit word in EDGES order) with δη_t = σ|Δ_t.
fn smallest_lift(cx: &CellComplex2, sigma: &Gf2Vec, t: usize) -> [bool; 6] {
    for word in 0u8..64 {
        let eta: [bool; 6] = std::array::from_fn(|e| word >> (5 - e) & 1 == 1);
        let ok = (0..4).all(|f| {
            face_edges(f).iter().fold(false, |a, &e| a ^ eta[e]) == sigma[cx.face_of[t][f]]
        });
        if ok {
            return eta;
        }
    }
    unreachable!("every 2-cocycle on a simplex is a coboundary")
}

/// One canonical cocycle per class of H², trivial class first.
pub fn h2_classes(tri: &Triangulation) -> Result<Vec<ObstructionClass>> {
    let cx = build_complex(tri)?;
    let c2 = cx.cells[2];
    let b = cx.coboundaries2();
    let z = kernel(&cx.delta[2], c2);
    let mut quot = Echelon { rows: vec![], pivots: vec![] };
    for v in &z {
        quot.insert(c2, &b.reduce(v));
    }
    let h = quot.rank();
    let mut reps: Vec<Gf2Vec> = (0u64..1 << h)
        .map(|mask| {
            let mut v = vec![false; c2];
            for (k, row) in quot.rows.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    xor_into(&mut v, row);
                }
            }
            b.reduce(&v)
        })
        .collect();
    let support = |v: &Gf2Vec| (0..v.len()).filter(|&i| v[i]).collect::<Vec<_>>();
    reps.sort_by_key(|v| (v.iter().filter(|&&x| x).count() > 0, support(v)));
    reps.into_iter()
        .enumerate()
        .map(|(i, s)| ObstructionClass::from_sigma(tri, s, i))
        .collect()
}

/// Support of a cochain as a list of indices.
pub fn support(v: &[bool]) -> Vec<usize> {
    (0..v.len()).filter(|&i| v[i]).collect()
}

/// Edge names like "e13" for the η support of a tetrahedron.
pub fn eta_support(eta: &[bool; 6]) -> Vec<String> {
    EDGES
        .iter()
        .enumerate()
        .filter(|(e, _)| eta[*e])
        .map(|(_, (i, j))| format!("e{i}{j}"))
        .collect()
}
