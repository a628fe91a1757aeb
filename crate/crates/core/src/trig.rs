//! Ideal triangulations: gluing data, edge and face classes, edge links, cusps.

use std::collections::VecDeque;

use crate::error::{PtolemyError, Result};
use crate::perm::{complement, edge_index, Perm4, EDGES};

/// Face `f` of a tetrahedron is glued to face `perm(f)` of `tet` via `perm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
    labels: Vec<[String; 4]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub tet: usize,
    pub i: usize,
    pub j: usize,
    /// +1 when the oriented edge i→j agrees with the representative's orientation.
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    pub id: usize,
    pub occurrences: Vec<Occurrence>,
}

impl EdgeClass {
    pub fn representative(&self) -> Occurrence {
        self.occurrences[0]
    }

    pub fn valence(&self) -> usize {
        self.occurrences.len()
    }
}

/// One simplex of an edge link: `relabel` maps standard vertex k to a vertex of `tet`,
/// with the central edge at standard 0→1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkStep {
    pub tet: usize,
    pub relabel: Perm4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLink {
    pub edge: usize,
    pub cycle: Vec<LinkStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cusps {
    pub count: usize,
    /// Cusp index of every (tet, vertex).
    pub vertex_cusp: Vec<[usize; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceClass {
    pub id: usize,
    pub members: [(usize, usize); 2],
}

/// Lookup from (tet, local edge index) to (class id, sign).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTable {
    pub classes: Vec<EdgeClass>,
    pub of: Vec<[(usize, i8); 6]>,
}

impl EdgeTable {
    pub fn class_of(&self, tet: usize, i: usize, j: usize) -> (usize, i8) {
        let (c, s) = self.of[tet][edge_index(i, j)];
        if i < j {
            (c, s)
        } else {
            (c, -s)
        }
    }
}

pub fn default_label(tet: usize, face: usize) -> String {
    format!("f{tet}_{face}")
}

impl Triangulation {
    /// Validates involution, bijectivity and completeness.
    pub fn new(gluings: Vec<[Gluing; 4]>, labels: Option<Vec<[String; 4]>>) -> Result<Self> {
        let n = gluings.len();
        if n == 0 {
            return Err(PtolemyError::Malformed("no tetrahedra".into()));
        }
        for (t, g) in gluings.iter().enumerate() {
            for f in 0..4 {
                let Gluing { tet, perm } = g[f];
                if tet >= n {
                    return Err(PtolemyError::BadNeighbor { tet: t, face: f, neighbor: tet });
                }
                if Perm4::new(perm.0).is_none() {
                    return Err(PtolemyError::BadPermutation { tet: t, face: f });
                }
                let f2 = perm.apply(f);
                if tet == t && f2 == f {
                    return Err(PtolemyError::SelfGlued { tet: t, face: f });
                }
                let back = gluings[tet][f2];
                if back.tet != t || back.perm != perm.inverse() {
                    return Err(PtolemyError::NotInvolutive { tet: t, face: f });
                }
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != n {
                    return Err(PtolemyError::Malformed(format!(
                        "{} label rows for {} tetrahedra",
                        l.len(),
                        n
                    )));
                }
                l
            }
            None => (0..n).map(|t| std::array::from_fn(|f| default_label(t, f))).collect(),
        };
        Ok(Triangulation { gluings, labels })
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    pub fn labels(&self) -> &[[String; 4]] {
        &self.labels
    }

    pub fn label(&self, tet: usize, face: usize) -> &str {
        &self.labels[tet][face]
    }

    /// Every gluing permutation is odd, so all tetrahedra are coherently oriented.
    pub fn is_oriented(&self) -> bool {
        self.gluings.iter().all(|g| g.iter().all(|x| x.perm.is_odd()))
    }

    /// Edge orbits with orientation signs; classes ordered by representative.
    pub fn edge_table(&self) -> Result<EdgeTable> {
        let n = self.tet_count();
        let mut of: Vec<[Option<(usize, i8)>; 6]> = vec![[None; 6]; n];
        let mut classes = Vec::new();
        for t in 0..n {
            for (e, &(i, j)) in EDGES.iter().enumerate() {
                if of[t][e].is_some() {
                    continue;
                }
                let id = classes.len();
                let mut occ = Vec::new();
                let mut queue = VecDeque::new();
                of[t][e] = Some((id, 1));
                queue.push_back((t, i, j));
                while let Some((tt, a, b)) = queue.pop_front() {
                    // oriented a→b carries the class orientation
                    let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
                    occ.push(Occurrence { tet: tt, i: lo, j: hi, sign: s });
                    let (c, d) = complement(a, b);
                    for f in [c, d] {
                        let g = self.gluings[tt][f];
                        let (na, nb) = (g.perm.apply(a), g.perm.apply(b));
                        let ne = edge_index(na, nb);
                        let ns: i8 = if na < nb { 1 } else { -1 };
                        match of[g.tet][ne] {
                            None => {
                                of[g.tet][ne] = Some((id, ns));
                                queue.push_back((g.tet, na, nb));
                            }
                            Some((cid, cs)) => {
                                if cid != id || cs != ns {
                                    return Err(PtolemyError::NonOrientableEdge(id));
                                }
                            }
                        }
                    }
                }
                occ.sort();
                classes.push(EdgeClass { id, occurrences: occ });
            }
        }
        let of = of.into_iter().map(|r| r.map(|x| x.unwrap())).collect();
        Ok(EdgeTable { classes, of })
    }

    pub fn edge_classes(&self) -> Result<Vec<EdgeClass>> {
        Ok(self.edge_table()?.classes)
    }

    /// Cyclic link of an edge class starting at `start` (tet, i, j) oriented i→j.
    pub fn edge_link_from(&self, edge: usize, start: (usize, usize, usize)) -> Result<EdgeLink> {
        let (t0, i, j) = start;
        let (a, b) = complement(i, j);
        let mut pi = Perm4([i as u8, j as u8, a as u8, b as u8]);
        // keep the standard simplex positively oriented relative to the tetrahedron
        if pi.is_odd() {
            pi = Perm4([i as u8, j as u8, b as u8, a as u8]);
        }
        let first = LinkStep { tet: t0, relabel: pi };
        let mut cycle = vec![first];
        let mut cur = first;
        let limit = 6 * self.tet_count() + 1;
        loop {
            let g = self.gluings[cur.tet][cur.relabel.apply(2)];
            let p = g.perm;
            let r = cur.relabel;
            let next = Perm4([
                p.apply(r.apply(0)) as u8,
                p.apply(r.apply(1)) as u8,
                p.apply(r.apply(3)) as u8,
                p.apply(r.apply(2)) as u8,
            ]);
            let step = LinkStep { tet: g.tet, relabel: next };
            if step.tet == first.tet
                && step.relabel.apply(0) == first.relabel.apply(0)
                && step.relabel.apply(1) == first.relabel.apply(1)
            {
                if step != first {
                    return Err(PtolemyError::NotOriented);
                }
                break;
            }
            if step.tet == first.tet
                && step.relabel.apply(0) == first.relabel.apply(1)
                && step.relabel.apply(1) == first.relabel.apply(0)
            {
                return Err(PtolemyError::NonOrientableEdge(edge));
            }
            cycle.push(step);
            cur = step;
            if cycle.len() > limit {
                return Err(PtolemyError::NotOriented);
            }
        }
        Ok(EdgeLink { edge, cycle })
    }

    /// Link of an edge class starting at its representative.
    pub fn edge_link(&self, class: &EdgeClass) -> Result<EdgeLink> {
        let r = class.representative();
        self.edge_link_from(class.id, (r.tet, r.i, r.j))
    }

    pub fn cusps(&self) -> Cusps {
        let n = self.tet_count();
        let mut uf = UnionFind::new(4 * n);
        for t in 0..n {
            for f in 0..4 {
                let g = self.gluings[t][f];
                for v in (0..4).filter(|&v| v != f) {
                    uf.union(4 * t + v, 4 * g.tet + g.perm.apply(v));
                }
            }
        }
        let mut ids = vec![usize::MAX; 4 * n];
        let mut count = 0;
        let mut vertex_cusp = vec![[0usize; 4]; n];
        for x in 0..4 * n {
            let r = uf.find(x);
            if ids[r] == usize::MAX {
                ids[r] = count;
                count += 1;
            }
            vertex_cusp[x / 4][x % 4] = ids[r];
        }
        Cusps { count, vertex_cusp }
    }

    pub fn face_classes(&self) -> (Vec<FaceClass>, Vec<[usize; 4]>) {
        let n = self.tet_count();
        let mut of = vec![[usize::MAX; 4]; n];
        let mut classes = Vec::new();
        for t in 0..n {
            for f in 0..4 {
                if of[t][f] != usize::MAX {
                    continue;
                }
                let g = self.gluings[t][f];
                let f2 = g.perm.apply(f);
                let id = classes.len();
                of[t][f] = id;
                of[g.tet][f2] = id;
                classes.push(FaceClass { id, members: [(t, f), (g.tet, f2)] });
            }
        }
        (classes, of)
    }

    /// Finds the (tet, face) carrying a label.
    pub fn face_by_label(&self, label: &str) -> Option<(usize, usize)> {
        for (t, row) in self.labels.iter().enumerate() {
            for (f, l) in row.iter().enumerate() {
                if l == label {
                    return Some((t, f));
                }
            }
        }
        None
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let nx = self.parent[y];
            self.parent[y] = r;
            y = nx;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
