//! Transitive partitions of the edge classes and their resolution by 2-3 moves.

use serde::{Deserialize, Serialize};

use crate::error::{PtolemyError, Result};
use crate::moves::{two_three_move, TwoThreeMove};
use crate::perm::{face_edges, EDGES};
use crate::trig::{EdgeTable, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Degeneracy {
    NonDegenerate,
    Mild,
    Moderate,
    Wild,
    Total,
}

/// Zero/nonzero flags, one per edge class (true = zero-edge).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitivePartition {
    pub zero: Vec<bool>,
}

impl TransitivePartition {
    pub fn from_zero_ids(edges: usize, ids: &[usize]) -> Self {
        let mut zero = vec![false; edges];
        for &i in ids {
            zero[i] = true;
        }
        TransitivePartition { zero }
    }

    pub fn zero_ids(&self) -> Vec<usize> {
        (0..self.zero.len()).filter(|&i| self.zero[i]).collect()
    }

    pub fn is_zero(&self, class: usize) -> bool {
        self.zero[class]
    }

    /// No face has exactly two zero-edges.
    pub fn is_transitive(&self, table: &EdgeTable) -> bool {
        table.of.iter().all(|row| {
            (0..4).all(|f| face_edges(f).iter().filter(|&&e| self.zero[row[e].0]).count() != 2)
        })
    }

    pub fn degenerate_faces(&self, tri: &Triangulation, table: &EdgeTable) -> Vec<(usize, usize)> {
        let (classes, _) = tri.face_classes();
        classes
            .iter()
            .map(|c| c.members[0])
            .filter(|&(t, f)| face_edges(f).iter().all(|&e| self.zero[table.of[t][e].0]))
            .collect()
    }

    pub fn degenerate_tets(&self, table: &EdgeTable) -> Vec<usize> {
        (0..table.of.len())
            .filter(|&t| (0..6).all(|e| self.zero[table.of[t][e].0]))
            .collect()
    }

    /// Degeneracy type and d(E), the number of degenerate simplices.
    pub fn classify(&self, tri: &Triangulation, table: &EdgeTable) -> (Degeneracy, usize) {
        let d = self.degenerate_tets(table).len();
        let ty = if !self.zero.iter().any(|&z| z) {
            Degeneracy::NonDegenerate
        } else if d == tri.tet_count() {
            Degeneracy::Total
        } else if d > 0 {
            Degeneracy::Wild
        } else if !self.degenerate_faces(tri, table).is_empty() {
            Degeneracy::Moderate
        } else {
            Degeneracy::Mild
        };
        (ty, d)
    }
}

/// All transitive partitions, ordered by number of zero-edges, then by zero ids.
pub fn enumerate_partitions(tri: &Triangulation) -> Result<Vec<TransitivePartition>> {
    let table = tri.edge_table()?;
    let n = table.classes.len();
    if n > 24 {
        return Err(PtolemyError::Partition(format!("{n} edge classes is beyond brute force")));
    }
    let mut out: Vec<TransitivePartition> = (0u64..1 << n)
        .map(|mask| TransitivePartition { zero: (0..n).map(|i| mask >> i & 1 == 1).collect() })
        .filter(|p| p.is_transitive(&table))
        .collect();
    out.sort_by_key(|p| (p.zero_ids().len(), p.zero_ids()));
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ResolvedPartition {
    pub original: TransitivePartition,
    pub triangulation: Triangulation,
    pub partition: TransitivePartition,
    pub moves: Vec<TwoThreeMove>,
    /// Moves spent removing degenerate simplices, before any degenerate face is treated.
    pub wild_moves: usize,
    /// Original edge class → class in the resolved triangulation.
    pub edge_map: Vec<usize>,
}

impl ResolvedPartition {
    pub fn degeneracy(&self) -> Result<Degeneracy> {
        let table = self.triangulation.edge_table()?;
        Ok(self.partition.classify(&self.triangulation, &table).0)
    }
}

/// Carries flags through a move; the new edge gets `new_flag`.
fn push_flags(p: &TransitivePartition, mv: &TwoThreeMove, new_flag: bool) -> TransitivePartition {
    let n = mv.after.edge_table().map(|t| t.classes.len()).unwrap_or(0);
    let mut zero = vec![false; n];
    for (old, &(new, _)) in mv.edge_map.iter().enumerate() {
        zero[new] = p.zero[old];
    }
    zero[mv.new_edge] = new_flag;
    TransitivePartition { zero }
}

/// Steps 1 and 2 of the algorithm: 2-3 moves until every descendant is at worst mild.
pub fn resolve(tri: &Triangulation, e: &TransitivePartition) -> Result<Vec<ResolvedPartition>> {
    let table = tri.edge_table()?;
    let (ty, _) = e.classify(tri, &table);
    let identity: Vec<usize> = (0..table.classes.len()).collect();
    match ty {
        Degeneracy::Total => {
            return Err(PtolemyError::Partition("the totally degenerate partition has no variety".into()))
        }
        Degeneracy::NonDegenerate | Degeneracy::Mild => {
            return Ok(vec![ResolvedPartition {
                original: e.clone(),
                triangulation: tri.clone(),
                partition: e.clone(),
                moves: vec![],
                wild_moves: 0,
                edge_map: identity,
            }])
        }
        _ => {}
    }

    let mut cur_tri = tri.clone();
    let mut cur = e.clone();
    let mut moves: Vec<TwoThreeMove> = Vec::new();
    let mut edge_map = identity;
    let compose = |map: &mut Vec<usize>, mv: &TwoThreeMove| {
        for x in map.iter_mut() {
            *x = mv.edge_map[*x].0;
        }
    };

    // wild: peel degenerate simplices one move at a time
    loop {
        let table = cur_tri.edge_table()?;
        let degen = cur.degenerate_tets(&table);
        if degen.is_empty() {
            break;
        }
        let mut face = None;
        'search: for t in 0..cur_tri.tet_count() {
            for f in 0..4 {
                let g = cur_tri.gluing(t, f);
                if g.tet != t && degen.contains(&t) != degen.contains(&g.tet) {
                    face = Some((t, f));
                    break 'search;
                }
            }
        }
        let face = face.ok_or_else(|| {
            PtolemyError::Partition("no face between degenerate and non-degenerate simplices".into())
        })?;
        let mv = two_three_move(&cur_tri, face)?;
        let next = push_flags(&cur, &mv, false);
        let nt = mv.after.edge_table()?;
        if !next.is_transitive(&nt) {
            return Err(PtolemyError::Partition("wild descendant is not transitive".into()));
        }
        let d_before = degen.len();
        let d_after = next.degenerate_tets(&nt).len();
        if d_after + 1 != d_before {
            return Err(PtolemyError::Partition(format!(
                "degenerate simplex count went from {d_before} to {d_after}"
            )));
        }
        compose(&mut edge_map, &mv);
        cur_tri = mv.after.clone();
        cur = next;
        moves.push(mv);
    }

    let wild_moves = moves.len();

    // moderate: one move per degenerate face, branching on the new edges afterwards
    let table = cur_tri.edge_table()?;
    let mut pending: Vec<(usize, usize)> = cur.degenerate_faces(&cur_tri, &table);
    let mut new_edges: Vec<usize> = Vec::new();
    let mut flags = cur.clone();
    while let Some(face) = pending.first().copied() {
        pending.remove(0);
        let mv = two_three_move(&cur_tri, face)?;
        for p in pending.iter_mut() {
            *p = mv.address(p.0, p.1).ok_or_else(|| {
                PtolemyError::Partition("degenerate face consumed by an earlier move".into())
            })?;
        }
        for x in new_edges.iter_mut() {
            *x = mv.edge_map[*x].0;
        }
        new_edges.push(mv.new_edge);
        flags = push_flags(&flags, &mv, false);
        compose(&mut edge_map, &mv);
        cur_tri = mv.after.clone();
        moves.push(mv);
    }
    if new_edges.is_empty() {
        return Ok(vec![ResolvedPartition {
            original: e.clone(),
            triangulation: cur_tri,
            partition: cur,
            moves,
            wild_moves,
            edge_map,
        }]);
    }
    let table = cur_tri.edge_table()?;
    let k = new_edges.len();
    let mut out = Vec::new();
    for mask in 0u32..1 << k {
        let mut p = flags.clone();
        for (b, &ne) in new_edges.iter().enumerate() {
            p.zero[ne] = mask >> b & 1 == 1;
        }
        if !p.is_transitive(&table) {
            continue;
        }
        let (ty, _) = p.classify(&cur_tri, &table);
        if !matches!(ty, Degeneracy::Mild) {
            return Err(PtolemyError::Partition(format!("moderate descendant classified {ty:?}")));
        }
        out.push(ResolvedPartition {
            original: e.clone(),
            triangulation: cur_tri.clone(),
            partition: p,
            moves: moves.clone(),
            wild_moves,
            edge_map: edge_map.clone(),
        });
    }
    Ok(out)
}

/// Flags restricted back along an edge map (descendant check).
pub fn restrict(p: &TransitivePartition, edge_map: &[usize]) -> TransitivePartition {
    TransitivePartition { zero: edge_map.iter().map(|&n| p.zero[n]).collect() }
}

/// Face-rule check written independently of `is_transitive`, for oracle tests.
pub fn face_rule_scan(tri: &Triangulation, table: &EdgeTable, zero: &[bool]) -> bool {
    for t in 0..tri.tet_count() {
        for f in 0..4 {
            let mut z = 0;
            for &(i, j) in EDGES.iter() {
                if i != f && j != f && zero[table.class_of(t, i, j).0] {
                    z += 1;
                }
            }
            if z == 2 {
                return false;
            }
        }
    }
    true
}
