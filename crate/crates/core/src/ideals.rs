//! Ptolemy, edge and gauge relations for SL(2), PSL(2) and enhanced varieties.

use std::collections::BTreeMap;
use std::sync::Arc;

use calg::{MonomialOrder, MultiPoly, PolyIdeal, PolyRing, Rational};
use num_traits::{One, Zero};

use crate::decoration::{cusp_var_names, CuspDecoration, Laurent};
use crate::doc::EdgeVariable;
use crate::error::{PtolemyError, Result};
use crate::mod2::ObstructionClass;
use crate::partition::{enumerate_partitions, Degeneracy, TransitivePartition};
use crate::perm::{edge_index, EDGES};
use crate::trig::{EdgeLink, EdgeTable, Triangulation};

/// Name of the auxiliary variable enforcing the nonzero constraints.
pub const SATURATION_VAR: &str = "t";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VariableRole {
    PtolemyVar(usize),
    MeridianVar(usize),
    LongitudeVar(usize),
    AuxSaturation,
}

#[derive(Clone, Debug)]
pub enum Mode {
    Sl,
    Psl(ObstructionClass),
    Enhanced(CuspDecoration),
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Sl => "sl2",
            Mode::Psl(_) => "psl2",
            Mode::Enhanced(_) => "enhanced",
        }
    }
}

fn reserved(name: &str, cusps: usize) -> bool {
    name == SATURATION_VAR || name.starts_with('_') || cusp_var_names(cusps).iter().any(|c| c == name)
}

fn valid_identifier(name: &str) -> bool {
    let mut ch = name.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic())
        && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Checks that edge variables name every class exactly once with a valid anchor.
pub fn check_edge_variables(tri: &Triangulation, ev: &[EdgeVariable]) -> Result<()> {
    VarSpec::from_doc(tri, &tri.edge_table()?, Some(ev)).map(|_| ())
}

/// One named variable per edge class, each tied to an anchor occurrence (tet, i, j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpec {
    pub names: Vec<String>,
    pub anchors: Vec<(usize, usize, usize)>,
    /// Order in which the variables appear in polynomial rings.
    pub order: Vec<usize>,
}

impl VarSpec {
    pub fn default_for(table: &EdgeTable) -> Self {
        let n = table.classes.len();
        VarSpec {
            names: (0..n).map(|i| format!("c{i}")).collect(),
            anchors: table
                .classes
                .iter()
                .map(|c| {
                    let r = c.representative();
                    (r.tet, r.i, r.j)
                })
                .collect(),
            order: (0..n).collect(),
        }
    }

    pub fn from_doc(tri: &Triangulation, table: &EdgeTable, ev: Option<&[EdgeVariable]>) -> Result<Self> {
        let Some(ev) = ev else { return Ok(Self::default_for(table)) };
        let n = table.classes.len();
        let cusps = tri.cusps().count;
        let bad = |m: String| PtolemyError::Malformed(format!("edge_variables: {m}"));
        if ev.len() != n {
            return Err(bad(format!("{} entries for {n} edge classes", ev.len())));
        }
        let mut names = vec![String::new(); n];
        let mut anchors = vec![(0, 0, 0); n];
        let mut order = Vec::with_capacity(n);
        for v in ev {
            let [t, i, j] = v.anchor;
            if t >= tri.tet_count() || i > 3 || j > 3 || i == j {
                return Err(bad(format!("invalid anchor {:?}", v.anchor)));
            }
            if !valid_identifier(&v.name) || reserved(&v.name, cusps) {
                return Err(bad(format!("unusable name {:?}", v.name)));
            }
            if ev.iter().filter(|w| w.name == v.name).count() > 1 {
                return Err(bad(format!("duplicate name {:?}", v.name)));
            }
            let (c, _) = table.class_of(t, i, j);
            if !names[c].is_empty() {
                return Err(bad(format!("edge class {c} named twice")));
            }
            names[c] = v.name.clone();
            anchors[c] = (t, i, j);
            order.push(c);
        }
        Ok(VarSpec { names, anchors, order })
    }

    /// Variable names for a triangulation obtained by moves: old names travel along `edge_map`,
    /// new classes get fresh names.
    pub fn transported(&self, table: &EdgeTable, edge_map: &[usize], cusps: usize) -> Self {
        let mut spec = Self::default_for(table);
        let mut order = Vec::new();
        for &old in &self.order {
            spec.names[edge_map[old]] = self.names[old].clone();
            order.push(edge_map[old]);
        }
        let mut k = 0;
        for c in 0..table.classes.len() {
            if !order.contains(&c) {
                loop {
                    let cand = format!("n{k}");
                    k += 1;
                    if !self.names.contains(&cand) && !reserved(&cand, cusps) {
                        spec.names[c] = cand;
                        break;
                    }
                }
                order.push(c);
            }
        }
        spec.order = order;
        spec
    }
}

/// c_t(i, j) = sign · mono · X_class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordTerm {
    pub sign: i64,
    pub mono: Laurent,
    pub class: usize,
}

/// Coordinates of every oriented edge of every tetrahedron in terms of class variables.
#[derive(Clone, Debug)]
pub struct CoordTable {
    terms: Vec<[CoordTerm; 6]>,
    pub cusps: usize,
}

impl CoordTable {
    pub fn new(tri: &Triangulation, table: &EdgeTable, vars: &VarSpec, mode: &Mode) -> Result<Self> {
        let cusps = tri.cusps().count;
        let monos = match mode {
            Mode::Enhanced(d) => d.occurrence_monomials(tri, table, Some(&vars.anchors))?,
            _ => vec![std::array::from_fn(|_| Laurent::one(cusps)); tri.tet_count()],
        };
        let eta = |t: usize, i: usize, j: usize| match mode {
            Mode::Psl(o) => o.eta_sign(t, i, j),
            _ => 1,
        };
        let mut terms = Vec::with_capacity(tri.tet_count());
        for (t, mrow) in monos.into_iter().enumerate() {
            let row: [CoordTerm; 6] = std::array::from_fn(|e| {
                let (i, j) = EDGES[e];
                let (class, s) = table.class_of(t, i, j);
                let (ta, ia, ja) = vars.anchors[class];
                let (_, sa) = table.class_of(ta, ia, ja);
                CoordTerm {
                    sign: (s * sa) as i64 * eta(t, i, j) * eta(ta, ia, ja),
                    mono: mrow[e].clone(),
                    class,
                }
            });
            terms.push(row);
        }
        Ok(CoordTable { terms, cusps })
    }

    /// Oriented coordinate c_t(i, j) = −c_t(j, i).
    pub fn get(&self, t: usize, i: usize, j: usize) -> CoordTerm {
        let c = &self.terms[t][edge_index(i, j)];
        if i < j {
            c.clone()
        } else {
            CoordTerm { sign: -c.sign, ..c.clone() }
        }
    }
}

/// Laurent polynomial over (class variables, cusp variables).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct LPoly(BTreeMap<Vec<i32>, Rational>);

impl LPoly {
    fn term(nclasses: usize, c: &CoordTerm) -> Self {
        let mut e = vec![0; nclasses];
        e[c.class] = 1;
        e.extend_from_slice(&c.mono.0);
        LPoly(BTreeMap::from([(e, Rational::from_integer(c.sign.into()))]))
    }

    fn mul(&self, o: &LPoly) -> LPoly {
        let mut out = LPoly::default();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                let e: Vec<i32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    /// Inverse of a single term.
    fn inv_term(&self) -> LPoly {
        assert_eq!(self.0.len(), 1);
        let (e, c) = self.0.iter().next().unwrap();
        LPoly(BTreeMap::from([(e.iter().map(|x| -x).collect(), c.recip())]))
    }

    fn add_term(&mut self, e: Vec<i32>, c: Rational) {
        let slot = self.0.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    fn add(&self, o: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (e, c) in &o.0 {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn from_laurent(nclasses: usize, m: &Laurent) -> LPoly {
        let mut e = vec![0; nclasses];
        e.extend_from_slice(&m.0);
        LPoly(BTreeMap::from([(e, Rational::one())]))
    }

    /// Clears denominators. Variables flagged in `units` (indexed by position) also lose
    /// their positive content; the rest are only shifted up to exponent 0.
    fn clear(&self, ring: &Arc<PolyRing>, units: &[bool]) -> MultiPoly {
        if self.0.is_empty() {
            return MultiPoly::zero(ring);
        }
        let width = self.0.keys().next().unwrap().len();
        let low: Vec<i32> = (0..width)
            .map(|k| {
                let m = self.0.keys().map(|e| e[k]).min().unwrap();
                if units.get(k).copied().unwrap_or(true) {
                    m
                } else {
                    m.min(0)
                }
            })
            .collect();
        let terms = self
            .0
            .iter()
            .map(|(e, c)| {
                let mut x: calg::Exps = e.iter().zip(&low).map(|(a, b)| (a - b) as u32).collect();
                x.push(0);
                (x, c.clone())
            })
            .collect();
        MultiPoly::from_terms(ring, terms)
    }
}

#[derive(Clone, Debug)]
pub struct RelationSet {
    pub mode: Mode,
    /// Ring of all class variables (in `vars.order`), cusp variables (enhanced) and t.
    pub ring: Arc<PolyRing>,
    pub vars: VarSpec,
    pub ptolemy_rels: Vec<MultiPoly>,
    /// (zero-edge class, relation) pairs.
    pub edge_rels: Vec<(usize, MultiPoly)>,
    pub gauge: Vec<usize>,
    pub zero_vars: Vec<usize>,
    pub nonzero_vars: Vec<usize>,
    pub cusps: usize,
}

fn ring_for(vars: &VarSpec, cusps: usize, mode: &Mode) -> Arc<PolyRing> {
    // LPoly exponent layout is (class ids, cusp vars, t); the ring lists them in that layout too
    let mut names: Vec<String> = vars.names.clone();
    if matches!(mode, Mode::Enhanced(_)) {
        names.extend(cusp_var_names(cusps));
    }
    names.push(SATURATION_VAR.into());
    PolyRing::new(&names, MonomialOrder::GrevLex)
}

fn cusp_width(mode: &Mode, cusps: usize) -> usize {
    if matches!(mode, Mode::Enhanced(_)) {
        2 * cusps
    } else {
        0
    }
}

impl CoordTable {
    fn lpoly(&self, nclasses: usize, width: usize, t: usize, i: usize, j: usize) -> LPoly {
        let mut c = self.get(t, i, j);
        c.mono.0.truncate(width);
        LPoly::term(nclasses, &c)
    }
}

/// c03·c12 + c01·c23 − c02·c13 for tet t.
fn ptolemy_lpoly(ct: &CoordTable, n: usize, w: usize, t: usize) -> LPoly {
    let c = |i, j| ct.lpoly(n, w, t, i, j);
    let minus = LPoly(BTreeMap::from([(vec![0; n + w], -Rational::one())]));
    c(0, 3).mul(&c(1, 2)).add(&c(0, 1).mul(&c(2, 3))).add(&minus.mul(&c(0, 2).mul(&c(1, 3))))
}

/// Σ_k c23,k/(c12,k·c13,k)·Π_{j≤k} t_j² around a link.
fn top_sum(ct: &CoordTable, n: usize, w: usize, link: &EdgeLink, dec: Option<&CuspDecoration>) -> LPoly {
    let mut sum = LPoly::default();
    let mut weight = Laurent::one(ct.cusps);
    for (k, step) in link.cycle.iter().enumerate() {
        let p = step.relabel;
        if k > 0 {
            if let Some(d) = dec {
                let tk = d.factor(step.tet, p.apply(3), p.apply(1));
                weight = weight.mul(&tk.pow(2));
            }
        }
        let c = |a: usize, b: usize| ct.lpoly(n, w, step.tet, p.apply(a), p.apply(b));
        let term = c(2, 3).mul(&c(1, 2).mul(&c(1, 3)).inv_term());
        let mut wt = weight.clone();
        wt.0.truncate(w);
        sum = sum.add(&term.mul(&LPoly::from_laurent(n, &wt)));
    }
    sum
}

/// Σ_k c23,k/(c02,k·c03,k)·Π_{j≤k} b_j², the equivalent bottom form.
fn bottom_sum(ct: &CoordTable, n: usize, w: usize, link: &EdgeLink, dec: Option<&CuspDecoration>) -> LPoly {
    let mut sum = LPoly::default();
    let mut weight = Laurent::one(ct.cusps);
    for (k, step) in link.cycle.iter().enumerate() {
        let p = step.relabel;
        if k > 0 {
            if let Some(d) = dec {
                let bk = d.factor(step.tet, p.apply(3), p.apply(0));
                weight = weight.mul(&bk.pow(2));
            }
        }
        let c = |a: usize, b: usize| ct.lpoly(n, w, step.tet, p.apply(a), p.apply(b));
        let term = c(2, 3).mul(&c(0, 2).mul(&c(0, 3)).inv_term());
        let mut wt = weight.clone();
        wt.0.truncate(w);
        sum = sum.add(&term.mul(&LPoly::from_laurent(n, &wt)));
    }
    sum
}

/// Edge relation around `class` in top or bottom form, cleared of denominators.
pub fn edge_relation(
    tri: &Triangulation,
    table: &EdgeTable,
    vars: &VarSpec,
    mode: &Mode,
    class: usize,
    bottom: bool,
) -> Result<MultiPoly> {
    let cusps = tri.cusps().count;
    let ct = CoordTable::new(tri, table, vars, mode)?;
    let ring = ring_for(vars, cusps, mode);
    let (n, w) = (table.classes.len(), cusp_width(mode, cusps));
    let (ta, ia, ja) = vars.anchors[class];
    let link = tri.edge_link_from(class, (ta, ia, ja))?;
    let dec = match mode {
        Mode::Enhanced(d) => Some(d),
        _ => None,
    };
    let s = if bottom { bottom_sum(&ct, n, w, &link, dec) } else { top_sum(&ct, n, w, &link, dec) };
    // class variables may be zero, so only their denominators are cleared
    Ok(s.clear(&ring, &vec![false; n]))
}

/// Nonzero edges forming a spanning tree of the cusps plus one edge closing an odd cycle.
pub fn gauge_graph(tri: &Triangulation, table: &EdgeTable, e: &TransitivePartition) -> Result<Vec<usize>> {
    let cusps = tri.cusps();
    let n = table.classes.len();
    // edges that are rarely zero across partitions are the most stable choice
    let mut zero_count = vec![0usize; n];
    if n <= 16 {
        for p in enumerate_partitions(tri)? {
            if p.classify(tri, table).0 == Degeneracy::Total {
                continue;
            }
            for z in p.zero_ids() {
                zero_count[z] += 1;
            }
        }
    }
    let mut cand: Vec<usize> = (0..n).filter(|&c| !e.is_zero(c)).collect();
    cand.sort_by_key(|&c| (zero_count[c], c));
    let ends = |c: usize| {
        let r = table.classes[c].representative();
        (cusps.vertex_cusp[r.tet][r.i], cusps.vertex_cusp[r.tet][r.j])
    };
    let mut uf = crate::trig::UnionFind::new(cusps.count);
    let mut tree = Vec::new();
    let mut adj = vec![vec![]; cusps.count];
    for &c in &cand {
        let (a, b) = ends(c);
        if uf.find(a) != uf.find(b) {
            uf.union(a, b);
            tree.push(c);
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    if (0..cusps.count).any(|s| uf.find(s) != uf.find(0)) {
        return Err(PtolemyError::Partition("nonzero edges do not connect all cusps".into()));
    }
    // 2-colour the tree; an extra edge with equally coloured ends closes an odd cycle
    let mut colour = vec![usize::MAX; cusps.count];
    colour[0] = 0;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if colour[u] == usize::MAX {
                colour[u] = 1 - colour[v];
                stack.push(u);
            }
        }
    }
    let extra = cand
        .iter()
        .copied()
        .filter(|c| !tree.contains(c))
        .find(|&c| {
            let (a, b) = ends(c);
            colour[a] == colour[b]
        })
        .or_else(|| cand.iter().copied().find(|c| !tree.contains(c)))
        .ok_or_else(|| PtolemyError::Partition("nonzero edges contain no cycle".into()))?;
    tree.push(extra);
    tree.sort_unstable();
    Ok(tree)
}

/// Relations for a non-degenerate or mildly degenerate partition.
pub fn build_relations(
    tri: &Triangulation,
    e: &TransitivePartition,
    vars: &VarSpec,
    mode: Mode,
) -> Result<RelationSet> {
    let table = tri.edge_table()?;
    let (ty, _) = e.classify(tri, &table);
    if !matches!(ty, Degeneracy::NonDegenerate | Degeneracy::Mild) {
        return Err(PtolemyError::Partition(format!("{ty:?} partition must be resolved first")));
    }
    let cusps = tri.cusps().count;
    if let Mode::Enhanced(d) = &mode {
        if d.cusp_count() != cusps {
            return Err(PtolemyError::Decoration("decoration does not match the triangulation".into()));
        }
    }
    if let Mode::Psl(o) = &mode {
        if o.eta.len() != tri.tet_count() {
            return Err(PtolemyError::Malformed("obstruction class does not match the triangulation".into()));
        }
    }
    let ct = CoordTable::new(tri, &table, vars, &mode)?;
    let ring = ring_for(vars, cusps, &mode);
    let (n, w) = (table.classes.len(), cusp_width(&mode, cusps));
    let units: Vec<bool> = (0..n).map(|c| !e.is_zero(c)).collect();
    let ptolemy_rels =
        (0..tri.tet_count()).map(|t| ptolemy_lpoly(&ct, n, w, t).clear(&ring, &units)).collect();
    let dec = match &mode {
        Mode::Enhanced(d) => Some(d),
        _ => None,
    };
    let mut edge_rels = Vec::new();
    for c in e.zero_ids() {
        let link = tri.edge_link_from(c, vars.anchors[c])?;
        edge_rels.push((c, top_sum(&ct, n, w, &link, dec).clear(&ring, &units)));
    }
    let gauge = gauge_graph(tri, &table, e)?;
    Ok(RelationSet {
        mode,
        ring,
        vars: vars.clone(),
        ptolemy_rels,
        edge_rels,
        gauge,
        zero_vars: e.zero_ids(),
        nonzero_vars: (0..n).filter(|&c| !e.is_zero(c)).collect(),
        cusps,
    })
}

impl RelationSet {
    pub fn role(&self, var: &str) -> Option<VariableRole> {
        if var == SATURATION_VAR {
            return Some(VariableRole::AuxSaturation);
        }
        if let Some(c) = self.vars.names.iter().position(|v| v == var) {
            return Some(VariableRole::PtolemyVar(c));
        }
        if matches!(self.mode, Mode::Enhanced(_)) {
            let k = cusp_var_names(self.cusps).iter().position(|v| v == var)?;
            return Some(if k % 2 == 0 { VariableRole::MeridianVar(k / 2) } else { VariableRole::LongitudeVar(k / 2) });
        }
        None
    }

    /// Variables of the assembled ideal, in ring order.
    pub fn ideal_vars(&self, reduced: bool) -> Vec<String> {
        let mut out: Vec<String> = self
            .vars
            .order
            .iter()
            .filter(|&&c| !self.zero_vars.contains(&c) && !(reduced && self.gauge.contains(&c)))
            .map(|&c| self.vars.names[c].clone())
            .collect();
        if matches!(self.mode, Mode::Enhanced(_)) {
            out.extend(cusp_var_names(self.cusps));
        }
        out.push(SATURATION_VAR.into());
        out
    }

    /// Values pinned by the partition and (when reduced) by the gauge.
    pub fn fixed_values(&self, reduced: bool) -> Vec<(String, Rational)> {
        let mut out: Vec<(String, Rational)> =
            self.zero_vars.iter().map(|&c| (self.vars.names[c].clone(), Rational::zero())).collect();
        if reduced {
            out.extend(self.gauge.iter().map(|&c| (self.vars.names[c].clone(), Rational::one())));
        }
        out
    }
}

/// Generators with zero and gauge substitutions plus the saturation generator.
pub fn assemble_ideal(rs: &RelationSet, reduced: bool) -> Result<PolyIdeal> {
    let subs: Vec<(usize, Rational)> = rs
        .fixed_values(reduced)
        .into_iter()
        .map(|(v, q)| (rs.ring.index(&v).unwrap(), q))
        .collect();
    let names = rs.ideal_vars(reduced);
    let target = PolyRing::new(&names, MonomialOrder::GrevLex);
    let mut gens: Vec<MultiPoly> = Vec::new();
    for g in rs.ptolemy_rels.iter().chain(rs.edge_rels.iter().map(|(_, p)| p)) {
        let mut p = g.clone();
        for (v, q) in &subs {
            p = p.substitute_constant(*v, q);
        }
        if p.is_zero() {
            continue;
        }
        let p = p.remove_monomial_content().primitive_integer().to_ring(&target)?;
        if !gens.contains(&p) {
            gens.push(p);
        }
    }
    let mut sat = MultiPoly::one(&target);
    for v in &names {
        sat = &sat * &MultiPoly::var_named(&target, v);
    }
    gens.push(&sat - &MultiPoly::one(&target));
    Ok(PolyIdeal::new(&target, gens)?)
}

/// The edge relation in bottom form, for cross-checking the top form.
pub fn bottom_edge_relation(tri: &Triangulation, vars: &VarSpec, mode: &Mode, class: usize) -> Result<MultiPoly> {
    edge_relation(tri, &tri.edge_table()?, vars, mode, class, true)
}

