//! Representations recovered from Ptolemy points through Bruhat cocycles.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use calg::{
    AlgebraicPoint, GroebnerBasis, MultiPoly, NfElem, QrElem, QuotientRing, Rational, Scalar,
};
use num_traits::One;
use serde::Serialize;

use crate::decoration::{cusp_var_names, Laurent};
use crate::error::{PtolemyError, Result};
use crate::ideals::{CoordTable, Mode, RelationSet, SATURATION_VAR};
use crate::trig::{EdgeTable, Triangulation, UnionFind};

/// A 2×2 matrix over a scalar ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<S>(pub [[S; 2]; 2]);

impl<S: Scalar> Mat2<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity(like: &S) -> Self {
        Mat2::new(like.one_like(), like.zero_like(), like.zero_like(), like.one_like())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = &self.0;
        let n = &o.0;
        let e = |i: usize, j: usize| m[i][0].mul(&n[0][j]).add(&m[i][1].mul(&n[1][j]));
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn det(&self) -> S {
        let m = &self.0;
        m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]))
    }

    pub fn trace(&self) -> S {
        self.0[0][0].add(&self.0[1][1])
    }

    /// Adjugate; the inverse for determinant-one matrices.
    pub fn inv(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[1][1].clone(), m[0][1].neg(), m[1][0].neg(), m[0][0].clone())
    }

    pub fn neg(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].neg(), m[0][1].neg(), m[1][0].neg(), m[1][1].neg())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.0[0][0])
    }

    /// +1 for I, −1 for −I, 0 otherwise.
    pub fn scalar_sign(&self) -> i8 {
        if self.is_identity() {
            1
        } else if self.neg().is_identity() {
            -1
        } else {
            0
        }
    }

    pub fn kind(&self) -> LabelKind {
        let m = &self.0;
        if m[0][1].is_zero() && m[1][0].is_zero() {
            if m[0][0] == m[1][1] && m[0][0].is_one() {
                LabelKind::Unipotent
            } else {
                LabelKind::Diagonal
            }
        } else if m[0][0].is_zero() && m[1][1].is_zero() {
            LabelKind::CounterDiagonal
        } else if m[1][0].is_zero() && m[0][0].is_one() && m[1][1].is_one() {
            LabelKind::Unipotent
        } else {
            LabelKind::Other
        }
    }
}

impl<S: Scalar> fmt::Display for Mat2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LabelKind {
    CounterDiagonal,
    Diagonal,
    Unipotent,
    Other,
}

/// An invertible scalar together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Unit<S> {
    pub val: S,
    pub inv: S,
}

impl<S: Scalar> Unit<S> {
    pub fn one(like: &S) -> Self {
        Unit { val: like.one_like(), inv: like.one_like() }
    }

    pub fn from_rational(like: &S, q: Rational) -> Self {
        Unit { val: like.from_rational_like(q.clone()), inv: like.from_rational_like(q.recip()) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Unit { val: self.val.mul(&o.val), inv: self.inv.mul(&o.inv) }
    }

    pub fn inv(&self) -> Self {
        Unit { val: self.inv.clone(), inv: self.val.clone() }
    }

    pub fn neg(&self) -> Self {
        Unit { val: self.val.neg(), inv: self.inv.neg() }
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Unit::one(&self.val);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

/// x(a) = [[1, a], [0, 1]].
pub fn x_mat<S: Scalar>(a: &S) -> Mat2<S> {
    Mat2::new(a.one_like(), a.clone(), a.zero_like(), a.one_like())
}

/// q(b) = [[0, −1/b], [b, 0]].
pub fn q_mat<S: Scalar>(b: &Unit<S>) -> Mat2<S> {
    Mat2::new(b.val.zero_like(), b.inv.neg(), b.val.clone(), b.val.zero_like())
}

/// d(b) = [[b, 0], [0, 1/b]].
pub fn d_mat<S: Scalar>(b: &Unit<S>) -> Mat2<S> {
    Mat2::new(b.val.clone(), b.val.zero_like(), b.val.zero_like(), b.inv.clone())
}

/// Values of the class variables (None for zero-edges) and cusp variables at a point.
#[derive(Clone, Debug)]
pub struct PointEnv<S> {
    pub classes: Vec<Option<Unit<S>>>,
    /// m_0, l_0, m_1, l_1, ... (all one outside enhanced mode).
    pub cusp: Vec<Unit<S>>,
    pub one: S,
}

impl<S: Scalar> PointEnv<S> {
    pub fn monomial(&self, m: &Laurent) -> Unit<S> {
        let mut acc = Unit::one(&self.one);
        for (k, &e) in m.0.iter().enumerate() {
            if e != 0 {
                acc = acc.mul(&self.cusp[k].pow(e));
            }
        }
        acc
    }

    /// Rescales by a diagonal action: class with anchor ends on cusps s, s' gets d_s·d_s'.
    pub fn diagonal_action(&self, ends: &[(usize, usize)], d: &[Rational]) -> Self {
        let classes = self
            .classes
            .iter()
            .zip(ends)
            .map(|(v, &(a, b))| {
                v.as_ref().map(|u| u.mul(&Unit::from_rational(&self.one, &d[a] * &d[b])))
            })
            .collect();
        PointEnv { classes, cusp: self.cusp.clone(), one: self.one.clone() }
    }
}

impl PointEnv<NfElem> {
    /// Environment of a solved point; fixed (zero and gauge) values come from `rs`.
    pub fn from_point(rs: &RelationSet, reduced: bool, p: &AlgebraicPoint) -> Result<Self> {
        let field = &p.field;
        let one = NfElem::from_int(field, 1);
        let fixed: BTreeMap<String, Rational> = rs.fixed_values(reduced).into_iter().collect();
        let unit = |name: &str| -> Result<Option<Unit<NfElem>>> {
            let v = match fixed.get(name) {
                Some(q) => NfElem::from_rational(field, q.clone()),
                None => p
                    .get(name)
                    .cloned()
                    .ok_or_else(|| PtolemyError::Representation(format!("point lacks {name}")))?,
            };
            Ok(v.inv().map(|inv| Unit { val: v, inv }))
        };
        let mut classes = Vec::new();
        for (c, name) in rs.vars.names.iter().enumerate() {
            let u = unit(name)?;
            if u.is_none() && !rs.zero_vars.contains(&c) {
                return Err(PtolemyError::Representation(format!("{name} vanishes")));
            }
            classes.push(u);
        }
        let cusp = if matches!(rs.mode, Mode::Enhanced(_)) {
            cusp_var_names(rs.cusps)
                .iter()
                .map(|n| {
                    unit(n)?.ok_or_else(|| PtolemyError::Representation(format!("{n} vanishes")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            vec![Unit::one(&one); 2 * rs.cusps]
        };
        Ok(PointEnv { classes, cusp, one })
    }
}

impl PointEnv<QrElem> {
    /// Generic point of the quotient by a Groebner basis of the assembled ideal.
    pub fn tautological(rs: &RelationSet, reduced: bool, gb: GroebnerBasis) -> Result<Self> {
        let ring = gb.ring().clone();
        let qr = QuotientRing::new(gb);
        let one = QrElem::from_rational(&qr, Rational::one());
        let fixed: BTreeMap<String, Rational> = rs.fixed_values(reduced).into_iter().collect();
        let others: Vec<&String> = ring.vars.iter().filter(|v| *v != SATURATION_VAR).collect();
        // the saturation generator makes t·Π(others) = 1
        let unit = |name: &str| -> Unit<QrElem> {
            if let Some(q) = fixed.get(name) {
                return Unit::from_rational(&one, q.clone());
            }
            let mut inv = MultiPoly::var_named(&ring, SATURATION_VAR);
            for o in others.iter().filter(|o| **o != name) {
                inv = &inv * &MultiPoly::var_named(&ring, o);
            }
            Unit { val: QrElem::var(&qr, name), inv: QrElem::new(&qr, &inv) }
        };
        let classes = rs
            .vars
            .names
            .iter()
            .enumerate()
            .map(|(c, n)| if rs.zero_vars.contains(&c) { None } else { Some(unit(n)) })
            .collect();
        let cusp = if matches!(rs.mode, Mode::Enhanced(_)) {
            cusp_var_names(rs.cusps).iter().map(|n| unit(n)).collect()
        } else {
            vec![Unit::one(&one); 2 * rs.cusps]
        };
        Ok(PointEnv { classes, cusp, one })
    }

    pub fn quotient(&self) -> &Arc<QuotientRing> {
        self.one.ring()
    }
}

/// Labels of long (α) and short (β) edges of every truncated tetrahedron.
#[derive(Clone, Debug)]
pub struct BruhatLabel<S> {
    /// alpha[t][i][j], i ≠ j.
    pub alpha: Vec<[[Option<Mat2<S>>; 4]; 4]>,
    /// beta[t][k][i][j]: short edge near vertex k parallel to i→j.
    pub beta: Vec<[[[Option<Mat2<S>>; 4]; 4]; 4]>,
    /// Gauge equations for short edges near zero-edges that failed to close.
    pub inconsistent: usize,
}

struct Ctx<'a, S> {
    ct: CoordTable,
    env: &'a PointEnv<S>,
    mode: &'a Mode,
}

impl<S: Scalar> Ctx<'_, S> {
    fn c(&self, t: usize, i: usize, j: usize) -> Option<Unit<S>> {
        let term = self.ct.get(t, i, j);
        let x = self.env.classes[term.class].as_ref()?;
        let u = x.mul(&self.env.monomial(&term.mono));
        Some(if term.sign < 0 { u.neg() } else { u })
    }

    /// h(v) for the gluing of face f of tet t.
    fn h(&self, t: usize, f: usize, v: usize) -> Unit<S> {
        match self.mode {
            Mode::Enhanced(d) => self.env.monomial(&d.factor(t, f, v)),
            _ => Unit::one(&self.env.one),
        }
    }
}

fn others(a: usize, b: usize) -> (usize, usize) {
    crate::perm::complement(a, b)
}

/// Unknown short edge β^a_{bc} of tet t, where ab is a zero-edge.
type Slot = (usize, usize, usize, usize);

/// s_A = κ·s_B + γ
struct Equation<S> {
    a: Slot,
    b: Slot,
    kappa: Unit<S>,
    gamma: S,
}

pub fn bruhat_labels<S: Scalar>(
    tri: &Triangulation,
    rs: &RelationSet,
    env: &PointEnv<S>,
) -> Result<BruhatLabel<S>> {
    let table = tri.edge_table()?;
    let ct = CoordTable::new(tri, &table, &rs.vars, &rs.mode)?;
    let cx = Ctx { ct, env, mode: &rs.mode };
    let n = tri.tet_count();
    let one = &env.one;
    let mut alpha: Vec<[[Option<Mat2<S>>; 4]; 4]> = vec![Default::default(); n];
    let mut beta: Vec<[[[Option<Mat2<S>>; 4]; 4]; 4]> = vec![Default::default(); n];
    for t in 0..n {
        for i in 0..4 {
            for j in (0..4).filter(|&j| j != i) {
                alpha[t][i][j] = match cx.c(t, i, j) {
                    Some(c) => Some(q_mat(&c)),
                    None => {
                        let (k, l) = others(i, j);
                        let pick = [k, l].into_iter().find_map(|k| Some((cx.c(t, i, k)?, cx.c(t, k, j)?)));
                        let (cik, ckj) = pick.ok_or_else(|| {
                            PtolemyError::Representation(format!("tet {t}: degenerate face at edge {i}{j}"))
                        })?;
                        Some(d_mat(&cik.inv().mul(&ckj)).neg())
                    }
                };
                for k in (0..4).filter(|&k| k != i && k != j) {
                    if let (Some(cik), Some(ckj)) = (cx.c(t, i, k), cx.c(t, k, j)) {
                        let a = match cx.c(t, i, j) {
                            Some(cij) => cij.val.mul(&cik.inv).mul(&ckj.inv),
                            None => one.zero_like(),
                        };
                        // β^k_ij sits near vertex k, between the long edges k→i and k→j
                        beta[t][k][i][j] = Some(x_mat(&a));
                    }
                }
            }
        }
    }
    // short edges next to zero-edges: a linear gauge problem
    let zero = |t: usize, a: usize, b: usize| cx.c(t, a, b).is_none();
    let param = |m: &Mat2<S>| m.0[0][1].clone();
    let mut eqs: Vec<Equation<S>> = Vec::new();
    let mut slots: Vec<Slot> = Vec::new();
    for t in 0..n {
        for a in 0..4 {
            for b in (0..4).filter(|&b| b != a && zero(t, a, b)) {
                let (c, d) = others(a, b);
                slots.push((t, a, b, c));
                slots.push((t, a, b, d));
                // triangle at a: β^a_bc β^a_cd β^a_db = I
                let k = param(beta[t][a][c][d].as_ref().unwrap());
                eqs.push(Equation { a: (t, a, b, c), b: (t, a, b, d), kappa: Unit::one(one), gamma: k.neg() });
                for c in [c, d] {
                    // hexagon on face abc: s(t,a,b,c) = s(t,b,a,c)/v², v = c_ca/c_bc
                    let v = cx.c(t, c, a).unwrap().mul(&cx.c(t, b, c).unwrap().inv());
                    eqs.push(Equation {
                        a: (t, a, b, c),
                        b: (t, b, a, c),
                        kappa: v.pow(-2),
                        gamma: one.zero_like(),
                    });
                    // across the face opposite the fourth vertex
                    let f = 6 - a - b - c;
                    let g = tri.gluing(t, f);
                    let p = |x: usize| g.perm.apply(x);
                    eqs.push(Equation {
                        a: (t, a, b, c),
                        b: (g.tet, p(a), p(b), p(c)),
                        kappa: cx.h(t, f, a).pow(-2),
                        gamma: one.zero_like(),
                    });
                }
            }
        }
    }
    let index: BTreeMap<Slot, usize> = slots.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut adj: Vec<Vec<usize>> = vec![vec![]; slots.len()];
    for (e, q) in eqs.iter().enumerate() {
        adj[index[&q.a]].push(e);
        adj[index[&q.b]].push(e);
    }
    let mut value: Vec<Option<S>> = vec![None; slots.len()];
    for root in 0..slots.len() {
        if value[root].is_some() {
            continue;
        }
        value[root] = Some(one.zero_like());
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &e in &adj[u] {
                let q = &eqs[e];
                let (ia, ib) = (index[&q.a], index[&q.b]);
                if value[ia].is_none() {
                    value[ia] = Some(q.kappa.val.mul(value[ib].as_ref().unwrap()).add(&q.gamma));
                    queue.push_back(ia);
                } else if value[ib].is_none() {
                    let s = value[ia].as_ref().unwrap().sub(&q.gamma);
                    value[ib] = Some(q.kappa.inv.mul(&s));
                    queue.push_back(ib);
                }
            }
        }
    }
    let inconsistent = eqs
        .iter()
        .filter(|q| {
            let (sa, sb) = (value[index[&q.a]].as_ref().unwrap(), value[index[&q.b]].as_ref().unwrap());
            *sa != q.kappa.val.mul(sb).add(&q.gamma)
        })
        .count();
    for (i, &(t, a, b, c)) in slots.iter().enumerate() {
        let s = value[i].as_ref().unwrap();
        beta[t][a][b][c] = Some(x_mat(s));
        beta[t][a][c][b] = Some(x_mat(&s.neg()));
    }
    Ok(BruhatLabel { alpha, beta, inconsistent })
}

/// Outcome of checking every triangle and hexagon of every truncated tetrahedron.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FaceCheck {
    pub triangles: usize,
    pub hexagons: usize,
    pub failures: Vec<String>,
    pub determinant_failures: usize,
    pub inversion_failures: usize,
}

impl FaceCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.determinant_failures == 0 && self.inversion_failures == 0
    }
}

impl<S: Scalar> BruhatLabel<S> {
    pub fn long(&self, t: usize, i: usize, j: usize) -> &Mat2<S> {
        self.alpha[t][i][j].as_ref().expect("long edge labelled")
    }

    pub fn short(&self, t: usize, k: usize, i: usize, j: usize) -> &Mat2<S> {
        self.beta[t][k][i][j].as_ref().expect("short edge labelled")
    }

    /// Products around all faces, determinants, and edge-flip inversion.
    pub fn check_faces(&self) -> FaceCheck {
        let mut out = FaceCheck::default();
        for t in 0..self.alpha.len() {
            for i in 0..4 {
                for j in (0..4).filter(|&j| j != i) {
                    let a = self.long(t, i, j);
                    if !a.det().is_one() {
                        out.determinant_failures += 1;
                    }
                    if !a.mul(self.long(t, j, i)).is_identity() {
                        out.inversion_failures += 1;
                    }
                    for k in (0..4).filter(|&k| k != i && k != j) {
                        let b = self.short(t, k, i, j);
                        if !b.det().is_one() {
                            out.determinant_failures += 1;
                        }
                        if !b.mul(self.short(t, k, j, i)).is_identity() {
                            out.inversion_failures += 1;
                        }
                    }
                }
            }
            for k in 0..4 {
                let w: Vec<usize> = (0..4).filter(|&x| x != k).collect();
                let p = self.short(t, k, w[0], w[1]).mul(self.short(t, k, w[1], w[2])).mul(self.short(t, k, w[2], w[0]));
                out.triangles += 1;
                if !p.is_identity() {
                    out.failures.push(format!("triangle tet {t} vertex {k}"));
                }
            }
            for f in 0..4 {
                let [a, b, c] = crate::perm::face_vertices(f);
                let p = self
                    .long(t, a, b)
                    .mul(self.short(t, b, a, c))
                    .mul(self.long(t, b, c))
                    .mul(self.short(t, c, b, a))
                    .mul(self.long(t, c, a))
                    .mul(self.short(t, a, c, b));
                out.hexagons += 1;
                if !p.is_identity() {
                    out.failures.push(format!("hexagon tet {t} face {f}"));
                }
            }
        }
        out
    }
}

/// Vertex (t, k, e) of the truncated complex: near ideal vertex k on the long edge k→e.
pub type TVertex = (usize, usize, usize);

/// Classes of truncated vertices under the face gluings.
pub struct VertexClasses {
    uf: std::cell::RefCell<UnionFind>,
}

impl VertexClasses {
    pub fn new(tri: &Triangulation) -> Self {
        let n = tri.tet_count();
        let mut uf = UnionFind::new(16 * n);
        for t in 0..n {
            for f in 0..4 {
                let g = tri.gluing(t, f);
                for k in (0..4).filter(|&k| k != f) {
                    for e in (0..4).filter(|&e| e != f && e != k) {
                        uf.union(Self::id((t, k, e)), Self::id((g.tet, g.perm.apply(k), g.perm.apply(e))));
                    }
                }
            }
        }
        VertexClasses { uf: std::cell::RefCell::new(uf) }
    }

    fn id(v: TVertex) -> usize {
        16 * v.0 + 4 * v.1 + v.2
    }

    pub fn same(&self, a: TVertex, b: TVertex) -> bool {
        let mut uf = self.uf.borrow_mut();
        uf.find(Self::id(a)) == uf.find(Self::id(b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathToken {
    Long { tet: usize, i: usize, j: usize },
    Short { tet: usize, k: usize, i: usize, j: usize },
    /// Diagonal label d(m_s) or d(l_s).
    Meridian(usize),
    Longitude(usize),
    /// Face-pairing edge at vertex v leaving face f of tet t.
    FacePairing { tet: usize, face: usize, vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePath {
    pub tokens: Vec<(PathToken, bool)>,
}

fn digit(c: Option<char>, what: &str) -> Result<usize> {
    c.and_then(|c| c.to_digit(10)).map(|d| d as usize).ok_or_else(|| PtolemyError::Path(format!("expected {what}")))
}

impl EdgePath {
    /// Tokens separated by whitespace: `A03@0`, `B0:23@1`, `M`, `L`, `M1`, `P0.2.3`,
    /// each optionally followed by `^-1`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        for raw in s.split_whitespace() {
            let (body, inv) = match raw.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (raw, false),
            };
            let bad = || PtolemyError::Path(format!("bad token {raw:?}"));
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
            let tok = if let Some(rest) = body.strip_prefix('A') {
                let (e, t) = rest.split_once('@').ok_or_else(bad)?;
                let mut ch = e.chars();
                let (i, j) = (digit(ch.next(), "vertex")?, digit(ch.next(), "vertex")?);
                if ch.next().is_some() || i == j || i > 3 || j > 3 {
                    return Err(bad());
                }
                PathToken::Long { tet: num(t)?, i, j }
            } else if let Some(rest) = body.strip_prefix('B') {
                let (kij, t) = rest.split_once('@').ok_or_else(bad)?;
                let (k, ij) = kij.split_once(':').ok_or_else(bad)?;
                let mut ch = ij.chars();
                let (i, j) = (digit(ch.next(), "vertex")?, digit(ch.next(), "vertex")?);
                let k = num(k)?;
                if ch.next().is_some() || i == j || k == i || k == j || i > 3 || j > 3 || k > 3 {
                    return Err(bad());
                }
                PathToken::Short { tet: num(t)?, k, i, j }
            } else if let Some(rest) = body.strip_prefix('M') {
                PathToken::Meridian(if rest.is_empty() { 0 } else { num(rest)? })
            } else if let Some(rest) = body.strip_prefix('L') {
                PathToken::Longitude(if rest.is_empty() { 0 } else { num(rest)? })
            } else if let Some(rest) = body.strip_prefix('P') {
                let parts: Vec<&str> = rest.split('.').collect();
                if parts.len() != 3 {
                    return Err(bad());
                }
                let (tet, face, vertex) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
                if face > 3 || vertex > 3 || face == vertex {
                    return Err(bad());
                }
                PathToken::FacePairing { tet, face, vertex }
            } else {
                return Err(bad());
            };
            tokens.push((tok, inv));
        }
        if tokens.is_empty() {
            return Err(PtolemyError::Path("empty path".into()));
        }
        Ok(EdgePath { tokens })
    }

    /// Start and end vertices of an oriented token; None for labels that stay put.
    fn ends(tok: &PathToken, inv: bool) -> Option<(TVertex, TVertex)> {
        let (a, b) = match *tok {
            PathToken::Long { tet, i, j } => ((tet, i, j), (tet, j, i)),
            PathToken::Short { tet, k, i, j } => ((tet, k, i), (tet, k, j)),
            _ => return None,
        };
        Some(if inv { (b, a) } else { (a, b) })
    }

    /// Checks incidence of consecutive tokens and returns (start, end) vertices.
    pub fn check(&self, tri: &Triangulation, vc: &VertexClasses) -> Result<(TVertex, TVertex)> {
        let mut start = None;
        let mut cur: Option<TVertex> = None;
        for (k, (tok, inv)) in self.tokens.iter().enumerate() {
            let tet = match *tok {
                PathToken::Long { tet, .. } | PathToken::Short { tet, .. } | PathToken::FacePairing { tet, .. } => {
                    Some(tet)
                }
                _ => None,
            };
            if tet.is_some_and(|t| t >= tri.tet_count()) {
                return Err(PtolemyError::Path(format!("token {k}: no such tetrahedron")));
            }
            if let Some((a, b)) = Self::ends(tok, *inv) {
                if let Some(c) = cur {
                    if !vc.same(c, a) {
                        return Err(PtolemyError::Path(format!("token {k} does not start where token {} ends", k - 1)));
                    }
                }
                start.get_or_insert(a);
                cur = Some(b);
            }
        }
        match (start, cur) {
            (Some(s), Some(e)) => Ok((s, e)),
            _ => Err(PtolemyError::Path("path has no edges".into())),
        }
    }

    pub fn evaluate<S: Scalar>(&self, labels: &BruhatLabel<S>, rs: &RelationSet, env: &PointEnv<S>) -> Result<Mat2<S>> {
        let mut acc = Mat2::identity(&env.one);
        let cusp_unit = |s: usize, k: usize| -> Result<Unit<S>> {
            env.cusp.get(2 * s + k).cloned().ok_or_else(|| PtolemyError::Path(format!("no cusp {s}")))
        };
        for (tok, inv) in &self.tokens {
            let m = match *tok {
                PathToken::Long { tet, i, j } => labels.long(tet, i, j).clone(),
                PathToken::Short { tet, k, i, j } => labels.short(tet, k, i, j).clone(),
                PathToken::Meridian(s) => d_mat(&cusp_unit(s, 0)?),
                PathToken::Longitude(s) => d_mat(&cusp_unit(s, 1)?),
                PathToken::FacePairing { tet, face, vertex } => match &rs.mode {
                    Mode::Enhanced(d) => d_mat(&env.monomial(&d.factor(tet, face, vertex)).inv()),
                    _ => Mat2::identity(&env.one),
                },
            };
            acc = acc.mul(&if *inv { m.inv() } else { m });
        }
        Ok(acc)
    }
}

/// A word in named generators: (name, exponent ±1).
pub type Word = Vec<(String, i32)>;

/// Parses "c d^-1 a^-1"; when every generator name is one character, "cd^-1a^-1" works too.
pub fn parse_word(s: &str, names: &[String]) -> Result<Word> {
    let mut out = Vec::new();
    let single = names.iter().all(|n| n.chars().count() == 1);
    for tok in s.split_whitespace() {
        let pieces: Vec<String> = if names.iter().any(|n| tok.trim_end_matches("^-1") == n) || !single {
            vec![tok.to_string()]
        } else {
            let mut v: Vec<String> = Vec::new();
            let mut rest = tok;
            while !rest.is_empty() {
                let c = rest.chars().next().unwrap();
                rest = &rest[c.len_utf8()..];
                let mut p = c.to_string();
                if let Some(r) = rest.strip_prefix("^-1") {
                    p.push_str("^-1");
                    rest = r;
                }
                v.push(p);
            }
            v
        };
        for p in pieces {
            let (name, e) = match p.strip_suffix("^-1") {
                Some(n) => (n.to_string(), -1),
                None => (p.clone(), 1),
            };
            if !names.contains(&name) {
                return Err(PtolemyError::Path(format!("unknown generator {name:?}")));
            }
            out.push((name, e));
        }
    }
    Ok(out)
}

pub fn word_to_string(w: &Word) -> String {
    w.iter()
        .map(|(n, e)| if *e < 0 { format!("{n}^-1") } else { n.clone() })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Face-pairing presentation: dual spanning tree from tet 0, one generator per other face class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    /// Face class of each generator, oriented from its first member.
    pub generator_faces: Vec<usize>,
    pub tree_faces: Vec<usize>,
    /// One relator per edge class, read around the edge link.
    pub relators: Vec<Word>,
}

pub fn presentation(tri: &Triangulation, table: &EdgeTable) -> Result<Presentation> {
    let (faces, face_of) = tri.face_classes();
    let n = tri.tet_count();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        for f in 0..4 {
            let g = tri.gluing(t, f);
            if !seen[g.tet] {
                seen[g.tet] = true;
                tree.push(face_of[t][f]);
                queue.push_back(g.tet);
            }
        }
    }
    let gens: Vec<usize> = faces.iter().map(|c| c.id).filter(|id| !tree.contains(id)).collect();
    let mut names: Vec<String> = Vec::new();
    for &id in &gens {
        let (t, f) = faces[id].members[0];
        let mut name = tri.label(t, f).to_string();
        if names.contains(&name) {
            name = format!("{name}_{id}");
        }
        names.push(name);
    }
    let mut relators = Vec::new();
    for class in &table.classes {
        let link = tri.edge_link(class)?;
        let mut w = Word::new();
        for step in &link.cycle {
            let f = step.relabel.apply(2);
            let id = face_of[step.tet][f];
            if let Some(g) = gens.iter().position(|&x| x == id) {
                let e = if faces[id].members[0] == (step.tet, f) { 1 } else { -1 };
                w.push((names[g].clone(), e));
            }
        }
        relators.push(w);
    }
    Ok(Presentation { generators: names, generator_faces: gens, tree_faces: tree, relators })
}

/// Generator matrices together with the data needed to verify them.
#[derive(Clone, Debug)]
pub struct Representation<S> {
    pub mode: &'static str,
    pub generators: Vec<(String, Mat2<S>)>,
    pub relators: Vec<Word>,
    /// (name, word) per peripheral curve.
    pub peripherals: Vec<(String, Word)>,
}

impl<S: Scalar> Representation<S> {
    pub fn image(&self, w: &Word, one: &S) -> Mat2<S> {
        let mut acc = Mat2::identity(one);
        for (name, e) in w {
            let m = &self.generators.iter().find(|(n, _)| n == name).expect("known generator").1;
            acc = acc.mul(&if *e < 0 { m.inv() } else { m.clone() });
        }
        acc
    }

    pub fn generator(&self, name: &str) -> Option<&Mat2<S>> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }
}

/// Matrix along a path inside tet t from (t,0,1) to (t,k,e).
fn frame<S: Scalar>(l: &BruhatLabel<S>, t: usize, k: usize, e: usize, one: &S) -> Mat2<S> {
    let mut m = Mat2::identity(one);
    if k == 0 {
        if e != 1 {
            m = l.short(t, 0, 1, e).clone();
        }
        return m;
    }
    if k != 1 {
        m = l.short(t, 0, 1, k).clone();
    }
    m = m.mul(l.long(t, 0, k));
    if e != 0 {
        m = m.mul(l.short(t, k, 0, e));
    }
    m
}

/// Representation on the face-pairing presentation of `pres`.
pub fn automatic_representation<S: Scalar>(
    tri: &Triangulation,
    rs: &RelationSet,
    env: &PointEnv<S>,
    labels: &BruhatLabel<S>,
    pres: &Presentation,
) -> Result<Representation<S>> {
    let (faces, face_of) = tri.face_classes();
    let one = &env.one;
    let table = tri.edge_table()?;
    let ct = CoordTable::new(tri, &table, &rs.vars, &rs.mode)?;
    let cx = Ctx { ct, env, mode: &rs.mode };
    // transition from tet t through face f
    let transition = |t: usize, f: usize| -> Mat2<S> {
        let g = tri.gluing(t, f);
        let w: Vec<usize> = (0..4).filter(|&x| x != f).collect();
        let (k, e) = (w[0], w[1]);
        let d = d_mat(&cx.h(t, f, k).inv());
        frame(labels, t, k, e, one)
            .mul(&d)
            .mul(&frame(labels, g.tet, g.perm.apply(k), g.perm.apply(e), one).inv())
    };
    let n = tri.tet_count();
    let mut w: Vec<Option<Mat2<S>>> = vec![None; n];
    w[0] = Some(Mat2::identity(one));
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        for f in 0..4 {
            let g = tri.gluing(t, f);
            let id = face_of[t][f];
            if pres.tree_faces.contains(&id) && w[g.tet].is_none() {
                w[g.tet] = Some(w[t].as_ref().unwrap().mul(&transition(t, f)));
                queue.push_back(g.tet);
            }
        }
    }
    let mut generators = Vec::new();
    for (name, &id) in pres.generators.iter().zip(&pres.generator_faces) {
        let (t, f) = faces[id].members[0];
        let t2 = tri.gluing(t, f).tet;
        let m = w[t].as_ref().unwrap().mul(&transition(t, f)).mul(&w[t2].as_ref().unwrap().inv());
        generators.push((name.clone(), m));
    }
    Ok(Representation { mode: rs.mode.name(), generators, relators: pres.relators.clone(), peripherals: vec![] })
}

/// Representation from user-supplied generator paths; all paths must share a base vertex class.
pub fn path_representation<S: Scalar>(
    tri: &Triangulation,
    rs: &RelationSet,
    env: &PointEnv<S>,
    labels: &BruhatLabel<S>,
    paths: &BTreeMap<String, String>,
) -> Result<Representation<S>> {
    let vc = VertexClasses::new(tri);
    let mut base: Option<TVertex> = None;
    let mut generators = Vec::new();
    for (name, text) in paths {
        let p = EdgePath::parse(text)?;
        let (s, e) = p.check(tri, &vc)?;
        if !vc.same(s, e) {
            return Err(PtolemyError::Path(format!("path {name} is not closed")));
        }
        match base {
            None => base = Some(s),
            Some(b) if !vc.same(b, s) => {
                return Err(PtolemyError::Path(format!("path {name} starts at a different base point")))
            }
            _ => {}
        }
        generators.push((name.clone(), p.evaluate(labels, rs, env)?));
    }
    Ok(Representation { mode: rs.mode.name(), generators, relators: vec![], peripherals: vec![] })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelatorCheck {
    pub word: String,
    pub image: String,
    /// +1 for I, −1 for −I, 0 otherwise.
    pub sign: i8,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeripheralCheck {
    pub name: String,
    pub word: String,
    pub image: String,
    pub trace: String,
    /// "identity", "minus_identity", "parabolic", "borel" or "other".
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub relators: Vec<RelatorCheck>,
    pub peripherals: Vec<PeripheralCheck>,
    pub determinants_ok: bool,
    /// Some peripheral image differs from ±I.
    pub boundary_nondegenerate: bool,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.determinants_ok && self.relators.iter().all(|r| r.ok)
    }
}

pub fn verify_representation<S: Scalar>(rep: &Representation<S>, one: &S) -> VerificationReport {
    let psl = rep.mode == "psl2";
    let relators = rep
        .relators
        .iter()
        .map(|w| {
            let m = rep.image(w, one);
            let sign = m.scalar_sign();
            RelatorCheck { word: word_to_string(w), image: m.to_string(), sign, ok: sign == 1 || (psl && sign == -1) }
        })
        .collect();
    let peripherals: Vec<PeripheralCheck> = rep
        .peripherals
        .iter()
        .map(|(name, w)| {
            let m = rep.image(w, one);
            let kind = match m.scalar_sign() {
                1 => "identity",
                -1 => "minus_identity",
                _ if m.0[1][0].is_zero() => {
                    let tr = m.trace();
                    let two = one.from_rational_like(Rational::from_integer(2.into()));
                    if tr == two || tr == two.neg() {
                        "parabolic"
                    } else {
                        "borel"
                    }
                }
                _ => "other",
            };
            PeripheralCheck {
                name: name.clone(),
                word: word_to_string(w),
                image: m.to_string(),
                trace: m.trace().to_string(),
                kind: kind.into(),
            }
        })
        .collect();
    let boundary_nondegenerate = peripherals.iter().any(|p| p.kind != "identity" && p.kind != "minus_identity");
    VerificationReport {
        relators,
        peripherals,
        determinants_ok: rep.generators.iter().all(|(_, m)| m.det().is_one()),
        boundary_nondegenerate,
    }
}

/// Everything recovered from one point.
#[derive(Clone, Debug)]
pub struct Recovery<S> {
    pub labels: BruhatLabel<S>,
    pub faces: FaceCheck,
    pub automatic: Representation<S>,
    pub automatic_report: VerificationReport,
    /// Present when the document supplies generator paths.
    pub supplied: Option<Representation<S>>,
    pub supplied_report: Option<VerificationReport>,
}

/// Labels, both presentations and their verification for one point.
pub fn recover<S: Scalar>(
    doc: &crate::doc::ManifoldDoc,
    tri: &Triangulation,
    rs: &RelationSet,
    env: &PointEnv<S>,
) -> Result<Recovery<S>> {
    let table = tri.edge_table()?;
    let labels = bruhat_labels(tri, rs, env)?;
    let faces = labels.check_faces();
    let pres = presentation(tri, &table)?;
    let mut automatic = automatic_representation(tri, rs, env, &labels, &pres)?;
    // supplied paths refer to the original triangulation only
    let paths = doc.generator_paths.as_ref().filter(|_| doc.tri == *tri);
    let supplied = match paths {
        Some(p) => Some(path_representation(tri, rs, env, &labels, p)?),
        None => None,
    };
    let target = supplied.as_ref().map(|r| r.names()).unwrap_or_else(|| automatic.names());
    let mut extra_relators = Vec::new();
    if let Some(rels) = &doc.relators {
        for r in rels {
            extra_relators.push(parse_word(r, &target)?);
        }
    }
    let mut peripherals = Vec::new();
    if let Some(pw) = &doc.peripheral_words {
        for (s, p) in pw.iter().enumerate() {
            let suffix = if pw.len() == 1 { String::new() } else { s.to_string() };
            peripherals.push((format!("meridian{suffix}"), parse_word(&p.meridian, &target)?));
            peripherals.push((format!("longitude{suffix}"), parse_word(&p.longitude, &target)?));
        }
    }
    let supplied = supplied.map(|mut r| {
        r.relators = extra_relators.clone();
        r.peripherals = peripherals.clone();
        r
    });
    if supplied.is_none() {
        automatic.relators.extend(extra_relators);
        automatic.peripherals = peripherals;
    }
    let automatic_report = verify_representation(&automatic, &env.one);
    let supplied_report = supplied.as_ref().map(|r| verify_representation(r, &env.one));
    Ok(Recovery { labels, faces, automatic, automatic_report, supplied, supplied_report })
}

/// Cusps at the two ends of each class anchor, for the diagonal action.
pub fn anchor_cusps(tri: &Triangulation, rs: &RelationSet) -> Vec<(usize, usize)> {
    let cusps = tri.cusps();
    rs.vars
        .anchors
        .iter()
        .map(|&(t, i, j)| (cusps.vertex_cusp[t][i], cusps.vertex_cusp[t][j]))
        .collect()
}

/// Matrix entries as coefficient lists in the field generator.
pub fn nf_matrix_json(m: &Mat2<NfElem>) -> Vec<Vec<Vec<String>>> {
    m.0.iter().map(|row| row.iter().map(calg::json::elem_to_json).collect()).collect()
}
