//! End-to-end runs: partitions, resolution, ideals, solutions, representations, A-polynomials.

use std::sync::Arc;

use calg::json::{ideal_to_json, point_to_json, poly_to_json, upoly_to_json, IdealJson, PointJson, TermJson};
use calg::{AlgebraicPoint, Budget, CalgError, GroebnerBasis, MonomialOrder, MultiPoly, PolyIdeal, PolyRing, SolveOptions};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::decoration::CuspDecoration;
use crate::doc::ManifoldDoc;
use crate::error::{PtolemyError, Result};
use crate::ideals::{assemble_ideal, build_relations, Mode, RelationSet, VarSpec};
use crate::mod2::{h2_classes, ObstructionClass};
use crate::partition::{enumerate_partitions, resolve, Degeneracy, ResolvedPartition, TransitivePartition};
use crate::rep::{nf_matrix_json, recover, PointEnv, Recovery, VerificationReport};
use crate::trig::Triangulation;

/// Which flavour of variety to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeKind {
    Sl,
    Psl,
    Enhanced,
}

impl std::str::FromStr for ModeKind {
    type Err = PtolemyError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sl2" => Ok(ModeKind::Sl),
            "psl2" => Ok(ModeKind::Psl),
            "enhanced" => Ok(ModeKind::Enhanced),
            _ => Err(PtolemyError::Malformed(format!("unknown mode {s:?} (sl2, psl2, enhanced)"))),
        }
    }
}

/// A named mode, e.g. ("psl2-c2", Psl(class 2)).
#[derive(Clone, Debug)]
pub struct Variant {
    pub name: String,
    pub mode: Mode,
}

/// Variants for a mode; PSL covers every nontrivial class unless one is requested.
pub fn variants(doc: &ManifoldDoc, kind: ModeKind, class: Option<usize>) -> Result<Vec<Variant>> {
    if class.is_some() && kind != ModeKind::Psl {
        return Err(PtolemyError::Malformed("an obstruction class only makes sense with psl2".into()));
    }
    match kind {
        ModeKind::Sl => Ok(vec![Variant { name: "sl2".into(), mode: Mode::Sl }]),
        ModeKind::Enhanced => {
            let d = doc
                .decoration
                .clone()
                .ok_or_else(|| PtolemyError::Decoration("enhanced mode needs cusp_decorations".into()))?;
            Ok(vec![Variant { name: "enhanced".into(), mode: Mode::Enhanced(d) }])
        }
        ModeKind::Psl => {
            let classes = h2_classes(&doc.tri)?;
            let picked: Vec<ObstructionClass> = match class {
                Some(i) => vec![classes.get(i).cloned().ok_or(PtolemyError::NoSuchClass(i))?],
                None => classes.into_iter().filter(|c| !c.is_trivial()).collect(),
            };
            Ok(picked
                .into_iter()
                .map(|c| Variant { name: format!("psl2-c{}", c.class_index), mode: Mode::Psl(c) })
                .collect())
        }
    }
}

/// Carries a mode through the moves of a resolution.
fn transport_mode(mode: &Mode, r: &ResolvedPartition) -> Result<Mode> {
    if r.moves.is_empty() {
        return Ok(mode.clone());
    }
    Ok(match mode {
        Mode::Sl => Mode::Sl,
        Mode::Psl(c) => {
            let mut sigma = c.sigma.clone();
            for mv in &r.moves {
                sigma = mv.transport_cocycle(&sigma);
            }
            Mode::Psl(ObstructionClass::from_sigma(&r.triangulation, sigma, c.class_index)?)
        }
        Mode::Enhanced(d) => {
            let mut d: CuspDecoration = d.clone();
            for mv in &r.moves {
                d = mv.transport_decoration(&d);
            }
            Mode::Enhanced(d)
        }
    })
}

/// One Mild (or non-degenerate) branch ready for algebra.
#[derive(Clone, Debug)]
pub struct Branch {
    pub partition_index: usize,
    pub partition: TransitivePartition,
    pub degeneracy: Degeneracy,
    pub branch_index: usize,
    pub resolved: ResolvedPartition,
    pub relations: RelationSet,
}

impl Branch {
    pub fn tri(&self) -> &Triangulation {
        &self.resolved.triangulation
    }

    /// "p1" for an unresolved partition, "p2b0" for the first branch of a resolved one.
    pub fn tag(&self) -> String {
        if self.resolved.moves.is_empty() {
            format!("p{}", self.partition_index)
        } else {
            format!("p{}b{}", self.partition_index, self.branch_index)
        }
    }
}

/// Non-total partitions in canonical order, with their indices.
pub fn nontotal_partitions(tri: &Triangulation) -> Result<Vec<(usize, TransitivePartition, Degeneracy)>> {
    let table = tri.edge_table()?;
    Ok(enumerate_partitions(tri)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let ty = p.classify(tri, &table).0;
            (i, p, ty)
        })
        .filter(|(_, _, ty)| *ty != Degeneracy::Total)
        .collect())
}

pub fn branches(doc: &ManifoldDoc, mode: &Mode, filter: Option<usize>) -> Result<Vec<Branch>> {
    let tri = &doc.tri;
    let table = tri.edge_table()?;
    let base_vars = VarSpec::from_doc(tri, &table, doc.edge_variables.as_deref())?;
    let mut out = Vec::new();
    let parts = nontotal_partitions(tri)?;
    if let Some(f) = filter {
        if !parts.iter().any(|(i, _, _)| *i == f) {
            return Err(PtolemyError::Partition(format!("no non-total partition with index {f}")));
        }
    }
    for (index, p, ty) in parts {
        if filter.is_some_and(|f| f != index) {
            continue;
        }
        for (b, r) in resolve(tri, &p)?.into_iter().enumerate() {
            let vars = if r.moves.is_empty() {
                base_vars.clone()
            } else {
                let nt = r.triangulation.edge_table()?;
                base_vars.transported(&nt, &r.edge_map, r.triangulation.cusps().count)
            };
            let m = transport_mode(mode, &r)?;
            let relations = build_relations(&r.triangulation, &r.partition, &vars, m)?;
            out.push(Branch {
                partition_index: index,
                partition: p.clone(),
                degeneracy: ty,
                branch_index: b,
                resolved: r,
                relations,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Empty,
    Points(Vec<AlgebraicPoint>),
    /// Positive-dimensional; reported as its basis.
    Positive,
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub ideal: PolyIdeal,
    pub basis: GroebnerBasis,
    pub outcome: Outcome,
}

pub fn solve_branch(rs: &RelationSet, budget: Budget) -> Result<Solved> {
    solve_ideal(assemble_ideal(rs, true)?, budget)
}

/// Solves an assembled ideal; works equally on one read back from an artifact.
pub fn solve_ideal(ideal: PolyIdeal, budget: Budget) -> Result<Solved> {
    let basis = ideal.groebner(budget)?;
    let outcome = if basis.is_unit() {
        Outcome::Empty
    } else {
        match calg::solve_zero_dim(&ideal, &SolveOptions { budget, ..SolveOptions::default() }) {
            Ok(points) if points.is_empty() => Outcome::Empty,
            Ok(points) => Outcome::Points(points),
            Err(CalgError::NotZeroDimensional(_)) => Outcome::Positive,
            Err(e) => return Err(e.into()),
        }
    };
    Ok(Solved { ideal, basis, outcome })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchHeader {
    pub partition: usize,
    pub zero_edges: Vec<usize>,
    pub degeneracy: Degeneracy,
    pub branch: usize,
    pub moves: usize,
    pub gauge: Vec<String>,
}

impl BranchHeader {
    pub fn of(b: &Branch) -> Self {
        let rs = &b.relations;
        BranchHeader {
            partition: b.partition_index,
            zero_edges: b.partition.zero_ids(),
            degeneracy: b.degeneracy,
            branch: b.branch_index,
            moves: b.resolved.moves.len(),
            gauge: rs.gauge.iter().map(|&c| rs.vars.names[c].clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealArtifact {
    pub branch: BranchHeader,
    pub ideal: IdealJson,
    pub basis: IdealJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionArtifact {
    pub branch: BranchHeader,
    /// "empty", "points" or "positive-dimensional".
    pub status: String,
    pub points: Vec<PointJson>,
}

pub fn basis_json(gb: &GroebnerBasis) -> IdealJson {
    let ring = gb.ring();
    let ideal = PolyIdeal::new(ring, gb.polys().to_vec()).expect("nonzero basis");
    ideal_to_json(&ideal)
}

impl Solved {
    pub fn status(&self) -> &'static str {
        match self.outcome {
            Outcome::Empty => "empty",
            Outcome::Points(_) => "points",
            Outcome::Positive => "positive-dimensional",
        }
    }

    pub fn points(&self) -> &[AlgebraicPoint] {
        match &self.outcome {
            Outcome::Points(p) => p,
            _ => &[],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixJson {
    pub name: String,
    /// Entries as coefficient lists in the field generator.
    pub entries: Vec<Vec<Vec<String>>>,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepGroup {
    pub minpoly: Vec<String>,
    pub point: PointJson,
    pub face_products_ok: bool,
    /// Generators of the face-pairing presentation.
    pub automatic: Vec<MatrixJson>,
    pub automatic_report: VerificationReport,
    /// Generators from the document's paths, when it has them.
    pub supplied: Option<Vec<MatrixJson>>,
    pub supplied_report: Option<VerificationReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepArtifact {
    pub branch: BranchHeader,
    pub groups: Vec<RepGroup>,
}

fn matrices(rep: &crate::rep::Representation<calg::NfElem>) -> Vec<MatrixJson> {
    rep.generators
        .iter()
        .map(|(n, m)| MatrixJson {
            name: n.clone(),
            entries: nf_matrix_json(m),
            trace: calg::json::elem_to_json(&m.trace()),
        })
        .collect()
}

pub fn recover_point(doc: &ManifoldDoc, b: &Branch, p: &AlgebraicPoint) -> Result<Recovery<calg::NfElem>> {
    let env = PointEnv::from_point(&b.relations, true, p)?;
    recover(doc, b.tri(), &b.relations, &env)
}

pub fn rep_group(doc: &ManifoldDoc, b: &Branch, p: &AlgebraicPoint) -> Result<RepGroup> {
    let rec = recover_point(doc, b, p)?;
    Ok(RepGroup {
        minpoly: upoly_to_json(p.field.minpoly()),
        point: point_to_json(p),
        face_products_ok: rec.faces.ok(),
        automatic: matrices(&rec.automatic),
        automatic_report: rec.automatic_report,
        supplied: rec.supplied.as_ref().map(matrices),
        supplied_report: rec.supplied_report,
    })
}

/// Integer primitive part with positive leading coefficient under lex m > l.
pub fn normalize_apoly(p: &MultiPoly) -> Result<MultiPoly> {
    let vars = p.ring().vars.clone();
    let lex = PolyRing::new(&vars, MonomialOrder::Lex);
    let q = p.to_ring(&lex)?.primitive_integer();
    let q = if !q.is_zero() && q.lc().is_negative() { -q } else { q };
    Ok(q)
}

#[derive(Clone, Debug, Serialize)]
pub struct ApolyFactor {
    pub partition: usize,
    pub branch: usize,
    pub polynomial: Vec<TermJson>,
    pub display: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApolyArtifact {
    /// None when no branch has a one-dimensional projection.
    pub polynomial: Option<Vec<TermJson>>,
    pub display: Option<String>,
    pub factors: Vec<ApolyFactor>,
    pub notice: Option<String>,
}

/// The same ideal with the saturation variable moved to the front; eliminating it
/// first keeps the block-order computation small.
pub fn saturation_first(ideal: &PolyIdeal) -> Result<PolyIdeal> {
    let ring = ideal.ring();
    let mut names = vec![crate::ideals::SATURATION_VAR.to_string()];
    names.extend(ring.vars.iter().filter(|v| *v != crate::ideals::SATURATION_VAR).cloned());
    let target = PolyRing::new(&names, ring.order);
    let gens = ideal.gens().iter().map(|g| g.to_ring(&target)).collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(PolyIdeal::new(&target, gens)?)
}

/// Union over branches of the (m, l) projections that are curves.
pub fn apoly(doc: &ManifoldDoc, budget: Budget) -> Result<(Option<MultiPoly>, Vec<ApolyFactor>)> {
    let tri = &doc.tri;
    if tri.cusps().count != 1 {
        return Err(PtolemyError::Malformed("the A-polynomial needs exactly one cusp".into()));
    }
    let variant = variants(doc, ModeKind::Enhanced, None)?.remove(0);
    let ml: Arc<PolyRing> = PolyRing::new(&["m".to_string(), "l".to_string()], MonomialOrder::Lex);
    let mut product: Option<MultiPoly> = None;
    let mut seen: Vec<MultiPoly> = Vec::new();
    let mut factors = Vec::new();
    for b in branches(doc, &variant.mode, None)? {
        let ideal = saturation_first(&assemble_ideal(&b.relations, true)?)?;
        let elim = ideal.eliminate(&["m", "l"], budget)?;
        let gens: Vec<&MultiPoly> = elim.gens().iter().filter(|g| !g.is_zero()).collect();
        // a curve projects to a principal ideal; points give several generators
        if gens.len() != 1 || gens[0].constant_value().is_some() {
            continue;
        }
        let f = normalize_apoly(&gens[0].to_ring(&ml)?)?;
        factors.push(ApolyFactor {
            partition: b.partition_index,
            branch: b.branch_index,
            polynomial: poly_to_json(&f),
            display: f.to_string(),
        });
        if !seen.contains(&f) {
            product = Some(match product {
                Some(p) => &p * &f,
                None => f.clone(),
            });
            seen.push(f);
        }
    }
    let product = product.map(|p| normalize_apoly(&p)).transpose()?;
    Ok((product, factors))
}

pub fn apoly_artifact(doc: &ManifoldDoc, budget: Budget) -> Result<ApolyArtifact> {
    let (p, factors) = apoly(doc, budget)?;
    Ok(ApolyArtifact {
        polynomial: p.as_ref().map(poly_to_json),
        display: p.as_ref().map(|p| p.to_string()),
        notice: p.is_none().then(|| "no one-dimensional component found".to_string()),
        factors,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SummaryRow {
    pub variant: String,
    pub partition: usize,
    pub zero_edges: Vec<usize>,
    pub degeneracy: Degeneracy,
    pub branch: usize,
    pub status: String,
    pub point_groups: usize,
    /// Minimal polynomials of the point fields, constant term first.
    pub fields: Vec<Vec<String>>,
    pub representations_ok: Option<bool>,
}

/// Result of a full run for one variant.
#[derive(Clone, Debug)]
pub struct VariantRun {
    pub variant: Variant,
    pub branches: Vec<(Branch, Solved)>,
}

pub fn run_variant(doc: &ManifoldDoc, variant: &Variant, filter: Option<usize>, budget: Budget) -> Result<VariantRun> {
    let mut out = Vec::new();
    for b in branches(doc, &variant.mode, filter)? {
        let s = solve_branch(&b.relations, budget)?;
        out.push((b, s));
    }
    Ok(VariantRun { variant: variant.clone(), branches: out })
}

impl VariantRun {
    /// Summary rows; representation checks run for every point group.
    pub fn summary(&self, doc: &ManifoldDoc) -> Result<Vec<SummaryRow>> {
        let mut rows = Vec::new();
        for (b, s) in &self.branches {
            let mut reps_ok = None;
            for p in s.points() {
                let g = rep_group(doc, b, p)?;
                let ok = g.face_products_ok
                    && g.automatic_report.ok()
                    && g.supplied_report.as_ref().is_none_or(|r| r.ok());
                reps_ok = Some(reps_ok.unwrap_or(true) && ok);
            }
            rows.push(SummaryRow {
                variant: self.variant.name.clone(),
                partition: b.partition_index,
                zero_edges: b.partition.zero_ids(),
                degeneracy: b.degeneracy,
                branch: b.branch_index,
                status: s.status().into(),
                point_groups: s.points().len(),
                fields: s.points().iter().map(|p| upoly_to_json(p.field.minpoly())).collect(),
                representations_ok: reps_ok,
            });
        }
        Ok(rows)
    }
}

pub fn ideal_artifact(b: &Branch, reduced: bool, budget: Budget) -> Result<IdealArtifact> {
    let ideal = assemble_ideal(&b.relations, reduced)?;
    let basis = ideal.groebner(budget)?;
    Ok(IdealArtifact { branch: BranchHeader::of(b), ideal: ideal_to_json(&ideal), basis: basis_json(&basis) })
}

pub fn solution_artifact(b: &Branch, s: &Solved) -> SolutionArtifact {
    SolutionArtifact { branch: BranchHeader::of(b), status: s.status().into(), points: s.points().iter().map(point_to_json).collect() }
}

/// Re-solves the ideal stored in an artifact.
pub fn solve_from_artifact(a: &IdealArtifact, budget: Budget) -> Result<SolutionArtifact> {
    let s = solve_ideal(calg::json::ideal_from_json(&a.ideal)?, budget)?;
    Ok(SolutionArtifact { branch: a.branch.clone(), status: s.status().into(), points: s.points().iter().map(point_to_json).collect() })
}

pub fn rep_artifact(doc: &ManifoldDoc, b: &Branch, points: &[AlgebraicPoint]) -> Result<RepArtifact> {
    let groups = points.iter().map(|p| rep_group(doc, b, p)).collect::<Result<Vec<_>>>()?;
    Ok(RepArtifact { branch: BranchHeader::of(b), groups })
}

/// Rebuilds representations for the points of a solutions artifact.
pub fn reps_from_artifact(doc: &ManifoldDoc, mode: &Mode, a: &SolutionArtifact) -> Result<RepArtifact> {
    let b = branches(doc, mode, Some(a.branch.partition))?
        .into_iter()
        .find(|b| b.branch_index == a.branch.branch)
        .ok_or_else(|| PtolemyError::Malformed(format!("no branch {} of partition {}", a.branch.branch, a.branch.partition)))?;
    if BranchHeader::of(&b) != a.branch {
        return Err(PtolemyError::Malformed("artifact does not match this triangulation and mode".into()));
    }
    let points = a.points.iter().map(calg::json::point_from_json).collect::<std::result::Result<Vec<_>, _>>()?;
    rep_artifact(doc, &b, &points)
}

impl RepGroup {
    pub fn ok(&self) -> bool {
        self.face_products_ok && self.automatic_report.ok() && self.supplied_report.as_ref().is_none_or(|r| r.ok())
    }
}

impl RepArtifact {
    pub fn ok(&self) -> bool {
        self.groups.iter().all(RepGroup::ok)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionRecord {
    pub index: usize,
    pub zero_edges: Vec<usize>,
    pub degeneracy: Degeneracy,
    /// d(E): the number of degenerate simplices.
    pub degenerate_simplices: usize,
    pub degenerate_faces: usize,
}

pub fn partition_records(tri: &Triangulation) -> Result<Vec<PartitionRecord>> {
    let table = tri.edge_table()?;
    Ok(enumerate_partitions(tri)?
        .into_iter()
        .enumerate()
        .map(|(index, p)| {
            let (degeneracy, d) = p.classify(tri, &table);
            PartitionRecord {
                index,
                zero_edges: p.zero_ids(),
                degeneracy,
                degenerate_simplices: d,
                degenerate_faces: p.degenerate_faces(tri, &table).len(),
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionRecord {
    pub class_index: usize,
    pub trivial: bool,
    /// Face classes where σ is nonzero.
    pub sigma: Vec<usize>,
    /// Per tetrahedron, the local edges ("01", "23", ...) where η is nonzero.
    pub eta: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionArtifact {
    pub h2_order: usize,
    pub h1_order: u64,
    pub classes: Vec<ObstructionRecord>,
}

pub fn obstruction_artifact(tri: &Triangulation) -> Result<ObstructionArtifact> {
    let classes = h2_classes(tri)?;
    Ok(ObstructionArtifact {
        h2_order: classes.len(),
        h1_order: crate::mod2::h1_order(tri)?,
        classes: classes
            .iter()
            .map(|c| ObstructionRecord {
                class_index: c.class_index,
                trivial: c.is_trivial(),
                sigma: crate::mod2::support(&c.sigma),
                eta: c.eta.iter().map(crate::mod2::eta_support).collect(),
            })
            .collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangulationSummary {
    pub name: Option<String>,
    pub tets: usize,
    /// Valence of each edge class.
    pub edge_valences: Vec<usize>,
    pub faces: usize,
    pub cusps: usize,
    pub oriented: bool,
    pub face_labels: Vec<[String; 4]>,
    pub has_decoration: bool,
    pub generator_paths: Vec<String>,
}

pub fn triangulation_summary(doc: &ManifoldDoc) -> Result<TriangulationSummary> {
    let tri = &doc.tri;
    let table = tri.edge_table()?;
    Ok(TriangulationSummary {
        name: doc.name.clone(),
        tets: tri.tet_count(),
        edge_valences: table.classes.iter().map(|c| c.valence()).collect(),
        faces: tri.face_classes().0.len(),
        cusps: tri.cusps().count,
        oriented: tri.is_oriented(),
        face_labels: tri.labels().to_vec(),
        has_decoration: doc.decoration.is_some(),
        generator_paths: doc.generator_paths.iter().flat_map(|m| m.keys().cloned()).collect(),
    })
}
