//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::error::Error;
use std::panic::{catch_unwind, AssertUnwindSafe};

use calg::{
    factor_univariate, is_irreducible, ratio, reduce, spoly, Budget, GroebnerBasis, MultiPoly, NfElem, PolyIdeal,
    Rational, Scalar, UPoly,
};
use num_traits::{One, Zero};
use ptolemy::ideals::{assemble_ideal, Mode, RelationSet};
use ptolemy::mod2::{h1_order, h2_classes, ObstructionClass};
use ptolemy::partition::{enumerate_partitions, resolve, Degeneracy, TransitivePartition};
use ptolemy::pipeline::{apoly, branches, run_variant, solve_branch, variants, Branch, ModeKind, Outcome, Solved, VariantRun};
use ptolemy::rep::{anchor_cusps, recover, Mat2, PointEnv, Recovery};
use ptolemy::{ManifoldDoc, Triangulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptolemy_verify::{fixture, random_cusped};

type Check = Result<String, Box<dyn Error>>;

macro_rules! fail {
    ($($t:tt)*) => { return Err(format!($($t)*).into()) };
}

fn budget() -> Budget {
    Budget::default()
}

fn run(doc: &ManifoldDoc, kind: ModeKind, class: Option<usize>) -> Result<Vec<VariantRun>, Box<dyn Error>> {
    let mut out = Vec::new();
    for v in variants(doc, kind, class)? {
        out.push(run_variant(doc, &v, None, budget())?);
    }
    Ok(out)
}

fn points(run: &VariantRun) -> Vec<(&Branch, &calg::AlgebraicPoint)> {
    run.branches
        .iter()
        .flat_map(|(b, s)| s.points().iter().map(move |p| (b, p)))
        .collect()
}

fn class_of(rs: &RelationSet, name: &str) -> usize {
    rs.vars.names.iter().position(|n| n == name).unwrap()
}

fn value(env: &PointEnv<NfElem>, rs: &RelationSet, name: &str) -> NfElem {
    match &env.classes[class_of(rs, name)] {
        Some(u) => u.val.clone(),
        None => env.one.zero_like(),
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// The m009 obstruction classes through explicit per-simplex lifts, one
/// local edge index (01 02 03 12 13 23) per simplex or none.
const M009_ETA: [[Option<usize>; 3]; 3] = [
    [Some(4), Some(5), None],
    [Some(5), Some(3), Some(5)],
    [Some(2), Some(1), Some(5)],
];

fn m009_class(doc: &ManifoldDoc, i: usize) -> Result<ObstructionClass, Box<dyn Error>> {
    let eta = M009_ETA[i - 1]
        .iter()
        .map(|e| {
            let mut row = [false; 6];
            if let Some(k) = e {
                row[*k] = true;
            }
            row
        })
        .collect();
    Ok(ObstructionClass::from_eta(&doc.tri, eta)?)
}

/// Solved branches of the PSL variety for the i-th m009 class.
fn m009_psl(doc: &ManifoldDoc, i: usize) -> Result<Vec<(Branch, Solved)>, Box<dyn Error>> {
    let mode = Mode::Psl(m009_class(doc, i)?);
    let mut out = Vec::new();
    for b in branches(doc, &mode, None)? {
        let s = solve_branch(&b.relations, budget())?;
        out.push((b, s));
    }
    Ok(out)
}

fn solved_points(v: &[(Branch, Solved)]) -> Vec<(&Branch, &calg::AlgebraicPoint)> {
    v.iter().flat_map(|(b, s)| s.points().iter().map(move |p| (b, p))).collect()
}

fn recover_at(doc: &ManifoldDoc, b: &Branch, env: &PointEnv<NfElem>) -> Result<Recovery<NfElem>, Box<dyn Error>> {
    Ok(recover(doc, b.tri(), &b.relations, env)?)
}

fn census() -> Check {
    let m009 = fixture("m009");
    let table = m009.tri.edge_table()?;
    let parts = enumerate_partitions(&m009.tri)?;
    let mut types: Vec<Degeneracy> = parts.iter().map(|p| p.classify(&m009.tri, &table).0).collect();
    types.sort();
    let want = vec![Degeneracy::NonDegenerate, Degeneracy::Mild, Degeneracy::Mild, Degeneracy::Total];
    if types != want {
        fail!("m009 partition types {types:?}");
    }
    let m004 = enumerate_partitions(&fixture("m004").tri)?;
    if m004.len() != 2 {
        fail!("m004 has {} partitions", m004.len());
    }
    Ok(format!("m009 {types:?}; m004 {} partitions", m004.len()))
}

fn sl_empty() -> Check {
    let doc = fixture("m009");
    let mut n = 0;
    for b in branches(&doc, &Mode::Sl, None)? {
        let gb = assemble_ideal(&b.relations, true)?.groebner(budget())?;
        if !gb.is_unit() {
            fail!("partition {:?} has basis {:?}", b.partition.zero_ids(), gb.polys());
        }
        n += 1;
    }
    if n != 3 {
        fail!("expected 3 non-total partitions, saw {n}");
    }
    Ok(format!("{n} reduced SL ideals are the unit ideal"))
}

fn psl_sigma1() -> Check {
    let doc = fixture("m009");
    let runs = m009_psl(&doc, 1)?;
    let pts = solved_points(&runs);
    if pts.len() != 1 {
        fail!("{} point groups", pts.len());
    }
    let (b, p) = pts[0];
    let rs = &b.relations;
    if p.field.degree() != 1 {
        fail!("point over {}", p.field.minpoly());
    }
    let env = PointEnv::from_point(rs, true, p)?;
    let xyz: Vec<NfElem> = ["x", "y", "z"].iter().map(|n| value(&env, rs, n)).collect();
    let one = env.one.clone();
    if !(xyz[0].is_zero() && xyz[1] == one && xyz[2] == one) {
        fail!("point (x, y, z) = ({}, {}, {})", xyz[0], xyz[1], xyz[2]);
    }
    if b.partition.zero_ids() != vec![class_of(rs, "x")] {
        fail!("point lives on partition {:?}", b.partition.zero_ids());
    }
    // the partition with y = 0: without its edge relation it has the points (±1, 0, 1)
    let yb = runs
        .iter()
        .find(|(b, _)| b.partition.zero_ids() == vec![class_of(&b.relations, "y")])
        .ok_or("no partition with y zero")?;
    let mut bare = yb.0.relations.clone();
    bare.edge_rels.clear();
    let sols = calg::solve_zero_dim(&assemble_ideal(&bare, true)?, &Default::default())?;
    let mut xs = BTreeSet::new();
    for s in &sols {
        let env = PointEnv::from_point(&bare, true, s)?;
        let x = value(&env, &bare, "x");
        if !x.is_rational() || !value(&env, &bare, "z").is_one() {
            fail!("unexpected point without edge relation over {}", s.field.minpoly());
        }
        xs.insert(x.coeffs()[0].to_string());
    }
    if xs != BTreeSet::from(["-1".to_string(), "1".to_string()]) {
        fail!("points without edge relation have x in {xs:?}");
    }
    if !matches!(yb.1.outcome, Outcome::Empty) {
        fail!("edge relation does not exclude (±1, 0, 1)");
    }
    Ok("single point (0, 1, 1); (±1, 0, 1) excluded by the edge relation".into())
}

fn psl_sigma2_sigma3() -> Check {
    let doc = fixture("m009");
    let mut problems = Vec::new();
    let s2 = m009_psl(&doc, 2)?;
    let p2 = solved_points(&s2);
    if !p2.is_empty() {
        let fields: Vec<String> = p2.iter().map(|(b, p)| format!("{:?} over {}", b.partition.zero_ids(), p.field.minpoly())).collect();
        problems.push(format!("sigma2 variety is not empty: {}", fields.join(", ")));
    }
    let s3 = m009_psl(&doc, 3)?;
    let p3 = solved_points(&s3);
    if p3.len() != 1 {
        problems.push(format!("sigma3 has {} point groups", p3.len()));
    } else {
        let (b, p) = p3[0];
        let rs = &b.relations;
        let env = PointEnv::from_point(rs, true, p)?;
        let (x, y, z) = (value(&env, rs, "x"), value(&env, rs, "y"), value(&env, rs, "z"));
        let quartic = x.pow(4).add(&x.pow(2)).add(&env.one.from_rational_like(q(2)));
        let target = UPoly::from_ints(&[2, 0, 1, 0, 1]);
        if p.field.minpoly() != &target || !quartic.is_zero() || y != x.pow(2).add(&env.one).neg() || !z.is_one() {
            problems.push(format!("sigma3 point x={x} y={y} z={z} over {}", p.field.minpoly()));
        }
    }
    let indices: Vec<usize> = (1..=3).map(|i| m009_class(&doc, i).map(|c| c.class_index)).collect::<Result<_, _>>()?;
    if BTreeSet::from_iter(indices.iter().copied()).len() != 3 || indices.contains(&0) {
        problems.push(format!("lifts give class indices {indices:?}"));
    }
    let h2 = h2_classes(&doc.tri)?.len();
    let h1 = h1_order(&doc.tri)?;
    if h2 != 4 || h1 != 2 {
        problems.push(format!("|H2| = {h2}, |H1| = {h1}"));
    }
    if problems.is_empty() {
        Ok("sigma2 empty; sigma3 over w^4 + w^2 + 2 with x = w, y = -w^2 - 1; |H2| = 4, |H1| = 2".into())
    } else {
        Err(problems.join("; ").into())
    }
}

fn enhanced_relations(doc: &ManifoldDoc) -> Result<(RelationSet, GroebnerBasis), Box<dyn Error>> {
    let mode = Mode::Enhanced(doc.decoration.clone().ok_or("no decoration")?);
    let b = branches(doc, &mode, Some(0))?.into_iter().next().ok_or("no branch")?;
    let gb = assemble_ideal(&b.relations, true)?.groebner(budget())?;
    Ok((b.relations, gb))
}

fn a_polynomial() -> Check {
    let doc = fixture("m009");
    let (a, _) = apoly(&doc, budget())?;
    let a = a.ok_or("no A-polynomial")?;
    let want = MultiPoly::parse(a.ring(), "m^6*l - 2*m^4*l - m^3*l^2 - m^3 - 2*m^2*l + l")?;
    if a != want {
        fail!("A-polynomial {a}");
    }
    let (_, gb) = enhanced_relations(&doc)?;
    let ring = gb.ring();
    for s in [
        "l^2*(m^2 - 1)*x^2 + (-m^4 - 2*m^3*l + m*l)",
        "(m^2*l - l)*y + m^2 + m*l",
    ] {
        let nf = gb.normal_form(&MultiPoly::parse(ring, s)?);
        if !nf.is_zero() {
            fail!("{s} has normal form {nf}");
        }
    }
    Ok(format!("A = {a}; x^2 and y relations reduce to 0"))
}

fn mat(rec: &Recovery<NfElem>, name: &str) -> Result<String, Box<dyn Error>> {
    let rep = rec.supplied.as_ref().ok_or("no supplied paths")?;
    let one = rep.generators[0].1 .0[0][0].one_like();
    let m = match rep.generator(name) {
        Some(m) => m.clone(),
        None => rep.image(&rep.peripherals.iter().find(|(n, _)| n == name).ok_or(format!("no {name}"))?.1, &one),
    };
    Ok(m.to_string())
}

fn recovery() -> Check {
    let doc = fixture("m009");
    let mut notes = Vec::new();
    // sigma3
    let s3 = m009_psl(&doc, 3)?;
    let (b, p) = *solved_points(&s3).first().ok_or("no sigma3 point")?;
    let rec = recover_at(&doc, b, &PointEnv::from_point(&b.relations, true, p)?)?;
    let want = [
        ("a", "[[w^3 + w, 1], [1, -w]]"),
        ("b", "[[1, -w], [-w, w^2 + 1]]"),
        ("c", "[[w^3, 1], [w^2 + 1, -w]]"),
        ("d", "[[1, 0], [-w, 1]]"),
        ("meridian", "[[1, w], [0, 1]]"),
        ("longitude", "[[-1, 2*w^3 + w], [0, -1]]"),
    ];
    for (n, s) in want {
        let got = mat(&rec, n)?;
        if got != s {
            fail!("sigma3 {n} = {got}, expected {s}");
        }
    }
    let report = rec.supplied_report.as_ref().unwrap();
    let signs: BTreeSet<i8> = report.relators.iter().map(|r| r.sign).collect();
    if !report.relators.iter().all(|r| r.ok) || signs.len() != 1 || signs.contains(&0) {
        fail!("sigma3 relators {:?}", report.relators);
    }
    let mu = report.peripherals.iter().find(|c| c.name == "meridian").ok_or("no meridian")?;
    if mu.trace != "2" || mu.kind != "parabolic" {
        fail!("meridian trace {} kind {}", mu.trace, mu.kind);
    }
    if !rec.faces.ok() {
        fail!("sigma3 face products {:?}", rec.faces.failures);
    }
    notes.push("sigma3 matrices match".to_string());
    // sigma1
    let s1 = m009_psl(&doc, 1)?;
    let (b, p) = *solved_points(&s1).first().ok_or("no sigma1 point")?;
    let rec = recover_at(&doc, b, &PointEnv::from_point(&b.relations, true, p)?)?;
    for (n, s) in [("a", "[[0, -1], [1, 0]]"), ("c", "[[0, -1], [1, 0]]"), ("b", "[[1, 0], [0, 1]]"), ("d", "[[1, 0], [0, 1]]")] {
        let got = mat(&rec, n)?;
        if got != s {
            fail!("sigma1 {n} = {got}, expected {s}");
        }
    }
    // a = c = J forces acb^-1 = -I, so the longitude is compared in PSL(2)
    let rep = rec.supplied.as_ref().unwrap();
    let one = rep.generators[0].1 .0[0][0].one_like();
    let per: BTreeMap<&str, Mat2<NfElem>> =
        rep.peripherals.iter().map(|(n, w)| (n.as_str(), rep.image(w, &one))).collect();
    if per["longitude"].scalar_sign() == 0 || per["meridian"].scalar_sign() == 0 {
        fail!("sigma1 peripherals {} / {}", per["meridian"], per["longitude"]);
    }
    if !rec.supplied_report.as_ref().unwrap().ok() {
        fail!("sigma1 relators {:?}", rec.supplied_report);
    }
    notes.push(format!("sigma1 a=c=J, b=d=I, longitude {} (±I in PSL)", per["longitude"]));
    // enhanced, over the generic point of the curve
    let (rs, gb) = enhanced_relations(&doc)?;
    let env = PointEnv::tautological(&rs, true, gb)?;
    let rec = recover(&doc, &doc.tri, &rs, &env)?;
    let rep = rec.supplied.as_ref().ok_or("no supplied paths")?;
    let report = rec.supplied_report.as_ref().unwrap();
    if !report.relators.iter().all(|r| r.ok && r.sign == 1) {
        fail!("enhanced relators {:?}", report.relators);
    }
    for ((name, word), var) in rep.peripherals.iter().zip(["m", "l"]) {
        let img = rep.image(word, &env.one);
        let v = calg::QrElem::var(env.quotient(), var);
        if img.0[1][0].is_zero() && img.0[0][0] == v && img.0[1][1].mul(&v).is_one() {
            continue;
        }
        fail!("{name} = {img}");
    }
    if !rec.faces.ok() {
        fail!("enhanced face products {:?}", rec.faces.failures);
    }
    notes.push("enhanced meridian/longitude diagonals (m, 1/m), (l, 1/l), relators vanish".into());
    Ok(notes.join("; "))
}

// ---- synthetic edge links ----

fn rand_q(rng: &mut impl Rng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-30..=30);
        if n != 0 {
            return ratio(n, rng.gen_range(1..=12));
        }
    }
}

struct Link {
    c01: Vec<Rational>,
    c02: Vec<Rational>,
    c03: Vec<Rational>,
    c12: Vec<Rational>,
    c13: Vec<Rational>,
    c23: Vec<Rational>,
    t: Vec<Rational>,
    b: Vec<Rational>,
}

impl Link {
    fn weighted(&self, num: &[Rational], den_a: &[Rational], den_b: &[Rational], w: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        let mut weight = Rational::one();
        for k in 0..num.len() {
            if k > 0 {
                weight = &weight * &w[k] * &w[k];
            }
            acc += &num[k] / (&den_a[k] * &den_b[k]) * &weight;
        }
        acc
    }

    fn top(&self) -> Rational {
        self.weighted(&self.c23, &self.c12, &self.c13, &self.t)
    }

    fn bottom(&self) -> Rational {
        self.weighted(&self.c23, &self.c02, &self.c03, &self.b)
    }

    fn ptolemy_ok(&self) -> bool {
        (0..self.c01.len()).all(|k| {
            &self.c03[k] * &self.c12[k] + &self.c01[k] * &self.c23[k] == &self.c02[k] * &self.c13[k]
        })
    }
}

/// Ptolemy assignment on N simplices around a common edge; `enhanced` adds
/// per-simplex cusp factors whose products around the edge are trivial.
fn random_link(rng: &mut impl Rng, n: usize, enhanced: bool, degenerate: bool, force: bool) -> Link {
    let mut factors = || -> Vec<Rational> {
        if !enhanced {
            return vec![Rational::one(); n];
        }
        let mut f: Vec<Rational> = (0..n).map(|_| rand_q(rng)).collect();
        let rest: Rational = f[1..].iter().product();
        f[0] = rest.recip();
        f
    };
    let t = factors();
    let b = factors();
    let h: Vec<Rational> = (0..n).map(|_| if enhanced { rand_q(rng) } else { Rational::one() }).collect();
    let prev = |k: usize| (k + n - 1) % n;
    let c13: Vec<Rational> = (0..n).map(|_| rand_q(rng)).collect();
    let c12: Vec<Rational> = (0..n).map(|k| &t[k] * &h[k] * &c13[prev(k)]).collect();
    if degenerate {
        let mut r = vec![rand_q(rng)];
        for k in 1..n {
            r.push(&r[k - 1] * &b[k] / &t[k]);
        }
        let c03: Vec<Rational> = (0..n).map(|k| &r[k] * &c13[k]).collect();
        let c02: Vec<Rational> = (0..n).map(|k| &b[k] * &h[k] * &c03[prev(k)]).collect();
        let c23: Vec<Rational> = (0..n).map(|_| rand_q(rng)).collect();
        let mut link = Link { c01: vec![Rational::zero(); n], c02, c03, c12, c13, c23, t, b };
        if force {
            // solve the last top term so the top sum vanishes
            link.c23[n - 1] = Rational::zero();
            let rest = link.top();
            let weight: Rational = link.t[1..].iter().map(|x| x * x).product();
            link.c23[n - 1] = -rest * &link.c12[n - 1] * &link.c13[n - 1] / weight;
        }
        link
    } else {
        let mut c01 = vec![rand_q(rng)];
        for k in 1..n {
            c01.push(&c01[k - 1] * &t[k] * &b[k]);
        }
        let c03: Vec<Rational> = (0..n).map(|_| rand_q(rng)).collect();
        let c02: Vec<Rational> = (0..n).map(|k| &b[k] * &h[k] * &c03[prev(k)]).collect();
        let c23 = (0..n).map(|k| (&c02[k] * &c13[k] - &c03[k] * &c12[k]) / &c01[k]).collect();
        Link { c01, c02, c03, c12, c13, c23, t, b }
    }
}

fn edge_links() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tally = BTreeMap::new();
    for case in 0..1500 {
        let n = rng.gen_range(3..=8);
        let enhanced = case % 2 == 1;
        let kind = case % 3;
        let link = random_link(&mut rng, n, enhanced, kind != 0, kind == 2);
        if !link.ptolemy_ok() {
            fail!("case {case}: generator broke a Ptolemy relation");
        }
        let (top, bottom) = (link.top(), link.bottom());
        if top.is_zero() != bottom.is_zero() {
            fail!("case {case} (N={n}): top {top}, bottom {bottom}");
        }
        if kind == 0 && !top.is_zero() {
            fail!("case {case} (N={n}): nonzero c01 but top sum {top}");
        }
        *tally.entry((["c01 nonzero", "c01 zero", "c01 zero, top forced 0"][kind], top.is_zero())).or_insert(0) += 1;
    }
    for key in [("c01 zero", false), ("c01 zero, top forced 0", true), ("c01 nonzero", true)] {
        if !tally.contains_key(&key) {
            fail!("no {key:?} cases");
        }
    }
    Ok(format!("1500 links: {tally:?}"))
}

// ---- gauge action ----

fn relations_hold(rs: &RelationSet, env: &PointEnv<NfElem>) -> bool {
    let field = env.one.field().clone();
    let mut inv_all = env.one.clone();
    for u in env.classes.iter().flatten() {
        inv_all = inv_all.mul(&u.inv);
    }
    let cusp_names = ptolemy::decoration::cusp_var_names(rs.cusps);
    if matches!(rs.mode, Mode::Enhanced(_)) {
        for u in &env.cusp {
            inv_all = inv_all.mul(&u.inv);
        }
    }
    let vals: Vec<NfElem> = rs
        .ring
        .vars
        .iter()
        .map(|v| {
            if let Some(c) = rs.vars.names.iter().position(|n| n == v) {
                env.classes[c].as_ref().map(|u| u.val.clone()).unwrap_or_else(|| env.one.zero_like())
            } else if let Some(k) = cusp_names.iter().position(|n| n == v) {
                env.cusp[k].val.clone()
            } else {
                inv_all.clone()
            }
        })
        .collect();
    rs.ptolemy_rels
        .iter()
        .chain(rs.edge_rels.iter().map(|(_, p)| p))
        .all(|p| NfElem::eval_poly(&field, p, &vals).is_zero())
}

fn traces(rec: &Recovery<NfElem>) -> Vec<String> {
    let rep = rec.supplied.as_ref().unwrap_or(&rec.automatic);
    let one = rec.automatic.generators[0].1 .0[0][0].one_like();
    rep.generators
        .iter()
        .map(|(_, m)| m.trace())
        .chain(rep.peripherals.iter().map(|(_, w)| rep.image(w, &one).trace()))
        .map(|t| t.to_string())
        .collect()
}

fn gauge_action() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut tested = 0;
    let mut actions = 0;
    let mut runs = Vec::new();
    let m009 = fixture("m009");
    for kind in [ModeKind::Psl, ModeKind::Enhanced] {
        runs.push((m009.clone(), run(&m009, kind, None)?));
    }
    let wild = fixture("wild4");
    runs.push((wild.clone(), run(&wild, ModeKind::Sl, None)?));
    for (doc, rr) in &runs {
        for r in rr {
            for (b, p) in points(r) {
                let rs = &b.relations;
                let base = PointEnv::from_point(rs, true, p)?;
                let want = traces(&recover_at(doc, b, &base)?);
                let ends = anchor_cusps(b.tri(), rs);
                for _ in 0..100 {
                    let d: Vec<Rational> = (0..rs.cusps).map(|_| rand_q(&mut rng)).collect();
                    let env = base.diagonal_action(&ends, &d);
                    if !relations_hold(rs, &env) {
                        fail!("{} {}: acted point violates a relation", r.variant.name, b.tag());
                    }
                    let rec = recover_at(doc, b, &env)?;
                    if traces(&rec) != want || !rec.faces.ok() {
                        fail!("{} {}: traces changed under {:?}", r.variant.name, b.tag(), d);
                    }
                    actions += 1;
                }
                tested += 1;
            }
        }
    }
    if tested < 5 {
        fail!("only {tested} points");
    }
    Ok(format!("{tested} points, {actions} diagonal actions"))
}

fn face_closure() -> Check {
    let mut checked = 0;
    for name in ["m009", "m004", "moderate4", "wild4"] {
        let doc = fixture(name);
        let mut kinds = vec![ModeKind::Sl, ModeKind::Psl];
        if doc.decoration.is_some() {
            kinds.push(ModeKind::Enhanced);
        }
        for kind in kinds {
            for r in run(&doc, kind, None)? {
                for (b, p) in points(&r) {
                    let rec = recover_at(&doc, b, &PointEnv::from_point(&b.relations, true, p)?)?;
                    if !rec.faces.ok() || rec.labels.inconsistent > 0 {
                        fail!("{name} {} {}: {:?}", r.variant.name, b.tag(), rec.faces.failures);
                    }
                    checked += rec.faces.triangles + rec.faces.hexagons;
                }
            }
        }
    }
    let doc = fixture("m009");
    let (rs, gb) = enhanced_relations(&doc)?;
    let rec = recover(&doc, &doc.tri, &rs, &PointEnv::tautological(&rs, true, gb)?)?;
    if !rec.faces.ok() {
        fail!("generic enhanced point: {:?}", rec.faces.failures);
    }
    checked += rec.faces.triangles + rec.faces.hexagons;
    Ok(format!("{checked} face products equal I"))
}

// ---- oracles ----

struct Uf(Vec<usize>);

impl Uf {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
    fn labels(&mut self) -> (Vec<usize>, usize) {
        let mut ids = BTreeMap::new();
        let n = self.0.len();
        let out = (0..n)
            .map(|x| {
                let r = self.find(x);
                let k = ids.len();
                *ids.entry(r).or_insert(k)
            })
            .collect();
        (out, ids.len())
    }
}

fn pair_index(a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].iter().position(|&p| p == (a, b)).unwrap()
}

/// Cells of the end-compactified complex rebuilt from the gluings alone.
struct Cells {
    vertex: Vec<usize>,
    nv: usize,
    edge: Vec<usize>,
    ne: usize,
    face: Vec<usize>,
    nf: usize,
    tets: usize,
}

fn cells(tri: &Triangulation) -> Cells {
    let n = tri.tet_count();
    let (mut v, mut e, mut f) = (Uf((0..4 * n).collect()), Uf((0..6 * n).collect()), Uf((0..4 * n).collect()));
    for t in 0..n {
        for face in 0..4 {
            let g = tri.gluing(t, face);
            f.union(4 * t + face, 4 * g.tet + g.perm.apply(face));
            let others: Vec<usize> = (0..4).filter(|&x| x != face).collect();
            for &a in &others {
                v.union(4 * t + a, 4 * g.tet + g.perm.apply(a));
                for &b in others.iter().filter(|&&b| b > a) {
                    e.union(6 * t + pair_index(a, b), 6 * g.tet + pair_index(g.perm.apply(a), g.perm.apply(b)));
                }
            }
        }
    }
    let ((vertex, nv), (edge, ne), (face, nf)) = (v.labels(), e.labels(), f.labels());
    Cells { vertex, nv, edge, ne, face, nf, tets: n }
}

fn bits(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

impl Cells {
    fn d0(&self, x: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.ne];
        for t in 0..self.tets {
            for (k, (a, b)) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].into_iter().enumerate() {
                out[self.edge[6 * t + k]] = x[self.vertex[4 * t + a]] ^ x[self.vertex[4 * t + b]];
            }
        }
        out
    }
    fn d1(&self, x: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.nf];
        for t in 0..self.tets {
            for face in 0..4 {
                let vs: Vec<usize> = (0..4).filter(|&v| v != face).collect();
                out[self.face[4 * t + face]] = [(0, 1), (0, 2), (1, 2)]
                    .iter()
                    .fold(false, |acc, &(i, j)| acc ^ x[self.edge[6 * t + pair_index(vs[i], vs[j])]]);
            }
        }
        out
    }
    fn d2(&self, x: &[bool]) -> Vec<bool> {
        (0..self.tets).map(|t| (0..4).fold(false, |acc, f| acc ^ x[self.face[4 * t + f]])).collect()
    }
}

fn cohomology_counts(tri: &Triangulation) -> (u64, u64) {
    let c = cells(tri);
    let image = |n: usize, f: &dyn Fn(&[bool]) -> Vec<bool>| -> u64 {
        (0u64..1 << n).map(|m| f(&bits(m, n))).collect::<BTreeSet<_>>().len() as u64
    };
    let kernel = |n: usize, f: &dyn Fn(&[bool]) -> Vec<bool>| -> u64 {
        (0u64..1 << n).filter(|&m| f(&bits(m, n)).iter().all(|&b| !b)).count() as u64
    };
    let h1 = kernel(c.ne, &|x| c.d1(x)) / image(c.nv, &|x| c.d0(x));
    let h2 = kernel(c.nf, &|x| c.d2(x)) / image(c.ne, &|x| c.d1(x));
    (h1, h2)
}

fn brute_partitions(tri: &Triangulation) -> BTreeSet<Vec<bool>> {
    let c = cells(tri);
    (0u64..1 << c.ne)
        .map(|m| bits(m, c.ne))
        .filter(|z| {
            (0..c.tets).all(|t| {
                (0..4).all(|face| {
                    let vs: Vec<usize> = (0..4).filter(|&v| v != face).collect();
                    let zeros = [(0, 1), (0, 2), (1, 2)]
                        .iter()
                        .filter(|&&(i, j)| z[c.edge[6 * t + pair_index(vs[i], vs[j])]])
                        .count();
                    zeros != 2
                })
            })
        })
        .collect()
}

/// Edge classes numbered by first appearance in the library table, mapped onto ours.
fn class_translation(tri: &Triangulation) -> Result<Vec<usize>, Box<dyn Error>> {
    let table = tri.edge_table()?;
    let c = cells(tri);
    let mut map = vec![usize::MAX; c.ne];
    for t in 0..c.tets {
        for k in 0..6 {
            map[table.of[t][k].0] = c.edge[6 * t + k];
        }
    }
    Ok(map)
}

fn basis_certificates(ideal: &PolyIdeal, gb: &GroebnerBasis) -> bool {
    let polys: Vec<&MultiPoly> = gb.polys().iter().collect();
    let pairs_ok = (0..polys.len()).all(|i| (i + 1..polys.len()).all(|j| reduce(&spoly(polys[i], polys[j]), &polys).is_zero()));
    let ring = gb.ring();
    let members_ok = ideal.gens().iter().all(|g| reduce(&g.to_ring(ring).unwrap(), &polys).is_zero());
    pairs_ok && members_ok
}

fn oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tris: Vec<Triangulation> = ["m009", "m004", "moderate4", "wild4"].iter().map(|n| fixture(n).tri).collect();
    while tris.len() < 40 {
        let n = rng.gen_range(2..=6);
        if let Some(t) = random_cusped(n, &mut rng) {
            tris.push(t);
        }
    }
    for (i, tri) in tris.iter().enumerate() {
        let map = class_translation(tri)?;
        let lib: BTreeSet<Vec<bool>> = enumerate_partitions(tri)?
            .iter()
            .map(|p| {
                let mut z = vec![false; map.len()];
                for c in p.zero_ids() {
                    z[map[c]] = true;
                }
                z
            })
            .collect();
        if lib != brute_partitions(tri) {
            fail!("triangulation {i}: partitions differ from brute force");
        }
        let (h1, h2) = cohomology_counts(tri);
        if h1 != h1_order(tri)? || h2 != h2_classes(tri)?.len() as u64 {
            fail!("triangulation {i}: cochain counts H1 {h1} H2 {h2}");
        }
    }
    let mut bases = 0;
    for name in ["m009", "m004", "moderate4", "wild4"] {
        let doc = fixture(name);
        for kind in [ModeKind::Sl, ModeKind::Psl] {
            for r in run(&doc, kind, None)? {
                for (_, s) in &r.branches {
                    if !basis_certificates(&s.ideal, &s.basis) {
                        fail!("{name} {}: basis certificate failed", r.variant.name);
                    }
                    bases += 1;
                }
            }
        }
    }
    let m009 = fixture("m009");
    let (rs, gb) = enhanced_relations(&m009)?;
    if !basis_certificates(&assemble_ideal(&rs, true)?, &gb) {
        fail!("enhanced basis certificate failed");
    }
    bases += 1;
    let mut factored = 0;
    for _ in 0..200 {
        let mut p = UPoly::constant(rand_q(&mut rng));
        for _ in 0..rng.gen_range(1..=4) {
            let deg = rng.gen_range(1..=3);
            let f = UPoly::new((0..=deg).map(|k| if k == deg { Rational::one() } else { q(rng.gen_range(-5..=5)) }).collect());
            p = &p * &f.pow(rng.gen_range(1..=2));
        }
        let fz = factor_univariate(&p);
        if fz.expand() != p || !fz.factors.iter().all(|(f, _)| is_irreducible(f)) {
            fail!("factorization of {} does not round-trip", p.to_string_in("x"));
        }
        factored += 1;
    }
    Ok(format!("{} triangulations vs brute force, {bases} bases certified, {factored} factorizations", tris.len()))
}

// ---- resolution ----

fn transitive(tri: &Triangulation, zero: &[bool]) -> Result<bool, Box<dyn Error>> {
    let map = class_translation(tri)?;
    let mut ours = vec![false; map.len()];
    for (c, &z) in zero.iter().enumerate() {
        ours[map[c]] = z;
    }
    Ok(brute_partitions(tri).contains(&ours))
}

fn resolution() -> Check {
    let doc = fixture("moderate4");
    let tri = &doc.tri;
    let table = tri.edge_table()?;
    let e = TransitivePartition::from_zero_ids(table.classes.len(), &[0, 2]);
    let (ty, _) = e.classify(tri, &table);
    let k = e.degenerate_faces(tri, &table).len();
    if ty != Degeneracy::Moderate || k == 0 {
        fail!("moderate fixture classifies as {ty:?} with {k} faces");
    }
    let res = resolve(tri, &e)?;
    let after = &res[0].triangulation;
    let n_after = after.edge_table()?.classes.len();
    let old: BTreeSet<usize> = res[0].edge_map.iter().copied().collect();
    let new: Vec<usize> = (0..n_after).filter(|c| !old.contains(c)).collect();
    if new.len() != k || res.iter().any(|r| r.moves.len() != k) {
        fail!("{} new edges after {k} moves", new.len());
    }
    let mut expected = BTreeSet::new();
    for mask in 0u64..1 << k {
        let mut z = vec![false; n_after];
        for (c, &m) in res[0].edge_map.iter().enumerate() {
            z[m] = e.zero[c];
        }
        for (i, &c) in new.iter().enumerate() {
            z[c] = mask >> i & 1 == 1;
        }
        if transitive(after, &z)? {
            expected.insert(z);
        }
    }
    let got: BTreeSet<Vec<bool>> = res.iter().map(|r| r.partition.zero.clone()).collect();
    if got != expected || got.len() != res.len() {
        fail!("moderate branches {} vs {} transitive descendants", res.len(), expected.len());
    }
    for r in &res {
        if r.triangulation != *after || r.degeneracy()? != Degeneracy::Mild {
            fail!("moderate branch is {:?}", r.degeneracy()?);
        }
    }
    let wild = fixture("wild4");
    let wt = wild.tri.edge_table()?;
    let w = TransitivePartition::from_zero_ids(wt.classes.len(), &[0, 1, 2]);
    let (wty, d) = w.classify(&wild.tri, &wt);
    if wty != Degeneracy::Wild {
        fail!("wild fixture classifies as {wty:?}");
    }
    let wres = resolve(&wild.tri, &w)?;
    for r in &wres {
        if r.wild_moves != d || !matches!(r.degeneracy()?, Degeneracy::Mild | Degeneracy::NonDegenerate) {
            fail!("wild branch: {} wild moves for d(E) = {d}, {:?}", r.wild_moves, r.degeneracy()?);
        }
    }
    Ok(format!(
        "moderate: {k} faces, {} of {} descendants, all Mild; wild: d(E) = {d}, {} wild moves, {} branches",
        res.len(),
        1 << k,
        wres[0].wild_moves,
        wres.len()
    ))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Check)> = vec![
        ("partition census", census),
        ("SL emptiness", sl_empty),
        ("PSL sigma1", psl_sigma1),
        ("PSL sigma2 and sigma3, cohomology orders", psl_sigma2_sigma3),
        ("A-polynomial", a_polynomial),
        ("representation recovery", recovery),
        ("edge relation equivalence", edge_links),
        ("diagonal action", gauge_action),
        ("cocycle closure", face_closure),
        ("oracle suites", oracles),
        ("resolution mechanics", resolution),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()).into())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {msg}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
