//! Shared fixtures and random triangulations for the acceptance run.

use ptolemy::perm::Perm4;
use ptolemy::trig::{Gluing, Triangulation};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> ptolemy::ManifoldDoc {
    let path = format!("{}/../core/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    ptolemy::ManifoldDoc::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Random oriented gluing of n tetrahedra; None when the result is not an
/// orientable cusped triangulation with torus cusps.
pub fn random_cusped(n: usize, rng: &mut impl Rng) -> Option<Triangulation> {
    let mut faces: Vec<(usize, usize)> = (0..n).flat_map(|t| (0..4).map(move |f| (t, f))).collect();
    faces.shuffle(rng);
    let mut g: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; n];
    for pair in faces.chunks(2) {
        let ((t, f), (u, e)) = (pair[0], pair[1]);
        let perm = loop {
            let mut img = [0u8; 4];
            img[f] = e as u8;
            let mut rest: Vec<u8> = (0..4u8).filter(|&x| x as usize != e).collect();
            rest.shuffle(rng);
            let mut k = 0;
            for v in (0..4).filter(|&v| v != f) {
                img[v] = rest[k];
                k += 1;
            }
            let p = Perm4::new(img).unwrap();
            if p.is_odd() {
                break p;
            }
        };
        g[t][f] = Some(Gluing { tet: u, perm });
        g[u][e] = Some(Gluing { tet: t, perm: perm.inverse() });
    }
    let gl: Vec<[Gluing; 4]> = g.into_iter().map(|r| r.map(|x| x.unwrap())).collect();
    let tri = Triangulation::new(gl, None).ok()?;
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(t) = stack.pop() {
        for f in 0..4 {
            let u = tri.gluing(t, f).tet;
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    if seen.contains(&false) {
        return None;
    }
    let table = tri.edge_table().ok()?;
    if table.classes.len() != n || !tri.is_oriented() {
        return None;
    }
    // every vertex link must be a torus: V - F/2 = 0 per cusp
    let cusps = tri.cusps();
    let mut v = vec![0i64; cusps.count];
    let mut f = vec![0i64; cusps.count];
    for c in &table.classes {
        let o = c.representative();
        v[cusps.vertex_cusp[o.tet][o.i]] += 1;
        v[cusps.vertex_cusp[o.tet][o.j]] += 1;
    }
    for t in 0..n {
        for k in 0..4 {
            f[cusps.vertex_cusp[t][k]] += 1;
        }
    }
    if (0..cusps.count).all(|s| 2 * v[s] == f[s]) {
        Some(tri)
    } else {
        None
    }
}
