//! Factorization of univariate polynomials over Q.
//!
//! Square-free decomposition first, then each square-free part is made
//! monic over Z and handled by Zassenhaus: distinct/equal degree
//! factorization mod p, linear Hensel lifting, and subset recombination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::Rational;
use crate::upoly::UPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Leading coefficient of the input.
    pub unit: Rational,
    /// Monic irreducible factors with multiplicity, sorted by degree then coefficients.
    pub factors: Vec<(UPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> UPoly {
        let mut acc = UPoly::constant(self.unit.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e as u32);
        }
        acc
    }
}

pub fn factor_univariate(p: &UPoly) -> Factorization {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    let mut factors = Vec::new();
    for (part, e) in p.squarefree_decomposition() {
        for f in factor_squarefree(&part) {
            factors.push((f, e));
        }
    }
    factors.sort_by(|a, b| cmp_upoly(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Factorization { unit: p.lc(), factors }
}

pub fn is_irreducible(p: &UPoly) -> bool {
    if p.degree().unwrap_or(0) == 0 {
        return false;
    }
    let f = factor_univariate(p);
    f.factors.len() == 1 && f.factors[0].1 == 1
}

fn cmp_upoly(a: &UPoly, b: &UPoly) -> std::cmp::Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Monic irreducible factors of a square-free polynomial.
fn factor_squarefree(f: &UPoly) -> Vec<UPoly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![f.monic()];
    }
    let g = f.primitive_integer().integer_coeffs().expect("primitive integer");
    let lc = g[n].clone();
    // G(y) = lc^(n-1) g(y/lc) is monic over Z.
    let mut big = vec![BigInt::zero(); n + 1];
    let mut pw = BigInt::one();
    for i in (0..n).rev() {
        big[i] = &g[i] * &pw;
        pw *= &lc;
    }
    big[n] = BigInt::one();
    let mut out = Vec::new();
    for h in zassenhaus_monic(&big) {
        // h(lc·x), then primitive and monic over Q
        let mut pw = BigInt::one();
        let mut c = Vec::with_capacity(h.len());
        for hi in &h {
            c.push(hi * &pw);
            pw *= &lc;
        }
        out.push(UPoly::from_integers(&c).monic());
    }
    out
}

// ---------- arithmetic over F_p ----------

type Fpx = Vec<u64>;

fn fp_trim(mut a: Fpx) -> Fpx {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    fp_pow(a, p - 2, p)
}

fn fp_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn fp_sub(a: &Fpx, b: &Fpx, p: u64) -> Fpx {
    let n = a.len().max(b.len());
    fp_trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fp_mul(a: &Fpx, b: &Fpx, p: u64) -> Fpx {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    fp_trim(v)
}

fn fp_divrem(a: &Fpx, b: &Fpx, p: u64) -> (Fpx, Fpx) {
    let db = b.len() - 1;
    let mut r = a.clone();
    if r.len() <= db {
        return (vec![], r);
    }
    let inv = fp_inv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * bj % p) % p;
        }
        q[i] = c;
    }
    r.truncate(db);
    (fp_trim(q), fp_trim(r))
}

fn fp_monic(a: &Fpx, p: u64) -> Fpx {
    match a.last() {
        None => vec![],
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|&x| x * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fpx, b: &Fpx, p: u64) -> Fpx {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// (s, t) with s·a + t·b = 1 for coprime a, b.
fn fp_bezout(a: &Fpx, b: &Fpx, p: u64) -> (Fpx, Fpx) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fpx, Fpx) = (vec![1], vec![]);
    let (mut t0, mut t1): (Fpx, Fpx) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    assert_eq!(r0.len(), 1, "bezout on non-coprime inputs");
    let inv = fp_inv(r0[0], p);
    let sc = |v: Fpx| v.into_iter().map(|x| x * inv % p).collect::<Fpx>();
    (sc(s0), sc(t0))
}

fn fp_powmod(base: &Fpx, e: &BigUint, m: &Fpx, p: u64) -> Fpx {
    let mut r: Fpx = vec![1];
    let b = fp_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        r = fp_divrem(&fp_mul(&r, &r, p), m, p).1;
        if e.bit(i) {
            r = fp_divrem(&fp_mul(&r, &b, p), m, p).1;
        }
    }
    r
}

/// Distinct-degree factorization of a monic square-free polynomial.
fn fp_ddf(f: &Fpx, p: u64) -> Vec<(Fpx, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fpx = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while f.len() > 2 * (d + 1) {
        d += 1;
        h = fp_powmod(&h, &BigUint::from(p), &f, p);
        let g = fp_gcd(&f, &fp_sub(&h, &x, p), p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = fp_divrem(&f, &g, p).0;
            h = fp_divrem(&h, &f, p).1;
        }
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((f, deg));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus), p odd.
fn fp_edf(f: &Fpx, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fpx> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Fpx = fp_trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let mut t = fp_powmod(&a, &e, f, p);
        t = fp_sub(&t, &vec![1], p);
        let g = fp_gcd(f, &t, p);
        if g.len() > 1 && g.len() < f.len() {
            let rest = fp_divrem(f, &g, p).0;
            let mut out = fp_edf(&g, d, p, rng);
            out.extend(fp_edf(&fp_monic(&rest, p), d, p, rng));
            return out;
        }
    }
}

fn fp_factor(f: &Fpx, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fpx> {
    let mut out = Vec::new();
    for (g, d) in fp_ddf(f, p) {
        out.extend(fp_edf(&g, d, p, rng));
    }
    out
}

// ---------- integer polynomials ----------

type Zx = Vec<BigInt>;

fn z_trim(mut a: Zx) -> Zx {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn z_mul(a: &Zx, b: &Zx) -> Zx {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    z_trim(v)
}

fn z_mod(a: &Zx, m: &BigInt) -> Zx {
    z_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn z_symmetric(a: &Zx, m: &BigInt) -> Zx {
    let half: BigInt = m >> 1;
    z_trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Exact division by a monic polynomial over Z; None if the remainder is nonzero.
fn z_div_monic(a: &Zx, b: &Zx) -> Option<Zx> {
    let db = b.len() - 1;
    if a.len() <= db {
        return None;
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    if r[..db].iter().all(|c| c.is_zero()) {
        Some(z_trim(q))
    } else {
        None
    }
}

fn to_fp(a: &Zx, p: u64) -> Fpx {
    let pb = BigInt::from(p);
    fp_trim(a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn from_fp(a: &Fpx) -> Zx {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift f ≡ a·b (mod p) to mod p^k; f, a, b monic.
fn hensel_pair(f: &Zx, a: &Fpx, b: &Fpx, p: u64, k: u32) -> (Zx, Zx) {
    let (s, t) = fp_bezout(a, b, p);
    let pb = BigInt::from(p);
    let modulus = pb.pow(k);
    let mut big_a = from_fp(a);
    let mut big_b = from_fp(b);
    let mut pj = pb.clone();
    for _ in 1..k {
        let prod = z_mul(&big_a, &big_b);
        let n = f.len().max(prod.len());
        let diff: Zx = (0..n)
            .map(|i| {
                f.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default()
            })
            .collect();
        let diff = z_mod(&diff, &modulus);
        let e: Zx = diff.iter().map(|c| c / &pj).collect();
        let e = to_fp(&e, p);
        let da = fp_divrem(&fp_mul(&t, &e, p), a, p).1;
        let db = fp_divrem(&fp_mul(&s, &e, p), b, p).1;
        for (i, c) in da.iter().enumerate() {
            big_a[i] += &pj * BigInt::from(*c);
        }
        for (i, c) in db.iter().enumerate() {
            big_b[i] += &pj * BigInt::from(*c);
        }
        pj *= &pb;
    }
    (z_mod(&big_a, &modulus), z_mod(&big_b, &modulus))
}

fn hensel_multi(f: &Zx, facs: &[Fpx], p: u64, k: u32) -> Vec<Zx> {
    if facs.len() == 1 {
        return vec![z_mod(f, &BigInt::from(p).pow(k))];
    }
    let mut rest: Fpx = vec![1];
    for g in &facs[1..] {
        rest = fp_mul(&rest, g, p);
    }
    let (a, b) = hensel_pair(f, &facs[0], &rest, p, k);
    let mut out = vec![a];
    out.extend(hensel_multi(&b, &facs[1..], p, k));
    out
}

const PRIMES: [u64; 30] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127,
];

/// Irreducible monic factors over Z of a monic square-free integer polynomial.
fn zassenhaus_monic(g: &Zx) -> Vec<Zx> {
    let n = g.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_fac7);
    let mut best: Option<(u64, Vec<Fpx>)> = None;
    let mut tried = 0;
    for &p in PRIMES.iter().chain([131u64, 137, 139, 149, 151, 157, 163, 167, 173].iter()) {
        let gp = to_fp(g, p);
        let dg = fp_trim(
            gp.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % p) % p).collect(),
        );
        if dg.is_empty() || fp_gcd(&gp, &dg, p).len() != 1 {
            continue;
        }
        let facs = fp_factor(&gp, p, &mut rng);
        if facs.len() == 1 {
            return vec![g.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, facs) = best.expect("no good prime for a square-free polynomial");
    // Mignotte-style bound on factor coefficients.
    let maxc = g.iter().map(|c| c.abs()).max().unwrap();
    let bound = (BigInt::one() << n) * BigInt::from(n as u64 + 1) * (maxc + 1u32) * 2u32;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        k += 1;
        pk *= &pb;
    }
    let lifted = hensel_multi(g, &facs, p, k);
    recombine(g.clone(), lifted, &pk)
}

fn recombine(mut g: Zx, mut lifted: Vec<Zx>, pk: &BigInt) -> Vec<Zx> {
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = None;
        for subset in combinations(lifted.len(), s) {
            let mut h: Zx = vec![BigInt::one()];
            for &i in &subset {
                h = z_mod(&z_mul(&h, &lifted[i]), pk);
            }
            let h = z_symmetric(&h, pk);
            if !g[0].is_zero() && !h[0].is_zero() && !(&g[0] % &h[0]).is_zero() {
                continue;
            }
            if let Some(q) = z_div_monic(&g, &h) {
                found = Some((subset, h, q));
                break;
            }
        }
        match found {
            Some((subset, h, q)) => {
                out.push(h);
                g = q;
                let mut i = 0;
                lifted.retain(|_| {
                    let keep = !subset.contains(&i);
                    i += 1;
                    keep
                });
            }
            None => s += 1,
        }
    }
    if g.len() > 1 {
        out.push(g);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_difference_of_squares() {
        let f = factor_univariate(&UPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(
            f.factors,
            vec![(UPoly::from_ints(&[-1, 1]), 1), (UPoly::from_ints(&[1, 1]), 1)]
        );
    }

    #[test]
    fn quartic_is_irreducible() {
        assert!(is_irreducible(&UPoly::from_ints(&[2, 0, 1, 0, 1])));
        // x^4+1 splits mod every prime but not over Q
        assert!(is_irreducible(&UPoly::from_ints(&[1, 0, 0, 0, 1])));
    }

    #[test]
    fn non_monic_factors() {
        // (2x+3)(3x^2-5)
        let a = UPoly::from_ints(&[3, 2]);
        let b = UPoly::from_ints(&[-5, 0, 3]);
        let p = &a * &b;
        let f = factor_univariate(&p);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn swinnerton_dyer_like() {
        // x^4 - 10x^2 + 1 is irreducible yet splits into quadratics or linears mod all p
        assert!(is_irreducible(&UPoly::from_ints(&[1, 0, -10, 0, 1])));
    }
}
