//! Sparse multivariate polynomials over Q in a fixed ring with a monomial order.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::rational::{denom_lcm, format_rational, numer_gcd, Rational};
use crate::upoly::UPoly;
use crate::CalgError;

pub type Exps = SmallVec<[u32; 8]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseOrder {
    Lex,
    GrevLex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Variables `..split` compared first with `first`, ties broken on `split..` with `second`.
    Block { first: BaseOrder, second: BaseOrder, split: usize },
}

fn cmp_base(o: BaseOrder, a: &[u32], b: &[u32]) -> Ordering {
    match o {
        BaseOrder::Lex => a.cmp(b),
        BaseOrder::GrevLex => {
            let da: u64 = a.iter().map(|&e| e as u64).sum();
            let db: u64 = b.iter().map(|&e| e as u64).sum();
            da.cmp(&db).then_with(|| {
                for (x, y) in a.iter().zip(b).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            })
        }
    }
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            MonomialOrder::Lex => cmp_base(BaseOrder::Lex, a, b),
            MonomialOrder::GrevLex => cmp_base(BaseOrder::GrevLex, a, b),
            MonomialOrder::Block { first, second, split } => cmp_base(first, &a[..split], &b[..split])
                .then_with(|| cmp_base(second, &a[split..], &b[split..])),
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::GrevLex => "grevlex".into(),
            MonomialOrder::Block { split, .. } => format!("block({split})"),
        }
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// a / b; caller guarantees b | a.
pub fn mono_div(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub vars: Vec<String>,
    pub order: MonomialOrder,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(vars: &[S], order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing { vars: vars.iter().map(|s| s.as_ref().to_string()).collect(), order })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing { vars: self.vars.clone(), order })
    }

    pub fn zero_exps(&self) -> Exps {
        SmallVec::from_elem(0, self.vars.len())
    }
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    ring: Arc<PolyRing>,
    terms: Vec<(Exps, Rational)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms && (Arc::ptr_eq(&self.ring, &o.ring) || self.ring.vars == o.ring.vars)
    }
}
impl Eq for MultiPoly {}

impl std::hash::Hash for MultiPoly {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.terms.hash(h);
    }
}

impl MultiPoly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        MultiPoly { ring: ring.clone(), terms: vec![] }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Rational) -> Self {
        Self::from_terms(ring, vec![(ring.zero_exps(), c)])
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        let mut e = ring.zero_exps();
        e[i] = 1;
        MultiPoly { ring: ring.clone(), terms: vec![(e, Rational::one())] }
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Self {
        Self::var(ring, ring.index(name).unwrap_or_else(|| panic!("unknown variable {name}")))
    }

    pub fn monomial(ring: &Arc<PolyRing>, e: Exps, c: Rational) -> Self {
        Self::from_terms(ring, vec![(e, c)])
    }

    /// Terms already strictly descending with nonzero coefficients.
    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<(Exps, Rational)>) -> Self {
        MultiPoly { ring: ring.clone(), terms }
    }

    /// Builds a canonical polynomial from arbitrary terms (merging, sorting, dropping zeros).
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<(Exps, Rational)>) -> Self {
        let ord = ring.order;
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut out: Vec<(Exps, Rational)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => {
                    if out.last().is_some_and(|(_, c)| c.is_zero()) {
                        out.pop();
                    }
                    out.push((e, c));
                }
            }
        }
        if out.last().is_some_and(|(_, c)| c.is_zero()) {
            out.pop();
        }
        MultiPoly { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Exps, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Exps {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Rational {
        &self.terms[0].1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0)
    }

    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for (e, _) in &self.terms {
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    s.insert(i);
                }
            }
        }
        s
    }

    fn check(&self, o: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.ring, &o.ring) || *self.ring == *o.ring,
            "ring mismatch"
        );
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &[u32], c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, a)| (mono_mul(e, m), a * c)).collect(),
        }
    }

    /// self + c·x^m·o, merged in one pass.
    pub fn add_scaled(&self, o: &Self, m: &[u32], c: &Rational) -> Self {
        self.add_scaled_from(0, o, m, c)
    }

    /// Terms of self from index `from` on, plus c·x^m·o.
    pub(crate) fn add_scaled_from(&self, from: usize, o: &Self, m: &[u32], c: &Rational) -> Self {
        self.check(o);
        if c.is_zero() || o.is_zero() {
            return MultiPoly { ring: self.ring.clone(), terms: self.terms[from..].to_vec() };
        }
        let ord = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() - from + o.terms.len());
        let mut i = from;
        let mut it = o.terms.iter().map(|(e, a)| (mono_mul(e, m), a * c)).peekable();
        while i < self.terms.len() || it.peek().is_some() {
            match (self.terms.get(i), it.peek()) {
                (Some(a), Some(b)) => match ord.cmp(&a.0, &b.0) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Less => out.push(it.next().unwrap()),
                    Ordering::Equal => {
                        let (e, bc) = it.next().unwrap();
                        let s = &a.1 + bc;
                        if !s.is_zero() {
                            out.push((e, s));
                        }
                        i += 1;
                    }
                },
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(_)) => out.push(it.next().unwrap()),
                (None, None) => unreachable!(),
            }
        }
        MultiPoly { ring: self.ring.clone(), terms: out }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    /// Integer primitive form with positive leading coefficient.
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = Rational::from_integer(denom_lcm(self.terms.iter().map(|t| &t.1)));
        let p = self.scale(&l);
        let g = Rational::from_integer(numer_gcd(p.terms.iter().map(|t| &t.1)));
        let mut p = p.scale(&g.recip());
        if p.lc().is_negative() {
            p = -p;
        }
        p
    }

    /// Divides out the largest monomial dividing every term.
    pub fn remove_monomial_content(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.terms[0].0.clone();
        for (e, _) in &self.terms[1..] {
            for (a, b) in g.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (mono_div(e, &g), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes polynomial values (in the same ring) for variables.
    pub fn substitute(&self, vals: &[(usize, MultiPoly)]) -> Self {
        let mut acc = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let mut t = Self::one(&self.ring);
            for (v, p) in vals {
                let k = rest[*v];
                if k > 0 {
                    rest[*v] = 0;
                    t = &t * &p.pow(k);
                }
            }
            acc = acc.add_scaled(&t, &rest, c);
        }
        acc
    }

    pub fn substitute_constant(&self, v: usize, c: &Rational) -> Self {
        self.substitute(&[(v, Self::constant(&self.ring, c.clone()))])
    }

    /// Re-expresses the polynomial in another ring, matching variables by name.
    pub fn to_ring(&self, ring: &Arc<PolyRing>) -> Result<Self, CalgError> {
        let map: Vec<Option<usize>> = self.ring.vars.iter().map(|v| ring.index(v)).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut ne = ring.zero_exps();
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] = x,
                    None => {
                        return Err(CalgError::RingMismatch(format!(
                            "variable {} missing from target ring",
                            self.ring.vars[i]
                        )))
                    }
                }
            }
            terms.push((ne, c.clone()));
        }
        Ok(Self::from_terms(ring, terms))
    }

    pub fn eval(&self, vals: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                for _ in 0..x {
                    t *= &vals[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Univariate view when only `v` occurs.
    pub fn to_upoly(&self, v: usize) -> Option<UPoly> {
        let mut coeffs = vec![Rational::zero(); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &x)| i != v && x > 0) {
                return None;
            }
            coeffs[e[v] as usize] += c;
        }
        Some(UPoly::new(coeffs))
    }

    pub fn from_upoly(ring: &Arc<PolyRing>, v: usize, p: &UPoly) -> Self {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut e = ring.zero_exps();
                e[v] = i as u32;
                (e, c.clone())
            })
            .collect();
        Self::from_terms(ring, terms)
    }

    /// Coefficients with respect to variable `v`: self = Σ out[k]·v^k.
    pub fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Exps, Rational)>> = vec![vec![]; d + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[v] = 0;
            buckets[e[v] as usize].push((ne, c.clone()));
        }
        buckets.into_iter().map(|t| Self::from_terms(&self.ring, t)).collect()
    }

    /// Multivariate division returning the quotient when the remainder is zero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let mut r = self.clone();
        let mut q = Self::zero(&self.ring);
        while !r.is_zero() {
            if !divides(d.lm(), r.lm()) {
                return None;
            }
            let m = mono_div(r.lm(), d.lm());
            let c = r.lc() / d.lc();
            q = q.add_scaled(&Self::one(&self.ring), &m, &c);
            r = r.add_scaled(d, &m, &-c);
        }
        Some(q)
    }

    pub fn parse(ring: &Arc<PolyRing>, s: &str) -> Result<Self, CalgError> {
        let mut p = Parser { ring, s: s.as_bytes(), i: 0 };
        let v = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(CalgError::Parse(format!("trailing input in {s:?} at {}", p.i)));
        }
        Ok(v)
    }
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn err(&self, m: &str) -> CalgError {
        CalgError::Parse(format!("{m} at offset {}", self.i))
    }

    fn expr(&mut self) -> Result<MultiPoly, CalgError> {
        let mut neg = false;
        if self.peek() == Some(b'-') {
            self.i += 1;
            neg = true;
        } else if self.peek() == Some(b'+') {
            self.i += 1;
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.i += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, CalgError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.i += 1;
                    let d = self.power()?;
                    let c = d.constant_value().filter(|c| !c.is_zero());
                    let c = c.ok_or_else(|| self.err("division by non-constant"))?;
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly, CalgError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.ws();
            let st = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            let n: u32 = std::str::from_utf8(&self.s[st..self.i])
                .unwrap()
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, CalgError> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected )"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let st = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let n: num_bigint::BigInt =
                    std::str::from_utf8(&self.s[st..self.i]).unwrap().parse().unwrap();
                Ok(MultiPoly::constant(self.ring, Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let st = self.i;
                while self.i < self.s.len()
                    && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_')
                {
                    self.i += 1;
                }
                let name = std::str::from_utf8(&self.s[st..self.i]).unwrap();
                match self.ring.index(name) {
                    Some(v) => Ok(MultiPoly::var(self.ring, v)),
                    None => Err(CalgError::Parse(format!("unknown variable {name:?}"))),
                }
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let z = self.ring.zero_exps();
        self.add_scaled(o, &z, &Rational::one())
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        let z = self.ring.zero_exps();
        self.add_scaled(o, &z, &-Rational::one())
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.check(o);
        let (a, b) = if self.terms.len() <= o.terms.len() { (self, o) } else { (o, self) };
        let mut acc = MultiPoly::zero(&self.ring);
        for (e, c) in &a.terms {
            acc = acc.add_scaled(b, e, c);
        }
        acc
    }
}

impl std::ops::Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            ring: self.ring,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        self.ring.vars[i].clone()
                    } else {
                        format!("{}^{}", self.ring.vars[i], x)
                    }
                })
                .collect();
            if mono.is_empty() {
                f.write_str(&format_rational(&a))?;
            } else if a.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}
