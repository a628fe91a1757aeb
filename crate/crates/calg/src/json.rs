//! JSON forms of polynomials, ideals, fields and points.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ideal::PolyIdeal;
use crate::numfield::{NfElem, NumberField};
use crate::poly::{MonomialOrder, MultiPoly, PolyRing};
use crate::rational::{format_rational, parse_rational};
use crate::solve::AlgebraicPoint;
use crate::upoly::UPoly;
use crate::CalgError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub generators: Vec<Vec<TermJson>>,
    pub order: String,
    pub variables: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    /// Minimal polynomial coefficients, constant term first.
    pub minpoly: Vec<String>,
    pub var: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    /// Per variable, coefficients in the field generator, constant term first.
    pub coordinates: BTreeMap<String, Vec<String>>,
    pub field: FieldJson,
}

pub fn poly_to_json(p: &MultiPoly) -> Vec<TermJson> {
    let vars = &p.ring().vars;
    p.terms()
        .iter()
        .map(|(e, c)| TermJson {
            coeff: format_rational(c),
            monomial: e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| (vars[i].clone(), x))
                .collect(),
        })
        .collect()
}

pub fn poly_from_json(ring: &Arc<PolyRing>, terms: &[TermJson]) -> Result<MultiPoly, CalgError> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let mut e = ring.zero_exps();
        for (v, &x) in &t.monomial {
            let i = ring
                .index(v)
                .ok_or_else(|| CalgError::Parse(format!("unknown variable {v:?}")))?;
            e[i] = x;
        }
        out.push((e, parse_rational(&t.coeff)?));
    }
    Ok(MultiPoly::from_terms(ring, out))
}

pub fn ideal_to_json(i: &PolyIdeal) -> IdealJson {
    IdealJson {
        generators: i.gens().iter().map(poly_to_json).collect(),
        order: i.ring().order.name(),
        variables: i.ring().vars.clone(),
    }
}

pub fn ideal_from_json(j: &IdealJson) -> Result<PolyIdeal, CalgError> {
    let order = match j.order.as_str() {
        "lex" => MonomialOrder::Lex,
        "grevlex" => MonomialOrder::GrevLex,
        o => return Err(CalgError::Parse(format!("unsupported order {o:?}"))),
    };
    let ring = PolyRing::new(&j.variables, order);
    let gens = j
        .generators
        .iter()
        .map(|g| poly_from_json(&ring, g))
        .collect::<Result<Vec<_>, _>>()?;
    PolyIdeal::new(&ring, gens)
}

pub fn upoly_to_json(p: &UPoly) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

pub fn upoly_from_json(c: &[String]) -> Result<UPoly, CalgError> {
    Ok(UPoly::new(c.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?))
}

pub fn field_to_json(k: &NumberField) -> FieldJson {
    FieldJson { minpoly: upoly_to_json(k.minpoly()), var: k.var().to_string() }
}

pub fn field_from_json(j: &FieldJson) -> Result<Arc<NumberField>, CalgError> {
    NumberField::new(&upoly_from_json(&j.minpoly)?, &j.var)
}

pub fn elem_to_json(x: &NfElem) -> Vec<String> {
    x.coeffs().iter().map(format_rational).collect()
}

pub fn point_to_json(p: &AlgebraicPoint) -> PointJson {
    PointJson {
        coordinates: p.coords.iter().map(|(n, v)| (n.clone(), elem_to_json(v))).collect(),
        field: field_to_json(&p.field),
    }
}

pub fn point_from_json(j: &PointJson) -> Result<AlgebraicPoint, CalgError> {
    let field = field_from_json(&j.field)?;
    let coords = j
        .coordinates
        .iter()
        .map(|(n, c)| Ok((n.clone(), NfElem::from_upoly(&field, &upoly_from_json(c)?))))
        .collect::<Result<Vec<_>, CalgError>>()?;
    Ok(AlgebraicPoint { field, coords })
}
