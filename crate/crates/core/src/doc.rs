//! JSON documents describing a triangulated manifold and its optional extra data.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::decoration::CuspDecoration;
use crate::error::{PtolemyError, Result};
use crate::perm::Perm4;
use crate::trig::{default_label, Gluing, Triangulation};

/// Picks which occurrence carries a class variable and what it is called.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeVariable {
    /// (tet, i, j) with i < j.
    pub anchor: [usize; 3],
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralWords {
    pub longitude: String,
    pub meridian: String,
}

/// Wire format; keys are declared alphabetically so serialization is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cusp_decorations: Option<Vec<[[[i32; 2]; 4]; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge_variables: Option<Vec<EdgeVariable>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator_paths: Option<BTreeMap<String, String>>,
    gluings: Vec<[(usize, [u8; 4]); 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<[String; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    peripheral_words: Option<Vec<PeripheralWords>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    relators: Option<Vec<String>>,
    tets: usize,
}

/// A triangulation plus the optional data consumed by later stages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldDoc {
    pub name: Option<String>,
    pub tri: Triangulation,
    pub decoration: Option<CuspDecoration>,
    pub edge_variables: Option<Vec<EdgeVariable>>,
    pub generator_paths: Option<BTreeMap<String, String>>,
    pub relators: Option<Vec<String>>,
    pub peripheral_words: Option<Vec<PeripheralWords>>,
}

impl ManifoldDoc {
    pub fn bare(tri: Triangulation) -> Self {
        ManifoldDoc {
            name: None,
            tri,
            decoration: None,
            edge_variables: None,
            generator_paths: None,
            relators: None,
            peripheral_words: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawDoc =
            serde_json::from_str(text).map_err(|e| PtolemyError::Malformed(e.to_string()))?;
        if raw.gluings.len() != raw.tets {
            return Err(PtolemyError::Malformed(format!(
                "tets = {} but {} gluing rows",
                raw.tets,
                raw.gluings.len()
            )));
        }
        let mut gl = Vec::with_capacity(raw.tets);
        for (t, row) in raw.gluings.iter().enumerate() {
            let mut out = [Gluing { tet: 0, perm: Perm4::IDENTITY }; 4];
            for (f, (nbr, p)) in row.iter().enumerate() {
                let perm =
                    Perm4::new(*p).ok_or(PtolemyError::BadPermutation { tet: t, face: f })?;
                out[f] = Gluing { tet: *nbr, perm };
            }
            gl.push(out);
        }
        let tri = Triangulation::new(gl, raw.labels)?;
        let decoration = match raw.cusp_decorations {
            Some(d) => Some(CuspDecoration::new(&tri, d)?),
            None => None,
        };
        if let Some(ev) = &raw.edge_variables {
            crate::ideals::check_edge_variables(&tri, ev)?;
        }
        Ok(ManifoldDoc {
            name: raw.name,
            tri,
            decoration,
            edge_variables: raw.edge_variables,
            generator_paths: raw.generator_paths,
            relators: raw.relators,
            peripheral_words: raw.peripheral_words,
        })
    }

    pub fn to_json(&self) -> String {
        let t = &self.tri;
        let auto = (0..t.tet_count()).all(|i| (0..4).all(|f| t.label(i, f) == default_label(i, f)));
        let raw = RawDoc {
            cusp_decorations: self.decoration.as_ref().map(|d| d.raw().to_vec()),
            edge_variables: self.edge_variables.clone(),
            generator_paths: self.generator_paths.clone(),
            gluings: t
                .gluings()
                .iter()
                .map(|row| std::array::from_fn(|f| (row[f].tet, row[f].perm.0)))
                .collect(),
            labels: if auto { None } else { Some(t.labels().to_vec()) },
            name: self.name.clone(),
            peripheral_words: self.peripheral_words.clone(),
            relators: self.relators.clone(),
            tets: t.tet_count(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable") + "\n"
    }
}

pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    Ok(ManifoldDoc::parse(text)?.tri)
}

pub fn serialize_triangulation(t: &Triangulation) -> String {
    ManifoldDoc::bare(t.clone()).to_json()
}
