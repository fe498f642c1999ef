//! JSON form of a model.
//!
//! ```json
//! {
//!   "kind": "qubo",
//!   "num_vars": 2,
//!   "tags": ["coupling", "objective"],
//!   "labels": null,
//!   "linear":    [{"var": 0, "coeff": -1.0, "tag": "objective"}],
//!   "quadratic": [{"i": 0, "j": 1, "coeff": 2.0, "tag": "coupling"}],
//!   "offset": {"coupling": 1.0}
//! }
//! ```
//!
//! `offset` maps each tag to its group constant; entries are written in tag
//! order, then variable order, so serialization is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

use super::{Domain, Model, TagId, VarLabel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub kind: String,
    pub num_vars: usize,
    pub tags: Vec<TagId>,
    pub labels: Option<Vec<VarLabel>>,
    pub linear: Vec<LinearEntry>,
    pub quadratic: Vec<QuadraticEntry>,
    pub offset: BTreeMap<TagId, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearEntry {
    pub var: usize,
    pub coeff: f64,
    pub tag: TagId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticEntry {
    pub i: usize,
    pub j: usize,
    pub coeff: f64,
    pub tag: TagId,
}

impl<D: Domain> From<&Model<D>> for ModelFile {
    fn from(m: &Model<D>) -> Self {
        let mut file = ModelFile {
            kind: D::NAME.to_string(),
            num_vars: m.num_vars(),
            tags: m.tags().cloned().collect(),
            labels: m.labels().map(<[_]>::to_vec),
            linear: Vec::new(),
            quadratic: Vec::new(),
            offset: BTreeMap::new(),
        };
        for (tag, g) in m.groups() {
            file.linear.extend(g.linear.iter().map(|(&var, &coeff)| LinearEntry {
                var,
                coeff,
                tag: tag.clone(),
            }));
            file.quadratic
                .extend(g.quadratic.iter().map(|(&(i, j), &coeff)| QuadraticEntry {
                    i,
                    j,
                    coeff,
                    tag: tag.clone(),
                }));
            if g.offset != 0.0 {
                file.offset.insert(tag.clone(), g.offset);
            }
        }
        file
    }
}

impl<D: Domain> TryFrom<ModelFile> for Model<D> {
    type Error = Error;

    fn try_from(f: ModelFile) -> Result<Self> {
        if f.kind != D::NAME {
            return Err(Error::Validation(format!(
                "expected a {} model, found `{}`",
                D::NAME,
                f.kind
            )));
        }
        let mut m = Model::<D>::new(f.num_vars);
        if let Some(labels) = f.labels {
            m = m.with_labels(labels)?;
        }
        let known = |t: &TagId| {
            if f.tags.contains(t) {
                Ok(())
            } else {
                Err(Error::UnknownTag(t.clone()))
            }
        };
        for e in f.linear {
            known(&e.tag)?;
            m.add_linear(e.tag, e.var, e.coeff)?;
        }
        for e in f.quadratic {
            known(&e.tag)?;
            if e.i == e.j {
                return Err(Error::Validation(format!("self-pair ({}, {})", e.i, e.j)));
            }
            m.add_quadratic(e.tag, e.i, e.j, e.coeff)?;
        }
        for (tag, value) in f.offset {
            known(&tag)?;
            m.add_offset(tag, value)?;
        }
        Ok(m)
    }
}

impl<D: Domain> Serialize for Model<D> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ModelFile::from(self).serialize(serializer)
    }
}

impl<'de, D: Domain> Deserialize<'de> for Model<D> {
    fn deserialize<De: Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let file = ModelFile::deserialize(d)?;
        Model::try_from(file).map_err(serde::de::Error::custom)
    }
}
