//! JSON documents for divisor configurations with areas, and the schema tags of
//! every emitted document.

use serde::{Deserialize, Serialize};

use crate::divisor::{DivisorComponent, DivisorConfig};
use crate::error::{Error, Result};
use crate::lattice::{
    format_rational, parse_rational, AmbientLattice, AmbientSpec, AreaVector, HomologyClass,
};

pub const CONFIG_SCHEMA: &str = "sympdiv/config/v1";
pub const CERTIFICATE_SCHEMA: &str = "sympdiv/certificate/v1";
pub const PLAN_SCHEMA: &str = "sympdiv/inflation-plan/v1";

fn config_schema() -> String {
    CONFIG_SCHEMA.to_string()
}

/// Message of an error without its variant prefix, for nesting under a field path.
fn detail(e: Error) -> String {
    match e {
        Error::InvalidInput(m) => m,
        e => e.to_string(),
    }
}

fn one() -> usize {
    1
}

fn is_one(m: &usize) -> bool {
    *m == 1
}

/// A class given either as a coefficient vector or as text such as `2H-E1-E2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassSpec {
    Coefficients(Vec<i64>),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub id: String,
    pub class: ClassSpec,
    /// Filled in by adjunction when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub a: String,
    pub b: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub multiplicity: usize,
}

/// On-disk form of a divisor configuration with optional generator areas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default = "config_schema")]
    pub schema: String,
    pub ambient: AmbientSpec,
    pub components: Vec<ComponentDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
    /// Rationals as "p/q" strings, one per generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub areas: Option<Vec<String>>,
}

/// Reads a value from JSON text, reporting the path of the offending field.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::InvalidInput(format!("{path}: {}", e.into_inner()))
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ConfigDocument = from_json(text)?;
        if doc.schema != CONFIG_SCHEMA {
            return Err(Error::InvalidInput(format!(
                "schema: expected {CONFIG_SCHEMA}, got {}",
                doc.schema
            )));
        }
        Ok(doc)
    }

    /// Builds the configuration and area vector; errors name the field at fault.
    pub fn build(&self) -> Result<(DivisorConfig, Option<AreaVector>)> {
        let ambient = AmbientLattice::try_from(self.ambient.clone())
            .map_err(|e| Error::InvalidInput(format!("ambient: {}", detail(e))))?;
        let rank = ambient.rank();
        let mut components = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            let cls = match &c.class {
                ClassSpec::Coefficients(v) => {
                    if v.len() != rank {
                        return Err(Error::InvalidInput(format!(
                            "components[{i}].class: expected {rank} coefficients, got {}",
                            v.len()
                        )));
                    }
                    HomologyClass(v.clone())
                }
                ClassSpec::Text(t) => ambient.parse_class(t).map_err(|e| {
                    Error::InvalidInput(format!("components[{i}].class: {}", detail(e)))
                })?,
            };
            let genus = match c.genus {
                Some(g) => g,
                None => ambient.adjunction_genus(&cls)?.ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "components[{i}].genus: adjunction gives no integer genus for {}",
                        ambient.format(&cls)
                    ))
                })?,
            };
            components.push(DivisorComponent::new(c.id.clone(), cls, genus));
        }
        let mut edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.multiplicity == 0 {
                return Err(Error::InvalidInput(format!(
                    "edges[{i}].multiplicity: must be positive"
                )));
            }
            let key = if e.a <= e.b {
                (e.a.clone(), e.b.clone())
            } else {
                (e.b.clone(), e.a.clone())
            };
            edges.extend(std::iter::repeat_n(key, e.multiplicity));
        }
        let areas =
            match &self.areas {
                None => None,
                Some(v) => {
                    if v.len() != rank {
                        return Err(Error::InvalidInput(format!(
                            "areas: expected {rank} entries, got {}",
                            v.len()
                        )));
                    }
                    let mut out = Vec::new();
                    for (i, s) in v.iter().enumerate() {
                        out.push(parse_rational(s).map_err(|e| {
                            Error::InvalidInput(format!("areas[{i}]: {}", detail(e)))
                        })?);
                    }
                    Some(AreaVector::new(out))
                }
            };
        Ok((
            DivisorConfig {
                ambient,
                components,
                edges,
            },
            areas,
        ))
    }

    /// Document for a configuration, classes as coefficient vectors and edges grouped.
    pub fn from_config(config: &DivisorConfig, areas: Option<&AreaVector>) -> Self {
        let amb = &config.ambient;
        let components = config
            .components
            .iter()
            .map(|c| {
                let adj = amb.adjunction_genus(&c.cls).ok().flatten();
                ComponentDoc {
                    id: c.id.clone(),
                    class: ClassSpec::Coefficients(c.cls.0.clone()),
                    genus: (adj != Some(c.genus)).then_some(c.genus),
                }
            })
            .collect();
        let mut edges: Vec<EdgeDoc> = Vec::new();
        for (a, b) in config.sorted_edges() {
            match edges.last_mut() {
                Some(last) if last.a == a && last.b == b => last.multiplicity += 1,
                _ => edges.push(EdgeDoc {
                    a,
                    b,
                    multiplicity: 1,
                }),
            }
        }
        ConfigDocument {
            schema: config_schema(),
            ambient: amb.clone().into(),
            components,
            edges,
            areas: areas.map(|w| w.0.iter().map(format_rational).collect()),
        }
    }
}
