//! JSON module documents.
//!
//! ```json
//! {
//!   "poset": {"kind": "grid", "directions": 2, "box": {"caps": [3, 3]}},
//!   "field": {"kind": "rational"},
//!   "generators": [{"degree": []}],
//!   "relations": [{"degree": [[1, 2]], "entries": [{"gen": 0, "scalar": "1"}]}]
//! }
//! ```
//!
//! Grid degrees are `[direction, exponent]` pairs, Young degrees are arrays of
//! parts, orbit degrees are integers.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Presentation;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::poset::{Degree, GridBox, GridDegree, Partition, PosetDescriptor, YoungBox};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PosetDocument {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_sum: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub bounding_box: Option<BoxDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoxDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_sum: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub within: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldDocument {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDocument {
    pub degree: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryDocument {
    pub gen: usize,
    pub scalar: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationDocument {
    pub degree: Value,
    pub entries: Vec<EntryDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleDocument {
    pub poset: PosetDocument,
    pub field: FieldDocument,
    pub generators: Vec<GeneratorDocument>,
    #[serde(default)]
    pub relations: Vec<RelationDocument>,
}

impl PosetDocument {
    pub fn from_descriptor(p: &PosetDescriptor) -> Self {
        match p {
            PosetDescriptor::Grid(b) => PosetDocument {
                kind: "grid".into(),
                directions: Some(b.directions()),
                max_sum: None,
                modulus: None,
                bounding_box: Some(BoxDocument {
                    caps: Some(b.caps.clone()),
                    max_sum: b.max_sum,
                    within: None,
                }),
            },
            PosetDescriptor::Young(b) => PosetDocument {
                kind: "young".into(),
                directions: None,
                max_sum: Some(b.max_sum),
                modulus: None,
                bounding_box: b.within.as_ref().map(|w| BoxDocument {
                    caps: None,
                    max_sum: None,
                    within: Some(w.parts().to_vec()),
                }),
            },
            PosetDescriptor::Orbit { modulus } => PosetDocument {
                kind: "orbit".into(),
                directions: None,
                max_sum: None,
                modulus: Some(*modulus),
                bounding_box: None,
            },
        }
    }

    pub fn to_descriptor(&self) -> Result<PosetDescriptor> {
        let bad = |m: &str| Error::parse("poset", m.to_string());
        match self.kind.as_str() {
            "grid" => {
                let b = self.bounding_box.as_ref().ok_or_else(|| bad("grid posets need a `box` with `caps`"))?;
                let caps = b.caps.clone().ok_or_else(|| bad("grid box needs `caps`"))?;
                if let Some(r) = self.directions {
                    if r as usize != caps.len() {
                        return Err(bad(&format!("`directions` is {r} but `caps` has {} entries", caps.len())));
                    }
                }
                Ok(PosetDescriptor::Grid(GridBox {
                    caps,
                    max_sum: b.max_sum.or(self.max_sum),
                }))
            }
            "young" => {
                let within = match self.bounding_box.as_ref().and_then(|b| b.within.as_ref()) {
                    Some(w) => Some(Partition::new(w)?),
                    None => None,
                };
                let max_sum = self
                    .max_sum
                    .or_else(|| within.as_ref().map(Partition::sum))
                    .ok_or_else(|| bad("young posets need `maxSum`"))?;
                Ok(PosetDescriptor::Young(YoungBox { max_sum, within }))
            }
            "orbit" => PosetDescriptor::orbit(self.modulus.ok_or_else(|| bad("orbit posets need `modulus`"))?),
            other => Err(bad(&format!("unknown poset kind `{other}`"))),
        }
    }
}

impl FieldDocument {
    pub fn from_field(f: &Field) -> Self {
        match f.spec() {
            FieldSpec::Rational => FieldDocument {
                kind: "rational".into(),
                p: None,
                order: None,
            },
            FieldSpec::Prime(p) => FieldDocument {
                kind: "prime".into(),
                p: Some(p),
                order: None,
            },
            FieldSpec::Cyclotomic(n) => FieldDocument {
                kind: "cyclotomic".into(),
                p: None,
                order: Some(n),
            },
        }
    }

    pub fn to_field(&self) -> Result<Field> {
        let bad = |m: &str| Error::parse("field", m.to_string());
        match self.kind.as_str() {
            "rational" => Ok(Field::rational()),
            "prime" => Field::prime(self.p.unwrap_or(crate::field::DEFAULT_PRIME)),
            "cyclotomic" => Field::cyclotomic(self.order.ok_or_else(|| bad("cyclotomic fields need `order`"))?),
            other => Err(bad(&format!("unknown field kind `{other}`"))),
        }
    }
}

pub fn degree_to_json(d: &Degree) -> Value {
    match d {
        Degree::Grid(g) => Value::Array(
            g.entries()
                .iter()
                .map(|&(i, e)| Value::Array(vec![i.into(), e.into()]))
                .collect(),
        ),
        Degree::Young(p) => Value::Array(p.parts().iter().map(|&x| x.into()).collect()),
        Degree::Orbit(n) => (*n).into(),
    }
}

pub fn degree_from_json(kind: &str, v: &Value, location: &str) -> Result<Degree> {
    let bad = |m: String| Error::parse(location.to_string(), m);
    let as_u32 = |x: &Value| -> Result<u32> {
        x.as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| bad(format!("expected a natural number, got {x}")))
    };
    match kind {
        "grid" => {
            let arr = v.as_array().ok_or_else(|| bad("grid degree must be an array of pairs".into()))?;
            let mut pairs = Vec::with_capacity(arr.len());
            for pair in arr {
                match pair.as_array().map(Vec::as_slice) {
                    Some([d, e]) => pairs.push((as_u32(d)?, as_u32(e)?)),
                    _ => return Err(bad(format!("expected [direction, exponent], got {pair}"))),
                }
            }
            GridDegree::from_pairs(&pairs)
                .map(Degree::Grid)
                .map_err(|e| bad(e.to_string()))
        }
        "young" => {
            let arr = v.as_array().ok_or_else(|| bad("young degree must be an array of parts".into()))?;
            let parts = arr.iter().map(as_u32).collect::<Result<Vec<_>>>()?;
            Partition::new(&parts).map(Degree::Young).map_err(|e| bad(e.to_string()))
        }
        "orbit" => {
            let n = v.as_u64().ok_or_else(|| bad(format!("expected a positive integer, got {v}")))?;
            Degree::orbit(n).map_err(|e| bad(e.to_string()))
        }
        other => Err(bad(format!("unknown poset kind `{other}`"))),
    }
}

impl ModuleDocument {
    /// The canonical document: generators and relations in graded
    /// lexicographic order.
    pub fn from_presentation(v: &Presentation) -> Self {
        let c = v.canonical();
        ModuleDocument {
            poset: PosetDocument::from_descriptor(c.poset()),
            field: FieldDocument::from_field(c.field()),
            generators: c
                .generators()
                .iter()
                .map(|d| GeneratorDocument {
                    degree: degree_to_json(d),
                })
                .collect(),
            relations: c
                .relations()
                .iter()
                .map(|r| RelationDocument {
                    degree: degree_to_json(&r.degree),
                    entries: r
                        .entries
                        .iter()
                        .map(|(g, s)| EntryDocument {
                            gen: *g,
                            scalar: c.field().format(s),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        let poset = self.poset.to_descriptor()?;
        let field = self.field.to_field()?;
        let kind = poset.kind();
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| degree_from_json(kind, &g.degree, &format!("generators[{i}].degree")))
            .collect::<Result<Vec<_>>>()?;
        let relations = self
            .relations
            .iter()
            .enumerate()
            .map(|(r, rel)| {
                let degree = degree_from_json(kind, &rel.degree, &format!("relations[{r}].degree"))?;
                let entries = rel
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(k, e)| {
                        let s = field.parse(&e.scalar).map_err(|err| {
                            Error::parse(format!("relations[{r}].entries[{k}].scalar"), err.to_string())
                        })?;
                        Ok((e.gen, s))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((degree, entries))
            })
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(poset, field, generators, relations)
    }
}

impl Presentation {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModuleDocument::from_presentation(self)).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Presentation> {
        let doc: ModuleDocument =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("line {}", e.line()), e.to_string()))?;
        doc.to_presentation()
    }
}
