//! Canonical JSON form of a linkage with its input/output roles and domain.
//!
//! Object keys come out sorted and floats use the shortest decimal that reads
//! back to the same `f64`, so equal documents serialize to equal bytes.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::compiler::{CompiledLinkage, CurveTracer, RealizedSet};
use crate::error::SchemaError;
use crate::gadgets::{Disc, FunctionalGadget};
use crate::linkage::{EdgeKind, Linkage, PlanePoint, VertexId};

// Field order below is alphabetical; serde writes fields in declaration order.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    domain: Vec<RawDisc>,
    edges: Vec<RawEdge>,
    inputs: Vec<String>,
    #[serde(default)]
    meta: Map<String, Value>,
    outputs: Vec<String>,
    vertices: Vec<RawVertex>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDisc {
    center: [f64; 2],
    radius: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    kind: EdgeKind,
    length: f64,
    u: String,
    v: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    fixed: Option<[f64; 2]>,
    id: String,
}

/// A linkage together with the vertices that carry inputs and outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkageDoc {
    pub linkage: Linkage,
    pub inputs: Vec<VertexId>,
    pub outputs: Vec<VertexId>,
    pub domain: Vec<Disc>,
    pub meta: Map<String, Value>,
}

fn pair(p: PlanePoint) -> [f64; 2] {
    [p.re, p.im]
}

impl LinkageDoc {
    pub fn from_gadget(g: &FunctionalGadget) -> LinkageDoc {
        let meta = match g.meta() {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        LinkageDoc {
            linkage: g.linkage.clone(),
            inputs: g.inputs.clone(),
            outputs: g.outputs.clone(),
            domain: g.domain.discs.clone(),
            meta,
        }
    }

    pub fn from_compiled(c: &CompiledLinkage) -> LinkageDoc {
        let mut meta = c.meta();
        meta.insert("kind".into(), "map".into());
        LinkageDoc {
            linkage: c.gadget.linkage.clone(),
            inputs: c.gadget.inputs.clone(),
            outputs: c.gadget.outputs.clone(),
            domain: c.gadget.domain.discs.clone(),
            meta,
        }
    }

    pub fn from_realized(s: &RealizedSet) -> LinkageDoc {
        let mut meta = s.meta();
        meta.insert("kind".into(), "set".into());
        LinkageDoc {
            linkage: s.linkage.clone(),
            inputs: s.inputs().to_vec(),
            outputs: s.compiled.gadget.outputs.clone(),
            domain: s.compiled.gadget.domain.discs.clone(),
            meta,
        }
    }

    pub fn from_tracer(t: &CurveTracer) -> LinkageDoc {
        let mut meta = t.compiled.meta();
        meta.insert("kind".into(), "curve".into());
        meta.insert("alpha".into(), Value::String(t.alpha.to_string()));
        meta.insert("interval".into(), serde_json::json!([t.a, t.b]));
        LinkageDoc {
            linkage: t.linkage.clone(),
            inputs: vec![t.input.clone()],
            outputs: vec![t.output.clone()],
            domain: t.compiled.gadget.domain.discs.clone(),
            meta,
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self.raw()).expect("linkage documents are always representable")
    }

    /// Canonical compact serialization.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_value()).expect("serializing a JSON value cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializing a JSON value cannot fail")
    }

    fn raw(&self) -> RawDoc {
        RawDoc {
            domain: self
                .domain
                .iter()
                .map(|d| RawDisc { center: pair(d.center), radius: d.radius })
                .collect(),
            edges: self
                .linkage
                .edges()
                .map(|e| RawEdge {
                    kind: e.kind,
                    length: e.length,
                    u: e.u.as_str().to_owned(),
                    v: e.v.as_str().to_owned(),
                })
                .collect(),
            inputs: self.inputs.iter().map(|v| v.as_str().to_owned()).collect(),
            // Round-tripping through `Value` sorts nested keys too.
            meta: serde_json::from_value(Value::Object(self.meta.clone())).unwrap_or_default(),
            outputs: self.outputs.iter().map(|v| v.as_str().to_owned()).collect(),
            vertices: self
                .linkage
                .vertices()
                .map(|(id, p)| RawVertex { fixed: p.map(pair), id: id.as_str().to_owned() })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<LinkageDoc, SchemaError> {
        let raw: RawDoc = serde_json::from_str(text)?;
        let mut linkage = Linkage::new();
        for v in &raw.vertices {
            match v.fixed {
                Some([re, im]) => {
                    linkage.add_fixed(v.id.as_str(), PlanePoint::new(re, im))?;
                }
                None => {
                    linkage.add_vertex(v.id.as_str());
                }
            }
        }
        for e in &raw.edges {
            linkage.add_edge(e.u.as_str(), e.v.as_str(), e.length, e.kind)?;
        }
        let roles = |ids: &[String], what: &str| -> Result<Vec<VertexId>, SchemaError> {
            ids.iter()
                .map(|s| {
                    if linkage.contains(s.as_str()) {
                        Ok(VertexId::new(s))
                    } else {
                        Err(SchemaError::Invalid(format!("{what} vertex `{s}` is not declared")))
                    }
                })
                .collect()
        };
        let inputs = roles(&raw.inputs, "input")?;
        let outputs = roles(&raw.outputs, "output")?;
        let domain = raw
            .domain
            .iter()
            .map(|d| {
                if d.radius > 0.0 && d.radius.is_finite() {
                    Ok(Disc::new(PlanePoint::new(d.center[0], d.center[1]), d.radius))
                } else {
                    Err(SchemaError::Invalid(format!("domain radius {} must be positive", d.radius)))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinkageDoc { linkage, inputs, outputs, domain, meta: raw.meta })
    }

    pub fn meta_str(&self, key: &str) -> Option<&str> {
        self.meta.get(key).and_then(Value::as_str)
    }
}
