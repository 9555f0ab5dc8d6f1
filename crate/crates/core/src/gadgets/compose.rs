//! Composition, products and identity pairing of functional gadgets.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::Value;

use super::witness::Node;
use super::{Domain, FunctionalGadget, MapFn};
use crate::error::GadgetError;
use crate::linkage::{PlanePoint, VertexId};

type C = PlanePoint;

fn composition(msg: impl Into<String>) -> GadgetError {
    GadgetError::Composition(msg.into())
}

fn check_disjoint(parts: &[&FunctionalGadget]) -> Result<(), GadgetError> {
    let mut seen: HashMap<&VertexId, usize> = HashMap::new();
    for (i, g) in parts.iter().enumerate() {
        for v in g.linkage.vertex_ids() {
            if let Some(j) = seen.insert(v, i) {
                if j != i {
                    return Err(composition(format!(
                        "vertex {v} occurs in two operands; namespace them first"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Gadget for `second ∘ first`: the outputs of `first` are identified with the
/// inputs of `second`. Vertex ids of the two operands must be disjoint.
pub fn compose(
    first: &FunctionalGadget,
    second: &FunctionalGadget,
) -> Result<FunctionalGadget, GadgetError> {
    if first.outputs.len() != second.inputs.len() {
        return Err(composition(format!(
            "{} has {} outputs but {} takes {} inputs",
            first.name,
            first.outputs.len(),
            second.name,
            second.inputs.len()
        )));
    }
    check_disjoint(&[first, second])?;
    let probe = first.domain.center();
    if !second.domain.contains(&first.apply(&probe)) {
        return Err(composition(format!(
            "image of the center of the {} domain misses the {} domain",
            first.name, second.name
        )));
    }

    let mut linkage = first.linkage.union(&second.linkage)?;
    let mut rep: HashMap<VertexId, VertexId> = HashMap::new();
    let find = |rep: &HashMap<VertexId, VertexId>, v: &VertexId| {
        let mut v = v.clone();
        while let Some(n) = rep.get(&v) {
            v = n.clone();
        }
        v
    };
    for (o, i) in first.outputs.iter().zip(&second.inputs) {
        let (a, b) = (find(&rep, o), find(&rep, i));
        if a == b {
            continue;
        }
        linkage = linkage.identify_vertices(&a, &b)?;
        rep.insert(b, a);
    }
    let f = |v: &VertexId| find(&rep, v);
    let w1 = first.witness.rename(&f);
    let w2 = second.witness.rename(&f);
    let mid: Vec<VertexId> = first.outputs.iter().map(f).collect();

    let (m1, m2) = (first.map.clone(), second.map.clone());
    let map: MapFn = Arc::new(move |z: &[C]| m2(&m1(z)));
    let domain = first
        .domain
        .clone()
        .with_pullback(first.map.clone(), second.domain.clone());
    let mut params = BTreeMap::new();
    params.insert("first".into(), Value::String(first.name.clone()));
    params.insert("second".into(), Value::String(second.name.clone()));
    Ok(FunctionalGadget {
        name: "compose".into(),
        params,
        linkage,
        inputs: first.inputs.iter().map(f).collect(),
        outputs: second.outputs.iter().map(f).collect(),
        domain,
        strong: first.strong && second.strong,
        degree: &first.degree * &second.degree,
        map,
        witness: Arc::new(Node::Compose {
            first: Arc::new(w1),
            second: Arc::new(w2),
            mid,
        }),
    })
}

/// Disjoint union acting on concatenated input tuples.
pub fn product(parts: &[&FunctionalGadget]) -> Result<FunctionalGadget, GadgetError> {
    check_disjoint(parts)?;
    let mut linkage = crate::linkage::Linkage::new();
    for g in parts {
        linkage = linkage.union(&g.linkage)?;
    }
    let arities: Vec<usize> = parts.iter().map(|g| g.inputs.len()).collect();
    let maps: Vec<MapFn> = parts.iter().map(|g| g.map.clone()).collect();
    let map: MapFn = Arc::new(move |z: &[C]| {
        let mut out = Vec::new();
        let mut at = 0;
        for (m, n) in maps.iter().zip(&arities) {
            out.extend(m(&z[at..at + n]));
            at += n;
        }
        out
    });
    let domains: Vec<&Domain> = parts.iter().map(|g| &g.domain).collect();
    let names: Vec<Value> = parts.iter().map(|g| Value::String(g.name.clone())).collect();
    let mut params = BTreeMap::new();
    params.insert("parts".into(), Value::Array(names));
    Ok(FunctionalGadget {
        name: "product".into(),
        params,
        linkage,
        inputs: parts.iter().flat_map(|g| g.inputs.clone()).collect(),
        outputs: parts.iter().flat_map(|g| g.outputs.clone()).collect(),
        domain: Domain::product(&domains),
        strong: parts.iter().all(|g| g.strong),
        degree: parts.iter().fold(BigUint::from(1u32), |acc, g| acc * &g.degree),
        map,
        witness: Arc::new(Node::Product {
            parts: parts
                .iter()
                .map(|g| (g.witness.clone(), g.inputs.len()))
                .collect(),
        }),
    })
}

/// Same linkage, with the inputs appended to the outputs: `z ↦ (f(z), z)`.
pub fn pair_with_identity(g: &FunctionalGadget) -> FunctionalGadget {
    let m = g.map.clone();
    let mut out = g.clone();
    out.outputs.extend(g.inputs.iter().cloned());
    out.map = Arc::new(move |z: &[C]| {
        let mut v = m(z);
        v.extend_from_slice(z);
        v
    });
    out
}
