use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::Value;

use super::witness::{Leaf, Node};
use super::{Domain, FunctionalGadget, MapFn};
use crate::error::{GadgetError, LinkageError};
use crate::linkage::{Linkage, PlanePoint, VertexId};

type C = PlanePoint;

/// Builder for a single-leaf gadget.
///
/// Vertices are either free (positions supplied by the solver closure, in
/// declaration order), fixed, or derived as an affine point `X + t(Y − X)` on a
/// rod, which the builder fills in itself.
#[derive(Default)]
pub struct Sketch {
    pub linkage: Linkage,
    free: Vec<VertexId>,
    fixed: Vec<(VertexId, C)>,
    derived: Vec<(VertexId, VertexId, VertexId, f64)>,
    err: Option<LinkageError>,
}

impl Sketch {
    pub fn new() -> Sketch {
        Sketch::default()
    }

    fn record<T>(&mut self, r: Result<T, LinkageError>) {
        if let Err(e) = r {
            self.err.get_or_insert(e);
        }
    }

    pub fn free(&mut self, id: &str) -> &mut Self {
        let v = self.linkage.add_vertex(id);
        self.free.push(v);
        self
    }

    pub fn fixed(&mut self, id: &str, p: C) -> &mut Self {
        let r = self.linkage.add_fixed(id, p);
        self.record(r);
        self.fixed.push((id.into(), p));
        self
    }

    pub fn rigid(&mut self, u: &str, v: &str, l: f64) -> &mut Self {
        let r = self.linkage.rigid(u, v, l);
        self.record(r);
        self
    }

    pub fn cable(&mut self, u: &str, v: &str, l: f64) -> &mut Self {
        let r = self.linkage.cable(u, v, l);
        self.record(r);
        self
    }

    /// Rod X–M–Y with |XM| = l1, |MY| = l2: the degenerate triangle forces M onto
    /// the segment.
    pub fn collinear(&mut self, x: &str, m: &str, y: &str, l1: f64, l2: f64) -> &mut Self {
        self.rigid(x, m, l1).rigid(m, y, l2).rigid(x, y, l1 + l2)
    }

    /// Edge X–Y of length `l` carrying a middle joint; returns the joint id.
    pub fn jointed(&mut self, x: &str, y: &str, l: f64) -> String {
        let m = format!("m.{x}{y}");
        self.linkage.add_vertex(m.as_str());
        self.derived.push((m.as_str().into(), x.into(), y.into(), 0.5));
        self.collinear(x, &m, y, l / 2.0, l / 2.0);
        m
    }

    /// Parallelogram v0 v1 v2 v3 (so v3 = v0 − v1 + v2) with |v0v1| = p and
    /// |v1v2| = q, braced between the midpoints of v0v1 and v3v2.
    pub fn parallelogram(&mut self, v: [&str; 4], p: f64, q: f64) -> &mut Self {
        let m1 = self.jointed(v[0], v[1], p);
        let m2 = self.jointed(v[3], v[2], p);
        self.rigid(v[1], v[2], q).rigid(v[3], v[0], q).rigid(&m1, &m2, q)
    }

    /// Cable from `v` to a fresh vertex fixed at `anchor`.
    pub fn tether(&mut self, v: &str, anchor: C, l: f64) -> &mut Self {
        let t = format!("{v}^t");
        self.fixed(&t, anchor).cable(v, &t, l)
    }

    /// The linkage alone, for fragments that carry no witness.
    pub fn into_linkage(self) -> Result<Linkage, LinkageError> {
        match self.err {
            Some(e) => Err(e),
            None => Ok(self.linkage),
        }
    }

    /// Builds the gadget. `solve` returns the free positions in declaration order.
    #[allow(clippy::too_many_arguments)]
    pub fn finish(
        &self,
        name: &str,
        params: BTreeMap<String, Value>,
        inputs: &[&str],
        outputs: &[&str],
        bits: usize,
        degree: u64,
        domain: Domain,
        map: MapFn,
        solve: impl Fn(&[C], &[bool]) -> Option<Vec<C>> + Send + Sync + 'static,
    ) -> Result<FunctionalGadget, GadgetError> {
        if let Some(e) = &self.err {
            return Err(e.clone().into());
        }
        let mut ids: Vec<VertexId> = self.free.clone();
        ids.extend(self.fixed.iter().map(|(v, _)| v.clone()));
        ids.extend(self.derived.iter().map(|(v, ..)| v.clone()));
        let slot: HashMap<&VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (v, i)).collect();
        if slot.len() != self.linkage.vertex_count() {
            return Err(GadgetError::BadParameter(format!(
                "{name}: every vertex must be declared exactly once"
            )));
        }
        let derived: Vec<(usize, usize, f64)> = self
            .derived
            .iter()
            .map(|(_, x, y, t)| (slot[x], slot[y], *t))
            .collect();
        let anchors: Vec<C> = self.fixed.iter().map(|(_, p)| *p).collect();
        let n_free = self.free.len();
        let eval = Arc::new(move |z: &[C], s: &[bool]| {
            let mut p = solve(z, s)?;
            if p.len() != n_free {
                return None;
            }
            p.extend_from_slice(&anchors);
            for &(x, y, t) in &derived {
                let q = p[x] + (p[y] - p[x]) * t;
                p.push(q);
            }
            Some(p)
        });
        let leaf = Leaf::new(&self.linkage, ids, bits, eval);
        let inputs: Vec<VertexId> = inputs.iter().map(|&s| s.into()).collect();
        Ok(FunctionalGadget {
            name: name.into(),
            params,
            linkage: self.linkage.clone(),
            witness: Arc::new(Node::Leaf {
                leaf,
                inputs: inputs.clone(),
            }),
            inputs,
            outputs: outputs.iter().map(|&s| s.into()).collect(),
            domain,
            strong: degree == 1,
            degree: BigUint::from(degree),
            map,
        })
    }
}

/// Shorthand for building a parameter map.
pub fn params<const N: usize>(items: [(&str, Value); N]) -> BTreeMap<String, Value> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
