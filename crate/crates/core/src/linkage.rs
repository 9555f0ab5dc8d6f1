//! Cabled linkages: graphs with rigid rods, cables and anchored vertices.
//!
//! A [`Linkage`] is an immutable value; every structural operation returns a new
//! linkage. Membership in the configuration space is decided by [`Linkage::residual`].

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::LinkageError;

/// A point of the plane, identified with ℂ.
pub type PlanePoint = Complex64;

/// Vertex identifier. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(Arc<str>);

impl VertexId {
    pub fn new(s: impl AsRef<str>) -> Self {
        VertexId(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn prefixed(&self, prefix: &str) -> Self {
        VertexId::new(format!("{prefix}{}", self.0))
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s)
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId::new(s)
    }
}

impl Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Rigid,
    Cable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub length: f64,
    pub kind: EdgeKind,
}

impl Edge {
    /// Constraint violation of this edge for the given endpoint positions.
    pub fn violation(&self, pu: PlanePoint, pv: PlanePoint) -> f64 {
        edge_violation((pu - pv).norm(), self.length, self.kind)
    }
}

pub(crate) fn edge_violation(dist: f64, length: f64, kind: EdgeKind) -> f64 {
    match kind {
        EdgeKind::Rigid => (dist - length).abs(),
        EdgeKind::Cable => (dist - length).max(0.0),
    }
}

/// An assignment of plane points to vertices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Configuration {
    positions: HashMap<VertexId, PlanePoint>,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get<Q: Borrow<str> + ?Sized>(&self, id: &Q) -> Option<PlanePoint> {
        self.positions.get(id.borrow()).copied()
    }

    pub fn insert(&mut self, id: impl Into<VertexId>, p: PlanePoint) -> Option<PlanePoint> {
        self.positions.insert(id.into(), p)
    }

    pub fn remove<Q: Borrow<str> + ?Sized>(&mut self, id: &Q) -> Option<PlanePoint> {
        self.positions.remove(id.borrow())
    }

    pub fn contains<Q: Borrow<str> + ?Sized>(&self, id: &Q) -> bool {
        self.positions.contains_key(id.borrow())
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, &PlanePoint)> {
        self.positions.iter()
    }

    /// Sorted copy of the assignment, for reproducible output.
    pub fn sorted(&self) -> BTreeMap<VertexId, PlanePoint> {
        self.positions.iter().map(|(k, v)| (k.clone(), *v)).collect()
    }

    /// Applies `z ↦ scale·z + shift` to every position.
    pub fn affine(&self, scale: f64, shift: PlanePoint) -> Configuration {
        Configuration {
            positions: self
                .positions
                .iter()
                .map(|(k, p)| (k.clone(), p * scale + shift))
                .collect(),
        }
    }

    /// Largest distance between corresponding positions over the vertices of `self`.
    /// Vertices missing from `other` count as infinitely far.
    pub fn distance(&self, other: &Configuration) -> f64 {
        self.positions
            .iter()
            .map(|(k, p)| other.get(k).map_or(f64::INFINITY, |q| (p - q).norm()))
            .fold(0.0, f64::max)
    }

    /// Restriction to the given vertex set.
    pub fn restrict<'a>(&self, ids: impl IntoIterator<Item = &'a VertexId>) -> Configuration {
        Configuration {
            positions: ids
                .into_iter()
                .filter_map(|k| self.positions.get(k).map(|p| (k.clone(), *p)))
                .collect(),
        }
    }
}

impl FromIterator<(VertexId, PlanePoint)> for Configuration {
    fn from_iter<T: IntoIterator<Item = (VertexId, PlanePoint)>>(iter: T) -> Self {
        Configuration {
            positions: iter.into_iter().collect(),
        }
    }
}

fn edge_key(u: &VertexId, v: &VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u.clone(), v.clone())
    } else {
        (v.clone(), u.clone())
    }
}

/// Relative tolerance used when deciding that two lengths or anchors agree.
const AGREE_TOL: f64 = 1e-12;

fn agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= AGREE_TOL * (1.0 + a.abs().max(b.abs()))
}

fn points_agree(a: PlanePoint, b: PlanePoint) -> bool {
    (a - b).norm() <= AGREE_TOL * (1.0 + a.norm().max(b.norm()))
}

/// A cabled linkage: vertices, rigid and cable edges, and fixed-vertex anchors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Linkage {
    vertices: BTreeMap<VertexId, Option<PlanePoint>>,
    edges: BTreeMap<(VertexId, VertexId), (f64, EdgeKind)>,
}

impl Linkage {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a free vertex. Declaring an existing vertex is a no-op.
    pub fn add_vertex(&mut self, id: impl Into<VertexId>) -> VertexId {
        let id = id.into();
        self.vertices.entry(id.clone()).or_insert(None);
        id
    }

    /// Declares a vertex anchored at `p`. An existing free vertex becomes fixed.
    pub fn add_fixed(
        &mut self,
        id: impl Into<VertexId>,
        p: PlanePoint,
    ) -> Result<VertexId, LinkageError> {
        let id = id.into();
        if !(p.re.is_finite() && p.im.is_finite()) {
            return Err(LinkageError::NonFinite(id));
        }
        match self.vertices.get(&id) {
            Some(Some(q)) if !points_agree(*q, p) => {
                return Err(LinkageError::Incompatible(format!(
                    "vertex {id} anchored at both {q} and {p}"
                )))
            }
            _ => {
                self.vertices.insert(id.clone(), Some(p));
            }
        }
        Ok(id)
    }

    /// Adds an edge. A parallel edge of equal length and kind is merged;
    /// anything else on the same vertex pair is rejected.
    pub fn add_edge(
        &mut self,
        u: impl Into<VertexId>,
        v: impl Into<VertexId>,
        length: f64,
        kind: EdgeKind,
    ) -> Result<(), LinkageError> {
        let (u, v) = (u.into(), v.into());
        if u == v {
            return Err(LinkageError::SelfLoop(u));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(LinkageError::BadLength { u, v, length });
        }
        if !self.vertices.contains_key(&u) || !self.vertices.contains_key(&v) {
            return Err(LinkageError::UnknownEndpoint { u, v });
        }
        let key = edge_key(&u, &v);
        match self.edges.get(&key) {
            Some(&(l, k)) => {
                if k != kind || !agree(l, length) {
                    return Err(LinkageError::Incompatible(format!(
                        "edge {u}-{v} declared as {k:?} {l} and {kind:?} {length}"
                    )));
                }
            }
            None => {
                self.edges.insert(key, (length, kind));
            }
        }
        Ok(())
    }

    pub fn rigid(
        &mut self,
        u: impl Into<VertexId>,
        v: impl Into<VertexId>,
        length: f64,
    ) -> Result<(), LinkageError> {
        self.add_edge(u, v, length, EdgeKind::Rigid)
    }

    pub fn cable(
        &mut self,
        u: impl Into<VertexId>,
        v: impl Into<VertexId>,
        length: f64,
    ) -> Result<(), LinkageError> {
        self.add_edge(u, v, length, EdgeKind::Cable)
    }

    pub fn contains<Q: Borrow<str> + ?Sized>(&self, id: &Q) -> bool {
        self.vertices.contains_key(id.borrow())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.keys()
    }

    /// All vertices with their anchors, in id order.
    pub fn vertices(&self) -> impl Iterator<Item = (&VertexId, Option<PlanePoint>)> {
        self.vertices.iter().map(|(k, v)| (k, *v))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|((u, v), &(length, kind))| Edge {
            u: u.clone(),
            v: v.clone(),
            length,
            kind,
        })
    }

    pub fn edge(&self, u: &VertexId, v: &VertexId) -> Option<Edge> {
        self.edges.get(&edge_key(u, v)).map(|&(length, kind)| Edge {
            u: u.clone(),
            v: v.clone(),
            length,
            kind,
        })
    }

    pub fn anchor<Q: Borrow<str> + ?Sized>(&self, id: &Q) -> Option<PlanePoint> {
        self.vertices.get(id.borrow()).copied().flatten()
    }

    pub fn is_fixed<Q: Borrow<str> + ?Sized>(&self, id: &Q) -> bool {
        self.anchor(id).is_some()
    }

    pub fn anchors(&self) -> impl Iterator<Item = (&VertexId, PlanePoint)> {
        self.vertices
            .iter()
            .filter_map(|(k, v)| v.map(|p| (k, p)))
    }

    pub fn neighbors<'a>(&'a self, id: &'a VertexId) -> impl Iterator<Item = Edge> + 'a {
        self.edges().filter(move |e| &e.u == id || &e.v == id)
    }

    /// Maximum constraint violation of `conf`: rigid deviation, cable excess and
    /// anchor displacement. Zero exactly on the configuration space.
    pub fn residual(&self, conf: &Configuration) -> Result<f64, LinkageError> {
        let mut worst = 0.0f64;
        for (id, anchor) in &self.vertices {
            let p = conf
                .get(id)
                .ok_or_else(|| LinkageError::MalformedConfiguration(id.clone()))?;
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(LinkageError::NonFinite(id.clone()));
            }
            if let Some(a) = anchor {
                worst = worst.max((p - a).norm());
            }
        }
        for ((u, v), &(length, kind)) in &self.edges {
            // Both endpoints were checked above.
            let d = (conf.get(u).unwrap_or_default() - conf.get(v).unwrap_or_default()).norm();
            worst = worst.max(edge_violation(d, length, kind));
        }
        Ok(worst)
    }

    /// Graph union. Shared vertices and edges must agree on anchors, lengths and kinds.
    pub fn union(&self, other: &Linkage) -> Result<Linkage, LinkageError> {
        let mut out = self.clone();
        for (id, anchor) in &other.vertices {
            match anchor {
                Some(p) => {
                    out.add_fixed(id.clone(), *p)?;
                }
                None => {
                    out.add_vertex(id.clone());
                }
            }
        }
        for e in other.edges() {
            out.add_edge(e.u, e.v, e.length, e.kind)?;
        }
        Ok(out)
    }

    /// Pins the listed free vertices. Re-fixing an anchored vertex is an error.
    pub fn fix_vertices(&self, anchors: &[(VertexId, PlanePoint)]) -> Result<Linkage, LinkageError> {
        let mut out = self.clone();
        for (id, p) in anchors {
            match self.vertices.get(id) {
                None => return Err(LinkageError::UnknownVertex(id.clone())),
                Some(Some(_)) => return Err(LinkageError::AlreadyFixed(id.clone())),
                Some(None) => {
                    out.add_fixed(id.clone(), *p)?;
                }
            }
        }
        Ok(out)
    }

    fn fresh_id(&self, base: &str) -> VertexId {
        if !self.contains(base) {
            return VertexId::new(base);
        }
        (1..)
            .map(|k| format!("{base}#{k}"))
            .find(|s| !self.contains(s))
            .map(VertexId::from)
            .expect("unbounded id space")
    }

    /// Adds a fresh vertex fixed at `anchor` joined to `v` by a cable of length `b`.
    /// Returns the new linkage and the id of the anchor vertex.
    pub fn tether(
        &self,
        v: &VertexId,
        anchor: PlanePoint,
        b: f64,
    ) -> Result<(Linkage, VertexId), LinkageError> {
        match self.vertices.get(v) {
            None => return Err(LinkageError::UnknownVertex(v.clone())),
            Some(Some(_)) => return Err(LinkageError::AlreadyFixed(v.clone())),
            Some(None) => {}
        }
        let mut out = self.clone();
        let u = out.fresh_id(&format!("{v}^tether"));
        out.add_fixed(u.clone(), anchor)?;
        out.cable(u.clone(), v.clone(), b)?;
        Ok((out, u))
    }

    /// Quotient identifying `w` with `v`; the merged vertex keeps the id `v`.
    pub fn identify_vertices(&self, v: &VertexId, w: &VertexId) -> Result<Linkage, LinkageError> {
        if v == w {
            return Ok(self.clone());
        }
        let forbid = |reason: String| LinkageError::QuotientForbidden {
            v: v.clone(),
            w: w.clone(),
            reason,
        };
        let av = *self
            .vertices
            .get(v)
            .ok_or_else(|| LinkageError::UnknownVertex(v.clone()))?;
        let aw = *self
            .vertices
            .get(w)
            .ok_or_else(|| LinkageError::UnknownVertex(w.clone()))?;
        if self.edges.contains_key(&edge_key(v, w)) {
            return Err(forbid("an edge joins them".into()));
        }
        let anchor = match (av, aw) {
            (Some(p), Some(q)) if !points_agree(p, q) => {
                return Err(forbid(format!("anchored at distinct points {p} and {q}")))
            }
            (Some(p), _) | (None, Some(p)) => Some(p),
            (None, None) => None,
        };
        let mut out = Linkage::new();
        for (id, a) in &self.vertices {
            if id == w {
                continue;
            }
            if id == v {
                out.vertices.insert(id.clone(), anchor);
            } else {
                out.vertices.insert(id.clone(), *a);
            }
        }
        for e in self.edges() {
            let map = |x: VertexId| if &x == w { v.clone() } else { x };
            let (a, b) = (map(e.u), map(e.v));
            out.add_edge(a.clone(), b.clone(), e.length, e.kind)
                .map_err(|_| forbid(format!("common neighbour edges to {a}/{b} disagree")))?;
        }
        Ok(out)
    }

    /// Injective renaming of vertex ids.
    pub fn rename(&self, f: impl Fn(&VertexId) -> VertexId) -> Result<Linkage, LinkageError> {
        let mut out = Linkage::new();
        for (id, a) in &self.vertices {
            let n = f(id);
            if out.vertices.insert(n.clone(), *a).is_some() {
                return Err(LinkageError::Incompatible(format!(
                    "renaming is not injective at {n}"
                )));
            }
        }
        for e in self.edges() {
            out.add_edge(f(&e.u), f(&e.v), e.length, e.kind)?;
        }
        Ok(out)
    }

    /// Shifts every anchor by `z`.
    pub fn translate(&self, z: PlanePoint) -> Linkage {
        let mut out = self.clone();
        for a in out.vertices.values_mut().flatten() {
            *a += z;
        }
        out
    }

    /// Multiplies every length and anchor by `n`.
    pub fn rescale(&self, n: f64) -> Result<Linkage, LinkageError> {
        if !(n.is_finite() && n > 0.0) {
            return Err(LinkageError::BadScale(n));
        }
        let mut out = self.clone();
        for a in out.vertices.values_mut().flatten() {
            *a *= n;
        }
        for (l, _) in out.edges.values_mut() {
            *l *= n;
        }
        Ok(out)
    }

    /// Connected components as lists of vertex ids (each sorted), ordered by smallest id.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let ids: Vec<&VertexId> = self.vertices.keys().collect();
        let index: HashMap<&VertexId, usize> = ids.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut uf = UnionFind::<usize>::new(ids.len());
        for (u, v) in self.edges.keys() {
            uf.union(index[u], index[v]);
        }
        let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push((*id).clone());
        }
        let mut comps: Vec<Vec<VertexId>> = groups.into_values().collect();
        comps.sort_by(|a, b| a[0].cmp(&b[0]));
        comps
    }

    /// Fixes the lowest-id vertex of every anchor-free component at the origin.
    /// Returns the compact linkage and the number of components fixed.
    pub fn free_component_fix(&self) -> (Linkage, usize) {
        let mut out = self.clone();
        let mut k = 0;
        for comp in self.components() {
            if comp.iter().all(|id| !self.is_fixed(id)) {
                out.vertices.insert(comp[0].clone(), Some(PlanePoint::new(0.0, 0.0)));
                k += 1;
            }
        }
        (out, k)
    }

    /// Equivalent linkage with exactly three anchors at 0, 1 and i. Every other
    /// anchored vertex is released and braced to the three anchors by rods.
    pub fn reduce_to_three_fixed(&self) -> Result<Linkage, LinkageError> {
        let bases = three_anchor_bases();
        let already = self.anchors().count() == 3
            && bases
                .iter()
                .all(|(id, p)| self.anchor(id.as_str()).is_some_and(|q| points_agree(q, *p)));
        if already {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        for (id, p) in &bases {
            if out.contains(id.as_str()) && !out.anchor(id.as_str()).is_some_and(|q| points_agree(q, *p)) {
                return Err(LinkageError::Incompatible(format!(
                    "reserved vertex id {id} already in use"
                )));
            }
            out.add_fixed(id.clone(), *p)?;
        }
        let anchored: Vec<(VertexId, PlanePoint)> = self
            .anchors()
            .filter(|(id, _)| !bases.iter().any(|(b, _)| b == *id))
            .map(|(id, p)| (id.clone(), p))
            .collect();
        for (v, z) in anchored {
            if let Some((base, _)) = bases.iter().find(|(_, p)| points_agree(*p, z)) {
                out = out.identify_vertices(base, &v)?;
                continue;
            }
            out.vertices.insert(v.clone(), None);
            for (base, p) in &bases {
                out.rigid(v.clone(), base.clone(), (z - p).norm())?;
            }
        }
        Ok(out)
    }

    /// Sublinkage induced by the given vertices.
    pub fn induced(&self, keep: &[VertexId]) -> Linkage {
        let set: std::collections::BTreeSet<&VertexId> = keep.iter().collect();
        Linkage {
            vertices: self
                .vertices
                .iter()
                .filter(|(k, _)| set.contains(k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            edges: self
                .edges
                .iter()
                .filter(|((u, v), _)| set.contains(u) && set.contains(v))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    /// Sum of all edge lengths.
    pub fn total_length(&self) -> f64 {
        self.edges.values().map(|(l, _)| l).sum()
    }
}

/// Reserved anchor vertices used by [`Linkage::reduce_to_three_fixed`].
pub fn three_anchor_bases() -> [(VertexId, PlanePoint); 3] {
    [
        (VertexId::new("$v0"), PlanePoint::new(0.0, 0.0)),
        (VertexId::new("$v1"), PlanePoint::new(1.0, 0.0)),
        (VertexId::new("$v2"), PlanePoint::new(0.0, 1.0)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> PlanePoint {
        PlanePoint::new(re, im)
    }

    fn one_edge(kind: EdgeKind) -> Linkage {
        let mut l = Linkage::new();
        l.add_fixed("a", c(0.0, 0.0)).unwrap();
        l.add_vertex("b");
        l.add_edge("a", "b", 1.0, kind).unwrap();
        l
    }

    fn conf(pairs: &[(&str, PlanePoint)]) -> Configuration {
        pairs.iter().map(|(k, p)| (VertexId::new(k), *p)).collect()
    }

    #[test]
    fn residual_examples() {
        let rigid = one_edge(EdgeKind::Rigid);
        assert_eq!(rigid.residual(&conf(&[("a", c(0.0, 0.0)), ("b", c(1.0, 0.0))])).unwrap(), 0.0);
        let r = rigid.residual(&conf(&[("a", c(0.0, 0.0)), ("b", c(1.25, 0.0))])).unwrap();
        assert!((r - 0.25).abs() < 1e-15);
        let cable = one_edge(EdgeKind::Cable);
        assert_eq!(cable.residual(&conf(&[("a", c(0.0, 0.0)), ("b", c(0.5, 0.0))])).unwrap(), 0.0);
    }

    #[test]
    fn residual_missing_vertex() {
        let l = one_edge(EdgeKind::Rigid);
        let err = l.residual(&conf(&[("a", c(0.0, 0.0))])).unwrap_err();
        assert_eq!(err, LinkageError::MalformedConfiguration("b".into()));
    }

    #[test]
    fn rejects_bad_edges() {
        let mut l = Linkage::new();
        l.add_vertex("a");
        l.add_vertex("b");
        assert!(matches!(l.rigid("a", "b", 0.0), Err(LinkageError::BadLength { .. })));
        assert!(matches!(l.rigid("a", "a", 1.0), Err(LinkageError::SelfLoop(_))));
        assert!(matches!(l.rigid("a", "z", 1.0), Err(LinkageError::UnknownEndpoint { .. })));
        l.rigid("a", "b", 1.0).unwrap();
        l.rigid("b", "a", 1.0).unwrap();
        assert_eq!(l.edge_count(), 1);
        assert!(l.rigid("a", "b", 2.0).is_err());
        assert!(l.cable("a", "b", 1.0).is_err());
    }

    #[test]
    fn union_idempotent_and_conflicts() {
        let l = one_edge(EdgeKind::Rigid);
        assert_eq!(l.union(&l).unwrap(), l);
        let mut m = Linkage::new();
        m.add_vertex("a");
        m.add_vertex("b");
        m.rigid("a", "b", 2.0).unwrap();
        assert!(l.union(&m).is_err());
        let mut n = Linkage::new();
        n.add_fixed("a", c(1.0, 0.0)).unwrap();
        assert!(l.union(&n).is_err());
    }

    #[test]
    fn fix_and_refix() {
        let l = one_edge(EdgeKind::Rigid);
        let f = l.fix_vertices(&[("b".into(), c(0.0, 1.0))]).unwrap();
        assert_eq!(f.residual(&conf(&[("a", c(0.0, 0.0)), ("b", c(0.0, 1.0))])).unwrap(), 0.0);
        assert_eq!(
            f.fix_vertices(&[("b".into(), c(0.0, 1.0))]).unwrap_err(),
            LinkageError::AlreadyFixed("b".into())
        );
    }

    #[test]
    fn tether_adds_anchor_and_cable() {
        let l = one_edge(EdgeKind::Rigid);
        let (t, u) = l.tether(&"b".into(), c(1.0, 0.0), 0.5).unwrap();
        assert_eq!(t.anchor(u.as_str()), Some(c(1.0, 0.0)));
        let e = t.edge(&u, &"b".into()).unwrap();
        assert_eq!(e.kind, EdgeKind::Cable);
        assert!(l.tether(&"a".into(), c(0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn identify_rules() {
        let mut l = Linkage::new();
        l.add_vertex("v");
        l.add_vertex("w");
        let q = l.identify_vertices(&"v".into(), &"w".into()).unwrap();
        assert_eq!(q.vertex_count(), 1);

        let mut l = Linkage::new();
        for id in ["u", "v", "w"] {
            l.add_vertex(id);
        }
        l.rigid("v", "u", 1.0).unwrap();
        l.rigid("w", "u", 2.0).unwrap();
        assert!(matches!(
            l.identify_vertices(&"v".into(), &"w".into()),
            Err(LinkageError::QuotientForbidden { .. })
        ));
        let mut e = Linkage::new();
        e.add_vertex("v");
        e.add_vertex("w");
        e.rigid("v", "w", 1.0).unwrap();
        assert!(e.identify_vertices(&"v".into(), &"w".into()).is_err());
    }

    #[test]
    fn rescale_and_translate() {
        let mut l = Linkage::new();
        l.add_fixed("a", c(1.0, 1.0)).unwrap();
        l.add_vertex("b");
        l.rigid("a", "b", 2.0).unwrap();
        assert_eq!(l.rescale(1.0).unwrap(), l);
        let s = l.rescale(3.0).unwrap();
        assert_eq!(s.anchor("a"), Some(c(3.0, 3.0)));
        assert_eq!(s.edge(&"a".into(), &"b".into()).unwrap().length, 6.0);
        assert!(l.rescale(0.0).is_err());
        assert_eq!(l.translate(c(1.0, -1.0)).anchor("a"), Some(c(2.0, 0.0)));
    }

    #[test]
    fn free_components() {
        let mut l = Linkage::new();
        for id in ["p", "q", "r"] {
            l.add_vertex(id);
        }
        let (f, k) = l.free_component_fix();
        assert_eq!(k, 3);
        assert_eq!(f.anchors().count(), 3);
        let a = one_edge(EdgeKind::Rigid);
        let (g, k) = a.free_component_fix();
        assert_eq!(k, 0);
        assert_eq!(g, a);
    }

    #[test]
    fn three_fixed_examples() {
        let mut l = Linkage::new();
        l.add_fixed("o", c(0.0, 0.0)).unwrap();
        l.add_vertex("x");
        l.rigid("o", "x", 1.0).unwrap();
        let r = l.reduce_to_three_fixed().unwrap();
        assert!(!r.contains("o"));
        assert!(r.edge(&"$v0".into(), &"x".into()).is_some());

        let mut l = Linkage::new();
        l.add_fixed("f", c(5.0, 0.0)).unwrap();
        let r = l.reduce_to_three_fixed().unwrap();
        let len = |b: &str| r.edge(&"f".into(), &b.into()).unwrap().length;
        assert!((len("$v0") - 5.0).abs() < 1e-15);
        assert!((len("$v1") - 4.0).abs() < 1e-15);
        assert!((len("$v2") - 26f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.anchors().count(), 3);
        let again = r.reduce_to_three_fixed().unwrap();
        assert_eq!(again.anchors().count(), 3);
        assert_eq!(again, r);
    }
}
