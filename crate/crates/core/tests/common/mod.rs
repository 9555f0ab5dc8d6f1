//! Random linkages and fixtures shared by the property and acceptance suites.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use polylinkage::linkage::{Configuration, EdgeKind, Linkage, VertexId};
use rand::Rng;

/// Two small random linkages on `v0..v3` and `v2..v5`, built around one common
/// placement so that both (and their union) have it as a configuration.
pub struct Pair {
    pub left: Linkage,
    pub right: Linkage,
    pub placement: Configuration,
}

pub fn name(i: usize) -> VertexId {
    VertexId::new(format!("v{i}"))
}

pub fn random_pair(rng: &mut impl Rng) -> Pair {
    let pos: Vec<C> = (0..6)
        .map(|_| C::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
        .collect();
    let fixed: Vec<bool> = (0..6).map(|_| rng.random_bool(0.25)).collect();
    let mut edges = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            let same_side = j < 4 || i >= 2;
            if same_side && rng.random_bool(0.6) {
                let d = (pos[i] - pos[j]).norm();
                if rng.random_bool(0.3) {
                    edges.push((i, j, d * rng.random_range(1.0..1.3), EdgeKind::Cable));
                } else {
                    edges.push((i, j, d, EdgeKind::Rigid));
                }
            }
        }
    }
    let build = |range: std::ops::Range<usize>| {
        let mut l = Linkage::new();
        for i in range.clone() {
            if fixed[i] {
                l.add_fixed(name(i), pos[i]).unwrap();
            } else {
                l.add_vertex(name(i));
            }
        }
        for &(i, j, len, kind) in &edges {
            if range.contains(&i) && range.contains(&j) {
                l.add_edge(name(i), name(j), len, kind).unwrap();
            }
        }
        l
    };
    Pair {
        left: build(0..4),
        right: build(2..6),
        placement: (0..6).map(|i| (name(i), pos[i])).collect(),
    }
}

pub fn part(conf: &Configuration, l: &Linkage) -> Configuration {
    conf.restrict(l.vertex_ids())
}

pub fn jitter(conf: &Configuration, l: &Linkage, eps: f64, rng: &mut impl Rng) -> Configuration {
    conf.iter()
        .map(|(v, p)| {
            let q = if l.is_fixed(v) { *p } else { p + C::new(rng.random_range(-eps..eps), rng.random_range(-eps..eps)) };
            (v.clone(), q)
        })
        .collect()
}

/// Five anchors (one already at a base point) and three free joints.
pub fn five_anchor_linkage() -> Linkage {
    let mut l = Linkage::new();
    let anchors = [
        ("p0", C::new(0.0, 0.0)),
        ("p1", C::new(3.0, 0.5)),
        ("p2", C::new(-1.0, 2.0)),
        ("p3", C::new(2.0, 3.0)),
        ("p4", C::new(-2.0, -1.5)),
    ];
    for (id, p) in anchors {
        l.add_fixed(id, p).unwrap();
    }
    for v in ["x", "y", "w"] {
        l.add_vertex(v);
    }
    l.rigid("p0", "x", 1.5).unwrap();
    l.rigid("x", "y", 2.0).unwrap();
    l.rigid("y", "p1", 2.2).unwrap();
    l.rigid("y", "w", 1.8).unwrap();
    l.cable("w", "p2", 2.5).unwrap();
    l.rigid("w", "p3", 2.4).unwrap();
    l.cable("x", "p4", 3.0).unwrap();
    l
}

