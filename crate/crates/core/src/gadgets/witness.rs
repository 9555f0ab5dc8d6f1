//! Branch-indexed witness evaluation.
//!
//! A witness is a tree of leaves, each a closed-form solver for one elementary
//! gadget. Evaluation writes positions into a shared [`Assignment`]; vertices that
//! were identified during composition receive the same value from both sides, and
//! any disagreement makes the branch infeasible.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::linkage::{edge_violation, Configuration, EdgeKind, Linkage, PlanePoint, VertexId};

type C = PlanePoint;

/// Closed-form position solver: `(inputs, signs) -> positions of every slot`.
pub type LeafFn = Arc<dyn Fn(&[C], &[bool]) -> Option<Vec<C>> + Send + Sync>;

/// Positions written so far, with an undo log.
#[derive(Default)]
pub struct Assignment {
    pos: HashMap<VertexId, C>,
    log: Vec<VertexId>,
}

impl Assignment {
    pub fn get(&self, id: &VertexId) -> Option<C> {
        self.pos.get(id).copied()
    }

    fn checkpoint(&self) -> usize {
        self.log.len()
    }

    fn rollback(&mut self, mark: usize) {
        for id in self.log.drain(mark..) {
            self.pos.remove(&id);
        }
    }

    fn put(&mut self, id: &VertexId, p: C, tol: f64) -> bool {
        match self.pos.get(id) {
            Some(q) => (p - q).norm() <= tol,
            None => {
                self.pos.insert(id.clone(), p);
                self.log.push(id.clone());
                true
            }
        }
    }

    pub fn to_configuration(&self) -> Configuration {
        self.pos.iter().map(|(k, v)| (k.clone(), *v)).collect()
    }
}

#[derive(Clone)]
pub struct Leaf {
    pub(crate) ids: Vec<VertexId>,
    pub(crate) bits: usize,
    pub(crate) eval: LeafFn,
    edges: Vec<(usize, usize, f64, EdgeKind)>,
    anchors: Vec<(usize, C)>,
    tol: f64,
}

impl Leaf {
    /// Wraps `eval`, whose output vector follows the order of `ids`. The local
    /// constraints are read off `linkage`, which must contain exactly those ids.
    pub fn new(linkage: &Linkage, ids: Vec<VertexId>, bits: usize, eval: LeafFn) -> Leaf {
        let slot: HashMap<&VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let edges = linkage
            .edges()
            .map(|e| (slot[&e.u], slot[&e.v], e.length, e.kind))
            .collect();
        let anchors: Vec<(usize, C)> = linkage.anchors().map(|(v, p)| (slot[v], p)).collect();
        let scale = linkage
            .edges()
            .map(|e| e.length)
            .chain(anchors.iter().map(|(_, p)| p.norm()))
            .fold(1.0f64, f64::max);
        Leaf {
            ids,
            bits,
            eval,
            edges,
            anchors,
            tol: tolerance_for(scale),
        }
    }

    fn check(&self, p: &[C]) -> bool {
        if p.len() != self.ids.len() || p.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return false;
        }
        self.anchors.iter().all(|&(i, a)| (p[i] - a).norm() <= self.tol)
            && self
                .edges
                .iter()
                .all(|&(u, v, l, k)| edge_violation((p[u] - p[v]).norm(), l, k) <= self.tol)
    }
}

/// Acceptance tolerance for a fragment whose largest length or anchor is `scale`.
pub fn tolerance_for(scale: f64) -> f64 {
    1e-9f64.max(1e-11 * scale)
}

#[derive(Clone)]
pub enum Node {
    Leaf {
        leaf: Leaf,
        inputs: Vec<VertexId>,
    },
    Compose {
        first: Arc<Node>,
        second: Arc<Node>,
        /// Where the second stage reads its inputs from.
        mid: Vec<VertexId>,
    },
    Product {
        parts: Vec<(Arc<Node>, usize)>,
    },
}

pub struct Walk<'a> {
    pub asg: Assignment,
    pub signs: Vec<bool>,
    fixed: Option<&'a [bool]>,
}

type Cont<'c, 'a> = &'c mut dyn FnMut(&mut Walk<'a>) -> ControlFlow<()>;

impl Node {
    pub fn bits(&self) -> usize {
        match self {
            Node::Leaf { leaf, .. } => leaf.bits,
            Node::Compose { first, second, .. } => first.bits() + second.bits(),
            Node::Product { parts } => parts.iter().map(|(p, _)| p.bits()).sum(),
        }
    }

    pub fn rename(&self, f: &dyn Fn(&VertexId) -> VertexId) -> Node {
        match self {
            Node::Leaf { leaf, inputs } => {
                let mut leaf = leaf.clone();
                leaf.ids = leaf.ids.iter().map(f).collect();
                Node::Leaf {
                    leaf,
                    inputs: inputs.iter().map(f).collect(),
                }
            }
            Node::Compose { first, second, mid } => Node::Compose {
                first: Arc::new(first.rename(f)),
                second: Arc::new(second.rename(f)),
                mid: mid.iter().map(f).collect(),
            },
            Node::Product { parts } => Node::Product {
                parts: parts
                    .iter()
                    .map(|(p, n)| (Arc::new(p.rename(f)), *n))
                    .collect(),
            },
        }
    }

    fn walk<'a>(&self, inputs: &[C], w: &mut Walk<'a>, k: Cont<'_, 'a>) -> ControlFlow<()> {
        match self {
            Node::Leaf { leaf, inputs: ids } => {
                let start = w.signs.len();
                let combos: Vec<u64> = match w.fixed {
                    Some(all) => {
                        let Some(s) = all.get(start..start + leaf.bits) else {
                            return ControlFlow::Continue(());
                        };
                        vec![s.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))]
                    }
                    None => (0..1u64 << leaf.bits).collect(),
                };
                for m in combos {
                    let s: Vec<bool> = (0..leaf.bits).map(|i| m >> i & 1 == 1).collect();
                    let Some(p) = (leaf.eval)(inputs, &s) else { continue };
                    if !leaf.check(&p) {
                        continue;
                    }
                    let mark = w.asg.checkpoint();
                    let mut ok = ids.len() == inputs.len();
                    for (id, z) in ids.iter().zip(inputs) {
                        ok = ok && w.asg.put(id, *z, leaf.tol);
                    }
                    for (id, z) in leaf.ids.iter().zip(&p) {
                        ok = ok && w.asg.put(id, *z, leaf.tol);
                    }
                    if ok {
                        w.signs.extend_from_slice(&s);
                        let r = k(w);
                        w.signs.truncate(start);
                        if r.is_break() {
                            w.asg.rollback(mark);
                            return r;
                        }
                    }
                    w.asg.rollback(mark);
                }
                ControlFlow::Continue(())
            }
            Node::Compose { first, second, mid } => first.walk(inputs, w, &mut |w| {
                let vals: Option<Vec<C>> = mid.iter().map(|id| w.asg.get(id)).collect();
                match vals {
                    Some(v) => second.walk(&v, w, k),
                    None => ControlFlow::Continue(()),
                }
            }),
            Node::Product { parts } => walk_parts(parts, inputs, w, k),
        }
    }
}

fn walk_parts<'a>(
    parts: &[(Arc<Node>, usize)],
    inputs: &[C],
    w: &mut Walk<'a>,
    k: Cont<'_, 'a>,
) -> ControlFlow<()> {
    match parts.split_first() {
        None => k(w),
        Some(((node, n), rest)) => {
            if inputs.len() < *n {
                return ControlFlow::Continue(());
            }
            let (mine, others) = inputs.split_at(*n);
            node.walk(mine, w, &mut |w| walk_parts(rest, others, w, k))
        }
    }
}

/// Visits every feasible sign vector (or only `fixed`, when given) with the
/// resulting full assignment. Stops early when `visit` breaks.
pub fn search(
    root: &Node,
    inputs: &[C],
    fixed: Option<&[bool]>,
    visit: &mut dyn FnMut(&Assignment, &[bool]) -> ControlFlow<()>,
) {
    let mut w = Walk {
        asg: Assignment::default(),
        signs: Vec::new(),
        fixed,
    };
    let _ = root.walk(inputs, &mut w, &mut |w| visit(&w.asg, &w.signs));
}
