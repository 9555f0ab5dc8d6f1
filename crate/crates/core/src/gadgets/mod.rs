//! Functional gadgets: linkages with designated inputs and outputs whose
//! configurations over a restricted domain are parametrized by a closed-form witness.

mod compose;
mod conjugation;
mod pantograph;
mod peaucellier;
mod sketch;
mod square;
mod straight_line;
mod translation;
mod trivial;
mod two_bar;
pub mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::Value;

use crate::error::GadgetError;
use crate::linkage::{Configuration, Linkage, PlanePoint, VertexId};

pub use conjugation::{conjugation_gadget, conjugation_on};
pub use pantograph::{affine_on, apex, average_gadget, pantograph, scalar_mult_gadget, AverageParams};
pub use peaucellier::{inversion_gadget, inversion_with, PeaucellierParams};
pub use sketch::Sketch;
pub use square::{plain_square, rigidified_square, stiffened_square, stiffening_truss, SquareLabels, Truss};
pub use straight_line::{straight_line_gadget, SegmentGadget};
pub use translation::{translation_gadget, translation_on};
pub use trivial::{constant_gadget, identity_gadget, projection_gadget, FULL_PLANE_RADIUS};
pub use two_bar::{elbow, two_bar, two_bar_with};

type C = PlanePoint;

/// A map `ℂⁿ → ℂᵐ`.
pub type MapFn = Arc<dyn Fn(&[C]) -> Vec<C> + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disc {
    pub center: C,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: C, radius: f64) -> Disc {
        Disc { center, radius }
    }

    pub fn contains(&self, z: C) -> bool {
        (z - self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-12
    }
}

/// Product of closed discs, optionally cut down by pullback constraints
/// `map(z[range]) ∈ domain` that arise from composition.
#[derive(Clone, Default)]
pub struct Domain {
    pub discs: Vec<Disc>,
    pullbacks: Vec<Pullback>,
}

#[derive(Clone)]
struct Pullback {
    start: usize,
    len: usize,
    map: MapFn,
    domain: Domain,
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Domain")
            .field("discs", &self.discs)
            .field("pullbacks", &self.pullbacks.len())
            .finish()
    }
}

impl Domain {
    pub fn discs(discs: Vec<Disc>) -> Domain {
        Domain {
            discs,
            pullbacks: Vec::new(),
        }
    }

    pub fn disc(center: C, radius: f64) -> Domain {
        Domain::discs(vec![Disc::new(center, radius)])
    }

    pub fn arity(&self) -> usize {
        self.discs.len()
    }

    pub fn contains(&self, z: &[C]) -> bool {
        z.len() == self.discs.len()
            && self.discs.iter().zip(z).all(|(d, p)| d.contains(*p))
            && self.pullbacks.iter().all(|pb| {
                let image = (pb.map)(&z[pb.start..pb.start + pb.len]);
                pb.domain.contains(&image)
            })
    }

    pub fn center(&self) -> Vec<C> {
        self.discs.iter().map(|d| d.center).collect()
    }

    pub(crate) fn with_pullback(mut self, map: MapFn, domain: Domain) -> Domain {
        let len = self.discs.len();
        self.pullbacks.push(Pullback {
            start: 0,
            len,
            map,
            domain,
        });
        self
    }

    pub(crate) fn product(parts: &[&Domain]) -> Domain {
        let mut out = Domain::default();
        for d in parts {
            let offset = out.discs.len();
            out.discs.extend_from_slice(&d.discs);
            out.pullbacks.extend(d.pullbacks.iter().map(|pb| Pullback {
                start: pb.start + offset,
                ..pb.clone()
            }));
        }
        out
    }
}

/// A linkage functional for a declared map over a restricted domain.
#[derive(Clone)]
pub struct FunctionalGadget {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub linkage: Linkage,
    pub inputs: Vec<VertexId>,
    pub outputs: Vec<VertexId>,
    pub domain: Domain,
    pub strong: bool,
    /// Declared cover degree over the interior of the domain.
    pub degree: BigUint,
    pub map: MapFn,
    pub(crate) witness: Arc<witness::Node>,
}

impl fmt::Debug for FunctionalGadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionalGadget")
            .field("name", &self.name)
            .field("inputs", &self.inputs)
            .field("outputs", &self.outputs)
            .field("strong", &self.strong)
            .field("degree", &self.degree)
            .field("branches", &self.branches())
            .field("vertices", &self.linkage.vertex_count())
            .field("edges", &self.linkage.edge_count())
            .finish()
    }
}

impl FunctionalGadget {
    /// Number of binary sign choices the witness ranges over.
    pub fn branches(&self) -> usize {
        self.witness.bits()
    }

    pub fn apply(&self, z: &[C]) -> Vec<C> {
        (self.map)(z)
    }

    fn check_arity(&self, z: &[C]) -> Result<(), GadgetError> {
        if z.len() != self.inputs.len() {
            return Err(GadgetError::BadParameter(format!(
                "{} expects {} inputs, got {}",
                self.name,
                self.inputs.len(),
                z.len()
            )));
        }
        Ok(())
    }

    /// Witness configuration for one sign vector, or `None` when that branch is infeasible.
    pub fn witness(&self, z: &[C], signs: &[bool]) -> Result<Option<Configuration>, GadgetError> {
        self.check_arity(z)?;
        if signs.len() != self.branches() {
            return Err(GadgetError::BadParameter(format!(
                "expected {} signs, got {}",
                self.branches(),
                signs.len()
            )));
        }
        let mut found = None;
        witness::search(&self.witness, z, Some(signs), &mut |asg, _| {
            found = Some(asg.to_configuration());
            ControlFlow::Break(())
        });
        Ok(found)
    }

    /// Calls `visit` on each feasible branch until it breaks.
    pub fn for_each_branch(
        &self,
        z: &[C],
        visit: &mut dyn FnMut(&Configuration, &[bool]) -> ControlFlow<()>,
    ) -> Result<(), GadgetError> {
        self.check_arity(z)?;
        witness::search(&self.witness, z, None, &mut |asg, signs| {
            visit(&asg.to_configuration(), signs)
        });
        Ok(())
    }

    /// Up to `limit` feasible branches.
    pub fn branches_at(
        &self,
        z: &[C],
        limit: usize,
    ) -> Result<Vec<(Vec<bool>, Configuration)>, GadgetError> {
        let mut out = Vec::new();
        if limit == 0 {
            return Ok(out);
        }
        self.for_each_branch(z, &mut |conf, signs| {
            out.push((signs.to_vec(), conf.clone()));
            if out.len() >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(out)
    }

    /// Some configuration over `z`, with its sign vector.
    pub fn first_branch(&self, z: &[C]) -> Result<Option<(Vec<bool>, Configuration)>, GadgetError> {
        Ok(self.branches_at(z, 1)?.pop())
    }

    pub fn output_positions(&self, conf: &Configuration) -> Option<Vec<C>> {
        self.outputs.iter().map(|v| conf.get(v)).collect()
    }

    /// Output tuple of the first feasible branch.
    pub fn evaluate(&self, z: &[C]) -> Result<Vec<C>, GadgetError> {
        let (_, conf) = self.first_branch(z)?.ok_or(GadgetError::OutsideDomain)?;
        Ok(self.output_positions(&conf).expect("witness assigns outputs"))
    }

    /// Copy with every vertex id prefixed.
    pub fn namespaced(&self, prefix: &str) -> FunctionalGadget {
        let f = |v: &VertexId| v.prefixed(prefix);
        self.renamed(&f)
    }

    pub(crate) fn renamed(&self, f: &dyn Fn(&VertexId) -> VertexId) -> FunctionalGadget {
        FunctionalGadget {
            linkage: self
                .linkage
                .rename(f)
                .expect("prefixing vertex ids is injective"),
            inputs: self.inputs.iter().map(f).collect(),
            outputs: self.outputs.iter().map(f).collect(),
            witness: Arc::new(self.witness.rename(f)),
            ..self.clone()
        }
    }

    /// Metadata record: name, parameters, strength and branch count.
    pub fn meta(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("gadget".into(), Value::String(self.name.clone()));
        m.insert("params".into(), Value::Object(self.params.clone().into_iter().collect()));
        m.insert("strong".into(), Value::Bool(self.strong));
        m.insert("branches".into(), Value::from(self.branches()));
        m.insert("degree".into(), degree_value(&self.degree));
        Value::Object(m)
    }
}

/// Degree as a JSON number when it fits, otherwise as a decimal string.
pub fn degree_value(d: &BigUint) -> Value {
    match u64::try_from(d) {
        Ok(n) => Value::from(n),
        Err(_) => Value::String(d.to_string()),
    }
}

pub use compose::{compose, pair_with_identity, product};

pub(crate) fn param(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub(crate) fn cparam(z: C) -> Value {
    Value::Array(vec![param(z.re), param(z.im)])
}

pub(crate) fn bad(msg: impl Into<String>) -> GadgetError {
    GadgetError::BadParameter(msg.into())
}

pub(crate) const I: C = C::new(0.0, 1.0);
