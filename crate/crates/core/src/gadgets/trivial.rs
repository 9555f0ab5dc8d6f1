use std::sync::Arc;

use super::sketch::{params, Sketch};
use super::{bad, cparam, Disc, Domain, FunctionalGadget};
use crate::error::GadgetError;
use crate::linkage::PlanePoint;

type C = PlanePoint;

/// Radius standing in for the whole plane in the domains of trivial gadgets.
pub const FULL_PLANE_RADIUS: f64 = 1e12;

/// A single fixed output vertex.
pub fn constant_gadget(z0: C) -> Result<FunctionalGadget, GadgetError> {
    let mut s = Sketch::new();
    s.fixed("K", z0);
    s.finish(
        "constant",
        params([("value", cparam(z0))]),
        &[],
        &["K"],
        0,
        1,
        Domain::default(),
        Arc::new(move |_: &[C]| vec![z0]),
        |_, _| Some(vec![]),
    )
}

/// `n` isolated input vertices; the outputs re-list the inputs at `keep`.
/// Repeated indices duplicate a column.
pub fn projection_gadget(n: usize, keep: &[usize]) -> Result<FunctionalGadget, GadgetError> {
    if let Some(&k) = keep.iter().find(|&&k| k >= n) {
        return Err(bad(format!("projection index {k} out of range for arity {n}")));
    }
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut s = Sketch::new();
    for v in &names {
        s.free(v);
    }
    let ins: Vec<&str> = names.iter().map(String::as_str).collect();
    let outs: Vec<&str> = keep.iter().map(|&k| names[k].as_str()).collect();
    let keep_m = keep.to_vec();
    s.finish(
        "projection",
        params([
            ("n", n.into()),
            ("keep", keep.iter().map(|&k| serde_json::Value::from(k)).collect()),
        ]),
        &ins,
        &outs,
        0,
        1,
        Domain::discs(vec![Disc::new(C::new(0.0, 0.0), FULL_PLANE_RADIUS); n]),
        Arc::new(move |z: &[C]| keep_m.iter().map(|&k| z[k]).collect()),
        |z, _| Some(z.to_vec()),
    )
}

pub fn identity_gadget() -> FunctionalGadget {
    projection_gadget(1, &[0]).expect("index 0 is valid")
}
