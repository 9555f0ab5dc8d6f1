//! Translation `z ↦ z + z0` built from a two-bar arm and two rigidified parallelograms.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use super::sketch::{params, Sketch};
use super::two_bar::{elbow, two_bar_with};
use super::{bad, cparam, param, Domain, FunctionalGadget, I};
use crate::error::GadgetError;
use crate::linkage::PlanePoint;

type C = PlanePoint;

/// Translation by `z0` with restricted domain `|z| ≤ r`.
pub fn translation_gadget(z0: C, r: f64, cabled: bool) -> Result<FunctionalGadget, GadgetError> {
    translation_on(C::new(0.0, 0.0), r, z0, cabled)
}

/// Translation by `z0` with restricted domain `|z − center| ≤ r`.
pub fn translation_on(center: C, r: f64, z0: C, cabled: bool) -> Result<FunctionalGadget, GadgetError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(bad(format!("translation radius must be positive, got {r}")));
    }
    let a = 3.0 * r;
    let b = 2.0 * r;
    let z1 = center - I * a;
    let e = z0.norm();
    if e < 1e-12 * (1.0 + center.norm()) {
        let mut g = two_bar_with(a, b, z1, C::new(1.0, 0.0), r, cabled)?;
        g.name = "translation".into();
        g.params.insert("z0".into(), cparam(z0));
        return Ok(g);
    }
    let mut s = Sketch::new();
    s.fixed("A", z1)
        .fixed("F", z1 + z0)
        .free("B")
        .free("C")
        .free("G")
        .free("H")
        .rigid("B", "C", b)
        .parallelogram(["A", "B", "G", "F"], a, e)
        .parallelogram(["B", "C", "H", "G"], b, e);
    if cabled {
        s.tether("B", z1 + a, SQRT_2 * a).tether("C", center, r);
    }
    let p = params([
        ("z0", cparam(z0)),
        ("center", cparam(center)),
        ("r", param(r)),
        ("a", param(a)),
        ("b", param(b)),
        ("cabled", cabled.into()),
    ]);
    s.finish(
        "translation",
        p,
        &["C"],
        &["H"],
        1,
        if cabled { 1 } else { 2 },
        Domain::disc(center, r),
        Arc::new(move |z: &[C]| vec![z[0] + z0]),
        move |z, sg| {
            let bb = elbow(z1, a, b, z[0], sg[0])?;
            Some(vec![bb, z[0], bb + z0, z[0] + z0])
        },
    )
}
