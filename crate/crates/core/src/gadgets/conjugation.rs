//! Complex conjugation: two straight-line linkages on [4r, 8r] and [−8r, −4r]
//! carry the ends A, B of a rigidified rhombus A–C–B–D of side 10r; the input C
//! and output D are mirror images across the real axis.

use std::sync::Arc;

use super::compose::compose;
use super::sketch::{params, Sketch};
use super::straight_line::LineGeometry;
use super::translation::translation_on;
use super::{bad, cparam, param, Domain, FunctionalGadget, I};
use crate::error::GadgetError;
use crate::linkage::PlanePoint;

type C = PlanePoint;

/// Conjugation with restricted domain `|z − 8ri| ≤ r`.
pub fn conjugation_gadget(r: f64, cabled: bool) -> Result<FunctionalGadget, GadgetError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(bad(format!("conjugation radius must be positive, got {r}")));
    }
    let c_line = if cabled {
        3f64.sqrt() * r
    } else {
        2.0 * r / (8.0 + 8.0 * 2f64.sqrt()).sqrt()
    };
    let left = LineGeometry::new(6.0 * r, c_line, cabled)?;
    let right = LineGeometry::new(-6.0 * r, c_line, cabled)?;
    let side = 10.0 * r;
    let mut s = Sketch::new();
    left.add(&mut s, "L/");
    right.add(&mut s, "R/");
    s.free("C").free("D");
    s.parallelogram(["L/E", "C", "R/E", "D"], side, side);
    let k = left.bits();
    let z0 = 8.0 * r * I;
    s.finish(
        "conjugation",
        params([
            ("r", param(r)),
            ("side", param(side)),
            ("line_c", param(c_line)),
            ("z0", cparam(z0)),
            ("cabled", cabled.into()),
        ]),
        &["C"],
        &["D"],
        2 * k,
        if cabled { 1 } else { 16 },
        Domain::disc(z0, r),
        Arc::new(|z: &[C]| vec![z[0].conj()]),
        move |z, sg| {
            let pc = z[0];
            let h2 = side * side - pc.im * pc.im;
            if h2 < 0.0 {
                return None;
            }
            let pa = C::new(pc.re + h2.sqrt(), 0.0);
            let pb = C::new(pc.re - h2.sqrt(), 0.0);
            let mut out = left.solve_at(pa, &sg[..k])?;
            out.extend(right.solve_at(pb, &sg[k..])?);
            out.push(pc);
            out.push(pa + pb - pc);
            Some(out)
        },
    )
}

/// Conjugation on `|z − center| ≤ r`, recentered by translations on both sides.
pub fn conjugation_on(center: C, r: f64, cabled: bool) -> Result<FunctionalGadget, GadgetError> {
    let core = conjugation_gadget(r, cabled)?.namespaced("k/");
    let z0 = core.domain.discs[0].center;
    let pre = translation_on(center, r, z0 - center, cabled)?.namespaced("t0/");
    let post = translation_on(z0.conj(), r, center.conj() - z0.conj(), cabled)?.namespaced("t1/");
    let mut g = compose(&compose(&pre, &core)?, &post)?;
    g.name = "conj".into();
    g.params = params([
        ("center", cparam(center)),
        ("r", param(r)),
        ("cabled", cabled.into()),
    ]);
    Ok(g)
}
