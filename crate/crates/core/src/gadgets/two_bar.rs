//! Two-bar arm: pivot A fixed, elbow B, tip C, with |AB| = a and |BC| = b.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use super::sketch::{params, Sketch};
use super::{bad, cparam, param, Domain, FunctionalGadget, I};
use crate::error::GadgetError;
use crate::linkage::PlanePoint;

type C = PlanePoint;

/// Elbow of an arm pivoted at `z1` reaching `z`; `upper` picks the branch.
/// `None` outside the closed annulus `a − b ≤ |z − z1| ≤ a + b`.
pub fn elbow(z1: C, a: f64, b: f64, z: C, upper: bool) -> Option<C> {
    let w = z - z1;
    let alpha = w.norm_sqr();
    if alpha == 0.0 {
        return None;
    }
    let k = alpha + a * a - b * b;
    let mut rad = 4.0 * a * a * alpha - k * k;
    // Rounding at full extension.
    if rad < 0.0 {
        if rad > -1e-12 * (4.0 * a * a * alpha) {
            rad = 0.0;
        } else {
            return None;
        }
    }
    let s = if upper { 1.0 } else { -1.0 };
    Some(z1 + w * C::new(k, s * rad.sqrt()) / (2.0 * alpha))
}

/// Identity gadget on the disc `|z − z1 − i·a| ≤ b/2`, with `w0 = 1`.
pub fn two_bar(a: f64, b: f64, z1: C, cabled: bool) -> Result<FunctionalGadget, GadgetError> {
    two_bar_with(a, b, z1, C::new(1.0, 0.0), b / 2.0, cabled)
}

/// Two-bar arm with restricted domain `|z − z1 − i·a·w0| ≤ d`. The cabled version
/// tethers B at `z1 + a·w0` with a cable `√2·a` and C at the domain center with a cable `d`.
pub fn two_bar_with(
    a: f64,
    b: f64,
    z1: C,
    w0: C,
    d: f64,
    cabled: bool,
) -> Result<FunctionalGadget, GadgetError> {
    if !(a > 0.0 && b > 0.0 && b <= a) {
        return Err(bad(format!("two-bar needs 0 < b <= a, got a={a}, b={b}")));
    }
    if !(d > 0.0 && d < b) {
        return Err(bad(format!("two-bar domain radius must satisfy 0 < d < b, got {d}")));
    }
    let w0 = w0 / w0.norm();
    let center = z1 + I * a * w0;
    let mut s = Sketch::new();
    s.fixed("A", z1).free("B").free("C").rigid("A", "B", a).rigid("B", "C", b);
    if cabled {
        s.tether("B", z1 + a * w0, SQRT_2 * a).tether("C", center, d);
    }
    let p = params([
        ("a", param(a)),
        ("b", param(b)),
        ("z1", cparam(z1)),
        ("w0", cparam(w0)),
        ("d", param(d)),
        ("cabled", cabled.into()),
    ]);
    s.finish(
        "two_bar",
        p,
        &["C"],
        &["C"],
        1,
        if cabled { 1 } else { 2 },
        Domain::disc(center, d),
        Arc::new(|z: &[C]| z.to_vec()),
        move |z, sg| Some(vec![elbow(z1, a, b, z[0], sg[0])?, z[0]]),
    )
}
