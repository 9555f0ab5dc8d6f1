//! Peaucellier inversor: pivot A, arms AB = AC = a, rigidified rhombus B–D–C–E
//! of side b, so that |D − A|·|E − A| = a² − b² = t² with E on the ray AD.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use super::sketch::{params, Sketch};
use super::{bad, cparam, param, Domain, FunctionalGadget, I};
use crate::error::GadgetError;
use crate::linkage::PlanePoint;

type C = PlanePoint;

/// Bar lengths. `c` is the guard length: the classical guard vertex F sits at
/// distance c from D and E, while the cabled variant replaces it by a cable DE of
/// length 2c.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeaucellierParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub cabled: bool,
}

impl PeaucellierParams {
    pub fn classical(t: f64) -> Self {
        PeaucellierParams {
            a: 5f64.sqrt() * t,
            b: 2.0 * t,
            c: t,
            cabled: false,
        }
    }

    pub fn cabled(t: f64) -> Self {
        PeaucellierParams {
            a: 5.0 * t / 3.0,
            b: 4.0 * t / 3.0,
            c: t,
            cabled: true,
        }
    }

    pub fn for_mode(t: f64, cabled: bool) -> Self {
        if cabled {
            Self::cabled(t)
        } else {
            Self::classical(t)
        }
    }

    /// Inversion radius.
    pub fn t(&self) -> f64 {
        (self.a * self.a - self.b * self.b).sqrt()
    }

    /// Distance |AF| of the classical guard vertex.
    pub fn guard(&self) -> f64 {
        let t = self.t();
        (t * t + self.c * self.c).sqrt()
    }

    pub fn bits(&self) -> usize {
        if self.cabled {
            1
        } else {
            2
        }
    }

    fn validate(&self) -> Result<(), GadgetError> {
        if !(self.a > self.b && self.b > 0.0 && self.c > 0.0 && self.a.is_finite()) {
            return Err(bad(format!("Peaucellier needs a > b > 0 and c > 0, got {self:?}")));
        }
        Ok(())
    }
}

/// One inversor placed in a sketch under a vertex-name prefix.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Inversor {
    pub pivot: C,
    pub p: PeaucellierParams,
}

fn clamp_sqrt(x: f64, scale: f64) -> Option<f64> {
    if x >= 0.0 {
        Some(x.sqrt())
    } else if x > -1e-12 * scale {
        Some(0.0)
    } else {
        None
    }
}

impl Inversor {
    pub fn name(pre: &str, v: &str) -> String {
        format!("{pre}{v}")
    }

    /// Adds A (fixed), D, E, B, C and, for the classical variant, F. Free vertices
    /// are declared in the order D, E, B, C, F. `tether_dir` is the direction w0
    /// used to tether C at `A + a·w0` in the cabled variant.
    pub fn add(&self, s: &mut Sketch, pre: &str, tether_dir: C) {
        let n = |v: &str| Self::name(pre, v);
        let PeaucellierParams { a, b, c, cabled } = self.p;
        s.fixed(&n("A"), self.pivot);
        for v in ["D", "E", "B", "C"] {
            s.free(&n(v));
        }
        s.rigid(&n("A"), &n("B"), a)
            .rigid(&n("A"), &n("C"), a)
            .parallelogram([&n("B"), &n("D"), &n("C"), &n("E")], b, b);
        if cabled {
            s.cable(&n("D"), &n("E"), 2.0 * c);
            s.tether(&n("C"), self.pivot + a * tether_dir, SQRT_2 * a);
        } else {
            s.free(&n("F"));
            s.rigid(&n("F"), &n("D"), c)
                .rigid(&n("F"), &n("E"), c)
                .rigid(&n("A"), &n("F"), self.p.guard());
        }
    }

    pub fn invert(&self, z: C) -> Option<C> {
        let u = z - self.pivot;
        if u.norm_sqr() == 0.0 {
            return None;
        }
        let t = self.p.t();
        Some(self.pivot + t * t / u.conj())
    }

    /// Positions D, E, B, C (, F) for input D.
    pub fn solve(&self, d: C, signs: &[bool]) -> Option<Vec<C>> {
        self.solve_pair(d, self.invert(d)?, signs)
    }

    /// Same as [`Inversor::solve`] with the image `e` of `d` supplied by the caller.
    pub fn solve_pair(&self, d: C, e: C, signs: &[bool]) -> Option<Vec<C>> {
        if d == self.pivot {
            return None;
        }
        let PeaucellierParams { b, c, cabled, .. } = self.p;
        let dir = (d - self.pivot) / (d - self.pivot).norm();
        let mid = (d + e) / 2.0;
        let q = (d - e).norm_sqr() / 4.0;
        let sgn = |f: bool| if f { 1.0 } else { -1.0 };
        let hb = clamp_sqrt(b * b - q, b * b)?;
        let pb = mid + I * dir * (sgn(signs[0]) * hb);
        let pc = d + e - pb;
        let mut out = vec![d, e, pb, pc];
        if !cabled {
            let hc = clamp_sqrt(c * c - q, c * c)?;
            out.push(mid + I * dir * (sgn(signs[1]) * hc));
        }
        Some(out)
    }
}

/// Inversion `z ↦ t²/z̄` about the origin, with restricted domain `|z − z0| ≤ r`,
/// `|z0| = t`, `r ≤ t/2`, and the default constants for the mode.
pub fn inversion_gadget(t: f64, z0: C, r: f64, cabled: bool) -> Result<FunctionalGadget, GadgetError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(bad(format!("inversion radius must be positive, got {t}")));
    }
    if (z0.norm() - t).abs() > 1e-9 * t {
        return Err(bad(format!("domain center must lie on |z| = t, got |z0| = {}", z0.norm())));
    }
    if !(r > 0.0 && r <= t / 2.0) {
        return Err(bad(format!("inversion domain radius must satisfy 0 < r <= t/2, got {r}")));
    }
    inversion_with(C::new(0.0, 0.0), PeaucellierParams::for_mode(t, cabled), z0, r)
}

/// Inversor with explicit bar lengths and pivot. The restricted domain
/// `|z − z0| ≤ r` must sit inside the annulus where all branches exist.
pub fn inversion_with(
    pivot: C,
    p: PeaucellierParams,
    z0: C,
    r: f64,
) -> Result<FunctionalGadget, GadgetError> {
    p.validate()?;
    let t = p.t();
    let rho = (z0 - pivot).norm();
    if !(r > 0.0 && rho - r > 0.0) {
        return Err(bad("inversion domain must avoid the pivot"));
    }
    let (lo, hi) = (rho - r, rho + r);
    // The rhombus closes when ||D| − t²/|D|| ≤ 2b; the guard needs the same with c.
    let spread = |x: f64| (x - t * t / x).abs();
    let limit = p.b.min(p.c);
    if spread(lo).max(spread(hi)) >= 2.0 * limit {
        return Err(bad(format!(
            "inversion domain |z - {z0}| <= {r} leaves the annulus where the inversor closes"
        )));
    }
    let inv = Inversor { pivot, p };
    let mut s = Sketch::new();
    let w0 = -I * (z0 - pivot) / rho;
    inv.add(&mut s, "", w0);
    if p.cabled {
        s.tether("D", z0, r);
    }
    let tt = t * t;
    s.finish(
        "inversion",
        params([
            ("t", param(t)),
            ("a", param(p.a)),
            ("b", param(p.b)),
            ("c", param(p.c)),
            ("pivot", cparam(pivot)),
            ("z0", cparam(z0)),
            ("r", param(r)),
            ("cabled", p.cabled.into()),
        ]),
        &["D"],
        &["E"],
        p.bits(),
        if p.cabled { 1 } else { 4 },
        Domain::disc(z0, r),
        Arc::new(move |z: &[C]| vec![pivot + tt / (z[0] - pivot).conj()]),
        move |z, sg| inv.solve(z[0], sg),
    )
}
