//! Pantograph: fixed A, rods A–E–D and D–F–C, rigidified parallelogram E–D–F–B.
//! Identically C − A = (1 + c)(B − A).

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use super::compose::compose;
use super::sketch::{params, Sketch};
use super::translation::translation_on;
use super::two_bar::elbow;
use super::{bad, cparam, param, Disc, Domain, FunctionalGadget, I};
use crate::error::GadgetError;
use crate::linkage::PlanePoint;

type C = PlanePoint;

/// Bare pantograph for `z ↦ λz` on the disc `|z − 4ρ| ≤ ρ`.
pub fn pantograph(lambda: f64, rho: f64, cabled: bool) -> Result<FunctionalGadget, GadgetError> {
    if !lambda.is_finite() || lambda == 0.0 || lambda == 1.0 {
        return Err(bad(format!(
            "scalar {lambda} has a trivial gadget: use the constant or identity gadget"
        )));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(bad(format!("pantograph radius must be positive, got {rho}")));
    }
    let (l1, l2) = (4.0 * rho, 2.0 * rho);
    let zero = C::new(0.0, 0.0);
    let center = C::new(l1, 0.0);
    let w0 = -I;
    let mut s = Sketch::new();
    // (c, a, b, fixed vertex, input, output, elbow)
    let (c, a, b, fixed, input, output, knee) = if lambda > 1.0 {
        (lambda - 1.0, l1, l2, "A", "B", "C", "E")
    } else if lambda > 0.0 {
        let c = 1.0 / lambda - 1.0;
        (c, l1 / (1.0 + c), l2 / (1.0 + c), "A", "C", "B", "D")
    } else {
        (-lambda, l2, l1, "B", "A", "C", "E")
    };
    s.fixed(fixed, zero);
    for v in ["A", "E", "D", "F", "B", "C"] {
        if v != fixed {
            s.free(v);
        }
    }
    s.collinear("A", "E", "D", a, c * a)
        .collinear("D", "F", "C", b, c * b)
        .parallelogram(["E", "D", "F", "B"], c * a, b);
    if cabled {
        s.tether(knee, l1 * w0, SQRT_2 * l1).tether(input, center, rho);
    }
    let k = 1.0 + c;
    let solve = move |z: &[C], sg: &[bool]| {
        let x = z[0];
        // Positions of A, E, D, F, B, C.
        let [pa, pe, pd, pf, pb, pc] = if lambda > 1.0 {
            let e = elbow(zero, a, b, x, sg[0])?;
            let d = e * k;
            let f = d + x - e;
            [zero, e, d, f, x, d + (f - d) * k]
        } else if lambda > 0.0 {
            let d = elbow(zero, l1, l2, x, sg[0])?;
            let e = d / k;
            let f = d + (x - d) / k;
            [zero, e, d, f, e + f - d, x]
        } else {
            let e = elbow(zero, l1, l2, x, sg[0])?;
            let d = x + (e - x) * k;
            let f = d - e;
            [x, e, d, f, zero, d + (f - d) * k]
        };
        let all = [("A", pa), ("E", pe), ("D", pd), ("F", pf), ("B", pb), ("C", pc)];
        Some(all.iter().filter(|(n, _)| *n != fixed).map(|(_, p)| *p).collect())
    };
    s.finish(
        "pantograph",
        params([
            ("lambda", param(lambda)),
            ("c", param(c)),
            ("a", param(a)),
            ("b", param(b)),
            ("rho", param(rho)),
            ("cabled", cabled.into()),
        ]),
        &[input],
        &[output],
        1,
        if cabled { 1 } else { 2 },
        Domain::disc(center, rho),
        Arc::new(move |z: &[C]| vec![z[0] * lambda]),
        solve,
    )
}

/// `z ↦ λz + shift` on `|z − center| ≤ r`, as translation, pantograph, translation.
pub fn affine_on(
    center: C,
    r: f64,
    lambda: f64,
    shift: C,
    cabled: bool,
) -> Result<FunctionalGadget, GadgetError> {
    let p = pantograph(lambda, r, cabled)?.namespaced("p/");
    let pc = p.domain.discs[0].center;
    let pre = translation_on(center, r, pc - center, cabled)?.namespaced("t0/");
    let post_shift = shift - (pc - center) * lambda;
    let post = translation_on(pc * lambda, r * lambda.abs(), post_shift, cabled)?.namespaced("t1/");
    let mut g = compose(&compose(&pre, &p)?, &post)?;
    g.name = "scalar".into();
    g.params = params([
        ("lambda", param(lambda)),
        ("center", cparam(center)),
        ("r", param(r)),
        ("shift", cparam(shift)),
        ("cabled", cabled.into()),
    ]);
    Ok(g)
}

/// `z ↦ λz` on `|z| ≤ r`.
pub fn scalar_mult_gadget(lambda: f64, r: f64, cabled: bool) -> Result<FunctionalGadget, GadgetError> {
    affine_on(C::new(0.0, 0.0), r, lambda, C::new(0.0, 0.0), cabled)
}

/// Constants of an average gadget after rescaling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AverageParams {
    /// Arm length (all six pantograph bars).
    pub a: f64,
    /// Input discs are centered at `z0` and `−z0`.
    pub z0: C,
    pub r: f64,
    /// Apex tether length.
    pub d: f64,
    /// Rescaling factor applied to the unit construction.
    pub scale: f64,
}

/// Apex of two bars of length `2a` standing on `z` and `w`.
pub fn apex(z: C, w: C, a: f64, f: bool) -> Option<C> {
    let dw = w - z;
    let h2 = 4.0 * a * a - dw.norm_sqr() / 4.0;
    let n = dw.norm();
    if h2 < 0.0 || n == 0.0 {
        return None;
    }
    let s = if f { 1.0 } else { -1.0 };
    Some((z + w) / 2.0 + I * (s * h2.sqrt()) * dw / n)
}

fn average_constants(r_req: f64, cabled: bool) -> Result<AverageParams, GadgetError> {
    if !(r_req > 0.0 && r_req.is_finite()) {
        return Err(bad(format!("average radius must be positive, got {r_req}")));
    }
    let z0 = C::new(1.0, 0.0);
    let a = 1.0;
    let mut r = 0.5;
    let mut d = 0.0;
    if cabled {
        let g0 = apex(z0, -z0, a, true).expect("unit apex exists");
        loop {
            let (mut near, mut far) = (0.0f64, f64::INFINITY);
            let ring: Vec<C> = (0..16)
                .flat_map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / 16.0;
                    [0.5, 1.0].map(|s| C::from_polar(s * r, t))
                })
                .chain([C::new(0.0, 0.0)])
                .collect();
            for u in &ring {
                for v in &ring {
                    let (z, w) = (z0 + u, -z0 + v);
                    near = near.max((apex(z, w, a, true).unwrap() - g0).norm());
                    far = far.min((apex(z, w, a, false).unwrap() - g0).norm());
                }
            }
            if near < far {
                d = 0.5 * (near + far);
                break;
            }
            r /= 2.0;
            if r < 1e-6 {
                return Err(bad("average tether gap never opened"));
            }
        }
    }
    let n = r_req / r;
    Ok(AverageParams {
        a: a * n,
        z0: z0 * n,
        r: r_req,
        d: d * n,
        scale: n,
    })
}

/// `(z, w) ↦ (z + w)/2` on `|z − z0| ≤ r`, `|w + z0| ≤ r`, with `z0` chosen by
/// the construction and reported in [`AverageParams`].
pub fn average_gadget(r: f64, cabled: bool) -> Result<(FunctionalGadget, AverageParams), GadgetError> {
    let k = average_constants(r, cabled)?;
    let AverageParams { a, z0, d, .. } = k;
    let mut s = Sketch::new();
    for v in ["C", "A", "E", "D", "F", "B"] {
        s.free(v);
    }
    s.collinear("A", "E", "D", a, a)
        .collinear("D", "F", "C", a, a)
        .parallelogram(["E", "D", "F", "B"], a, a);
    if cabled {
        let g0 = apex(z0, -z0, a, true).expect("apex exists");
        s.tether("A", -z0, r).tether("C", z0, r).tether("D", g0, d);
    }
    let g = s.finish(
        "average",
        params([
            ("a", param(a)),
            ("z0", cparam(z0)),
            ("r", param(r)),
            ("d", param(d)),
            ("cabled", cabled.into()),
        ]),
        &["C", "A"],
        &["B"],
        1,
        if cabled { 1 } else { 2 },
        Domain::discs(vec![Disc::new(z0, r), Disc::new(-z0, r)]),
        Arc::new(|z: &[C]| vec![(z[0] + z[1]) / 2.0]),
        move |z, sg| {
            let (pc, pa) = (z[0], z[1]);
            let pd = apex(pc, pa, a, sg[0])?;
            let pe = (pa + pd) / 2.0;
            let pf = (pd + pc) / 2.0;
            Some(vec![pc, pa, pe, pd, pf, pe + pf - pd])
        },
    )?;
    Ok((g, k))
}
