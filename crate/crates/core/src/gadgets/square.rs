//! Square linkage with A and B fixed, its rigidified form, and the stiffening truss
//! that can replace a bare middle joint.

use super::sketch::Sketch;
use crate::error::GadgetError;
use crate::linkage::{Linkage, PlanePoint, VertexId};

type C = PlanePoint;

/// Vertex names: A and B fixed, C adjacent to A, D adjacent to B, and the
/// midpoints carried by the brace in the rigidified form.
#[derive(Clone, Debug)]
pub struct SquareLabels {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub d: VertexId,
    pub mid_ab: VertexId,
    pub mid_cd: VertexId,
}

impl Default for SquareLabels {
    fn default() -> Self {
        SquareLabels {
            a: "A".into(),
            b: "B".into(),
            c: "C".into(),
            d: "D".into(),
            mid_ab: "m.AB".into(),
            mid_cd: "m.CD".into(),
        }
    }
}

fn check(side: f64) -> Result<(), GadgetError> {
    if side > 0.0 && side.is_finite() {
        Ok(())
    } else {
        Err(super::bad(format!("square side must be positive, got {side}")))
    }
}

/// Four bars AB, BD, DC, CA of length `side`, with A at 0 and B at `side`.
pub fn plain_square(side: f64) -> Result<Linkage, GadgetError> {
    check(side)?;
    let mut l = Linkage::new();
    l.add_fixed("A", C::new(0.0, 0.0))?;
    l.add_fixed("B", C::new(side, 0.0))?;
    l.add_vertex("C");
    l.add_vertex("D");
    for (u, v) in [("A", "B"), ("B", "D"), ("D", "C"), ("C", "A")] {
        l.rigid(u, v, side)?;
    }
    Ok(l)
}

/// The square with middle joints on AB and CD and a brace of length `side`
/// between them, which leaves only the parallelogram component.
pub fn rigidified_square(side: f64) -> Result<Linkage, GadgetError> {
    check(side)?;
    let mut s = Sketch::new();
    s.fixed("A", C::new(0.0, 0.0))
        .fixed("B", C::new(side, 0.0))
        .free("C")
        .free("D")
        .parallelogram(["A", "B", "D", "C"], side, side);
    Ok(s.into_linkage()?)
}

/// The rigidified square with both middle joints carried by stiffening trusses
/// (apexes `p.AB`, `p.CD`), so a midpoint cannot slide off its rod at first order.
pub fn stiffened_square(side: f64) -> Result<(Linkage, Truss), GadgetError> {
    check(side)?;
    let t = stiffening_truss(side / 2.0, side, side / 2.0)?;
    let mut l = Linkage::new();
    l.add_fixed("A", C::new(0.0, 0.0))?;
    l.add_fixed("B", C::new(side, 0.0))?;
    l.add_vertex("C");
    l.add_vertex("D");
    t.add_to(&mut l, "A", "m.AB", "B", "p.AB")?;
    t.add_to(&mut l, "C", "m.CD", "D", "p.CD")?;
    l.rigid("B", "D", side)?;
    l.rigid("C", "A", side)?;
    l.rigid("m.AB", "m.CD", side)?;
    Ok((l, t))
}

/// Triangulated rod X–M–Y: X at 0, M at distance a along the rod, Y at distance b,
/// and an apex P at height d above M.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truss {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    /// |XP|, with c² = a² + d².
    pub c: f64,
    /// |PY|, with e² = d² + (b − a)².
    pub e: f64,
}

pub fn stiffening_truss(a: f64, b: f64, d: f64) -> Result<Truss, GadgetError> {
    if !(a > 0.0 && b > a && d > 0.0) {
        return Err(super::bad(format!("truss needs 0 < a < b and d > 0, got a={a}, b={b}, d={d}")));
    }
    Ok(Truss {
        a,
        b,
        d,
        c: (a * a + d * d).sqrt(),
        e: (d * d + (b - a) * (b - a)).sqrt(),
    })
}

impl Truss {
    /// Adds the truss bars between existing vertices `x`, `y` and fresh vertices `m`, `p`.
    pub fn add_to(&self, l: &mut Linkage, x: &str, m: &str, y: &str, p: &str) -> Result<(), GadgetError> {
        l.add_vertex(m);
        l.add_vertex(p);
        l.rigid(x, m, self.a)?;
        l.rigid(m, y, self.b - self.a)?;
        l.rigid(x, y, self.b)?;
        l.rigid(x, p, self.c)?;
        l.rigid(p, y, self.e)?;
        l.rigid(m, p, self.d)?;
        Ok(())
    }

    /// Positions of M and P for rod endpoints `x`, `y`; `up` picks the apex side.
    pub fn place(&self, x: C, y: C, up: bool) -> (C, C) {
        let u = (y - x) / (y - x).norm();
        let m = x + u * self.a;
        let n = C::new(0.0, if up { 1.0 } else { -1.0 });
        (m, m + u * n * self.d)
    }
}
