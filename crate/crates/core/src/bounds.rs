//! Disc arithmetic: conservative enclosures of sums, products and conjugates.

use crate::gadgets::Disc;
use crate::linkage::PlanePoint;

type C = PlanePoint;

pub fn point(z: C) -> Disc {
    Disc::new(z, 0.0)
}

pub fn add(a: Disc, b: Disc) -> Disc {
    Disc::new(a.center + b.center, a.radius + b.radius)
}

pub fn shift(a: Disc, s: C) -> Disc {
    Disc::new(a.center + s, a.radius)
}

pub fn scale(a: Disc, lambda: f64) -> Disc {
    Disc::new(a.center * lambda, a.radius * lambda.abs())
}

pub fn conj(a: Disc) -> Disc {
    Disc::new(a.center.conj(), a.radius)
}

/// `(c₁ + u)(c₂ + v) = c₁c₂ + c₁v + c₂u + uv`.
pub fn mul(a: Disc, b: Disc) -> Disc {
    Disc::new(
        a.center * b.center,
        a.center.norm() * b.radius + b.center.norm() * a.radius + a.radius * b.radius,
    )
}

pub fn square(a: Disc) -> Disc {
    mul(a, a)
}

/// Farthest distance of the disc from the origin.
pub fn reach(a: Disc) -> f64 {
    a.center.norm() + a.radius
}
