//! Sampled covering degree of one-input gadgets.

use std::f64::consts::TAU;
use std::fmt::Write;

use super::enumerate::branches_unchecked;
use crate::error::GadgetError;
use crate::gadgets::FunctionalGadget;
use crate::linkage::PlanePoint;

type C = PlanePoint;

/// Sample points for [`degree_map`].
#[derive(Clone, Debug)]
pub enum Grid {
    /// `n × n` lattice on the square of half-width `half` about `center`.
    Square { center: C, half: f64, n: usize },
    /// `n_r` radii in `[r_min, r_max]` times `n_theta` angles.
    Radial {
        center: C,
        r_min: f64,
        r_max: f64,
        n_r: usize,
        n_theta: usize,
    },
    Points(Vec<C>),
}

impl Grid {
    pub fn points(&self) -> Vec<C> {
        let lerp = |lo: f64, hi: f64, i: usize, n: usize| {
            if n <= 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        match self {
            Grid::Square { center, half, n } => (0..*n)
                .flat_map(|j| {
                    (0..*n).map(move |i| {
                        center + C::new(lerp(-half, *half, i, *n), lerp(-half, *half, j, *n))
                    })
                })
                .collect(),
            Grid::Radial {
                center,
                r_min,
                r_max,
                n_r,
                n_theta,
            } => (0..*n_r)
                .flat_map(|i| {
                    let r = lerp(*r_min, *r_max, i, *n_r);
                    (0..*n_theta).map(move |k| center + C::from_polar(r, TAU * k as f64 / *n_theta as f64))
                })
                .collect(),
            Grid::Points(p) => p.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeSample {
    pub point: C,
    pub degree: usize,
}

/// Number of distinct residual-verified configurations over each grid point.
/// Points outside the declared domain are counted too, so the map shows where
/// the image ends.
pub fn degree_map(g: &FunctionalGadget, grid: &Grid, tol: f64) -> Result<Vec<DegreeSample>, GadgetError> {
    if g.inputs.len() != 1 {
        return Err(GadgetError::BadParameter(format!(
            "degree map needs one input, {} has {}",
            g.name,
            g.inputs.len()
        )));
    }
    grid.points()
        .into_iter()
        .map(|z| {
            let rep = branches_unchecked(g, &[z], tol, usize::MAX)?;
            Ok(DegreeSample {
                point: z,
                degree: rep.count(),
            })
        })
        .collect()
}

pub fn degree_csv(samples: &[DegreeSample]) -> String {
    let mut s = String::from("re,im,degree\n");
    for d in samples {
        let _ = writeln!(s, "{},{},{}", d.point.re, d.point.im, d.degree);
    }
    s
}
