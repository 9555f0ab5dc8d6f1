//! Exact straight-line motion: an inversor whose input D is held on a circle
//! through the pivot, so the output E runs along a segment of the real axis.

use std::f64::consts::{FRAC_PI_2, PI};

use super::peaucellier::{Inversor, PeaucellierParams};
use super::sketch::Sketch;
use super::{bad, I};
use crate::error::GadgetError;
use crate::linkage::{Configuration, Linkage, PlanePoint, VertexId};

type C = PlanePoint;

/// Drawing parameters of one straight-line linkage.
#[derive(Clone, Copy, Debug)]
pub(crate) struct LineGeometry {
    pub x0: f64,
    pub c: f64,
    pub inv: Inversor,
    pub cabled: bool,
}

impl LineGeometry {
    pub fn new(x0: f64, c: f64, cabled: bool) -> Result<LineGeometry, GadgetError> {
        if !(c > 0.0 && c.is_finite() && x0.is_finite()) {
            return Err(bad(format!("straight line needs c > 0, got {c}")));
        }
        let t = 2.0 * c;
        let p = if cabled {
            PeaucellierParams::cabled(t)
        } else {
            // Guard length 2c, rhombus side 3c.
            let b = 1.5 * t;
            PeaucellierParams {
                a: (t * t + b * b).sqrt(),
                b,
                c: t,
                cabled: false,
            }
        };
        Ok(LineGeometry {
            x0,
            c,
            inv: Inversor {
                pivot: C::new(x0, -t),
                p,
            },
            cabled,
        })
    }

    /// Center of the driving circle T.
    pub fn hub(&self) -> C {
        self.inv.pivot + I * self.c
    }

    pub fn bits(&self) -> usize {
        self.inv.p.bits()
    }

    /// Adds the linkage under `pre`; free vertices in the order D, E, B, C (, F).
    pub fn add(&self, s: &mut Sketch, pre: &str) {
        let x0 = C::new(self.x0, 0.0);
        self.inv.add(s, pre, C::new(1.0, 0.0));
        let (p, a, d) = (format!("{pre}P"), format!("{pre}A"), format!("{pre}D"));
        s.fixed(&p, self.hub()).rigid(&p, &d, self.c).rigid(&p, &a, self.c);
        if self.cabled {
            s.tether(&d, x0, self.c);
        }
    }

    /// Free positions with the output at `x`.
    pub fn solve_at(&self, x: C, signs: &[bool]) -> Option<Vec<C>> {
        let d = self.inv.invert(x)?;
        self.inv.solve_pair(d, x, signs)
    }

    /// Declared endpoints of the traced segment.
    pub fn segment(&self) -> (f64, f64) {
        let h = if self.cabled {
            2.0 * self.c / 3f64.sqrt()
        } else {
            let d = 2.0 * self.c;
            let e = (4.0 * self.c * self.c + d * d).sqrt();
            (2.0 * d * d + 2.0 * d * e).sqrt()
        };
        (self.x0 - h, self.x0 + h)
    }
}

/// A linkage with no input whose output vertex traces a real segment.
#[derive(Clone, Debug)]
pub struct SegmentGadget {
    pub linkage: Linkage,
    pub output: VertexId,
    pub driver: VertexId,
    pub x0: f64,
    pub c: f64,
    pub cabled: bool,
    geom: LineGeometry,
    ids: Vec<VertexId>,
    derived: Vec<(VertexId, VertexId, VertexId)>,
}

/// Straight-line linkage centered at `x0` with scale `c`.
pub fn straight_line_gadget(x0: f64, c: f64, cabled: bool) -> Result<SegmentGadget, GadgetError> {
    let geom = LineGeometry::new(x0, c, cabled)?;
    let mut s = Sketch::new();
    geom.add(&mut s, "");
    let mut ids: Vec<VertexId> = ["D", "E", "B", "C"].map(VertexId::from).to_vec();
    if !cabled {
        ids.push("F".into());
    }
    Ok(SegmentGadget {
        linkage: s.linkage.clone(),
        output: "E".into(),
        driver: "D".into(),
        x0,
        c,
        cabled,
        geom,
        ids,
        derived: vec![
            ("m.BD".into(), "B".into(), "D".into()),
            ("m.EC".into(), "E".into(), "C".into()),
        ],
    })
}

impl SegmentGadget {
    pub fn branches(&self) -> usize {
        self.geom.bits()
    }

    /// Endpoints of the segment predicted by the construction.
    pub fn declared_segment(&self) -> (f64, f64) {
        self.geom.segment()
    }

    fn assemble(&self, free: Vec<C>) -> Configuration {
        let mut conf: Configuration = self.ids.iter().cloned().zip(free).collect();
        for (v, p) in self.linkage.anchors() {
            conf.insert(v.clone(), p);
        }
        for (m, x, y) in &self.derived {
            let p = (conf.get(x).unwrap() + conf.get(y).unwrap()) / 2.0;
            conf.insert(m.clone(), p);
        }
        conf
    }

    fn tol(&self) -> f64 {
        super::witness::tolerance_for(8.0 * self.c + self.x0.abs())
    }

    /// All configurations with the output at `x`, one per feasible sign vector.
    pub fn configurations_at(&self, x: C) -> Vec<(Vec<bool>, Configuration)> {
        let k = self.branches();
        (0..1u32 << k)
            .filter_map(|m| {
                let s: Vec<bool> = (0..k).map(|i| m >> i & 1 == 1).collect();
                let conf = self.assemble(self.geom.solve_at(x, &s)?);
                (self.linkage.residual(&conf).ok()? <= self.tol()).then_some((s, conf))
            })
            .collect()
    }

    /// Point of the driving circle at angle `theta`.
    pub fn driver_point(&self, theta: f64) -> C {
        self.geom.hub() + C::from_polar(self.c, theta)
    }

    /// Configurations with the driver at angle `theta`.
    pub fn configurations_at_angle(&self, theta: f64) -> Vec<(Vec<bool>, Configuration)> {
        match self.geom.inv.invert(self.driver_point(theta)) {
            Some(x) => self.configurations_at(x),
            None => Vec::new(),
        }
    }

    fn feasible(&self, theta: f64) -> bool {
        !self.configurations_at_angle(theta).is_empty()
    }

    /// Feasible driver angles, an interval around π/2.
    pub fn arc(&self) -> (f64, f64) {
        let reach = |dir: f64| {
            let (mut lo, mut hi) = (0.0, PI);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if self.feasible(FRAC_PI_2 + dir * mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            FRAC_PI_2 + dir * lo
        };
        (reach(-1.0), reach(1.0))
    }

    /// Output positions at `n ≥ 2` driver angles spread over the feasible arc.
    pub fn trace(&self, n: usize) -> Vec<C> {
        let (lo, hi) = self.arc();
        let n = n.max(2);
        (0..n)
            .filter_map(|i| {
                let th = if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
                let (_, conf) = self.configurations_at_angle(th).into_iter().next()?;
                conf.get(&self.output)
            })
            .collect()
    }
}
