//! Continuation tracing of a compiled curve linkage.

use std::f64::consts::TAU;
use std::fmt::Write;

use super::enumerate::config_distance;
use crate::compiler::CurveTracer;
use crate::error::SolverError;
use crate::linkage::{Configuration, PlanePoint};

type C = PlanePoint;

/// Branches tried when the previous sign vector stops being feasible.
const FALLBACK_BRANCHES: usize = 256;
/// Branches closer than this mark a critical sample.
const COLLISION: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSample {
    /// Drive angle.
    pub theta: f64,
    /// `z + z̄` at this angle, the curve parameter in `[a, b]`.
    pub param: f64,
    pub output: C,
    /// Set when two branches nearly coincided here.
    pub critical: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Trace {
    /// In increasing `theta`.
    pub samples: Vec<TraceSample>,
    /// Angle intervals where no configuration passed the residual gate.
    pub gaps: Vec<(f64, f64)>,
}

impl Trace {
    pub fn outputs(&self) -> Vec<C> {
        self.samples.iter().map(|s| s.output).collect()
    }
}

fn with_anchors(tr: &CurveTracer, mut conf: Configuration) -> Configuration {
    for (v, p) in tr.linkage.anchors() {
        if !conf.contains(v) {
            conf.insert(v.clone(), p);
        }
    }
    conf
}

/// Sweeps the drive angle over `steps` equally spaced values in `[0, 2π)`.
pub fn trace_curve(tr: &CurveTracer, steps: usize) -> Result<Trace, SolverError> {
    if steps < 2 {
        return Err(SolverError::TooFewSteps(steps));
    }
    let g = &tr.compiled.gadget;
    let tol = tr.compiled.tolerance();
    let accept = |conf: Configuration| -> Option<(Configuration, C)> {
        let conf = with_anchors(tr, conf);
        let res = tr.linkage.residual(&conf).ok()?;
        let out = conf.get(&tr.output)?;
        (res <= tol).then_some((conf, out))
    };
    let mut trace = Trace::default();
    let mut signs: Option<Vec<bool>> = None;
    let mut prev: Option<C> = None;
    let mut gap_start: Option<f64> = None;
    for i in 0..steps {
        let theta = TAU * i as f64 / steps as f64;
        let z = tr.input_at(theta);
        let mut hit = None;
        let mut critical = false;
        if let Some(s) = &signs {
            if let Some(conf) = g.witness(&[z], s)? {
                hit = accept(conf).map(|(_, o)| (s.clone(), o));
            }
        }
        if hit.is_none() {
            let cands: Vec<(Vec<bool>, Configuration, C)> = g
                .branches_at(&[z], FALLBACK_BRANCHES)?
                .into_iter()
                .filter_map(|(s, conf)| accept(conf).map(|(c, o)| (s, c, o)))
                .collect();
            critical = cands.iter().enumerate().any(|(k, a)| {
                cands[k + 1..]
                    .iter()
                    .any(|b| config_distance(&a.1, &b.1) < COLLISION)
            });
            hit = cands
                .into_iter()
                .min_by(|a, b| {
                    let d = |o: C| prev.map_or(0.0, |p| (o - p).norm());
                    d(a.2).total_cmp(&d(b.2))
                })
                .map(|(s, _, o)| (s, o));
        }
        match hit {
            Some((s, out)) => {
                if let Some(t0) = gap_start.take() {
                    trace.gaps.push((t0, theta));
                }
                trace.samples.push(TraceSample {
                    theta,
                    param: 2.0 * z.re,
                    output: out,
                    critical,
                });
                signs = Some(s);
                prev = Some(out);
            }
            None => {
                gap_start.get_or_insert(theta);
            }
        }
    }
    if let Some(t0) = gap_start {
        trace.gaps.push((t0, TAU));
    }
    Ok(trace)
}

pub fn trace_csv(trace: &Trace) -> String {
    let mut s = String::from("theta,param,out_re,out_im\n");
    for p in &trace.samples {
        let _ = writeln!(s, "{},{},{},{}", p.theta, p.param, p.output.re, p.output.im);
    }
    s
}

fn point_segment(p: C, a: C, b: C) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / l2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn point_polyline(p: C, line: &[C]) -> f64 {
    match line {
        [] => f64::INFINITY,
        [a] => (p - a).norm(),
        _ => line
            .windows(2)
            .map(|w| point_segment(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Symmetric Hausdorff distance between two polylines, measured from the vertices
/// of each to the segments of the other.
pub fn hausdorff_to_polyline(a: &[C], b: &[C]) -> f64 {
    let one = |x: &[C], y: &[C]| x.iter().map(|&p| point_polyline(p, y)).fold(0.0, f64::max);
    one(a, b).max(one(b, a))
}
