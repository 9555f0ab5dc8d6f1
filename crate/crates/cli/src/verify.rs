//! Invariant checks run by `verify`.

use std::fmt;

use polylinkage::compiler::Mode;
use polylinkage::json::LinkageDoc;
use polylinkage::solver::{enumerate_configs_limited, hausdorff_to_polyline, trace_curve};
use polylinkage::PlanePoint;
use rand::Rng;

use crate::model::{rebuild, sample_disc, Built};

/// Output error allowed against direct evaluation of the expression.
const VALUE_TOL: f64 = 1e-6;
/// Classical covers larger than this are not enumerated.
const MAX_ENUMERATED: u64 = 4096;
/// Points at which branch counts are checked.
const DEGREE_POINTS: usize = 10;
/// Set membership is only asserted this far from the boundary.
const MARGIN: f64 = 0.05;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

pub fn run(doc: &LinkageDoc, tol: f64, samples: usize, rng: &mut impl Rng) -> Vec<Check> {
    let mut out = vec![check(
        "structure",
        true,
        format!(
            "{} vertices, {} edges, {} fixed, {} inputs, {} outputs",
            doc.linkage.vertex_count(),
            doc.linkage.edge_count(),
            doc.linkage.anchors().count(),
            doc.inputs.len(),
            doc.outputs.len()
        ),
    )];
    if !doc.meta.contains_key("mode") {
        out.push(check("metadata", true, "no compile metadata; structural checks only".into()));
        return out;
    }
    let built = match rebuild(doc) {
        Ok(b) => b,
        Err(e) => {
            out.push(check("rebuild", false, format!("{e:#}")));
            return out;
        }
    };
    let (want, got) = (built.doc().to_value(), doc.to_value());
    let differing: Vec<&str> = ["domain", "edges", "inputs", "meta", "outputs", "vertices"]
        .into_iter()
        .filter(|k| want.get(k) != got.get(k))
        .collect();
    out.push(check(
        "round-trip",
        differing.is_empty(),
        if differing.is_empty() {
            "recompiled linkage is byte-identical".into()
        } else {
            format!("recompiled linkage differs in {}", differing.join(", "))
        },
    ));
    let gate = tol.max(built.compiled().tolerance());
    match &built {
        Built::Map(_) => {
            out.push(functional(&built, gate, samples, rng));
            out.push(degree(&built, gate, rng));
        }
        Built::Set(..) => out.push(membership(&built, gate, samples, rng)),
        Built::Curve(_) => out.push(curve(&built, samples)),
    }
    out
}

fn functional(b: &Built, gate: f64, samples: usize, rng: &mut impl Rng) -> Check {
    let c = b.compiled();
    let (mut err, mut res, mut missing) = (0.0f64, 0.0f64, 0usize);
    for _ in 0..samples {
        let z: Vec<PlanePoint> = c.region.iter().map(|d| sample_disc(d, rng)).collect();
        let Ok(Some((_, conf))) = c.gadget.first_branch(&z) else {
            missing += 1;
            continue;
        };
        res = res.max(c.gadget.linkage.residual(&conf).unwrap_or(f64::INFINITY));
        let got = c.gadget.output_positions(&conf).unwrap_or_default();
        for (a, w) in got.iter().zip(c.expr.eval(&z)) {
            err = err.max((a - w).norm());
        }
    }
    check(
        "functional",
        missing == 0 && res <= gate && err <= VALUE_TOL,
        format!("{samples} samples, max residual {res:e} (gate {gate:e}), max output error {err:e}, {missing} without a configuration"),
    )
}

fn degree(b: &Built, gate: f64, rng: &mut impl Rng) -> Check {
    let c = b.compiled();
    let declared = u64::try_from(&c.degree).ok();
    let want = match (c.mode, declared) {
        (Mode::Cabled, _) => 1,
        (Mode::Classical, Some(d)) if d <= MAX_ENUMERATED => d,
        _ => {
            return check(
                "degree",
                true,
                format!("declared {} exceeds the enumeration cap {MAX_ENUMERATED}; not counted", c.degree),
            )
        }
    };
    let mut counts = Vec::new();
    for _ in 0..DEGREE_POINTS {
        let z: Vec<PlanePoint> = c.region.iter().map(|d| sample_disc(d, rng)).collect();
        match enumerate_configs_limited(&c.gadget, &z, gate, want as usize + 1) {
            Ok(r) => counts.push(r.count() as u64),
            Err(_) => counts.push(0),
        }
    }
    check(
        "degree",
        counts.iter().all(|&n| n == want) && declared == Some(want),
        format!("declared {}, counted {counts:?}", c.degree),
    )
}

fn membership(b: &Built, gate: f64, samples: usize, rng: &mut impl Rng) -> Check {
    let Built::Set(s, _) = b else { unreachable!() };
    let c = &s.compiled;
    let (mut inside, mut outside, mut wrong) = (0usize, 0usize, 0usize);
    for _ in 0..samples {
        let z: Vec<PlanePoint> = c.region.iter().map(|d| sample_disc(d, rng)).collect();
        let g = c.expr.eval(&z);
        let (eq, ineq) = g.split_at(s.equalities);
        let out = eq.iter().any(|v| v.norm() >= MARGIN) || ineq.iter().any(|v| v.re <= -MARGIN);
        let inn = eq.is_empty() && ineq.iter().all(|v| v.re >= MARGIN);
        if !(out || inn) {
            continue;
        }
        let solvable = s.solvable(&z, gate);
        if out {
            outside += 1;
        } else {
            inside += 1;
        }
        if solvable != inn {
            wrong += 1;
        }
    }
    check(
        "membership",
        wrong == 0,
        format!("{inside} inside and {outside} outside samples classified, {wrong} wrong; b = {:?}", s.b),
    )
}

fn curve(b: &Built, samples: usize) -> Check {
    let Built::Curve(t) = b else { unreachable!() };
    let steps = samples.max(2);
    let trace = match trace_curve(t, steps) {
        Ok(tr) => tr,
        Err(e) => return check("curve", false, e.to_string()),
    };
    let mut on = 0.0f64;
    for s in &trace.samples {
        let want = t.alpha.eval(&[PlanePoint::new(s.param, 0.0)])[0];
        on = on.max((s.output - want).norm());
    }
    let dense: Vec<PlanePoint> = (0..=4 * steps)
        .map(|k| t.a + (t.b - t.a) * k as f64 / (4 * steps) as f64)
        .map(|x| t.alpha.eval(&[PlanePoint::new(x, 0.0)])[0])
        .collect();
    let mut traced: Vec<(f64, PlanePoint)> = trace.samples.iter().map(|s| (s.param, s.output)).collect();
    traced.sort_by(|a, b| a.0.total_cmp(&b.0));
    let pts: Vec<PlanePoint> = traced.into_iter().map(|p| p.1).collect();
    let h = hausdorff_to_polyline(&pts, &dense);
    check(
        "curve",
        trace.gaps.is_empty() && on <= VALUE_TOL,
        format!(
            "{} of {steps} steps traced, {} gaps, max distance to the curve {on:e}, Hausdorff to dense evaluation {h:e}",
            trace.samples.len(),
            trace.gaps.len()
        ),
    )
}
