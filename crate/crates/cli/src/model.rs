//! Rebuilding compiled objects from the metadata stored in a linkage document.

use anyhow::{anyhow, bail, Context, Result};
use polylinkage::compiler::{compile, curve_tracer, parse_region, realize_set, CompiledLinkage, CurveTracer, Mode, RealizedSet};
use polylinkage::expr::parse_poly;
use polylinkage::gadgets::{Disc, FunctionalGadget};
use polylinkage::json::LinkageDoc;
use polylinkage::{Linkage, PlanePoint};
use rand::Rng;
use serde_json::Value;

pub enum Built {
    Map(CompiledLinkage),
    Set(RealizedSet, u64),
    Curve(CurveTracer),
}

impl Built {
    pub fn compiled(&self) -> &CompiledLinkage {
        match self {
            Built::Map(c) => c,
            Built::Set(s, _) => &s.compiled,
            Built::Curve(t) => &t.compiled,
        }
    }

    pub fn gadget(&self) -> &FunctionalGadget {
        &self.compiled().gadget
    }

    /// The linkage the document describes (with tethers, hub and so on).
    pub fn linkage(&self) -> &Linkage {
        match self {
            Built::Map(c) => &c.gadget.linkage,
            Built::Set(s, _) => &s.linkage,
            Built::Curve(t) => &t.linkage,
        }
    }

    pub fn doc(&self) -> LinkageDoc {
        match self {
            Built::Map(c) => LinkageDoc::from_compiled(c),
            Built::Set(s, seed) => {
                let mut d = LinkageDoc::from_realized(s);
                d.meta.insert("seed".into(), Value::from(*seed));
                d
            }
            Built::Curve(t) => LinkageDoc::from_tracer(t),
        }
    }
}

pub fn parse_interval(text: &str) -> Result<(f64, f64)> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("interval {text:?} is not a:b"))?;
    let a: f64 = a.trim().parse().with_context(|| format!("bad interval start {a:?}"))?;
    let b: f64 = b.trim().parse().with_context(|| format!("bad interval end {b:?}"))?;
    Ok((a, b))
}

/// Recompiles the object recorded in `doc.meta`.
pub fn rebuild(doc: &LinkageDoc) -> Result<Built> {
    let field = |k: &str| {
        doc.meta_str(k)
            .ok_or_else(|| anyhow!("linkage has no compile metadata (missing meta.{k})"))
    };
    let mode: Mode = field("mode")?.parse().map_err(|e: String| anyhow!(e))?;
    match doc.meta_str("kind").unwrap_or("map") {
        "map" => {
            let expr_text = field("expr")?;
            let region = parse_region(field("region")?)?;
            let expr = parse_poly(expr_text, region.len())?;
            Ok(Built::Map(compile(&expr, &region, mode)?))
        }
        "set" => {
            let region = parse_region(field("region")?)?;
            let expr = parse_poly(field("expr")?, region.len())?;
            let k = doc
                .meta
                .get("equalities")
                .and_then(Value::as_u64)
                .ok_or_else(|| anyhow!("meta.equalities missing"))?;
            let seed = doc.meta.get("seed").and_then(Value::as_u64).unwrap_or(0);
            Ok(Built::Set(realize_set(&expr, k as usize, &region, mode, seed)?, seed))
        }
        "curve" => {
            let alpha = parse_poly(field("alpha")?, 1)?;
            let iv = doc
                .meta
                .get("interval")
                .and_then(Value::as_array)
                .and_then(|v| Some((v.first()?.as_f64()?, v.get(1)?.as_f64()?)))
                .ok_or_else(|| anyhow!("meta.interval missing"))?;
            Ok(Built::Curve(curve_tracer(&alpha, iv.0, iv.1, mode)?))
        }
        other => bail!("unknown linkage kind {other:?}"),
    }
}

pub fn sample_disc(d: &Disc, rng: &mut impl Rng) -> PlanePoint {
    d.center + PlanePoint::from_polar(d.radius * rng.random::<f64>().sqrt(), rng.random::<f64>() * std::f64::consts::TAU)
}
