//! Branch enumeration over the witness tree.

use std::ops::ControlFlow;

use crate::error::GadgetError;
use crate::gadgets::FunctionalGadget;
use crate::linkage::{Configuration, PlanePoint};

/// Two configurations closer than this (max vertex distance) count as one.
pub const DEDUP_DISTANCE: f64 = 1e-7;

#[derive(Clone, Debug, Default)]
pub struct SolveReport {
    pub configurations: Vec<Configuration>,
    pub residuals: Vec<f64>,
    pub branch_labels: Vec<Vec<bool>>,
    pub converged: Vec<bool>,
}

impl SolveReport {
    pub fn count(&self) -> usize {
        self.configurations.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Largest vertex displacement between two configurations over the same ids.
pub fn config_distance(a: &Configuration, b: &Configuration) -> f64 {
    a.iter()
        .map(|(v, p)| b.get(v).map_or(f64::INFINITY, |q| (p - q).norm()))
        .fold(0.0, f64::max)
}

/// Every feasible branch at `input` with residual within `tol`, after removing
/// coincident branches. Errors when the input lies outside the domain.
pub fn enumerate_configs(
    g: &FunctionalGadget,
    input: &[PlanePoint],
    tol: f64,
) -> Result<SolveReport, GadgetError> {
    enumerate_configs_limited(g, input, tol, usize::MAX)
}

pub fn enumerate_configs_limited(
    g: &FunctionalGadget,
    input: &[PlanePoint],
    tol: f64,
    limit: usize,
) -> Result<SolveReport, GadgetError> {
    if input.len() != g.inputs.len() || !g.domain.contains(input) {
        return Err(GadgetError::OutsideDomain);
    }
    branches_unchecked(g, input, tol, limit)
}

/// As [`enumerate_configs_limited`] without the domain test.
pub fn branches_unchecked(
    g: &FunctionalGadget,
    input: &[PlanePoint],
    tol: f64,
    limit: usize,
) -> Result<SolveReport, GadgetError> {
    let mut rep = SolveReport::default();
    let mut err = None;
    g.for_each_branch(input, &mut |conf, signs| {
        let res = match g.linkage.residual(conf) {
            Ok(r) => r,
            Err(e) => {
                err = Some(e);
                return ControlFlow::Break(());
            }
        };
        if res <= tol
            && !rep
                .configurations
                .iter()
                .any(|c| config_distance(c, conf) <= DEDUP_DISTANCE)
        {
            rep.configurations.push(conf.clone());
            rep.residuals.push(res);
            rep.branch_labels.push(signs.to_vec());
            rep.converged.push(true);
        }
        if rep.count() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    match err {
        Some(e) => Err(e.into()),
        None => Ok(rep),
    }
}
