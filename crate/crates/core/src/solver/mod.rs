//! Numerical engine: branch enumeration, Newton refinement, degree sampling,
//! curve tracing and the square probe.

mod degree;
mod enumerate;
mod newton;
mod probe;
mod trace;

pub use degree::{degree_csv, degree_map, DegreeSample, Grid};
pub use enumerate::{
    branches_unchecked, config_distance, enumerate_configs, enumerate_configs_limited, SolveReport,
    DEDUP_DISTANCE,
};
pub use newton::{newton_refine, newton_solve, random_seed, solve_from_random_seeds};
pub use probe::{
    probe_square_degeneracy, probe_square_degeneracy_with, BraceJoint, square_corners, ComponentSample,
    SquareComponent, SquareProbe, SEED_SPREAD,
};
pub use trace::{hausdorff_to_polyline, trace_curve, trace_csv, Trace, TraceSample};

/// Residual acceptance threshold.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Random Newton starts used when no witness is available.
pub const NEWTON_SEEDS: usize = 200;
