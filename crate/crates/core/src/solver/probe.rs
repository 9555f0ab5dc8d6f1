//! Degenerate components of the square linkage.

use std::f64::consts::{FRAC_PI_3, PI};

use rand::Rng;

use super::newton::newton_refine;
use crate::error::SolverError;
use crate::gadgets::{plain_square, rigidified_square, stiffened_square, SquareLabels};
use crate::linkage::{Configuration, PlanePoint};

type C = PlanePoint;

/// Which component a configuration sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareComponent {
    /// C and D at the top of a parallelogram.
    Rhombus,
    /// D collapsed onto A, C free on the circle about A.
    DOnA,
    /// C collapsed onto B, D free on the circle about B.
    COnB,
}

#[derive(Clone, Debug)]
pub struct ComponentSample {
    pub component: SquareComponent,
    pub angle: f64,
    pub configuration: Configuration,
    /// Residual in the plain square.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct SquareProbe {
    pub side: f64,
    /// Representatives of the three components of the plain square.
    pub plain: Vec<ComponentSample>,
    /// Smallest residual Newton reached in the rigidified square with stiffened
    /// brace joints and the corners held at a `DOnA` placement, over all seeds.
    pub rigid_floor_d_on_a: f64,
    pub rigid_floor_c_on_b: f64,
    /// The same floors with bare jointed midpoints.
    pub jointed_floor_d_on_a: f64,
    pub jointed_floor_c_on_b: f64,
    pub seeds: usize,
}

impl SquareProbe {
    pub fn plain_max_residual(&self) -> f64 {
        self.plain.iter().map(|s| s.residual).fold(0.0, f64::max)
    }

    /// True when both degenerate placements stay above `0.1 * side` in the rigidified square.
    pub fn rigid_rejects(&self) -> bool {
        let gate = 0.1 * self.side;
        self.rigid_floor_d_on_a > gate && self.rigid_floor_c_on_b > gate
    }
}

/// Corner placement on `component` at angle `angle` (A at 0, B at `side`).
pub fn square_corners(side: f64, component: SquareComponent, angle: f64) -> (C, C) {
    let e = C::from_polar(side, angle);
    let b = C::new(side, 0.0);
    match component {
        SquareComponent::Rhombus => (e, e + b),
        SquareComponent::DOnA => (e, C::new(0.0, 0.0)),
        SquareComponent::COnB => (b, b + e),
    }
}

fn corners_conf(l: &SquareLabels, side: f64, c: C, d: C) -> Configuration {
    [
        (l.a.clone(), C::new(0.0, 0.0)),
        (l.b.clone(), C::new(side, 0.0)),
        (l.c.clone(), c),
        (l.d.clone(), d),
    ]
    .into_iter()
    .collect()
}

/// Half-width of the arc of degenerate seed angles, centered opposite the point
/// the component shares with the rhombus.
pub const SEED_SPREAD: f64 = FRAC_PI_3;

fn degenerate_angle(component: SquareComponent, spread: f64, rng: &mut impl Rng) -> f64 {
    let shared = match component {
        SquareComponent::DOnA => PI,
        _ => 0.0,
    };
    shared + PI + rng.random_range(-spread..=spread)
}

/// How the brace joints of the rigidified square are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraceJoint {
    /// Midpoint split into two half rods.
    Jointed,
    /// Midpoint carried by a stiffening truss.
    Stiffened,
}

/// Minimum over `seeds` degenerate placements of the residual Newton reaches in
/// the rigidified square when the four corners are held where the plain square
/// put them and only the brace joints move.
fn rigid_floor(
    side: f64,
    joint: BraceJoint,
    component: SquareComponent,
    seeds: usize,
    spread: f64,
    rng: &mut impl Rng,
) -> Result<f64, SolverError> {
    let labels = SquareLabels::default();
    let (rigid, truss) = match joint {
        BraceJoint::Jointed => (rigidified_square(side)?, None),
        BraceJoint::Stiffened => {
            let (l, t) = stiffened_square(side)?;
            (l, Some(t))
        }
    };
    let mut floor = f64::INFINITY;
    for _ in 0..seeds {
        let (c, d) = square_corners(side, component, degenerate_angle(component, spread, rng));
        let pinned = rigid.fix_vertices(&[(labels.c.clone(), c), (labels.d.clone(), d)])?;
        let mut seed = corners_conf(&labels, side, c, d);
        let a = C::new(0.0, 0.0);
        let b = C::new(side, 0.0);
        let mut jitter = || C::new(rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05)) * side;
        match truss {
            None => {
                seed.insert(labels.mid_ab.clone(), (a + b) / 2.0 + jitter());
                seed.insert(labels.mid_cd.clone(), (c + d) / 2.0 + jitter());
            }
            Some(t) => {
                let (m1, p1) = t.place(a, b, true);
                let (m2, p2) = t.place(c, d, true);
                seed.insert(labels.mid_ab.clone(), m1 + jitter());
                seed.insert("p.AB", p1 + jitter());
                seed.insert(labels.mid_cd.clone(), m2 + jitter());
                seed.insert("p.CD", p2 + jitter());
            }
        }
        let (_, res, _) = newton_refine(&pinned, &seed, 0.0, 500)?;
        floor = floor.min(res);
    }
    Ok(floor)
}

/// Three-component report of the square with side `side`, using `seeds`
/// degenerate starts per component for the rigidified checks.
pub fn probe_square_degeneracy_with(
    side: f64,
    seeds: usize,
    spread: f64,
    rng: &mut impl Rng,
) -> Result<SquareProbe, SolverError> {
    let plain = plain_square(side)?;
    let labels = SquareLabels::default();
    let mut samples = Vec::new();
    for component in [SquareComponent::Rhombus, SquareComponent::DOnA, SquareComponent::COnB] {
        let angle = match component {
            SquareComponent::Rhombus => 1.1,
            SquareComponent::DOnA => 2.0,
            SquareComponent::COnB => -0.7,
        };
        let (c, d) = square_corners(side, component, angle);
        let conf = corners_conf(&labels, side, c, d);
        let residual = plain.residual(&conf)?;
        samples.push(ComponentSample {
            component,
            angle,
            configuration: conf,
            residual,
        });
    }
    let mut floor = |joint, component| rigid_floor(side, joint, component, seeds, spread, rng);
    Ok(SquareProbe {
        side,
        plain: samples,
        jointed_floor_d_on_a: floor(BraceJoint::Jointed, SquareComponent::DOnA)?,
        jointed_floor_c_on_b: floor(BraceJoint::Jointed, SquareComponent::COnB)?,
        rigid_floor_d_on_a: floor(BraceJoint::Stiffened, SquareComponent::DOnA)?,
        rigid_floor_c_on_b: floor(BraceJoint::Stiffened, SquareComponent::COnB)?,
        seeds,
    })
}

/// [`probe_square_degeneracy_with`] with 50 seeds per component over
/// [`SEED_SPREAD`], from a fixed RNG stream.
pub fn probe_square_degeneracy(side: f64) -> Result<SquareProbe, SolverError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5157);
    probe_square_degeneracy_with(side, 50, SEED_SPREAD, &mut rng)
}
