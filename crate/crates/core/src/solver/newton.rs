//! Damped least-squares refinement of configurations.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::SolverError;
use crate::linkage::{Configuration, EdgeKind, Linkage, PlanePoint, VertexId};

type C = PlanePoint;

struct System {
    free: Vec<VertexId>,
    /// (u, v, length, kind), endpoints as free indices or fixed anchors.
    rows: Vec<(End, End, f64, EdgeKind)>,
}

#[derive(Clone, Copy)]
enum End {
    Free(usize),
    Fixed(C),
}

impl System {
    fn new(l: &Linkage) -> System {
        let free: Vec<VertexId> = l
            .vertices()
            .filter(|(_, a)| a.is_none())
            .map(|(v, _)| v.clone())
            .collect();
        let index: HashMap<&VertexId, usize> = free.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let end = |v: &VertexId| match index.get(v) {
            Some(&i) => End::Free(i),
            None => End::Fixed(l.anchor(v).expect("non-free vertices are anchored")),
        };
        let rows = l.edges().map(|e| (end(&e.u), end(&e.v), e.length, e.kind)).collect();
        System { free, rows }
    }

    fn pos(x: &DVector<f64>, e: End) -> C {
        match e {
            End::Free(i) => C::new(x[2 * i], x[2 * i + 1]),
            End::Fixed(p) => p,
        }
    }

    /// Residual vector (|d|² − ℓ²)/(2ℓ); slack cables contribute 0.
    fn residuals(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.rows.len(),
            self.rows.iter().map(|&(u, v, l, k)| {
                let d = Self::pos(x, u) - Self::pos(x, v);
                let r = (d.norm_sqr() - l * l) / (2.0 * l);
                if k == EdgeKind::Cable && r < 0.0 {
                    0.0
                } else {
                    r
                }
            }),
        )
    }

    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.rows.len(), 2 * self.free.len());
        for (row, &(u, v, l, k)) in self.rows.iter().enumerate() {
            let d = Self::pos(x, u) - Self::pos(x, v);
            if k == EdgeKind::Cable && d.norm() <= l {
                continue;
            }
            let g = d / l;
            if let End::Free(i) = u {
                j[(row, 2 * i)] += g.re;
                j[(row, 2 * i + 1)] += g.im;
            }
            if let End::Free(i) = v {
                j[(row, 2 * i)] -= g.re;
                j[(row, 2 * i + 1)] -= g.im;
            }
        }
        j
    }

    fn pack(&self, conf: &Configuration) -> Result<DVector<f64>, SolverError> {
        let mut x = DVector::zeros(2 * self.free.len());
        for (i, v) in self.free.iter().enumerate() {
            let p = conf
                .get(v)
                .ok_or_else(|| crate::error::LinkageError::MalformedConfiguration(v.clone()))?;
            x[2 * i] = p.re;
            x[2 * i + 1] = p.im;
        }
        Ok(x)
    }

    fn unpack(&self, l: &Linkage, x: &DVector<f64>) -> Configuration {
        let mut conf: Configuration = self
            .free
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), C::new(x[2 * i], x[2 * i + 1])))
            .collect();
        for (v, p) in l.anchors() {
            conf.insert(v.clone(), p);
        }
        conf
    }
}

/// Levenberg–Marquardt iteration from `seed`. Always returns the best configuration
/// found together with its residual (anchors are imposed exactly).
pub fn newton_refine(
    l: &Linkage,
    seed: &Configuration,
    tol: f64,
    max_iter: usize,
) -> Result<(Configuration, f64, usize), SolverError> {
    let sys = System::new(l);
    let mut x = sys.pack(seed)?;
    let mut conf = sys.unpack(l, &x);
    let mut res = l.residual(&conf)?;
    if res <= tol || sys.free.is_empty() {
        return Ok((conf, res, 0));
    }
    let mut r = sys.residuals(&x);
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;
    let n = x.len();
    for it in 1..=max_iter {
        let j = sys.jacobian(&x);
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * &r;
        let scale = (0..n).map(|i| jtj[(i, i)]).fold(0.0f64, f64::max).max(1e-12);
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for i in 0..n {
                a[(i, i)] += mu * scale;
            }
            let Some(step) = a.cholesky().map(|ch| ch.solve(&g)) else {
                mu *= 10.0;
                continue;
            };
            let trial = &x - step;
            let rt = sys.residuals(&trial);
            let ct = rt.norm_squared();
            if ct.is_finite() && ct < cost {
                x = trial;
                r = rt;
                cost = ct;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        conf = sys.unpack(l, &x);
        res = l.residual(&conf)?;
        if res <= tol {
            return Ok((conf, res, it));
        }
        if !improved {
            return Ok((conf, res, it));
        }
    }
    Ok((conf, res, max_iter))
}

/// Newton solve: success iff the final residual is within `tol`.
pub fn newton_solve(
    l: &Linkage,
    seed: &Configuration,
    tol: f64,
    max_iter: usize,
) -> Result<Configuration, SolverError> {
    let (conf, residual, iterations) = newton_refine(l, seed, tol, max_iter)?;
    if residual <= tol {
        Ok(conf)
    } else {
        Err(SolverError::NoConvergence {
            residual,
            iterations,
        })
    }
}

/// Uniform placement of the free vertices in the disc around the anchors
/// enlarged by the total edge length.
pub fn random_seed(l: &Linkage, rng: &mut impl Rng) -> Configuration {
    let anchors: Vec<C> = l.anchors().map(|(_, p)| p).collect();
    let center = if anchors.is_empty() {
        C::new(0.0, 0.0)
    } else {
        anchors.iter().sum::<C>() / anchors.len() as f64
    };
    let spread = anchors.iter().map(|p| (p - center).norm()).fold(0.0, f64::max);
    let radius = spread + l.total_length().max(1.0);
    l.vertices()
        .map(|(v, a)| {
            let p = a.unwrap_or_else(|| {
                center
                    + C::from_polar(
                        radius * rng.random::<f64>().sqrt(),
                        rng.random::<f64>() * std::f64::consts::TAU,
                    )
            });
            (v.clone(), p)
        })
        .collect()
}

/// Runs Newton from `seeds` random placements and keeps every converged result.
pub fn solve_from_random_seeds(
    l: &Linkage,
    seeds: usize,
    tol: f64,
    max_iter: usize,
    rng: &mut impl Rng,
) -> Vec<Configuration> {
    (0..seeds)
        .filter_map(|_| newton_solve(l, &random_seed(l, rng), tol, max_iter).ok())
        .collect()
}
