//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::f64::consts::TAU;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64 as C;
use polylinkage::compiler::{compile, curve_tracer, realize_set, squarer_identity, Mode};
use polylinkage::expr::parse_poly;
use polylinkage::gadgets::*;
use polylinkage::linkage::{three_anchor_bases, Configuration};
use polylinkage::GadgetError;
use polylinkage::solver::{
    enumerate_configs, hausdorff_to_polyline, newton_solve, probe_square_degeneracy, random_seed, trace_curve,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn in_disc(rng: &mut impl Rng, d: &Disc) -> C {
    d.center + C::from_polar(d.radius * rng.random::<f64>().sqrt(), rng.random::<f64>() * TAU)
}

/// Interior sample of a gadget's domain.
fn interior(rng: &mut impl Rng, g: &FunctionalGadget, shrink: f64) -> Vec<C> {
    loop {
        let z: Vec<C> = g
            .domain
            .discs
            .iter()
            .map(|d| in_disc(rng, &Disc::new(d.center, d.radius * shrink)))
            .collect();
        if g.domain.contains(&z) {
            return z;
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let p = PeaucellierParams { a: 5.0, b: 4.0, c: 2.0, cabled: false };
    let g = inversion_with(C::new(0.0, 0.0), p, C::new(3.0, 0.0), 1.0).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut de, mut f, mut res, mut n) = (0.0f64, 0.0f64, 0.0f64, 0);
    while n < 10_000 {
        let z = interior(&mut rng, &g, 1.0);
        for (_, conf) in g.branches_at(&z, usize::MAX).map_err(|e| e.to_string())? {
            if n == 10_000 {
                break;
            }
            let r = g.linkage.residual(&conf).map_err(|e| e.to_string())?;
            res = res.max(r);
            let pd = conf.get("D").unwrap();
            let pe = conf.get("E").unwrap();
            let pf = conf.get("F").unwrap();
            de = de.max((pd.norm() * pe.norm() - 9.0).abs());
            f = f.max((pf.norm() - 13f64.sqrt()).abs());
            n += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(
        res <= 1e-9 && de <= 1e-8 && f <= 1e-8 && secs < 5.0,
        format!("{n} configurations, max residual {res:.1e}, max ||D||E|-9| {de:.1e}, max ||F|-sqrt13| {f:.1e}, {secs:.2}s"),
    )
}

/// Max |output - f(input)| over all branches at `n` interior samples.
fn functional_error(g: &FunctionalGadget, f: impl Fn(&[C]) -> C, n: usize, seed: u64) -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let z = interior(&mut rng, g, 1.0);
        let want = f(&z);
        let branches = g.branches_at(&z, usize::MAX).map_err(|e| e.to_string())?;
        if branches.is_empty() {
            return Err(format!("{}: no configuration at {z:?}", g.name));
        }
        for (_, conf) in branches {
            let res = g.linkage.residual(&conf).map_err(|e| e.to_string())?;
            if res > 1e-9 {
                return Err(format!("{}: residual {res:e}", g.name));
            }
            worst = worst.max((g.output_positions(&conf).unwrap()[0] - want).norm());
        }
    }
    Ok(worst)
}

fn criterion_2() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for cabled in [false, true] {
        let z0 = C::new(1.5, -0.5);
        let mut cases: Vec<(String, FunctionalGadget, Box<dyn Fn(&[C]) -> C>)> = vec![(
            "translation".into(),
            translation_gadget(z0, 1.0, cabled).map_err(|e| e.to_string())?,
            Box::new(move |z: &[C]| z[0] + z0),
        )];
        for lambda in [2.0, 0.5, -1.0] {
            cases.push((
                format!("scalar {lambda}"),
                scalar_mult_gadget(lambda, 1.0, cabled).map_err(|e| e.to_string())?,
                Box::new(move |z: &[C]| z[0] * lambda),
            ));
        }
        cases.push((
            "average".into(),
            average_gadget(0.75, cabled).map_err(|e| e.to_string())?.0,
            Box::new(|z: &[C]| (z[0] + z[1]) / 2.0),
        ));
        let t = 3.0;
        cases.push((
            "inversion".into(),
            inversion_gadget(t, C::from_polar(t, 0.7), t / 2.0, cabled).map_err(|e| e.to_string())?,
            Box::new(move |z: &[C]| t * t / z[0].conj()),
        ));
        cases.push((
            "conjugation".into(),
            conjugation_gadget(0.5, cabled).map_err(|e| e.to_string())?,
            Box::new(|z: &[C]| z[0].conj()),
        ));
        let mut worst = 0.0f64;
        for (name, g, f) in &cases {
            let e = functional_error(g, f, 1000, 2).map_err(|e| format!("{name}: {e}"))?;
            ok &= e <= 1e-9;
            worst = worst.max(e);
        }
        lines.push(format!("{} max error {worst:.1e}", if cabled { "cabled" } else { "classical" }));
    }
    ensure(ok, format!("7 gadgets x 2 modes x 1000 samples; {}", lines.join(", ")))
}

/// Branch counts at 100 interior points.
fn counts(g: &FunctionalGadget, seed: u64) -> Result<Vec<usize>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100)
        .map(|_| {
            let z = interior(&mut rng, g, 0.98);
            enumerate_configs(g, &z, 1e-9).map(|r| r.count()).map_err(|e| e.to_string())
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let e = |r: Result<FunctionalGadget, GadgetError>| r.map_err(|e| e.to_string());
    let origin = C::new(0.0, 0.0);
    let z0 = C::from_polar(3.0, 0.4);
    let same = |v: &[usize]| v.iter().all(|&k| k == v[0]).then_some(v[0]);
    let two_bar_c = same(&counts(&e(two_bar(2.0, 1.0, origin, false))?, 3)?);
    let peau_c = same(&counts(&e(inversion_gadget(3.0, z0, 1.5, false))?, 4)?);
    let conj_c = same(&counts(&e(conjugation_gadget(0.5, false))?, 5)?);
    let cabled = [
        e(two_bar(2.0, 1.0, origin, true))?,
        e(inversion_gadget(3.0, z0, 1.5, true))?,
        e(conjugation_gadget(0.5, true))?,
        e(translation_gadget(C::new(1.0, 1.0), 1.0, true))?,
        e(scalar_mult_gadget(2.0, 1.0, true))?,
        average_gadget(0.75, true).map_err(|e| e.to_string())?.0,
    ];
    let mut strong = Vec::new();
    for (k, g) in cabled.iter().enumerate() {
        strong.push(same(&counts(g, 10 + k as u64)?));
    }
    ensure(
        two_bar_c == Some(2)
            && peau_c == Some(4)
            && conj_c.is_some_and(|k| k >= 2 && k % 2 == 0)
            && strong.iter().all(|&k| k == Some(1)),
        format!("two-bar {two_bar_c:?}, Peaucellier {peau_c:?}, conjugation {conj_c:?}, cabled {strong:?}"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut id_err = 0.0f64;
    for _ in 0..1000 {
        let z = in_disc(&mut rng, &Disc::new(C::new(0.0, 0.0), 0.9));
        id_err = id_err.max((squarer_identity(2.0, z) - z * z).norm());
    }
    let e = parse_poly("z1*z1", 1).map_err(|e| e.to_string())?;
    let c = compile(&e, &[Disc::new(C::new(0.0, 0.0), 1.0)], Mode::Cabled).map_err(|e| e.to_string())?;
    let mut lin_err = 0.0f64;
    for _ in 0..1000 {
        let z = in_disc(&mut rng, &Disc::new(C::new(0.0, 0.0), 1.0));
        let out = c.gadget.evaluate(&[z]).map_err(|e| e.to_string())?;
        lin_err = lin_err.max((out[0] - z * z).norm());
    }
    ensure(
        id_err <= 1e-10 && lin_err <= 1e-6,
        format!("identity error {id_err:.1e} at t=2, compiled z^2 error {lin_err:.1e}"),
    )
}

fn criterion_5() -> Outcome {
    let e = parse_poly("z1*z2", 2).map_err(|e| e.to_string())?;
    let unit = Disc::new(C::new(0.0, 0.0), 1.0);
    let c = compile(&e, &[unit, unit], Mode::Cabled).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut err = 0.0f64;
    for _ in 0..1000 {
        let (z, w) = (in_disc(&mut rng, &unit), in_disc(&mut rng, &unit));
        let out = c.gadget.evaluate(&[z, w]).map_err(|e| e.to_string())?;
        err = err.max((out[0] - z * w).norm());
    }
    let one = C::new(1.0, 0.0);
    let out = c.gadget.evaluate(&[one, one]).map_err(|e| e.to_string())?[0];
    let quarter = ((one + one) * (one + one) - (one - one) * (one - one)) / 4.0;
    let half = ((one + one) * (one + one) - (one - one) * (one - one)) / 2.0;
    ensure(
        err <= 1e-6 && (out - one).norm() <= 1e-6 && (quarter - one).norm() == 0.0 && (half - one).norm() > 0.5,
        format!("compiled zw error {err:.1e}; at z=w=1 linkage gives {out:.6}, /4 identity {quarter}, /2 variant {half}"),
    )
}

fn criterion_6() -> Outcome {
    let p = probe_square_degeneracy(1.0).map_err(|e| e.to_string())?;
    ensure(
        p.plain.len() == 3 && p.plain_max_residual() <= 1e-12 && p.rigid_rejects(),
        format!(
            "plain square residual {:.1e} on 3 components; rigidified floors {:.4} and {:.4} over {} seeds each (gate 0.1)",
            p.plain_max_residual(),
            p.rigid_floor_d_on_a,
            p.rigid_floor_c_on_b,
            p.seeds
        ),
    )
}

fn criterion_7() -> Outcome {
    let g = straight_line_gadget(0.0, 3f64.sqrt(), true).map_err(|e| e.to_string())?;
    let (lo, hi) = g.arc();
    let mut pts = Vec::new();
    let mut im = 0.0f64;
    for i in 0..500 {
        let th = if i == 499 { hi } else { lo + (hi - lo) * i as f64 / 499.0 };
        for (_, conf) in g.configurations_at_angle(th) {
            let p = conf.get(&g.output).unwrap();
            im = im.max(p.im.abs());
            pts.push(p);
        }
    }
    pts.sort_by(|a, b| a.re.total_cmp(&b.re));
    let h = hausdorff_to_polyline(&pts, &[C::new(-2.0, 0.0), C::new(2.0, 0.0)]);
    ensure(
        h <= 1e-6 && im <= 1e-9,
        format!("{} outputs over 500 driver angles, Hausdorff to [-2, 2] {h:.1e}, max |Im| {im:.1e}", pts.len()),
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let alpha = parse_poly("z1 + i*z1*(1 - z1)", 1).map_err(|e| e.to_string())?;
    let tr = curve_tracer(&alpha, 0.0, 1.0, Mode::Cabled).map_err(|e| e.to_string())?;
    let trace = trace_curve(&tr, 720).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let mut traced: Vec<(f64, C)> = trace.samples.iter().map(|s| (s.param, s.output)).collect();
    traced.sort_by(|a, b| a.0.total_cmp(&b.0));
    let pts: Vec<C> = traced.into_iter().map(|p| p.1).collect();
    let dense: Vec<C> = (0..=100_000)
        .map(|k| {
            let t = k as f64 / 100_000.0;
            C::new(t, t * (1.0 - t))
        })
        .collect();
    let h = hausdorff_to_polyline(&pts, &dense);
    ensure(
        trace.samples.len() == 720 && h <= 1e-4 && secs < 10.0,
        format!("{} samples, {} gaps, Hausdorff {h:.1e}, {secs:.2}s", trace.samples.len(), trace.gaps.len()),
    )
}

fn criterion_9() -> Outcome {
    let region = [Disc::new(C::new(0.0, 0.0), 1.5)];
    let circle = parse_poly("z1*conj(z1) - 1", 1).map_err(|e| e.to_string())?;
    let set = realize_set(&circle, 1, &region, Mode::Cabled, 9).map_err(|e| e.to_string())?;
    let tol = set.compiled.tolerance();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let off = |rng: &mut ChaCha8Rng, keep: &dyn Fn(f64) -> bool| loop {
        let z = in_disc(rng, &region[0]);
        if keep(z.norm()) {
            return z;
        }
    };
    let on_ok = (0..400).filter(|_| set.solvable(&[C::from_polar(1.0, rng.random::<f64>() * TAU)], tol)).count();
    let off_ok = (0..400)
        .filter(|_| !set.solvable(&[off(&mut rng, &|r| (r - 1.0).abs() >= 0.05)], tol))
        .count();

    let disk = parse_poly("1 - z1*conj(z1)", 1).map_err(|e| e.to_string())?;
    let dset = realize_set(&disk, 0, &region, Mode::Cabled, 9).map_err(|e| e.to_string())?;
    let dtol = dset.compiled.tolerance();
    let in_ok = (0..400).filter(|_| dset.solvable(&[off(&mut rng, &|r| r <= 0.95)], dtol)).count();
    let edge_ok = (0..400)
        .filter(|_| dset.solvable(&[C::from_polar(1.0 - 1e-9, rng.random::<f64>() * TAU)], dtol))
        .count();
    let out_ok = (0..400).filter(|_| !dset.solvable(&[off(&mut rng, &|r| r >= 1.05)], dtol)).count();
    ensure(
        on_ok == 400 && off_ok == 400 && in_ok == 400 && edge_ok == 400 && out_ok == 400,
        format!(
            "circle: {on_ok}/400 on solvable, {off_ok}/400 off unsolvable; disk: {in_ok}/400 inside and {edge_ok}/400 boundary solvable, {out_ok}/400 outside unsolvable"
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut equi = 0.0f64;
    let (mut restricted, mut glued) = (0, 0);
    for _ in 0..100 {
        let p = common::random_pair(&mut rng);
        let u = p.left.union(&p.right).map_err(|e| e.to_string())?;
        let n = rng.random_range(0.1..10.0);
        let z = C::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let phi = random_seed(&u, &mut rng);
        let r = u.residual(&phi).unwrap();
        let rs = u.rescale(n).unwrap().residual(&phi.affine(n, C::new(0.0, 0.0))).unwrap();
        let rt = u.translate(z).residual(&phi.affine(1.0, z)).unwrap();
        equi = equi.max((rs - n * r).abs() / n).max((rt - r).abs());
        equi = equi.max(u.rescale(n).unwrap().translate(z).residual(&p.placement.affine(n, z)).unwrap() / n);

        let whole = u.residual(&phi).unwrap();
        let parts = p.left.residual(&common::part(&phi, &p.left)).unwrap().max(
            p.right.residual(&common::part(&phi, &p.right)).unwrap(),
        );
        if whole != parts {
            return Err(format!("union residual {whole} differs from parts {parts}"));
        }
        if let Ok(psi) = newton_solve(&u, &common::jitter(&p.placement, &u, 0.2, &mut rng), 1e-9, 200) {
            if p.left.residual(&common::part(&psi, &p.left)).unwrap() > 1e-9
                || p.right.residual(&common::part(&psi, &p.right)).unwrap() > 1e-9
            {
                return Err("a union configuration does not restrict to its parts".into());
            }
            restricted += 1;
        }
        let Ok(psi1) = newton_solve(&p.left, &common::jitter(&common::part(&p.placement, &p.left), &p.left, 0.2, &mut rng), 1e-9, 200) else {
            continue;
        };
        let pins: Vec<_> = [common::name(2), common::name(3)]
            .into_iter()
            .filter(|v| !p.right.is_fixed(v))
            .map(|v| {
                let q = psi1.get(&v).unwrap();
                (v, q)
            })
            .collect();
        let pinned = p.right.fix_vertices(&pins).unwrap();
        let mut seed = common::jitter(&common::part(&p.placement, &p.right), &pinned, 0.2, &mut rng);
        for (v, q) in &pins {
            seed.insert(v.clone(), *q);
        }
        if let Ok(psi2) = newton_solve(&pinned, &seed, 1e-9, 200) {
            let mut glue = psi2;
            for (v, q) in psi1.iter() {
                glue.insert(v.clone(), *q);
            }
            if u.residual(&glue).unwrap() > 2e-9 {
                return Err("glued part configurations are not a union configuration".into());
            }
            glued += 1;
        }
    }

    let l = common::five_anchor_linkage();
    let red = l.reduce_to_three_fixed().map_err(|e| e.to_string())?;
    let bases = three_anchor_bases();
    let mut trips = 0;
    for _ in 0..200 {
        let Ok(c) = newton_solve(&l, &random_seed(&l, &mut rng), 1e-9, 200) else { continue };
        let mut ext: Configuration = c.restrict(red.vertex_ids().filter(|v| c.contains(*v)));
        for (id, p) in &bases {
            ext.insert(id.clone(), *p);
        }
        if red.residual(&ext).unwrap() > 1e-9 {
            return Err("sampled configuration does not lift to the reduced linkage".into());
        }
        let seed = common::jitter(&ext, &red, 0.05, &mut rng);
        let Ok(s) = newton_solve(&red, &seed, 1e-9, 200) else { continue };
        let moved = l.anchors().any(|(id, p)| s.get(id).is_some_and(|q| (q - p).norm() > 1e-6));
        let mut back: Configuration = s.restrict(l.vertex_ids().filter(|v| s.contains(*v)));
        back.insert("p0", C::new(0.0, 0.0));
        if moved || l.residual(&back).unwrap() > 1e-6 {
            return Err("reduced configuration does not project back".into());
        }
        trips += 1;
    }
    ensure(
        equi <= 1e-12 && restricted >= 50 && glued >= 50 && trips >= 20 && red.anchors().count() == 3,
        format!(
            "equivariance error {equi:.1e}; union law on 100 random pairs ({restricted} restricted, {glued} glued); {trips} three-anchor round trips"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Peaucellier conservation", criterion_1),
        ("gadget functionality", criterion_2),
        ("covering degrees", criterion_3),
        ("squarer identity", criterion_4),
        ("multiplier identity", criterion_5),
        ("square degeneracy", criterion_6),
        ("straight line", criterion_7),
        ("curve tracer", criterion_8),
        ("set realization", criterion_9),
        ("structural laws", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(d) => println!("criterion {}: PASS {name}: {d}", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {d}", k + 1);
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
