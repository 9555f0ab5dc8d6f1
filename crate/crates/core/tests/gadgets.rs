use num_complex::Complex64 as C;
use polylinkage::gadgets::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn in_disc(rng: &mut ChaCha8Rng, d: &Disc, shrink: f64) -> C {
    let r = d.radius * shrink * rng.random::<f64>().sqrt();
    d.center + C::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU)
}

fn sample(rng: &mut ChaCha8Rng, g: &FunctionalGadget, shrink: f64) -> Vec<C> {
    loop {
        let z: Vec<C> = g.domain.discs.iter().map(|d| in_disc(rng, d, shrink)).collect();
        if g.domain.contains(&z) {
            return z;
        }
    }
}

/// Checks every branch at `n` interior points and returns the branch counts seen.
fn check(g: &FunctionalGadget, n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = Vec::new();
    for _ in 0..n {
        let z = sample(&mut rng, g, 0.98);
        let want = g.apply(&z);
        let branches = g.branches_at(&z, usize::MAX).unwrap();
        for (_, conf) in &branches {
            let res = g.linkage.residual(conf).unwrap();
            assert!(res <= 1e-9, "{}: residual {res} at {z:?}", g.name);
            let got = g.output_positions(conf).unwrap();
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).norm() <= 1e-9, "{}: output {a} vs {b}", g.name);
            }
        }
        counts.push(branches.len());
    }
    counts
}

fn all_eq(v: &[usize], k: usize) -> bool {
    v.iter().all(|&x| x == k)
}

#[test]
fn two_bar_examples() {
    let z0 = C::new(0.0, 0.0);
    let e = elbow(z0, 2.0, 1.0, C::new(3.0, 0.0), true).unwrap();
    assert!((e - C::new(2.0, 0.0)).norm() < 1e-12);
    assert_eq!(elbow(z0, 2.0, 1.0, C::new(3.0, 0.0), false), Some(e));
    let up = elbow(z0, 2.0, 1.0, C::new(2.0, 0.0), true).unwrap();
    assert!((up - C::new(7.0, 15f64.sqrt()) / 4.0).norm() < 1e-12);
    assert!((up.norm() - 2.0).abs() < 1e-12 && ((C::new(2.0, 0.0) - up).norm() - 1.0).abs() < 1e-12);
    assert!(elbow(z0, 2.0, 1.0, C::new(0.5, 0.0), true).is_none());
    assert!(two_bar(1.0, 2.0, z0, false).is_err());

    assert!(all_eq(&check(&two_bar(2.0, 1.0, z0, false).unwrap(), 100, 1), 2));
    assert!(all_eq(&check(&two_bar(2.0, 1.0, z0, true).unwrap(), 100, 2), 1));
}

#[test]
fn translation_examples() {
    for cabled in [false, true] {
        let k = if cabled { 1 } else { 2 };
        let g = translation_gadget(C::new(1.5, -0.5), 1.0, cabled).unwrap();
        assert!(all_eq(&check(&g, 200, 3), k));
        let out = g.evaluate(&[C::new(0.0, 0.0)]).unwrap();
        assert!((out[0] - C::new(1.5, -0.5)).norm() < 1e-12);
        let id = translation_gadget(C::new(0.0, 0.0), 1.0, cabled).unwrap();
        assert!(all_eq(&check(&id, 50, 4), k));
    }
}

#[test]
fn scalar_examples() {
    for lambda in [2.0, 0.5, -1.0, 3.5, -0.25] {
        for cabled in [false, true] {
            let g = scalar_mult_gadget(lambda, 1.0, cabled).unwrap();
            let counts = check(&g, 100, 5);
            let want = if cabled { 1 } else { 8 };
            assert!(all_eq(&counts, want), "lambda {lambda} cabled {cabled}: {counts:?}");
        }
    }
    assert!(scalar_mult_gadget(1.0, 1.0, false).is_err());
    assert!(scalar_mult_gadget(0.0, 1.0, false).is_err());
    let g = scalar_mult_gadget(2.0, 1.0, true).unwrap();
    assert!(g.evaluate(&[C::new(0.0, 0.0)]).unwrap()[0].norm() < 1e-12);
}

#[test]
fn average_examples() {
    for cabled in [false, true] {
        let (g, k) = average_gadget(0.75, cabled).unwrap();
        let counts = check(&g, 200, 6);
        assert!(all_eq(&counts, if cabled { 1 } else { 2 }), "{counts:?}");
        let out = g.evaluate(&[k.z0, -k.z0]).unwrap();
        assert!(out[0].norm() < 1e-12);
        assert!((g.domain.discs[0].radius - 0.75).abs() < 1e-15);
    }
}

#[test]
fn inversion_examples() {
    for cabled in [false, true] {
        let t = 3.0;
        let z0 = C::from_polar(t, 0.7);
        let g = inversion_gadget(t, z0, t / 2.0, cabled).unwrap();
        let counts = check(&g, 200, 7);
        assert!(all_eq(&counts, if cabled { 1 } else { 4 }), "{counts:?}");
        let out = g.evaluate(&[z0]).unwrap();
        assert!((out[0] - z0).norm() < 1e-12);
    }
    assert!(inversion_gadget(3.0, C::new(3.0, 0.0), 2.0, false).is_err());
}

#[test]
fn straight_line_examples() {
    let g = straight_line_gadget(0.0, 3f64.sqrt(), true).unwrap();
    let (lo, hi) = g.declared_segment();
    assert!((lo + 2.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
    let pts = g.trace(200);
    assert_eq!(pts.len(), 200);
    assert!(pts.iter().all(|p| p.im.abs() <= 1e-9));
    let min = pts.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
    let max = pts.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
    assert!((min + 2.0).abs() < 1e-6 && (max - 2.0).abs() < 1e-6, "{min} {max}");

    let g = straight_line_gadget(1.0, 0.5, false).unwrap();
    let (lo, hi) = g.declared_segment();
    let pts = g.trace(100);
    let min = pts.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
    let max = pts.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
    assert!((min - lo).abs() < 1e-6 && (max - hi).abs() < 1e-6, "{min} {max} vs {lo} {hi}");
    assert_eq!(g.configurations_at(C::new(1.0, 0.0)).len(), 4);
}

#[test]
fn conjugation_examples() {
    for cabled in [false, true] {
        let r = 0.5;
        let g = conjugation_gadget(r, cabled).unwrap();
        let counts = check(&g, 100, 8);
        assert!(all_eq(&counts, if cabled { 1 } else { 16 }), "{counts:?}");
        let z0 = C::new(0.0, 8.0 * r);
        let (_, conf) = g.first_branch(&[z0]).unwrap().unwrap();
        assert!((conf.get("D").unwrap() + z0).norm() < 1e-12);
        assert!((conf.get("L/E").unwrap() - 6.0 * r).norm() < 1e-12);
        assert!((conf.get("R/E").unwrap() + 6.0 * r).norm() < 1e-12);
        let on = conjugation_on(C::new(0.3, -0.2), 1.0, cabled).unwrap();
        check(&on, 50, 9);
    }
}

#[test]
fn trivial_examples() {
    let k = constant_gadget(C::new(1.0, 1.0)).unwrap();
    assert_eq!(k.evaluate(&[]).unwrap(), vec![C::new(1.0, 1.0)]);
    let p = projection_gadget(3, &[0, 2]).unwrap();
    let z = [C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(3.0, 0.0)];
    assert_eq!(p.evaluate(&z).unwrap(), vec![z[0], z[2]]);
    let e = projection_gadget(3, &[]).unwrap();
    assert!(e.evaluate(&z).unwrap().is_empty());
    assert!(projection_gadget(2, &[2]).is_err());
}

#[test]
fn composition_examples() {
    let a = translation_gadget(C::new(0.5, 0.0), 1.0, true).unwrap().namespaced("a/");
    let b = translation_on(C::new(0.5, 0.0), 1.0, C::new(-0.5, 0.0), true)
        .unwrap()
        .namespaced("b/");
    let id = compose(&a, &b).unwrap();
    assert!(id.strong);
    let counts = check(&id, 100, 10);
    assert!(all_eq(&counts, 1));
    let z = C::new(0.2, 0.3);
    assert!((id.evaluate(&[z]).unwrap()[0] - z).norm() < 1e-12);

    let bad = translation_gadget(C::new(0.5, 0.0), 1.0, true).unwrap().namespaced("c/");
    assert!(compose(&a, &bad).is_ok());
    let far = translation_on(C::new(50.0, 0.0), 1.0, C::new(1.0, 0.0), true)
        .unwrap()
        .namespaced("d/");
    assert!(compose(&a, &far).is_err());
    assert!(compose(&a, &a).is_err());

    let k = constant_gadget(C::new(2.0, 0.0)).unwrap();
    let paired = pair_with_identity(&projection_gadget(1, &[0]).unwrap());
    assert_eq!(paired.evaluate(&[z]).unwrap(), vec![z, z]);
    let twice = pair_with_identity(&pair_with_identity(&k));
    assert_eq!(twice.outputs.len(), 1);
}
