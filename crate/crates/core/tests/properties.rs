mod common;

use common::{five_anchor_linkage, jitter, name, part, random_pair};
use num_complex::Complex64 as C;
use polylinkage::linkage::{three_anchor_bases, Configuration, EdgeKind, Linkage};
use polylinkage::solver::{newton_solve, random_seed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// The union's residual is the larger of the parts' residuals at every placement.
    #[test]
    fn union_residual_is_max_of_parts(seed in any::<u64>(), xs in prop::collection::vec(-3.0f64..3.0, 12)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_pair(&mut rng);
        let u = p.left.union(&p.right).unwrap();
        let phi: Configuration = (0..6).map(|i| (name(i), C::new(xs[2 * i], xs[2 * i + 1]))).collect();
        let whole = u.residual(&phi).unwrap();
        let parts = p.left.residual(&part(&phi, &p.left)).unwrap().max(p.right.residual(&part(&phi, &p.right)).unwrap());
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn rescale_and_translate_equivariance(
        seed in any::<u64>(),
        n in 0.05f64..20.0,
        zr in -10.0f64..10.0,
        zi in -10.0f64..10.0,
        xs in prop::collection::vec(-3.0f64..3.0, 12),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_pair(&mut rng);
        let l = p.left.union(&p.right).unwrap();
        let z = C::new(zr, zi);
        prop_assert!(l.residual(&p.placement).unwrap() <= 1e-12);
        let scaled = l.rescale(n).unwrap();
        let moved = l.translate(z);
        prop_assert!(scaled.residual(&p.placement.affine(n, C::new(0.0, 0.0))).unwrap() <= 1e-12 * n.max(1.0));
        prop_assert!(moved.residual(&p.placement.affine(1.0, z)).unwrap() <= 1e-12 * (1.0 + z.norm()));
        // Off the configuration space, residuals scale and stay put.
        let phi: Configuration = (0..6).map(|i| (name(i), C::new(xs[2 * i], xs[2 * i + 1]))).collect();
        let r = l.residual(&phi).unwrap();
        let rs = scaled.residual(&phi.affine(n, C::new(0.0, 0.0))).unwrap();
        prop_assert!((rs - n * r).abs() <= 1e-12 * n * (1.0 + r));
        let rt = moved.residual(&phi.affine(1.0, z)).unwrap();
        prop_assert!((rt - r).abs() <= 1e-12 * (1.0 + r + z.norm()));
    }

    #[test]
    fn tether_bounds_distance(seed in any::<u64>(), b in 0.1f64..5.0, ar in -3.0f64..3.0, ai in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_pair(&mut rng).left;
        let Some(v) = l.vertex_ids().find(|v| !l.is_fixed(*v)).cloned() else { return Ok(()) };
        let anchor = C::new(ar, ai);
        let (t, u) = l.tether(&v, anchor, b).unwrap();
        prop_assert_eq!(t.anchor(&u), Some(anchor));
        prop_assert_eq!(t.edge(&u, &v).map(|e| e.kind), Some(EdgeKind::Cable));
        let phi = random_seed(&l, &mut rng);
        let mut full = phi.clone();
        full.insert(u.clone(), anchor);
        let base = l.residual(&phi).unwrap();
        let slack = ((phi.get(&v).unwrap() - anchor).norm() - b).max(0.0);
        prop_assert_eq!(t.residual(&full).unwrap(), base.max(slack));
    }
}

/// Fiber-product law on 100 random pairs: Newton solutions of the union restrict
/// to configurations of both parts, and part configurations that agree on the
/// overlap glue to a configuration of the union.
#[test]
fn union_fiber_product_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut restricted, mut glued) = (0, 0);
    for _ in 0..100 {
        let p = random_pair(&mut rng);
        let u = p.left.union(&p.right).unwrap();
        assert!(u.residual(&p.placement).unwrap() <= 1e-12);

        if let Ok(psi) = newton_solve(&u, &jitter(&p.placement, &u, 0.2, &mut rng), TOL, 200) {
            assert!(p.left.residual(&part(&psi, &p.left)).unwrap() <= TOL);
            assert!(p.right.residual(&part(&psi, &p.right)).unwrap() <= TOL);
            restricted += 1;
        }

        let Ok(psi1) = newton_solve(&p.left, &jitter(&part(&p.placement, &p.left), &p.left, 0.2, &mut rng), TOL, 200) else {
            continue;
        };
        let pins: Vec<_> = [name(2), name(3)]
            .into_iter()
            .filter(|v| !p.right.is_fixed(v))
            .map(|v| {
                let q = psi1.get(&v).unwrap();
                (v, q)
            })
            .collect();
        let pinned = p.right.fix_vertices(&pins).unwrap();
        let mut seed2 = jitter(&part(&p.placement, &p.right), &pinned, 0.2, &mut rng);
        for (v, q) in &pins {
            seed2.insert(v.clone(), *q);
        }
        let Ok(psi2) = newton_solve(&pinned, &seed2, TOL, 200) else { continue };
        let mut glue = psi2.clone();
        for (v, q) in psi1.iter() {
            glue.insert(v.clone(), *q);
        }
        assert!(u.residual(&glue).unwrap() <= 2.0 * TOL);
        glued += 1;
    }
    eprintln!("restricted {restricted}, glued {glued} of 100");
    assert!(restricted >= 50 && glued >= 50);
}

#[test]
fn union_rejects_conflicts() {
    let mut a = Linkage::new();
    a.add_vertex("x");
    a.add_vertex("y");
    a.rigid("x", "y", 1.0).unwrap();
    let b = a.rescale(2.0).unwrap();
    assert!(a.union(&b).is_err());
    let mut c = Linkage::new();
    c.add_fixed("x", C::new(0.0, 0.0)).unwrap();
    let mut d = Linkage::new();
    d.add_fixed("x", C::new(1.0, 0.0)).unwrap();
    assert!(c.union(&d).is_err());
    assert_eq!(a.union(&a).unwrap(), a);
}

#[test]
fn reduce_to_three_fixed_round_trips() {
    let l = five_anchor_linkage();
    let r = l.reduce_to_three_fixed().unwrap();
    assert_eq!(r.anchors().count(), 3);
    let bases = three_anchor_bases();
    for (id, p) in &bases {
        assert_eq!(r.anchor(id), Some(*p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut found = Vec::new();
    for _ in 0..400 {
        if let Ok(c) = newton_solve(&l, &random_seed(&l, &mut rng), TOL, 200) {
            found.push(c);
        }
    }
    assert!(found.len() >= 20, "only {} configurations sampled", found.len());
    for c in &found {
        // Forward: extend by the base anchors; the p0 anchor is identified with $v0.
        let mut ext = Configuration::new();
        for (v, p) in c.iter() {
            if r.contains(v) {
                ext.insert(v.clone(), *p);
            }
        }
        for (id, p) in &bases {
            ext.insert(id.clone(), *p);
        }
        assert!(r.residual(&ext).unwrap() <= TOL);
    }
    // Backward: configurations of the reduced linkage put released anchors back
    // and restrict to configurations of the original.
    let mut back = 0;
    for c in found.iter().take(50) {
        let mut seed = jitter(&c.restrict(r.vertex_ids().filter(|v| c.contains(*v))), &r, 0.05, &mut rng);
        for (id, p) in &bases {
            seed.insert(id.clone(), *p);
        }
        let Ok(s) = newton_solve(&r, &seed, TOL, 200) else { continue };
        for (id, p) in l.anchors() {
            if let Some(q) = s.get(id) {
                assert!((q - p).norm() <= 1e-6, "{id} moved to {q}");
            }
        }
        let mut orig: Configuration = s.restrict(l.vertex_ids().filter(|v| s.contains(*v)));
        orig.insert("p0", C::new(0.0, 0.0));
        assert!(l.residual(&orig).unwrap() <= 1e-6);
        back += 1;
    }
    assert!(back >= 40, "{back}");
}
