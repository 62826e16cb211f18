//! Sampled invariants of the proof machinery that go beyond the acceptance
//! criteria: nonvanishing of the coupled kernel on the critical slice,
//! theorem verification at larger sizes, and the root-finder residual bound
//! at degree 40.

use lyzero_core::*;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// On the slice θ² = cosh κ the coupled two-spin kernel has no zeros with
/// Re x, Re y > 0 (that is what pins the zeros to the imaginary axis), so a
/// randomized sample must stay bounded away from zero relative to the term
/// magnitudes. Φ is 2πi-periodic in each variable and grows with the real
/// parts, so the sampled window is representative.
#[test]
fn kernel_nonvanishing_on_critical_slice() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut min_ratio = f64::INFINITY;
    for _ in 0..10_000 {
        let kappa = 0.05 + 2.95 * rng.gen::<f64>();
        let theta = bound_condition_i(kappa); // θ² = cosh κ
        let kernel = TwoSpinKernel::new(kappa, theta).unwrap();
        let point = |rng: &mut ChaCha8Rng| {
            Complex64::new(
                5.0 * (1.0 - rng.gen::<f64>()),
                std::f64::consts::TAU * (rng.gen::<f64>() - 0.5),
            )
        };
        let (x, y) = (point(&mut rng), point(&mut rng));
        let value = kernel.value(x, y);
        let (_, scale) = kernel.operator_route(x, y).unwrap();
        let ratio = value.norm() / scale;
        assert!(
            ratio > 1e-9,
            "kernel too close to zero at κ={kappa}, x={x}, y={y}: ratio {ratio:e}"
        );
        min_ratio = min_ratio.min(ratio);
    }
    // the sample stays far from the zero set; a collapse of this margin
    // would signal a regression in the kernel algebra
    assert!(min_ratio > 1e-6, "min ratio {min_ratio:e}");
}

#[test]
fn theorem_holds_at_larger_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x517E);
    // dense n = 10: plant a matching and verify through brute force
    for _ in 0..5 {
        let n = 10;
        let beta = 0.6 + 0.8 * rng.gen::<f64>();
        let kappa = (0.3 + 1.7 * rng.gen::<f64>()) / beta;
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let mut entries = vec![0.0; n * n];
        for pair in idx.chunks(2) {
            entries[pair[0] * n + pair[1]] = kappa;
            entries[pair[1] * n + pair[0]] = kappa;
        }
        for p in 0..n / 2 - 1 {
            let v = kappa * (0.1 + 0.3 * rng.gen::<f64>());
            entries[idx[2 * p] * n + idx[2 * p + 2]] = v;
            entries[idx[2 * p + 2] * n + idx[2 * p]] = v;
        }
        let k = CouplingMatrix::new(n, entries).unwrap();
        let bound = bound_condition_i(beta * kappa);
        let theta = 1.0 + (bound - 1.0) * (1.0 - rng.gen::<f64>());
        let m = ModelInstance::new(SpinMeasure::blume_capel(theta).unwrap(), k, beta).unwrap();
        let v = verify_lee_yang(&m).unwrap();
        assert_eq!(v.predicted, Prediction::Holds);
        assert!(v.observed.holds, "dense n=10 θ={theta} βϰ={}", beta * kappa);
    }

    // hierarchical 16 sites: the block recursion supplies the polynomial
    for _ in 0..3 {
        let beta = 0.7 + 0.6 * rng.gen::<f64>();
        let kappa1 = (0.4 + 1.6 * rng.gen::<f64>()) / beta;
        let mut levels = vec![kappa1];
        for _ in 1..4 {
            let next = levels.last().unwrap() * (0.4 + 0.3 * rng.gen::<f64>());
            levels.push(next);
        }
        let spec = HierarchySpec::new(levels).unwrap();
        let bi = bound_condition_i(beta * kappa1);
        let bii = bound_condition_ii(beta * kappa1);
        let theta = bi + (bii - bi) * (1.0 - rng.gen::<f64>());
        let m = ModelInstance::new(
            SpinMeasure::blume_capel(theta).unwrap(),
            CouplingMatrix::hierarchical(&spec),
            beta,
        )
        .unwrap();
        let p = hierarchical_partition(&m, &spec).unwrap();
        assert_eq!(p.n_max(), 16);
        let v = verify_with_polynomial(&m, &p, &RootFindOptions::default()).unwrap();
        assert_eq!(v.bounds.applicable, TheoremBranch::ConditionIi);
        assert_eq!(v.predicted, Prediction::Holds);
        assert!(v.observed.holds, "hierarchy θ={theta} βϰ={}", beta * kappa1);
    }
}

#[test]
fn hierarchy_thirty_two_sites_on_circle() {
    // degree-64 polynomial through the block recursion. 32 sites exceed the
    // generic matching-DP cap, but for a dyadic hierarchy with decreasing
    // levels the structural facts are known by construction: the level-1
    // pairing witnesses both conditions with ϰ = κ^(1).
    let spec = HierarchySpec::new(vec![1.0, 0.5, 0.25, 0.1, 0.05]).unwrap();
    let theta = 1.3; // between bound_i(1) ≈ 1.2422 and bound_ii(1) ≈ 1.3635
    assert!(bound_condition_i(1.0) < theta && theta < bound_condition_ii(1.0));
    let m = ModelInstance::new(
        SpinMeasure::blume_capel(theta).unwrap(),
        CouplingMatrix::hierarchical(&spec),
        1.0,
    )
    .unwrap();
    // the generic structure check refuses this size, as documented
    assert!(matches!(
        bottleneck_matching(&m.coupling),
        Err(Error::MatchingTooLarge { .. })
    ));
    let p = hierarchical_partition(&m, &spec).unwrap();
    assert_eq!(p.n_max(), 32);
    let zs = find_zeros(&p).unwrap();
    let v = classify(&zs, &p, DEFAULT_CIRCLE_TOL);
    assert!(v.holds, "deviation {:e}", v.max_radial_deviation);
    assert_eq!(v.gammas.len(), 32);
}

#[test]
fn residual_bound_at_degree_forty() {
    // 20-site chain with θ inside the matching bound √cosh(1) ≈ 1.2422:
    // a degree-40 polynomial with zeros on the circle
    let m = ModelInstance::new(
        SpinMeasure::blume_capel(1.2).unwrap(),
        CouplingMatrix::chain(20, 1.0, false).unwrap(),
        1.0,
    )
    .unwrap();
    let p = chain_transfer_partition(&m, false).unwrap();
    assert_eq!(p.n_max(), 20);
    let zs = find_zeros(&p).unwrap();
    assert_eq!(zs.roots.len(), 40);
    let v = classify(&zs, &p, DEFAULT_CIRCLE_TOL);
    assert!(v.holds, "deviation {:e}", v.max_radial_deviation);

    // Newton residual |Q/Q'| <= 1e-10 on every reported (simple) root
    for &z in &zs.roots {
        let r = newton_residual(&p, z);
        assert!(r <= 1e-10, "residual {r:e} at {z}");
    }
}
