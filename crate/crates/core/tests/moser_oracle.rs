//! Cross-checks the embedding engine against routes it does not take: an
//! area map built by raw quadrature of the form's coefficients, the exact
//! scaling law of the contraction flow, and direct pullback measurements.

mod common;

use common::radial_area_oracle;
use gwidth::{construct_embedding, euler_flow, verify_pullback, ChartForm, IntegrationGrid};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform points in a centered box, kept while the predicate accepts them.
fn sample_points(
    rng: &mut ChaCha8Rng,
    dim: usize,
    half_width: f64,
    count: usize,
    keep: impl Fn(&DVector<f64>) -> bool,
) -> Vec<DVector<f64>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = DVector::from_fn(dim, |_, _| rng.gen_range(-half_width..half_width));
        if keep(&x) {
            out.push(x);
        }
    }
    out
}

#[test]
fn engine_agrees_with_the_quadrature_area_map() {
    // The unit-area sphere chart, deep into the flow, including points whose
    // capacity is close to the cap of one.
    let cf = ChartForm::cp1();
    let emb = construct_embedding(&cf, 3.0, &IntegrationGrid::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut pts = sample_points(&mut rng, 2, 2.4, 5, |x| cf.phi(x.as_slice()) < 0.9);
    pts.push(DVector::from_column_slice(&[2.2, 1.1]));
    for x in &pts {
        let got = emb.evaluate(x).unwrap();
        let want = radial_area_oracle(&cf, x);
        let err = (&got - &want).amax();
        assert!(err < 1e-4, "cp1 at {x:?}: error {err:.3e}");
    }

    // A compactly supported bump goes through the identity normalization and
    // the honest contraction, and must land on the same area map.
    let cf = ChartForm::bump(0.3, 0.5, 1.5).unwrap();
    let emb = construct_embedding(&cf, 2.0, &IntegrationGrid::default()).unwrap();
    let pts = sample_points(&mut rng, 2, 1.4, 6, |x| x.norm_squared() > 0.05);
    for x in &pts {
        let got = emb.evaluate(x).unwrap();
        let want = radial_area_oracle(&cf, x);
        let err = (&got - &want).amax();
        assert!(err < 1e-4, "bump at {x:?}: error {err:.3e}");
    }
}

#[test]
fn contraction_flow_scales_the_moment_map_exponentially() {
    let grid = IntegrationGrid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let forms = [
        ChartForm::cp1(),
        ChartForm::bump(0.3, 0.5, 1.5).unwrap(),
        ChartForm::annulus(0.02, 0.5, 1.5).unwrap(),
    ];
    let mut checked = 0;
    while checked < 50 {
        for cf in &forms {
            let t = rng.gen_range(0.0..3.0);
            let x = DVector::from_fn(cf.dim(), |_, _| rng.gen_range(-1.1..1.1));
            let y = euler_flow(cf, &x, t, &grid).unwrap();
            let expect = (-t).exp() * cf.phi(x.as_slice());
            let got = cf.phi(y.as_slice());
            assert!(
                (got - expect).abs() < 1e-6 * (1.0 + expect),
                "{} at t = {t:.3}: {got} vs {expect}",
                cf.name()
            );
            checked += 1;
        }
    }
}

#[test]
fn annulus_pullback_residual_is_small() {
    // The one form whose Moser corrector does real work: rotation invariant
    // but not radial. Sample across the support of the perturbation.
    let cf = ChartForm::annulus(0.02, 0.5, 1.5).unwrap();
    let t = 1.5;
    let emb = construct_embedding(&cf, t, &IntegrationGrid::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let samples = sample_points(&mut rng, 4, 0.75, 8, |_| true);
    let residual = verify_pullback(|x| emb.evaluate(x), &cf, &samples, 1e-4).unwrap();
    assert!(residual < 1e-4, "annulus pullback residual {residual:.3e}");
}

#[test]
fn embedding_commutes_with_the_circle_action() {
    let cf = ChartForm::cp1();
    let emb = construct_embedding(&cf, 2.0, &IntegrationGrid::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for x in sample_points(&mut rng, 2, 1.5, 4, |_| true) {
        let fx = emb.evaluate(&x).unwrap();
        for k in 1..=3 {
            let theta = std::f64::consts::FRAC_PI_4 * k as f64;
            let (sin, cos) = theta.sin_cos();
            let rx = DVector::from_column_slice(&[
                cos * x[0] - sin * x[1],
                sin * x[0] + cos * x[1],
            ]);
            let frx = emb.evaluate(&rx).unwrap();
            let rfx = DVector::from_column_slice(&[
                cos * fx[0] - sin * fx[1],
                sin * fx[0] + cos * fx[1],
            ]);
            let defect = (&frx - &rfx).amax();
            assert!(defect < 1e-6, "at {x:?}, angle {k}pi/4: defect {defect:.3e}");
        }
    }
}

#[test]
fn capacity_is_realized_near_the_cap() {
    // Deep flow time: points of capacity 0.9, 0.99, 0.999 must land on the
    // standard ball of the same capacity, witnessing that the embedding
    // exhausts the cap of one.
    let cf = ChartForm::cp1();
    let emb = construct_embedding(&cf, 6.0, &IntegrationGrid::default()).unwrap();
    for target in [0.9, 0.99, 0.999] {
        // Phi = pi s / (1 + pi s) = target at s = target / (pi (1 - target)).
        let s = target / (std::f64::consts::PI * (1.0 - target));
        let x = DVector::from_column_slice(&[s.sqrt(), 0.0]);
        let out = emb.evaluate(&x).unwrap();
        let capacity = std::f64::consts::PI * out.norm_squared();
        assert!(
            (capacity - target).abs() < 1e-6 * (1.0 + target),
            "capacity {capacity} vs {target}"
        );
        let want = radial_area_oracle(&cf, &x);
        assert!((&out - &want).amax() < 1e-4);
    }
}
