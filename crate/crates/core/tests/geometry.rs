use archdam::geometry::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Neville's algorithm: an interpolant built independently of the basis code.
fn neville(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = ((x - xs[i + k]) * p[i] + (xs[i] - x) * p[i + 1]) / (xs[i] - xs[i + k]);
        }
    }
    p[0]
}

fn reference() -> DamGeometry {
    DamGeometry::new(
        DesignVector::morrow_point_reference(),
        ControlLevels::uniform(MORROW_POINT_HEIGHT, 5).unwrap(),
        CanyonProfile::morrow_point(),
    )
    .unwrap()
}

/// Monte Carlo volume straight from the design variables.
fn monte_carlo_volume(d: &DesignVector, canyon: &CanyonProfile, samples: usize, seed: u64) -> (f64, f64) {
    let h = canyon.height();
    let depths: Vec<f64> = (0..LEVELS).map(|i| h * i as f64 / (LEVELS - 1) as f64).collect();
    let w = canyon.crest_half_width().max(canyon.base_half_width());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..samples {
        let z = rng.gen::<f64>() * h;
        let x = (2.0 * rng.gen::<f64>() - 1.0) * w;
        let hw = canyon.crest_half_width() + (canyon.base_half_width() - canyon.crest_half_width()) * z / h;
        let v = if x.abs() <= hw {
            let t = neville(&depths, &d.tc, z);
            let ru = neville(&depths, &d.ru, z);
            let rd = neville(&depths, &d.rd, z);
            (t + 0.5 * x * x * (1.0 / rd - 1.0 / ru)).abs()
        } else {
            0.0
        };
        sum += v;
        sq += v * v;
    }
    let area = 2.0 * w * h;
    let n = samples as f64;
    let mean = sum / n;
    let se = ((sq / n - mean * mean) / n).sqrt();
    (area * mean, area * se)
}

#[test]
fn volume_matches_monte_carlo() {
    let g = reference();
    let q = g.volume(32).unwrap();
    let (mc, se) = monte_carlo_volume(g.design(), g.canyon(), 1_000_000, 11);
    assert!(((q - mc) / mc).abs() < 0.005, "quadrature {q}, monte carlo {mc} ± {se}");
}

#[test]
fn volume_converges_with_order() {
    let g = reference();
    let v32 = g.volume(32).unwrap();
    let v64 = g.volume(64).unwrap();
    assert!(((v64 - v32) / v32).abs() < 1e-3);
}

#[test]
fn slab_volume_is_closed_form() {
    let d = DesignVector {
        gamma: 0.0,
        beta: 0.5,
        tc: [5.0; LEVELS],
        ru: [80.0; LEVELS],
        rd: [80.0; LEVELS],
    };
    let h = 100.0;
    let g = DamGeometry::new(d, ControlLevels::uniform(h, 5).unwrap(), CanyonProfile::new(h, 60.0, 60.0).unwrap()).unwrap();
    assert!((g.volume(8).unwrap() - 2.0 * 60.0 * h * 5.0).abs() < 1e-6);
}

#[test]
fn crown_profile_vertex() {
    // g(z) = gamma z^2 / (2 beta h) - gamma z is stationary at z = beta h
    let (gamma, beta, h) = (0.2, 0.6, 100.0);
    let z0 = beta * h;
    assert!(crown_profile_slope(z0, gamma, beta, h).unwrap().abs() < 1e-15);
    assert!((crown_profile(z0, gamma, beta, h).unwrap() + gamma * z0 / 2.0).abs() < 1e-12);
    assert_eq!(crown_profile(0.0, gamma, beta, h).unwrap(), 0.0);
}

#[test]
fn reference_design_satisfies_constraints() {
    let g = reference();
    for c in g.constraints(&ConstraintLimits::default()) {
        assert!(c.value <= 0.0, "{c:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn basis_is_cardinal_and_sums_to_one(z in 0.0..MORROW_POINT_HEIGHT) {
        let lv = ControlLevels::uniform(MORROW_POINT_HEIGHT, 5).unwrap();
        let sum: f64 = (0..LEVELS).map(|i| lv.basis(z, i)).sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
        for i in 0..LEVELS {
            for k in 0..LEVELS {
                let expect = if i == k { 1.0 } else { 0.0 };
                prop_assert!((lv.basis(lv.depths()[k], i) - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn quintics_are_reproduced(
        coef in prop::array::uniform6(-2.0f64..2.0),
        z in 0.0..MORROW_POINT_HEIGHT,
    ) {
        let h = MORROW_POINT_HEIGHT;
        let lv = ControlLevels::uniform(h, 5).unwrap();
        let poly = |t: f64| coef.iter().rev().fold(0.0, |acc, c| acc * (t / h) + c);
        let values: Vec<f64> = lv.depths().iter().map(|&d| poly(d)).collect();
        prop_assert!((lv.interpolate(z, &values) - poly(z)).abs() < 1e-9);
        prop_assert!((lv.interpolate(z, &values) - neville(lv.depths(), &values, z)).abs() < 1e-9);
    }

    #[test]
    fn thicker_dams_hold_more_concrete(extra in 0.1f64..3.0) {
        let g = reference();
        let mut d = *g.design();
        for t in d.tc.iter_mut() {
            *t += extra;
        }
        let thicker = DamGeometry::new(d, g.levels().clone(), *g.canyon()).unwrap();
        prop_assert!(thicker.volume(16).unwrap() > g.volume(16).unwrap());
    }

    #[test]
    fn faces_are_symmetric(x in 0.0f64..100.0, z in 0.0..MORROW_POINT_HEIGHT) {
        let g = reference();
        prop_assert_eq!(g.faces(x, z).unwrap(), g.faces(-x, z).unwrap());
    }
}
