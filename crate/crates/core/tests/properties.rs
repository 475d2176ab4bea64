//! Property tests for the structural invariants: quadrature weights,
//! involutions, phase invariance, and the rotation group law.

use num_complex::Complex64;
use proptest::prelude::*;

use gaborpr_core::*;

proptest! {
    #[test]
    fn grid_weights_sum_to_band_width(b in 1e-3f64..10.0, m in 2usize..200) {
        let grid = FrequencyGrid::new(b, m).unwrap();
        let sum: f64 = grid.weights().iter().sum();
        prop_assert!((sum - 2.0 * b).abs() <= 1e-12 * b);
        prop_assert!(grid.nodes().windows(2).all(|p| p[0] < p[1]));
        for j in 0..m {
            prop_assert_eq!(grid.node(j), -grid.node(m - 1 - j));
        }
    }

    #[test]
    fn reflect_conjugate_is_an_involution(seed in 0u64..500, m in 2usize..40) {
        let f = BandlimitedSignal::random(0.5, m, LebesgueExponent::TWO, seed).unwrap();
        let back = f.reflect_conjugate().reflect_conjugate();
        prop_assert_eq!(f.values(), back.values());
    }

    #[test]
    fn global_phase_never_changes_the_distance(seed in 0u64..200, alpha in -3.1f64..3.1) {
        let f = BandlimitedSignal::random(0.5, 16, LebesgueExponent::TWO, seed).unwrap();
        let g = BandlimitedSignal::new(
            f.grid().clone(),
            f.values().iter().map(|v| v * Complex64::cis(alpha)).collect(),
            f.exponent(),
        ).unwrap();
        let al = global_phase_distance(&f, &g).unwrap();
        prop_assert!(al.distance <= 1e-12, "distance {}", al.distance);
        prop_assert!((al.alpha - alpha).abs() <= 1e-9);
    }

    #[test]
    fn rotations_compose_additively(
        t1 in -3.0f64..3.0,
        t2 in -3.0f64..3.0,
        x in -5.0f64..5.0,
        omega in -5.0f64..5.0,
    ) {
        let p = TfPoint { x, omega };
        let once = rotate_point(t1, rotate_point(t2, p));
        let direct = rotate_point(t1 + t2, p);
        prop_assert!((once.x - direct.x).abs() <= 1e-12 * (1.0 + x.abs() + omega.abs()));
        prop_assert!((once.omega - direct.omega).abs() <= 1e-12 * (1.0 + x.abs() + omega.abs()));
    }

    #[test]
    fn translation_commutes_with_evaluation(
        seed in 0u64..100,
        x in -2.0f64..2.0,
        t in -3.0f64..3.0,
    ) {
        let f = BandlimitedSignal::random(0.5, 16, LebesgueExponent::TWO, seed).unwrap();
        let shifted = f.apply_shift(x, 0.0).unwrap();
        let gap = (shifted.evaluate(t) - f.evaluate(t - x)).norm();
        prop_assert!(gap <= 1e-10, "gap {gap}");
    }

    #[test]
    fn young_exponent_identity_holds(p in 1.0f64..40.0) {
        let pair = young_exponent(LebesgueExponent::new(p).unwrap());
        let p_eff = p.min(2.0);
        let lhs = if pair.q.is_infinite() { 1.0 } else { 1.0 + 1.0 / pair.q.get() };
        prop_assert!((lhs - 2.0 / p_eff).abs() <= 1e-12);
    }

    #[test]
    fn magnitude_matrices_are_phase_invariant(seed in 0u64..50, alpha in -3.0f64..3.0) {
        let f = BandlimitedSignal::random(0.5, 8, LebesgueExponent::TWO, seed).unwrap();
        let g = BandlimitedSignal::new(
            f.grid().clone(),
            f.values().iter().map(|v| v * Complex64::cis(alpha)).collect(),
            f.exponent(),
        ).unwrap();
        let x = [-1.0, 0.0, 0.5];
        let om = [-0.5, 0.25];
        let mf = magnitude_samples(&f, &x, &om).unwrap();
        let mg = magnitude_samples(&g, &x, &om).unwrap();
        prop_assert!(mf.max_gap(&mg).unwrap() <= 1e-13);
    }
}
