mod common;

use proptest::prelude::*;
use snob::analytic::{g_snob, psi_ebm, stretch, thinlayer_coefficients, unstretch};
use snob::random::{bridge_hit_time, inverse_gaussian, localtime_position, RandomStream};
use snob::sim::{snob_path_with_reports, snob_step, StepConfig};
use snob::{GPoint, Side, SnobParams, TimeGrid};

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Plus), Just(Side::Minus)]
}

fn gpoint() -> impl Strategy<Value = GPoint> {
    (side(), 0.0..5.0f64).prop_map(|(s, m)| GPoint::new(s, m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn embed_and_flip(p in gpoint()) {
        prop_assert_eq!(p.flip().flip(), p);
        prop_assert_eq!(p.flip().magnitude(), p.magnitude());
        prop_assert_eq!(p.embed().abs(), p.magnitude());
        if p.magnitude() > 0.0 {
            prop_assert_eq!(GPoint::from_real(p.embed(), Side::Plus).unwrap(), p);
            prop_assert_eq!(p.flip().embed(), -p.embed());
        }
    }

    #[test]
    fn kernel_symmetric_positive(x in gpoint(), y in gpoint(), alpha in 0.05..5.0f64, kappa in 0.01..20.0f64) {
        let p = SnobParams::new(kappa).unwrap();
        let a = g_snob(x, y, alpha, &p).unwrap();
        let b = g_snob(y, x, alpha, &p).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        let oracle = common::kernel(x, y, alpha, kappa);
        prop_assert!((a - oracle).abs() <= 1e-12 * oracle.max(1.0));
    }

    #[test]
    fn psi_in_unit_interval_and_decreasing(x in 0.0..10.0f64, d in 1e-3..1.0f64, alpha in 0.05..5.0f64, kappa in 0.01..20.0f64) {
        let p = SnobParams::new(kappa).unwrap();
        let a = psi_ebm(x, alpha, &p).unwrap();
        let b = psi_ebm(x + d, alpha, &p).unwrap();
        prop_assert!(a > 0.0 && a < 1.0);
        prop_assert!(b < a);
    }

    #[test]
    fn stretch_round_trip(x in -5.0..5.0f64, eps in 1e-4..0.5f64, kappa in 0.1..10.0f64) {
        let p = SnobParams::new(kappa).unwrap();
        let y = stretch(x, &p, eps);
        prop_assert!((unstretch(y, &p, eps) - x).abs() <= 1e-12 * x.abs().max(1.0));
        prop_assert_eq!(y.signum(), x.signum());
    }

    #[test]
    fn free_part_of_thin_layer_kernel_ignores_eps(x in 0.6..3.0f64, eps in 1e-3..0.5f64, alpha in 0.1..3.0f64, kappa in 0.2..5.0f64) {
        let p = SnobParams::new(kappa).unwrap();
        let mu = (2.0 * alpha).sqrt();
        let c = thinlayer_coefficients(x, alpha, &p, eps).unwrap();
        let expected = (-mu * x).exp() / mu;
        prop_assert!((c.b - expected).abs() <= 1e-9 * expected);
    }

    #[test]
    fn trajectory_invariants(seed in any::<u64>(), x0 in gpoint(), kappa in 0.1..10.0f64, dt in 1e-3..0.5f64) {
        let p = SnobParams::new(kappa).unwrap();
        let grid = TimeGrid::new(dt, 40).unwrap();
        let cfg = StepConfig::new(dt, p).unwrap();
        let mut s = RandomStream::new(seed, 0);
        let (traj, reports) = snob_path_with_reports(&mut s, x0, &grid, &cfg).unwrap();
        let l = traj.cumulative_local_time();
        prop_assert_eq!(l[0], 0.0);
        for w in l.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        let pts = traj.points();
        for (k, r) in reports.iter().enumerate() {
            prop_assert!(pts[k + 1].magnitude() >= 0.0);
            if pts[k + 1].side() != pts[k].side() {
                prop_assert!(r.crossed);
            }
            if !r.crossed {
                prop_assert_eq!(r.local_time, 0.0);
            }
            if let Some(z) = r.hit_time {
                prop_assert!((0.0..dt).contains(&z));
            }
        }
    }

    #[test]
    fn step_from_barrier_touches_at_time_zero(seed in any::<u64>(), s0 in side(), dt in 1e-3..2.0f64) {
        let cfg = StepConfig::new(dt, SnobParams::new(1.0).unwrap()).unwrap();
        let r = snob_step(&mut RandomStream::new(seed, 1), GPoint::origin(s0), &cfg);
        prop_assert!(r.crossed);
        prop_assert_eq!(r.hit_time, Some(0.0));
        prop_assert!(r.local_time > 0.0);
    }

    #[test]
    fn bridge_hit_inside_step(seed in any::<u64>(), x in -3.0..3.0f64, y in -3.0..3.0f64, dt in 1e-3..2.0f64) {
        prop_assume!(x.abs() > 1e-6);
        let z = bridge_hit_time(&mut RandomStream::new(seed, 2), x, y, dt).unwrap();
        prop_assert!(z > 0.0 && z < dt);
    }

    #[test]
    fn local_time_draw_consistent(seed in any::<u64>(), r in 1e-4..10.0f64) {
        let d = localtime_position(&mut RandomStream::new(seed, 3), r).unwrap();
        prop_assert!(d.local_time >= 0.0 && d.magnitude >= 0.0);
        prop_assert!((d.magnitude - (d.local_time - d.h)).abs() <= 1e-12 * (1.0 + d.h.abs()));
    }

    #[test]
    fn inverse_gaussian_positive(seed in any::<u64>(), mu in 1e-3..1e3f64, lambda in 1e-3..1e3f64) {
        let v = inverse_gaussian(&mut RandomStream::new(seed, 4), mu, lambda).unwrap();
        prop_assert!(v > 0.0 && v.is_finite());
    }
}
