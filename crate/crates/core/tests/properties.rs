use approx::assert_relative_eq;
use proptest::prelude::*;

use maxvar::averages::{ball_average, sphere_average};
use maxvar::best_ball::{objective, search};
use maxvar::geometry::{Contact, ContactKind};
use maxvar::identities::check_divergence;
use maxvar::maximal::{GridSpec, Spacing};
use maxvar::{load_profile, AmbientParams, AxisBall, QuadratureConfig, RadialProfile, Region, SearchConfig};

/// Knot lists with increasing radii and values in `[-1, 1]`, at least one
/// of them clearly non-zero.
fn knot_list() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.1f64..1.0, -1.0f64..1.0), 2..6).prop_map(|steps| {
        let mut t = 0.0;
        let mut knots: Vec<(f64, f64)> = steps
            .into_iter()
            .map(|(dt, v)| {
                let k = (t, v);
                t += dt;
                k
            })
            .collect();
        knots.push((t, 0.0));
        if knots.iter().all(|k| k.1.abs() < 0.05) {
            knots[0].1 = 0.8;
        }
        knots
    })
}

fn profile() -> impl Strategy<Value = RadialProfile> {
    knot_list().prop_map(|k| load_profile(&k).unwrap())
}

fn ball() -> impl Strategy<Value = AxisBall> {
    (0.0f64..4.0, 0.02f64..3.0).prop_map(|(d, r)| AxisBall { d, r })
}

fn q() -> QuadratureConfig {
    QuadratureConfig::identity()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divergence_identity_holds(p in profile(), b in ball(), n in 1usize..=4) {
        let params = AmbientParams::new(n, 0.5).unwrap();
        let report = check_divergence(&p, &b, &params, &q()).unwrap();
        prop_assert!(report.passed, "{report:?}");
    }

    #[test]
    fn averages_lie_between_extremes(p in profile(), b in ball(), n in 1usize..=4) {
        let params = AmbientParams::new(n, 0.5).unwrap();
        let slack = 1e-12 * p.max_value();
        for avg in [ball_average(&p, &b, &params, &q()).unwrap(), sphere_average(&p, &b, &params, &q()).unwrap()] {
            prop_assert!(avg >= -slack && avg <= p.max_value() + slack);
        }
    }

    #[test]
    fn averages_are_homogeneous(p in profile(), b in ball(), a in 0.1f64..10.0, n in 1usize..=3) {
        let params = AmbientParams::new(n, 0.5).unwrap();
        let base = ball_average(&p, &b, &params, &q()).unwrap();
        let scaled = ball_average(&p.scaled(a).unwrap(), &b, &params, &q()).unwrap();
        prop_assert!((scaled - a * base).abs() <= 1e-9 * a * p.max_value());
    }

    #[test]
    fn averages_commute_with_dilation(p in profile(), b in ball(), lambda in 0.25f64..4.0, n in 1usize..=3) {
        let params = AmbientParams::new(n, 0.5).unwrap();
        let base = ball_average(&p, &b, &params, &q()).unwrap();
        let small = AxisBall { d: b.d / lambda, r: b.r / lambda };
        let dilated = ball_average(&p.dilated(lambda).unwrap(), &small, &params, &q()).unwrap();
        prop_assert!((dilated - base).abs() <= 1e-9 * p.max_value());
    }

    #[test]
    fn profiles_store_absolute_values(k in knot_list()) {
        let p = load_profile(&k).unwrap();
        let flipped: Vec<(f64, f64)> = k.iter().map(|&(t, v)| (t, -v)).collect();
        let q = load_profile(&flipped).unwrap();
        prop_assert_eq!(p.knot_pairs(), q.knot_pairs());
        for &(t, v) in &k {
            prop_assert!(p.value(t) >= 0.0);
            // left limits at jumps aside, knots keep their magnitude
            if k.windows(2).all(|w| w[0].0 != w[1].0) {
                prop_assert!((p.value(t) - v.abs()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn regions_partition_contacts(c in 0.0f64..3.0, kind in 0usize..3) {
        let kind = [ContactKind::Interior, ContactKind::BoundaryInner, ContactKind::BoundaryOuter][kind];
        let region = Region::of(&Contact { kind, c });
        let expected = match kind {
            ContactKind::Interior => Region::ZeroDerivative,
            _ if c > 1.25 => Region::E1,
            _ if c < 0.75 => Region::E2,
            _ => Region::E3,
        };
        prop_assert_eq!(region, expected);
    }

    #[test]
    fn grid_specs_round_trip(lo in 1e-3f64..1.0, span in 1.01f64..100.0, count in 2usize..500, log in any::<bool>()) {
        let spacing = if log { Spacing::Log } else { Spacing::Lin };
        let g = GridSpec::new(lo, lo * span, count, spacing).unwrap();
        let back: GridSpec = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
        let pts = g.points();
        prop_assert_eq!(pts.len(), count);
        prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let fine = g.refined().points();
        prop_assert!(pts.iter().enumerate().all(|(i, &x)| fine[2 * i] == x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn best_ball_dominates_feasible_balls(p in profile(), s in 0.0f64..4.0, b in ball(), n in 1usize..=3, beta in 0.1f64..0.9) {
        let params = AmbientParams::new(n, beta).unwrap();
        let res = search(&p, s, &params, &SearchConfig::default(), &q()).unwrap();
        prop_assert!((res.ball.d - s).abs() <= res.ball.r * (1.0 + 1e-9));
        // move the random ball so that it contains s
        let r = b.r.max((b.d - s).abs());
        let other = objective(&p, s, &AxisBall { d: b.d, r }, &params, &q()).unwrap();
        prop_assert!(res.value >= other * (1.0 - 1e-9), "{} < {}", res.value, other);
    }

    #[test]
    fn maximal_function_scales_under_dilation(p in profile(), s in 0.05f64..3.0, lambda in 0.5f64..2.0) {
        let params = AmbientParams::new(2, 0.5).unwrap();
        let cfg = SearchConfig::default();
        let base = search(&p, s, &params, &cfg, &q()).unwrap();
        let dilated = search(&p.dilated(lambda).unwrap(), s / lambda, &params, &cfg, &q()).unwrap();
        assert_relative_eq!(dilated.value, lambda.powf(-params.beta) * base.value, max_relative = 1e-8);
    }
}
