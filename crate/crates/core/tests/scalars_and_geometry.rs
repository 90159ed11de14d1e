use coordination::geometry::{compile_scenario, GeometricScenario, PathGeometry, VehicleSpec};
use coordination::oracle::{random_scenario, RandomScenarioConfig};
use coordination::planner::{plan_exhaustive, plan_fixed_priority, plan_heuristic, validate};
use coordination::priority::{complete_orientations, extract_priority_graph, is_feasible};
use coordination::scalar::ratio;
use coordination::{CollisionRect, CoordinationScenario, ExactScenario, Interval, Scalar, Scenario};
use num_rational::Rational64;
use proptest::prelude::*;

/// Same instance with endpoints converted through thousandths.
fn convert<T: Scalar>(scn: &Scenario, to: impl Fn(i64) -> T) -> CoordinationScenario<T> {
    let milli = |x: f64| to((x * 1000.0).round() as i64);
    let rects = scn
        .obstacles()
        .iter()
        .map(|r| {
            let (a, b) = (r.first(), r.second());
            CollisionRect::new(r.pair(), Interval::new(milli(a.lo), milli(a.hi)), Interval::new(milli(b.lo), milli(b.hi)))
                .unwrap()
        })
        .collect();
    let x: Vec<T> = scn.x_init().iter().map(|&s| milli(s)).collect();
    CoordinationScenario::new(scn.n(), rects, x).unwrap()
}

fn exact(scn: &Scenario) -> ExactScenario {
    convert(scn, |k| ratio(k, 1000))
}

#[test]
fn exact_and_float_planners_agree() {
    for seed in 0..20 {
        let n = 2 + (seed % 2) as usize;
        let float = random_scenario(n, seed, &RandomScenarioConfig::default()).unwrap();
        let rational = exact(&float);
        let single = convert(&float, |k| k as f32 / 1000.0);

        let best = plan_exhaustive(&rational).unwrap();
        assert!(validate(&best.trajectory, &rational, Some(&best.graph)).passed());
        assert_eq!(extract_priority_graph(&best.trajectory, &rational).unwrap(), best.graph);
        let as_f64 = *best.cost.numer() as f64 / *best.cost.denom() as f64;
        assert!((plan_exhaustive(&float).unwrap().cost - as_f64).abs() < 1e-9, "seed {seed}");
        assert!((plan_exhaustive(&single).unwrap().cost as f64 - as_f64).abs() < 1e-4, "seed {seed}");

        let h = plan_heuristic(&rational).unwrap();
        assert!(h.cost >= best.cost);
        for g in complete_orientations(&rational).unwrap() {
            assert_eq!(
                is_feasible(&g, &rational).unwrap().is_feasible(),
                is_feasible(&g, &float).unwrap().is_feasible(),
                "seed {seed}: {g}"
            );
        }
    }
}

/// Exit times of the fixed-priority plan are sums of interval endpoints,
/// so they stay exact rationals with small denominators.
#[test]
fn exact_exit_times_are_thousandths() {
    let float = random_scenario(3, 11, &RandomScenarioConfig::default()).unwrap();
    let rational = exact(&float);
    for g in complete_orientations(&rational).unwrap() {
        if !is_feasible(&g, &rational).unwrap().is_feasible() {
            continue;
        }
        let plan = plan_fixed_priority(&rational, &g).unwrap();
        for t in &plan.exit_times {
            assert_eq!(1000 % t.denom(), 0, "{g}: {t}");
            assert!(*t >= Rational64::from_integer(1));
        }
    }
}

fn straight_through(id: usize, angle: f64, centre_at: f64) -> PathGeometry<f64> {
    let (s, c) = angle.to_radians().sin_cos();
    let before = 10.0 * centre_at;
    let after = 10.0 - before;
    PathGeometry::new(id, vec![(-before * c, -before * s), (after * c, after * s)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Every sampled colliding configuration lies inside the compiled
    /// rectangle: the cross section over-approximates the true one.
    #[test]
    fn compiled_rectangle_covers_collisions(
        angle in 30.0f64..150.0,
        centre_1 in 0.3f64..0.7,
        centre_2 in 0.3f64..0.7,
        r1 in 0.2f64..0.6,
        r2 in 0.2f64..0.6,
        probes in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 400),
    ) {
        let paths = vec![straight_through(1, 0.0, centre_1), straight_through(2, angle, centre_2)];
        let vehicles = vec![
            VehicleSpec { id: 1, path_id: 1, radius: r1 },
            VehicleSpec { id: 2, path_id: 2, radius: r2 },
        ];
        let gs = GeometricScenario::new(paths.clone(), vehicles, vec![0.0, 0.0]).unwrap();
        let scn = compile_scenario(&gs, 256).unwrap();
        prop_assert_eq!(scn.obstacles().len(), 1);
        let r = &scn.obstacles()[0];
        // The paths cross at the origin, which must be covered.
        prop_assert!(r.first().contains(centre_1) && r.second().contains(centre_2));
        for (s1, s2) in probes {
            let (p, q) = (paths[0].eval(s1).unwrap(), paths[1].eval(s2).unwrap());
            if (p.0 - q.0).hypot(p.1 - q.1) < r1 + r2 {
                prop_assert!(r.first().contains(s1) && r.second().contains(s2), "({}, {})", s1, s2);
            }
        }
    }
}
