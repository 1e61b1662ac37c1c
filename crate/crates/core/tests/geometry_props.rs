use proptest::prelude::*;

use tetra_core::geometry::curve::{square_peg_solve, CurveSpec};
use tetra_core::geometry::embedding::{normalize, EmbeddingSpec, Vec3};
use tetra_core::geometry::solver::{report_distances, solve, SolveParams, SolveReport};
use tetra_core::geometry::testmap::{test_map, Config4, TestMapValue, D8};

fn unit() -> impl Strategy<Value = Vec3> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
        .prop_filter("away from the origin", |v| {
            v.iter().map(|x| x * x).sum::<f64>() > 1e-2
        })
        .prop_map(|v| normalize(&v))
}

fn config() -> impl Strategy<Value = Config4> {
    [unit(), unit(), unit(), unit()]
}

fn embedding() -> impl Strategy<Value = EmbeddingSpec> {
    prop_oneof![
        (0.5f64..2.0).prop_map(EmbeddingSpec::round),
        (0.5f64..2.0, 0.5f64..2.0, 0.5f64..2.0)
            .prop_map(|(a, b, c)| EmbeddingSpec::ellipsoid(a, b, c).unwrap()),
        (-0.2f64..0.2).prop_map(|c| EmbeddingSpec::radial(&[(2, 1, c), (3, -2, c / 2.0)]).unwrap()),
    ]
}

fn assert_certificate(r: &SolveReport, scale: f64) {
    assert!(r.certified);
    assert!(r.margins.distinct > r.margins.threshold);
    assert!(r.margins.to_y > r.margins.threshold);
    let bound = 4.0 * r.tol.sqrt() * scale;
    let d = r.distances;
    for gap in [d.d12 - d.d23, d.d23 - d.d34, d.d34 - d.d14, d.d13 - d.d24] {
        assert!(gap.abs() < bound, "gap {gap} vs {bound}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn test_map_is_equivariant(e in embedding(), c in config()) {
        let v = test_map(&e, &c);
        let a = v.as_array();
        prop_assert!((a[0] + a[1] + a[2] + a[3]).abs() < 1e-12);
        prop_assert!((a[4] + a[5]).abs() < 1e-12);
        for g in D8::all() {
            let lhs = test_map(&e, &g.act_config(c)).as_array();
            let rhs = g.act_value(&v).as_array();
            for k in 0..6 {
                prop_assert!((lhs[k] - rhs[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn action_is_a_group_action(c in config(), i in 0usize..8, j in 0usize..8) {
        let all = D8::all();
        let (g, h) = (all[i], all[j]);
        let gh = g.act_config(h.act_config(c));
        prop_assert!(all.iter().any(|k| k.act_config(c) == gh));
        let v = TestMapValue { t: [1.0, 2.0, -4.0, 1.0], s: [0.5, -0.5] };
        let lhs = g.act_value(&h.act_value(&v));
        prop_assert!(all.iter().any(|k| k.act_value(&v) == lhs));
    }

    #[test]
    fn distances_are_a_metric(e in embedding(), c in config()) {
        let d = tetra_core::geometry::testmap::pair_distances(&e, &c);
        prop_assert!(d.iter().all(|x| *x >= 0.0));
        // d13 <= d12 + d23 and d24 <= d23 + d34
        prop_assert!(d[4] <= d[0] + d[1] + 1e-12);
        prop_assert!(d[5] <= d[1] + d[2] + 1e-12);
    }
}

#[test]
fn solver_is_deterministic_and_certified() {
    let params = SolveParams {
        starts: 12,
        seed: 9,
        ..SolveParams::default()
    };
    for spec in [
        "round:1.5",
        "ellipsoid:1.0,1.3,0.7",
        "harmonic:2,1,0.15",
        "harmonic:3,2,0.1",
    ] {
        let e: EmbeddingSpec = spec.parse().unwrap();
        let a = solve(&e, &params).unwrap();
        let b = solve(&e, &params).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{spec}");
        assert_certificate(&a, e.scale());
        let again = report_distances(&e, &a.config);
        assert_eq!(again, a.distances);
    }
}

#[test]
fn curve_solutions_are_squares() {
    for spec in ["circle:1", "ellipse:1.0,0.6", "star:0.2,3"] {
        let c: CurveSpec = spec.parse().unwrap();
        let r = square_peg_solve(&c, &SolveParams::default()).unwrap();
        assert_certificate(&r, 2.0);
        let side = r.distances.d12;
        assert!(
            (r.distances.d13 - side * 2f64.sqrt()).abs() < 1e-6 * side,
            "{spec}"
        );
    }
}
