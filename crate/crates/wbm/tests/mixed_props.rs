//! Property tests for mixed measures and second mixed measures.

use proptest::prelude::*;
use wbm::bodies::{random_body_with_origin, BodyKind, ConvexBody};
use wbm::measures::WeightedMeasure;
use wbm::mixed::{ball_mixed_second, mixed_measure, mixed_second_2d};

fn body_2d() -> impl Strategy<Value = ConvexBody> {
    (
        prop_oneof![
            Just(BodyKind::Polytope),
            Just(BodyKind::Zonotope),
            Just(BodyKind::Smooth2D)
        ],
        3usize..7,
        any::<u64>(),
    )
        .prop_map(|(k, size, seed)| random_body_with_origin(k, 2, size, seed).unwrap())
}

fn smooth_2d() -> impl Strategy<Value = ConvexBody> {
    (2usize..6, any::<u64>()).prop_map(|(d, seed)| random_body_with_origin(BodyKind::Smooth2D, 2, d, seed).unwrap())
}

fn measure_2d() -> impl Strategy<Value = WeightedMeasure> {
    prop_oneof![
        Just(WeightedMeasure::lebesgue(2).unwrap()),
        Just(WeightedMeasure::gaussian(2).unwrap()),
        Just(WeightedMeasure::power_law(2, 1.0, 2.0, 1.0).unwrap()),
    ]
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mixed_measure_is_linear_in_second_body(
        mu in measure_2d(), k in body_2d(), l1 in body_2d(), l2 in body_2d(), t in 0.05f64..5.0,
    ) {
        let m1 = mixed_measure(&mu, &k, &l1).unwrap().value;
        let m2 = mixed_measure(&mu, &k, &l2).unwrap().value;
        let sum = mixed_measure(&mu, &k, &l1.plus(&l2).unwrap()).unwrap().value;
        prop_assert!(close(sum, m1 + m2, 1e-10), "{sum} vs {}", m1 + m2);
        let scaled = mixed_measure(&mu, &k, &ConvexBody::scale(t, l1).unwrap()).unwrap().value;
        prop_assert!(close(scaled, t * m1, 1e-10), "{scaled} vs {}", t * m1);
    }

    #[test]
    fn second_mixed_is_symmetric(mu in measure_2d(), a in smooth_2d(), b in body_2d(), c in body_2d()) {
        let bc = mixed_second_2d(&mu, &a, &b, &c).unwrap().value;
        let cb = mixed_second_2d(&mu, &a, &c, &b).unwrap().value;
        prop_assert!(close(bc, cb, 1e-8), "{bc} vs {cb}");
    }

    #[test]
    fn lebesgue_second_mixed_is_homogeneous(a in smooth_2d(), b in body_2d(), c in body_2d(), t in 0.1f64..5.0) {
        // Degree n − 2 in A: constant in the plane.
        let leb = WeightedMeasure::lebesgue(2).unwrap();
        let base = mixed_second_2d(&leb, &a, &b, &c).unwrap().value;
        let scaled = mixed_second_2d(&leb, &ConvexBody::scale(t, a).unwrap(), &b, &c).unwrap().value;
        prop_assert!(close(scaled, base, 1e-9), "{scaled} vs {base}");
    }

    #[test]
    fn lebesgue_ball_second_is_homogeneous_in_3d(
        r in 0.2f64..3.0, t in 0.1f64..4.0, sb in any::<u64>(), sc in any::<u64>(),
    ) {
        let leb = WeightedMeasure::lebesgue(3).unwrap();
        let b = random_body_with_origin(BodyKind::Zonotope, 3, 3, sb).unwrap();
        let c = random_body_with_origin(BodyKind::Polytope, 3, 6, sc).unwrap();
        let base = ball_mixed_second(&leb, r, &b, &c).unwrap().value;
        let scaled = ball_mixed_second(&leb, t * r, &b, &c).unwrap().value;
        prop_assert!(close(scaled, t * base, 1e-9), "{scaled} vs {}", t * base);
    }

    #[test]
    fn segments_degenerate_only_for_lebesgue(angle in 0.0f64..std::f64::consts::TAU, len in 0.1f64..2.0) {
        let xi = vec![len * angle.cos(), len * angle.sin()];
        let seg = ConvexBody::segment(vec![0.0, 0.0], xi).unwrap();
        let disk = ConvexBody::centered_ball(2, 2.0).unwrap();
        let leb = mixed_second_2d(&WeightedMeasure::lebesgue(2).unwrap(), &disk, &seg, &seg).unwrap();
        prop_assert!(leb.value.abs() < 1e-10, "{leb:?}");
        let gauss = mixed_second_2d(&WeightedMeasure::gaussian(2).unwrap(), &disk, &seg, &seg).unwrap();
        prop_assert!(gauss.value.abs() > gauss.error.max(1e-12), "{gauss:?}");
    }
}
