//! Property tests for slack reports and the scalar constants.

use proptest::prelude::*;
use wbm::inequalities::{
    sharper_constant, sharpness_ordering, zonoid_constant, SlackReport, Verdict, ZonoidConstant, BUDGET_FLOOR,
};
use wbm::measures::WeightedMeasure;
use wbm::Estimate;

proptest! {
    #[test]
    fn slack_report_invariants(
        lhs in -1e3f64..1e3, rhs in -1e3f64..1e3, el in 0.0f64..1.0, er in 0.0f64..1.0,
    ) {
        let r = SlackReport::from_sides("probe", Estimate::new(lhs, el), Estimate::new(rhs, er));
        prop_assert_eq!(r.slack, lhs - rhs);
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        prop_assert!(r.error_budget >= el + er && r.error_budget >= BUDGET_FLOOR * scale);
        prop_assert_eq!(r.verdict, Verdict::classify(r.slack, r.error_budget));
        match r.verdict {
            Verdict::Holds => prop_assert!(r.slack > r.error_budget),
            Verdict::Violated => prop_assert!(r.slack < -r.error_budget),
            Verdict::Inconclusive => prop_assert!(r.slack.abs() <= r.error_budget),
        }
        let swapped = SlackReport::from_sides("probe", Estimate::new(rhs, er), Estimate::new(lhs, el));
        prop_assert_eq!(swapped.slack, -r.slack);
        let expected = match r.verdict {
            Verdict::Holds => Verdict::Violated,
            Verdict::Violated => Verdict::Holds,
            Verdict::Inconclusive => Verdict::Inconclusive,
        };
        prop_assert_eq!(swapped.verdict, expected);
    }

    #[test]
    fn gaussian_constants_are_ordered(n in 2usize..=50) {
        let g = WeightedMeasure::gaussian(n).unwrap();
        let gaf = zonoid_constant(ZonoidConstant::GafGaussian, &g, 1.0).unwrap();
        let sharp = zonoid_constant(ZonoidConstant::SharpGaussian, &g, 1.0).unwrap();
        prop_assert!(1.0 <= gaf && gaf <= sharp, "gaf {gaf} sharp {sharp}");
        let (e, q) = sharpness_ordering(n);
        prop_assert!(e <= q);
    }

    #[test]
    fn sharper_constant_is_monotone(n in 2usize..12, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let g = WeightedMeasure::gaussian(n).unwrap();
        // R·W′(R) = R² stays below n on (0, √n).
        let top = (n as f64).sqrt() * 0.999;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let c_lo = sharper_constant(&g, 1e-9 + lo * top).unwrap();
        let c_hi = sharper_constant(&g, 1e-9 + hi * top).unwrap();
        prop_assert!(c_lo <= c_hi + 1e-15);
        prop_assert!((sharper_constant(&g, 1e-6).unwrap() - 1.0).abs() < 1e-9);
    }
}
