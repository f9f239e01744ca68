//! Randomized cross-checks of the public API against independent
//! re-computations.

use proptest::prelude::*;

use minkpack::{
    count_integer_points, enumerate_nonzero_points, find_root, integrate, lattice_hexagon_area,
    Lattice2, Point2, Tolerance,
};

fn basis_entry() -> impl Strategy<Value = f64> {
    (-1.5f64..1.5).prop_map(|v| (v * 1e6).round() / 1e6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Corner-mapped enumeration against a plain double loop over integer
    // coefficients. With entries ≤ 1.5, |det| ≥ 0.75, halfwidth ≤ 2, every
    // box point has |a|, |c| ≤ 9, so the loop bound 10 is exhaustive.
    #[test]
    fn enumeration_matches_double_loop(
        b1x in basis_entry(), b1y in basis_entry(),
        b2x in basis_entry(), b2y in basis_entry(),
        hw in 0.2f64..2.0,
    ) {
        let det = b1x * b2y - b1y * b2x;
        prop_assume!(det.abs() >= 0.75);
        let lat = Lattice2::new(Point2::new(b1x, b1y), Point2::new(b2x, b2y));
        let got = enumerate_nonzero_points(&lat, hw).unwrap();

        const K: i64 = 10;
        let mut brute = Vec::new();
        for a in -K..=K {
            for c in -K..=K {
                if a == 0 && c == 0 {
                    continue;
                }
                let q = lat.point(a, c);
                if q.x.abs().max(q.y.abs()) <= hw {
                    brute.push(q);
                }
            }
        }
        prop_assert_eq!(got.len(), brute.len());
        for (g, b) in got.iter().zip(brute.iter()) {
            prop_assert_eq!(g, b);
        }
    }

    #[test]
    fn enumeration_is_centrally_symmetric(
        b1x in basis_entry(), b1y in basis_entry(),
        b2x in basis_entry(), b2y in basis_entry(),
        hw in 0.2f64..2.0,
    ) {
        prop_assume!((b1x * b2y - b1y * b2x).abs() >= 0.75);
        let lat = Lattice2::new(Point2::new(b1x, b1y), Point2::new(b2x, b2y));
        let pts = enumerate_nonzero_points(&lat, hw).unwrap();
        for q in &pts {
            prop_assert!(
                pts.iter().any(|r| r.x == -q.x && r.y == -q.y),
                "no mirror of {:?}", q
            );
        }
    }

    // Shoelace of the six shell points is 3·|det| for any basis, not just
    // critical ones.
    #[test]
    fn hexagon_is_three_determinants(
        b1x in -2.0f64..2.0, b1y in -2.0f64..2.0,
        b2x in -2.0f64..2.0, b2y in -2.0f64..2.0,
    ) {
        let det = b1x * b2y - b1y * b2x;
        prop_assume!(det.abs() >= 0.3);
        let lat = Lattice2::new(Point2::new(b1x, b1y), Point2::new(b2x, b2y));
        let area = lattice_hexagon_area(&lat);
        let want = 3.0 * det.abs();
        prop_assert!((area - want).abs() <= 1e-10 * want.max(1.0), "area = {}, want = {}", area, want);
    }

    #[test]
    fn counts_are_divisible_by_four(p_idx in 0usize..3, n in 1u64..=60) {
        let p = [2u32, 4, 6][p_idx];
        let c = count_integer_points(p, n).unwrap();
        prop_assert_eq!(c % 4, 0);
    }

    // ∫_a^b = ∫_a^c + ∫_c^b for a smooth integrand and any interior split.
    #[test]
    fn quadrature_is_additive(
        a in -3.0f64..0.0, span in 0.5f64..4.0, t in 0.05f64..0.95, k in 0.5f64..3.0,
    ) {
        let b = a + span;
        let c = a + t * span;
        let tol = Tolerance::default();
        let f = |x: f64| (k * x).cos() + 0.25 * x * x;
        let whole = integrate(f, a, b, &tol).unwrap();
        let left = integrate(f, a, c, &tol).unwrap();
        let right = integrate(f, c, b, &tol).unwrap();
        prop_assert!((whole - (left + right)).abs() <= 1e-10);
    }

    // The located root is stable under small bracket perturbations that
    // preserve the sign change.
    #[test]
    fn root_is_stable_under_bracket_perturbation(
        r in -1.0f64..1.0, u in 0.3f64..1.7, v in 0.3f64..1.7,
        du in -0.05f64..0.05, dv in -0.05f64..0.05,
    ) {
        let tol = Tolerance::default();
        let f = |x: f64| (x - r) * (x * x + 1.0);
        let x0 = find_root(f, r - u, r + v, &tol).unwrap();
        prop_assert!((x0 - r).abs() <= 1e-11, "x0 = {}, r = {}", x0, r);
        let x1 = find_root(f, r - u + du, r + v + dv, &tol).unwrap();
        prop_assert!((x1 - x0).abs() <= 1e-10);
    }
}
