use ot_symmetry::lap::{self, SquareMatrix};
use ot_symmetry::qmc;
use ot_symmetry::stats::exact_p_value;
use ot_symmetry::transport::{brute_force_lap, solve_lap, CostMatrix};
use ot_symmetry::{confset, SymmetryGroup};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point(p: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, p)
}

fn small_costs() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2usize..=6).prop_flat_map(|n| {
        (Just(n), prop::collection::vec(0.0f64..100.0, n * n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lap_matches_brute_force((n, entries) in small_costs()) {
        let costs = CostMatrix::new(n, entries).unwrap();
        let fast = solve_lap(&costs);
        let slow = brute_force_lap(&costs).unwrap();
        prop_assert!((fast.total_cost - slow.total_cost).abs() <= 1e-9 * (1.0 + slow.total_cost));
    }

    #[test]
    fn lap_duals_certify_optimality((n, entries) in small_costs()) {
        let matrix = SquareMatrix::new(n, entries);
        let sol = lap::solve(&matrix);
        let u = sol.row_duals(&matrix);
        for i in 0..n {
            for j in 0..n {
                prop_assert!(u[i] + sol.col_duals[j] <= matrix.at(i, j) + 1e-7);
            }
        }
        let dual_value: f64 = u.iter().sum::<f64>() + sol.col_duals.iter().sum::<f64>();
        prop_assert!((dual_value - sol.total_cost(&matrix)).abs() <= 1e-6 * (1.0 + dual_value.abs()));
    }

    #[test]
    fn halton_stays_in_unit_interval(index in 1u64..10_000, base_idx in 0usize..8) {
        let base = qmc::primes(8)[base_idx];
        let u: f64 = qmc::halton(index, base);
        prop_assert!(u > 0.0 && u < 1.0);
    }

    #[test]
    fn orbit_cost_is_group_invariant(x in point(3), h in point(3), master in 0u64..1000) {
        for group in [
            SymmetryGroup::central(3),
            SymmetryGroup::sign_change(3),
            SymmetryGroup::spherical(3),
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(master);
            let base = group.orbit_cost(&x, &h).unwrap();
            let s = group.haar_sample(&mut rng);
            let moved = s.apply(&x);
            let again = group.orbit_cost(&moved, &h).unwrap();
            prop_assert!((base - again).abs() <= 1e-7 * (1.0 + base));
        }
    }

    #[test]
    fn argmin_sign_attains_orbit_cost(x in point(3), h in point(3), master in 0u64..1000) {
        for group in [
            SymmetryGroup::central(3),
            SymmetryGroup::sign_change(3),
            SymmetryGroup::spherical(3),
        ] {
            if matches!(group.kind, ot_symmetry::GroupKind::Spherical)
                && x.iter().all(|v| v.abs() < 1e-12)
            {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(master);
            let cost = group.orbit_cost(&x, &h).unwrap();
            let s = group.argmin_sign(&x, &h, &mut rng).unwrap();
            let image = s.apply_transpose(&x);
            let attained: f64 =
                image.iter().zip(&h).map(|(a, b)| (a - b) * (a - b)).sum();
            prop_assert!((attained - cost).abs() <= 1e-6 * (1.0 + cost));
        }
    }

    #[test]
    fn exact_p_value_is_valid(null in prop::collection::vec(0.0f64..10.0, 1..100), obs in 0.0f64..10.0) {
        let mut sorted = null.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let p = exact_p_value(&sorted, obs);
        let b = sorted.len() as f64;
        prop_assert!(p >= 1.0 / (b + 1.0) - 1e-12);
        prop_assert!(p <= 1.0 + 1e-12);
        // monotone: a larger observation never gets a larger p-value
        let p_hi = exact_p_value(&sorted, obs + 1.0);
        prop_assert!(p_hi <= p + 1e-12);
    }

    #[test]
    fn hull_contains_its_inputs(pts in prop::collection::vec(point(2), 3..30)) {
        let hull = confset::convex_hull_2d(&pts);
        prop_assert!(hull.len() <= pts.len());
        if hull.len() >= 3 {
            for q in &pts {
                prop_assert!(inside_hull(&hull, q, 1e-7));
            }
        }
    }

    #[test]
    fn cost_matrix_from_instance_is_nonnegative(
        data in prop::collection::vec(point(2), 4..8),
        seed in 0u64..100,
    ) {
        let group = SymmetryGroup::central(2);
        let reference = ot_symmetry::ReferenceSet::build(
            &group,
            ot_symmetry::ErdKind::Gaussian,
            data.len(),
            ot_symmetry::Construction::RandomSample,
            seed,
        ).unwrap();
        let costs = CostMatrix::from_instance(&group, &data, reference.points()).unwrap();
        let assignment = solve_lap(&costs);
        prop_assert!(assignment.total_cost >= -1e-12);
        let mut seen = vec![false; costs.n()];
        for &j in &assignment.permutation {
            prop_assert!(!seen[j]);
            seen[j] = true;
        }
    }
}

fn inside_hull(hull: &[Vec<f64>], q: &[f64], tol: f64) -> bool {
    let m = hull.len();
    for k in 0..m {
        let a = &hull[k];
        let b = &hull[(k + 1) % m];
        let cross = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]);
        if cross < -tol {
            return false;
        }
    }
    true
}
