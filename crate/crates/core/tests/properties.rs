//! Randomized structural invariants, exercised with proptest. These
//! complement the oracle tests: instead of pinning values they assert
//! algebraic identities that must hold for every input.

use cpb_core::complexes::{ComplexMatrix, ComplexSpace, PlanarBody};
use cpb_core::mixed::{mixed_volume, mixed_volume_slots};
use cpb_core::projection::{support_via_mixed_volume, zonotope_volume, ProjectionBody};
use cpb_core::{vector, Polytope, Vector};
use proptest::prelude::*;

fn point_cloud(dim: usize, n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(
        prop::collection::vec(-1.0..1.0f64, dim),
        (dim + 2)..=n.max(dim + 3),
    )
}

fn hull_of(dim: usize, cloud: &[Vec<f64>]) -> Option<Polytope> {
    let pts: Vec<Vector> = cloud.iter().map(|p| vector(p)).collect();
    Polytope::from_points(dim, &pts).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn support_function_is_sublinear(cloud in point_cloud(4, 10),
                                     u in prop::collection::vec(-1.0..1.0f64, 4),
                                     v in prop::collection::vec(-1.0..1.0f64, 4)) {
        let Some(p) = hull_of(4, &cloud) else { return Ok(()); };
        let (u, v) = (vector(&u), vector(&v));
        let lhs = p.support(&(&u + &v));
        let rhs = p.support(&u) + p.support(&v);
        prop_assert!(lhs <= rhs + 1e-10);
        // Positive homogeneity.
        prop_assert!((p.support(&(&u * 2.5)) - 2.5 * p.support(&u)).abs() < 1e-10);
    }

    #[test]
    fn hull_is_idempotent(cloud in point_cloud(4, 12)) {
        let Some(p) = hull_of(4, &cloud) else { return Ok(()); };
        let again = Polytope::from_points(4, p.vertices()).unwrap();
        prop_assert_eq!(p.vertices().len(), again.vertices().len());
        prop_assert!((p.volume() - again.volume()).abs() < 1e-12 * p.volume().max(1.0));
    }

    #[test]
    fn facet_normals_close_up(cloud in point_cloud(4, 12)) {
        let Some(p) = hull_of(4, &cloud) else { return Ok(()); };
        prop_assert!(p.closedness_defect() < 1e-9 * p.coordinate_scale().powi(3));
    }

    #[test]
    fn self_sum_scales_volume(cloud in point_cloud(3, 9)) {
        let Some(p) = hull_of(3, &cloud) else { return Ok(()); };
        let s = p.minkowski_sum(&p).unwrap();
        prop_assert!((s.volume() - 8.0 * p.volume()).abs() < 1e-9 * s.volume().max(1.0));
    }

    #[test]
    fn complex_structure_squares_to_minus_one(v in prop::collection::vec(-3.0..3.0f64, 6)) {
        let space = ComplexSpace::new(3);
        let v = vector(&v);
        let jjv = space.j_apply(&space.j_apply(&v));
        prop_assert!((&jjv + &v).norm() < 1e-14);
    }

    #[test]
    fn realification_commutes_with_complex_structure(seed in any::<u64>()) {
        let space = ComplexSpace::new(2);
        let mut r = cpb_core::sample::rng(seed);
        let g = ComplexMatrix::random_sl(2, &mut r);
        let a = g.realification();
        let v = cpb_core::sample::random_direction(4, &mut r);
        let lhs = space.j_apply(&(&a * &v));
        let rhs = &a * space.j_apply(&v);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn zonotope_volume_ignores_signs_and_order(seed in any::<u64>()) {
        let mut r = cpb_core::sample::rng(seed);
        let mut gens: Vec<Vector> = (0..6)
            .map(|_| cpb_core::sample::random_direction(3, &mut r))
            .collect();
        let v1 = zonotope_volume(3, &gens);
        gens.reverse();
        gens[0] = -&gens[0];
        gens[3] = -&gens[3];
        let v2 = zonotope_volume(3, &gens);
        prop_assert!((v1 - v2).abs() < 1e-10 * v1.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mixed_volume_is_symmetric_and_multilinear(cloud_k in point_cloud(3, 8),
                                                 cloud_l in point_cloud(3, 8),
                                                 lam in 0.2..2.0f64) {
        let (Some(k), Some(l)) = (hull_of(3, &cloud_k), hull_of(3, &cloud_l)) else {
            return Ok(());
        };
        let m = cpb_core::sample::unit_cube(3);
        let v_klm = mixed_volume(&[&k, &l, &m]).unwrap();
        let v_mlk = mixed_volume(&[&m, &l, &k]).unwrap();
        prop_assert!((v_klm - v_mlk).abs() < 1e-9 * v_klm.abs().max(1.0));

        // Multilinearity in the first slot: V(K + λL, L, M).
        let sum = k.minkowski_sum(&l.dilate(lam)).unwrap();
        let lhs = mixed_volume(&[&sum, &l, &m]).unwrap();
        let rhs = v_klm + lam * mixed_volume(&[&l, &l, &m]).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-8 * lhs.abs().max(1.0));
    }

    #[test]
    fn projection_support_agrees_with_defining_mixed_volume(cloud in point_cloud(4, 9),
                                                            w in prop::collection::vec(-1.0..1.0f64, 4)) {
        let Some(k) = hull_of(4, &cloud) else { return Ok(()); };
        let w = vector(&w);
        prop_assume!(w.norm() > 0.1);
        let space = ComplexSpace::new(2);
        let c = PlanarBody::square();
        let pb = ProjectionBody::of_body(space, &k, &c).unwrap();
        let direct = pb.support(&w);
        let via_mixed = support_via_mixed_volume(&space, &[(&k, 3)], &c, &w).unwrap();
        prop_assert!((direct - via_mixed).abs() < 1e-9 * direct.abs().max(1.0),
            "trace formula {direct} vs defining mixed volume {via_mixed}");
    }

    #[test]
    fn grouped_slots_match_expanded_slots(cloud in point_cloud(3, 8)) {
        let Some(k) = hull_of(3, &cloud) else { return Ok(()); };
        let cube = cpb_core::sample::unit_cube(3);
        let a = mixed_volume_slots(3, &[(&k, 2), (&cube, 1)]).unwrap();
        let b = mixed_volume(&[&k, &k, &cube]).unwrap();
        prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }
}
