//! Independent-oracle tests: each quantity the kernel computes is compared
//! against a second route — closed forms, Monte Carlo estimates, brute-force
//! enumeration, polynomial extraction, or a structurally different algorithm.

use cpb_core::complexes::{ComplexSpace, PlanarBody};
use cpb_core::measure::{Atom, DiscreteMeasure};
use cpb_core::mixed::{
    ball_approximant, mixed_volume, mixed_volume_slots, quermassintegral, quermassintegral_pair,
};
use cpb_core::projection::{projection_body, zonotope_volume, ProjectionBody};
use cpb_core::sample;
use cpb_core::solver::{balance_measure, halfspace_intersection, solve_minkowski, steiner_normalize};
use cpb_core::{vector, Error, Polytope, Vector};
use rand::Rng;

#[test]
fn volumes_of_reference_bodies_match_closed_forms() {
    for d in [3, 4, 5] {
        let fact: f64 = (1..=d).map(|k| k as f64).product();
        assert!((sample::unit_cube(d).volume() - 1.0).abs() < 1e-12);
        assert!((sample::standard_simplex(d).volume() - 1.0 / fact).abs() < 1e-12);
        let cross = sample::cross_polytope(d).volume();
        assert!((cross - 2f64.powi(d as i32) / fact).abs() < 1e-12);
    }
}

#[test]
fn monte_carlo_volume_agrees_on_a_random_hull() {
    let mut r = sample::rng(5);
    let p = sample::random_polytope(4, 12, &mut r).unwrap();
    let (mut lo, mut hi) = (vec![f64::INFINITY; 4], vec![f64::NEG_INFINITY; 4]);
    for v in p.vertices() {
        for j in 0..4 {
            lo[j] = lo[j].min(v[j]);
            hi[j] = hi[j].max(v[j]);
        }
    }
    let box_vol: f64 = (0..4).map(|j| hi[j] - lo[j]).product();
    let n = 200_000;
    let mut hits = 0usize;
    for _ in 0..n {
        let x = Vector::from_iterator(4, (0..4).map(|j| r.gen_range(lo[j]..hi[j])));
        if p.contains(&x, 1e-9) {
            hits += 1;
        }
    }
    let phat = hits as f64 / n as f64;
    let est = phat * box_vol;
    let sigma = box_vol * (phat * (1.0 - phat) / n as f64).sqrt();
    assert!(
        (p.volume() - est).abs() < 5.0 * sigma,
        "volume {} vs Monte Carlo {est} ± {sigma}",
        p.volume()
    );
}

#[test]
fn support_adds_under_minkowski_sum() {
    let mut r = sample::rng(6);
    let k = sample::random_polytope(4, 9, &mut r).unwrap();
    let l = sample::random_polytope(4, 7, &mut r).unwrap();
    let s = k.minkowski_sum(&l).unwrap();
    for _ in 0..20 {
        let w = sample::random_direction(4, &mut r);
        assert!((s.support(&w) - k.support(&w) - l.support(&w)).abs() < 1e-10);
    }
}

#[test]
fn self_sum_doubles_volume_per_dimension() {
    let mut r = sample::rng(7);
    let k = sample::random_polytope(4, 10, &mut r).unwrap();
    let s = k.minkowski_sum(&k).unwrap();
    assert!((s.volume() - 16.0 * k.volume()).abs() < 1e-9 * s.volume());
}

#[test]
fn diagonal_mixed_volume_is_the_volume() {
    let mut r = sample::rng(8);
    let k = sample::random_polytope(4, 9, &mut r).unwrap();
    let v = mixed_volume(&[&k, &k, &k, &k]).unwrap();
    assert!((v - k.volume()).abs() < 1e-10 * v.max(1.0));
}

/// 4×4 permanent by direct expansion over the 24 permutations.
fn permanent4(m: &[[f64; 4]; 4]) -> f64 {
    let mut total = 0.0;
    let idx = [0usize, 1, 2, 3];
    let mut perm = idx;
    // Heap's algorithm, iterative.
    let mut c = [0usize; 4];
    let mut add = |p: &[usize; 4]| {
        total += (0..4).map(|i| m[i][p[i]]).product::<f64>();
    };
    add(&perm);
    let mut i = 0;
    while i < 4 {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            add(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    total
}

#[test]
fn mixed_volume_of_boxes_is_a_scaled_permanent() {
    let mut r = sample::rng(9);
    let mut edges = [[0.0f64; 4]; 4];
    let mut boxes = Vec::new();
    for row in &mut edges {
        for e in row.iter_mut() {
            *e = r.gen_range(0.4..1.6);
        }
        boxes.push(Polytope::axis_box(&[0.0; 4], row).unwrap());
    }
    let refs: Vec<&Polytope> = boxes.iter().collect();
    let expected = permanent4(&edges) / 24.0;
    // Axis-box fast path.
    let v = mixed_volume(&refs).unwrap();
    assert!((v - expected).abs() < 1e-12 * expected);
    // General polarization path, after a linear map of known determinant.
    let map = sample::random_linear_map(4, &mut r);
    let det = map.determinant().abs();
    let images: Vec<Polytope> = boxes.iter().map(|b| b.linear_image(&map).unwrap()).collect();
    let image_refs: Vec<&Polytope> = images.iter().collect();
    let v2 = mixed_volume(&image_refs).unwrap();
    assert!(
        (v2 - det * expected).abs() < 1e-9 * (det * expected),
        "polarization {v2} vs |det|·permanent {}",
        det * expected
    );
}

#[test]
fn mixed_volume_is_the_linear_coefficient_of_the_volume_polynomial() {
    // vol(K + tL) is a degree-4 polynomial in t whose t¹ coefficient is
    // 4·V(K,K,K,L); extract it by exact Lagrange interpolation at t = 0…4.
    let mut r = sample::rng(10);
    let k = sample::random_polytope(4, 8, &mut r).unwrap();
    let l = sample::random_polytope(4, 8, &mut r).unwrap();
    let mut values = Vec::new();
    for t in 0..5 {
        let sum = if t == 0 {
            k.clone()
        } else {
            k.minkowski_sum(&l.dilate(t as f64)).unwrap()
        };
        values.push(sum.volume());
    }
    // Finite-difference extraction of p'(0) for nodes 0,1,2,3,4:
    // p'(0) = (−25/12 p0 + 4 p1 − 3 p2 + 4/3 p3 − 1/4 p4).
    let deriv = -25.0 / 12.0 * values[0] + 4.0 * values[1] - 3.0 * values[2]
        + 4.0 / 3.0 * values[3]
        - 0.25 * values[4];
    let v = mixed_volume(&[&k, &k, &k, &l]).unwrap();
    assert!(
        (4.0 * v - deriv).abs() < 1e-7 * deriv.abs().max(1.0),
        "4V = {} vs polynomial derivative {deriv}",
        4.0 * v
    );
}

#[test]
fn quermassintegrals_of_the_unit_cube() {
    let ball = ball_approximant(4, 32).unwrap();
    let cube = sample::unit_cube(4);
    let w0 = quermassintegral(&cube, 0, &ball).unwrap();
    assert!((w0.point - 1.0).abs() < 1e-12);
    // W₁ = (1/4)·∫h_B dS = (1/4)·Σ_{±e_j} h_B = 8/4 exactly: the
    // approximant contains ±e_j as vertices and nothing reaches farther
    // along a coordinate axis... except possibly a random direction, so
    // allow its tiny excess.
    let w1 = quermassintegral(&cube, 1, &ball).unwrap();
    assert!((w1.point - 2.0).abs() < 2e-2, "W1 = {}", w1.point);
    assert!(w1.lo <= w1.point && w1.point <= w1.hi);
    // Sandwich: the enclosure must contain the Euclidean value 2.
    assert!(w1.lo <= 2.0 + 1e-12 && 2.0 <= w1.hi + 1e-12);
    // Pair form agrees with the diagonal.
    let w1p = quermassintegral_pair(&cube, &cube, 1, &ball).unwrap();
    assert!((w1p.point - w1.point).abs() < 1e-10);
}

#[test]
fn projection_body_of_the_cube_with_segment_gauge_is_a_box() {
    let space = ComplexSpace::new(3);
    let cube = sample::unit_cube(6);
    let pb = ProjectionBody::of_body(space, &cube, &PlanarBody::segment()).unwrap();
    let third = 1.0 / 3.0;
    let mut r = sample::rng(11);
    for _ in 0..24 {
        let w = sample::random_direction(6, &mut r);
        let expected: f64 = w.iter().map(|x| x.abs()).sum::<f64>() * third;
        assert!((pb.support(&w) - expected).abs() < 1e-12);
    }
    let poly = pb.to_polytope().unwrap();
    let wrapped = projection_body(space, &cube, &PlanarBody::segment()).unwrap();
    assert_eq!(wrapped.body.vertices().len(), poly.vertices().len());
    let (lo, hi) = poly.as_axis_box().expect("axis box");
    for j in 0..6 {
        assert!((lo[j] + third).abs() < 1e-12 && (hi[j] - third).abs() < 1e-12);
    }
}

#[test]
fn projection_body_volume_routes_agree() {
    let mut r = sample::rng(12);
    let space = ComplexSpace::new(2);
    let k = sample::random_polytope(4, 10, &mut r).unwrap();
    let pb = ProjectionBody::of_body(space, &k, &PlanarBody::square()).unwrap();
    let via_generators = pb.volume().unwrap();
    let via_hull = pb.to_polytope().unwrap().volume();
    assert!(
        (via_generators - via_hull).abs() < 1e-9 * via_hull,
        "zonotope route {via_generators} vs hull route {via_hull}"
    );

    // Product route (axis box body) against the hull route.
    let b = sample::random_axis_box(4, &mut r);
    let pb2 = ProjectionBody::of_body(space, &b, &PlanarBody::square()).unwrap();
    let v_prod = pb2.volume().unwrap();
    let v_hull = pb2.to_polytope().unwrap().volume();
    assert!((v_prod - v_hull).abs() < 1e-9 * v_hull);
}

#[test]
fn zonotope_volume_closed_forms() {
    let gens: Vec<Vector> = (0..4)
        .map(|j| {
            let mut v = Vector::zeros(4);
            v[j] = 1.0;
            v
        })
        .collect();
    assert!((zonotope_volume(4, &gens) - 1.0).abs() < 1e-12);
    let doubled: Vec<Vector> = gens.iter().map(|g| g * 2.0).collect();
    assert!((zonotope_volume(4, &doubled) - 16.0).abs() < 1e-12);
    // A repeated generator merges instead of contributing a zero block.
    let mut with_dup = gens.clone();
    with_dup.push(gens[0].clone());
    assert!((zonotope_volume(4, &with_dup) - 2.0).abs() < 1e-12);
}

#[test]
fn zonotope_volume_matches_summed_segments() {
    let mut r = sample::rng(13);
    let gens: Vec<Vector> = (0..7).map(|_| sample::random_direction(4, &mut r) * r.gen_range(0.5..1.5)).collect();
    let mut z = Polytope::from_points_allow_degenerate(4, &[Vector::zeros(4)]).unwrap();
    for g in &gens {
        let seg = Polytope::from_points_allow_degenerate(4, &[Vector::zeros(4), g.clone()]).unwrap();
        z = z.minkowski_sum(&seg).unwrap();
    }
    let direct = z.volume();
    let formula = zonotope_volume(4, &gens);
    assert!(
        (direct - formula).abs() < 1e-9 * direct,
        "hull {direct} vs determinant expansion {formula}"
    );
}

#[test]
fn halfspace_intersection_reconstructs_a_box() {
    let mut normals = Vec::new();
    let mut offsets = Vec::new();
    for j in 0..4 {
        for s in [1.0, -1.0] {
            let mut n = Vector::zeros(4);
            n[j] = s;
            normals.push(n);
            offsets.push(0.5);
        }
    }
    let p = halfspace_intersection(4, &normals, &offsets).unwrap();
    assert_eq!(p.vertices().len(), 16);
    assert!((p.volume() - 1.0).abs() < 1e-12);
}

#[test]
fn halfspace_intersection_detects_unbounded_sets() {
    let normals: Vec<Vector> = (0..4)
        .map(|j| {
            let mut n = Vector::zeros(4);
            n[j] = 1.0;
            n
        })
        .collect();
    let offsets = vec![1.0; 4];
    match halfspace_intersection(4, &normals, &offsets) {
        Err(Error::UnboundedIntersection) => {}
        other => panic!("expected unbounded error, got {other:?}"),
    }
}

#[test]
fn solver_round_trip_recovers_the_cube() {
    let mut atoms = Vec::new();
    for j in 0..4 {
        for s in [1.0, -1.0] {
            let mut u = Vector::zeros(4);
            u[j] = s;
            atoms.push(Atom { u, a: 1.0 });
        }
    }
    let rho = DiscreteMeasure::new(4, atoms);
    let out = solve_minkowski(&rho).unwrap();
    assert!(out.residual < 1e-6);
    assert!((out.body.volume() - 1.0).abs() < 1e-6);
    for j in 0..4 {
        let mut w = Vector::zeros(4);
        w[j] = 1.0;
        assert!((out.body.support(&w) - 0.5).abs() < 1e-6);
        assert!((out.body.support(&(-&w)) - 0.5).abs() < 1e-6);
    }
}

#[test]
fn balance_measure_restores_the_center_of_mass() {
    let rho = DiscreteMeasure::new(
        4,
        vec![Atom {
            u: vector(&[1.0, 0.0, 0.0, 0.0]),
            a: 1.0,
        }],
    );
    let balanced = balance_measure(&rho, 1, 0.05).unwrap();
    assert!(balanced.centering_defect() < 1e-12 * balanced.total_mass());
    assert!(balanced.atoms.iter().all(|a| a.a > 0.0));
    assert!(balanced.atoms.len() <= 9);
}

#[test]
fn steiner_normalization_is_translation_equivariant() {
    let mut r = sample::rng(14);
    let k = sample::random_polytope(4, 9, &mut r).unwrap();
    let x = sample::random_direction(4, &mut r) * 3.0;
    let a = steiner_normalize(&k);
    let b = steiner_normalize(&k.translate(&x));
    for _ in 0..16 {
        let w = sample::random_direction(4, &mut r);
        assert!((a.support(&w) - b.support(&w)).abs() < 1e-9);
    }
}

#[test]
fn surface_area_measure_closes_and_totals_the_surface_area() {
    let mut r = sample::rng(15);
    let p = sample::random_polytope(5, 12, &mut r).unwrap();
    let s = p.surface_area_measure();
    let area: f64 = p.facets().iter().map(|f| f.measure).sum();
    assert!((s.total_mass() - area).abs() < 1e-10 * area);
    assert!(s.centering_defect() < 1e-10 * area);
}

#[test]
fn mixed_volume_slots_with_multiplicities_match_expanded_form() {
    let mut r = sample::rng(16);
    let k = sample::random_polytope(4, 8, &mut r).unwrap();
    let l = sample::random_polytope(4, 8, &mut r).unwrap();
    let grouped = mixed_volume_slots(4, &[(&k, 3), (&l, 1)]).unwrap();
    let expanded = mixed_volume(&[&k, &k, &k, &l]).unwrap();
    assert!((grouped - expanded).abs() < 1e-10 * grouped.abs().max(1.0));
}
