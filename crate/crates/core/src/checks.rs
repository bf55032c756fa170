//! Seeded verification drivers for the structural identities of the
//! projection-body map.
//!
//! Each driver builds randomized instances, evaluates an identity by two
//! independent computational routes, and returns a [`CheckReport`] with the
//! worst relative residual. The routes are chosen so that no shared
//! intermediate could mask a bug: support values from the facet-sum formula
//! are held against polarized mixed volumes with the orbit body
//! materialized, image bodies are re-hulled from mapped vertices rather
//! than transformed symbolically, and so on.

use crate::complexes::{ComplexMatrix, ComplexSpace, PlanarBody};
use crate::error::{Error, Result};
use crate::mixed::{mixed_area_measure_slots, mixed_volume_slots, mixed_volume_with_function};
use crate::polytope::Polytope;
use crate::projection::{support_via_mixed_volume, ProjectionBody};
use crate::report::{CheckReport, InstanceReport};
use crate::sample;
use crate::tol::rel_residual;
use crate::Vector;
use num_complex::Complex64;
use rand::Rng;

/// Rotating menu of test bodies: general position hulls, axis boxes, and
/// simplices all exercise different facet structures.
fn instance_body(dim: usize, i: usize, r: &mut impl Rng) -> Result<Polytope> {
    match i % 4 {
        0 => sample::random_polytope(dim, dim + 4, r),
        1 => Ok(sample::random_axis_box(dim, r)),
        2 => Ok(sample::random_simplex(dim, r)),
        _ => sample::random_polytope(dim, 2 * dim + 2, r),
    }
}

/// A few directions per instance: random ones, a coordinate axis, and when
/// available a facet normal (support functions are non-smooth there).
fn instance_directions(dim: usize, i: usize, extra: Option<&Polytope>, r: &mut impl Rng) -> Vec<Vector> {
    let mut dirs = vec![
        sample::random_direction(dim, r),
        sample::random_direction(dim, r),
    ];
    let mut e = Vector::zeros(dim);
    e[i % dim] = 1.0;
    dirs.push(e);
    if let Some(p) = extra {
        if let Some(f) = p.facets().get(i % p.facets().len().max(1)) {
            dirs.push(f.normal.clone());
        }
    }
    dirs
}

/// Two routes to `h(Π_C(K_1,…,K_{2m−1}), w)`: the facet-sum formula over the
/// (mixed) area measure against the polarized mixed volume
/// `V(K_1,…,K_{2m−1}, C·w)` with the orbit body `C·w` materialized.
pub fn check_defining_identity(
    m: usize,
    c: &PlanarBody,
    c_name: &str,
    seed: u64,
    count: usize,
    tol: f64,
) -> Result<CheckReport> {
    let space = ComplexSpace::new(m);
    let dim = space.dim();
    let mut r = sample::rng(seed);
    let mut instances = Vec::new();
    for i in 0..count {
        let (bodies, mults, label) = if i % 5 == 4 {
            (
                vec![
                    sample::random_simplex(dim, &mut r),
                    sample::random_simplex(dim, &mut r),
                ],
                vec![dim - 2, 1],
                format!("mixed-simplex-{i}"),
            )
        } else {
            (
                vec![instance_body(dim, i, &mut r)?],
                vec![dim - 1],
                format!("body-{i}"),
            )
        };
        let slots: Vec<(&Polytope, usize)> =
            bodies.iter().zip(&mults).map(|(b, &k)| (b, k)).collect();
        let pb = ProjectionBody::of_slots(space, &slots, c)?;
        let mut worst = 0.0f64;
        for w in instance_directions(dim, i, Some(&bodies[0]), &mut r) {
            let lhs = pb.support(&w);
            let rhs = support_via_mixed_volume(&space, &slots, c, &w)?;
            worst = worst.max(rel_residual(lhs, rhs));
        }
        instances.push(InstanceReport::identity(label, worst, tol));
    }
    Ok(CheckReport::from_instances(
        "defining-identity",
        m,
        c_name,
        seed,
        tol,
        instances,
    ))
}

/// Valuation property under convex cuts: for `K = M ∩ H⁻`, `L = M ∩ H⁺`,
/// `Π_C M + Π_C(K ∩ L) = Π_C K + Π_C L` as support functions. Every tenth
/// instance cuts exactly along a facet hyperplane, so one side degenerates
/// to a facet and both the clip and section paths must produce consistent
/// lower-dimensional bodies.
pub fn check_valuation(
    m: usize,
    c: &PlanarBody,
    c_name: &str,
    seed: u64,
    count: usize,
    tol: f64,
) -> Result<CheckReport> {
    let space = ComplexSpace::new(m);
    let dim = space.dim();
    let mut r = sample::rng(seed);
    let mut instances = Vec::new();
    for i in 0..count {
        let body = instance_body(dim, i, &mut r)?;
        let tangent = i % 10 == 0;
        let (n, off) = if tangent {
            let f = &body.facets()[i % body.facets().len()];
            (f.normal.clone(), f.offset)
        } else {
            let n = sample::random_direction(dim, &mut r);
            let hi = body.support(&n);
            let lo = -body.support(&(-&n));
            let t: f64 = r.gen_range(0.25..0.75);
            (n, lo + t * (hi - lo))
        };
        let k = body
            .clip(&n, off)?
            .ok_or(Error::EmptyInput("lower clip"))?;
        let l = body
            .clip(&(-&n), -off)?
            .ok_or(Error::EmptyInput("upper clip"))?;
        let sec = body
            .section(&n, off)?
            .ok_or(Error::EmptyInput("cut section"))?;

        let pm = ProjectionBody::of_body(space, &body, c)?;
        let pk = ProjectionBody::of_body(space, &k, c)?;
        let pl = ProjectionBody::of_body(space, &l, c)?;
        let ps = ProjectionBody::of_body(space, &sec, c)?;

        let mut dirs = instance_directions(dim, i, Some(&body), &mut r);
        dirs.push(n.clone());
        let mut worst = 0.0f64;
        for w in &dirs {
            let lhs = pm.support(w) + ps.support(w);
            let rhs = pk.support(w) + pl.support(w);
            worst = worst.max(rel_residual(lhs, rhs));
        }
        let mut inst = InstanceReport::identity(format!("cut-{i}"), worst, tol);
        if tangent {
            inst = inst.with_note("facet-tangent cut");
        }
        instances.push(inst);
    }
    Ok(CheckReport::from_instances(
        "valuation",
        m,
        c_name,
        seed,
        tol,
        instances,
    ))
}

/// Linear contravariance: `h(Π_C(gK), w) = |det_C g|² · h(Π_C K, g⁻¹w)`.
/// The left side re-hulls the image polytope from mapped vertices; the
/// right side transforms only the direction. Alternating instances use
/// unimodular maps (factor exactly 1) and scaled ones.
pub fn check_contravariance(
    m: usize,
    c: &PlanarBody,
    c_name: &str,
    seed: u64,
    pairs: usize,
    dirs_per_pair: usize,
    tol: f64,
) -> Result<CheckReport> {
    let space = ComplexSpace::new(m);
    let dim = space.dim();
    let mut r = sample::rng(seed);
    let mut instances = Vec::new();
    for i in 0..pairs {
        let k = instance_body(dim, i, &mut r)?;
        let g = if i % 2 == 0 {
            ComplexMatrix::random_sl(m, &mut r)
        } else {
            let z = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            let z = if z.norm() < 0.3 { z + 0.7 } else { z };
            ComplexMatrix::random_sl(m, &mut r).mul(&ComplexMatrix::scalar(m, z))
        };
        let factor = g.det().norm_sqr();
        let g_inv = g.inverse()?;
        let gk = g.apply_to_polytope(&space, &k)?;
        let pb_k = ProjectionBody::of_body(space, &k, c)?;
        let pb_gk = ProjectionBody::of_body(space, &gk, c)?;
        let mut worst = 0.0f64;
        for j in 0..dirs_per_pair {
            let w = if j == 0 {
                let mut e = Vector::zeros(dim);
                e[i % dim] = 1.0;
                e
            } else {
                sample::random_direction(dim, &mut r)
            };
            let lhs = pb_gk.support(&w);
            let rhs = factor * pb_k.support(&g_inv.apply(&space, &w));
            worst = worst.max(rel_residual(lhs, rhs));
        }
        let label = if i % 2 == 0 {
            format!("sl-{i}")
        } else {
            format!("gl-{i}")
        };
        instances.push(InstanceReport::identity(label, worst, tol));
    }
    Ok(CheckReport::from_instances(
        "contravariance",
        m,
        c_name,
        seed,
        tol,
        instances,
    ))
}

/// Conjugation symmetry of the pairing:
/// `V(K_1,…,K_{2m−1}, Π_C(L_1,…,L_{2m−1})) = V(L_1,…,L_{2m−1}, Π_C̄(K_1,…,K_{2m−1}))`.
///
/// The left side materializes the projection body of the `L`-tuple and runs
/// honest polarization over `2m` bodies; the right side never builds a
/// polytope, integrating the conjugate facet-sum formula against the mixed
/// area measure of the `K`-tuple.
pub fn check_symmetry(
    m: usize,
    c: &PlanarBody,
    c_name: &str,
    seed: u64,
    count: usize,
    tol: f64,
) -> Result<CheckReport> {
    let space = ComplexSpace::new(m);
    let dim = space.dim();
    let deg = space.body_degree();
    let mut r = sample::rng(seed);
    let mut instances = Vec::new();
    for i in 0..count {
        // Every fifth instance puts a simplex into the K-tuple, forcing the
        // generic polarization route on the left and a non-axis mixed area
        // measure on the right. The L-tuple stays boxes so the materialized
        // projection body keeps a small vertex count.
        let simplex = i % 5 == 4;
        let make_tuple = |with_simplex: bool,
                              r: &mut rand_chacha::ChaCha20Rng|
         -> (Vec<Polytope>, Vec<usize>) {
            if with_simplex {
                let mut bodies = vec![sample::random_simplex(dim, r)];
                bodies.extend((1..deg).map(|_| sample::random_axis_box(dim, r)));
                (bodies, vec![1; deg])
            } else if i % 2 == 0 {
                // Fully distinct tuple.
                let bodies: Vec<Polytope> =
                    (0..deg).map(|_| sample::random_axis_box(dim, r)).collect();
                (bodies, vec![1; deg])
            } else {
                (
                    vec![
                        sample::random_axis_box(dim, r),
                        sample::random_axis_box(dim, r),
                    ],
                    vec![deg - 1, 1],
                )
            }
        };
        let (k_bodies, k_mults) = make_tuple(simplex, &mut r);
        let (l_bodies, l_mults) = make_tuple(false, &mut r);
        let k_slots: Vec<(&Polytope, usize)> =
            k_bodies.iter().zip(&k_mults).map(|(b, &n)| (b, n)).collect();
        let l_slots: Vec<(&Polytope, usize)> =
            l_bodies.iter().zip(&l_mults).map(|(b, &n)| (b, n)).collect();

        // Left: explicit Π_C of the L-tuple, then V(K-tuple, body).
        let body_l = ProjectionBody::of_slots(space, &l_slots, c)?.to_polytope()?;
        let mut full: Vec<(&Polytope, usize)> = k_slots.clone();
        full.push((&body_l, 1));
        let lhs = mixed_volume_slots(dim, &full)?;

        // Right: conjugate facet-sum formula integrated against the mixed
        // area measure of the L-tuple — no polytope is ever built.
        let mk = mixed_area_measure_slots(dim, &k_slots)?;
        let pb_k = ProjectionBody::from_measure(space, mk, &c.conjugate());
        let l_expanded: Vec<&Polytope> = l_slots
            .iter()
            .flat_map(|&(b, n)| std::iter::repeat(b).take(n))
            .collect();
        let rhs = mixed_volume_with_function(&l_expanded, |u| pb_k.support(u))?;
        let residual = rel_residual(lhs, rhs);
        let label = if simplex {
            format!("simplex-in-k-{i}")
        } else {
            format!("box-tuples-{i}")
        };
        instances.push(InstanceReport::identity(label, residual, tol));
    }
    Ok(CheckReport::from_instances(
        "symmetry",
        m,
        c_name,
        seed,
        tol,
        instances,
    ))
}

/// Translating `C` must not change the body: the support shift is linear in
/// `Σ a_i u_i`, which vanishes for closed surface measures.
pub fn check_c_translation(
    m: usize,
    c: &PlanarBody,
    c_name: &str,
    seed: u64,
    count: usize,
    tol: f64,
) -> Result<CheckReport> {
    let space = ComplexSpace::new(m);
    let dim = space.dim();
    let mut r = sample::rng(seed);
    let mut instances = Vec::new();
    for i in 0..count {
        let k = instance_body(dim, i, &mut r)?;
        let (dx, dy) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let shifted = c.translate(dx, dy);
        let pb = ProjectionBody::of_body(space, &k, c)?;
        let pb_t = ProjectionBody::of_body(space, &k, &shifted)?;
        let mut worst = 0.0f64;
        for w in instance_directions(dim, i, Some(&k), &mut r) {
            worst = worst.max(rel_residual(pb.support(&w), pb_t.support(&w)));
        }
        instances.push(InstanceReport::identity(format!("shift-{i}"), worst, tol));
    }
    Ok(CheckReport::from_instances(
        "c-translation",
        m,
        c_name,
        seed,
        tol,
        instances,
    ))
}
