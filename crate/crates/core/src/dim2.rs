//! Degree-one contravariant Minkowski valuation in two complex dimensions.
//!
//! For `K ⊂ C²` and `w ∈ C²` the set `det(K, w) = {v₁w₂ − v₂w₁ : v ∈ K}`
//! is a planar convex body, and `h(ZK, w) := μ(det(K, w))` defines a
//! Minkowski valuation for any translation-invariant monotone valuation
//! `μ` of degree one on planar bodies. `Z` is `SL(2,C)`-contravariant —
//! `det(gv, w) = det(g)·det(v, g⁻¹w)` makes the contravariance exact as a
//! set identity — yet `Z` is homogeneous of degree 1 in `K` while every
//! complex projection body has degree `2m − 1 = 3`. The degree gap proves
//! `Z` is not of the form `Π_C`, so the two-dimensional classification is
//! genuinely larger.

use crate::complexes::{ComplexMatrix, ComplexSpace, PlanarBody};
use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::projection::ProjectionBody;
use crate::report::{CheckReport, InstanceReport};
use crate::sample;
use crate::tol::rel_residual;
use crate::Vector;
use rand::Rng;

/// Translation-invariant, monotone, Minkowski-additive valuation of degree
/// one on planar convex bodies: `μ(L) = 2·V₂(L, M) = ∫ h_M dS(L; ·)` for a
/// fixed reference body `M` containing the origin.
#[derive(Debug, Clone)]
pub struct DegreeOneValuation {
    pub reference: PlanarBody,
}

impl Default for DegreeOneValuation {
    /// Reference body: regular 64-gon inscribed in the unit disk, so `μ`
    /// is within 0.3% of the perimeter.
    fn default() -> Self {
        DegreeOneValuation {
            reference: PlanarBody::disk(64),
        }
    }
}

impl DegreeOneValuation {
    pub fn new(reference: PlanarBody) -> Self {
        DegreeOneValuation { reference }
    }

    /// `μ(L) = Σ_edges ℓ_i h_M(n_i)`, exact for polygons. A segment carries
    /// boundary measure on both of its sides; a point has none.
    pub fn apply(&self, l: &PlanarBody) -> f64 {
        let verts = l.vertices();
        match verts.len() {
            0 | 1 => 0.0,
            2 => {
                let e = [verts[1][0] - verts[0][0], verts[1][1] - verts[0][1]];
                let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
                if len == 0.0 {
                    return 0.0;
                }
                let (nx, ny) = (e[1] / len, -e[0] / len);
                len * (self.reference.support(nx, ny) + self.reference.support(-nx, -ny))
            }
            n => {
                // Counterclockwise boundary; outward normal of an edge is
                // the edge vector rotated clockwise.
                let mut s = 0.0;
                for k in 0..n {
                    let v = verts[k];
                    let w = verts[(k + 1) % n];
                    let e = [w[0] - v[0], w[1] - v[1]];
                    let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
                    if len == 0.0 {
                        continue;
                    }
                    s += len * self.reference.support(e[1] / len, -e[0] / len);
                }
                s
            }
        }
    }
}

/// Image of `K` under the complex-linear map `v ↦ det(v, w) = v₁w₂ − v₂w₁`,
/// hulled in the plane. Defined only for two complex dimensions.
pub fn det_body(k: &Polytope, w: &Vector, space: ComplexSpace) -> Result<PlanarBody> {
    if space.dim() != 4 {
        return Err(Error::InvalidInput(
            "the determinant body is defined in two complex dimensions only".into(),
        ));
    }
    if w.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: w.len(),
        });
    }
    let wz = space.complex_coords(w);
    let pts: Vec<[f64; 2]> = k
        .vertices()
        .iter()
        .map(|v| {
            let vz = space.complex_coords(v);
            let d = vz[0] * wz[1] - vz[1] * wz[0];
            [d.re, d.im]
        })
        .collect();
    PlanarBody::from_points(&pts)
}

/// `h(ZK, w) = μ(det(K, w))`.
pub fn z_valuation(
    k: &Polytope,
    w: &Vector,
    mu: &DegreeOneValuation,
    space: ComplexSpace,
) -> Result<f64> {
    Ok(mu.apply(&det_body(k, w, space)?))
}

fn log_log_slope(ts: &[f64], values: &[f64]) -> f64 {
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let num: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let den: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    num / den
}

/// Full certification of the degree-one valuation `Z`: vanishing on
/// points and for `w = 0`, translation invariance, the valuation property
/// under cuts, exact `SL(2,C)`-contravariance (both of the value and of
/// the determinant body as a set), subadditivity in the direction
/// argument, and the homogeneity degrees `1` for `Z` versus `3` for the
/// projection body — the gap that separates the two constructions.
pub fn check_dim2(seed: u64, count: usize, tol: f64) -> Result<CheckReport> {
    let space = ComplexSpace::new(2);
    let dim = space.dim();
    let mu = DegreeOneValuation::default();
    let mut r = sample::rng(seed);
    let mut instances = Vec::new();

    let base = sample::random_polytope(dim, 10, &mut r)?;
    let w0 = sample::random_direction(dim, &mut r);

    // Degenerate inputs: a one-point body and the zero direction both
    // collapse the determinant image to a single point, where μ vanishes.
    let point = Polytope::from_points_allow_degenerate(dim, &[Vector::from_element(dim, 0.7)])?;
    instances.push(InstanceReport::identity(
        "point-body",
        z_valuation(&point, &w0, &mu, space)?.abs(),
        1e-12,
    ));
    instances.push(InstanceReport::identity(
        "zero-direction",
        z_valuation(&base, &Vector::zeros(dim), &mu, space)?.abs(),
        1e-12,
    ));

    // Translation invariance in the body argument: the image translates by
    // the fixed complex number det(x, w) and μ ignores translations.
    {
        let x = sample::random_direction(dim, &mut r) * 1.5;
        let lhs = z_valuation(&base.translate(&x), &w0, &mu, space)?;
        let rhs = z_valuation(&base, &w0, &mu, space)?;
        instances.push(InstanceReport::identity(
            "translation",
            rel_residual(lhs, rhs),
            1e-9,
        ));
    }

    // Valuation property under convex cuts, as for the projection body:
    // Z(M) + Z(M ∩ H) = Z(M ∩ H⁻) + Z(M ∩ H⁺) directionwise.
    for i in 0..count {
        let body = sample::random_polytope(dim, 8 + (i % 4), &mut r)?;
        let n = sample::random_direction(dim, &mut r);
        let hi = body.support(&n);
        let lo = -body.support(&(-&n));
        let t: f64 = r.gen_range(0.3..0.7);
        let off = lo + t * (hi - lo);
        let k = body
            .clip(&n, off)?
            .ok_or(Error::EmptyInput("lower clip"))?;
        let l = body
            .clip(&(-&n), -off)?
            .ok_or(Error::EmptyInput("upper clip"))?;
        let sec = body
            .section(&n, off)?
            .ok_or(Error::EmptyInput("cut section"))?;
        let mut worst = 0.0f64;
        for _ in 0..4 {
            let w = sample::random_direction(dim, &mut r);
            let lhs = z_valuation(&body, &w, &mu, space)? + z_valuation(&sec, &w, &mu, space)?;
            let rhs = z_valuation(&k, &w, &mu, space)? + z_valuation(&l, &w, &mu, space)?;
            worst = worst.max(rel_residual(lhs, rhs));
        }
        instances.push(InstanceReport::identity(
            format!("additivity-{i}"),
            worst,
            1e-8,
        ));
    }

    // Contravariance: exact as sets, so compare both the valuation values
    // and the support functions of the two determinant bodies.
    for i in 0..20 {
        let g = ComplexMatrix::random_sl(2, &mut r);
        let g_inv = g.inverse()?;
        let gk = g.apply_to_polytope(&space, &base)?;
        let w = sample::random_direction(dim, &mut r);
        let wg = g_inv.apply(&space, &w);
        let lhs = z_valuation(&gk, &w, &mu, space)?;
        let rhs = z_valuation(&base, &wg, &mu, space)?;
        let mut res = rel_residual(lhs, rhs);
        let db_l = det_body(&gk, &w, space)?;
        let db_r = det_body(&base, &wg, space)?;
        for j in 0..16 {
            let phi = std::f64::consts::TAU * j as f64 / 16.0;
            res = res.max(rel_residual(
                db_l.support(phi.cos(), phi.sin()),
                db_r.support(phi.cos(), phi.sin()),
            ));
        }
        instances.push(InstanceReport::identity(format!("contra-{i}"), res, tol));
    }

    // Subadditivity of w ↦ h(ZK, w): det(K, w₁+w₂) ⊆ det(K, w₁) + det(K, w₂)
    // pointwise, and μ is monotone and Minkowski additive.
    for i in 0..20 {
        let w1 = sample::random_direction(dim, &mut r);
        let w2 = sample::random_direction(dim, &mut r);
        let lhs = z_valuation(&base, &(&w1 + &w2), &mu, space)?;
        let rhs = z_valuation(&base, &w1, &mu, space)? + z_valuation(&base, &w2, &mu, space)?;
        instances.push(InstanceReport::inequality(
            format!("subadd-{i}"),
            rhs - lhs,
            tol,
        ));
    }

    // Homogeneity degrees over t ∈ {1, 2, 4, 8}: slope 1 for Z, slope 3
    // for the projection body. Matching contravariance with mismatched
    // degree proves Z is not a complex projection body for any C.
    {
        let ts = [1.0, 2.0, 4.0, 8.0];
        let c = PlanarBody::square();
        let mut zs = Vec::new();
        let mut ps = Vec::new();
        for &t in &ts {
            let kt = base.dilate(t);
            zs.push(z_valuation(&kt, &w0, &mu, space)?);
            ps.push(ProjectionBody::of_body(space, &kt, &c)?.support(&w0));
        }
        let z_slope = log_log_slope(&ts, &zs);
        let p_slope = log_log_slope(&ts, &ps);
        instances.push(
            InstanceReport::identity("degree-slope-z", (z_slope - 1.0).abs(), 1e-6).with_note(
                format!("log-log slope {z_slope:.9}; degree one"),
            ),
        );
        instances.push(
            InstanceReport::identity("degree-slope-pb", (p_slope - 3.0).abs(), 1e-6).with_note(
                format!(
                    "log-log slope {p_slope:.9}; degree three = 2m−1, so Z ≠ Π_C for every C"
                ),
            ),
        );
    }

    Ok(CheckReport::from_instances(
        "dim2-degree-one", 2, "disk64-reference", seed, tol, instances,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    #[test]
    fn mu_of_unit_square_is_its_reference_perimeter_integral() {
        // The 64-gon reference has vertices on all four axes, so its
        // support at the square's edge normals is exactly 1 and μ equals
        // the perimeter.
        let mu = DegreeOneValuation::default();
        let square = PlanarBody::square();
        assert!((mu.apply(&square) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn mu_on_segment_counts_both_sides() {
        let mu = DegreeOneValuation::new(PlanarBody::square());
        // Vertical segment of length 2: normals ±e₁ with h_square = 1, 0.
        let seg = PlanarBody::from_points(&[[0.0, -1.0], [0.0, 1.0]]).unwrap();
        assert!((mu.apply(&seg) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mu_is_minkowski_additive() {
        let mu = DegreeOneValuation::default();
        let a = PlanarBody::from_points(&[[0.0, 0.0], [1.0, 0.0], [0.3, 0.8]]).unwrap();
        let b = PlanarBody::from_points(&[[0.0, 0.0], [0.2, -0.5], [-0.4, 0.1], [0.1, 0.4]])
            .unwrap();
        let sum = a.minkowski_sum(&b);
        assert!((mu.apply(&sum) - mu.apply(&a) - mu.apply(&b)).abs() < 1e-12);
    }

    #[test]
    fn det_body_of_a_box_matches_direct_enumeration() {
        let space = ComplexSpace::new(2);
        let k = sample::unit_cube(4);
        let w = vector(&[0.3, -0.1, 0.7, 0.2]);
        let db = det_body(&k, &w, space).unwrap();
        // Every vertex image must lie inside, and the support in a few
        // directions must be attained by some vertex image.
        let wz = space.complex_coords(&w);
        for v in k.vertices() {
            let vz = space.complex_coords(v);
            let d = vz[0] * wz[1] - vz[1] * wz[0];
            assert!(db.support(1.0, 0.0) >= d.re - 1e-12);
            assert!(db.support(0.0, 1.0) >= d.im - 1e-12);
        }
    }

    #[test]
    fn full_certification_passes() {
        let rep = check_dim2(11, 6, 1e-7).unwrap();
        assert!(rep.pass, "{}", serde_json::to_string_pretty(&rep).unwrap());
    }
}
