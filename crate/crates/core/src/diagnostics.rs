//! Health checks and stochastic oracles.
//!
//! These are deliberately independent of the exact algorithms: Monte-Carlo
//! volume integrates the facet description; the violation scan tests vertex
//! completeness. Tests use them as cross-checks, and they are cheap enough
//! to run on demand against suspicious inputs.

use rand::Rng;

use crate::polytope::Polytope;
use crate::sample::rng;
use crate::Vector;

/// Monte-Carlo estimate of the volume from the facet description, sampling
/// the vertex bounding box. Standard error is `≈ vol·√((R−1)/(n·f))` with `f`
/// the hit fraction and `R = box/vol`.
pub fn monte_carlo_volume(p: &Polytope, samples: usize, seed: u64) -> f64 {
    assert!(p.is_full_dim(), "volume oracle needs a full-dimensional body");
    let d = p.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for v in p.vertices() {
        for j in 0..d {
            lo[j] = lo[j].min(v[j]);
            hi[j] = hi[j].max(v[j]);
        }
    }
    let box_vol: f64 = (0..d).map(|j| hi[j] - lo[j]).product();
    let mut r = rng(seed);
    let mut hits = 0usize;
    let mut pt = Vector::zeros(d);
    for _ in 0..samples {
        for j in 0..d {
            pt[j] = r.gen_range(lo[j]..=hi[j]);
        }
        if p.contains(&pt, 0.0) {
            hits += 1;
        }
    }
    box_vol * hits as f64 / samples as f64
}

/// Largest violation `⟨u_f, p⟩ − h_f` of any input point against the facet
/// description; at most the hull visibility band for a correct hull.
pub fn max_point_violation(p: &Polytope, points: &[Vector]) -> f64 {
    let mut worst = 0.0_f64;
    for pt in points {
        for f in p.facets() {
            worst = worst.max(f.normal.dot(pt) - f.offset);
        }
    }
    worst
}

/// Support values of the facet description and the vertex description must
/// agree: `max_f` over facets of the H-representation linear program is not
/// run here; instead we check that each facet offset is attained by some
/// vertex and exceeded by none.
pub fn facet_support_defect(p: &Polytope) -> f64 {
    let mut worst = 0.0_f64;
    for f in p.facets() {
        let s = p.support(&f.normal);
        worst = worst.max((s - f.offset).abs());
    }
    worst
}
