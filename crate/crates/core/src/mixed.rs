//! Mixed volumes, mixed area measures, and quermassintegrals.
//!
//! The mixed volume of polytopes `K_1, …, K_d ⊂ R^d` is computed by
//! polarization of the volume:
//!
//! ```text
//! V(K_1, …, K_d) = (1/d!) Σ_{∅≠S⊆[d]} (−1)^{d−|S|} vol(Σ_{i∈S} K_i).
//! ```
//!
//! Repeated bodies are grouped first: a multiset `{(B_j, m_j)}` reduces the
//! `2^d − 1` subsets to `Π_j (m_j+1) − 1` signatures with binomial
//! coefficients, and subset sums become cheap dilations `c_j·B_j`. Mixed
//! area measures polarize the surface area measure the same way one degree
//! lower.
//!
//! Quermassintegrals `W_i(K) = V(K[d−i], B[i])` are evaluated against an
//! inscribed polytopal ball `B_N ⊆ B ⊆ (1+δ_N)·B_N`; monotonicity and
//! multilinearity give the rigorous enclosure `W_i^N ≤ W_i ≤ (1+δ_N)^i W_i^N`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{binomial, factorial};
use crate::measure::{Atom, DiscreteMeasure};
use crate::polytope::Polytope;
use crate::sample::symmetrized_directions;
use crate::{tol, Vector};

/// Multiset entry: a body with its multiplicity.
pub type Slot<'a> = (&'a Polytope, usize);

/// `V(bodies[0], …, bodies[d−1])`; the slice length must equal the ambient
/// dimension.
pub fn mixed_volume(bodies: &[&Polytope]) -> Result<f64> {
    let d = check_family(bodies, None)?;
    let groups = group_identical(bodies);
    mixed_volume_slots(d, &groups)
}

/// Mixed volume from explicit multiplicities.
pub fn mixed_volume_slots(dim: usize, slots: &[Slot]) -> Result<f64> {
    let total: usize = slots.iter().map(|s| s.1).sum();
    if total != dim {
        return Err(Error::ArityMismatch {
            needed: dim,
            got: total,
        });
    }
    for (b, _) in slots {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: b.dim(),
            });
        }
    }
    if slots.len() == 1 {
        return Ok(slots[0].0.volume());
    }

    let boxes = detect_boxes(slots);
    let sigs = signatures(slots);
    let terms: Vec<f64> = sigs
        .par_iter()
        .map(|sig| signed_term(dim, slots, &boxes, sig))
        .collect::<Result<Vec<f64>>>()?;
    let sum: f64 = terms.iter().sum();
    let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
    let v = sum / factorial(dim);
    clamp_negative(v, magnitude / factorial(dim))
}

fn clamp_negative(v: f64, magnitude: f64) -> Result<f64> {
    if v >= 0.0 {
        return Ok(v);
    }
    if -v <= tol::NEGATIVE_CLAMP_REL * magnitude.max(1e-300) {
        Ok(0.0)
    } else {
        Err(Error::NegativeMixedVolume {
            value: v,
            scale: magnitude,
        })
    }
}

type BoxBounds = (Vec<f64>, Vec<f64>);

fn detect_boxes(slots: &[Slot]) -> Vec<Option<BoxBounds>> {
    slots.iter().map(|&(b, _)| b.as_axis_box()).collect()
}

fn signed_term(
    dim: usize,
    slots: &[Slot],
    boxes: &[Option<BoxBounds>],
    sig: &[usize],
) -> Result<f64> {
    let active: Vec<(usize, usize)> = sig
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(j, &c)| (j, c))
        .collect();
    let weight: f64 = sig
        .iter()
        .zip(slots)
        .map(|(&c, &(_, m))| binomial(m, c))
        .product();
    let order: usize = sig.iter().sum();
    let sign = if (dim - order) % 2 == 0 { 1.0 } else { -1.0 };

    let vol = if active.len() == 1 {
        let (j, c) = active[0];
        (c as f64).powi(dim as i32) * slots[j].0.volume()
    } else {
        dilated_sum(dim, slots, boxes, &active)?.volume()
    };
    Ok(sign * weight * vol)
}

/// Minkowski sum `Σ c_j·B_j`. A family of axis boxes sums by intervals with
/// no hull at all; otherwise pairwise vertex sums with re-hulling whenever
/// the point cloud gets large.
fn dilated_sum(
    dim: usize,
    slots: &[Slot],
    boxes: &[Option<BoxBounds>],
    active: &[(usize, usize)],
) -> Result<Polytope> {
    // Fold every axis-box summand into one interval box up front; only the
    // remaining bodies enter the vertex-product accumulation. Besides the
    // obvious all-box shortcut this keeps point clouds small when a tuple
    // mixes one irregular body with several boxes.
    let mut lo = vec![0.0; dim];
    let mut hi = vec![0.0; dim];
    let mut have_box = false;
    let mut generic: Vec<(usize, usize)> = Vec::new();
    for &(j, c) in active {
        match &boxes[j] {
            Some((blo, bhi)) => {
                have_box = true;
                for k in 0..dim {
                    lo[k] += c as f64 * blo[k];
                    hi[k] += c as f64 * bhi[k];
                }
            }
            None => generic.push((j, c)),
        }
    }
    if generic.is_empty() {
        return Polytope::axis_box(&lo, &hi);
    }
    let mut pts: Vec<Vector> = if have_box {
        Polytope::axis_box(&lo, &hi)?.vertices().to_vec()
    } else {
        vec![Vector::zeros(dim)]
    };
    for &(j, c) in &generic {
        let verts = slots[j].0.vertices();
        if pts.len() * verts.len() > tol::REHULL_CAP && pts.len() > dim + 1 {
            pts = Polytope::from_points_allow_degenerate(dim, &pts)?
                .vertices()
                .to_vec();
        }
        let mut next = Vec::with_capacity(pts.len() * verts.len());
        for p in &pts {
            for v in verts {
                next.push(p + v * c as f64);
            }
        }
        pts = next;
    }
    Polytope::from_points_allow_degenerate(dim, &pts)
}

/// Mixed area measure `S(bodies[0], …, bodies[d−2], ·)`; the slice length
/// must be `d−1`.
pub fn mixed_area_measure(bodies: &[&Polytope]) -> Result<DiscreteMeasure> {
    let d = check_family(bodies, Some(1))?;
    let groups = group_identical(bodies);
    mixed_area_measure_slots(d, &groups)
}

/// Mixed area measure from explicit multiplicities (`Σ m_j = d−1`).
pub fn mixed_area_measure_slots(dim: usize, slots: &[Slot]) -> Result<DiscreteMeasure> {
    let total: usize = slots.iter().map(|s| s.1).sum();
    if total + 1 != dim {
        return Err(Error::ArityMismatch {
            needed: dim - 1,
            got: total,
        });
    }
    if slots.len() == 1 {
        return Ok(slots[0].0.surface_area_measure());
    }
    let k = dim - 1;
    let boxes = detect_boxes(slots);
    let sigs = signatures(slots);
    let pieces: Vec<Vec<Atom>> = sigs
        .par_iter()
        .map(|sig| -> Result<Vec<Atom>> {
            let active: Vec<(usize, usize)> = sig
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0)
                .map(|(j, &c)| (j, c))
                .collect();
            let weight: f64 = sig
                .iter()
                .zip(slots)
                .map(|(&c, &(_, m))| binomial(m, c))
                .product();
            let order: usize = sig.iter().sum();
            let sign = if (k - order) % 2 == 0 { 1.0 } else { -1.0 };
            let coeff = sign * weight / factorial(k);
            // S is (d−1)-homogeneous, so a lone dilate needs no hull.
            let measure = if active.len() == 1 {
                let (j, c) = active[0];
                slots[j]
                    .0
                    .surface_area_measure()
                    .scaled((c as f64).powi(dim as i32 - 1))
            } else {
                dilated_sum(dim, slots, &boxes, &active)?.surface_area_measure()
            };
            Ok(measure
                .atoms
                .into_iter()
                .map(|mut a| {
                    a.a *= coeff;
                    a
                })
                .collect())
        })
        .collect::<Result<Vec<Vec<Atom>>>>()?;
    let atoms: Vec<Atom> = pieces.into_iter().flatten().collect();
    DiscreteMeasure::new(dim, atoms).merged()
}

/// `V(bodies[0], …, bodies[d−2], L)` expressed through a support function:
/// `(1/d) ∫ f dS(bodies…)`. With `f = h_L` this is the mixed volume with a
/// body known only through its support values.
pub fn mixed_volume_with_function(
    bodies: &[&Polytope],
    f: impl FnMut(&Vector) -> f64,
) -> Result<f64> {
    let d = check_family(bodies, Some(1))?;
    let measure = mixed_area_measure(bodies)?;
    Ok(measure.integrate(f) / d as f64)
}

fn check_family(bodies: &[&Polytope], offset: Option<usize>) -> Result<usize> {
    let first = bodies.first().ok_or(Error::EmptyInput("no bodies"))?;
    let d = first.dim();
    let needed = d - offset.unwrap_or(0);
    if bodies.len() != needed {
        return Err(Error::ArityMismatch {
            needed,
            got: bodies.len(),
        });
    }
    for b in bodies {
        if b.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: b.dim(),
            });
        }
    }
    Ok(d)
}

/// Group a family by identity (pointer or bitwise-equal vertex lists).
fn group_identical<'a>(bodies: &[&'a Polytope]) -> Vec<Slot<'a>> {
    let mut groups: Vec<Slot<'a>> = Vec::new();
    'outer: for &b in bodies {
        for g in groups.iter_mut() {
            if same_body(g.0, b) {
                g.1 += 1;
                continue 'outer;
            }
        }
        groups.push((b, 1));
    }
    groups
}

fn same_body(a: &Polytope, b: &Polytope) -> bool {
    std::ptr::eq(a, b)
        || (a.dim() == b.dim()
            && a.vertices().len() == b.vertices().len()
            && a.vertices()
                .iter()
                .zip(b.vertices())
                .all(|(x, y)| x.iter().zip(y.iter()).all(|(p, q)| p == q)))
}

/// All signatures `0 ≤ c_j ≤ m_j`, excluding all-zero, in mixed-radix order.
fn signatures(slots: &[Slot]) -> Vec<Vec<usize>> {
    let radix: Vec<usize> = slots.iter().map(|&(_, m)| m + 1).collect();
    let count: usize = radix.iter().product();
    (1..count)
        .map(|mut idx| {
            let mut sig = vec![0usize; radix.len()];
            for (j, &r) in radix.iter().enumerate() {
                sig[j] = idx % r;
                idx /= r;
            }
            sig
        })
        .collect()
}

/// Inscribed polytopal approximation of the unit ball.
///
/// Vertex set: every sign pattern on every nonempty coordinate subset `S`,
/// normalized by `1/√|S|` (the `3^d − 1` points `(Σ_{j∈S} ±e_j)/√|S|`),
/// plus `2d·extra` symmetrized pseudo-random sphere points from a fixed
/// seed. The orbit family covers the sphere far more evenly per vertex
/// than random points do in moderate dimension, which is what keeps the
/// enclosure factor small. All vertices lie on the sphere, so `B_N ⊆ B`;
/// the inradius `r` of `B_N` (minimal facet offset) gives the exact
/// enclosure factor `δ_N = 1/r − 1` with `B ⊆ (1+δ_N)·B_N`.
#[derive(Debug)]
pub struct BallApproximant {
    pub dim: usize,
    pub extra: usize,
    pub body: Polytope,
    pub delta: f64,
}

/// Seed for the pseudo-random ball directions; fixed so that every run of
/// every binary sees the same `B_N`.
const BALL_SEED: u64 = 0xba11;

pub fn ball_approximant(dim: usize, extra: usize) -> Result<Arc<BallApproximant>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<BallApproximant>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(dim, extra)) {
        return Ok(hit.clone());
    }
    let built = Arc::new(build_ball(dim, extra)?);
    cache
        .lock()
        .unwrap()
        .entry((dim, extra))
        .or_insert_with(|| built.clone());
    Ok(built)
}

fn build_ball(dim: usize, extra: usize) -> Result<BallApproximant> {
    // Mixed-radix walk over {−1, 0, +1}^dim, skipping the origin.
    let mut pts = Vec::with_capacity(3usize.pow(dim as u32) - 1);
    for code in 1..3usize.pow(dim as u32) {
        let mut v = Vector::zeros(dim);
        let mut support = 0usize;
        let mut idx = code;
        for k in 0..dim {
            match idx % 3 {
                1 => {
                    v[k] = 1.0;
                    support += 1;
                }
                2 => {
                    v[k] = -1.0;
                    support += 1;
                }
                _ => {}
            }
            idx /= 3;
        }
        pts.push(v / (support as f64).sqrt());
    }
    pts.extend(symmetrized_directions(dim, dim * extra, BALL_SEED));
    let body = Polytope::from_points(dim, &pts)?;
    let inradius = body
        .facets()
        .iter()
        .map(|f| f.offset)
        .fold(f64::INFINITY, f64::min);
    if !(inradius > 0.0) {
        return Err(Error::HullFailure("ball approximant without inradius"));
    }
    Ok(BallApproximant {
        dim,
        extra,
        body,
        delta: 1.0 / inradius - 1.0,
    })
}

/// Value of a quermassintegral with its rigorous enclosure.
#[derive(Debug, Clone, Copy)]
pub struct WiValue {
    /// Value with the polytopal ball `B_N` plugged in.
    pub point: f64,
    /// Lower bound for the true value (equals `point`).
    pub lo: f64,
    /// Upper bound `point·(1+δ_N)^i`.
    pub hi: f64,
}

impl WiValue {
    fn exact(v: f64) -> WiValue {
        WiValue {
            point: v,
            lo: v,
            hi: v,
        }
    }

    fn with_delta(point: f64, delta: f64, i: usize) -> WiValue {
        WiValue {
            point,
            lo: point,
            hi: point * (1.0 + delta).powi(i as i32),
        }
    }
}

/// `W_i(K) = V(K[d−i], B[i])`, evaluated with `B_N` in the ball slots.
///
/// Shortcut routes: `i = 0` is the volume, `i = 1` integrates `h_{B_N}`
/// against the surface measure of `K`, `i = d−1` integrates `h_K` against
/// the surface measure of `B_N`, `i = d` is the ball volume. The remaining
/// cases run the polarization.
pub fn quermassintegral(k: &Polytope, i: usize, ball: &BallApproximant) -> Result<WiValue> {
    let d = k.dim();
    if ball.dim != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: ball.dim,
        });
    }
    if i > d {
        return Err(Error::InvalidInput(format!(
            "quermassintegral index {i} exceeds dimension {d}"
        )));
    }
    if i == 0 {
        return Ok(WiValue::exact(k.volume()));
    }
    let point = if i == d {
        ball.body.volume()
    } else if i == 1 {
        k.surface_area_measure()
            .integrate(|u| ball.body.support(u))
            / d as f64
    } else if i == d - 1 {
        ball.body
            .surface_area_measure()
            .integrate(|u| k.support(u))
            / d as f64
    } else {
        // One ball copy integrates as a support function; only i−1 copies
        // enter the polarization hulls.
        let measure = mixed_area_measure_slots(d, &[(k, d - i), (&ball.body, i - 1)])?;
        measure.integrate(|u| ball.body.support(u)) / d as f64
    };
    Ok(WiValue::with_delta(point, ball.delta, i))
}

/// Mixed form `W_i(K; L) = V(K[d−1−i], B[i], L)` used by the classical
/// Minkowski inequality.
pub fn quermassintegral_pair(
    k: &Polytope,
    l: &Polytope,
    i: usize,
    ball: &BallApproximant,
) -> Result<WiValue> {
    let d = k.dim();
    if i + 1 > d {
        return Err(Error::InvalidInput(format!(
            "mixed quermassintegral index {i} too large for dimension {d}"
        )));
    }
    let point = if i == 0 {
        k.surface_area_measure().integrate(|u| l.support(u)) / d as f64
    } else {
        // Move one ball copy into the support-function slot so that the
        // polarization never hulls sums involving the many-vertex ball
        // polytope; for i = 1 the ball leaves the hull path entirely.
        let mut slots: Vec<Slot> = Vec::new();
        if d - 1 - i > 0 {
            slots.push((k, d - 1 - i));
        }
        if i > 1 {
            slots.push((&ball.body, i - 1));
        }
        slots.push((l, 1));
        let measure = mixed_area_measure_slots(d, &slots)?;
        measure.integrate(|u| ball.body.support(u)) / d as f64
    };
    Ok(WiValue::with_delta(point, ball.delta, i))
}
