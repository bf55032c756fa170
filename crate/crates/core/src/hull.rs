//! Convex hull in `R^d` (tested up to `d = 8`) by the incremental
//! beneath-beyond method with outside sets.
//!
//! The algorithm maintains a simplicial facet complex with full adjacency.
//! Unprocessed points are partitioned into per-facet outside sets; each round
//! picks the furthest outside point of some facet, finds the set of facets it
//! sees by breadth-first search, and replaces them with a cone of new facets
//! over the horizon ridges. Points within the visibility band of every facet
//! are treated as interior and never become vertices, which also handles
//! duplicate and coplanar inputs.
//!
//! Facet orientation is decided against a fixed interior reference point (the
//! centroid of the initial simplex), never by the sign of a determinant
//! alone, so near-degenerate cone facets cannot flip outward.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{hyperplane_normal, residual_direction, residual_norm, simplex_facet_measure};
use crate::{tol, Vector};

/// Facet of the simplicial output complex. `verts` index into
/// [`RawHull::points`].
#[derive(Debug, Clone)]
pub struct SimplicialFacet {
    pub verts: Vec<usize>,
    pub normal: Vector,
    pub offset: f64,
    pub measure: f64,
}

/// Result of a full-dimensional hull computation.
#[derive(Debug, Clone)]
pub struct RawHull {
    pub dim: usize,
    /// Deduplicated input points; facet indices refer to this list.
    pub points: Vec<Vector>,
    pub facets: Vec<SimplicialFacet>,
    /// Strictly interior reference point.
    pub interior: Vector,
    /// Coordinate scale used for the tolerance band.
    pub scale: f64,
}

/// Affine span of a point set: `base + span(basis)`, with `basis`
/// orthonormal. `spanning_ids` are indices of points realizing the span.
#[derive(Debug, Clone)]
pub struct AffineFrame {
    pub base: Vector,
    pub basis: Vec<Vector>,
    pub spanning_ids: Vec<usize>,
}

impl AffineFrame {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `p` in the frame.
    pub fn project(&self, p: &Vector) -> Vector {
        let rel = p - &self.base;
        Vector::from_iterator(self.basis.len(), self.basis.iter().map(|q| q.dot(&rel)))
    }

    /// Ambient point for frame coordinates `y`.
    pub fn unproject(&self, y: &Vector) -> Vector {
        let mut p = self.base.clone();
        for (k, q) in self.basis.iter().enumerate() {
            p.axpy(y[k], q, 1.0);
        }
        p
    }
}

/// Remove points that coincide within `tol::POINT_DEDUP` (scaled). Keeps the
/// lexicographically first representative of each cluster; output is sorted.
pub fn dedup_points(points: &[Vector]) -> Vec<Vector> {
    let scale = tol::scale_of(points.iter().flat_map(|p| p.iter().copied()));
    let eps = tol::POINT_DEDUP * scale;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .iter()
            .zip(points[b].iter())
            .find_map(|(x, y)| {
                let c = x.total_cmp(y);
                (c != std::cmp::Ordering::Equal).then_some(c)
            })
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out: Vec<Vector> = Vec::with_capacity(points.len());
    for id in order {
        let p = &points[id];
        let dup = out
            .last()
            .is_some_and(|q| p.iter().zip(q.iter()).all(|(x, y)| (x - y).abs() <= eps));
        if !dup {
            out.push(p.clone());
        }
    }
    out
}

/// Detect the affine span of `points` with rank tolerance
/// `tol::AFFINE_RANK` (scaled). The base point is the lexicographic minimum.
pub fn affine_frame(dim: usize, points: &[Vector]) -> Result<AffineFrame> {
    if points.is_empty() {
        return Err(Error::EmptyInput("affine_frame of no points"));
    }
    let scale = tol::scale_of(points.iter().flat_map(|p| p.iter().copied()));
    let eps = tol::AFFINE_RANK * scale;
    let base_id = (0..points.len())
        .min_by(|&a, &b| {
            points[a]
                .iter()
                .zip(points[b].iter())
                .find_map(|(x, y)| {
                    let c = x.total_cmp(y);
                    (c != std::cmp::Ordering::Equal).then_some(c)
                })
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    let base = points[base_id].clone();
    let mut basis: Vec<Vector> = Vec::new();
    let mut spanning = vec![base_id];
    while basis.len() < dim {
        let mut best = (0.0_f64, usize::MAX);
        for (id, p) in points.iter().enumerate() {
            let r = residual_norm(&basis, &(p - &base));
            if r > best.0 {
                best = (r, id);
            }
        }
        if best.0 <= eps {
            break;
        }
        let dir = residual_direction(&basis, &(&points[best.1] - &base), eps)
            .ok_or(Error::HullFailure("rank detection inconsistency"))?;
        basis.push(dir);
        spanning.push(best.1);
    }
    Ok(AffineFrame {
        base,
        basis,
        spanning_ids: spanning,
    })
}

struct BuildFacet {
    verts: Vec<usize>,
    /// `neighbors[k]` lies across the ridge omitting `verts[k]`.
    neighbors: Vec<usize>,
    normal: Vector,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl BuildFacet {
    fn dist(&self, p: &Vector) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Full-dimensional convex hull. Fails with [`Error::DegenerateInput`] when
/// the points do not span `R^d`; lower-dimensional inputs are handled by the
/// caller via [`affine_frame`].
pub fn convex_hull(dim: usize, input: &[Vector]) -> Result<RawHull> {
    for p in input {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
    }
    let points = dedup_points(input);
    if points.is_empty() {
        return Err(Error::EmptyInput("hull of no points"));
    }
    let scale = tol::scale_of(points.iter().flat_map(|p| p.iter().copied()));
    if dim == 1 {
        return hull_1d(points, scale);
    }

    let frame = affine_frame(dim, &points)?;
    if frame.rank() < dim {
        return Err(Error::DegenerateInput {
            affine_dim: frame.rank(),
            ambient_dim: dim,
        });
    }

    let vis_eps = tol::HULL_VISIBLE * scale;
    let plane_eps = tol::AFFINE_RANK * scale;

    // Initial simplex over the rank-detecting points.
    let simplex = frame.spanning_ids.clone();
    let mut interior = Vector::zeros(dim);
    for &id in &simplex {
        interior += &points[id];
    }
    interior /= simplex.len() as f64;

    let mut facets: Vec<BuildFacet> = Vec::new();
    for i in 0..simplex.len() {
        let verts: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &id)| id)
            .collect();
        let (normal, offset) =
            oriented_hyperplane(&points, &verts, &interior, plane_eps, scale)?;
        let neighbors: Vec<usize> = verts
            .iter()
            .map(|v| simplex.iter().position(|s| s == v).unwrap())
            .collect();
        facets.push(BuildFacet {
            verts,
            neighbors,
            normal,
            offset,
            outside: Vec::new(),
            alive: true,
        });
    }

    // Partition the remaining points into outside sets.
    let in_simplex = |id: usize| simplex.contains(&id);
    for id in 0..points.len() {
        if in_simplex(id) {
            continue;
        }
        for f in facets.iter_mut() {
            if f.dist(&points[id]) > vis_eps {
                f.outside.push(id);
                break;
            }
        }
    }

    let mut work: Vec<usize> = (0..facets.len())
        .filter(|&f| !facets[f].outside.is_empty())
        .collect();
    let mut stamp: Vec<u64> = vec![0; facets.len()];
    let mut round: u64 = 0;

    while let Some(fid) = work.pop() {
        if !facets[fid].alive || facets[fid].outside.is_empty() {
            continue;
        }
        round += 1;
        let apex = *facets[fid]
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                facets[fid]
                    .dist(&points[a])
                    .total_cmp(&facets[fid].dist(&points[b]))
            })
            .unwrap();
        let apex_pt = points[apex].clone();

        // Breadth-first search of the facets visible from the apex.
        let mut visible = vec![fid];
        stamp.resize(facets.len(), 0);
        stamp[fid] = round;
        let mut head = 0;
        while head < visible.len() {
            let g = visible[head];
            head += 1;
            for k in 0..dim {
                let nb = facets[g].neighbors[k];
                if stamp[nb] == round || !facets[nb].alive {
                    continue;
                }
                if facets[nb].dist(&apex_pt) > vis_eps {
                    stamp[nb] = round;
                    visible.push(nb);
                }
            }
        }

        // Horizon: ridges between a visible facet and a hidden neighbor.
        // Each candidate cone facet gets its hyperplane computed up front;
        // if a ridge degenerates when coned to the apex (the apex lies in
        // the ridge's affine hull), the hidden neighbor is coplanar with
        // the cone, so absorb it into the visible set and rescan. No facet
        // links are mutated until the whole horizon validates.
        let mut horizon: Vec<(usize, usize, Vec<usize>, Vector, f64)> = Vec::new();
        'horizon: loop {
            horizon.clear();
            let mut vi = 0;
            while vi < visible.len() {
                let g = visible[vi];
                vi += 1;
                for k in 0..dim {
                    let nb = facets[g].neighbors[k];
                    if stamp[nb] == round {
                        continue;
                    }
                    let ridge: Vec<usize> = facets[g]
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, &v)| v)
                        .collect();
                    let back = facets[nb]
                        .neighbors
                        .iter()
                        .position(|&x| x == g)
                        .ok_or(Error::HullFailure("adjacency out of sync"))?;
                    let mut cone = ridge.clone();
                    cone.push(apex);
                    match oriented_hyperplane(&points, &cone, &interior, plane_eps, scale) {
                        Ok((normal, offset)) => horizon.push((nb, back, ridge, normal, offset)),
                        Err(_) => {
                            stamp[nb] = round;
                            visible.push(nb);
                            continue 'horizon;
                        }
                    }
                }
            }
            break;
        }
        if horizon.is_empty() {
            return Err(Error::HullFailure("apex sees every facet"));
        }

        // Cone of new facets over the horizon.
        let first_new = facets.len();
        let mut ridge_slots: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for (hidden, back_slot, ridge, normal, offset) in horizon {
            let mut verts = ridge;
            verts.push(apex);
            let nf = facets.len();
            let mut neighbors = vec![usize::MAX; dim];
            neighbors[dim - 1] = hidden;
            facets[hidden].neighbors[back_slot] = nf;
            for slot in 0..verts.len() - 1 {
                let v = verts[slot];
                let mut key: Vec<usize> = verts
                    .iter()
                    .copied()
                    .filter(|&x| x != v)
                    .collect();
                key.sort_unstable();
                match ridge_slots.remove(&key) {
                    None => {
                        ridge_slots.insert(key, (nf, slot));
                    }
                    Some((other, oslot)) => {
                        neighbors[slot] = other;
                        facets[other].neighbors[oslot] = nf;
                    }
                }
            }
            facets.push(BuildFacet {
                verts,
                neighbors,
                normal,
                offset,
                outside: Vec::new(),
                alive: true,
            });
        }
        if !ridge_slots.is_empty() {
            return Err(Error::HullFailure("open horizon"));
        }
        for nf in first_new..facets.len() {
            if facets[nf].neighbors.iter().any(|&x| x == usize::MAX) {
                return Err(Error::HullFailure("unwired cone facet"));
            }
        }

        // Re-home the outside points of the deleted facets.
        let mut orphans: Vec<usize> = Vec::new();
        for &g in &visible {
            orphans.extend(facets[g].outside.drain(..));
            facets[g].alive = false;
        }
        for id in orphans {
            if id == apex {
                continue;
            }
            for nf in first_new..facets.len() {
                if facets[nf].dist(&points[id]) > vis_eps {
                    facets[nf].outside.push(id);
                    break;
                }
            }
        }
        for nf in first_new..facets.len() {
            if !facets[nf].outside.is_empty() {
                work.push(nf);
            }
        }
    }

    let simplicial: Vec<SimplicialFacet> = facets
        .iter()
        .filter(|f| f.alive)
        .map(|f| {
            let vs: Vec<Vector> = f.verts.iter().map(|&v| points[v].clone()).collect();
            SimplicialFacet {
                verts: f.verts.clone(),
                normal: f.normal.clone(),
                offset: f.offset,
                measure: simplex_facet_measure(&vs),
            }
        })
        .collect();
    Ok(RawHull {
        dim,
        points,
        facets: simplicial,
        interior,
        scale,
    })
}

fn hull_1d(points: Vec<Vector>, scale: f64) -> Result<RawHull> {
    let lo = points
        .iter()
        .enumerate()
        .min_by(|a, b| a.1[0].total_cmp(&b.1[0]))
        .map(|(i, _)| i)
        .unwrap();
    let hi = points
        .iter()
        .enumerate()
        .max_by(|a, b| a.1[0].total_cmp(&b.1[0]))
        .map(|(i, _)| i)
        .unwrap();
    if (points[hi][0] - points[lo][0]).abs() <= tol::AFFINE_RANK * scale {
        return Err(Error::DegenerateInput {
            affine_dim: 0,
            ambient_dim: 1,
        });
    }
    let interior = Vector::from_element(1, 0.5 * (points[lo][0] + points[hi][0]));
    let facets = vec![
        SimplicialFacet {
            verts: vec![hi],
            normal: Vector::from_element(1, 1.0),
            offset: points[hi][0],
            measure: 1.0,
        },
        SimplicialFacet {
            verts: vec![lo],
            normal: Vector::from_element(1, -1.0),
            offset: -points[lo][0],
            measure: 1.0,
        },
    ];
    Ok(RawHull {
        dim: 1,
        points,
        facets,
        interior,
        scale,
    })
}

/// Hyperplane through the points `verts`, oriented so the interior reference
/// lies strictly below.
fn oriented_hyperplane(
    points: &[Vector],
    verts: &[usize],
    interior: &Vector,
    plane_eps: f64,
    scale: f64,
) -> Result<(Vector, f64)> {
    let dim = interior.len();
    let p0 = &points[verts[0]];
    let edges: Vec<Vector> = verts[1..].iter().map(|&v| &points[v] - p0).collect();
    let mut normal = hyperplane_normal(&edges, dim, plane_eps)
        .ok_or(Error::HullFailure("degenerate facet hyperplane"))?;
    let mut offset =
        verts.iter().map(|&v| normal.dot(&points[v])).sum::<f64>() / verts.len() as f64;
    let side = normal.dot(interior) - offset;
    if side.abs() <= 1e-13 * scale {
        return Err(Error::HullFailure("interior point lies on a facet plane"));
    }
    if side > 0.0 {
        normal = -normal;
        offset = -offset;
    }
    Ok((normal, offset))
}
