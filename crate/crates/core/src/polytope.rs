//! Convex polytopes with derived facet data.
//!
//! A [`Polytope`] stores its vertices in ambient coordinates together with
//! merged facet data (unit outer normal, support offset, surface measure,
//! incident vertices). Facet data is always derived from the vertex set by
//! hull construction, never trusted from input. Lower-dimensional bodies are
//! supported: they carry an [`AffineFrame`] describing their affine hull and
//! have ambient volume zero and no ambient facets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hull::{affine_frame, convex_hull, AffineFrame, RawHull};
use crate::linalg::hyperplane_normal;
use crate::measure::{cluster_unit_directions, Atom, DiscreteMeasure};
use crate::{tol, Matrix, Vector};

/// Facet of a full-dimensional polytope. `vertices` index into
/// [`Polytope::vertices`].
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vector,
    /// Support value `h(P, normal)`.
    pub offset: f64,
    /// `(d−1)`-dimensional surface measure.
    pub measure: f64,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Facet>,
    /// Present exactly when the body is lower-dimensional.
    affine: Option<AffineFrame>,
    /// Dimension of the affine hull.
    inner_dim: usize,
    /// Volume inside the affine hull (`d`-volume when full-dimensional; a
    /// point has inner volume 1 by convention).
    inner_volume: f64,
    /// Point in the relative interior.
    interior: Vector,
    scale: f64,
}

impl Polytope {
    /// Hull of a full-dimensional point set.
    pub fn from_points(dim: usize, points: &[Vector]) -> Result<Polytope> {
        let raw = convex_hull(dim, points)?;
        Ok(Self::from_raw(raw))
    }

    /// Hull of a point set of any affine rank, including single points.
    pub fn from_points_allow_degenerate(dim: usize, points: &[Vector]) -> Result<Polytope> {
        if points.is_empty() {
            return Err(Error::EmptyInput("hull of no points"));
        }
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        let frame = affine_frame(dim, points)?;
        let rank = frame.rank();
        if rank == dim {
            return Self::from_points(dim, points);
        }
        let scale = tol::scale_of(points.iter().flat_map(|p| p.iter().copied()));
        if rank == 0 {
            return Ok(Polytope {
                dim,
                vertices: vec![frame.base.clone()],
                facets: Vec::new(),
                interior: frame.base.clone(),
                affine: Some(frame),
                inner_dim: 0,
                inner_volume: 1.0,
                scale,
            });
        }
        let projected: Vec<Vector> = points.iter().map(|p| frame.project(p)).collect();
        let inner = Polytope::from_points(rank, &projected)?;
        let vertices: Vec<Vector> = inner
            .vertices
            .iter()
            .map(|y| frame.unproject(y))
            .collect();
        let interior = frame.unproject(&inner.interior);
        Ok(Polytope {
            dim,
            vertices,
            facets: Vec::new(),
            interior,
            inner_dim: rank,
            inner_volume: inner.inner_volume,
            affine: Some(frame),
            scale,
        })
    }

    fn from_raw(raw: RawHull) -> Polytope {
        let RawHull {
            dim,
            points,
            facets: simplicial,
            interior,
            scale,
        } = raw;

        // Pyramid decomposition about the interior point: every term is
        // nonnegative, so no cancellation.
        let volume = simplicial
            .iter()
            .map(|f| (f.offset - f.normal.dot(&interior)) * f.measure)
            .sum::<f64>()
            / dim as f64;

        // Vertex set and re-indexing.
        let mut used: Vec<usize> = simplicial.iter().flat_map(|f| f.verts.clone()).collect();
        used.sort_unstable();
        used.dedup();
        let mut remap = vec![usize::MAX; points.len()];
        for (new, &old) in used.iter().enumerate() {
            remap[old] = new;
        }
        let vertices: Vec<Vector> = used.iter().map(|&i| points[i].clone()).collect();

        // Merge coplanar simplicial facets into faces.
        let items: Vec<(Vector, (f64, f64, Vec<usize>))> = simplicial
            .into_iter()
            .map(|f| (f.normal, (f.offset, f.measure, f.verts)))
            .collect();
        let mut facets = Vec::new();
        for cluster in cluster_unit_directions(items, tol::FACET_MERGE_ANGLE) {
            let mut split: Vec<Vec<(Vector, (f64, f64, Vec<usize>))>> = Vec::new();
            for item in cluster {
                // Same normal, different offsets must stay distinct (thin
                // slabs); sub-cluster on the offset.
                let off = item.1 .0;
                match split
                    .iter_mut()
                    .find(|s| (s[0].1 .0 - off).abs() <= tol::FACET_MERGE_OFFSET * scale)
                {
                    Some(s) => s.push(item),
                    None => split.push(vec![item]),
                }
            }
            for group in split {
                let measure: f64 = group.iter().map(|g| g.1 .1).sum();
                let mut normal = Vector::zeros(dim);
                for (n, (_, a, _)) in &group {
                    normal.axpy(a.max(1e-300), n, 1.0);
                }
                let nn = normal.norm();
                if nn == 0.0 {
                    continue;
                }
                normal /= nn;
                let mut verts: Vec<usize> = group
                    .iter()
                    .flat_map(|g| g.1 .2.iter().map(|&v| remap[v]))
                    .collect();
                verts.sort_unstable();
                verts.dedup();
                let offset = verts
                    .iter()
                    .map(|&v| normal.dot(&vertices[v]))
                    .fold(f64::NEG_INFINITY, f64::max);
                facets.push(Facet {
                    normal,
                    offset,
                    measure,
                    vertices: verts,
                });
            }
        }

        Polytope {
            dim,
            vertices,
            facets,
            affine: None,
            inner_dim: dim,
            inner_volume: volume,
            interior,
            scale,
        }
    }

    /// Construct from externally known vertex and facet data.
    ///
    /// Used for bodies with product structure whose combinatorics are exact;
    /// the caller asserts that `vertices` are exactly the extreme points and
    /// `facets` the complete facet list.
    pub(crate) fn from_trusted_parts(
        dim: usize,
        vertices: Vec<Vector>,
        facets: Vec<Facet>,
        interior: Vector,
        volume: f64,
    ) -> Polytope {
        let scale = tol::scale_of(vertices.iter().flat_map(|p| p.iter().copied()));
        Polytope {
            dim,
            vertices,
            facets,
            affine: None,
            inner_dim: dim,
            inner_volume: volume,
            interior,
            scale,
        }
    }

    /// Axis-aligned box `Π_j [lo_j, hi_j]` with exact combinatorics (no hull
    /// pass). Requires `lo_j < hi_j` in every coordinate.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Polytope> {
        let dim = lo.len();
        if hi.len() != dim || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim.max(1),
                got: hi.len(),
            });
        }
        if lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidInput(
                "axis_box needs lo < hi in every coordinate".into(),
            ));
        }
        let side: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| b - a).collect();
        let volume: f64 = side.iter().product();
        let vertices: Vec<Vector> = (0..1usize << dim)
            .map(|mask| {
                Vector::from_iterator(
                    dim,
                    (0..dim).map(|j| if (mask >> j) & 1 == 1 { hi[j] } else { lo[j] }),
                )
            })
            .collect();
        let interior =
            Vector::from_iterator(dim, (0..dim).map(|j| 0.5 * (lo[j] + hi[j])));
        let mut facets = Vec::with_capacity(2 * dim);
        for j in 0..dim {
            let measure: f64 = side
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, s)| s)
                .product();
            for (sign, offset) in [(1.0, hi[j]), (-1.0, -lo[j])] {
                let mut normal = Vector::zeros(dim);
                normal[j] = sign;
                let verts: Vec<usize> = (0..1usize << dim)
                    .filter(|mask| ((mask >> j) & 1 == 1) == (sign > 0.0))
                    .collect();
                facets.push(Facet {
                    normal,
                    offset,
                    measure,
                    vertices: verts,
                });
            }
        }
        Ok(Polytope::from_trusted_parts(
            dim, vertices, facets, interior, volume,
        ))
    }

    /// Recognize an axis-aligned box, returning its interval bounds.
    pub fn as_axis_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if !self.is_full_dim() {
            return None;
        }
        let d = self.dim;
        if self.facets.len() != 2 * d || self.vertices.len() != 1usize << d {
            return None;
        }
        let eps = 1e-12 * self.scale.max(1.0);
        let mut lo = vec![f64::NAN; d];
        let mut hi = vec![f64::NAN; d];
        for f in &self.facets {
            let mut axis = None;
            for j in 0..d {
                let a = f.normal[j].abs();
                if (a - 1.0).abs() <= 1e-12 {
                    if axis.is_some() {
                        return None;
                    }
                    axis = Some(j);
                } else if a > 1e-12 {
                    return None;
                }
            }
            let j = axis?;
            if f.normal[j] > 0.0 {
                hi[j] = f.offset;
            } else {
                lo[j] = -f.offset;
            }
        }
        if lo.iter().any(|x| x.is_nan()) || hi.iter().any(|x| x.is_nan()) {
            return None;
        }
        if lo.iter().zip(&hi).any(|(a, b)| b - a <= eps) {
            return None;
        }
        Some((lo, hi))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn is_full_dim(&self) -> bool {
        self.affine.is_none()
    }

    /// Dimension of the affine hull.
    pub fn affine_rank(&self) -> usize {
        self.inner_dim
    }

    pub fn affine_hull(&self) -> Option<&AffineFrame> {
        self.affine.as_ref()
    }

    /// Ambient volume; zero for lower-dimensional bodies.
    pub fn volume(&self) -> f64 {
        if self.is_full_dim() {
            self.inner_volume
        } else {
            0.0
        }
    }

    /// Volume inside the affine hull.
    pub fn relative_volume(&self) -> f64 {
        self.inner_volume
    }

    pub fn interior_point(&self) -> &Vector {
        &self.interior
    }

    pub fn coordinate_scale(&self) -> f64 {
        self.scale
    }

    /// `h(P, w) = max_v ⟨w, v⟩`.
    pub fn support(&self, w: &Vector) -> f64 {
        self.vertices
            .iter()
            .map(|v| w.dot(v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// A vertex attaining the support value in direction `w`.
    pub fn argsupport(&self, w: &Vector) -> &Vector {
        self.vertices
            .iter()
            .max_by(|a, b| w.dot(a).total_cmp(&w.dot(b)))
            .expect("polytope has vertices")
    }

    /// `‖Σ_i a_i u_i‖ / Σ_i a_i` over the facets. Zero in exact arithmetic
    /// for every full-dimensional polytope.
    pub fn closedness_defect(&self) -> f64 {
        let total: f64 = self.facets.iter().map(|f| f.measure).sum();
        if total == 0.0 {
            return 0.0;
        }
        let mut s = Vector::zeros(self.dim);
        for f in &self.facets {
            s.axpy(f.measure, &f.normal, 1.0);
        }
        s.norm() / total
    }

    /// Membership test against the facet description (full-dimensional
    /// bodies only).
    pub fn contains(&self, p: &Vector, eps: f64) -> bool {
        self.facets
            .iter()
            .all(|f| f.normal.dot(p) <= f.offset + eps)
    }

    /// Surface area measure `S_{d−1}(P, ·)`.
    ///
    /// Full-dimensional: atoms at the facet normals weighted by surface
    /// measure. Rank `d−1`: the two-sided measure `vol_{d−1}(P)(δ_u + δ_{−u})`
    /// with `u` a unit normal of the affine hull. Rank `< d−1`: zero.
    pub fn surface_area_measure(&self) -> DiscreteMeasure {
        if self.is_full_dim() {
            let atoms = self
                .facets
                .iter()
                .map(|f| Atom {
                    u: f.normal.clone(),
                    a: f.measure,
                })
                .collect();
            return DiscreteMeasure::new(self.dim, atoms);
        }
        if self.inner_dim + 1 == self.dim {
            let frame = self.affine.as_ref().unwrap();
            let u = hyperplane_normal(&frame.basis, self.dim, 1e-12)
                .expect("rank d−1 frame has a unique normal direction");
            let atoms = vec![
                Atom {
                    u: u.clone(),
                    a: self.inner_volume,
                },
                Atom {
                    u: -u,
                    a: self.inner_volume,
                },
            ];
            return DiscreteMeasure::new(self.dim, atoms);
        }
        DiscreteMeasure::new(self.dim, Vec::new())
    }

    /// Minkowski sum, via the hull of pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a + b);
            }
        }
        Polytope::from_points_allow_degenerate(self.dim, &pts)
    }

    pub fn translate(&self, t: &Vector) -> Polytope {
        let mut out = self.clone();
        for v in &mut out.vertices {
            *v += t;
        }
        for f in &mut out.facets {
            f.offset += f.normal.dot(t);
        }
        out.interior += t;
        if let Some(fr) = &mut out.affine {
            fr.base += t;
        }
        out.scale = tol::scale_of(out.vertices.iter().flat_map(|p| p.iter().copied()));
        out
    }

    /// Dilation `t·P`; negative `t` reflects through the origin.
    pub fn dilate(&self, t: f64) -> Polytope {
        assert!(t != 0.0, "dilation factor must be nonzero");
        let mut out = self.clone();
        let s = t.abs();
        let k = self.dim as i32 - 1;
        for v in &mut out.vertices {
            *v *= t;
        }
        for f in &mut out.facets {
            if t < 0.0 {
                f.normal = -f.normal.clone();
            }
            f.offset *= s;
            f.measure *= s.powi(k);
        }
        out.interior *= t;
        out.inner_volume *= s.powi(self.inner_dim as i32);
        if let Some(fr) = &mut out.affine {
            fr.base *= t;
            if t < 0.0 {
                for b in &mut fr.basis {
                    *b = -b.clone();
                }
            }
        }
        out.scale *= s;
        out
    }

    /// Image under a linear map (hull of mapped vertices; the image of a
    /// polytope is the hull of its vertex images).
    pub fn linear_image(&self, map: &Matrix) -> Result<Polytope> {
        if map.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: map.ncols(),
            });
        }
        let pts: Vec<Vector> = self.vertices.iter().map(|v| map * v).collect();
        Polytope::from_points_allow_degenerate(map.nrows(), &pts)
    }

    /// Intersection with the halfspace `⟨n, x⟩ ≤ c`.
    ///
    /// Vertices on the admissible side are kept; every segment between a
    /// strictly-inside and a strictly-outside vertex contributes its crossing
    /// point. Crossing points of non-edge pairs lie in the intersection and
    /// are absorbed by the hull. Returns `None` when the intersection is
    /// empty.
    pub fn clip(&self, n: &Vector, c: f64) -> Result<Option<Polytope>> {
        if n.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: n.len(),
            });
        }
        let band = 1e-12 * self.scale * n.norm().max(1e-300);
        let vals: Vec<f64> = self.vertices.iter().map(|v| n.dot(v)).collect();
        let mut pts: Vec<Vector> = Vec::new();
        for (v, &val) in self.vertices.iter().zip(&vals) {
            if val <= c + band {
                pts.push(v.clone());
            }
        }
        for (i, &vi) in vals.iter().enumerate() {
            if vi >= c - band {
                continue;
            }
            for (j, &vj) in vals.iter().enumerate() {
                if vj <= c + band {
                    continue;
                }
                let t = (c - vi) / (vj - vi);
                pts.push(&self.vertices[i] + (&self.vertices[j] - &self.vertices[i]) * t);
            }
        }
        if pts.is_empty() {
            return Ok(None);
        }
        Polytope::from_points_allow_degenerate(self.dim, &pts).map(Some)
    }

    /// Intersection with the hyperplane `⟨n, x⟩ = c` (a section).
    pub fn section(&self, n: &Vector, c: f64) -> Result<Option<Polytope>> {
        let band = 1e-12 * self.scale * n.norm().max(1e-300);
        let vals: Vec<f64> = self.vertices.iter().map(|v| n.dot(v)).collect();
        let mut pts: Vec<Vector> = Vec::new();
        for (v, &val) in self.vertices.iter().zip(&vals) {
            if (val - c).abs() <= band {
                pts.push(v.clone());
            }
        }
        for (i, &vi) in vals.iter().enumerate() {
            if vi >= c - band {
                continue;
            }
            for (j, &vj) in vals.iter().enumerate() {
                if vj <= c + band {
                    continue;
                }
                let t = (c - vi) / (vj - vi);
                pts.push(&self.vertices[i] + (&self.vertices[j] - &self.vertices[i]) * t);
            }
        }
        if pts.is_empty() {
            return Ok(None);
        }
        Polytope::from_points_allow_degenerate(self.dim, &pts).map(Some)
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().copied().collect())
                .collect(),
        }
    }

    /// Rebuild from serialized vertices. Facet data is re-derived, never
    /// deserialized.
    pub fn from_json(j: &PolytopeJson, allow_degenerate: bool) -> Result<Polytope> {
        let pts: Vec<Vector> = j
            .vertices
            .iter()
            .map(|v| Vector::from_column_slice(v))
            .collect();
        if allow_degenerate {
            Polytope::from_points_allow_degenerate(j.dim, &pts)
        } else {
            Polytope::from_points(j.dim, &pts)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}
