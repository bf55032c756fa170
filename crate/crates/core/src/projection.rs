//! Complex projection bodies of polytopes.
//!
//! For a polytope `K ⊂ C^m` with surface atoms `(u_i, a_i)` and a planar
//! convex body `C`, the projection body is the finite Minkowski sum
//!
//! ```text
//! Π_C K = (1/2m) Σ_i a_i (C̄·u_i),
//! ```
//!
//! which realizes the defining support identity
//! `h(Π_C K, w) = V(K[2m−1], C·w) = (1/2m) Σ_i a_i h_C(⟨u_i,w⟩, ⟨u_i,Jw⟩)`.
//! Mixed projection bodies replace the surface measure by the mixed area
//! measure of a `(2m−1)`-tuple. The defining mixed volume is also computed
//! directly by polarization as an independent route; tests hold the two
//! paths against each other.
//!
//! When every atom direction is a coordinate axis (axis-aligned boxes and
//! their tuples), the body splits as an orthogonal product of one polygon
//! per complex coordinate plane. The product route gives exact volumes,
//! facets, and vertices without any hull in `R^{2m}`, and is essential for
//! the inequality suites where thousands of these bodies are built.

use crate::complexes::{complex_segment_body, ComplexSpace, PlanarBody};
use crate::error::{Error, Result};
use crate::measure::{Atom, DiscreteMeasure};
use crate::mixed::{mixed_area_measure_slots, mixed_volume_slots, Slot};
use crate::polytope::{Facet, Polytope};
use crate::{tol, Matrix, Vector};
use rayon::prelude::*;

/// One summand of the facet decomposition: weight `a` (from the generating
/// measure, without the `1/2m`) at direction `u`.
#[derive(Debug, Clone)]
pub struct TraceAtom {
    pub u: Vector,
    pub a: f64,
}

/// Explicit projection body together with its facet-sum decomposition.
#[derive(Debug)]
pub struct ProjectionBodyResult {
    pub body: Polytope,
    pub trace: Vec<TraceAtom>,
}

/// Projection body in summand form: generating measure plus the planar body
/// `C`. Support evaluations cost one planar support per atom; the explicit
/// polytope is only built on demand.
#[derive(Debug, Clone)]
pub struct ProjectionBody {
    pub space: ComplexSpace,
    pub c: PlanarBody,
    pub measure: DiscreteMeasure,
}

impl ProjectionBody {
    /// `Π_C K` from the surface area measure of `K`.
    pub fn of_body(space: ComplexSpace, k: &Polytope, c: &PlanarBody) -> Result<ProjectionBody> {
        if k.dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: k.dim(),
            });
        }
        Ok(ProjectionBody {
            space,
            c: c.clone(),
            measure: k.surface_area_measure(),
        })
    }

    /// Mixed body `Π_C(K_1, …, K_{2m−1})` from the mixed area measure.
    pub fn of_family(
        space: ComplexSpace,
        bodies: &[&Polytope],
        c: &PlanarBody,
    ) -> Result<ProjectionBody> {
        if bodies.len() != space.body_degree() {
            return Err(Error::ArityMismatch {
                needed: space.body_degree(),
                got: bodies.len(),
            });
        }
        let measure = crate::mixed::mixed_area_measure(bodies)?;
        Ok(ProjectionBody {
            space,
            c: c.clone(),
            measure,
        })
    }

    /// Mixed body from explicit slot multiplicities.
    pub fn of_slots(space: ComplexSpace, slots: &[Slot], c: &PlanarBody) -> Result<ProjectionBody> {
        let measure = mixed_area_measure_slots(space.dim(), slots)?;
        Ok(ProjectionBody {
            space,
            c: c.clone(),
            measure,
        })
    }

    pub fn from_measure(
        space: ComplexSpace,
        measure: DiscreteMeasure,
        c: &PlanarBody,
    ) -> ProjectionBody {
        ProjectionBody {
            space,
            c: c.clone(),
            measure,
        }
    }

    /// `h(Π, w) = (1/2m) Σ_i a_i h_C(⟨u_i, w⟩, ⟨u_i, Jw⟩)`.
    pub fn support(&self, w: &Vector) -> f64 {
        let jw = self.space.j_apply(w);
        let s: f64 = self
            .measure
            .atoms
            .iter()
            .map(|a| a.a * self.c.support(a.u.dot(w), a.u.dot(&jw)))
            .sum();
        s / self.space.dim() as f64
    }

    pub fn trace(&self) -> Vec<TraceAtom> {
        self.measure
            .atoms
            .iter()
            .map(|a| TraceAtom {
                u: a.u.clone(),
                a: a.a,
            })
            .collect()
    }

    /// Per-plane polygons when the body is an orthogonal product over the
    /// complex coordinate planes, i.e. when every atom direction is `±e_r`.
    fn product_split(&self) -> Option<Vec<PlanarBody>> {
        let m = self.space.m;
        let eps = 1e-10;
        let mut planes: Vec<PlanarBody> = vec![PlanarBody::point(); m];
        let inv = 1.0 / self.space.dim() as f64;
        for atom in &self.measure.atoms {
            let mut axis = None;
            for r in 0..2 * m {
                if (atom.u[r].abs() - 1.0).abs() <= eps {
                    axis = Some(r);
                } else if atom.u[r].abs() > eps {
                    return None;
                }
            }
            let r = axis?;
            let sign = atom.u[r].signum();
            let w = atom.a * inv;
            // Contribution a_k u − b_k Ju expressed in plane coordinates.
            let pts: Vec<[f64; 2]> = self
                .c
                .vertices()
                .iter()
                .map(|v| {
                    let (a, b) = (v[0], v[1]);
                    if r % 2 == 0 {
                        [sign * w * a, -sign * w * b]
                    } else {
                        [sign * w * b, sign * w * a]
                    }
                })
                .collect();
            let piece = PlanarBody::from_points(&pts).expect("atom polygon");
            planes[r / 2] = planes[r / 2].minkowski_sum(&piece);
        }
        Some(planes)
    }

    /// Zonotope generators of the body when `C` is centrally symmetric.
    ///
    /// A centrally symmetric polygon is a sum of segments (one per edge of
    /// either half); each segment `[−p/2, p/2]` maps through an atom to the
    /// segment with direction `(a/2m)(p_1·u − p_2·Ju)`. Translating `C` to
    /// its center only translates the body, so the volume is unaffected.
    fn symmetric_generators(&self) -> Option<Vec<Vector>> {
        let verts = self.c.vertices();
        let n = verts.len();
        let mut planar: Vec<[f64; 2]> = Vec::new();
        if n == 2 {
            planar.push([verts[1][0] - verts[0][0], verts[1][1] - verts[0][1]]);
        } else if n > 2 {
            if n % 2 != 0 {
                return None;
            }
            let (mut cx, mut cy) = (0.0, 0.0);
            for v in verts {
                cx += v[0];
                cy += v[1];
            }
            cx /= n as f64;
            cy /= n as f64;
            let scale = verts
                .iter()
                .map(|v| (v[0] - cx).abs().max((v[1] - cy).abs()))
                .fold(1e-300, f64::max);
            let h = n / 2;
            for k in 0..h {
                let (a, b) = (verts[k], verts[k + h]);
                if ((a[0] - cx) + (b[0] - cx)).abs() > 1e-9 * scale
                    || ((a[1] - cy) + (b[1] - cy)).abs() > 1e-9 * scale
                {
                    return None;
                }
                let next = verts[k + 1];
                planar.push([next[0] - a[0], next[1] - a[1]]);
            }
        }
        let inv = 1.0 / self.space.dim() as f64;
        let mut gens = Vec::with_capacity(self.measure.atoms.len() * planar.len());
        for atom in &self.measure.atoms {
            let ju = self.space.j_apply(&atom.u);
            let w = atom.a * inv;
            for p in &planar {
                gens.push((&atom.u * p[0] - &ju * p[1]) * w);
            }
        }
        Some(gens)
    }

    /// Volume of the body; product and zonotope routes avoid hulls entirely.
    pub fn volume(&self) -> Result<f64> {
        if let Some(planes) = self.product_split() {
            return Ok(planes.iter().map(|p| p.area()).product());
        }
        if let Some(gens) = self.symmetric_generators() {
            return Ok(zonotope_volume(self.space.dim(), &gens));
        }
        Ok(self.to_polytope()?.volume())
    }

    /// Surface area measure of the body.
    pub fn surface_area_measure(&self) -> Result<DiscreteMeasure> {
        if let Some(planes) = self.product_split() {
            if planes.iter().all(|p| p.area() > 0.0) {
                return Ok(product_surface_measure(&self.space, &planes));
            }
        }
        Ok(self.to_polytope()?.surface_area_measure())
    }

    /// Materialize the polytope.
    pub fn to_polytope(&self) -> Result<Polytope> {
        if let Some(planes) = self.product_split() {
            if planes.iter().all(|p| p.area() > 0.0) {
                return Ok(product_polytope(&self.space, &planes));
            }
        }
        let dim = self.space.dim();
        let inv = 1.0 / dim as f64;
        let mut pts: Vec<Vector> = vec![Vector::zeros(dim)];
        for atom in &self.measure.atoms {
            let ju = self.space.j_apply(&atom.u);
            let poly: Vec<Vector> = self
                .c
                .vertices()
                .iter()
                .map(|v| &atom.u * (v[0] * atom.a * inv) - &ju * (v[1] * atom.a * inv))
                .collect();
            if pts.len() * poly.len() > tol::REHULL_CAP && pts.len() > dim + 1 {
                pts = Polytope::from_points_allow_degenerate(dim, &pts)?
                    .vertices()
                    .to_vec();
            }
            let mut next = Vec::with_capacity(pts.len() * poly.len());
            for p in &pts {
                for q in &poly {
                    next.push(p + q);
                }
            }
            pts = next;
        }
        Polytope::from_points_allow_degenerate(dim, &pts)
    }

    pub fn result(&self) -> Result<ProjectionBodyResult> {
        Ok(ProjectionBodyResult {
            body: self.to_polytope()?,
            trace: self.trace(),
        })
    }
}

/// Exact surface measure of an orthogonal product of full-dimensional plane
/// polygons: one atom per polygon edge, weighted by edge length times the
/// areas of the other planes.
fn product_surface_measure(space: &ComplexSpace, planes: &[PlanarBody]) -> DiscreteMeasure {
    let dim = space.dim();
    let areas: Vec<f64> = planes.iter().map(|p| p.area()).collect();
    let mut atoms = Vec::new();
    for (j, poly) in planes.iter().enumerate() {
        let others: f64 = areas
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, a)| a)
            .product();
        let verts = poly.vertices();
        let n = verts.len();
        for k in 0..n {
            let v = verts[k];
            let w = verts[(k + 1) % n];
            let (dx, dy) = (w[0] - v[0], w[1] - v[1]);
            let len = (dx * dx + dy * dy).sqrt();
            if len == 0.0 {
                continue;
            }
            // Outward normal of a CCW edge.
            let mut u = Vector::zeros(dim);
            u[2 * j] = dy / len;
            u[2 * j + 1] = -dx / len;
            atoms.push(Atom {
                u,
                a: len * others,
            });
        }
    }
    DiscreteMeasure::new(dim, atoms)
}

/// Exact polytope of an orthogonal product of full-dimensional polygons:
/// vertices are coordinate products, facets are edge prisms.
fn product_polytope(space: &ComplexSpace, planes: &[PlanarBody]) -> Polytope {
    let dim = space.dim();
    let counts: Vec<usize> = planes.iter().map(|p| p.vertices().len()).collect();
    let total: usize = counts.iter().product();
    let mut strides = vec![1usize; planes.len()];
    for j in 1..planes.len() {
        strides[j] = strides[j - 1] * counts[j - 1];
    }
    let mut vertices = Vec::with_capacity(total);
    for idx in 0..total {
        let mut v = Vector::zeros(dim);
        let mut rest = idx;
        for (j, poly) in planes.iter().enumerate() {
            let k = rest % counts[j];
            rest /= counts[j];
            let p = poly.vertices()[k];
            v[2 * j] = p[0];
            v[2 * j + 1] = p[1];
        }
        vertices.push(v);
    }

    let areas: Vec<f64> = planes.iter().map(|p| p.area()).collect();
    let volume: f64 = areas.iter().product();
    let mut interior = Vector::zeros(dim);
    for (j, poly) in planes.iter().enumerate() {
        let n = poly.vertices().len() as f64;
        let (mut cx, mut cy) = (0.0, 0.0);
        for v in poly.vertices() {
            cx += v[0];
            cy += v[1];
        }
        interior[2 * j] = cx / n;
        interior[2 * j + 1] = cy / n;
    }

    let mut facets = Vec::new();
    for (j, poly) in planes.iter().enumerate() {
        let others: f64 = areas
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, a)| a)
            .product();
        let verts = poly.vertices();
        let n = verts.len();
        for k in 0..n {
            let v = verts[k];
            let w = verts[(k + 1) % n];
            let (dx, dy) = (w[0] - v[0], w[1] - v[1]);
            let len = (dx * dx + dy * dy).sqrt();
            if len == 0.0 {
                continue;
            }
            let mut normal = Vector::zeros(dim);
            normal[2 * j] = dy / len;
            normal[2 * j + 1] = -dx / len;
            let offset = normal[2 * j] * v[0] + normal[2 * j + 1] * v[1];
            // Vertex combos whose plane-j index is an endpoint of this edge.
            let mut fv = Vec::new();
            for idx in 0..total {
                let kk = (idx / strides[j]) % counts[j];
                if kk == k || kk == (k + 1) % n {
                    fv.push(idx);
                }
            }
            facets.push(Facet {
                normal,
                offset,
                measure: len * others,
                vertices: fv,
            });
        }
    }
    Polytope::from_trusted_parts(dim, vertices, facets, interior, volume)
}

/// Volume of `Σ_i [−g_i/2, g_i/2]`: the sum of `|det|` over all `d`-subsets
/// of generators. Parallel generators are merged first, which keeps the
/// subset count small for measures with many antipodal atom pairs.
pub fn zonotope_volume(dim: usize, generators: &[Vector]) -> f64 {
    let mut merged: Vec<(Vector, f64)> = Vec::new();
    for g in generators {
        let len = g.norm();
        if len <= 1e-14 {
            continue;
        }
        let mut u = g / len;
        // Fix an orientation so antiparallel generators land together.
        if let Some(k) = (0..dim).find(|&k| u[k].abs() > 1e-12) {
            if u[k] < 0.0 {
                u = -u;
            }
        }
        match merged.iter_mut().find(|(v, _)| (v - &u).norm() <= 1e-9) {
            Some(entry) => entry.1 += len,
            None => merged.push((u, len)),
        }
    }
    if merged.len() < dim {
        return 0.0;
    }
    let gens: Vec<Vector> = merged.into_iter().map(|(u, l)| u * l).collect();
    let combos = combinations(gens.len(), dim);
    let dets: Vec<f64> = combos
        .par_iter()
        .map(|idx| {
            let mut mat = Matrix::zeros(dim, dim);
            for (col, &i) in idx.iter().enumerate() {
                mat.set_column(col, &gens[i]);
            }
            mat.determinant().abs()
        })
        .collect();
    dets.iter().sum()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut j = k;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if idx[j] < n - (k - j) {
                idx[j] += 1;
                for t in j + 1..k {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `Π_C K` with the explicit body.
pub fn projection_body(
    space: ComplexSpace,
    k: &Polytope,
    c: &PlanarBody,
) -> Result<ProjectionBodyResult> {
    ProjectionBody::of_body(space, k, c)?.result()
}

/// `Π_C(K_1, …, K_{2m−1})` with the explicit body.
pub fn mixed_projection_body(
    space: ComplexSpace,
    bodies: &[&Polytope],
    c: &PlanarBody,
) -> Result<ProjectionBodyResult> {
    ProjectionBody::of_family(space, bodies, c)?.result()
}

/// Independent route to the defining support value:
/// `V(K_1, …, K_{2m−1}, C·w)` by polarization, materializing `C·w`.
pub fn support_via_mixed_volume(
    space: &ComplexSpace,
    slots: &[Slot],
    c: &PlanarBody,
    w: &Vector,
) -> Result<f64> {
    let cw = complex_segment_body(space, c, w)?;
    let mut all: Vec<Slot> = slots.to_vec();
    all.push((&cw, 1));
    mixed_volume_slots(space.dim(), &all)
}
