//! The complex structure on `R^{2m}` and the planar bodies that act on it.
//!
//! `C^m` is identified with `R^{2m}` through interleaved coordinates
//! `(x_1, y_1, …, x_m, y_m)` with `z_j = x_j + i y_j`. Multiplication by `i`
//! is the block-diagonal map `J` with `J e_{2j−1} = e_{2j}`,
//! `J e_{2j} = −e_{2j−1}` (1-based). A complex matrix `g` acts through its
//! realification `R(g)`, built from `2×2` blocks `[[a, −b], [b, a]]` per
//! entry `a + bi`; then `R(g*) = R(g)^T` and `det R(g) = |det_C g|²`.
//!
//! A convex body `C ⊂ C` is kept as a planar polygon. For `w ∈ C^m` the
//! segment body `C·w = {c·w : c ∈ C}` is the planar polytope with vertices
//! `a_k w + b_k Jw`; its support function is
//! `h(C·w, ξ) = h_C(⟨ξ, w⟩, ⟨ξ, Jw⟩)`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::{Matrix, Vector};

/// The standard complex structure on `R^{2m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexSpace {
    pub m: usize,
}

impl ComplexSpace {
    pub fn new(m: usize) -> Self {
        ComplexSpace { m }
    }

    /// Real dimension `2m`.
    pub fn dim(&self) -> usize {
        2 * self.m
    }

    /// Degree of the projection body construction, `2m − 1`.
    pub fn body_degree(&self) -> usize {
        2 * self.m - 1
    }

    /// `J v` (multiplication by `i`).
    pub fn j_apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zeros(v.len());
        for j in 0..self.m {
            out[2 * j] = -v[2 * j + 1];
            out[2 * j + 1] = v[2 * j];
        }
        out
    }

    pub fn complex_coords(&self, v: &Vector) -> Vec<Complex64> {
        (0..self.m)
            .map(|j| Complex64::new(v[2 * j], v[2 * j + 1]))
            .collect()
    }

    pub fn from_complex_coords(&self, z: &[Complex64]) -> Vector {
        let mut v = Vector::zeros(self.dim());
        for (j, c) in z.iter().enumerate() {
            v[2 * j] = c.re;
            v[2 * j + 1] = c.im;
        }
        v
    }
}

/// Convex polygon in the plane, vertices in counterclockwise order.
/// Degenerate bodies (segment, point) are allowed and keep 2 or 1 vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarBody {
    verts: Vec<[f64; 2]>,
}

impl PlanarBody {
    pub fn from_points(pts: &[[f64; 2]]) -> Result<PlanarBody> {
        if pts.is_empty() {
            return Err(Error::EmptyInput("planar body of no points"));
        }
        Ok(PlanarBody {
            verts: planar_hull(pts),
        })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.verts
    }

    /// `h_C(a, b) = max_{(x,y)∈C} (ax + by)`.
    pub fn support(&self, a: f64, b: f64) -> f64 {
        self.verts
            .iter()
            .map(|v| a * v[0] + b * v[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn area(&self) -> f64 {
        if self.verts.len() < 3 {
            return 0.0;
        }
        let mut s = 0.0;
        for (k, v) in self.verts.iter().enumerate() {
            let w = &self.verts[(k + 1) % self.verts.len()];
            s += v[0] * w[1] - v[1] * w[0];
        }
        0.5 * s
    }

    /// Boundary length; a segment counts both sides, so the perimeter of a
    /// segment of length `ℓ` is `2ℓ` and of a point is 0.
    pub fn perimeter(&self) -> f64 {
        match self.verts.len() {
            0 | 1 => 0.0,
            2 => {
                let d0 = self.verts[1][0] - self.verts[0][0];
                let d1 = self.verts[1][1] - self.verts[0][1];
                2.0 * (d0 * d0 + d1 * d1).sqrt()
            }
            n => (0..n)
                .map(|k| {
                    let v = self.verts[k];
                    let w = self.verts[(k + 1) % n];
                    ((w[0] - v[0]).powi(2) + (w[1] - v[1]).powi(2)).sqrt()
                })
                .sum(),
        }
    }

    /// Complex conjugation `C̄ = {c̄ : c ∈ C}`.
    pub fn conjugate(&self) -> PlanarBody {
        let pts: Vec<[f64; 2]> = self.verts.iter().map(|v| [v[0], -v[1]]).collect();
        PlanarBody::from_points(&pts).expect("conjugate of a nonempty body")
    }

    pub fn translate(&self, dx: f64, dy: f64) -> PlanarBody {
        let pts: Vec<[f64; 2]> = self.verts.iter().map(|v| [v[0] + dx, v[1] + dy]).collect();
        PlanarBody { verts: pts }
    }

    /// Multiplication by the complex scalar `c = a + bi` (rotation and
    /// scaling).
    pub fn complex_scale(&self, a: f64, b: f64) -> PlanarBody {
        let pts: Vec<[f64; 2]> = self
            .verts
            .iter()
            .map(|v| [a * v[0] - b * v[1], b * v[0] + a * v[1]])
            .collect();
        PlanarBody::from_points(&pts).expect("scaled body")
    }

    pub fn minkowski_sum(&self, other: &PlanarBody) -> PlanarBody {
        let mut pts = Vec::with_capacity(self.verts.len() * other.verts.len());
        for a in &self.verts {
            for b in &other.verts {
                pts.push([a[0] + b[0], a[1] + b[1]]);
            }
        }
        PlanarBody::from_points(&pts).expect("sum of nonempty bodies")
    }

    pub fn max_abs(&self) -> f64 {
        self.verts
            .iter()
            .map(|v| (v[0] * v[0] + v[1] * v[1]).sqrt())
            .fold(0.0, f64::max)
    }

    /// Contains the origin in its (relative) interior.
    pub fn is_degenerate(&self) -> bool {
        self.verts.len() < 3
    }

    /// The point `{0}`.
    pub fn point() -> PlanarBody {
        PlanarBody {
            verts: vec![[0.0, 0.0]],
        }
    }

    /// The real segment `[−1, 1] × {0}`.
    pub fn segment() -> PlanarBody {
        PlanarBody {
            verts: vec![[-1.0, 0.0], [1.0, 0.0]],
        }
    }

    /// The unit square `[0, 1]²`.
    pub fn square() -> PlanarBody {
        PlanarBody {
            verts: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        }
    }

    /// Regular `n`-gon inscribed in the unit disk, first vertex at `1`.
    pub fn disk(n: usize) -> PlanarBody {
        let verts: Vec<[f64; 2]> = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        PlanarBody { verts }
    }

    pub fn to_json(&self) -> PlanarBodyJson {
        PlanarBodyJson {
            vertices: self.verts.clone(),
        }
    }

    pub fn from_json(j: &PlanarBodyJson) -> Result<PlanarBody> {
        PlanarBody::from_points(&j.vertices)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanarBodyJson {
    pub vertices: Vec<[f64; 2]>,
}

/// Andrew's monotone chain; collinear points are dropped.
fn planar_hull(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let scale = pts
        .iter()
        .flat_map(|p| p.iter())
        .fold(1.0_f64, |s, &x| s.max(x.abs()));
    let dedup_eps = 1e-12 * scale;
    let cross_eps = 1e-12 * scale * scale;
    let mut sorted: Vec<[f64; 2]> = pts.to_vec();
    sorted.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    sorted.dedup_by(|a, b| (a[0] - b[0]).abs() <= dedup_eps && (a[1] - b[1]).abs() <= dedup_eps);
    if sorted.len() <= 2 {
        return sorted;
    }
    let cross = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for p in &sorted {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= cross_eps
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for p in sorted.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= cross_eps
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 2 {
        // All points collinear-reduced; fall back to the extreme pair.
        return vec![sorted[0], sorted[sorted.len() - 1]];
    }
    lower
}

/// `m × m` complex matrix acting on `C^m`.
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    pub m: usize,
    pub mat: nalgebra::DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn identity(m: usize) -> Self {
        ComplexMatrix {
            m,
            mat: nalgebra::DMatrix::identity(m, m),
        }
    }

    pub fn from_entries(m: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != m * m {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                m * m,
                entries.len()
            )));
        }
        Ok(ComplexMatrix {
            m,
            mat: nalgebra::DMatrix::from_row_iterator(m, m, entries),
        })
    }

    /// Diagonal scalar matrix `c·I`.
    pub fn scalar(m: usize, c: Complex64) -> Self {
        ComplexMatrix {
            m,
            mat: nalgebra::DMatrix::from_diagonal_element(m, m, c),
        }
    }

    pub fn det(&self) -> Complex64 {
        self.mat.clone().lu().determinant()
    }

    /// Conjugate transpose `g*`.
    pub fn adjoint(&self) -> Self {
        ComplexMatrix {
            m: self.m,
            mat: self.mat.adjoint(),
        }
    }

    /// Entrywise conjugate `ḡ`.
    pub fn conjugate(&self) -> Self {
        ComplexMatrix {
            m: self.m,
            mat: self.mat.map(|z| z.conj()),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        self.mat
            .clone()
            .try_inverse()
            .map(|mat| ComplexMatrix { m: self.m, mat })
            .ok_or(Error::SingularMatrix)
    }

    /// `g^{−*} = (g^{−1})*`, the contragredient.
    pub fn inv_adjoint(&self) -> Result<Self> {
        Ok(self.inverse()?.adjoint())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            m: self.m,
            mat: &self.mat * &other.mat,
        }
    }

    /// Realification `R(g) ∈ R^{2m×2m}` in interleaved coordinates.
    pub fn realification(&self) -> Matrix {
        let m = self.m;
        let mut out = Matrix::zeros(2 * m, 2 * m);
        for j in 0..m {
            for k in 0..m {
                let z = self.mat[(j, k)];
                out[(2 * j, 2 * k)] = z.re;
                out[(2 * j, 2 * k + 1)] = -z.im;
                out[(2 * j + 1, 2 * k)] = z.im;
                out[(2 * j + 1, 2 * k + 1)] = z.re;
            }
        }
        out
    }

    /// Apply to a realified vector.
    pub fn apply(&self, space: &ComplexSpace, v: &Vector) -> Vector {
        let z = space.complex_coords(v);
        let zv = nalgebra::DVector::from_vec(z);
        let out = &self.mat * zv;
        space.from_complex_coords(out.as_slice())
    }

    /// Image `g·K` of a polytope under the realified action.
    pub fn apply_to_polytope(&self, space: &ComplexSpace, p: &Polytope) -> Result<Polytope> {
        let pts: Vec<Vector> = p.vertices().iter().map(|v| self.apply(space, v)).collect();
        Polytope::from_points_allow_degenerate(space.dim(), &pts)
    }

    /// Random element of `SL(m, C)`: Gaussian entries normalized by the
    /// principal `m`-th root of the determinant. Resamples near-singular
    /// draws.
    pub fn random_sl(m: usize, r: &mut impl Rng) -> ComplexMatrix {
        loop {
            let entries: Vec<Complex64> = (0..m * m)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(r);
                    let im: f64 = StandardNormal.sample(r);
                    Complex64::new(re, im) / 2.0_f64.sqrt()
                })
                .collect();
            let g = ComplexMatrix::from_entries(m, entries).unwrap();
            let det = g.det();
            if det.norm() < 1e-6 {
                continue;
            }
            let root = det.powf(1.0 / m as f64);
            let g = ComplexMatrix {
                m,
                mat: g.mat.map(|z| z / root),
            };
            if (g.det() - Complex64::new(1.0, 0.0)).norm() < 1e-9 {
                return g;
            }
        }
    }

    pub fn to_json(&self) -> ComplexMatrixJson {
        let re = (0..self.m)
            .map(|j| (0..self.m).map(|k| self.mat[(j, k)].re).collect())
            .collect();
        let im = (0..self.m)
            .map(|j| (0..self.m).map(|k| self.mat[(j, k)].im).collect())
            .collect();
        ComplexMatrixJson { m: self.m, re, im }
    }

    pub fn from_json(j: &ComplexMatrixJson) -> Result<ComplexMatrix> {
        let m = j.m;
        if j.re.len() != m || j.im.len() != m {
            return Err(Error::InvalidInput("matrix rows do not match m".into()));
        }
        let mut entries = Vec::with_capacity(m * m);
        for (rrow, irow) in j.re.iter().zip(&j.im) {
            if rrow.len() != m || irow.len() != m {
                return Err(Error::InvalidInput("matrix cols do not match m".into()));
            }
            for (&a, &b) in rrow.iter().zip(irow) {
                entries.push(Complex64::new(a, b));
            }
        }
        ComplexMatrix::from_entries(m, entries)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexMatrixJson {
    pub m: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// The planar polytope `C·w ⊂ R^{2m}` with vertices `a_k w + b_k Jw`.
pub fn complex_segment_body(
    space: &ComplexSpace,
    c: &PlanarBody,
    w: &Vector,
) -> Result<Polytope> {
    if w.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: w.len(),
        });
    }
    let jw = space.j_apply(w);
    let pts: Vec<Vector> = c
        .vertices()
        .iter()
        .map(|v| w * v[0] + &jw * v[1])
        .collect();
    Polytope::from_points_allow_degenerate(space.dim(), &pts)
}

/// `h(C·w, ξ) = h_C(⟨ξ, w⟩, ⟨ξ, Jw⟩)` without building the body.
pub fn segment_body_support(
    space: &ComplexSpace,
    c: &PlanarBody,
    w: &Vector,
    xi: &Vector,
) -> f64 {
    let jw = space.j_apply(w);
    c.support(xi.dot(w), xi.dot(&jw))
}

/// Vertices of `C̄·u = {c̄ u : c ∈ C}`, namely `a_k u − b_k Ju`.
pub fn conjugate_orbit_points(space: &ComplexSpace, c: &PlanarBody, u: &Vector) -> Vec<Vector> {
    let ju = space.j_apply(u);
    c.vertices().iter().map(|v| u * v[0] - &ju * v[1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::rng;
    use crate::vector;

    #[test]
    fn j_squares_to_minus_identity() {
        let s = ComplexSpace::new(3);
        let v = vector(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let jj = s.j_apply(&s.j_apply(&v));
        assert!((jj + &v).norm() < 1e-15);
    }

    #[test]
    fn realification_is_a_homomorphism_and_respects_adjoint() {
        let mut r = rng(7);
        let s = ComplexSpace::new(3);
        let g = ComplexMatrix::random_sl(3, &mut r);
        let h = ComplexMatrix::random_sl(3, &mut r);
        let lhs = g.mul(&h).realification();
        let rhs = g.realification() * h.realification();
        assert!((lhs - rhs).norm() < 1e-12);
        let adj = g.adjoint().realification();
        let tr = g.realification().transpose();
        assert!((adj - tr).norm() < 1e-12);
        // R(g) commutes with J.
        let jm = {
            let mut jm = Matrix::zeros(6, 6);
            for j in 0..3 {
                jm[(2 * j, 2 * j + 1)] = -1.0;
                jm[(2 * j + 1, 2 * j)] = 1.0;
            }
            jm
        };
        let rg = g.realification();
        assert!((&rg * &jm - &jm * &rg).norm() < 1e-12);
        let _ = s;
    }

    #[test]
    fn real_determinant_is_squared_modulus() {
        let mut r = rng(11);
        for m in [2usize, 3] {
            let g = ComplexMatrix::random_sl(m, &mut r);
            let dr = g.realification().determinant();
            let dc = g.det().norm();
            assert!((dr - dc * dc).abs() < 1e-9, "det mismatch: {dr} vs {}", dc * dc);
        }
    }

    #[test]
    fn planar_support_of_builtins() {
        let sq = PlanarBody::square();
        assert_eq!(sq.support(1.0, 0.0), 1.0);
        assert_eq!(sq.support(-1.0, 0.0), 0.0);
        assert_eq!(sq.support(1.0, 1.0), 2.0);
        assert!((sq.area() - 1.0).abs() < 1e-15);
        let seg = PlanarBody::segment();
        assert_eq!(seg.support(2.0, 5.0), 2.0);
        assert_eq!(seg.area(), 0.0);
        let disk = PlanarBody::disk(64);
        assert!((disk.support(0.6, -0.8) - 1.0).abs() < 2e-3);
        assert!((disk.perimeter() - 2.0 * std::f64::consts::PI).abs() < 7e-3);
    }

    #[test]
    fn planar_hull_handles_collinear_and_duplicate_points() {
        let b = PlanarBody::from_points(&[
            [0.0, 0.0],
            [1.0, 1.0],
            [2.0, 2.0],
            [1.0, 1.0],
            [0.5, 0.5],
        ])
        .unwrap();
        assert_eq!(b.vertices().len(), 2);
        assert!((b.support(1.0, 1.0) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn segment_body_support_matches_polytope() {
        let s = ComplexSpace::new(2);
        let c = PlanarBody::square();
        let mut r = rng(3);
        for _ in 0..20 {
            let w = crate::sample::random_direction(4, &mut r) * 1.3;
            let xi = crate::sample::random_direction(4, &mut r);
            let body = complex_segment_body(&s, &c, &w).unwrap();
            let direct = body.support(&xi);
            let formula = segment_body_support(&s, &c, &w, &xi);
            assert!(
                (direct - formula).abs() < 1e-12,
                "support mismatch {direct} vs {formula}"
            );
        }
    }

    #[test]
    fn conjugation_swaps_segment_body_pairing() {
        // h(C·ξ, w) = h(C̄·w, ξ): the relation behind the symmetry of mixed
        // projection bodies.
        let s = ComplexSpace::new(3);
        let c = PlanarBody::from_points(&[[0.2, 0.1], [1.0, -0.4], [-0.3, 0.8]]).unwrap();
        let cbar = c.conjugate();
        let mut r = rng(5);
        for _ in 0..20 {
            let w = crate::sample::random_direction(6, &mut r);
            let xi = crate::sample::random_direction(6, &mut r) * 2.0;
            let lhs = segment_body_support(&s, &c, &xi, &w);
            let rhs = segment_body_support(&s, &cbar, &w, &xi);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
