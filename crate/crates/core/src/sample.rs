//! Seeded generators for directions, polytopes, and instance families.
//!
//! Everything here is a pure function of its seed, so test and CLI output is
//! reproducible byte for byte.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::polytope::Polytope;
use crate::Vector;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// `n` pseudo-uniform unit vectors.
pub fn sphere_directions(dim: usize, n: usize, seed: u64) -> Vec<Vector> {
    let mut r = rng(seed);
    (0..n).map(|_| random_direction(dim, &mut r)).collect()
}

pub fn random_direction(dim: usize, r: &mut impl Rng) -> Vector {
    loop {
        let v = Vector::from_iterator(dim, (0..dim).map(|_| StandardNormal.sample(r)));
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// `2n` unit vectors closed under `v ↦ −v`.
pub fn symmetrized_directions(dim: usize, n: usize, seed: u64) -> Vec<Vector> {
    let mut out = Vec::with_capacity(2 * n);
    for v in sphere_directions(dim, n, seed) {
        out.push(-&v);
        out.push(v);
    }
    out
}

/// Coordinate directions `±e_j`.
pub fn coordinate_directions(dim: usize) -> Vec<Vector> {
    let mut out = Vec::with_capacity(2 * dim);
    for j in 0..dim {
        let mut e = Vector::zeros(dim);
        e[j] = 1.0;
        out.push(e.clone());
        out.push(-e);
    }
    out
}

pub fn unit_cube(dim: usize) -> Polytope {
    let pts: Vec<Vector> = (0..1usize << dim)
        .map(|mask| {
            Vector::from_iterator(dim, (0..dim).map(|j| ((mask >> j) & 1) as f64))
        })
        .collect();
    Polytope::from_points(dim, &pts).expect("cube is full-dimensional")
}

/// Axis-aligned box `Π_j [lo_j, hi_j]`.
pub fn axis_box(lo: &[f64], hi: &[f64]) -> Polytope {
    let dim = lo.len();
    let pts: Vec<Vector> = (0..1usize << dim)
        .map(|mask| {
            Vector::from_iterator(
                dim,
                (0..dim).map(|j| if (mask >> j) & 1 == 1 { hi[j] } else { lo[j] }),
            )
        })
        .collect();
    Polytope::from_points(dim, &pts).expect("box is full-dimensional")
}

pub fn random_axis_box(dim: usize, r: &mut impl Rng) -> Polytope {
    let mut lo = vec![0.0; dim];
    let mut hi = vec![0.0; dim];
    for j in 0..dim {
        let c: f64 = r.gen_range(-0.5..0.5);
        let half: f64 = 0.5 * f64::exp(r.gen_range(-0.7..0.7));
        lo[j] = c - half;
        hi[j] = c + half;
    }
    axis_box(&lo, &hi)
}

/// Simplex `conv{0, e_1, …, e_d}`.
pub fn standard_simplex(dim: usize) -> Polytope {
    let mut pts = vec![Vector::zeros(dim)];
    for j in 0..dim {
        let mut e = Vector::zeros(dim);
        e[j] = 1.0;
        pts.push(e);
    }
    Polytope::from_points(dim, &pts).expect("simplex is full-dimensional")
}

/// Cross-polytope `conv{±e_j}`.
pub fn cross_polytope(dim: usize) -> Polytope {
    Polytope::from_points(dim, &coordinate_directions(dim)).expect("cross-polytope")
}

/// Simplex with Gaussian vertices, retried until well-conditioned.
pub fn random_simplex(dim: usize, r: &mut impl Rng) -> Polytope {
    loop {
        let pts: Vec<Vector> = (0..dim + 1)
            .map(|_| Vector::from_iterator(dim, (0..dim).map(|_| StandardNormal.sample(r))))
            .collect();
        if let Ok(p) = Polytope::from_points(dim, &pts) {
            if p.volume() > 1e-3 {
                return p;
            }
        }
    }
}

/// Hull of `n` points sampled in the unit ball (radii biased outward so the
/// hull has about `n` vertices).
pub fn random_polytope(dim: usize, n: usize, r: &mut impl Rng) -> Result<Polytope> {
    loop {
        let pts: Vec<Vector> = (0..n)
            .map(|_| {
                let dir = random_direction(dim, r);
                let t: f64 = r.gen_range(0.5_f64..1.0);
                dir * t.powf(1.0 / dim as f64)
            })
            .collect();
        match Polytope::from_points(dim, &pts) {
            Ok(p) => return Ok(p),
            Err(_) if n >= dim + 1 => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Random nonsingular linear map with entries `N(0, 1/√d)`, conditioned to
/// determinant magnitude ≥ 0.1.
pub fn random_linear_map(dim: usize, r: &mut impl Rng) -> crate::Matrix {
    loop {
        let m = crate::Matrix::from_iterator(
            dim,
            dim,
            (0..dim * dim).map(|_| {
                let x: f64 = StandardNormal.sample(r);
                x / (dim as f64).sqrt()
            }),
        );
        if m.determinant().abs() >= 0.1 {
            return m;
        }
    }
}
