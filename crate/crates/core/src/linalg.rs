//! Small linear-algebra helpers shared by the hull and measure code.

use crate::{Matrix, Vector};

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Returns an orthonormal basis of the span of `cols`. Columns whose
/// residual after projection is below `tol` are skipped, so the result has
/// full numerical rank.
pub fn orthonormalize(cols: &[Vector], tol: f64) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::with_capacity(cols.len());
    for c in cols {
        if let Some(q) = residual_direction(&basis, c, tol) {
            basis.push(q);
        }
    }
    basis
}

/// Component of `v` orthogonal to `basis`, normalized, or `None` if its norm
/// is below `tol`. `basis` must be orthonormal.
pub fn residual_direction(basis: &[Vector], v: &Vector, tol: f64) -> Option<Vector> {
    let mut r = v.clone();
    for _ in 0..2 {
        for q in basis {
            let c = q.dot(&r);
            r.axpy(-c, q, 1.0);
        }
    }
    let n = r.norm();
    if n <= tol {
        None
    } else {
        Some(r / n)
    }
}

/// Distance of `v` from the span of the orthonormal `basis`.
pub fn residual_norm(basis: &[Vector], v: &Vector) -> f64 {
    let mut r = v.clone();
    for q in basis {
        let c = q.dot(&r);
        r.axpy(-c, q, 1.0);
    }
    r.norm()
}

/// Unit normal of the hyperplane spanned by `edges` (must have rank `d−1`).
///
/// Completes the orthonormalized edge frame with the coordinate direction of
/// largest residual; the leftover unit vector is the normal. Returns `None`
/// when the edges do not span a hyperplane numerically.
pub fn hyperplane_normal(edges: &[Vector], dim: usize, tol: f64) -> Option<Vector> {
    let basis = orthonormalize(edges, tol);
    if basis.len() != dim - 1 {
        return None;
    }
    let mut best: Option<(f64, Vector)> = None;
    for k in 0..dim {
        let mut e = Vector::zeros(dim);
        e[k] = 1.0;
        let res = residual_norm(&basis, &e);
        if best.as_ref().map_or(true, |(b, _)| res > *b) {
            best = Some((res, e));
        }
    }
    let (res, e) = best?;
    if res <= tol {
        return None;
    }
    residual_direction(&basis, &e, tol)
}

/// `(d−1)`-dimensional volume of the simplex with vertices `verts` (length
/// `d`), embedded in `R^d`. Uses the Gram determinant of the edge matrix.
pub fn simplex_facet_measure(verts: &[Vector]) -> f64 {
    let k = verts.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let mut gram = Matrix::zeros(k, k);
    let edges: Vec<Vector> = (1..=k).map(|i| &verts[i] - &verts[0]).collect();
    for i in 0..k {
        for j in i..k {
            let g = edges[i].dot(&edges[j]);
            gram[(i, j)] = g;
            gram[(j, i)] = g;
        }
    }
    let det = gram.determinant().max(0.0);
    det.sqrt() / factorial(k)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
