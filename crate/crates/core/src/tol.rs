//! Central tolerance constants.
//!
//! Every geometric predicate in the crate goes through one of these
//! constants. Absolute tolerances are always multiplied by a scale factor
//! `max(1, largest coordinate magnitude)` at the call site, so the values
//! below are calibrated for bodies of unit scale.

/// Points closer than this are deduplicated before hull construction.
pub const POINT_DEDUP: f64 = 1e-12;

/// A point is "above" a facet hyperplane (visible) when its signed distance
/// exceeds this. Points within the band are treated as on the hyperplane;
/// they can be dropped from the vertex set, which perturbs volumes by at
/// most the band width times the surface area.
pub const HULL_VISIBLE: f64 = 1e-10;

/// Residual threshold for affine-rank detection. A point extends the affine
/// hull only if its distance from the current span exceeds this.
pub const AFFINE_RANK: f64 = 1e-9;

/// Adjacent hull facets are merged into one face when their unit normals
/// differ by less than this (in the Euclidean metric, ≈ angle in radians) and
/// their offsets agree within [`FACET_MERGE_OFFSET`].
pub const FACET_MERGE_ANGLE: f64 = 1e-8;

/// Offset agreement required for facet merging (scaled).
pub const FACET_MERGE_OFFSET: f64 = 1e-9;

/// Measure atoms with directions closer than this (radians) are merged.
pub const ATOM_MERGE_ANGLE: f64 = 1e-8;

/// Merged atoms with weight below this fraction of the total mass are
/// dropped. Signed cancellation in polarization produces exact zeros
/// contaminated at this level.
pub const ATOM_DROP_REL: f64 = 1e-12;

/// A computed mixed volume or merged atom weight may come out slightly
/// negative through cancellation; magnitudes within this relative threshold
/// are clamped to zero, anything beyond is reported as an error.
pub const NEGATIVE_CLAMP_REL: f64 = 1e-7;

/// Default relative tolerance for equality-type residual checks.
pub const CHECK_REL: f64 = 1e-9;

/// Relative tolerance at which a homothety / equality case is declared in
/// the inequality checks.
pub const EQUALITY_REL: f64 = 1e-6;

/// Centering defect allowed for a surface-area-type measure, relative to
/// total mass.
pub const CENTERED_REL: f64 = 1e-10;

/// Facet-direction matching tolerance when reading facet areas back against
/// prescribed normals (Minkowski solver).
pub const DIRECTION_MATCH: f64 = 1e-7;

/// Default convergence tolerance of the Minkowski solver: maximal relative
/// facet-area deviation from the prescribed weights.
pub const SOLVER_RESIDUAL: f64 = 1e-6;

/// Iteration cap of the Minkowski solver.
pub const SOLVER_MAX_ITERS: usize = 500;

/// Point cap for intermediate vertex clouds in iterated Minkowski sums;
/// above it the accumulator is re-hulled before the next summand.
pub const REHULL_CAP: usize = 4096;

/// Scale factor applied to absolute tolerances.
pub fn scale_of(points: impl IntoIterator<Item = f64>) -> f64 {
    let mut s: f64 = 1.0;
    for x in points {
        let a = x.abs();
        if a > s {
            s = a;
        }
    }
    s
}

/// Relative residual of an equality `lhs = rhs` with denominator
/// `max(1, |lhs|, |rhs|)`.
pub fn rel_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / 1.0_f64.max(lhs.abs()).max(rhs.abs())
}
