//! Discrete measures on the unit sphere.
//!
//! Surface area measures of polytopes are finite sums of weighted point
//! masses `a_i δ_{u_i}` at the outer facet normals. Mixed area measures are
//! obtained from signed combinations, so intermediate weights may be
//! negative; [`DiscreteMeasure::merged`] cancels them and clamps roundoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{tol, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    /// Unit direction.
    pub u: Vector,
    /// Weight; nonnegative in a finalized measure.
    pub a: f64,
}

/// Finitely supported measure on `S^{d−1}`.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    pub dim: usize,
    pub atoms: Vec<Atom>,
    /// Whether `Σ a_i u_i = 0` holds within tolerance (a prerequisite for
    /// the Minkowski problem).
    pub centered: bool,
}

impl DiscreteMeasure {
    pub fn new(dim: usize, atoms: Vec<Atom>) -> Self {
        let mut m = DiscreteMeasure {
            dim,
            atoms,
            centered: false,
        };
        m.centered = m.centering_defect() <= tol::CENTERED_REL * m.total_mass().max(1e-300);
        m
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.a).sum()
    }

    /// `|Σ a_i u_i|`.
    pub fn centering_defect(&self) -> f64 {
        if self.atoms.is_empty() {
            return 0.0;
        }
        let mut s = Vector::zeros(self.dim);
        for at in &self.atoms {
            s.axpy(at.a, &at.u, 1.0);
        }
        s.norm()
    }

    /// Merge atoms with directions within `tol::ATOM_MERGE_ANGLE`, drop
    /// atoms below `tol::ATOM_DROP_REL` of the total mass, and clamp small
    /// negative weights. Fails if signed cancellation leaves a weight more
    /// negative than `tol::NEGATIVE_CLAMP_REL` relative to the magnitude sum.
    pub fn merged(self) -> Result<DiscreteMeasure> {
        let dim = self.dim;
        let magnitude: f64 = self.atoms.iter().map(|a| a.a.abs()).sum();
        if magnitude == 0.0 {
            return Ok(DiscreteMeasure::new(dim, Vec::new()));
        }
        let items: Vec<(Vector, f64)> = self.atoms.into_iter().map(|a| (a.u, a.a)).collect();
        let clusters = cluster_unit_directions(items, tol::ATOM_MERGE_ANGLE);
        let mut atoms = Vec::with_capacity(clusters.len());
        for cluster in clusters {
            let w: f64 = cluster.iter().map(|(_, a)| *a).sum();
            if w < -tol::NEGATIVE_CLAMP_REL * magnitude {
                return Err(Error::NegativeMixedVolume {
                    value: w,
                    scale: magnitude,
                });
            }
            if w <= tol::ATOM_DROP_REL * magnitude {
                continue;
            }
            // Magnitude-weighted mean direction keeps the representative
            // stable when weights of either sign are present.
            let mut u = Vector::zeros(dim);
            for (dir, a) in &cluster {
                u.axpy(a.abs().max(1e-300), dir, 1.0);
            }
            let n = u.norm();
            if n == 0.0 {
                continue;
            }
            atoms.push(Atom { u: u / n, a: w });
        }
        Ok(DiscreteMeasure::new(dim, atoms))
    }

    pub fn scaled(mut self, t: f64) -> Self {
        for a in &mut self.atoms {
            a.a *= t;
        }
        self
    }

    /// `∫ f dμ` in atom order.
    pub fn integrate(&self, mut f: impl FnMut(&Vector) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.a * f(&a.u)).sum()
    }

    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            dim: self.dim,
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomJson {
                    u: a.u.iter().copied().collect(),
                    a: a.a,
                })
                .collect(),
            centered: self.centered,
        }
    }

    pub fn from_json(j: &MeasureJson) -> Result<DiscreteMeasure> {
        let mut atoms = Vec::with_capacity(j.atoms.len());
        for at in &j.atoms {
            if at.u.len() != j.dim {
                return Err(Error::DimensionMismatch {
                    expected: j.dim,
                    got: at.u.len(),
                });
            }
            if !(at.a > 0.0) {
                return Err(Error::NonPositiveWeight(at.a));
            }
            let u = Vector::from_column_slice(&at.u);
            let n = u.norm();
            if n <= 1e-12 {
                return Err(Error::ZeroDirection);
            }
            atoms.push(Atom { u: u / n, a: at.a });
        }
        Ok(DiscreteMeasure::new(j.dim, atoms))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomJson {
    pub u: Vec<f64>,
    pub a: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub dim: usize,
    pub atoms: Vec<AtomJson>,
    pub centered: bool,
}

/// Group unit vectors that agree within `tol` (Euclidean, ≈ radians).
///
/// Lexicographic sort followed by a sliding-window scan over open clusters;
/// the window is keyed on the first coordinate, so transposition noise in
/// later coordinates cannot split a cluster.
pub(crate) fn cluster_unit_directions<T>(
    items: Vec<(Vector, T)>,
    tol: f64,
) -> Vec<Vec<(Vector, T)>> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        items[a]
            .0
            .iter()
            .zip(items[b].0.iter())
            .find_map(|(x, y)| {
                let c = x.total_cmp(y);
                (c != std::cmp::Ordering::Equal).then_some(c)
            })
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut items: Vec<Option<(Vector, T)>> = items.into_iter().map(Some).collect();

    // clusters[i] = (representative direction, members); open clusters are
    // those whose representative may still match by first coordinate.
    let mut clusters: Vec<(Vector, Vec<(Vector, T)>)> = Vec::new();
    let mut window_start = 0usize;
    for &id in &order {
        let (dir, payload) = items[id].take().unwrap();
        while window_start < clusters.len()
            && dir[0] - clusters[window_start].0[0] > tol
        {
            window_start += 1;
        }
        let mut target = None;
        for (ci, (rep, _)) in clusters.iter().enumerate().skip(window_start) {
            if (&dir - rep).norm() <= tol {
                target = Some(ci);
                break;
            }
        }
        match target {
            Some(ci) => clusters[ci].1.push((dir, payload)),
            None => clusters.push((dir.clone(), vec![(dir, payload)])),
        }
    }
    clusters.into_iter().map(|(_, members)| members).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    #[test]
    fn merge_combines_close_directions_and_drops_dust() {
        let m = DiscreteMeasure::new(
            3,
            vec![
                Atom {
                    u: vector(&[1.0, 0.0, 0.0]),
                    a: 2.0,
                },
                Atom {
                    u: vector(&[1.0, 3e-9, 0.0]).normalize(),
                    a: 1.0,
                },
                Atom {
                    u: vector(&[0.0, 1.0, 0.0]),
                    a: 1e-15,
                },
                Atom {
                    u: vector(&[0.0, 0.0, 1.0]),
                    a: 1.0,
                },
            ],
        );
        let merged = m.merged().unwrap();
        assert_eq!(merged.atoms.len(), 2);
        let total: f64 = merged.total_mass();
        assert!((total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn signed_cancellation_clamps_to_zero() {
        let m = DiscreteMeasure::new(
            2,
            vec![
                Atom {
                    u: vector(&[1.0, 0.0]),
                    a: 1.0,
                },
                Atom {
                    u: vector(&[1.0, 0.0]),
                    a: -1.0 + 1e-12,
                },
                Atom {
                    u: vector(&[0.0, 1.0]),
                    a: 1.0,
                },
            ],
        );
        let merged = m.merged().unwrap();
        assert_eq!(merged.atoms.len(), 1);
    }

    #[test]
    fn genuinely_negative_weight_is_an_error() {
        let m = DiscreteMeasure::new(
            2,
            vec![
                Atom {
                    u: vector(&[1.0, 0.0]),
                    a: -1.0,
                },
                Atom {
                    u: vector(&[0.0, 1.0]),
                    a: 1.0,
                },
            ],
        );
        assert!(m.merged().is_err());
    }

    #[test]
    fn centered_flag_detects_closed_normal_fans() {
        let m = DiscreteMeasure::new(
            2,
            vec![
                Atom {
                    u: vector(&[1.0, 0.0]),
                    a: 1.0,
                },
                Atom {
                    u: vector(&[-1.0, 0.0]),
                    a: 1.0,
                },
                Atom {
                    u: vector(&[0.0, 1.0]),
                    a: 2.0,
                },
                Atom {
                    u: vector(&[0.0, -1.0]),
                    a: 2.0,
                },
            ],
        );
        assert!(m.centered);
        let off = DiscreteMeasure::new(
            2,
            vec![Atom {
                u: vector(&[1.0, 0.0]),
                a: 1.0,
            }],
        );
        assert!(!off.centered);
    }
}
