//! Structured results for the verification suites.
//!
//! Every seeded check driver returns a [`CheckReport`]: one row per run with
//! the worst residual and (for inequality suites) the worst slack, plus a
//! per-instance breakdown. Reports serialize to JSON and to one-line CSV
//! rows with a fixed header, so sweeps over seeds concatenate cleanly.

use serde::{Deserialize, Serialize};

/// Outcome of one seeded verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    /// Which check ran (`valuation`, `contravariance`, …).
    pub name: String,
    /// Complex dimension of the ambient space.
    pub m: usize,
    /// Planar body `C` used (`square`, `segment`, a file stem, …).
    pub c_name: String,
    pub seed: u64,
    /// Tolerance the instances were held against.
    pub tol: f64,
    /// Worst residual across instances.
    pub residual: f64,
    /// Worst (most negative) slack across inequality instances.
    pub slack: Option<f64>,
    pub pass: bool,
    pub instances: Vec<InstanceReport>,
}

/// One instance inside a check run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceReport {
    pub label: String,
    /// Violation magnitude: identity residual, or `max(0, −slack)` style
    /// overshoot for inequalities.
    pub residual: f64,
    /// Signed inequality slack (`lhs − rhs` after normalization), when the
    /// instance is an inequality.
    pub slack: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl InstanceReport {
    /// Identity instance: passes when the relative residual is within `tol`.
    pub fn identity(label: impl Into<String>, residual: f64, tol: f64) -> InstanceReport {
        InstanceReport {
            label: label.into(),
            residual,
            slack: None,
            pass: residual.is_finite() && residual <= tol,
            note: String::new(),
        }
    }

    /// Inequality instance: passes when `slack ≥ −tol`.
    pub fn inequality(label: impl Into<String>, slack: f64, tol: f64) -> InstanceReport {
        InstanceReport {
            label: label.into(),
            residual: (-slack).max(0.0),
            slack: Some(slack),
            pass: slack.is_finite() && slack >= -tol,
            note: String::new(),
        }
    }

    /// Equality case of an inequality: passes when `|slack| ≤ tol`.
    pub fn equality_case(label: impl Into<String>, slack: f64, tol: f64) -> InstanceReport {
        InstanceReport {
            label: label.into(),
            residual: slack.abs(),
            slack: Some(slack),
            pass: slack.is_finite() && slack.abs() <= tol,
            note: String::new(),
        }
    }

    /// Strict-inequality witness: passes when `slack > tol`.
    pub fn strict(label: impl Into<String>, slack: f64, tol: f64) -> InstanceReport {
        InstanceReport {
            label: label.into(),
            residual: 0.0,
            slack: Some(slack),
            pass: slack.is_finite() && slack > tol,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> InstanceReport {
        self.note = note.into();
        self
    }
}

impl CheckReport {
    /// Aggregate instances: worst residual, most negative slack, all-pass.
    pub fn from_instances(
        name: impl Into<String>,
        m: usize,
        c_name: impl Into<String>,
        seed: u64,
        tol: f64,
        instances: Vec<InstanceReport>,
    ) -> CheckReport {
        let residual = instances.iter().map(|i| i.residual).fold(0.0, f64::max);
        let slack = instances
            .iter()
            .filter_map(|i| i.slack)
            .fold(None, |acc: Option<f64>, s| {
                Some(acc.map_or(s, |a| a.min(s)))
            });
        let pass = !instances.is_empty() && instances.iter().all(|i| i.pass);
        CheckReport {
            name: name.into(),
            m,
            c_name: c_name.into(),
            seed,
            tol,
            residual,
            slack,
            pass,
            instances,
        }
    }

    pub fn csv_header() -> &'static str {
        "name,seed,m,C,residual,slack,tol,pass"
    }

    pub fn csv_row(&self) -> String {
        let slack = self.slack.map(|s| format!("{s:e}")).unwrap_or_default();
        format!(
            "{},{},{},{},{:e},{},{:e},{}",
            self.name, self.seed, self.m, self.c_name, self.residual, slack, self.tol, self.pass
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<CheckReport> {
        serde_json::from_str(text)
    }

    /// Worst per-instance entries, for compact logs.
    pub fn worst_instances(&self, n: usize) -> Vec<&InstanceReport> {
        let mut refs: Vec<&InstanceReport> = self.instances.iter().collect();
        refs.sort_by(|a, b| {
            b.residual
                .partial_cmp(&a.residual)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        refs.truncate(n);
        refs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_row_shape() {
        let rep = CheckReport::from_instances(
            "valuation",
            3,
            "square",
            7,
            1e-9,
            vec![InstanceReport::identity("k0", 2e-12, 1e-9)],
        );
        assert_eq!(CheckReport::csv_header().split(',').count(), 8);
        let row = rep.csv_row();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 8);
        assert_eq!(fields[0], "valuation");
        assert_eq!(fields[1], "7");
        assert_eq!(fields[2], "3");
        assert_eq!(fields[3], "square");
        assert_eq!(fields[5], "");
        assert_eq!(fields[7], "true");
        assert!(rep.pass);
    }

    #[test]
    fn json_roundtrip() {
        let rep = CheckReport::from_instances(
            "bm",
            2,
            "segment",
            1,
            1e-8,
            vec![
                InstanceReport::inequality("pair0", 0.3, 1e-8),
                InstanceReport::equality_case("homothet", 1e-9, 1e-6),
            ],
        );
        let back = CheckReport::from_json(&rep.to_json()).unwrap();
        assert_eq!(back.name, rep.name);
        assert_eq!(back.instances.len(), 2);
        assert_eq!(back.slack, Some(1e-9));
    }

    #[test]
    fn aggregation_rules() {
        let rep = CheckReport::from_instances(
            "x",
            2,
            "square",
            0,
            1e-9,
            vec![
                InstanceReport::identity("a", 1e-12, 1e-9),
                InstanceReport::identity("b", 5e-3, 1e-9),
            ],
        );
        assert!(!rep.pass);
        assert_eq!(rep.residual, 5e-3);
        assert!(CheckReport::from_instances("x", 2, "square", 0, 1e-9, vec![]).pass == false);
    }
}
