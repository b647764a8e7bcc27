//! Structured results of inequality checks.

use serde::{Deserialize, Serialize};

/// How bound values appearing on the right-hand side are obtained.
///
/// `Tight` keeps supremum-search estimates on the right-hand side and widens
/// tolerances accordingly; `Certified` substitutes operator norms for those
/// estimates, which can only grow the right-hand side, so a certified check
/// can never fail spuriously because a search undershot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Tight,
    Certified,
}

impl CheckMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "tight" => Some(CheckMode::Tight),
            "certified" => Some(CheckMode::Certified),
            _ => None,
        }
    }
}

impl std::fmt::Display for CheckMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckMode::Tight => write!(f, "tight"),
            CheckMode::Certified => write!(f, "certified"),
        }
    }
}

/// Where an instance came from: seed, shapes, exponents, pair label.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<String>,
}

/// One named sub-inequality inside a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubCheck {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl SubCheck {
    pub fn new(label: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            label: label.into(),
            lhs,
            rhs,
            slack,
            pass: slack >= -tol,
        }
    }
}

/// Result of one inequality check. `pass` holds exactly when
/// `slack >= -tol`; for multi-part checks the top-level numbers are those of
/// the binding (smallest-slack) part and `pass` requires every part to pass.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub checker: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub tol: f64,
    pub mode: CheckMode,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub parts: Vec<SubCheck>,
}

impl CheckReport {
    pub fn single(
        checker: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tol: f64,
        mode: CheckMode,
        provenance: Provenance,
    ) -> Self {
        let slack = rhs - lhs;
        let report = Self {
            checker: checker.into(),
            lhs,
            rhs,
            slack,
            pass: slack >= -tol,
            tol,
            mode,
            provenance,
            parts: Vec::new(),
        };
        report.assert_finite();
        report
    }

    /// Aggregates named parts; the binding part supplies the headline numbers.
    pub fn from_parts(
        checker: impl Into<String>,
        parts: Vec<SubCheck>,
        tol: f64,
        mode: CheckMode,
        provenance: Provenance,
    ) -> Self {
        assert!(!parts.is_empty(), "a report needs at least one part");
        let binding = parts
            .iter()
            .min_by(|a, b| a.slack.total_cmp(&b.slack))
            .expect("non-empty parts");
        let report = Self {
            checker: checker.into(),
            lhs: binding.lhs,
            rhs: binding.rhs,
            slack: binding.slack,
            pass: parts.iter().all(|p| p.pass),
            tol,
            mode,
            provenance,
            parts,
        };
        report.assert_finite();
        report
    }

    fn assert_finite(&self) {
        assert!(
            self.lhs.is_finite() && self.rhs.is_finite() && self.slack.is_finite(),
            "non-finite check report for {}",
            self.checker
        );
    }
}
