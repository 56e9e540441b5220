//! Structured outcomes of identity checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{Error, C64};

/// Environment variable scaling every verification tolerance.
pub const TOL_SCALE_ENV: &str = "FRACSPLINE_TOL_SCALE";

/// Current tolerance scale (default 1).
pub fn tol_scale() -> f64 {
    std::env::var(TOL_SCALE_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|s| s.is_finite() && *s >= 0.0)
        .unwrap_or(1.0)
}

/// `a+bi` / `a-bi` formatting with round-trip precision.
pub fn fmt_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

/// One measured discrepancy with its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub label: String,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub stderr: Option<f64>,
}

impl Comparison {
    pub fn new(label: &str, discrepancy: f64, tolerance: f64, stderr: Option<f64>) -> Self {
        Self {
            label: label.into(),
            discrepancy,
            tolerance,
            stderr,
        }
    }

    fn allowance(&self) -> f64 {
        self.tolerance.max(3.0 * self.stderr.unwrap_or(0.0))
    }

    /// Discrepancy relative to the allowance; `> 1` fails.
    pub fn margin(&self) -> f64 {
        if self.discrepancy.is_nan() {
            return f64::INFINITY;
        }
        let a = self.allowance();
        if a > 0.0 {
            self.discrepancy / a
        } else if self.discrepancy == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn passes(&self, scale: f64) -> bool {
        passes(self.discrepancy, self.tolerance, self.stderr, scale)
    }
}

fn passes(d: f64, tol: f64, stderr: Option<f64>, scale: f64) -> bool {
    if d.is_nan() {
        return false;
    }
    d <= tol * scale || stderr.is_some_and(|s| d <= 3.0 * s * scale)
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: String,
    pub parameters: BTreeMap<String, Value>,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub mc_stderr: Option<f64>,
    pub passed: bool,
    pub notes: String,
}

impl VerificationReport {
    pub fn builder(identity_id: &str) -> ReportBuilder {
        ReportBuilder {
            id: identity_id.into(),
            params: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Adds a further pass condition; a failing one is recorded in the notes.
    pub fn require(mut self, ok: bool, what: &str) -> Self {
        if !ok {
            self.passed = false;
            if !self.notes.is_empty() {
                self.notes.push_str("; ");
            }
            self.notes.push_str("failed: ");
            self.notes.push_str(what);
        }
        self
    }
}

pub struct ReportBuilder {
    id: String,
    params: BTreeMap<String, Value>,
    notes: Vec<String>,
}

impl ReportBuilder {
    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn complex(self, key: &str, z: C64) -> Self {
        self.param(key, fmt_complex(z))
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn finish(self, discrepancy: f64, tolerance: f64, mc_stderr: Option<f64>) -> VerificationReport {
        let passed = passes(discrepancy, tolerance, mc_stderr, tol_scale());
        VerificationReport {
            identity_id: self.id,
            parameters: self.params,
            discrepancy: finite_or_max(discrepancy),
            tolerance,
            mc_stderr,
            passed,
            notes: self.notes.join("; "),
        }
    }

    /// Reports the comparison with the largest margin; all are listed under
    /// the `comparisons` parameter and every one must pass.
    pub fn finish_worst(self, comparisons: Vec<Comparison>) -> VerificationReport {
        let scale = tol_scale();
        let all_pass = comparisons.iter().all(|c| c.passes(scale));
        let listed: Vec<Value> = comparisons
            .iter()
            .map(|c| {
                serde_json::json!({
                    "label": c.label,
                    "discrepancy": c.discrepancy,
                    "tolerance": c.tolerance,
                    "stderr": c.stderr,
                    "passed": c.passes(scale),
                })
            })
            .collect();
        let worst = comparisons
            .iter()
            .max_by(|a, b| a.margin().total_cmp(&b.margin()))
            .cloned()
            .unwrap_or_else(|| Comparison::new("none", 0.0, 0.0, None));
        let mut r = self
            .param("comparisons", Value::Array(listed))
            .param("worst", worst.label.clone())
            .finish(worst.discrepancy, worst.tolerance, worst.stderr);
        r.passed = all_pass;
        r
    }

    /// A check that could not be carried out.
    pub fn failed(self, err: &Error) -> VerificationReport {
        let mut r = self.note(format!("error: {err}")).finish(f64::MAX, 0.0, None);
        r.passed = false;
        r
    }
}

fn finite_or_max(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        f64::MAX
    }
}
