//! Run report: config echo, per-check entries and tallies.

use super::config::{Suite, SuiteConfig};
use crate::checks::{CheckReport, ShiftConvention};
use crate::limits::ConvergenceReport;
use serde::Serialize;
use std::fmt::Write as _;

pub const SCHEMA_VERSION: &str = "1.0";
pub const THETA_CONVENTION: &str = "theta_p(z) = (z;p)(p/z;p)(p;p)";

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Outcome {
    Check(CheckReport),
    Convergence(ConvergenceReport),
    /// The check could not be evaluated (domain error, pole, divergence).
    Error { check_id: String, subject: String, message: String },
    Skipped { check_id: String, subject: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Skipped,
    /// Recorded but not gated.
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub suite: Suite,
    /// Role tag of the subject (catalog family, twist kind, ...).
    pub tag: String,
    pub gated: bool,
    pub status: Status,
    pub outcome: Outcome,
}

impl Entry {
    pub fn new(suite: Suite, tag: &str, gated: bool, outcome: Outcome) -> Self {
        let met = match &outcome {
            Outcome::Check(r) => Some(r.ok()),
            Outcome::Convergence(r) => Some(r.pass),
            Outcome::Error { .. } => None,
            Outcome::Skipped { .. } => None,
        };
        let status = match (&outcome, met, gated) {
            (Outcome::Skipped { .. }, _, _) => Status::Skipped,
            (Outcome::Error { .. }, _, true) => Status::Error,
            (_, _, false) => Status::Info,
            (_, Some(true), true) => Status::Pass,
            _ => Status::Fail,
        };
        Entry { suite, tag: tag.to_string(), gated, status, outcome }
    }

    pub fn check_id(&self) -> &str {
        match &self.outcome {
            Outcome::Check(r) => &r.check_id,
            Outcome::Convergence(_) => "limit",
            Outcome::Error { check_id, .. } | Outcome::Skipped { check_id, .. } => check_id,
        }
    }

    pub fn subject(&self) -> &str {
        match &self.outcome {
            Outcome::Check(r) => &r.subject,
            Outcome::Convergence(r) => &r.edge,
            Outcome::Error { subject, .. } | Outcome::Skipped { subject, .. } => subject,
        }
    }

    /// `(residual, tol)` when there is one.
    pub fn residual(&self) -> Option<(f64, f64)> {
        match &self.outcome {
            Outcome::Check(r) => Some((r.residual, r.tol)),
            Outcome::Convergence(r) => Some((r.extrapolated, r.tol)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub skipped: usize,
    pub info: usize,
}

impl Summary {
    pub fn tally(entries: &[Entry]) -> Self {
        let mut s = Summary { total: entries.len(), ..Summary::default() };
        for e in entries {
            match e.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Error => s.error += 1,
                Status::Skipped => s.skipped += 1,
                Status::Info => s.info += 1,
            }
        }
        s
    }

    pub fn gated_failures(&self) -> usize {
        self.fail + self.error
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    /// Dynamical shift of the affine entries, when the dynamical suite ran.
    pub delta: Option<ShiftConvention>,
    /// Shift of the finite cocycle, when the finite suite ran.
    pub delta_finite: Option<ShiftConvention>,
    pub theta: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: SuiteConfig,
    pub conventions: Conventions,
    pub summary: Summary,
    pub entries: Vec<Entry>,
}

impl RunReport {
    pub fn new(config: SuiteConfig, conventions: Conventions, entries: Vec<Entry>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config,
            conventions,
            summary: Summary::tally(&entries),
            entries,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let s = &self.summary;
        let _ = writeln!(out, "# {} {} verification report\n", self.tool, self.version);
        let _ = writeln!(
            out,
            "suite `{}`, seed {}, {} points\n",
            self.config.suite.name(),
            self.config.seed,
            self.config.points
        );
        let conv = |c: &Option<ShiftConvention>| match c {
            Some(c) => format!("delta = {}, sign = {}", c.delta, c.sign),
            None => "n/a".into(),
        };
        let _ = writeln!(out, "- dynamical shift: {}", conv(&self.conventions.delta));
        let _ = writeln!(out, "- finite shift: {}", conv(&self.conventions.delta_finite));
        let _ = writeln!(out, "- theta: `{}`\n", self.conventions.theta);
        let _ = writeln!(
            out,
            "total {} | pass {} | fail {} | error {} | skipped {} | info {}\n",
            s.total, s.pass, s.fail, s.error, s.skipped, s.info
        );
        let _ = writeln!(out, "| suite | check | subject | tag | residual | tol | status |");
        let _ = writeln!(out, "|---|---|---|---|---|---|---|");
        for e in &self.entries {
            let (res, tol) = match e.residual() {
                Some((r, t)) => (format!("{r:.3e}"), format!("{t:.0e}")),
                None => ("-".into(), "-".into()),
            };
            let status = match (&e.outcome, e.status) {
                (Outcome::Error { message, .. }, _) => format!("{:?}: {message}", e.status).to_lowercase(),
                (Outcome::Check(r), st) if r.expect_fail => format!("{st:?} (negative)").to_lowercase(),
                (_, st) => format!("{st:?}").to_lowercase(),
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} |",
                e.suite.name(),
                e.check_id(),
                e.subject().replace('|', "\\|"),
                e.tag,
                res,
                tol,
                status
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::ParamPoint;

    fn check(res: f64, tol: f64) -> CheckReport {
        CheckReport::new("ybe", "Aqp", "elliptic", ParamPoint::new(), res, tol).unwrap()
    }

    #[test]
    fn status_rules() {
        assert_eq!(Entry::new(Suite::Ybe, "t", true, Outcome::Check(check(1e-12, 1e-9))).status, Status::Pass);
        assert_eq!(Entry::new(Suite::Ybe, "t", true, Outcome::Check(check(1e-6, 1e-9))).status, Status::Fail);
        assert_eq!(Entry::new(Suite::Ybe, "t", false, Outcome::Check(check(1e-6, 1e-9))).status, Status::Info);
        let neg = check(0.5, 1e-3).expecting_failure();
        assert_eq!(Entry::new(Suite::Ybe, "t", true, Outcome::Check(neg)).status, Status::Pass);
        let err = Outcome::Error { check_id: "ybe".into(), subject: "Aqp".into(), message: "pole".into() };
        assert_eq!(Entry::new(Suite::Ybe, "t", true, err).status, Status::Error);
    }

    #[test]
    fn summary_matches_entries() {
        let entries = vec![
            Entry::new(Suite::Ybe, "t", true, Outcome::Check(check(1e-12, 1e-9))),
            Entry::new(Suite::Ybe, "t", true, Outcome::Check(check(1.0, 1e-9))),
            Entry::new(Suite::Ybe, "t", false, Outcome::Check(check(1.0, 1e-9))),
        ];
        let rep = RunReport::new(
            SuiteConfig::default(),
            Conventions { delta: None, delta_finite: None, theta: THETA_CONVENTION },
            entries,
        );
        assert_eq!(rep.summary, Summary { total: 3, pass: 1, fail: 1, error: 0, skipped: 0, info: 1 });
        assert_eq!(rep.summary.gated_failures(), 1);
        assert!(rep.to_markdown().contains("| ybe | ybe | Aqp | t |"));
        let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(v["entries"][0]["outcome"]["kind"], "check");
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
    }
}
