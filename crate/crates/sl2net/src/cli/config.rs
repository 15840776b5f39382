//! Run configuration: a single JSON document, overridable from flags.

use crate::error::{Error, Result};
use crate::rmatrix::{AlgebraId, ParamPoint};
use crate::specfun::TruncationPolicy;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Ybe,
    Dybe,
    Twists,
    Limits,
    Finite,
    Properties,
    Specfun,
}

impl Suite {
    pub const CONCRETE: [Suite; 7] = [
        Suite::Ybe,
        Suite::Dybe,
        Suite::Twists,
        Suite::Properties,
        Suite::Finite,
        Suite::Limits,
        Suite::Specfun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Ybe => "ybe",
            Suite::Dybe => "dybe",
            Suite::Twists => "twists",
            Suite::Limits => "limits",
            Suite::Finite => "finite",
            Suite::Properties => "properties",
            Suite::Specfun => "specfun",
        }
    }

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::CONCRETE.to_vec(),
            s => vec![s],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
}

/// A point supplied explicitly for one catalog entry; checks on that entry
/// run at these points in addition to the random ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitPoint {
    pub algebra: AlgebraId,
    pub params: ParamPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Random points per check.
    pub points: usize,
    /// Random points per special-function law.
    pub specfun_points: usize,
    pub seed: u64,
    /// Global tolerance override for gated checks.
    pub tol: Option<f64>,
    /// Per-check tolerance overrides keyed by check id.
    pub tolerances: BTreeMap<String, f64>,
    pub explicit: Vec<ExplicitPoint>,
    pub truncation: TruncationPolicy,
    pub format: Format,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            points: 20,
            specfun_points: 50,
            seed: 0,
            tol: None,
            tolerances: BTreeMap::new(),
            explicit: Vec::new(),
            truncation: TruncationPolicy::default(),
            format: Format::Json,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad_tol = |t: f64| !(t.is_finite() && t > 0.0);
        if self.tol.is_some_and(bad_tol) {
            return Err(Error::Config("tol must be positive and finite".into()));
        }
        if let Some((k, _)) = self.tolerances.iter().find(|(_, &t)| bad_tol(t)) {
            return Err(Error::Config(format!("tolerance for {k} must be positive and finite")));
        }
        if self.truncation.max_terms == 0 || bad_tol(self.truncation.term_tolerance) {
            return Err(Error::Config("invalid truncation policy".into()));
        }
        Ok(())
    }

    /// Tolerance for a gated check: per-check override, then the global
    /// override, then the default.
    pub fn tol_for(&self, check_id: &str, default: f64) -> f64 {
        self.tolerances.get(check_id).copied().or(self.tol).unwrap_or(default)
    }

    /// Threshold of a negative control; only a per-check override moves it.
    pub fn floor_for(&self, check_id: &str, default: f64) -> f64 {
        self.tolerances.get(check_id).copied().unwrap_or(default)
    }

    pub fn explicit_for(&self, id: AlgebraId) -> impl Iterator<Item = &ParamPoint> {
        self.explicit.iter().filter(move |e| e.algebra == id).map(|e| &e.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_roundtrip() {
        let cfg = SuiteConfig::from_json("{}").unwrap();
        assert_eq!(cfg, SuiteConfig::default());
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(SuiteConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_malformed() {
        assert!(SuiteConfig::from_json("{\"suite\": \"nope\"}").is_err());
        assert!(SuiteConfig::from_json("{\"pointz\": 3}").is_err());
        assert!(SuiteConfig::from_json("{\"tol\": -1}").is_err());
        assert!(SuiteConfig::from_json("[").is_err());
    }

    #[test]
    fn tolerance_precedence() {
        let cfg = SuiteConfig::from_json(r#"{"tol": 1e-5, "tolerances": {"ybe": 1e-7}}"#).unwrap();
        assert_eq!(cfg.tol_for("ybe", 1e-9), 1e-7);
        assert_eq!(cfg.tol_for("dybe", 1e-9), 1e-5);
        assert_eq!(cfg.floor_for("dybe_control", 1e-3), 1e-3);
    }

    #[test]
    fn explicit_points_parse() {
        let cfg = SuiteConfig::from_json(r#"{"explicit": [{"algebra": "DYrV8", "params": {"beta": [0.4, 0.1], "r": [5, 0]}}]}"#).unwrap();
        assert_eq!(cfg.explicit_for(AlgebraId::DYrV8).count(), 1);
        assert_eq!(cfg.explicit_for(AlgebraId::Aqp).count(), 0);
    }
}
