//! Run configuration: frozen defaults, JSON config file, flag overrides.

use crate::defaults;
use crate::error::{Error, Result};
use crate::ode::Tolerances;
use crate::schemes::{DrivingScheme, SchemeKind};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Parameters shared by every subcommand. Defaults are the standard figure
/// settings; a JSON config file (flat key-value) overrides them, and CLI
/// flags override the file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Detuning list; the first entry is the scalar default.
    pub beta0: Vec<f64>,
    /// Scheme selection for single-scheme commands.
    pub scheme: Option<String>,
    pub gamma_rate: f64,
    pub lambda: f64,
    pub theta0: f64,
    pub theta_dot0: f64,
    /// Integrator tolerance (absolute = relative).
    pub tol: f64,
    /// Sample count override; each figure has its own default.
    pub grid: Option<usize>,
    pub xi_span: (f64, f64),
    pub theta0_range: (f64, f64),
    pub p_min: f64,
    pub omega0: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            beta0: defaults::BETA0_LIST.to_vec(),
            scheme: None,
            gamma_rate: defaults::GAMMA_RATE,
            lambda: defaults::LAMBDA,
            theta0: defaults::THETA0,
            theta_dot0: defaults::THETA_DOT0,
            tol: defaults::TOL,
            grid: None,
            xi_span: defaults::XI_SPAN,
            theta0_range: defaults::THETA0_RANGE,
            p_min: defaults::P_MIN,
            omega0: defaults::OMEGA0,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta0.is_empty() {
            return Err(Error::invalid("beta0 list must not be empty".to_string()));
        }
        for &b in &self.beta0 {
            if !b.is_finite() || b < 0.0 {
                return Err(Error::invalid(format!("beta0 values must be finite and nonnegative, got {b}")));
            }
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid(format!("tol must be positive, got {}", self.tol)));
        }
        if let Some(s) = &self.scheme {
            SchemeKind::parse(s)?;
        }
        DrivingScheme::new(SchemeKind::ExponentialDecay, self.gamma_rate, self.lambda)?;
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances::uniform(self.tol)
    }

    /// The selected scheme kind (`--scheme`), defaulting to constant.
    pub fn scheme_kind(&self) -> Result<SchemeKind> {
        match &self.scheme {
            Some(s) => SchemeKind::parse(s),
            None => Ok(SchemeKind::Constant),
        }
    }

    pub fn build_scheme(&self, kind: SchemeKind) -> Result<DrivingScheme> {
        DrivingScheme::new(kind, self.gamma_rate, self.lambda)
    }

    /// All four schemes with the configured rates, in canonical order.
    pub fn all_schemes(&self) -> Result<[DrivingScheme; 4]> {
        Ok([
            self.build_scheme(SchemeKind::Constant)?,
            self.build_scheme(SchemeKind::Oscillatory)?,
            self.build_scheme(SchemeKind::PowerLawDecay)?,
            self.build_scheme(SchemeKind::ExponentialDecay)?,
        ])
    }

    /// First entry of the detuning list: the scalar β₀ default.
    pub fn beta0_scalar(&self) -> f64 {
        self.beta0[0]
    }

    /// Sample count for a figure, honoring `--grid`.
    pub fn samples_or(&self, default: usize) -> usize {
        self.grid.unwrap_or(default).max(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_frozen_table() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.beta0, defaults::BETA0_LIST.to_vec());
        assert_eq!(cfg.gamma_rate, defaults::GAMMA_RATE);
        assert_eq!(cfg.lambda, defaults::LAMBDA);
        assert_eq!(cfg.theta0, defaults::THETA0);
        assert_eq!(cfg.theta_dot0, defaults::THETA_DOT0);
        assert_eq!(cfg.tol, defaults::TOL);
        assert_eq!(cfg.xi_span, defaults::XI_SPAN);
        assert_eq!(cfg.p_min, defaults::P_MIN);
        assert_eq!(cfg.omega0, defaults::OMEGA0);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn json_roundtrip_and_unknown_keys() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        let partial: RunConfig = serde_json::from_str(r#"{"gamma_rate": 2.0}"#).unwrap();
        assert_eq!(partial.gamma_rate, 2.0);
        assert_eq!(partial.lambda, defaults::LAMBDA);
        assert!(serde_json::from_str::<RunConfig>(r#"{"gamma": 2.0}"#).is_err());
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut cfg = RunConfig::default();
        cfg.beta0 = vec![];
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.beta0 = vec![-1.0];
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.tol = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = RunConfig::default();
        cfg.scheme = Some("bogus".to_string());
        assert!(cfg.validate().is_err());
    }
}
