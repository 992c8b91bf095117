use serde::Serialize;
use thiserror::Error;
use wco_core::theorems::{FamilyParams, FamilyTag};
use wco_core::CheckConfig;

/// Problems with the invocation itself; these map to exit code 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("cannot parse symbol: {0}")]
    Symbol(String),
    #[error("cannot write report to {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamSource {
    Draws(usize),
    Explicit(FamilyParams),
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub family: FamilyTag,
    pub order: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub safety_radius: f64,
    pub source: ParamSource,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), InputError> {
        validate_common(self.order, self.tolerance)?;
        if !(self.safety_radius > 0.0 && self.safety_radius < 1.0) {
            return Err(InputError::Config(format!("safety radius must lie in (0, 1), got {}", self.safety_radius)));
        }
        match &self.source {
            ParamSource::Draws(0) => Err(InputError::Config("at least one draw is required".into())),
            ParamSource::Draws(_) if self.family == FamilyTag::Algebraic => {
                Err(InputError::Config("the algebraic family takes explicit symbols, use --params".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn check_config(&self) -> CheckConfig {
        CheckConfig::default().with_tolerance(self.tolerance)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyConfig {
    pub psi: String,
    pub phi: String,
    pub order: usize,
    pub tolerance: f64,
}

impl ClassifyConfig {
    pub fn validate(&self) -> Result<(), InputError> {
        validate_common(self.order, self.tolerance)
    }
}

fn validate_common(order: usize, tolerance: f64) -> Result<(), InputError> {
    if order < 8 {
        return Err(InputError::Config(format!("order must be at least 8, got {order}")));
    }
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(InputError::Config(format!("tolerance must be positive, got {tolerance}")));
    }
    Ok(())
}

/// Parses `--params` for `family`.
pub fn parse_params(family: FamilyTag, json: &str) -> Result<FamilyParams, InputError> {
    let value: serde_json::Value = serde_json::from_str(json).map_err(|e| InputError::Params(e.to_string()))?;
    FamilyParams::from_json(family, value).map_err(|e| InputError::Params(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> RunConfig {
        RunConfig {
            family: FamilyTag::Unitary,
            order: 128,
            tolerance: 1e-8,
            seed: 1,
            safety_radius: 0.6,
            source: ParamSource::Draws(3),
        }
    }

    #[test]
    fn defaults_are_valid() {
        assert!(config().validate().is_ok());
    }

    #[test]
    fn rejects_out_of_range_values() {
        for bad in [
            RunConfig { order: 7, ..config() },
            RunConfig { tolerance: 0.0, ..config() },
            RunConfig { tolerance: f64::NAN, ..config() },
            RunConfig { safety_radius: 1.0, ..config() },
            RunConfig { safety_radius: 0.0, ..config() },
            RunConfig { source: ParamSource::Draws(0), ..config() },
            RunConfig { family: FamilyTag::Algebraic, ..config() },
        ] {
            assert!(matches!(bad.validate(), Err(InputError::Config(_))), "{bad:?}");
        }
    }

    #[test]
    fn params_must_match_the_family() {
        assert!(parse_params(FamilyTag::Unitary, r#"{"q": 0.3, "mu1": 1, "mu2": 1}"#).is_ok());
        assert!(parse_params(FamilyTag::Unitary, r#"{"family": "hermitian", "q": 0.3}"#).is_err());
        assert!(parse_params(FamilyTag::Unitary, "not json").is_err());
    }
}
