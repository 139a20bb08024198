//! Declarative run configuration. The field names are part of the external
//! contract and versioned by the `schema` integer.

use serde::Deserialize;
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u64,
    pub problem: ProblemSpec,
    /// Single method (for `run`).
    #[serde(default)]
    pub method: Option<MethodSpec>,
    /// Method list (for `compare`).
    #[serde(default)]
    pub methods: Vec<MethodSpec>,
    pub budget: Budget,
    #[serde(default)]
    pub outputs: Outputs,
    /// Named bound checks evaluated after the run.
    #[serde(default)]
    pub verify: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub iterations: usize,
    #[serde(default)]
    pub max_oracle_calls: Option<u64>,
    #[serde(default)]
    pub max_seconds: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub trace: Option<String>,
    #[serde(default)]
    pub plot: Option<String>,
}

/// Config-loading error, surfaced on exit code 1 with the offending field.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn load(path: &std::path::Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{e}")))?;
    if cfg.schema != SCHEMA_VERSION {
        return Err(ConfigError(format!(
            "field 'schema': expected {SCHEMA_VERSION}, got {}",
            cfg.schema
        )));
    }
    if cfg.budget.iterations == 0 {
        return Err(ConfigError("field 'budget.iterations': must be positive".into()));
    }
    if let Some(c) = cfg.budget.max_oracle_calls {
        if c == 0 {
            return Err(ConfigError(
                "field 'budget.max_oracle_calls': must be positive".into(),
            ));
        }
    }
    if let Some(s) = cfg.budget.max_seconds {
        if !(s > 0.0) {
            return Err(ConfigError("field 'budget.max_seconds': must be positive".into()));
        }
    }
    Ok(cfg)
}

/// Typed parameter access with config-error reporting that names the field.
pub struct Params<'a> {
    map: &'a BTreeMap<String, serde_json::Value>,
    scope: &'a str,
}

impl<'a> Params<'a> {
    pub fn new(map: &'a BTreeMap<String, serde_json::Value>, scope: &'a str) -> Self {
        Params { map, scope }
    }

    pub fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        self.f64_opt(key)?
            .ok_or_else(|| ConfigError(format!("field '{}.{key}': missing", self.scope)))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| {
                ConfigError(format!("field '{}.{key}': expected a number", self.scope))
            }),
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize, ConfigError> {
        self.usize_opt(key)?
            .ok_or_else(|| ConfigError(format!("field '{}.{key}': missing", self.scope)))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        Ok(self.usize_opt(key)?.unwrap_or(default))
    }

    pub fn usize_opt(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|u| Some(u as usize))
                .ok_or_else(|| {
                    ConfigError(format!(
                        "field '{}.{key}': expected a nonnegative integer",
                        self.scope
                    ))
                }),
        }
    }

    pub fn str_or(&self, key: &str, default: &str) -> Result<String, ConfigError> {
        match self.map.get(key) {
            None => Ok(default.to_string()),
            Some(v) => v.as_str().map(str::to_string).ok_or_else(|| {
                ConfigError(format!("field '{}.{key}': expected a string", self.scope))
            }),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v.as_bool().ok_or_else(|| {
                ConfigError(format!("field '{}.{key}': expected a boolean", self.scope))
            }),
        }
    }

    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => {
                let arr = v.as_array().ok_or_else(|| {
                    ConfigError(format!("field '{}.{key}': expected an array", self.scope))
                })?;
                arr.iter()
                    .map(|x| {
                        x.as_f64().ok_or_else(|| {
                            ConfigError(format!(
                                "field '{}.{key}': expected numbers",
                                self.scope
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(Some)
            }
        }
    }
}
