// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::backend::HttpConfig;
use crate::verilog::RolePatterns;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Http,
    #[default]
    Replay,
}

/// Session settings, read from a TOML file. Relative paths are resolved
/// against the file's directory by [`load_config`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SessionConfig {
    pub design: String,
    /// Label written into reports, e.g. "generated".
    pub tool: String,
    pub max_iterations: u32,
    pub backend: BackendKind,
    pub interactive_confirm: bool,
    pub spec: Option<PathBuf>,
    pub block_diagram: Option<PathBuf>,
    pub rtl: Option<PathBuf>,
    /// Select an RTL module by name.
    pub module: Option<String>,
    /// Feed only the module header to the model.
    pub header_only: bool,
    pub context: Vec<PathBuf>,
    pub traces: Vec<PathBuf>,
    /// Defaults to the inventory's clock-role signal.
    pub clock: Option<String>,
    pub replay_dir: Option<PathBuf>,
    /// Assertions known to hold on the design.
    pub references: Option<PathBuf>,
    pub roles: RolePatterns,
    /// Overrides for RTL parameters, e.g. `N`.
    pub parameters: BTreeMap<String, i64>,
    pub http: HttpConfig,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            design: "design".into(),
            tool: "generated".into(),
            max_iterations: 5,
            backend: BackendKind::Replay,
            interactive_confirm: false,
            spec: None,
            block_diagram: None,
            rtl: None,
            module: None,
            header_only: false,
            context: Vec::new(),
            traces: Vec::new(),
            clock: None,
            replay_dir: None,
            references: None,
            roles: RolePatterns::default(),
            parameters: BTreeMap::new(),
            http: HttpConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("max_iterations must be at least 1")]
    ZeroIterations,
}

impl SessionConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        let cfg: SessionConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_iterations == 0 {
            return Err(ConfigError::ZeroIterations);
        }
        Ok(())
    }

    fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [&mut self.spec, &mut self.block_diagram, &mut self.rtl, &mut self.replay_dir, &mut self.references]
            .into_iter()
            .flatten()
        {
            fix(p);
        }
        self.context.iter_mut().for_each(fix);
        self.traces.iter_mut().for_each(fix);
    }
}

pub fn load_config(path: &Path) -> Result<SessionConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Read { path: path.display().to_string(), message: e.to_string() })?;
    let mut cfg = SessionConfig::from_toml(&text)
        .map_err(|message| ConfigError::Parse { path: path.display().to_string(), message })?;
    cfg.validate()?;
    cfg.resolve(path.parent().unwrap_or(Path::new(".")));
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = SessionConfig::from_toml(
            "design = \"t\"\nmax_iterations = 3\ntraces = [\"a.vcd\"]\n[parameters]\nN = 4\n[http]\nmodel = \"m\"\n",
        )
        .unwrap();
        assert_eq!(cfg.max_iterations, 3);
        assert_eq!(cfg.parameters["N"], 4);
        assert_eq!(cfg.http.model, "m");
        assert_eq!(cfg.http.api_key_env, "SVAFLOW_API_KEY");
        assert_eq!(cfg.backend, BackendKind::Replay);
        assert!(SessionConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn paths_resolve_against_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.toml");
        std::fs::write(&p, "rtl = \"x.sv\"\ntraces = [\"t/a.vcd\", \"/abs.vcd\"]\n").unwrap();
        let cfg = load_config(&p).unwrap();
        assert_eq!(cfg.rtl.unwrap(), dir.path().join("x.sv"));
        assert_eq!(cfg.traces, vec![dir.path().join("t/a.vcd"), PathBuf::from("/abs.vcd")]);
        std::fs::write(&p, "max_iterations = 0\n").unwrap();
        assert!(matches!(load_config(&p), Err(ConfigError::ZeroIterations)));
    }
}
