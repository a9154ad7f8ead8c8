//! Serializable run configuration. Every run is reproducible from its config.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::integrator::IntegrationConfig;
use crate::models::{ModelKind, State3, SystemParams, REFERENCE_INITIAL_STATE};
use crate::sync::UpdateLaw;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    Lyapunov,
    Equilibria,
    Stabilize,
    SyncActive,
    SyncAdaptive,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Lyapunov => "lyapunov",
            Command::Equilibria => "equilibria",
            Command::Stabilize => "stabilize",
            Command::SyncActive => "sync-active",
            Command::SyncAdaptive => "sync-adaptive",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Initial state used by default for each model kind.
pub fn default_initial_state(kind: ModelKind) -> State3 {
    match kind {
        ModelKind::HollingII => [1.78, 0.502, 1.01],
        _ => REFERENCE_INITIAL_STATE,
    }
}

pub fn default_params(kind: ModelKind) -> SystemParams {
    match kind {
        ModelKind::Linear => SystemParams::CHAOTIC,
        ModelKind::HollingII => SystemParams::HOLLING_II,
        ModelKind::HollingIII => SystemParams::HOLLING_III,
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub model: ModelKind,
    pub x0: State3,
    /// Second initial state for paired (sensitivity) simulations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0_pair: Option<State3>,
    /// Stabilization target; the axial equilibrium when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<State3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gains: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response_x0: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimates_x0: Option<[f64; 2]>,
    #[serde(default)]
    pub update_law: UpdateLaw,
    /// Conditional (5-D) spectrum instead of the 3-D one.
    #[serde(default)]
    pub coupled: bool,
    #[serde(default = "default_renorm")]
    pub renorm_interval: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub params: SystemParams,
    pub integration: IntegrationConfig,
}

fn default_renorm() -> f64 {
    1.0
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        let mut cfg = RunConfig {
            command,
            model: ModelKind::Linear,
            x0: REFERENCE_INITIAL_STATE,
            x0_pair: None,
            target: None,
            gains: None,
            response_x0: None,
            estimates_x0: None,
            update_law: UpdateLaw::Lyapunov,
            coupled: false,
            renorm_interval: default_renorm(),
            out: None,
            params: SystemParams::CHAOTIC,
            integration: IntegrationConfig::default(),
        };
        match command {
            Command::Simulate | Command::Equilibria => {}
            Command::Lyapunov => {
                cfg.integration = IntegrationConfig::new(0.005, 5200.0).with_transient(200.0);
            }
            Command::Stabilize => {
                cfg.integration = IntegrationConfig::new(0.005, 200.0);
                cfg.gains = Some(vec![10.0, 5.0, 5.0]);
            }
            Command::SyncActive => {
                cfg.integration = IntegrationConfig::new(0.005, 500.0);
                cfg.gains = Some(vec![0.000024, 1.345]);
                cfg.response_x0 = Some([1.0, 1.414]);
            }
            Command::SyncAdaptive => {
                cfg.x0 = [4.0, 1.4, 1.41];
                cfg.integration = IntegrationConfig::new(0.005, 500.0);
                cfg.gains = Some(vec![0.0038, 2.0]);
                cfg.response_x0 = Some([1.0, 1.414]);
                cfg.estimates_x0 = Some([3.9, 4.0]);
            }
        }
        cfg
    }

    /// Switches the model, resetting params and initial state to that
    /// model's defaults unless `keep_params` / `keep_x0`.
    pub fn set_model(&mut self, kind: ModelKind, keep_params: bool, keep_x0: bool) {
        self.model = kind;
        if !keep_params {
            self.params = default_params(kind);
        }
        if !keep_x0 {
            self.x0 = default_initial_state(kind);
        }
    }

    /// Parses a (possibly partial) TOML config. Missing keys take the
    /// defaults of the command, which comes from `command` or the file.
    pub fn from_toml(text: &str, command: Option<Command>) -> Result<Self, String> {
        let file: toml::Table = text.parse().map_err(|e| format!("config is not valid TOML: {e}"))?;
        let command = match command {
            Some(c) => c,
            None => file
                .get("command")
                .ok_or("config has no `command` key")?
                .clone()
                .try_into()
                .map_err(|e| format!("bad command: {e}"))?,
        };
        let mut base = RunConfig::defaults(command);
        if let Some(model) = file.get("model") {
            let kind: ModelKind = model.clone().try_into().map_err(|e| format!("bad model: {e}"))?;
            base.set_model(kind, file.contains_key("params"), file.contains_key("x0"));
        }
        let mut merged = toml::Table::try_from(&base).map_err(|e| e.to_string())?;
        merge(&mut merged, file);
        merged.insert("command".into(), toml::Value::String(command.as_str().into()));
        let cfg: RunConfig = merged.try_into().map_err(|e| format!("invalid config: {e}"))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config always serializes")
    }
}

fn merge(into: &mut toml::Table, from: toml::Table) {
    for (k, v) in from {
        match (into.get_mut(&k), v) {
            (Some(toml::Value::Table(a)), toml::Value::Table(b)) => merge(a, b),
            (_, v) => {
                into.insert(k, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_every_command() {
        for c in [
            Command::Simulate,
            Command::Lyapunov,
            Command::Equilibria,
            Command::Stabilize,
            Command::SyncActive,
            Command::SyncAdaptive,
        ] {
            let mut cfg = RunConfig::defaults(c);
            cfg.out = Some("run.csv".into());
            cfg.params.p = 0.1 + 0.2;
            let back = RunConfig::from_toml(&cfg.to_toml(), None).unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn partial_config_fills_defaults() {
        let cfg = RunConfig::from_toml("command = \"stabilize\"\n[integration]\nt_end = 50.0\n", None).unwrap();
        assert_eq!(cfg.integration.t_end, 50.0);
        assert_eq!(cfg.integration.step, 0.005);
        assert_eq!(cfg.gains, Some(vec![10.0, 5.0, 5.0]));

        let cfg = RunConfig::from_toml("model = \"ht2\"", Some(Command::Simulate)).unwrap();
        assert_eq!(cfg.params, SystemParams::HOLLING_II);
        assert_eq!(cfg.x0, [1.78, 0.502, 1.01]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("command = \"simulate\"\nstep = 0.1\n", None).is_err());
        assert!(RunConfig::from_toml("x0 = [1.0, 2.0, 3.0]", None).is_err());
    }
}
