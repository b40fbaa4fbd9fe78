use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{PsychParams, SocialParams};

/// Where the incoming piece of information `i` comes from at an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExchangeRule {
    /// The partner's current scaled opinion.
    PartnerOpinion,
    /// A fresh draw, uniform on (-1, 1), independent of the partner.
    #[default]
    UniformRandom,
}

/// How an agent's opinion responds to new `(A, I)` at an event.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpinionMode {
    /// Jump to the attractor whose basin holds the previous opinion.
    #[default]
    QuasiStatic,
    /// Relax the opinion ODE with RK4 for `settle_seconds` at the event's
    /// frozen `(A, I)`.
    Integrate {
        dt: f64,
        #[serde(default = "default_settle_seconds")]
        settle_seconds: f64,
    },
}

fn default_settle_seconds() -> f64 {
    200.0
}

fn default_lambda() -> f64 {
    0.3
}

fn default_events() -> u32 {
    200
}

fn default_attention() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default)]
    pub params: PsychParams,
    pub n_agents: u32,
    pub tau_seconds: f64,
    /// Standard deviation of the inter-arrival gap as a fraction of `τ`.
    #[serde(default)]
    pub jitter_w: f64,
    #[serde(default)]
    pub exchange_rule: ExchangeRule,
    #[serde(default = "default_lambda")]
    pub smoothing_lambda: f64,
    #[serde(default = "default_events")]
    pub events_per_agent: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub opinion_mode: OpinionMode,
    #[serde(default = "default_attention")]
    pub initial_attention: f64,
    /// Emit a snapshot every this many seconds; by default only the initial
    /// and final states are recorded.
    #[serde(default)]
    pub snapshot_interval_seconds: Option<f64>,
    /// Optional per-agent arrival periods, overriding `tau_seconds`.
    #[serde(default)]
    pub tau_per_agent: Option<Vec<f64>>,
}

impl SimulationConfig {
    pub fn new(n_agents: u32, tau_seconds: f64) -> Self {
        SimulationConfig {
            params: PsychParams::default(),
            n_agents,
            tau_seconds,
            jitter_w: 0.0,
            exchange_rule: ExchangeRule::default(),
            smoothing_lambda: default_lambda(),
            events_per_agent: default_events(),
            seed: 0,
            opinion_mode: OpinionMode::default(),
            initial_attention: default_attention(),
            snapshot_interval_seconds: None,
            tau_per_agent: None,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let config: SimulationConfig = serde_json::from_str(s)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::ReadInput {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn social(&self) -> Result<SocialParams> {
        SocialParams::new(self.tau_seconds, self.n_agents)
    }

    pub fn decay_rate(&self) -> f64 {
        self.params.decay_rate(self.n_agents)
    }

    pub fn tau_for(&self, agent: usize) -> f64 {
        self.tau_per_agent
            .as_ref()
            .map_or(self.tau_seconds, |taus| taus[agent])
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.social()?;
        if !(self.jitter_w >= 0.0 && self.jitter_w.is_finite()) {
            return Err(Error::invalid(format!(
                "jitter_w must be non-negative, got {}",
                self.jitter_w
            )));
        }
        if !(self.smoothing_lambda > 0.0 && self.smoothing_lambda <= 1.0) {
            return Err(Error::invalid(format!(
                "smoothing_lambda must lie in (0, 1], got {}",
                self.smoothing_lambda
            )));
        }
        if !(0.0..=self.params.a_max).contains(&self.initial_attention) {
            return Err(Error::invalid(format!(
                "initial_attention {} outside [0, a_max]",
                self.initial_attention
            )));
        }
        if let OpinionMode::Integrate { dt, settle_seconds } = self.opinion_mode {
            if !(dt > 0.0 && dt.is_finite())
                || !(settle_seconds >= 0.0 && settle_seconds.is_finite())
            {
                return Err(Error::invalid(format!(
                    "integrate mode needs dt > 0 and settle_seconds >= 0, got {dt} and {settle_seconds}"
                )));
            }
        }
        if let Some(dt) = self.snapshot_interval_seconds {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::invalid(format!(
                    "snapshot_interval_seconds must be positive, got {dt}"
                )));
            }
        }
        if let Some(taus) = &self.tau_per_agent {
            if taus.len() != self.n_agents as usize {
                return Err(Error::invalid(format!(
                    "tau_per_agent has {} entries for {} agents",
                    taus.len(),
                    self.n_agents
                )));
            }
            if let Some(t) = taus.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
                return Err(Error::invalid(format!(
                    "per-agent tau must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Independent random streams derived from one seed.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Stream {
    Init = 0,
    Schedule = 1,
    Interaction = 2,
}

pub(crate) fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
