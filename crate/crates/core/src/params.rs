//! Psychological and sociological parameters shared by every model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SECONDS_PER_HOUR: f64 = 3600.0;

/// Constants governing one individual's attention and opinion dynamics.
///
/// `k` plays two roles: it is the fraction of the remaining headroom
/// `a_max - A` gained on each information arrival, and it sets the decay
/// rate `b = 2k/N²` (per second).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsychParams {
    pub k: f64,
    pub a_max: f64,
    pub a_crit: f64,
}

impl Default for PsychParams {
    fn default() -> Self {
        PsychParams {
            k: 0.2,
            a_max: 2.0,
            a_crit: 0.5,
        }
    }
}

impl PsychParams {
    pub fn new(k: f64, a_max: f64, a_crit: f64) -> Result<Self> {
        let params = PsychParams { k, a_max, a_crit };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k < 1.0) {
            return Err(Error::invalid(format!(
                "k must lie in (0, 1), got {}",
                self.k
            )));
        }
        if !(self.a_max > 0.0 && self.a_max.is_finite()) {
            return Err(Error::invalid(format!(
                "a_max must be positive, got {}",
                self.a_max
            )));
        }
        if !(self.a_crit > 0.0 && self.a_crit < self.a_max) {
            return Err(Error::invalid(format!(
                "a_crit must lie in (0, a_max = {}), got {}",
                self.a_max, self.a_crit
            )));
        }
        Ok(())
    }

    /// Decay rate `b = 2k/N²` in 1/s for a network of `n_agents`.
    pub fn decay_rate(&self, n_agents: u32) -> f64 {
        let n = f64::from(n_agents);
        2.0 * self.k / (n * n)
    }
}

/// Information-arrival period and network size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SocialParams {
    pub tau_seconds: f64,
    pub n_agents: u32,
}

impl SocialParams {
    pub fn new(tau_seconds: f64, n_agents: u32) -> Result<Self> {
        if !(tau_seconds > 0.0 && tau_seconds.is_finite()) {
            return Err(Error::invalid(format!(
                "tau must be a positive number of seconds, got {tau_seconds}"
            )));
        }
        if n_agents < 2 {
            return Err(Error::invalid(format!(
                "network size must be at least 2, got {n_agents}"
            )));
        }
        Ok(SocialParams {
            tau_seconds,
            n_agents,
        })
    }

    pub fn from_hours(tau_hours: f64, n_agents: u32) -> Result<Self> {
        Self::new(tau_hours * SECONDS_PER_HOUR, n_agents)
    }

    pub fn tau_hours(&self) -> f64 {
        self.tau_seconds / SECONDS_PER_HOUR
    }

    pub fn decay_rate(&self, psych: &PsychParams) -> f64 {
        psych.decay_rate(self.n_agents)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        PsychParams::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(PsychParams::new(1.0, 2.0, 0.5).is_err());
        assert!(PsychParams::new(0.0, 2.0, 0.5).is_err());
        assert!(PsychParams::new(0.2, -1.0, 0.5).is_err());
        assert!(PsychParams::new(0.2, 2.0, 2.0).is_err());
        assert!(PsychParams::new(0.2, 2.0, 0.0).is_err());
        assert!(SocialParams::new(0.0, 100).is_err());
        assert!(SocialParams::new(10.0, 1).is_err());
    }

    #[test]
    fn decay_rate_for_hundred_agents() {
        let social = SocialParams::from_hours(6.0, 100).unwrap();
        assert_eq!(social.tau_seconds, 21600.0);
        let b = social.decay_rate(&PsychParams::default());
        assert!((b - 4e-5).abs() < 1e-18);
    }
}
