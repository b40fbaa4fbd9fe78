//! Single-agent attention under jittered information arrivals, compared
//! against the envelope of the strictly periodic case.

use serde::{Deserialize, Serialize};

use super::config::{stream_rng, Stream};
use super::schedule::sample_gap;
use crate::attention::{envelope, simulate_attention, Envelope};
use crate::error::{Error, Result};
use crate::params::{PsychParams, SocialParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterStudy {
    pub params: PsychParams,
    pub tau_seconds: f64,
    pub n_agents: u32,
    pub w: f64,
    pub cycles: usize,
    /// Leading cycles excluded from the statistics.
    pub transient_cycles: usize,
    pub initial_attention: f64,
    pub seed: u64,
}

impl JitterStudy {
    pub fn new(tau_seconds: f64, n_agents: u32, w: f64, cycles: usize) -> Self {
        JitterStudy {
            params: PsychParams::default(),
            tau_seconds,
            n_agents,
            w,
            cycles,
            transient_cycles: 20,
            initial_attention: 1.0,
            seed: 0,
        }
    }
}

/// Per-cycle deviations of the peaks (post-spike) from `A_U` and of the
/// troughs (pre-spike) from `A_L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterReport {
    pub base: Envelope,
    pub cycles_measured: usize,
    pub max_upper_deviation: f64,
    pub max_lower_deviation: f64,
    pub rms_upper_deviation: f64,
    pub rms_lower_deviation: f64,
}

pub fn jitter_envelope_study(study: &JitterStudy) -> Result<JitterReport> {
    study.params.validate()?;
    let social = SocialParams::new(study.tau_seconds, study.n_agents)?;
    if !(study.w >= 0.0 && study.w.is_finite()) {
        return Err(Error::invalid(format!(
            "jitter w must be non-negative, got {}",
            study.w
        )));
    }
    if study.cycles <= study.transient_cycles {
        return Err(Error::invalid(format!(
            "need more cycles ({}) than transient cycles ({})",
            study.cycles, study.transient_cycles
        )));
    }
    let base = envelope(&study.params, &social)?;

    let mut rng = stream_rng(study.seed, Stream::Schedule);
    let mut t = 0.0;
    let schedule: Vec<f64> = (0..study.cycles)
        .map(|_| {
            t += sample_gap(&mut rng, study.tau_seconds, study.w);
            t
        })
        .collect();
    let series = simulate_attention(
        study.initial_attention,
        &study.params,
        &social,
        &schedule,
        t,
    )?;

    let measured = &series.arrivals[study.transient_cycles..];
    let n = measured.len() as f64;
    let upper: Vec<f64> = measured.iter().map(|ev| ev.after - base.a_upper).collect();
    let lower: Vec<f64> = measured.iter().map(|ev| ev.before - base.a_lower).collect();
    let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    let rms = |v: &[f64]| (v.iter().map(|d| d * d).sum::<f64>() / n).sqrt();
    Ok(JitterReport {
        base,
        cycles_measured: measured.len(),
        max_upper_deviation: max_abs(&upper),
        max_lower_deviation: max_abs(&lower),
        rms_upper_deviation: rms(&upper),
        rms_lower_deviation: rms(&lower),
    })
}
