//! Attention dynamics: exponential decay between information arrivals and a
//! discrete spike `ΔA = k (A_max - A)` at each arrival.
//!
//! Between events the attention is propagated with the closed form
//! `A(t) = A0 e^(-b t)`, so trajectories carry no integration error.
//! Under strictly periodic arrivals the post-spike values converge
//! geometrically (ratio `(1-k) e^(-bτ)`) to the periodic fixed point
//! `A_0τ = k A_max / (1 - (1-k) e^(-bτ))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{PsychParams, SocialParams};

/// Bounds of the periodic attractor: the post-spike peak and pre-spike trough.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub a_upper: f64,
    pub a_lower: f64,
}

/// Attention after `t` seconds of decay at rate `b`.
pub fn decay(a0: f64, b: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!(
            "decay time must be non-negative, got {t}"
        )));
    }
    if !(a0 >= 0.0 && a0.is_finite()) {
        return Err(Error::invalid(format!(
            "attention must be non-negative, got {a0}"
        )));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::invalid(format!(
            "decay rate must be positive, got {b}"
        )));
    }
    Ok(decay_unchecked(a0, b, t))
}

#[inline]
pub(crate) fn decay_unchecked(a0: f64, b: f64, t: f64) -> f64 {
    a0 * (-b * t).exp()
}

/// Attention right after an information arrival.
pub fn spike(a: f64, params: &PsychParams) -> Result<f64> {
    if !(a >= 0.0 && a <= params.a_max) {
        return Err(Error::invalid(format!(
            "attention {a} outside [0, a_max = {}]",
            params.a_max
        )));
    }
    Ok(spike_unchecked(a, params))
}

#[inline]
pub(crate) fn spike_unchecked(a: f64, params: &PsychParams) -> f64 {
    a + params.k * (params.a_max - a)
}

/// Periodic fixed point `A_0τ` for arrivals every `social.tau_seconds`.
pub fn periodic_fixed_point(params: &PsychParams, social: &SocialParams) -> Result<f64> {
    params.validate()?;
    let b = social.decay_rate(params);
    Ok(fixed_point_for_exponent(params, b * social.tau_seconds))
}

/// `k A_max / (1 - (1-k) e^(-x))`, with `x = bτ = 2kP`.
fn fixed_point_for_exponent(params: &PsychParams, x: f64) -> f64 {
    params.k * params.a_max / (1.0 - (1.0 - params.k) * (-x).exp())
}

/// Envelope of the periodic attractor for a network with the given arrival
/// period and size.
pub fn envelope(params: &PsychParams, social: &SocialParams) -> Result<Envelope> {
    envelope_of_p(
        params,
        social.tau_seconds / f64::from(social.n_agents).powi(2),
    )
}

/// Envelope as a function of the polarization number `P = τ/N²` (seconds).
pub fn envelope_of_p(params: &PsychParams, p: f64) -> Result<Envelope> {
    params.validate()?;
    if !(p > 0.0) {
        return Err(Error::invalid(format!(
            "polarization number must be positive, got {p}"
        )));
    }
    let x = 2.0 * params.k * p;
    let a_upper = fixed_point_for_exponent(params, x);
    Ok(Envelope {
        a_upper,
        a_lower: a_upper * (-x).exp(),
    })
}

/// One information arrival: attention just before and just after the spike.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalRecord {
    pub t: f64,
    pub before: f64,
    pub after: f64,
}

/// Piecewise-exponential attention trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionSeries {
    pub a0: f64,
    pub decay_rate: f64,
    pub horizon: f64,
    pub arrivals: Vec<ArrivalRecord>,
}

impl AttentionSeries {
    /// Breakpoints of the trajectory: the start, both sides of every spike,
    /// and the horizon.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(2 * self.arrivals.len() + 2);
        out.push((0.0, self.a0));
        for ev in &self.arrivals {
            if ev.t > 0.0 {
                out.push((ev.t, ev.before));
            }
            out.push((ev.t, ev.after));
        }
        let (t_last, a_last) = *out.last().expect("trajectory has a start point");
        if self.horizon > t_last {
            out.push((
                self.horizon,
                decay_unchecked(a_last, self.decay_rate, self.horizon - t_last),
            ));
        }
        out
    }

    /// Attention at time `t`, right-continuous at arrivals.
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.arrivals.partition_point(|ev| ev.t <= t);
        let (t0, a0) = match idx {
            0 => (0.0, self.a0),
            i => (self.arrivals[i - 1].t, self.arrivals[i - 1].after),
        };
        decay_unchecked(a0, self.decay_rate, t - t0)
    }

    /// Evenly spaced samples plus the spike breakpoints, sorted by time.
    pub fn sampled(&self, step: f64) -> Vec<(f64, f64)> {
        let mut out = self.points();
        if step > 0.0 {
            let n = (self.horizon / step).floor() as usize;
            out.extend((1..n).map(|i| {
                let t = i as f64 * step;
                (t, self.value_at(t))
            }));
            out.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        out
    }

    pub fn peaks(&self) -> impl Iterator<Item = f64> + '_ {
        self.arrivals.iter().map(|ev| ev.after)
    }

    pub fn troughs(&self) -> impl Iterator<Item = f64> + '_ {
        self.arrivals.iter().map(|ev| ev.before)
    }
}

/// Arrival times `τ, 2τ, ...` up to and including `horizon`.
pub fn uniform_schedule(tau_seconds: f64, horizon: f64) -> Vec<f64> {
    let n = (horizon / tau_seconds + 1e-9).floor() as usize;
    (1..=n).map(|i| i as f64 * tau_seconds).collect()
}

/// Propagates attention from `a0` through the given arrival schedule.
pub fn simulate_attention(
    a0: f64,
    params: &PsychParams,
    social: &SocialParams,
    schedule: &[f64],
    horizon: f64,
) -> Result<AttentionSeries> {
    params.validate()?;
    if !(0.0..=params.a_max).contains(&a0) {
        return Err(Error::invalid(format!(
            "initial attention {a0} outside [0, {}]",
            params.a_max
        )));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::invalid(format!("invalid horizon {horizon}")));
    }
    if let Some(w) = schedule.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::invalid(format!(
            "schedule must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    if let Some(&t) = schedule.iter().find(|&&t| !(0.0..=horizon).contains(&t)) {
        return Err(Error::invalid(format!(
            "event at {t} s lies outside [0, {horizon}]"
        )));
    }

    let b = social.decay_rate(params);
    let mut a = a0;
    let mut t_prev = 0.0;
    let arrivals = schedule
        .iter()
        .map(|&t| {
            let before = decay_unchecked(a, b, t - t_prev);
            a = spike_unchecked(before, params);
            t_prev = t;
            ArrivalRecord {
                t,
                before,
                after: a,
            }
        })
        .collect();
    Ok(AttentionSeries {
        a0,
        decay_rate: b,
        horizon,
        arrivals,
    })
}
