//! Polarization number `P = τ/N²` (seconds) and its critical values.
//!
//! `P1` is where the attention peak `A_UP` drops to `A_crit` (above it the
//! fold is never reached) and `P2` is where the trough `A_LP` reaches
//! `A_crit` (below it the individual never leaves the fold).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{PsychParams, SocialParams, SECONDS_PER_HOUR};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolarizationNumber(f64);

impl PolarizationNumber {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p.is_finite() {
            Ok(PolarizationNumber(p))
        } else {
            Err(Error::invalid(format!(
                "polarization number must be positive, got {p}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn polarization_number(social: &SocialParams) -> PolarizationNumber {
    let n = f64::from(social.n_agents);
    PolarizationNumber(social.tau_seconds / (n * n))
}

/// `P1` does not exist when `k A_max ≥ A_crit`: the peak never falls below
/// the fold onset however rare the information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalP1 {
    Finite(f64),
    Unbounded,
}

impl CriticalP1 {
    pub fn finite(self) -> Option<f64> {
        match self {
            CriticalP1::Finite(p) => Some(p),
            CriticalP1::Unbounded => None,
        }
    }
}

pub fn critical_p1(params: &PsychParams) -> CriticalP1 {
    let ratio = params.k * params.a_max / params.a_crit;
    if ratio >= 1.0 {
        return CriticalP1::Unbounded;
    }
    CriticalP1::Finite(-((1.0 - ratio) / (1.0 - params.k)).ln() / (2.0 * params.k))
}

pub fn critical_p2(params: &PsychParams) -> f64 {
    let ratio = params.k * params.a_max / params.a_crit;
    (ratio + 1.0 - params.k).ln() / (2.0 * params.k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    NonPolarized,
    Transition,
    Polarized,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::NonPolarized => "non_polarized",
            Regime::Transition => "transition",
            Regime::Polarized => "polarized",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "non_polarized" => Ok(Regime::NonPolarized),
            "transition" => Ok(Regime::Transition),
            "polarized" => Ok(Regime::Polarized),
            other => Err(Error::invalid(format!("unknown regime {other:?}"))),
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeClassification {
    pub regime: Regime,
    pub p1: CriticalP1,
    pub p2: f64,
}

/// Classifies `p`; exactly `P1` or `P2` counts as the adjacent outer regime.
pub fn classify_regime(p: PolarizationNumber, params: &PsychParams) -> RegimeClassification {
    let p1 = critical_p1(params);
    let p2 = critical_p2(params);
    let p = p.value();
    let regime = match p1 {
        CriticalP1::Finite(p1) if p >= p1 => Regime::NonPolarized,
        _ if p <= p2 => Regime::Polarized,
        _ => Regime::Transition,
    };
    RegimeClassification { regime, p1, p2 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeCell {
    pub tau_hours: f64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "P")]
    pub p: f64,
    pub regime: Regime,
}

/// Classifies every `(τ, N)` pair; rows are ordered by `τ`, then `N`.
pub fn regime_map(
    tau_hours: &[f64],
    n_values: &[u32],
    params: &PsychParams,
) -> Result<Vec<RegimeCell>> {
    if tau_hours.is_empty() || n_values.is_empty() {
        return Err(Error::invalid("regime map needs non-empty τ and N ranges"));
    }
    let pairs: Vec<(f64, u32)> = tau_hours
        .iter()
        .flat_map(|&t| n_values.iter().map(move |&n| (t, n)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(tau_h, n)| {
            let social = SocialParams::from_hours(tau_h, n)?;
            let p = polarization_number(&social);
            Ok(RegimeCell {
                tau_hours: tau_h,
                n,
                p: p.value(),
                regime: classify_regime(p, params).regime,
            })
        })
        .collect()
}

/// `τ` in hours at which a network of size `n` sits exactly at `p_crit`.
pub fn boundary_tau_hours(p_crit: f64, n: u32) -> f64 {
    p_crit * f64::from(n).powi(2) / SECONDS_PER_HOUR
}

/// `count` log-spaced values covering `[lo, hi]`.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && count >= 1) {
        return Err(Error::invalid(format!(
            "log range needs 0 < lo <= hi and at least one point, got [{lo}, {hi}] x {count}"
        )));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let (l, h) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|j| {
            if j + 1 == count {
                hi
            } else {
                (l + (h - l) * j as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// Distinct integers, roughly log-spaced over `[lo, hi]`.
pub fn log_space_int(lo: u32, hi: u32, count: usize) -> Result<Vec<u32>> {
    let mut out: Vec<u32> = log_space(f64::from(lo), f64::from(hi), count)?
        .into_iter()
        .map(|x| x.round() as u32)
        .collect();
    out.dedup();
    Ok(out)
}
