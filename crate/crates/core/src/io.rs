//! CSV and JSON emission and the matching readers.
//!
//! Every number is written with 7 significant digits, trailing zeros trimmed.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::abm::{JitterReport, SimulationOutput, Snapshot};
use crate::cusp::{FoldBoundaryRow, SurfaceRow};
use crate::error::Result;
use crate::params::PsychParams;
use crate::polarization::{critical_p1, critical_p2, RegimeCell};

pub const SIGNIFICANT_DIGITS: usize = 7;

/// `x` with [`SIGNIFICANT_DIGITS`] significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-5..=15).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_owned()))
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Rounds through the text format, so JSON output carries the same digits as CSV.
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

/// A row type with a fixed CSV header.
pub trait CsvRecord {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn write_csv<T: CsvRecord, W: Write>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(T::HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned, R: Read>(input: R) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()?;
    Ok(rows)
}

pub fn csv_string<T: CsvRecord>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttentionRow {
    pub t_seconds: f64,
    pub attention: f64,
}

impl CsvRecord for AttentionRow {
    const HEADER: &'static [&'static str] = &["t_seconds", "attention"];
    fn fields(&self) -> Vec<String> {
        vec![format_sig(self.t_seconds), format_sig(self.attention)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRow {
    #[serde(rename = "P")]
    pub p: f64,
    pub a_upper: f64,
    pub a_lower: f64,
}

impl CsvRecord for EnvelopeRow {
    const HEADER: &'static [&'static str] = &["P", "a_upper", "a_lower"];
    fn fields(&self) -> Vec<String> {
        vec![
            format_sig(self.p),
            format_sig(self.a_upper),
            format_sig(self.a_lower),
        ]
    }
}

impl CsvRecord for SurfaceRow {
    const HEADER: &'static [&'static str] = &["A", "I", "O_scaled", "stability"];
    fn fields(&self) -> Vec<String> {
        vec![
            format_sig(self.a),
            format_sig(self.i),
            format_sig(self.o_scaled),
            self.stability.as_str().to_owned(),
        ]
    }
}

impl CsvRecord for FoldBoundaryRow {
    const HEADER: &'static [&'static str] = &["A", "I_sn_scaled", "E_P"];
    fn fields(&self) -> Vec<String> {
        vec![
            format_sig(self.a),
            format_sig(self.i_sn),
            format_sig(self.e_p),
        ]
    }
}

impl CsvRecord for RegimeCell {
    const HEADER: &'static [&'static str] = &["tau_hours", "N", "P", "regime"];
    fn fields(&self) -> Vec<String> {
        vec![
            format_sig(self.tau_hours),
            self.n.to_string(),
            format_sig(self.p),
            self.regime.as_str().to_owned(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub t_seconds: f64,
    pub agent_id: u32,
    #[serde(rename = "O")]
    pub o: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "I")]
    pub i: f64,
}

impl CsvRecord for SnapshotRow {
    const HEADER: &'static [&'static str] = &["t_seconds", "agent_id", "O", "A", "I"];
    fn fields(&self) -> Vec<String> {
        vec![
            format_sig(self.t_seconds),
            self.agent_id.to_string(),
            format_sig(self.o),
            format_sig(self.a),
            format_sig(self.i),
        ]
    }
}

pub fn snapshot_rows(snapshots: &[Snapshot]) -> Vec<SnapshotRow> {
    snapshots
        .iter()
        .flat_map(|s| {
            s.agents.iter().map(move |a| SnapshotRow {
                t_seconds: s.sim_time_seconds,
                agent_id: a.agent_id,
                o: a.o_scaled,
                a: a.a,
                i: a.i_level,
            })
        })
        .collect()
}

/// `p1` is `null` when it does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub p1: Option<f64>,
    pub p2: f64,
    pub k: f64,
    pub a_max: f64,
    pub a_crit: f64,
}

impl CriticalValues {
    pub fn compute(params: &PsychParams) -> Self {
        CriticalValues {
            p1: critical_p1(params).finite().map(round_sig),
            p2: round_sig(critical_p2(params)),
            k: params.k,
            a_max: params.a_max,
            a_crit: params.a_crit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub final_occupancy: f64,
    pub band_halfwidth: f64,
    #[serde(rename = "P")]
    pub p: f64,
    pub regime: crate::polarization::Regime,
    pub n_agents: u32,
    pub tau_seconds: f64,
    pub seed: u64,
    pub snapshots: usize,
}

impl SimulationSummary {
    pub fn new(
        out: &SimulationOutput,
        config: &crate::abm::SimulationConfig,
        band: f64,
    ) -> Result<Self> {
        Ok(SimulationSummary {
            final_occupancy: round_sig(crate::abm::neutral_band_occupancy(
                out.final_snapshot(),
                band,
            )?),
            band_halfwidth: band,
            p: round_sig(out.p.value()),
            regime: out.regime,
            n_agents: config.n_agents,
            tau_seconds: config.tau_seconds,
            seed: config.seed,
            snapshots: out.snapshots.len(),
        })
    }
}

/// JSON form of a jitter report with rounded numbers.
pub fn jitter_json(report: &JitterReport) -> serde_json::Value {
    serde_json::json!({
        "a_upper_base": round_sig(report.base.a_upper),
        "a_lower_base": round_sig(report.base.a_lower),
        "cycles_measured": report.cycles_measured,
        "max_upper_deviation": round_sig(report.max_upper_deviation),
        "max_lower_deviation": round_sig(report.max_lower_deviation),
        "rms_upper_deviation": round_sig(report.rms_upper_deviation),
        "rms_lower_deviation": round_sig(report.rms_lower_deviation),
    })
}
