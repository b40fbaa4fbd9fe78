//! Agent-based simulation of `N` individuals receiving information at
//! (optionally jittered) period `τ`.

mod config;
mod jitter;
mod schedule;
mod sim;

pub use config::{ExchangeRule, OpinionMode, SimulationConfig};
pub use jitter::{jitter_envelope_study, JitterReport, JitterStudy};
pub use schedule::{agent_schedule, build_schedule, sample_gap};
pub use sim::{
    init_population, neutral_band_occupancy, run_simulation, run_simulation_observed, step_event,
    update_opinion_quasistatic, Agent, AgentState, EventRecord, Population, SimulationOutput,
    Snapshot,
};
