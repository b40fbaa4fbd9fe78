use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{stream_rng, ExchangeRule, OpinionMode, SimulationConfig, Stream};
use super::schedule::build_schedule;
use crate::attention::{decay_unchecked, spike_unchecked};
use crate::cusp::{compute_scale_factor, relax_opinion, steady_states, Stability};
use crate::error::{Error, Result};
use crate::params::PsychParams;
use crate::polarization::{classify_regime, polarization_number, PolarizationNumber, Regime};

/// Internal state of one agent. `o` is unscaled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agent {
    pub o: f64,
    pub a: f64,
    pub i_level: f64,
    pub last_event: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub agents: Vec<Agent>,
    pub scale_factor: f64,
}

/// Reported state of one agent; `o_scaled` lies in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub agent_id: u32,
    pub o_scaled: f64,
    pub a: f64,
    pub i_level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub sim_time_seconds: f64,
    pub agents: Vec<AgentState>,
}

/// What happened at one processed event, for observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub t: f64,
    pub agent_id: u32,
    pub partner_id: u32,
    pub a_before: f64,
    pub a_after: f64,
    pub incoming: f64,
    pub i_level: f64,
    pub o_scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutput {
    pub snapshots: Vec<Snapshot>,
    pub p: PolarizationNumber,
    pub regime: Regime,
    pub scale_factor: f64,
}

impl SimulationOutput {
    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots
            .last()
            .expect("a run always records its initial snapshot")
    }
}

fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let x = rng.random_range(-1.0..1.0);
        if x != -1.0 {
            return x;
        }
    }
}

/// Scaled opinions and information levels uniform on (-1, 1); attention at
/// `initial_attention`.
pub fn init_population(config: &SimulationConfig) -> Result<Population> {
    config.validate()?;
    let scale_factor = compute_scale_factor(&config.params);
    let mut rng = stream_rng(config.seed, Stream::Init);
    let agents = (0..config.n_agents)
        .map(|_| {
            let o_scaled = uniform_open(&mut rng);
            let i_level = uniform_open(&mut rng);
            Agent {
                o: o_scaled / scale_factor,
                a: config.initial_attention,
                i_level,
                last_event: 0.0,
            }
        })
        .collect();
    Ok(Population {
        agents,
        scale_factor,
    })
}

/// Follows the attractor whose basin of attraction contains `o_prev`.
///
/// Inside the fold the unstable middle root separates the two basins; when
/// the previous branch has vanished past a saddle node the single remaining
/// attractor is returned. An `o_prev` sitting exactly on the unstable root
/// goes to the side matching the sign of `i_level` (positive for zero).
pub fn update_opinion_quasistatic(o_prev: f64, a: f64, i_level: f64, params: &PsychParams) -> f64 {
    let roots = steady_states(a, i_level, params);
    let stable: Vec<f64> = roots
        .iter()
        .filter(|s| s.stability == Stability::Stable)
        .map(|s| s.o)
        .collect();
    match stable.as_slice() {
        [only] => *only,
        [lower, upper] => {
            let separatrix = roots[1].o;
            let on_separatrix = o_prev == separatrix;
            if o_prev > separatrix || (on_separatrix && i_level >= 0.0) {
                *upper
            } else {
                *lower
            }
        }
        // Only marginal roots left (the cusp point or an exact edge).
        _ => roots
            .iter()
            .map(|s| s.o)
            .min_by(|x, y| (x - o_prev).abs().total_cmp(&(y - o_prev).abs()))
            .expect("a real cubic has at least one real root"),
    }
}

/// Processes one information arrival for `agent` at `sim_time`.
///
/// Attention decays from the agent's last event and spikes; the incoming
/// piece `i` follows `config.exchange_rule`; `I` is smoothed with
/// `smoothing_lambda` and clamped to [-1, 1]; the opinion is then updated per
/// `config.opinion_mode`.
pub fn step_event<R: Rng + ?Sized>(
    agent: &Agent,
    partner: &Agent,
    sim_time: f64,
    config: &SimulationConfig,
    scale_factor: f64,
    rng: &mut R,
) -> Result<(Agent, f64)> {
    let params = &config.params;
    let elapsed = sim_time - agent.last_event;
    if !(elapsed >= 0.0) {
        return Err(Error::invalid(format!(
            "event at {sim_time} s precedes the agent's last event at {} s",
            agent.last_event
        )));
    }
    let a = spike_unchecked(
        decay_unchecked(agent.a, config.decay_rate(), elapsed),
        params,
    );

    let incoming = match config.exchange_rule {
        ExchangeRule::PartnerOpinion => partner.o * scale_factor,
        ExchangeRule::UniformRandom => uniform_open(rng),
    };
    let lambda = config.smoothing_lambda;
    let i_level = ((1.0 - lambda) * agent.i_level + lambda * incoming).clamp(-1.0, 1.0);

    let o = match config.opinion_mode {
        OpinionMode::QuasiStatic => update_opinion_quasistatic(agent.o, a, i_level, params),
        OpinionMode::Integrate { dt, settle_seconds } => {
            relax_opinion(agent.o, &|_| a, &|_| i_level, params, dt, settle_seconds)?
        }
    };
    Ok((
        Agent {
            o,
            a,
            i_level,
            last_event: sim_time,
        },
        incoming,
    ))
}

fn snapshot(pop: &Population, t: f64, b: f64) -> Snapshot {
    Snapshot {
        sim_time_seconds: t,
        agents: pop
            .agents
            .iter()
            .enumerate()
            .map(|(id, ag)| AgentState {
                agent_id: id as u32,
                o_scaled: ag.o * pop.scale_factor,
                a: decay_unchecked(ag.a, b, (t - ag.last_event).max(0.0)),
                i_level: ag.i_level,
            })
            .collect(),
    }
}

pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationOutput> {
    run_simulation_observed(config, |_| {})
}

/// Runs the event-driven simulation, calling `observer` after every event.
///
/// Events are processed in global time order with ties broken by agent id,
/// each with a partner drawn uniformly from the other agents.
pub fn run_simulation_observed<F>(
    config: &SimulationConfig,
    mut observer: F,
) -> Result<SimulationOutput>
where
    F: FnMut(&EventRecord),
{
    let mut pop = init_population(config)?;
    let schedule = build_schedule(config)?;
    let mut events: Vec<(f64, u32)> = schedule
        .iter()
        .enumerate()
        .flat_map(|(id, times)| times.iter().map(move |&t| (t, id as u32)))
        .collect();
    events.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    let b = config.decay_rate();
    let n = config.n_agents;
    let mut rng = stream_rng(config.seed, Stream::Interaction);
    let mut snapshots = vec![snapshot(&pop, 0.0, b)];
    let mut next_snapshot = config.snapshot_interval_seconds;

    for &(t, id) in &events {
        if let (Some(dt), Some(at)) = (config.snapshot_interval_seconds, next_snapshot.as_mut()) {
            while t > *at {
                snapshots.push(snapshot(&pop, *at, b));
                *at += dt;
            }
        }
        let draw = rng.random_range(0..n - 1);
        let partner_id = if draw >= id { draw + 1 } else { draw };
        let agent = pop.agents[id as usize];
        let partner = pop.agents[partner_id as usize];
        let (updated, incoming) =
            step_event(&agent, &partner, t, config, pop.scale_factor, &mut rng)?;
        debug_assert!((0.0..=config.params.a_max).contains(&updated.a));
        debug_assert!(updated.i_level.abs() <= 1.0);
        pop.agents[id as usize] = updated;
        observer(&EventRecord {
            t,
            agent_id: id,
            partner_id,
            a_before: decay_unchecked(agent.a, b, t - agent.last_event),
            a_after: updated.a,
            incoming,
            i_level: updated.i_level,
            o_scaled: updated.o * pop.scale_factor,
        });
    }

    let end = events.last().map_or(0.0, |e| e.0);
    if snapshots.last().is_none_or(|s| s.sim_time_seconds < end) {
        snapshots.push(snapshot(&pop, end, b));
    }

    let p = polarization_number(&config.social()?);
    Ok(SimulationOutput {
        snapshots,
        p,
        regime: classify_regime(p, &config.params).regime,
        scale_factor: pop.scale_factor,
    })
}

/// Fraction of agents with `|o_scaled| < band_halfwidth`.
pub fn neutral_band_occupancy(snapshot: &Snapshot, band_halfwidth: f64) -> Result<f64> {
    if !(band_halfwidth > 0.0 && band_halfwidth < 1.0) {
        return Err(Error::invalid(format!(
            "band half-width must lie in (0, 1), got {band_halfwidth}"
        )));
    }
    if snapshot.agents.is_empty() {
        return Err(Error::invalid("snapshot has no agents"));
    }
    let inside = snapshot
        .agents
        .iter()
        .filter(|a| a.o_scaled.abs() < band_halfwidth)
        .count();
    Ok(inside as f64 / snapshot.agents.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusp::saddle_node;

    const P: PsychParams = PsychParams {
        k: 0.2,
        a_max: 2.0,
        a_crit: 0.5,
    };

    fn agent(o: f64, a: f64, i_level: f64) -> Agent {
        Agent {
            o,
            a,
            i_level,
            last_event: 0.0,
        }
    }

    #[test]
    fn init_is_deterministic() {
        let c = SimulationConfig::new(100, 3600.0);
        let a = init_population(&c).unwrap();
        assert_eq!(a, init_population(&c).unwrap());
        assert!(a.agents.iter().all(|ag| ag.a == 1.0));
        assert!(a
            .agents
            .iter()
            .all(|ag| (ag.o * a.scale_factor).abs() < 1.0 && ag.i_level.abs() < 1.0));
    }

    #[test]
    fn init_mean_opinion_near_zero() {
        // Std of the mean of 500 U(-1,1) draws is 0.026; 0.1 is a ~4σ bound.
        let c = SimulationConfig::new(500, 3600.0);
        let pop = init_population(&c).unwrap();
        let mean = pop
            .agents
            .iter()
            .map(|a| a.o * pop.scale_factor)
            .sum::<f64>()
            / 500.0;
        assert!(mean.abs() < 0.1, "{mean}");
    }

    #[test]
    fn smoothing_examples() {
        let mut c = SimulationConfig::new(10, 3600.0);
        c.exchange_rule = ExchangeRule::PartnerOpinion;
        let s = compute_scale_factor(&P);
        let mut rng = stream_rng(0, Stream::Interaction);

        c.smoothing_lambda = 1.0;
        let partner = agent(1.0 / s, 1.0, 0.0);
        let (out, incoming) =
            step_event(&agent(0.0, 1.0, -0.4), &partner, 10.0, &c, s, &mut rng).unwrap();
        assert!((incoming - 1.0).abs() < 1e-15);
        assert!((out.i_level - 1.0).abs() < 1e-15);

        c.smoothing_lambda = 0.3;
        let partner = agent(-1.0 / s, 1.0, 0.0);
        let (out, _) = step_event(&agent(0.0, 1.0, 0.0), &partner, 10.0, &c, s, &mut rng).unwrap();
        assert!((out.i_level + 0.3).abs() < 1e-15);
    }

    #[test]
    fn attention_decays_then_spikes() {
        let c = SimulationConfig::new(100, 21600.0);
        let s = compute_scale_factor(&P);
        let mut rng = stream_rng(0, Stream::Interaction);
        let a0 = agent(0.5, 1.0, 0.1);
        let (out, _) = step_event(&a0, &a0, 21600.0, &c, s, &mut rng).unwrap();
        let expected = spike_unchecked((-0.864_f64).exp(), &P);
        assert!((out.a - expected).abs() < 1e-15);
        assert_eq!(out.last_event, 21600.0);
        assert!(step_event(&out, &a0, 100.0, &c, s, &mut rng).is_err());
    }

    #[test]
    fn stable_root_is_kept_when_information_is_unchanged() {
        let mut c = SimulationConfig::new(10, 3600.0);
        c.exchange_rule = ExchangeRule::PartnerOpinion;
        c.events_per_agent = 0;
        let s = compute_scale_factor(&P);
        // Spike from A = 0.4 at zero elapsed time stays at 0.72; partner echoes I.
        let a = spike_unchecked(0.4, &P);
        let i = 0.2;
        let root = update_opinion_quasistatic(0.0, a, i, &P);
        let me = agent(root, 0.4, i);
        let partner = agent(i / s, 0.4, 0.0);
        let mut rng = stream_rng(0, Stream::Interaction);
        let (out, _) = step_event(&me, &partner, 0.0, &c, s, &mut rng).unwrap();
        assert!((out.i_level - i).abs() < 1e-15);
        assert!((out.o - root).abs() < 1e-15);
    }

    #[test]
    fn quasistatic_below_fold_tracks_unique_root() {
        let o = update_opinion_quasistatic(-1.0, 0.3, 0.2, &P);
        let ss = steady_states(0.3, 0.2, &P);
        assert_eq!(ss.len(), 1);
        assert_eq!(o, ss[0].o);
    }

    #[test]
    fn quasistatic_jumps_past_saddle_node() {
        let sn = saddle_node(1.8, &P).unwrap();
        let upper = steady_states(1.8, 0.0, &P)[2].o;
        let inside = update_opinion_quasistatic(upper, 1.8, -sn.i_sn + 1e-6, &P);
        assert!(inside > 0.0, "still on the upper branch inside the fold");
        let past = update_opinion_quasistatic(inside, 1.8, -sn.i_sn - 1e-6, &P);
        assert!(past < -2.0 * sn.o_sn + 1e-3);
    }

    #[test]
    fn quasistatic_tie_breaks() {
        // At I = 0 the separatrix is O = 0.
        let up = update_opinion_quasistatic(0.0, 2.0, 0.0, &P);
        assert!((up - 1.5_f64.sqrt()).abs() < 1e-14);
        let i = 0.1;
        let mid = steady_states(2.0, i, &P)[1].o;
        assert!(update_opinion_quasistatic(mid, 2.0, i, &P) > 0.0);
        let mid = steady_states(2.0, -i, &P)[1].o;
        assert!(update_opinion_quasistatic(mid, 2.0, -i, &P) < 0.0);
    }

    #[test]
    fn zero_events_reproduce_initialisation() {
        let mut c = SimulationConfig::new(2, 3600.0);
        c.events_per_agent = 0;
        let out = run_simulation(&c).unwrap();
        let pop = init_population(&c).unwrap();
        for snap in &out.snapshots {
            for (st, ag) in snap.agents.iter().zip(&pop.agents) {
                assert_eq!(st.o_scaled, ag.o * pop.scale_factor);
                assert_eq!(st.i_level, ag.i_level);
                assert_eq!(st.a, 1.0);
            }
        }
    }

    #[test]
    fn snapshots_follow_interval() {
        let mut c = SimulationConfig::new(5, 100.0);
        c.events_per_agent = 10;
        c.snapshot_interval_seconds = Some(250.0);
        let out = run_simulation(&c).unwrap();
        let times: Vec<f64> = out.snapshots.iter().map(|s| s.sim_time_seconds).collect();
        assert_eq!(&times[..4], &[0.0, 250.0, 500.0, 750.0]);
        assert!(times.windows(2).all(|w| w[0] < w[1]));
        assert!(out.snapshots.iter().all(|s| s.agents.len() == 5));
    }

    #[test]
    fn state_bounds_hold_at_every_event() {
        for rule in [ExchangeRule::PartnerOpinion, ExchangeRule::UniformRandom] {
            let mut c = SimulationConfig::new(30, 600.0);
            c.exchange_rule = rule;
            c.jitter_w = 0.2;
            c.events_per_agent = 50;
            let mut seen = 0;
            run_simulation_observed(&c, |ev| {
                seen += 1;
                assert!(ev.a_after >= 0.0 && ev.a_after <= 2.0);
                assert!(ev.a_before <= ev.a_after);
                assert!(ev.i_level.abs() <= 1.0);
                assert!(ev.o_scaled.abs() <= 1.0 + 1e-12);
                assert_ne!(ev.agent_id, ev.partner_id);
            })
            .unwrap();
            assert_eq!(seen, 30 * 50);
        }
    }

    #[test]
    fn occupancy_examples() {
        let snap = |os: &[f64]| Snapshot {
            sim_time_seconds: 0.0,
            agents: os
                .iter()
                .enumerate()
                .map(|(i, &o)| AgentState {
                    agent_id: i as u32,
                    o_scaled: o,
                    a: 1.0,
                    i_level: 0.0,
                })
                .collect(),
        };
        assert_eq!(
            neutral_band_occupancy(&snap(&[1.0, -1.0, 1.0]), 0.1).unwrap(),
            0.0
        );
        assert_eq!(
            neutral_band_occupancy(&snap(&[0.05, -1.0]), 0.1).unwrap(),
            0.5
        );
        assert!(neutral_band_occupancy(&snap(&[0.0]), 1.0).is_err());
        assert!(neutral_band_occupancy(&snap(&[0.0]), 0.0).is_err());
    }

    #[test]
    fn uniform_initialisation_occupancy() {
        // 2000 uniform draws: occupancy 0.1 with std 0.0067.
        let c = SimulationConfig::new(2000, 3600.0);
        let mut c0 = c.clone();
        c0.events_per_agent = 0;
        let out = run_simulation(&c0).unwrap();
        let occ = neutral_band_occupancy(out.final_snapshot(), 0.1).unwrap();
        assert!((occ - 0.1).abs() < 0.03, "{occ}");
    }
}
