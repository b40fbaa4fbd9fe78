use opinion_cusp::abm::{
    run_simulation, run_simulation_observed, update_opinion_quasistatic, OpinionMode,
    SimulationConfig,
};
use opinion_cusp::attention::{envelope, envelope_of_p, spike};
use opinion_cusp::cusp::{
    fold_discriminant, integrate_opinion, saddle_node, steady_states, Stability,
};
use opinion_cusp::polarization::{critical_p1, critical_p2};
use opinion_cusp::{PsychParams, SocialParams};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = PsychParams> {
    (0.01..0.99f64, 0.1..10.0f64, 0.01..0.99f64)
        .prop_map(|(k, a_max, frac)| PsychParams::new(k, a_max, frac * a_max).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn root_count_follows_discriminant(a in 0.0..=2.0f64, i in -1.0..=1.0f64) {
        let p = PsychParams::default();
        let roots = steady_states(a, i, &p);
        let disc = fold_discriminant(a, i, &p);
        if disc > 1e-12 {
            prop_assert_eq!(roots.len(), 3);
            let stab: Vec<_> = roots.iter().map(|s| s.stability).collect();
            prop_assert_eq!(stab, vec![Stability::Stable, Stability::Unstable, Stability::Stable]);
        } else if disc < -1e-12 {
            prop_assert_eq!(roots.len(), 1);
            prop_assert_eq!(roots[0].stability, Stability::Stable);
        }
        for s in &roots {
            prop_assert!(s.residual(&p).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn integration_lands_on_predicted_attractor(
        a in 0.0..=2.0f64,
        i in -1.0..=1.0f64,
        o0 in -1.6..1.6f64,
    ) {
        let p = PsychParams::default();
        let roots = steady_states(a, i, &p);
        // Stay clear of the separatrix and of the fold edge, where relaxation
        // is arbitrarily slow.
        prop_assume!(fold_discriminant(a, i, &p).abs() > 0.05);
        if roots.len() == 3 {
            prop_assume!((o0 - roots[1].o).abs() > 0.05);
        }
        let expected = update_opinion_quasistatic(o0, a, i, &p);
        let rate = 3.0 * expected * expected - (a - p.a_crit);
        prop_assume!(rate > 0.05);
        // Extra time covers the slow passage past the ghost of a vanished pair.
        let horizon = 100.0 + 30.0 / rate;
        let series = integrate_opinion(o0, |_| a, |_| i, &p, 0.01, horizon).unwrap();
        prop_assert!((series.final_value() - expected).abs() < 1e-6,
            "o0={} a={} i={} got {} want {}", o0, a, i, series.final_value(), expected);
    }

    #[test]
    fn duality_at_critical_values(p in params()) {
        let p2 = critical_p2(&p);
        prop_assert!((envelope_of_p(&p, p2).unwrap().a_lower - p.a_crit).abs() < 1e-9);
        if let Some(p1) = critical_p1(&p).finite() {
            prop_assert!((envelope_of_p(&p, p1).unwrap().a_upper - p.a_crit).abs() < 1e-9);
            prop_assert!(p1 > p2);
        } else {
            prop_assert!(p.k * p.a_max >= p.a_crit);
        }
    }

    #[test]
    fn envelope_depends_only_on_p(tau_h in 0.1..500.0f64, n in 2u32..2000, lambda in 1u32..5) {
        let p = PsychParams::default();
        let base = envelope(&p, &SocialParams::from_hours(tau_h, n).unwrap()).unwrap();
        let l = f64::from(lambda);
        let scaled = envelope(&p, &SocialParams::from_hours(tau_h * l * l, n * lambda).unwrap()).unwrap();
        prop_assert!((base.a_upper - scaled.a_upper).abs() < 1e-12);
        prop_assert!((base.a_lower - scaled.a_lower).abs() < 1e-12);
        prop_assert!(base.a_lower < base.a_upper && base.a_upper <= p.a_max);
    }

    #[test]
    fn spike_stays_in_range(p in params(), frac in 0.0..=1.0f64) {
        let a = frac * p.a_max;
        let after = spike(a, &p).unwrap();
        prop_assert!(after >= a && after <= p.a_max);
    }

    #[test]
    fn saddle_edges_are_double_roots(a in 0.51..2.0f64) {
        let p = PsychParams::default();
        let sn = saddle_node(a, &p).unwrap();
        // Just inside the edge there are three roots, just outside one.
        prop_assert_eq!(steady_states(a, sn.i_sn * (1.0 - 1e-6), &p).len(), 3);
        prop_assert_eq!(steady_states(a, sn.i_sn * (1.0 + 1e-6), &p).len(), 1);
    }
}

#[test]
fn opinion_modes_agree_on_small_instance() {
    for seed in 0..5 {
        let mut quasi = SimulationConfig::new(10, 3600.0);
        quasi.events_per_agent = 2;
        quasi.seed = seed;
        let mut integ = quasi.clone();
        integ.opinion_mode = OpinionMode::Integrate {
            dt: 0.01,
            settle_seconds: 200.0,
        };
        let a = run_simulation(&quasi).unwrap();
        let b = run_simulation(&integ).unwrap();
        for (x, y) in a
            .final_snapshot()
            .agents
            .iter()
            .zip(&b.final_snapshot().agents)
        {
            assert!(
                (x.o_scaled - y.o_scaled).abs() < 1e-3,
                "seed {seed} agent {}",
                x.agent_id
            );
            assert_eq!(x.a, y.a);
        }
    }
}

#[test]
fn runs_are_deterministic_and_seed_sensitive() {
    let mut config = SimulationConfig::new(40, 7200.0);
    config.jitter_w = 0.2;
    config.events_per_agent = 30;
    config.snapshot_interval_seconds = Some(20_000.0);
    config.seed = 3;
    let a = run_simulation(&config).unwrap();
    let b = run_simulation(&config).unwrap();
    assert_eq!(a, b);
    config.seed = 4;
    assert_ne!(
        run_simulation(&config).unwrap().final_snapshot(),
        a.final_snapshot()
    );
}

#[test]
fn abm_attention_settles_on_envelope() {
    let mut config = SimulationConfig::new(100, 21600.0);
    config.events_per_agent = 40;
    let social = config.social().unwrap();
    let env = envelope(&config.params, &social).unwrap();
    let mut seen = vec![0u32; 100];
    let mut worst: f64 = 0.0;
    run_simulation_observed(&config, |ev| {
        let id = ev.agent_id as usize;
        seen[id] += 1;
        // The first event ends a partial cycle, so cycles count from there.
        if seen[id] > 21 {
            worst = worst
                .max((ev.a_after - env.a_upper).abs())
                .max((ev.a_before - env.a_lower).abs());
        }
    })
    .unwrap();
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn state_bounds_hold_at_every_event() {
    let mut config = SimulationConfig::new(50, 900.0);
    config.jitter_w = 0.2;
    config.events_per_agent = 100;
    let a_max = config.params.a_max;
    let mut events = 0;
    run_simulation_observed(&config, |ev| {
        events += 1;
        assert!((0.0..=a_max).contains(&ev.a_before));
        assert!((0.0..=a_max).contains(&ev.a_after));
        assert!(ev.i_level.abs() <= 1.0);
        assert!(ev.o_scaled.abs() <= 1.0 + 1e-12);
        assert_ne!(ev.agent_id, ev.partner_id);
    })
    .unwrap();
    assert_eq!(events, 5000);
}
