use rand::Rng;
use rand_distr::StandardNormal;

use super::config::{stream_rng, SimulationConfig, Stream};
use crate::error::Result;

/// Inter-arrival gap `τ + e` with `e ~ Normal(0, (wτ)²)`, redrawn until positive.
pub fn sample_gap<R: Rng + ?Sized>(rng: &mut R, tau: f64, w: f64) -> f64 {
    if w == 0.0 {
        return tau;
    }
    loop {
        let e: f64 = rng.sample(StandardNormal);
        let gap = tau + w * tau * e;
        if gap > 0.0 {
            return gap;
        }
    }
}

/// Arrival times for one agent: a uniform phase in `[0, τ)` followed by
/// `count - 1` sampled gaps.
pub fn agent_schedule<R: Rng + ?Sized>(rng: &mut R, tau: f64, w: f64, count: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(count as usize);
    if count == 0 {
        return out;
    }
    let mut t = rng.random::<f64>() * tau;
    out.push(t);
    for _ in 1..count {
        t += sample_gap(rng, tau, w);
        out.push(t);
    }
    out
}

/// Per-agent event times, deterministic in `config.seed`.
pub fn build_schedule(config: &SimulationConfig) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    let mut rng = stream_rng(config.seed, Stream::Schedule);
    Ok((0..config.n_agents as usize)
        .map(|j| {
            agent_schedule(
                &mut rng,
                config.tau_for(j),
                config.jitter_w,
                config.events_per_agent,
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unjittered_gaps_are_exact() {
        let mut c = SimulationConfig::new(20, 18000.0);
        c.events_per_agent = 50;
        let sched = build_schedule(&c).unwrap();
        assert_eq!(sched.len(), 20);
        for times in &sched {
            assert_eq!(times.len(), 50);
            assert!(times[0] >= 0.0 && times[0] < 18000.0);
            for w in times.windows(2) {
                assert!((w[1] - w[0] - 18000.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn jittered_gap_spread() {
        let mut rng = stream_rng(3, Stream::Schedule);
        let gaps: Vec<f64> = (0..100_000)
            .map(|_| sample_gap(&mut rng, 21600.0, 0.1))
            .collect();
        let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
        let var = gaps.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (gaps.len() - 1) as f64;
        let sd = var.sqrt();
        assert!((sd - 2160.0).abs() < 0.05 * 2160.0, "{sd}");
        assert!((mean - 21600.0).abs() < 50.0);
    }

    #[test]
    fn wide_jitter_gaps_stay_positive() {
        let mut rng = stream_rng(1, Stream::Schedule);
        assert!((0..100_000).all(|_| sample_gap(&mut rng, 100.0, 0.2) > 0.0));
        // Large w forces frequent resampling.
        assert!((0..10_000).all(|_| sample_gap(&mut rng, 100.0, 2.0) > 0.0));
    }

    #[test]
    fn schedule_is_seeded() {
        let mut c = SimulationConfig::new(5, 100.0);
        c.jitter_w = 0.2;
        c.seed = 11;
        assert_eq!(build_schedule(&c).unwrap(), build_schedule(&c).unwrap());
        let other = SimulationConfig {
            seed: 12,
            ..c.clone()
        };
        assert_ne!(build_schedule(&c).unwrap(), build_schedule(&other).unwrap());
    }

    #[test]
    fn per_agent_periods() {
        let mut c = SimulationConfig::new(2, 100.0);
        c.tau_per_agent = Some(vec![10.0, 1000.0]);
        c.events_per_agent = 3;
        let s = build_schedule(&c).unwrap();
        assert!((s[0][2] - s[0][1] - 10.0).abs() < 1e-12);
        assert!((s[1][2] - s[1][1] - 1000.0).abs() < 1e-12);
    }
}
