//! Agent-based runs in the polarized and non-polarized regimes.
//!
//! cargo run --release --example abm_regimes -- [seed]

use opinion_cusp::abm::{neutral_band_occupancy, run_simulation, SimulationConfig};

fn histogram(values: &[f64]) -> String {
    let mut bins = [0usize; 10];
    for v in values {
        let b = (((v + 1.0) / 0.2).floor() as usize).min(9);
        bins[b] += 1;
    }
    let max = *bins.iter().max().unwrap_or(&1).max(&1);
    bins.iter()
        .enumerate()
        .map(|(b, &c)| {
            let lo = -1.0 + 0.2 * b as f64;
            format!(
                "  [{lo:+.1}, {:+.1}) {:<40} {c}\n",
                lo + 0.2,
                "#".repeat(c * 40 / max)
            )
        })
        .collect()
}

fn main() -> opinion_cusp::Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map_or(0, |s| s.parse().expect("seed"));
    for (n, tau_h) in [(500, 5.0), (100, 100.0)] {
        let mut config = SimulationConfig::new(n, tau_h * 3600.0);
        config.seed = seed;
        let out = run_simulation(&config)?;
        let last = out.final_snapshot();
        let opinions: Vec<f64> = last.agents.iter().map(|a| a.o_scaled).collect();
        println!(
            "N = {n}, tau = {tau_h} h: P = {:.4} ({}), neutral band occupancy = {:.3}",
            out.p.value(),
            out.regime,
            neutral_band_occupancy(last, 0.1)?
        );
        print!("{}", histogram(&opinions));
    }
    Ok(())
}
