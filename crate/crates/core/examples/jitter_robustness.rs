//! How far jittered arrival times push attention peaks and troughs away from
//! the periodic envelope.
//!
//! cargo run --example jitter_robustness

use opinion_cusp::abm::{jitter_envelope_study, JitterStudy};

fn main() -> opinion_cusp::Result<()> {
    println!(
        "{:>4} {:>5} {:>10} {:>10} {:>10} {:>10}",
        "w", "seed", "rms up", "rms low", "max up", "max low"
    );
    for w in [0.0, 0.05, 0.1, 0.2] {
        for seed in 0..3 {
            let mut study = JitterStudy::new(6.0 * 3600.0, 100, w, 500);
            study.seed = seed;
            let r = jitter_envelope_study(&study)?;
            println!(
                "{w:>4} {seed:>5} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
                r.rms_upper_deviation,
                r.rms_lower_deviation,
                r.max_upper_deviation,
                r.max_lower_deviation
            );
        }
    }
    Ok(())
}
