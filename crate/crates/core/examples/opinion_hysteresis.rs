//! Integrates the opinion equation while information sweeps slowly up and
//! back down at fixed attention. Inside the fold the opinion stays on its
//! branch until the saddle node, then jumps.
//!
//! cargo run --example opinion_hysteresis -- [attention]

use opinion_cusp::cusp::{integrate_opinion, saddle_node, DEFAULT_DT};
use opinion_cusp::PsychParams;

fn main() -> opinion_cusp::Result<()> {
    let a: f64 = std::env::args()
        .nth(1)
        .map_or(1.8, |s| s.parse().expect("attention"));
    let params = PsychParams::default();
    let period = 4000.0;
    // Triangle wave -1 -> 1 -> -1.
    let info = move |t: f64| {
        let x = (t / period).fract();
        if x < 0.5 {
            -1.0 + 4.0 * x
        } else {
            3.0 - 4.0 * x
        }
    };
    let series = integrate_opinion(-1.2, |_| a, info, &params, DEFAULT_DT, period)?;

    if let Some(sn) = saddle_node(a, &params) {
        println!("A = {a}: fold spans I in [{:.4}, {:.4}]", -sn.i_sn, sn.i_sn);
    } else {
        println!("A = {a}: no fold, opinion follows I smoothly");
    }
    // A branch switch crosses O = 0; away from the fold edges O keeps its sign.
    for w in series.points.windows(2) {
        if w[0].1.signum() != w[1].1.signum() {
            println!(
                "branch switch at t = {:.1}, I = {:+.4}: O {:+.4} -> {:+.4}",
                w[1].0,
                info(w[1].0),
                w[0].1,
                w[1].1
            );
        }
    }
    for &(t, o) in series.points.iter().step_by(25_000) {
        println!("t = {t:>7.1}  I = {:+.3}  O = {o:+.4}", info(t));
    }
    Ok(())
}
