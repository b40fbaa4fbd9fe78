//! Attention under strictly periodic information arrivals: the per-cycle
//! peaks and troughs close in on the periodic envelope.
//!
//! cargo run --example attention_attractor -- [tau_hours] [n]

use opinion_cusp::attention::{
    envelope, periodic_fixed_point, simulate_attention, uniform_schedule,
};
use opinion_cusp::{PsychParams, SocialParams};

fn main() -> opinion_cusp::Result<()> {
    let mut args = std::env::args().skip(1);
    let tau_hours: f64 = args.next().map_or(6.0, |s| s.parse().expect("tau_hours"));
    let n: u32 = args.next().map_or(100, |s| s.parse().expect("n"));

    let params = PsychParams::default();
    let social = SocialParams::from_hours(tau_hours, n)?;
    let env = envelope(&params, &social)?;
    println!(
        "tau = {tau_hours} h, N = {n}, b = {:.3e} /s",
        social.decay_rate(&params)
    );
    println!(
        "envelope: A_UP = {:.7}, A_LP = {:.7}",
        env.a_upper, env.a_lower
    );
    println!(
        "fixed point A_0tau = {:.7}",
        periodic_fixed_point(&params, &social)?
    );

    for a0 in [0.0, 1.0, 2.0] {
        let horizon = 12.0 * social.tau_seconds;
        let series = simulate_attention(
            a0,
            &params,
            &social,
            &uniform_schedule(social.tau_seconds, horizon),
            horizon,
        )?;
        println!("\nA0 = {a0}");
        println!("{:>5} {:>10} {:>10}", "cycle", "trough", "peak");
        for (c, ev) in series.arrivals.iter().enumerate() {
            println!("{:>5} {:>10.7} {:>10.7}", c + 1, ev.before, ev.after);
        }
    }
    Ok(())
}
